//! Timing grid over `(n, d)` for the solver variants, written as CSV.

use std::time::Instant;

use tnf_core::error::TnfError;
use tnf_core::polyring::BasisKind;
use tnf_core::rootfind::CokernelMethod;
use tnf_core::solver::{solve, ColumnMode, PathChoice, SolveConfig};
use tnf_core::verify::random_dense_system;

/// Largest row support the grid will attempt.
pub const MAX_DIM_V: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Tnf,
    Fm,
    Dbd,
}

impl Variant {
    fn name(self) -> &'static str {
        match self {
            Variant::Tnf => "tnf",
            Variant::Fm => "fm",
            Variant::Dbd => "dbd",
        }
    }

    fn config(self, seed: u64) -> SolveConfig {
        let mut c = SolveConfig {
            path: PathChoice::Generic,
            seed,
            max_basis_dim: Some(MAX_DIM_V),
            ..SolveConfig::default()
        };
        match self {
            Variant::Tnf => {}
            Variant::Fm => c.columns = ColumnMode::Fm,
            Variant::Dbd => c.cokernel = CokernelMethod::Dbd,
        }
        c
    }
}

fn bad(msg: String) -> TnfError {
    TnfError::Parse(msg)
}

/// Parses `"2:5-15,3:4"` into `[(2, 5), ..., (2, 15), (3, 4)]`. Empty input is an empty grid.
pub fn parse_grid(spec: &str) -> Result<Vec<(usize, usize)>, TnfError> {
    let mut cells = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (n, ds) = part
            .split_once(':')
            .ok_or_else(|| bad(format!("grid entry '{}' is not n:d or n:dmin-dmax", part)))?;
        let n: usize = n.trim().parse().map_err(|_| bad(format!("bad n in '{}'", part)))?;
        let (lo, hi) = match ds.split_once('-') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (ds.trim(), ds.trim()),
        };
        let lo: usize = lo.parse().map_err(|_| bad(format!("bad degree in '{}'", part)))?;
        let hi: usize = hi.parse().map_err(|_| bad(format!("bad degree in '{}'", part)))?;
        if n == 0 || lo == 0 || lo > hi {
            return Err(bad(format!("empty or invalid range in '{}'", part)));
        }
        cells.extend((lo..=hi).map(|d| (n, d)));
    }
    Ok(cells)
}

pub fn parse_variants(spec: &str) -> Result<Vec<Variant>, TnfError> {
    spec.split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| match v {
            "tnf" => Ok(Variant::Tnf),
            "fm" => Ok(Variant::Fm),
            "dbd" => Ok(Variant::Dbd),
            other => Err(bad(format!("unknown variant '{}'", other))),
        })
        .collect()
}

/// Runs every variant on a random dense system per grid cell. Failures and skipped
/// cells are reported in the `status` column rather than aborting the grid.
pub fn run(cells: &[(usize, usize)], variants: &[Variant], seed: u64) -> Result<String, TnfError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| TnfError::Io(e.to_string());
    w.write_record(["n", "d", "variant", "t_ms", "max_residual", "delta_found", "status"])
        .map_err(io)?;
    for &(n, d) in cells {
        let system = random_dense_system(n, d, seed, BasisKind::Monomial)?;
        for &v in variants {
            let start = Instant::now();
            let result = solve(&system, &v.config(seed));
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let row = match result {
                Ok(sol) => vec![
                    n.to_string(),
                    d.to_string(),
                    v.name().to_string(),
                    format!("{:.3}", ms),
                    format!("{:.3e}", sol.roots.max_residual()),
                    sol.roots.roots.len().to_string(),
                    "ok".to_string(),
                ],
                Err(e) => {
                    let status = match e {
                        TnfError::TooLarge { .. } => format!("skipped: {}", e),
                        _ => format!("failed: {}", e),
                    };
                    vec![
                        n.to_string(),
                        d.to_string(),
                        v.name().to_string(),
                        String::new(),
                        String::new(),
                        String::new(),
                        status,
                    ]
                }
            };
            w.write_record(&row).map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| TnfError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("").unwrap(), vec![]);
        assert_eq!(parse_grid("2:3-5, 3:2").unwrap(), vec![(2, 3), (2, 4), (2, 5), (3, 2)]);
        assert!(parse_grid("2-3").is_err());
        assert!(parse_grid("2:5-3").is_err());
    }

    #[test]
    fn empty_grid_is_header_only() {
        let csv = run(&[], &[Variant::Tnf], 0).unwrap();
        assert_eq!(csv, "n,d,variant,t_ms,max_residual,delta_found,status\n");
    }

    #[test]
    fn oversized_cells_are_skipped() {
        // n = 3, d = 40 has a row support far above the guard.
        let csv = run(&[(3, 40)], &[Variant::Tnf], 0).unwrap();
        assert!(csv.lines().nth(1).unwrap().contains("skipped"));
    }
}
