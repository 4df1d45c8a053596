//! JSON and binary renderings of solver output.

use serde::Serialize;
use tnf_core::linalg::CMat;
use tnf_core::rootfind::SolvePath;
use tnf_core::solver::Solution;

#[derive(Serialize)]
struct RootOut {
    z: Vec<[f64; 2]>,
    residual: f64,
    refined: bool,
}

#[derive(Serialize)]
struct MetaOut<'a> {
    delta: usize,
    path: SolvePath,
    /// `null` when the cut is structural (infinite ratio).
    rank_gap: Option<f64>,
    seed: u64,
    timings_ms: &'a std::collections::BTreeMap<String, f64>,
}

#[derive(Serialize)]
struct SolutionOut<'a> {
    roots: Vec<RootOut>,
    meta: MetaOut<'a>,
}

/// The solve report. Timings are only included on request so that output is
/// byte-identical across runs with the same input, configuration and seed.
pub fn solution_json(sol: &Solution, with_timings: bool) -> String {
    let empty = std::collections::BTreeMap::new();
    let out = SolutionOut {
        roots: sol
            .roots
            .roots
            .iter()
            .map(|r| RootOut {
                z: r.z.iter().map(|c| [c.re, c.im]).collect(),
                residual: r.residual,
                refined: r.refined,
            })
            .collect(),
        meta: MetaOut {
            delta: sol.meta.delta,
            path: sol.meta.path,
            rank_gap: sol.meta.rank_gap.is_finite().then_some(sol.meta.rank_gap),
            seed: sol.meta.seed,
            timings_ms: if with_timings {
                &sol.meta.timings_ms
            } else {
                &empty
            },
        },
    };
    let mut s = serde_json::to_string_pretty(&out).expect("report serializes");
    s.push('\n');
    s
}

/// Row-major little-endian complex128: real and imaginary part of each entry in turn.
pub fn row_major_bytes(m: &CMat) -> Vec<u8> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols() * 16);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            out.extend_from_slice(&v.re.to_le_bytes());
            out.extend_from_slice(&v.im.to_le_bytes());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use tnf_core::c64;

    #[test]
    fn dump_layout() {
        let m = CMat::from_fn(2, 2, |i, j| c64::new((2 * i + j) as f64, -1.0));
        let b = row_major_bytes(&m);
        assert_eq!(b.len(), 64);
        let entry = |k: usize| f64::from_le_bytes(b[16 * k..16 * k + 8].try_into().unwrap());
        assert_eq!((entry(0), entry(1), entry(2), entry(3)), (0.0, 1.0, 2.0, 3.0));
    }
}
