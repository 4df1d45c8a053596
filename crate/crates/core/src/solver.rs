//! End-to-end solve: resultant, cokernel, normal form, roots, optional refinement.

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

use crate::cokernel::{cokernel_direct, dbd_run, CokernelMap};
use crate::error::{Result, TnfError};
use crate::linalg::{CMat, RankPolicy};
use crate::polyring::{binomial, substitute_linear, PolySystem};
use crate::random;
use crate::resmap::{build_resultant, dense_degree_bounds, fm_reduce};
use crate::rootfind::{
    roots_from_multiplication, solve_nongeneric, CokernelMethod, NongenericOptions,
    PencilReport, RootSet, SolvePath,
};
use crate::tnf::{build_multiplication_matrices, select_basis_qr, select_basis_svd, TnfData};
use crate::verify::{newton_refine, residual};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathChoice {
    Generic,
    Nongeneric,
    /// Generic first, falling back to the pencil when the normal form is not defined.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnMode {
    Full,
    Fm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisSelect {
    Qr,
    Svd,
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub path: PathChoice,
    pub cokernel: CokernelMethod,
    pub columns: ColumnMode,
    pub basis_select: BasisSelect,
    pub rho: Option<usize>,
    pub seed: u64,
    pub refine: bool,
    pub policy: RankPolicy,
    pub filter_residual: f64,
    /// Expected number of roots on the generic path; the Bezout number when `None`.
    pub delta: Option<usize>,
    /// Solve in randomly rotated coordinates and map the roots back.
    pub random_coordinates: bool,
    /// Refuse generic solves whose row support is larger than this.
    pub max_basis_dim: Option<usize>,
    /// Keep the (possibly compressed) resultant matrix in the solution.
    pub keep_resultant: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            path: PathChoice::Auto,
            cokernel: CokernelMethod::Direct,
            columns: ColumnMode::Full,
            basis_select: BasisSelect::Qr,
            rho: None,
            seed: 0,
            refine: false,
            policy: RankPolicy::default(),
            filter_residual: 1e-4,
            delta: None,
            random_coordinates: false,
            max_basis_dim: None,
            keep_resultant: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveMeta {
    pub delta: usize,
    pub path: SolvePath,
    pub rank_gap: f64,
    pub seed: u64,
    pub timings_ms: BTreeMap<String, f64>,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub roots: RootSet,
    pub meta: SolveMeta,
    pub tnf: Option<TnfData>,
    pub pencil: Option<PencilReport>,
    pub resultant: Option<CMat>,
}

struct Timer {
    timings: BTreeMap<String, f64>,
    last: Instant,
}

impl Timer {
    fn new() -> Self {
        Timer {
            timings: BTreeMap::new(),
            last: Instant::now(),
        }
    }

    fn lap(&mut self, name: &str) {
        let now = Instant::now();
        let ms = (now - self.last).as_secs_f64() * 1e3;
        *self.timings.entry(name.to_string()).or_default() += ms;
        self.last = now;
    }
}

fn generic_cokernel(
    system: &PolySystem,
    config: &SolveConfig,
    delta: usize,
    timer: &mut Timer,
    keep: &mut Option<CMat>,
) -> Result<CokernelMap> {
    let bounds = dense_degree_bounds(&system.degrees(), system.nvars())?;
    let dim_v = binomial((bounds.rho_v + system.nvars()) as u64, system.nvars() as u64);
    if let Some(limit) = config.max_basis_dim {
        if dim_v > limit as u128 {
            return Err(TnfError::TooLarge {
                dim: dim_v.min(usize::MAX as u128) as usize,
                limit,
            });
        }
    }
    match (config.cokernel, config.columns) {
        (CokernelMethod::Dbd, ColumnMode::Fm) => Err(TnfError::InvalidInput(
            "column compression applies to the direct cokernel only".into(),
        )),
        (CokernelMethod::Dbd, ColumnMode::Full) => {
            let c = dbd_run(system, bounds.rho_v, &config.policy, Some(delta))?;
            timer.lap("cokernel");
            Ok(c)
        }
        (CokernelMethod::Direct, cols) => {
            let mut res = build_resultant(system, bounds.rho_v, &bounds.rho_vi)?;
            if cols == ColumnMode::Fm {
                res = fm_reduce(&res, delta, config.seed)?;
            }
            timer.lap("resultant");
            if config.keep_resultant {
                *keep = Some(res.matrix.clone());
            }
            let c = cokernel_direct(&res, Some(delta), &config.policy)?;
            timer.lap("cokernel");
            Ok(c)
        }
    }
}

fn solve_generic(
    system: &PolySystem,
    config: &SolveConfig,
    timer: &mut Timer,
) -> Result<Solution> {
    let delta = config.delta.unwrap_or_else(|| system.bezout_number());
    let mut keep = None;
    let cok = generic_cokernel(system, config, delta, timer, &mut keep)?;
    let w = cok.support.interior();
    let basis = match config.basis_select {
        BasisSelect::Qr => select_basis_qr(&cok, &w, &config.policy)?,
        BasisSelect::Svd => select_basis_svd(&cok, &w, &config.policy)?.0,
    };
    let tnf = build_multiplication_matrices(&cok, basis)?;
    timer.lap("normal_form");
    let roots = roots_from_multiplication(system, &tnf, config.seed)?;
    timer.lap("eigen");
    Ok(Solution {
        roots,
        meta: SolveMeta {
            delta,
            path: SolvePath::Generic,
            rank_gap: cok.rank_gap,
            seed: config.seed,
            timings_ms: BTreeMap::new(),
            warnings: cok.warnings.clone(),
        },
        tnf: Some(tnf),
        pencil: None,
        resultant: keep,
    })
}

fn solve_pencil(system: &PolySystem, config: &SolveConfig, timer: &mut Timer) -> Result<Solution> {
    if config.columns == ColumnMode::Fm {
        return Err(TnfError::InvalidInput(
            "column compression needs a known root count, use the generic path".into(),
        ));
    }
    let opts = NongenericOptions {
        rho: config.rho,
        seed: config.seed,
        method: config.cokernel,
        policy: config.policy,
        filter_residual: config.filter_residual,
        ..NongenericOptions::default()
    };
    let (roots, report) = solve_nongeneric(system, &opts)?;
    timer.lap("pencil");
    Ok(Solution {
        meta: SolveMeta {
            delta: roots.roots.len(),
            path: SolvePath::Nongeneric,
            rank_gap: report.rank_gap,
            seed: config.seed,
            timings_ms: BTreeMap::new(),
            warnings: Vec::new(),
        },
        roots,
        tnf: None,
        pencil: Some(report),
        resultant: None,
    })
}

/// Random orthogonal matrix from the QR factorization of a Gaussian matrix.
fn random_rotation(n: usize, seed: u64) -> Vec<Vec<c64>> {
    let mut rng = random::rng(seed ^ 0x5eed_c00d);
    let g = CMat::from_fn(n, n, |_, _| c64::new(random::normal(&mut rng), 0.0));
    let q = g.qr().compute_Q();
    (0..n).map(|i| (0..n).map(|j| q[(i, j)]).collect()).collect()
}

/// Solves `system` according to `config`.
pub fn solve(system: &PolySystem, config: &SolveConfig) -> Result<Solution> {
    let mut timer = Timer::new();
    let rotation = config
        .random_coordinates
        .then(|| random_rotation(system.nvars(), config.seed));
    let work = match &rotation {
        Some(a) => {
            let polys = system
                .polys()
                .iter()
                .map(|p| substitute_linear(p, a))
                .collect();
            PolySystem::new(system.nvars(), system.kind(), polys)?
        }
        None => system.clone(),
    };
    let mut sol = match config.path {
        PathChoice::Generic => solve_generic(&work, config, &mut timer)?,
        PathChoice::Nongeneric => solve_pencil(&work, config, &mut timer)?,
        PathChoice::Auto if !work.is_square() => solve_pencil(&work, config, &mut timer)?,
        PathChoice::Auto => match solve_generic(&work, config, &mut timer) {
            Err(e @ (TnfError::NotCovering { .. } | TnfError::SingularBasis { .. })) => {
                log::info!("generic path unavailable ({}), switching to the pencil", e);
                solve_pencil(&work, config, &mut timer)?
            }
            other => other?,
        },
    };
    if let Some(a) = &rotation {
        for r in &mut sol.roots.roots {
            let y = r.z.clone();
            r.z = a.iter().map(|row| row.iter().zip(&y).map(|(x, v)| x * v).sum()).collect();
            r.residual = residual(system, &r.z)?;
        }
    }
    if config.refine {
        for r in &mut sol.roots.roots {
            let out = newton_refine(system, &r.z, 3)?;
            r.refined = out.refined;
            r.z = out.z;
            r.residual = out.residual;
        }
        timer.lap("refine");
    }
    sol.meta.timings_ms = timer.timings;
    Ok(sol)
}
