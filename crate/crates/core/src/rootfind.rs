//! Root extraction: simultaneous Schur triangularization of multiplication matrices, and
//! the eigenvalue pencil used when the system is not a generic complete intersection.

use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

use crate::cokernel::{cokernel_direct, dbd_start, dbd_step, CokernelMap, DbdState, Provenance};
use crate::error::{Result, TnfError};
use crate::linalg::{
    complex_schur, norm2, select_columns, singular_values, CMat, ColPivHouseholder,
    FactoredSquare, RankPolicy,
};
use crate::polyring::{Exponent, PolySystem};
use crate::random;
use crate::resmap::build_resultant_graded;
use crate::tnf::{shifted_columns, TnfData, MAX_BASIS_CONDITION};
use crate::verify::residual;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolvePath {
    Generic,
    Nongeneric,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub z: Vec<c64>,
    pub residual: f64,
    pub refined: bool,
    /// Roots whose eigenvalues of the random combination coincide share an id.
    pub cluster: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub path: SolvePath,
    /// Candidates rejected by the pencil or residual filters.
    pub filtered: usize,
}

impl RootSet {
    pub fn points(&self) -> Vec<Vec<c64>> {
        self.roots.iter().map(|r| r.z.clone()).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.roots.iter().map(|r| r.residual).fold(0.0, f64::max)
    }
}

/// Random real weights `g_1, ..., g_n` for the combination `sum g_i M_i`.
fn weights(nvars: usize, seed: u64) -> Vec<f64> {
    let mut rng = random::rng(seed);
    random::normals(&mut rng, nvars)
}

/// Random combinations tried before extracting coordinates.
const COMBINATION_CANDIDATES: usize = 3;

/// Number of clusters and the smallest distance between eigenvalues of different clusters.
/// A near collision in one combination shows up as a small separation; genuine multiple
/// roots collide in every combination and only lower the cluster count uniformly.
fn separation_score(ev: &[c64], ids: &[usize]) -> (usize, f64) {
    let mut distinct = ids.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let mut sep = f64::INFINITY;
    for i in 0..ev.len() {
        for j in 0..i {
            if ids[i] != ids[j] {
                sep = sep.min((ev[i] - ev[j]).norm());
            }
        }
    }
    let scale = 1.0 + ev.iter().map(|v| v.norm()).fold(0.0, f64::max);
    (distinct.len(), sep / scale)
}

fn cluster_ids(ev: &[c64]) -> Vec<usize> {
    let scale = 1.0 + ev.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let tol = 1e-6 * scale;
    let mut ids: Vec<usize> = (0..ev.len()).collect();
    for i in 0..ev.len() {
        for j in 0..i {
            if (ev[i] - ev[j]).norm() < tol {
                ids[i] = ids[j];
                break;
            }
        }
    }
    ids
}

/// Roots from the Schur form `M = Q T Q^H` of a random combination `M = sum g_i M_i`:
/// coordinate `j` of root `k` is `(Q^H M_j Q)_{kk}`. Of a few random combinations, the one
/// whose eigenvalues are best separated is used.
pub fn roots_from_multiplication(
    system: &PolySystem,
    tnf: &TnfData,
    seed: u64,
) -> Result<RootSet> {
    let delta = tnf.delta();
    let mut rng = random::rng(seed);
    let mut best: Option<((usize, f64), crate::linalg::Schur, Vec<usize>)> = None;
    for _ in 0..COMBINATION_CANDIDATES {
        let g = random::normals(&mut rng, tnf.mult.len());
        let mut m = CMat::zeros(delta, delta);
        for (gi, mi) in g.iter().zip(&tnf.mult) {
            m += mi * faer::Scale(c64::new(*gi, 0.0));
        }
        let schur = complex_schur(&m)?;
        let ev = schur.eigenvalues();
        let ids = cluster_ids(&ev);
        let score = separation_score(&ev, &ids);
        let better = match &best {
            None => true,
            Some((s, _, _)) => score.0 > s.0 || (score.0 == s.0 && score.1 > s.1),
        };
        if better {
            best = Some((score, schur, ids));
        }
    }
    let (_, schur, ids) = best.expect("at least one candidate combination");
    let q = &schur.q;
    let coords: Vec<Vec<c64>> = tnf
        .mult
        .iter()
        .map(|mj| {
            let t = q.adjoint() * mj * q;
            (0..delta).map(|k| t[(k, k)]).collect()
        })
        .collect();
    let roots = (0..delta)
        .map(|k| {
            let z: Vec<c64> = coords.iter().map(|c| c[k]).collect();
            Ok(Root {
                residual: residual(system, &z)?,
                z,
                refined: false,
                cluster: ids[k],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RootSet {
        roots,
        path: SolvePath::Generic,
        filtered: 0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CokernelMethod {
    Direct,
    Dbd,
}

#[derive(Clone, Debug)]
pub struct NongenericOptions {
    /// Degree `rho` with `W' = R_{<=rho}`; chosen automatically when `None`.
    pub rho: Option<usize>,
    pub seed: u64,
    pub method: CokernelMethod,
    pub policy: RankPolicy,
    /// Candidates with a larger residual are discarded.
    pub filter_residual: f64,
    /// Relative tolerance of the pencil eigenvector test.
    pub pencil_tol: f64,
}

impl Default for NongenericOptions {
    fn default() -> Self {
        NongenericOptions {
            rho: None,
            seed: 0,
            method: CokernelMethod::Direct,
            policy: RankPolicy::default(),
            filter_residual: 1e-4,
            pencil_tol: 1e-6,
        }
    }
}

/// What the pencil construction saw.
#[derive(Clone, Debug)]
pub struct PencilReport {
    pub rho: usize,
    /// Dimension of the cokernel of `Res_{rho+2}`.
    pub cokernel_dim: usize,
    pub rank_w: usize,
    pub rank_v: usize,
    /// The monomials `B'` picked by pivoted QR.
    pub basis: Vec<Exponent>,
    pub candidates: usize,
    pub rank_gap: f64,
}

/// Incremental source of cokernels of `Res_k` for increasing `k`.
struct CokernelSource<'a> {
    system: &'a PolySystem,
    method: CokernelMethod,
    policy: RankPolicy,
    dbd: Option<DbdState>,
}

impl<'a> CokernelSource<'a> {
    fn at(&mut self, k: usize) -> Result<CokernelMap> {
        match self.method {
            CokernelMethod::Direct => {
                let res = build_resultant_graded(self.system, k)?;
                cokernel_direct(&res, None, &self.policy)
            }
            CokernelMethod::Dbd => {
                let mut state = match self.dbd.take() {
                    Some(s) if s.k <= k => s,
                    _ => dbd_start(self.system, &self.policy)?,
                };
                while state.k < k {
                    state = dbd_step(self.system, &state, &self.policy, None)?;
                }
                let out = CokernelMap {
                    n: state.n.clone(),
                    support: state.support.clone(),
                    kind: self.system.kind(),
                    provenance: Provenance::DegreeByDegree,
                    rank_gap: state.min_gap,
                    warnings: state.warnings.clone(),
                };
                self.dbd = Some(state);
                Ok(out)
            }
        }
    }
}

fn restricted_rank(n: &CMat, cols: usize, policy: &RankPolicy) -> Result<usize> {
    let idx: Vec<usize> = (0..cols).collect();
    let sub = select_columns(n, &idx);
    let sv = singular_values(&sub)?;
    Ok(policy.rank(&sv, sub.nrows(), sub.ncols()))
}

/// Ranks of `N|_{W'}` and `N|_{V'}` for `N` on `R_{<=rho+2}`.
fn subspace_ranks(cok: &CokernelMap, rho: usize, policy: &RankPolicy) -> Result<(usize, usize)> {
    let s = &cok.support;
    let rw = restricted_rank(&cok.n, s.prefix_len(rho), policy)?;
    let rv = restricted_rank(&cok.n, s.prefix_len(rho + 1), policy)?;
    Ok((rw, rv))
}

/// Upper end of the automatic search for `rho`.
pub fn rho_cap(system: &PolySystem) -> usize {
    let total: usize = system.degrees().iter().sum();
    (total + 1).saturating_sub(system.nvars())
}

/// Solves a system whose quotient may be larger than its number of isolated roots.
///
/// With `V = R_{<=rho+2}`, `V' = R_{<=rho+1}` and `W' = R_{<=rho}`, the cokernel `N` of
/// `Res_{rho+2}` must satisfy `rank N|_{W'} = rank N|_{V'} = r`. Pivoted QR of `N|_{W'}`
/// then yields `r` monomials `B'` and a square pencil whose eigenvectors give the roots.
pub fn solve_nongeneric(
    system: &PolySystem,
    opts: &NongenericOptions,
) -> Result<(RootSet, PencilReport)> {
    let mut source = CokernelSource {
        system,
        method: opts.method,
        policy: opts.policy,
        dbd: None,
    };
    let (rho, cok, rank_w, rank_v) = match opts.rho {
        Some(rho) => {
            let cok = source.at(rho + 2)?;
            let (rw, rv) = subspace_ranks(&cok, rho, &opts.policy)?;
            if rw != rv {
                return Err(TnfError::SubspaceConditions {
                    rank_w: rw,
                    rank_v: rv,
                });
            }
            (rho, cok, rw, rv)
        }
        None => {
            let cap = rho_cap(system);
            let mut last = None;
            let mut found = None;
            for rho in 0..=cap {
                let cok = source.at(rho + 2)?;
                let (rw, rv) = subspace_ranks(&cok, rho, &opts.policy)?;
                if rw == rv {
                    found = Some((rho, cok, rw, rv));
                    break;
                }
                last = Some((rw, rv));
            }
            match found {
                Some(f) => f,
                None => {
                    let (rw, rv) = last.unwrap_or((0, 0));
                    return Err(TnfError::SubspaceConditions {
                        rank_w: rw,
                        rank_v: rv,
                    });
                }
            }
        }
    };
    let r = rank_w;
    if r == 0 {
        return Err(TnfError::PencilNotRegular(
            "N vanishes on W', the quotient part seen by the pencil is empty".into(),
        ));
    }
    let support = &cok.support;
    let w_len = support.prefix_len(rho);
    let w_idx: Vec<usize> = (0..w_len).collect();
    let nw = select_columns(&cok.n, &w_idx);
    let qr = ColPivHouseholder::new(&nw);
    let b_idx: Vec<usize> = qr.perm()[..r].to_vec();
    let basis: Vec<Exponent> = b_idx.iter().map(|&j| support.get(j).clone()).collect();
    let rfac = qr.r();
    let n0 = CMat::from_fn(r, r, |i, j| rfac[(i, j)]);
    let mut qn = cok.n.clone();
    qr.apply_qh(&mut qn);
    let qn_top = qn.as_ref().subrows(0, r).to_owned();
    let nj: Vec<CMat> = (0..system.nvars())
        .map(|j| shifted_columns(&qn_top, support, cok.kind, &basis, j))
        .collect::<Result<_>>()?;

    let f0 = FactoredSquare::new(&n0)?;
    if f0.cond1.is_nan() || f0.cond1 > MAX_BASIS_CONDITION {
        return Err(TnfError::PencilNotRegular(format!(
            "leading block is singular, condition estimate {:.3e}",
            f0.cond1
        )));
    }

    let g = weights(system.nvars(), opts.seed);
    let mut a = CMat::zeros(r, r);
    for (gj, m) in g.iter().zip(&nj) {
        a += m.transpose() * faer::Scale(c64::new(*gj, 0.0));
    }
    let b = n0.transpose().to_owned();
    let gev = a
        .generalized_eigen(&b)
        .map_err(|e| TnfError::PencilNotRegular(format!("QZ failed: {:?}", e)))?;
    let u = gev.U();
    let nj_t: Vec<CMat> = nj.iter().map(|m| m.transpose().to_owned()).collect();
    let nj_norm: Vec<f64> = nj.iter().map(norm2).collect::<Result<_>>()?;

    let mut roots = Vec::new();
    let mut filtered = 0usize;
    for k in 0..r {
        if gev.S_b()[k].norm() == 0.0 {
            filtered += 1;
            continue;
        }
        let col = u.col(k);
        let wn = col.norm_l2();
        let w = CMat::from_fn(r, 1, |i, _| col[i] / wn);
        let u0 = &b * &w;
        let u0n2: f64 = (0..r).map(|i| u0[(i, 0)].norm_sqr()).sum();
        let mut z = Vec::with_capacity(system.nvars());
        let mut ok = u0n2 > 0.0;
        for (j, m) in nj_t.iter().enumerate() {
            if !ok {
                break;
            }
            let v = m * &w;
            let xi: c64 = (0..r).map(|i| u0[(i, 0)].conj() * v[(i, 0)]).sum::<c64>() / u0n2;
            let err: f64 = (0..r)
                .map(|i| (v[(i, 0)] - u0[(i, 0)] * xi).norm_sqr())
                .sum::<f64>()
                .sqrt();
            ok = err < opts.pencil_tol * nj_norm[j].max(f64::MIN_POSITIVE);
            z.push(xi);
        }
        if !ok {
            filtered += 1;
            continue;
        }
        let res = residual(system, &z)?;
        if res.is_nan() || res > opts.filter_residual {
            filtered += 1;
            continue;
        }
        roots.push(Root {
            z,
            residual: res,
            refined: false,
            cluster: roots.len(),
        });
    }
    let report = PencilReport {
        rho,
        cokernel_dim: cok.delta(),
        rank_w,
        rank_v,
        basis,
        candidates: r,
        rank_gap: cok.rank_gap,
    };
    Ok((
        RootSet {
            roots,
            path: SolvePath::Nongeneric,
            filtered,
        },
        report,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cokernel::cokernel_direct;
    use crate::polyring::{BasisKind, MultiPoly};
    use crate::resmap::{build_resultant, dense_degree_bounds};
    use crate::tnf::{build_multiplication_matrices, select_basis_qr};
    use crate::verify::random_dense_system;

    #[test]
    fn clusters_group_equal_eigenvalues() {
        let ev = [c64::new(1.0, 0.0), c64::new(2.0, 0.0), c64::new(1.0, 1e-9)];
        assert_eq!(cluster_ids(&ev), vec![0, 1, 0]);
    }

    #[test]
    fn generic_two_conics() {
        let s = random_dense_system(2, 2, 3, BasisKind::Monomial).unwrap();
        let b = dense_degree_bounds(&s.degrees(), 2).unwrap();
        let res = build_resultant(&s, b.rho_v, &b.rho_vi).unwrap();
        let policy = RankPolicy::default();
        let cok = cokernel_direct(&res, Some(4), &policy).unwrap();
        let basis = select_basis_qr(&cok, &cok.support.interior(), &policy).unwrap();
        let t = build_multiplication_matrices(&cok, basis).unwrap();
        let roots = roots_from_multiplication(&s, &t, 1).unwrap();
        assert_eq!(roots.roots.len(), 4);
        assert!(roots.max_residual() < 1e-12);
    }

    #[test]
    fn nongeneric_univariate_double_root_free() {
        // x^2 - 3x + 2 = (x - 1)(x - 2) through the pencil path.
        let p = MultiPoly::from_terms(
            1,
            BasisKind::Monomial,
            [
                (Exponent(vec![2]), c64::new(1.0, 0.0)),
                (Exponent(vec![1]), c64::new(-3.0, 0.0)),
                (Exponent(vec![0]), c64::new(2.0, 0.0)),
            ],
        )
        .unwrap();
        let s = PolySystem::new(1, BasisKind::Monomial, vec![p]).unwrap();
        let (roots, rep) = solve_nongeneric(&s, &NongenericOptions::default()).unwrap();
        assert_eq!(rep.rank_w, 2);
        let mut xs: Vec<f64> = roots.roots.iter().map(|r| r.z[0].re).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((xs[0] - 1.0).abs() < 1e-12 && (xs[1] - 2.0).abs() < 1e-12);
    }
}
