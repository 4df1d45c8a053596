//! Orthonormal cokernel bases `N` with `N Res = 0`, computed at once or degree by degree.

use log::warn;

use crate::error::{Result, TnfError};
use crate::linalg::{gap_at, orthonormalize_rows, svd_full, CMat, RankPolicy};
use crate::polyring::{exponents_of_degree, BasisKind, GradedSupport, PolySystem};
use crate::resmap::{shift_matrix, ResultantMatrix, ShiftLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Direct,
    DegreeByDegree,
}

/// A `delta x l` matrix `N` with orthonormal rows spanning the left null space of a
/// resultant map on `support`.
#[derive(Clone, Debug)]
pub struct CokernelMap {
    pub n: CMat,
    pub support: GradedSupport,
    pub kind: BasisKind,
    pub provenance: Provenance,
    /// Singular value ratio at the rank cut (smallest over all steps for degree by degree).
    pub rank_gap: f64,
    pub warnings: Vec<String>,
}

impl CokernelMap {
    pub fn delta(&self) -> usize {
        self.n.nrows()
    }
}

struct LeftNull {
    rows: CMat,
    gap: f64,
    warning: Option<String>,
}

/// Left null space of `a` (`l x m`) from a full SVD.
///
/// With `nullity_hint = Some(delta)` exactly `delta` rows are returned and a small gap
/// only produces a warning. Without a hint the rank comes from `policy` and must sit
/// at a gap of at least `policy.gap_ratio`.
fn left_null_space(a: &CMat, nullity_hint: Option<usize>, policy: &RankPolicy) -> Result<LeftNull> {
    let (l, m) = (a.nrows(), a.ncols());
    let (u, sv, _) = svd_full(a)?;
    let (rank, warning) = match nullity_hint {
        Some(delta) => {
            if delta > l || l - delta > sv.len() {
                return Err(TnfError::BadRankHint {
                    hint: delta,
                    rows: l,
                    cols: m,
                });
            }
            let r = l - delta;
            let gap = gap_at(&sv, r);
            let w = (gap < policy.gap_ratio).then(|| {
                format!(
                    "weak rank gap {:.3e} at the hinted cokernel dimension {}",
                    gap, delta
                )
            });
            (r, w)
        }
        None => {
            let r = policy.rank(&sv, l, m);
            let gap = gap_at(&sv, r);
            if gap < policy.gap_ratio {
                let best = (1..sv.len())
                    .map(|k| gap_at(&sv, k))
                    .fold(0.0, f64::max);
                return Err(TnfError::RankAmbiguous {
                    required: policy.gap_ratio,
                    found: best,
                });
            }
            (r, None)
        }
    };
    if let Some(w) = &warning {
        warn!("{}", w);
    }
    let rows = u.as_ref().subcols(rank, l - rank).adjoint().to_owned();
    Ok(LeftNull {
        rows,
        gap: gap_at(&sv, rank),
        warning,
    })
}

/// Cokernel of a resultant matrix by one full SVD.
pub fn cokernel_direct(
    res: &ResultantMatrix,
    rank_hint: Option<usize>,
    policy: &RankPolicy,
) -> Result<CokernelMap> {
    let ln = left_null_space(&res.matrix, rank_hint, policy)?;
    Ok(CokernelMap {
        n: ln.rows,
        support: res.rows.clone(),
        kind: res.kind,
        provenance: Provenance::Direct,
        rank_gap: ln.gap,
        warnings: ln.warning.into_iter().collect(),
    })
}

/// Intermediate state of the degree-by-degree cokernel computation: the cokernel of
/// `Res_k` on `R_{<=k}`.
#[derive(Clone, Debug)]
pub struct DbdState {
    pub k: usize,
    pub support: GradedSupport,
    pub n: CMat,
    pub min_gap: f64,
    pub warnings: Vec<String>,
}

/// Multiplier labels of total degree exactly `k` for `Res_k`, in column order.
fn new_labels(degrees: &[usize], nvars: usize, k: usize) -> Vec<ShiftLabel> {
    let mut labels = Vec::new();
    for (i, &d) in degrees.iter().enumerate() {
        if k >= d {
            labels.extend(exponents_of_degree(nvars, k - d).into_iter().map(|a| ShiftLabel {
                equation: i,
                shift: a,
            }));
        }
    }
    labels
}

/// Cokernel of `Res_0`.
pub fn dbd_start(system: &PolySystem, policy: &RankPolicy) -> Result<DbdState> {
    let support = GradedSupport::new(system.nvars(), 0);
    let labels = new_labels(&system.degrees(), system.nvars(), 0);
    let res = shift_matrix(system, &labels, &support)?;
    let ln = if res.ncols() == 0 {
        LeftNull {
            rows: CMat::identity(1, 1),
            gap: f64::INFINITY,
            warning: None,
        }
    } else {
        left_null_space(&res, None, policy)?
    };
    Ok(DbdState {
        k: 0,
        support,
        n: ln.rows,
        min_gap: ln.gap,
        warnings: ln.warning.into_iter().collect(),
    })
}

/// Extends the cokernel of `Res_k` to that of `Res_{k+1}`.
///
/// Only the columns `x^alpha f_i` of degree exactly `k + 1` are new. Writing them as
/// `[A; B]` over `R_{<=k}` and the degree `k + 1` part, the new cokernel is
/// `[L_1 N_k | L_2]` where `[L_1 | L_2]` is the cokernel of `[N_k A; B]`.
pub fn dbd_step(
    system: &PolySystem,
    state: &DbdState,
    policy: &RankPolicy,
    nullity_hint: Option<usize>,
) -> Result<DbdState> {
    let k1 = state.k + 1;
    let support = GradedSupport::new(system.nvars(), k1);
    let lk = state.support.len();
    let h = support.len() - lk;
    let dk = state.n.nrows();
    let labels = new_labels(&system.degrees(), system.nvars(), k1);
    let cols = shift_matrix(system, &labels, &support)?;
    let t = cols.ncols();

    let (l_rows, gap, warning) = if t == 0 && nullity_hint.is_none() {
        (CMat::identity(dk + h, dk + h), f64::INFINITY, None)
    } else {
        let a = cols.as_ref().subrows(0, lk);
        let b = cols.as_ref().subrows(lk, h);
        let na = &state.n * a;
        let stacked = CMat::from_fn(dk + h, t, |i, j| {
            if i < dk {
                na[(i, j)]
            } else {
                b[(i - dk, j)]
            }
        });
        let ln = left_null_space(&stacked, nullity_hint, policy)?;
        (ln.rows, ln.gap, ln.warning)
    };
    let l1 = l_rows.as_ref().subcols(0, dk);
    let l2 = l_rows.as_ref().subcols(dk, h);
    let top = l1 * &state.n;
    let next = CMat::from_fn(l_rows.nrows(), lk + h, |i, j| {
        if j < lk {
            top[(i, j)]
        } else {
            l2[(i, j - lk)]
        }
    });
    let mut warnings = state.warnings.clone();
    warnings.extend(warning);
    Ok(DbdState {
        k: k1,
        support,
        n: orthonormalize_rows(&next),
        min_gap: state.min_gap.min(gap),
        warnings,
    })
}

/// Runs the degree-by-degree computation up to `Res_rho`. The hint, if any, applies to
/// the final step only.
pub fn dbd_run(
    system: &PolySystem,
    rho: usize,
    policy: &RankPolicy,
    final_nullity: Option<usize>,
) -> Result<CokernelMap> {
    let mut state = dbd_start(system, policy)?;
    while state.k < rho {
        let hint = if state.k + 1 == rho { final_nullity } else { None };
        state = dbd_step(system, &state, policy, hint)?;
    }
    Ok(CokernelMap {
        n: state.n,
        support: state.support,
        kind: system.kind(),
        provenance: Provenance::DegreeByDegree,
        rank_gap: state.min_gap,
        warnings: state.warnings,
    })
}

/// `||N Res||_max / ||Res||_max`.
pub fn annihilation_error(n: &CMat, res: &CMat) -> f64 {
    let scale = crate::linalg::max_abs(res);
    if scale == 0.0 {
        return 0.0;
    }
    crate::linalg::max_abs(&(n * res)) / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_principal_angle, row_orthonormality_error};
    use crate::polyring::{Exponent, MultiPoly};
    use crate::resmap::{build_resultant, build_resultant_graded};
    use num_complex::Complex64 as c64;

    fn sys(n: usize, polys: &[&[(&[u32], f64)]]) -> PolySystem {
        let ps = polys
            .iter()
            .map(|terms| {
                MultiPoly::from_terms(
                    n,
                    BasisKind::Monomial,
                    terms
                        .iter()
                        .map(|(e, c)| (Exponent(e.to_vec()), c64::new(*c, 0.0))),
                )
                .unwrap()
            })
            .collect();
        PolySystem::new(n, BasisKind::Monomial, ps).unwrap()
    }

    fn two_conics() -> PolySystem {
        sys(
            2,
            &[
                &[(&[2, 0], 1.0), (&[0, 1], -1.0), (&[1, 0], 0.3), (&[0, 0], -0.7)],
                &[(&[0, 2], 1.0), (&[1, 1], 0.4), (&[1, 0], -1.1), (&[0, 0], 0.2)],
            ],
        )
    }

    #[test]
    fn direct_cokernel_annihilates() {
        let s = two_conics();
        let res = build_resultant(&s, 3, &[1, 1]).unwrap();
        let c = cokernel_direct(&res, Some(4), &RankPolicy::default()).unwrap();
        assert_eq!(c.delta(), 4);
        assert!(annihilation_error(&c.n, &res.matrix) < 1e-12);
        assert!(row_orthonormality_error(&c.n) < 1e-12);
        let auto = cokernel_direct(&res, None, &RankPolicy::default()).unwrap();
        assert_eq!(auto.delta(), 4);
    }

    #[test]
    fn dbd_matches_direct_row_space() {
        let s = two_conics();
        let policy = RankPolicy::default();
        let d = dbd_run(&s, 3, &policy, None).unwrap();
        let res = build_resultant_graded(&s, 3).unwrap();
        let c = cokernel_direct(&res, None, &policy).unwrap();
        assert_eq!(d.delta(), c.delta());
        assert!(max_principal_angle(&d.n, &c.n).unwrap() < 1e-10);
        assert!(row_orthonormality_error(&d.n) < 1e-12);
    }

    #[test]
    fn empty_column_set_gives_identity() {
        let s = two_conics();
        let res = build_resultant_graded(&s, 1).unwrap();
        let c = cokernel_direct(&res, None, &RankPolicy::default()).unwrap();
        assert_eq!(c.delta(), 3);
    }

    #[test]
    fn ambiguous_rank_without_hint() {
        let a = CMat::from_fn(3, 3, |i, j| {
            if i == j {
                c64::new(10f64.powi(-(6 * i as i32)), 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        });
        // Singular values 1, 1e-6, 1e-12: the threshold cut sits at a gap of 1e6, fine.
        assert!(left_null_space(&a, None, &RankPolicy::default()).is_ok());
        // Singular values 1, 1e-9, 1e-11 cut at 1e-10: gap of only 100.
        let b = CMat::from_fn(3, 3, |i, j| {
            if i == j {
                c64::new([1.0, 1e-9, 1e-11][i], 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        });
        let policy = RankPolicy {
            relative: Some(1e-10),
            ..RankPolicy::default()
        };
        assert!(matches!(
            left_null_space(&b, None, &policy),
            Err(TnfError::RankAmbiguous { .. })
        ));
    }
}
