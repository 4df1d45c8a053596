//! Truncated normal forms: a basis of the quotient and the multiplication matrices.
//!
//! Given a cokernel map `N` on `V` and the interior `W` of `V`, a basis `B` of size
//! `delta` is chosen with `N|_B` invertible. The multiplication matrices are then
//! `M_i = N_B^{-1} N_i`, where `N_i` holds the columns of `N` for `x_i b` with `b` in `B`.

use crate::cokernel::CokernelMap;
use crate::error::{Result, TnfError};
use crate::linalg::{
    max_abs, norm2, select_columns, singular_values, svd_full, CMat, ColPivHouseholder,
    FactoredSquare, RankPolicy,
};
use crate::polyring::{BasisKind, Exponent, GradedSupport};

/// Largest admissible condition estimate of `N_B`.
pub const MAX_BASIS_CONDITION: f64 = 1e12;

#[derive(Clone, Debug)]
pub enum QuotientBasis {
    /// Basis elements picked from the support; entries index the support of `N`.
    Subset { indices: Vec<usize> },
    /// `B_j = sum_k v1[k, j] b_{w[k]}`, orthonormal combinations of the elements in `W`.
    Orthogonal { w: Vec<usize>, v1: CMat },
}

impl QuotientBasis {
    pub fn len(&self) -> usize {
        match self {
            QuotientBasis::Subset { indices } => indices.len(),
            QuotientBasis::Orthogonal { v1, .. } => v1.ncols(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Diagnostics of the orthogonal basis selection.
#[derive(Clone, Copy, Debug)]
pub struct SvdBasisReport {
    /// `||V_1^H V_1 - I||_max`.
    pub orthonormality_error: f64,
    /// `||N|_W V_1 - U S_hat||_max`.
    pub factor_error: f64,
}

fn restrict(n: &CMat, w: &[usize]) -> CMat {
    select_columns(n, w)
}

fn check_covering(nw: &CMat, delta: usize, policy: &RankPolicy) -> Result<()> {
    let sv = singular_values(nw)?;
    let rank = policy.rank(&sv, nw.nrows(), nw.ncols());
    if rank < delta {
        return Err(TnfError::NotCovering { rank, delta });
    }
    Ok(())
}

/// Picks `delta` elements of `W` by column-pivoted QR of `N|_W`.
pub fn select_basis_qr(
    cok: &CokernelMap,
    w: &[usize],
    policy: &RankPolicy,
) -> Result<QuotientBasis> {
    let delta = cok.delta();
    let nw = restrict(&cok.n, w);
    check_covering(&nw, delta, policy)?;
    let qr = ColPivHouseholder::new(&nw);
    let indices = qr.perm()[..delta].iter().map(|&j| w[j]).collect();
    Ok(QuotientBasis::Subset { indices })
}

/// Orthonormal basis of the quotient from the leading right singular vectors of `N|_W`.
pub fn select_basis_svd(
    cok: &CokernelMap,
    w: &[usize],
    policy: &RankPolicy,
) -> Result<(QuotientBasis, SvdBasisReport)> {
    let delta = cok.delta();
    let nw = restrict(&cok.n, w);
    check_covering(&nw, delta, policy)?;
    let (u, sv, v) = svd_full(&nw)?;
    let v1 = v.as_ref().subcols(0, delta).to_owned();
    let gram = v1.adjoint() * &v1;
    let orthonormality_error = max_abs(&(&gram - CMat::identity(delta, delta)));
    let us = CMat::from_fn(delta, delta, |i, j| u[(i, j)] * sv[j]);
    let factor_error = max_abs(&(&nw * &v1 - us));
    Ok((
        QuotientBasis::Orthogonal { w: w.to_vec(), v1 },
        SvdBasisReport {
            orthonormality_error,
            factor_error,
        },
    ))
}

/// Columns of `N` representing `x_i b_beta` for each `beta`, expanded with the basis
/// recurrence: for Chebyshev and `beta_i >= 1` this is `(N_{beta+e_i} + N_{beta-e_i}) / 2`.
pub fn shifted_columns(
    n: &CMat,
    support: &GradedSupport,
    kind: BasisKind,
    betas: &[Exponent],
    i: usize,
) -> Result<CMat> {
    let mut out = CMat::zeros(n.nrows(), betas.len());
    for (c, beta) in betas.iter().enumerate() {
        for (k, w) in kind.times_x(beta.0[i]) {
            let mut target = beta.clone();
            target.0[i] = k;
            let col = support.position(&target).ok_or(TnfError::DegreeOverflow {
                degree: target.degree(),
                bound: support.degree(),
            })?;
            for r in 0..n.nrows() {
                out[(r, c)] += n[(r, col)] * w;
            }
        }
    }
    Ok(out)
}

/// Multiplication matrices and the data they were built from.
#[derive(Clone, Debug)]
pub struct TnfData {
    pub basis: QuotientBasis,
    pub kind: BasisKind,
    pub mult: Vec<CMat>,
    /// 1-norm condition estimate of `N_B`.
    pub cond: f64,
}

impl TnfData {
    pub fn delta(&self) -> usize {
        self.basis.len()
    }

    /// `max_{i<j} ||M_i M_j - M_j M_i||_2`.
    pub fn commutator_error(&self) -> Result<f64> {
        let mut err = 0.0f64;
        for i in 0..self.mult.len() {
            for j in i + 1..self.mult.len() {
                let c = &self.mult[i] * &self.mult[j] - &self.mult[j] * &self.mult[i];
                err = err.max(norm2(&c)?);
            }
        }
        Ok(err)
    }

    /// `max_i ||M_i||_2`.
    pub fn max_norm(&self) -> Result<f64> {
        self.mult.iter().map(norm2).try_fold(0.0f64, |a, b| Ok(a.max(b?)))
    }
}

/// `M_i = N_B^{-1} N_i` for every variable, using an LU factorization of `N_B`.
pub fn build_multiplication_matrices(cok: &CokernelMap, basis: QuotientBasis) -> Result<TnfData> {
    let nvars = cok.support.nvars();
    let elems = cok.support.elems();
    let (nb, shifted): (CMat, Vec<CMat>) = match &basis {
        QuotientBasis::Subset { indices } => {
            let betas: Vec<Exponent> = indices.iter().map(|&j| elems[j].clone()).collect();
            let nb = select_columns(&cok.n, indices);
            let ni = (0..nvars)
                .map(|i| shifted_columns(&cok.n, &cok.support, cok.kind, &betas, i))
                .collect::<Result<Vec<_>>>()?;
            (nb, ni)
        }
        QuotientBasis::Orthogonal { w, v1 } => {
            let betas: Vec<Exponent> = w.iter().map(|&j| elems[j].clone()).collect();
            let nb = select_columns(&cok.n, w) * v1;
            let ni = (0..nvars)
                .map(|i| {
                    shifted_columns(&cok.n, &cok.support, cok.kind, &betas, i).map(|m| m * v1)
                })
                .collect::<Result<Vec<_>>>()?;
            (nb, ni)
        }
    };
    let f = FactoredSquare::new(&nb)?;
    if f.cond1.is_nan() || f.cond1 > MAX_BASIS_CONDITION {
        return Err(TnfError::SingularBasis {
            cond: f.cond1,
            limit: MAX_BASIS_CONDITION,
        });
    }
    let mult = shifted.iter().map(|ni| f.solve(ni)).collect();
    Ok(TnfData {
        basis,
        kind: cok.kind,
        mult,
        cond: f.cond1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cokernel::cokernel_direct;
    use crate::polyring::{MultiPoly, PolySystem};
    use crate::resmap::build_resultant;
    use num_complex::Complex64 as c64;

    fn univariate(kind: BasisKind) -> PolySystem {
        // x^2 - 1, or T_2 - T_0 = 2x^2 - 2 in the Chebyshev basis.
        let p = MultiPoly::from_terms(
            1,
            kind,
            [
                (Exponent(vec![2]), c64::new(1.0, 0.0)),
                (Exponent(vec![0]), c64::new(-1.0, 0.0)),
            ],
        )
        .unwrap();
        PolySystem::new(1, kind, vec![p]).unwrap()
    }

    #[test]
    fn univariate_multiplication_matrix_has_roots_pm1() {
        for kind in [BasisKind::Monomial, BasisKind::Chebyshev] {
            let s = univariate(kind);
            let res = build_resultant(&s, 2, &[0]).unwrap();
            let cok = cokernel_direct(&res, Some(2), &RankPolicy::default()).unwrap();
            let w = cok.support.interior();
            let basis = select_basis_qr(&cok, &w, &RankPolicy::default()).unwrap();
            let t = build_multiplication_matrices(&cok, basis).unwrap();
            let m = &t.mult[0];
            let tr = m[(0, 0)] + m[(1, 1)];
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            assert!(tr.norm() < 1e-13, "{:?}", kind);
            assert!((det + 1.0).norm() < 1e-13, "{:?}", kind);
        }
    }

    #[test]
    fn chebyshev_shifted_columns_bitwise() {
        let n = CMat::from_fn(2, 4, |i, j| c64::new(0.1 + i as f64 * 0.37 + j as f64 * 1.3, -0.2 * j as f64));
        let sup = GradedSupport::new(1, 3);
        let betas = vec![Exponent(vec![1]), Exponent(vec![2]), Exponent(vec![0])];
        let s = shifted_columns(&n, &sup, BasisKind::Chebyshev, &betas, 0).unwrap();
        for r in 0..2 {
            assert_eq!(s[(r, 0)] * 2.0, n[(r, 2)] + n[(r, 0)]);
            assert_eq!(s[(r, 1)] * 2.0, n[(r, 3)] + n[(r, 1)]);
            assert_eq!(s[(r, 2)], n[(r, 1)]);
        }
    }
}
