//! Dense complex linear algebra helpers on top of `faer`.
//!
//! SVD, LU and the QZ algorithm come from `faer`. The complex Schur form and the
//! column-pivoted QR are implemented here because the solver needs control over
//! their outputs (the unitary Schur factor, and lowest-index tie breaking for pivots).

mod pivqr;
mod schur;

pub use pivqr::ColPivHouseholder;
pub use schur::{complex_schur, Schur};

use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::Mat;
use num_complex::Complex64 as c64;

use crate::error::{Result, TnfError};

pub type CMat = Mat<c64>;

/// Thresholds used to turn singular values into a rank.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankPolicy {
    /// Singular values below `floor * sigma_max` always count as zero.
    pub floor: f64,
    /// Overrides the default `max(rows, cols) * eps` relative threshold.
    pub relative: Option<f64>,
    /// Minimum ratio `sigma_r / sigma_{r+1}` for a rank decision to be unambiguous.
    pub gap_ratio: f64,
}

impl Default for RankPolicy {
    fn default() -> Self {
        RankPolicy {
            floor: 1e-12,
            relative: None,
            gap_ratio: 1e3,
        }
    }
}

impl RankPolicy {
    /// Absolute threshold for a matrix of the given shape and largest singular value.
    pub fn threshold(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        let rel = self
            .relative
            .unwrap_or(rows.max(cols) as f64 * f64::EPSILON);
        rel.max(self.floor) * sigma_max
    }

    /// Numerical rank of a matrix with singular values `sv` (descending).
    pub fn rank(&self, sv: &[f64], rows: usize, cols: usize) -> usize {
        let smax = sv.first().copied().unwrap_or(0.0);
        if smax == 0.0 {
            return 0;
        }
        let tau = self.threshold(rows, cols, smax);
        sv.iter().take_while(|&&s| s > tau).count()
    }
}

/// Ratio `sv[r-1] / sv[r]`, infinite when either side of the cut is structurally empty or zero.
pub fn gap_at(sv: &[f64], r: usize) -> f64 {
    if r == 0 || r >= sv.len() {
        return f64::INFINITY;
    }
    if sv[r] == 0.0 {
        f64::INFINITY
    } else {
        sv[r - 1] / sv[r]
    }
}

fn check_finite(a: &CMat, what: &str) -> Result<()> {
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let v = a[(i, j)];
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(TnfError::NonFinite(what.to_string()));
            }
        }
    }
    Ok(())
}

/// Full SVD `A = U S V^H`; returns `(U, singular values, V)`.
pub fn svd_full(a: &CMat) -> Result<(CMat, Vec<f64>, CMat)> {
    check_finite(a, "matrix passed to SVD")?;
    let (m, n) = (a.nrows(), a.ncols());
    if m == 0 || n == 0 {
        return Ok((CMat::identity(m, m), Vec::new(), CMat::identity(n, n)));
    }
    let svd = a
        .svd()
        .map_err(|e| TnfError::NonFinite(format!("SVD did not converge: {:?}", e)))?;
    let s = svd.S().column_vector();
    let sv = (0..s.nrows()).map(|i| s[i].re).collect();
    Ok((svd.U().to_owned(), sv, svd.V().to_owned()))
}

/// Singular values in descending order.
pub fn singular_values(a: &CMat) -> Result<Vec<f64>> {
    check_finite(a, "matrix passed to SVD")?;
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(Vec::new());
    }
    a.singular_values()
        .map_err(|e| TnfError::NonFinite(format!("SVD did not converge: {:?}", e)))
}

/// Spectral norm.
pub fn norm2(a: &CMat) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

/// Largest entry modulus.
pub fn max_abs(a: &CMat) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

/// Columns `cols` of `a`, in the given order.
pub fn select_columns(a: &CMat, cols: &[usize]) -> CMat {
    CMat::from_fn(a.nrows(), cols.len(), |i, j| a[(i, cols[j])])
}

/// Leading `k` columns of `a`.
pub fn leading_columns(a: &CMat, k: usize) -> CMat {
    a.as_ref().subcols(0, k).to_owned()
}

/// Replaces the rows of `n` by an orthonormal basis of their span (thin QR of `n^H`).
pub fn orthonormalize_rows(n: &CMat) -> CMat {
    if n.nrows() == 0 {
        return n.clone();
    }
    let q = n.adjoint().to_owned().qr().compute_thin_Q();
    q.adjoint().to_owned()
}

/// Deviation `||A A^H - I||_max` of the rows of `a` from orthonormality.
pub fn row_orthonormality_error(a: &CMat) -> f64 {
    let g = a * a.adjoint();
    let mut err = 0.0f64;
    for j in 0..g.ncols() {
        for i in 0..g.nrows() {
            let want = if i == j { 1.0 } else { 0.0 };
            err = err.max((g[(i, j)] - want).norm());
        }
    }
    err
}

/// Sines of the principal angles between the row spaces of `a` and `b`, both with
/// orthonormal rows, in descending order. Different dimensions give a right angle.
pub fn principal_angle_sines(a: &CMat, b: &CMat) -> Result<Vec<f64>> {
    assert_eq!(a.ncols(), b.ncols(), "row spaces live in different ambient spaces");
    if a.nrows() != b.nrows() {
        return Ok(vec![1.0]);
    }
    // Component of each row of A orthogonal to rowspace(B).
    let proj = (a * b.adjoint()) * b;
    let resid = a - &proj;
    singular_values(&resid)
}

/// Largest principal angle (radians) between the row spaces of `a` and `b`.
pub fn max_principal_angle(a: &CMat, b: &CMat) -> Result<f64> {
    let s = principal_angle_sines(a, b)?;
    Ok(s.first().copied().unwrap_or(0.0).clamp(0.0, 1.0).asin())
}

/// Matrix 1-norm (largest column sum).
pub fn norm1(a: &CMat) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Estimate of `||A^{-1}||_1` from an LU factorization, by Hager's method with
/// Higham's refinements for complex matrices.
pub fn inverse_norm1_estimate(lu: &PartialPivLu<c64>, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let mut x = CMat::from_fn(n, 1, |_, _| c64::new(1.0 / n as f64, 0.0));
    let mut est = 0.0f64;
    let mut last_j = usize::MAX;
    for iter in 0..5 {
        let x_in = x.clone();
        lu.solve_in_place(x.as_mut());
        let y_norm: f64 = (0..n).map(|i| x[(i, 0)].norm()).sum();
        if iter > 0 && y_norm <= est {
            break;
        }
        est = y_norm;
        let mut xi = CMat::from_fn(n, 1, |i, _| {
            let v = x[(i, 0)];
            if v.norm() == 0.0 {
                c64::new(1.0, 0.0)
            } else {
                v / v.norm()
            }
        });
        lu.solve_adjoint_in_place(xi.as_mut());
        let (j, zmax) = (0..n)
            .map(|i| (i, xi[(i, 0)].norm()))
            .fold((0, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc });
        let ztx: f64 = (0..n).map(|i| (xi[(i, 0)].conj() * x_in[(i, 0)]).re).sum();
        if j == last_j || (iter > 0 && zmax <= ztx) {
            break;
        }
        last_j = j;
        x = CMat::zeros(n, 1);
        x[(j, 0)] = c64::new(1.0, 0.0);
    }
    // Alternative lower bound guarding against adversarial cases.
    let mut alt = CMat::from_fn(n, 1, |i, _| {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        c64::new(sign * (1.0 + i as f64 / (n as f64 - 1.0).max(1.0)), 0.0)
    });
    lu.solve_in_place(alt.as_mut());
    let alt_est = 2.0 * (0..n).map(|i| alt[(i, 0)].norm()).sum::<f64>() / (3.0 * n as f64);
    est.max(alt_est)
}

/// LU factorization of a square matrix together with a 1-norm condition estimate.
pub struct FactoredSquare {
    pub lu: PartialPivLu<c64>,
    pub cond1: f64,
}

impl FactoredSquare {
    pub fn new(a: &CMat) -> Result<Self> {
        assert_eq!(a.nrows(), a.ncols());
        check_finite(a, "matrix passed to LU")?;
        let lu = a.partial_piv_lu();
        let inv = inverse_norm1_estimate(&lu, a.nrows());
        let cond1 = norm1(a) * inv;
        let cond1 = if cond1.is_finite() { cond1 } else { f64::INFINITY };
        Ok(FactoredSquare { lu, cond1 })
    }

    /// Solves `A X = B`.
    pub fn solve(&self, b: &CMat) -> CMat {
        let mut x = b.clone();
        self.lu.solve_in_place(x.as_mut());
        x
    }
}
