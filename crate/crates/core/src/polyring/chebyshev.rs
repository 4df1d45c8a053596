use std::f64::consts::PI;

use num_complex::Complex64 as c64;

use super::{BasisKind, Exponent, MultiPoly};
use crate::error::{Result, TnfError};

/// Monomial coefficients of `T_0, ..., T_deg`; entry `[k][j]` is the coefficient of `x^j` in `T_k`.
fn chebyshev_in_monomials(deg: usize) -> Vec<Vec<f64>> {
    let mut t: Vec<Vec<f64>> = vec![vec![1.0]];
    if deg >= 1 {
        t.push(vec![0.0, 1.0]);
    }
    for k in 1..deg {
        let mut next = vec![0.0; k + 2];
        for (j, &c) in t[k].iter().enumerate() {
            next[j + 1] += 2.0 * c;
        }
        for (j, &c) in t[k - 1].iter().enumerate() {
            next[j] -= c;
        }
        t.push(next);
    }
    t
}

/// Chebyshev coefficients of `x^0, ..., x^deg`; entry `[k][j]` is the coefficient of `T_j` in `x^k`.
fn monomials_in_chebyshev(deg: usize) -> Vec<Vec<f64>> {
    let mut m: Vec<Vec<f64>> = vec![vec![1.0]];
    for k in 0..deg {
        let mut next = vec![0.0; k + 2];
        for (j, &c) in m[k].iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            for (idx, w) in BasisKind::Chebyshev.times_x(j as u32) {
                next[idx as usize] += c * w;
            }
        }
        m.push(next);
    }
    m
}

fn change_basis(p: &MultiPoly, target: BasisKind, table: &[Vec<f64>]) -> MultiPoly {
    let mut terms = Vec::new();
    for (e, &c) in p.terms() {
        // Tensor product of the univariate expansions.
        let mut partial: Vec<(Vec<u32>, f64)> = vec![(Vec::new(), 1.0)];
        for &a in &e.0 {
            let row = &table[a as usize];
            let mut next = Vec::with_capacity(partial.len() * row.len());
            for (ex, w) in &partial {
                for (j, &cj) in row.iter().enumerate() {
                    if cj != 0.0 {
                        let mut ex2 = ex.clone();
                        ex2.push(j as u32);
                        next.push((ex2, w * cj));
                    }
                }
            }
            partial = next;
        }
        for (ex, w) in partial {
            terms.push((Exponent(ex), c * w));
        }
    }
    MultiPoly::from_terms(p.nvars(), target, terms).expect("basis change keeps exponents valid")
}

/// Rewrites a Chebyshev-basis polynomial in the monomial basis.
pub fn cheb_to_monomial(p: &MultiPoly) -> MultiPoly {
    assert_eq!(p.kind(), BasisKind::Chebyshev);
    change_basis(p, BasisKind::Monomial, &chebyshev_in_monomials(p.degree()))
}

/// Rewrites a monomial-basis polynomial in the Chebyshev basis.
pub fn monomial_to_cheb(p: &MultiPoly) -> MultiPoly {
    assert_eq!(p.kind(), BasisKind::Monomial);
    change_basis(p, BasisKind::Chebyshev, &monomials_in_chebyshev(p.degree()))
}

/// Chebyshev nodes `cos(pi (k + 1/2) / (d + 1))` for `k = 0..=d`.
pub fn chebyshev_nodes(d: usize) -> Vec<f64> {
    (0..=d)
        .map(|k| (PI * (k as f64 + 0.5) / (d as f64 + 1.0)).cos())
        .collect()
}

fn dct_table(len: usize) -> Vec<f64> {
    let nf = len as f64;
    let mut t = vec![0.0; len * len];
    for k in 0..len {
        let w = if k == 0 { (1.0 / nf).sqrt() } else { (2.0 / nf).sqrt() };
        for j in 0..len {
            t[k * len + j] = w * (PI * k as f64 * (j as f64 + 0.5) / nf).cos();
        }
    }
    t
}

/// Orthonormal type-II DCT: `X_k = w_k sum_j x_j cos(pi k (j + 1/2) / N)` with
/// `w_0 = sqrt(1/N)` and `w_k = sqrt(2/N)` otherwise.
pub fn dct2_orthonormal(x: &[c64]) -> Vec<c64> {
    let len = x.len();
    let t = dct_table(len);
    (0..len)
        .map(|k| (0..len).map(|j| x[j] * t[k * len + j]).sum())
        .collect()
}

fn apply_along_axes(values: &mut [c64], dims: &[usize]) {
    let total: usize = dims.iter().product();
    for (axis, &len) in dims.iter().enumerate() {
        let stride: usize = dims[axis + 1..].iter().product();
        let t = dct_table(len);
        let mut buf = vec![c64::new(0.0, 0.0); len];
        for base in 0..total {
            if (base / stride) % len != 0 {
                continue;
            }
            for (k, b) in buf.iter_mut().enumerate() {
                *b = (0..len).map(|j| values[base + j * stride] * t[k * len + j]).sum();
            }
            for (k, &b) in buf.iter().enumerate() {
                values[base + k * stride] = b;
            }
        }
    }
}

fn grid_dims(degrees: &[usize]) -> Vec<usize> {
    degrees.iter().map(|d| d + 1).collect()
}

fn unravel(mut flat: usize, dims: &[usize]) -> Vec<u32> {
    let mut idx = vec![0u32; dims.len()];
    for i in (0..dims.len()).rev() {
        idx[i] = (flat % dims[i]) as u32;
        flat /= dims[i];
    }
    idx
}

/// Chebyshev coefficients on the tensor grid `prod_i {0..=d_i}` from samples on the
/// Chebyshev node grid. Both arrays are row-major with the last variable fastest.
pub fn cheb_coeffs_from_values(values: &[c64], degrees: &[usize]) -> Result<Vec<c64>> {
    let dims = grid_dims(degrees);
    let total: usize = dims.iter().product();
    if values.len() != total {
        return Err(TnfError::InvalidInput(format!(
            "expected {} samples for degrees {:?}, got {}",
            total,
            degrees,
            values.len()
        )));
    }
    let mut c = values.to_vec();
    apply_along_axes(&mut c, &dims);
    let base: f64 = dims.iter().map(|&l| (2.0 / l as f64).sqrt()).product();
    for (flat, v) in c.iter_mut().enumerate() {
        let zeros = unravel(flat, &dims).iter().filter(|&&a| a == 0).count() as i32;
        *v *= base * std::f64::consts::FRAC_1_SQRT_2.powi(zeros);
    }
    Ok(c)
}

/// Samples `p` on the Chebyshev node grid of the given per-variable degrees.
pub fn sample_on_chebyshev_grid(p: &MultiPoly, degrees: &[usize]) -> Result<Vec<c64>> {
    if degrees.len() != p.nvars() {
        return Err(TnfError::InvalidInput("one degree per variable required".into()));
    }
    let dims = grid_dims(degrees);
    let nodes: Vec<Vec<f64>> = degrees.iter().map(|&d| chebyshev_nodes(d)).collect();
    let total: usize = dims.iter().product();
    (0..total)
        .map(|flat| {
            let idx = unravel(flat, &dims);
            let z: Vec<c64> = idx
                .iter()
                .enumerate()
                .map(|(i, &k)| c64::new(nodes[i][k as usize], 0.0))
                .collect();
            p.eval(&z)
        })
        .collect()
}

/// Chebyshev expansion of `p` recovered by sampling and a discrete cosine transform.
/// Exact (up to rounding) when the partial degrees of `p` do not exceed `degrees`.
pub fn chebyshev_interpolate(p: &MultiPoly, degrees: &[usize]) -> Result<MultiPoly> {
    let values = sample_on_chebyshev_grid(p, degrees)?;
    let coeffs = cheb_coeffs_from_values(&values, degrees)?;
    let dims = grid_dims(degrees);
    let terms = coeffs
        .into_iter()
        .enumerate()
        .map(|(flat, c)| (Exponent(unravel(flat, &dims)), c));
    MultiPoly::from_terms(p.nvars(), BasisKind::Chebyshev, terms)
}
