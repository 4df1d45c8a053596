use num_complex::Complex64 as c64;

use super::CMat;
use crate::error::{Result, TnfError};

/// Complex Schur form `A = Q T Q^H` with `Q` unitary and `T` upper triangular.
#[derive(Clone, Debug)]
pub struct Schur {
    pub q: CMat,
    pub t: CMat,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<c64> {
        (0..self.t.nrows()).map(|i| self.t[(i, i)]).collect()
    }
}

/// Plane rotation `G = [c s; -conj(s) c]` with `G [x; y] = [r; 0]`.
#[derive(Clone, Copy)]
struct Givens {
    c: f64,
    s: c64,
}

impl Givens {
    fn zeroing(x: c64, y: c64) -> Self {
        if y == c64::new(0.0, 0.0) {
            return Givens {
                c: 1.0,
                s: c64::new(0.0, 0.0),
            };
        }
        if x == c64::new(0.0, 0.0) {
            return Givens {
                c: 0.0,
                s: y.conj() / y.norm(),
            };
        }
        let ax = x.norm();
        let rho = ax.hypot(y.norm());
        Givens {
            c: ax / rho,
            s: (x / ax) * y.conj() / rho,
        }
    }

    /// Rows `i`, `j` of `m`, columns `cols`: `m <- G m`.
    fn rows(&self, m: &mut CMat, i: usize, j: usize, cols: std::ops::Range<usize>) {
        for k in cols {
            let a = m[(i, k)];
            let b = m[(j, k)];
            m[(i, k)] = a * self.c + self.s * b;
            m[(j, k)] = -self.s.conj() * a + b * self.c;
        }
    }

    /// Columns `i`, `j` of `m`, rows `rows`: `m <- m G^H`.
    fn cols(&self, m: &mut CMat, i: usize, j: usize, rows: std::ops::Range<usize>) {
        for r in rows {
            let a = m[(r, i)];
            let b = m[(r, j)];
            m[(r, i)] = a * self.c + b * self.s.conj();
            m[(r, j)] = -a * self.s + b * self.c;
        }
    }
}

/// Householder reduction to upper Hessenberg form, `A = Q H Q^H`.
fn hessenberg(a: &CMat) -> (CMat, CMat) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut q = CMat::identity(n, n);
    for j in 0..n.saturating_sub(2) {
        let x0 = h[(j + 1, j)];
        let tail: f64 = (j + 2..n).map(|i| h[(i, j)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let norm = (x0.norm_sqr() + tail).sqrt();
        let phase = if x0.norm() == 0.0 {
            c64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let beta = -phase * norm;
        let mut v = vec![c64::new(0.0, 0.0); n];
        v[j + 1] = x0 - beta;
        for i in j + 2..n {
            v[i] = h[(i, j)];
        }
        let vnorm2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;
        // h <- (I - tau v v^H) h
        for c in 0..n {
            let dot: c64 = (j + 1..n).map(|i| v[i].conj() * h[(i, c)]).sum();
            let s = dot * tau;
            for i in j + 1..n {
                h[(i, c)] -= v[i] * s;
            }
        }
        // h <- h (I - tau v v^H), q <- q (I - tau v v^H)
        for m in [&mut h, &mut q] {
            for r in 0..n {
                let dot: c64 = (j + 1..n).map(|i| m[(r, i)] * v[i]).sum();
                let s = dot * tau;
                for i in j + 1..n {
                    m[(r, i)] -= s * v[i].conj();
                }
            }
        }
        for i in j + 2..n {
            h[(i, j)] = c64::new(0.0, 0.0);
        }
    }
    (q, h)
}

fn wilkinson_shift(a: c64, b: c64, c: c64, d: c64) -> c64 {
    let half_tr = (a + d) * 0.5;
    let diff = (a - d) * 0.5;
    let disc = (diff * diff + b * c).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur decomposition by Hessenberg reduction and shifted QR iteration.
pub fn complex_schur(a: &CMat) -> Result<Schur> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "Schur form needs a square matrix");
    for j in 0..n {
        for i in 0..n {
            let v = a[(i, j)];
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(TnfError::NonFinite("matrix passed to Schur".into()));
            }
        }
    }
    let (mut z, mut h) = hessenberg(a);
    if n <= 1 {
        return Ok(Schur { q: z, t: h });
    }
    let hnorm = super::max_abs(&h).max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let max_total = 100 * n.max(10);
    while hi > 0 {
        // Find the start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut scale = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if scale == 0.0 {
                scale = hnorm;
            }
            if sub <= eps * scale {
                h[(lo, lo - 1)] = c64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        total += 1;
        if total > max_total {
            return Err(TnfError::NonFinite("Schur iteration did not converge".into()));
        }
        iter += 1;
        let mu = if iter % 10 == 0 {
            h[(hi, hi)] + c64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        // Implicit single-shift sweep over rows lo..=hi.
        let g = Givens::zeroing(h[(lo, lo)] - mu, h[(lo + 1, lo)]);
        g.rows(&mut h, lo, lo + 1, lo..n);
        g.cols(&mut h, lo, lo + 1, 0..(lo + 3).min(hi + 1));
        g.cols(&mut z, lo, lo + 1, 0..n);
        for k in lo..hi - 1 {
            let g = Givens::zeroing(h[(k + 1, k)], h[(k + 2, k)]);
            g.rows(&mut h, k + 1, k + 2, k..n);
            h[(k + 2, k)] = c64::new(0.0, 0.0);
            g.cols(&mut h, k + 1, k + 2, 0..(k + 4).min(hi + 1));
            g.cols(&mut z, k + 1, k + 2, 0..n);
        }
    }
    for j in 0..n {
        for i in j + 1..n {
            h[(i, j)] = c64::new(0.0, 0.0);
        }
    }
    Ok(Schur { q: z, t: h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, row_orthonormality_error};

    fn sample(n: usize, seed: u64) -> CMat {
        let mut s = seed;
        CMat::from_fn(n, n, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
            c64::new(a, b)
        })
    }

    fn check(a: &CMat) {
        let s = complex_schur(a).unwrap();
        let n = a.nrows();
        assert!(row_orthonormality_error(&s.q) < 1e-12);
        let back = &s.q * &s.t * s.q.adjoint();
        let err = max_abs(&(&back - a));
        assert!(err < 1e-12 * (1.0 + max_abs(a)) * n as f64, "backward error {err}");
        for j in 0..n {
            for i in j + 1..n {
                assert_eq!(s.t[(i, j)], c64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn random_matrices() {
        for (n, seed) in [(1, 1), (2, 2), (5, 3), (30, 4), (80, 5)] {
            check(&sample(n, seed));
        }
    }

    #[test]
    fn real_rotation_has_complex_pair() {
        let a = CMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c64::new(-1.0, 0.0),
            (1, 0) => c64::new(1.0, 0.0),
            _ => c64::new(0.0, 0.0),
        });
        check(&a);
        let mut ev = complex_schur(&a).unwrap().eigenvalues();
        ev.sort_by(|x, y| x.im.partial_cmp(&y.im).unwrap());
        assert!((ev[0] - c64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - c64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn repeated_eigenvalues_and_jordan_block() {
        let mut a = CMat::identity(6, 6);
        a[(0, 1)] = c64::new(1.0, 0.0);
        a[(3, 3)] = c64::new(2.0, 0.0);
        check(&a);
        let diag = CMat::from_fn(4, 4, |i, j| {
            if i == j {
                c64::new(3.0, 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        });
        check(&diag);
    }
}
