use num_complex::Complex64 as c64;

use super::CMat;

/// Relative tolerance under which two column norms count as tied.
const TIE_TOL: f64 = 1e-12;

/// Householder QR with column pivoting, `A P = Q R`.
///
/// At every step the remaining column of largest norm is chosen. Columns whose norms are
/// equal up to a relative `1e-12` are tied, and the one with the lowest original index wins.
#[derive(Clone, Debug)]
pub struct ColPivHouseholder {
    /// `R` on and above the diagonal, Householder vectors (with implicit unit head) below.
    factors: CMat,
    tau: Vec<c64>,
    perm: Vec<usize>,
}

impl ColPivHouseholder {
    pub fn new(a: &CMat) -> Self {
        let (m, n) = (a.nrows(), a.ncols());
        let k = m.min(n);
        let mut f = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut tau = Vec::with_capacity(k);
        for j in 0..k {
            let norms: Vec<f64> = (j..n)
                .map(|c| (j..m).map(|i| f[(i, c)].norm_sqr()).sum::<f64>().sqrt())
                .collect();
            let best = norms.iter().cloned().fold(0.0, f64::max);
            let mut p = j;
            let mut p_orig = usize::MAX;
            for (off, &nv) in norms.iter().enumerate() {
                let c = j + off;
                if nv >= best * (1.0 - TIE_TOL) && perm[c] < p_orig {
                    p = c;
                    p_orig = perm[c];
                }
            }
            if p != j {
                perm.swap(p, j);
                for i in 0..m {
                    let t = f[(i, j)];
                    f[(i, j)] = f[(i, p)];
                    f[(i, p)] = t;
                }
            }
            let t = householder_in_place(&mut f, j);
            tau.push(t);
            if t != c64::new(0.0, 0.0) {
                for c in j + 1..n {
                    apply_reflector(&mut f, j, t, c);
                }
            }
        }
        ColPivHouseholder {
            factors: f,
            tau,
            perm,
        }
    }

    pub fn nrows(&self) -> usize {
        self.factors.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.factors.ncols()
    }

    /// Column permutation: position `j` of `A P` holds column `perm()[j]` of `A`.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// The `min(m, n) x n` upper trapezoidal factor.
    pub fn r(&self) -> CMat {
        let k = self.tau.len();
        CMat::from_fn(k, self.ncols(), |i, j| {
            if i <= j {
                self.factors[(i, j)]
            } else {
                c64::new(0.0, 0.0)
            }
        })
    }

    /// Moduli of the diagonal of `R`.
    pub fn r_diag_abs(&self) -> Vec<f64> {
        (0..self.tau.len())
            .map(|i| self.factors[(i, i)].norm())
            .collect()
    }

    /// Overwrites `b` (with `m` rows) by `Q^H b`.
    pub fn apply_qh(&self, b: &mut CMat) {
        assert_eq!(b.nrows(), self.nrows());
        for (j, &t) in self.tau.iter().enumerate() {
            if t == c64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..b.ncols() {
                let mut dot = b[(j, c)];
                for i in j + 1..self.nrows() {
                    dot += self.factors[(i, j)].conj() * b[(i, c)];
                }
                let s = t * dot;
                b[(j, c)] -= s;
                for i in j + 1..self.nrows() {
                    let v = self.factors[(i, j)];
                    b[(i, c)] -= v * s;
                }
            }
        }
    }

    /// The full unitary factor `Q` (`m x m`).
    pub fn q(&self) -> CMat {
        let m = self.nrows();
        let mut q = CMat::identity(m, m);
        // Q = H_0 H_1 ... H_{k-1}, each H_j Hermitian.
        for (j, &t) in self.tau.iter().enumerate().rev() {
            if t == c64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..m {
                let mut dot = q[(j, c)];
                for i in j + 1..m {
                    dot += self.factors[(i, j)].conj() * q[(i, c)];
                }
                let s = t * dot;
                q[(j, c)] -= s;
                for i in j + 1..m {
                    let v = self.factors[(i, j)];
                    q[(i, c)] -= v * s;
                }
            }
        }
        q
    }
}

/// Turns column `j` (rows `j..`) into `beta e_1` and stores the reflector below the diagonal.
/// Returns `tau` with `H = I - tau v v^H`, `v_0 = 1`.
fn householder_in_place(f: &mut CMat, j: usize) -> c64 {
    let m = f.nrows();
    let x0 = f[(j, j)];
    let tail: f64 = (j + 1..m).map(|i| f[(i, j)].norm_sqr()).sum();
    if tail == 0.0 {
        return c64::new(0.0, 0.0);
    }
    let norm = (x0.norm_sqr() + tail).sqrt();
    let phase = if x0.norm() == 0.0 {
        c64::new(1.0, 0.0)
    } else {
        x0 / x0.norm()
    };
    let beta = -phase * norm;
    let v0 = x0 - beta;
    for i in j + 1..m {
        f[(i, j)] /= v0;
    }
    let vnorm2 = 1.0 + tail / v0.norm_sqr();
    f[(j, j)] = beta;
    c64::new(2.0 / vnorm2, 0.0)
}

/// Applies the reflector stored in column `j` to column `c` of `f`.
fn apply_reflector(f: &mut CMat, j: usize, t: c64, c: usize) {
    let m = f.nrows();
    let mut dot = f[(j, c)];
    for i in j + 1..m {
        dot += f[(i, j)].conj() * f[(i, c)];
    }
    let s = t * dot;
    f[(j, c)] -= s;
    for i in j + 1..m {
        let v = f[(i, j)];
        f[(i, c)] -= v * s;
    }
}
