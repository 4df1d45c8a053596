//! Residuals, Newton refinement, test-system generators and root matching.

use faer::linalg::solvers::SolveLstsq;
use num_complex::Complex64 as c64;

use crate::error::{Result, TnfError};
use crate::linalg::{singular_values, CMat};
use crate::polyring::{
    substitute_linear, BasisKind, Exponent, GradedSupport, MultiPoly, PolySystem,
};
use crate::random;

/// Jacobians with condition number above this are treated as singular.
pub const SINGULAR_JACOBIAN: f64 = 1e12;

/// `max_i |f_i(z)| / (sum_alpha |c_{i,alpha}| |b_alpha(z)| + 1)`.
pub fn residual(system: &PolySystem, z: &[c64]) -> Result<f64> {
    let mut r = 0.0f64;
    for p in system.polys() {
        let v = p.eval(z)?.norm();
        let scale = p.eval_abs(z)? + 1.0;
        r = r.max(v / scale);
    }
    Ok(if r.is_finite() { r } else { f64::INFINITY })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonOutcome {
    pub z: Vec<c64>,
    pub residual: f64,
    /// At least one step was accepted.
    pub refined: bool,
    /// Refinement stopped at a numerically singular Jacobian.
    pub singular: bool,
    pub iterations: usize,
}

fn jacobian(system: &PolySystem, z: &[c64]) -> Result<(Vec<c64>, CMat)> {
    let mut f = Vec::with_capacity(system.len());
    let mut j = CMat::zeros(system.len(), system.nvars());
    for (i, p) in system.polys().iter().enumerate() {
        let (v, g) = p.eval_with_gradient(z)?;
        f.push(v);
        for (k, gk) in g.into_iter().enumerate() {
            j[(i, k)] = gk;
        }
    }
    Ok((f, j))
}

/// At most `max_iters` Newton (Gauss-Newton for overdetermined systems) steps.
///
/// Stops when the step is below `1e-14 (1 + ||z||)`. A step that raises the residual
/// more than tenfold is undone and ends the iteration.
pub fn newton_refine(system: &PolySystem, z: &[c64], max_iters: usize) -> Result<NewtonOutcome> {
    let mut cur = z.to_vec();
    let mut res = residual(system, &cur)?;
    let mut out = NewtonOutcome {
        z: cur.clone(),
        residual: res,
        refined: false,
        singular: false,
        iterations: 0,
    };
    for it in 0..max_iters {
        let (f, j) = jacobian(system, &cur)?;
        let sv = singular_values(&j)?;
        let smax = sv.first().copied().unwrap_or(0.0);
        let smin = sv.last().copied().unwrap_or(0.0);
        if sv.len() < system.nvars() || (smax / smin).is_nan() || smax / smin > SINGULAR_JACOBIAN {
            out.singular = true;
            break;
        }
        let mut rhs = CMat::from_fn(f.len(), 1, |i, _| -f[i]);
        j.qr().solve_lstsq_in_place(rhs.as_mut());
        let step: Vec<c64> = (0..system.nvars()).map(|k| rhs[(k, 0)]).collect();
        let step_norm = step.iter().map(|s| s.norm_sqr()).sum::<f64>().sqrt();
        let z_norm = cur.iter().map(|s| s.norm_sqr()).sum::<f64>().sqrt();
        let next: Vec<c64> = cur.iter().zip(&step).map(|(a, b)| a + b).collect();
        let next_res = residual(system, &next)?;
        out.iterations = it + 1;
        if next_res > 10.0 * res {
            break;
        }
        cur = next;
        res = next_res;
        out.z = cur.clone();
        out.residual = res;
        out.refined = true;
        if step_norm < 1e-14 * (1.0 + z_norm) {
            break;
        }
    }
    Ok(out)
}

fn complex_normal(rng: &mut rand_chacha::ChaCha8Rng) -> c64 {
    let re = random::normal(rng);
    let im = random::normal(rng);
    c64::new(re, im)
}

/// 2-norm condition number of a real square matrix given by rows.
fn condition(a: &[Vec<f64>]) -> Result<f64> {
    let n = a.len();
    let m = CMat::from_fn(n, n, |i, j| c64::new(a[i][j], 0.0));
    let sv = singular_values(&m)?;
    Ok(sv[0] / sv[n - 1])
}

/// Solves the real system `A x = y` for complex `y`.
fn solve_real(a: &[Vec<f64>], y: &[c64]) -> Vec<c64> {
    let n = a.len();
    let m = CMat::from_fn(n, n, |i, j| c64::new(a[i][j], 0.0));
    let f = crate::linalg::FactoredSquare::new(&m).expect("finite matrix");
    let rhs = CMat::from_fn(n, 1, |i, _| y[i]);
    let x = f.solve(&rhs);
    (0..n).map(|i| x[(i, 0)]).collect()
}

/// Square system with `d^n` known roots: `f_i(x) = prod_j ((A x)_i - r_{ij})` for a
/// random real `A` with condition below `1e3` and complex Gaussian `r_{ij}`.
///
/// Returns the system (monomial basis) and its roots `A^{-1} (r_{1 j_1}, ..., r_{n j_n})`,
/// listed with the last index varying fastest.
pub fn synthetic_system(n: usize, d: usize, seed: u64) -> Result<(PolySystem, Vec<Vec<c64>>)> {
    if n == 0 || d == 0 {
        return Err(TnfError::InvalidInput("synthetic systems need n, d >= 1".into()));
    }
    let mut rng = random::rng(seed);
    let a = loop {
        let cand: Vec<Vec<f64>> = (0..n).map(|_| random::normals(&mut rng, n)).collect();
        if condition(&cand)? < 1e3 {
            break cand;
        }
    };
    let r: Vec<Vec<c64>> = (0..n)
        .map(|_| (0..d).map(|_| complex_normal(&mut rng)).collect())
        .collect();
    let a_c: Vec<Vec<c64>> = a
        .iter()
        .map(|row| row.iter().map(|&v| c64::new(v, 0.0)).collect())
        .collect();
    let mut polys = Vec::with_capacity(n);
    for (i, ri) in r.iter().enumerate() {
        // g_i(y) = prod_j (y_i - r_ij), then substitute y = A x.
        let mut g = MultiPoly::from_terms(
            n,
            BasisKind::Monomial,
            [(Exponent::zero(n), c64::new(1.0, 0.0))],
        )?;
        for &rij in ri {
            let lin = MultiPoly::from_terms(
                n,
                BasisKind::Monomial,
                [(Exponent::unit(n, i), c64::new(1.0, 0.0)), (Exponent::zero(n), -rij)],
            )?;
            g = g.mul(&lin);
        }
        polys.push(substitute_linear(&g, &a_c));
    }
    let system = PolySystem::new(n, BasisKind::Monomial, polys)?;
    let mut roots = Vec::with_capacity(d.pow(n as u32));
    let mut idx = vec![0usize; n];
    loop {
        let y: Vec<c64> = (0..n).map(|i| r[i][idx[i]]).collect();
        roots.push(solve_real(&a, &y));
        let mut k = n;
        loop {
            if k == 0 {
                return Ok((system, roots));
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < d {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Square system of dense degree-`d` equations with real Gaussian coefficients on
/// `R_{<=d}`, drawn equation by equation in support order.
pub fn random_dense_system(n: usize, d: usize, seed: u64, kind: BasisKind) -> Result<PolySystem> {
    let mut rng = random::rng(seed);
    let sup = GradedSupport::new(n, d);
    let polys = (0..n)
        .map(|_| {
            let coeffs = random::normals(&mut rng, sup.len());
            MultiPoly::from_terms(
                n,
                kind,
                sup.elems()
                    .iter()
                    .cloned()
                    .zip(coeffs.into_iter().map(|c| c64::new(c, 0.0))),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    PolySystem::new(n, kind, polys)
}

/// Minimum-cost perfect matching of a square cost matrix (Hungarian method).
/// Returns `assignment[row] = column`.
pub fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let inf = f64::INFINITY;
    // 1-based potentials formulation.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}

fn distance(a: &[c64], b: &[c64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Largest Euclidean distance between paired points under the optimal pairing, or
/// `None` when the sets differ in size.
pub fn match_roots(a: &[Vec<c64>], b: &[Vec<c64>]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let cost: Vec<Vec<f64>> = a
        .iter()
        .map(|x| b.iter().map(|y| distance(x, y)).collect())
        .collect();
    let asg = hungarian(&cost);
    Some(
        asg.iter()
            .enumerate()
            .map(|(i, &j)| cost[i][j])
            .fold(0.0, f64::max),
    )
}

/// Largest relative distance `|x - y| / max(1, |y|)` under the optimal pairing.
pub fn match_roots_relative(found: &[Vec<c64>], exact: &[Vec<c64>]) -> Option<f64> {
    if found.len() != exact.len() {
        return None;
    }
    let cost: Vec<Vec<f64>> = found
        .iter()
        .map(|x| {
            exact
                .iter()
                .map(|y| {
                    let ny = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                    distance(x, y) / ny.max(1.0)
                })
                .collect()
        })
        .collect();
    let asg = hungarian(&cost);
    Some(
        asg.iter()
            .enumerate()
            .map(|(i, &j)| cost[i][j])
            .fold(0.0, f64::max),
    )
}

fn integer_poly(n: usize, terms: &[(&[u32], f64)]) -> MultiPoly {
    MultiPoly::from_terms(
        n,
        BasisKind::Monomial,
        terms
            .iter()
            .map(|(e, c)| (Exponent(e.to_vec()), c64::new(*c, 0.0))),
    )
    .expect("fixture terms are valid")
}

/// Three unit spheres centred at `e_1`, `e_2`, `e_3`. Bezout number 8, but only the two
/// roots `(0, 0, 0)` and `(2/3, 2/3, 2/3)`; the rest of the intersection is at infinity.
pub fn three_spheres() -> PolySystem {
    let polys = (0..3)
        .map(|i| {
            let mut lin = [0u32; 3];
            lin[i] = 1;
            integer_poly(
                3,
                &[
                    (&[2, 0, 0], 1.0),
                    (&[0, 2, 0], 1.0),
                    (&[0, 0, 2], 1.0),
                    (&lin, -2.0),
                ],
            )
        })
        .collect();
    PolySystem::new(3, BasisKind::Monomial, polys).expect("fixture is a valid system")
}

/// `(x^2 + y^2 - 1)(y - x^2)` and `(x^2 + y^2 - 1)(y + x^2 - 8)`: the unit circle plus the
/// isolated points `(2, 4)` and `(-2, 4)`.
pub fn quartics_with_circle() -> PolySystem {
    let f1 = integer_poly(
        2,
        &[
            (&[2, 1], 1.0),
            (&[0, 3], 1.0),
            (&[0, 1], -1.0),
            (&[4, 0], -1.0),
            (&[2, 2], -1.0),
            (&[2, 0], 1.0),
        ],
    );
    let f2 = integer_poly(
        2,
        &[
            (&[2, 1], 1.0),
            (&[0, 3], 1.0),
            (&[0, 1], -1.0),
            (&[4, 0], 1.0),
            (&[2, 2], 1.0),
            (&[2, 0], -9.0),
            (&[0, 2], -8.0),
            (&[0, 0], 8.0),
        ],
    );
    PolySystem::new(2, BasisKind::Monomial, vec![f1, f2]).expect("fixture is a valid system")
}
