//! Resultant maps `(q_1, ..., q_s) -> sum_i q_i f_i` as dense matrices.
//!
//! Rows are indexed by the basis of `V = R_{<=rho}`, columns by products `x^alpha f_i`
//! ordered by equation first and then by `alpha` in support order.

use std::collections::HashMap;

use num_complex::Complex64 as c64;

use crate::error::{Result, TnfError};
use crate::linalg::CMat;
use crate::polyring::{binomial, BasisKind, Exponent, GradedSupport, MultiPoly, PolySystem};
use crate::random;

/// Degree bounds of the dense square construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBounds {
    /// `rho = sum d_i - (n - 1)`, the degree of the row support.
    pub rho_v: usize,
    /// `rho_i = sum_{j != i} (d_j - 1)`, the multiplier degree of equation `i`.
    pub rho_vi: Vec<usize>,
}

/// Degree bounds for a square system with the given equation degrees.
pub fn dense_degree_bounds(degrees: &[usize], nvars: usize) -> Result<DegreeBounds> {
    if degrees.len() != nvars {
        return Err(TnfError::NotSquare {
            equations: degrees.len(),
            nvars,
        });
    }
    if degrees.contains(&0) {
        return Err(TnfError::InvalidInput(
            "constant equation in a square system".into(),
        ));
    }
    let total: usize = degrees.iter().sum();
    let rho_v = total + 1 - nvars;
    let rho_vi = degrees
        .iter()
        .map(|&di| total - di + 1 - nvars)
        .collect();
    Ok(DegreeBounds { rho_v, rho_vi })
}

/// Column label `x^shift f_equation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftLabel {
    pub equation: usize,
    pub shift: Exponent,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Columns {
    Shifts(Vec<ShiftLabel>),
    /// Random combinations of the shift columns.
    Compressed { seed: u64, count: usize },
}

impl Columns {
    pub fn len(&self) -> usize {
        match self {
            Columns::Shifts(s) => s.len(),
            Columns::Compressed { count, .. } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug)]
pub struct ResultantMatrix {
    pub rows: GradedSupport,
    pub kind: BasisKind,
    pub columns: Columns,
    pub matrix: CMat,
}

impl ResultantMatrix {
    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.matrix.ncols()
    }
}

/// Products `x^alpha f` with memoization along `x^alpha = x_i x^{alpha - e_i}`.
pub(crate) struct ShiftCache<'a> {
    base: &'a MultiPoly,
    cache: HashMap<Exponent, MultiPoly>,
}

impl<'a> ShiftCache<'a> {
    pub(crate) fn new(base: &'a MultiPoly) -> Self {
        ShiftCache {
            base,
            cache: HashMap::new(),
        }
    }

    pub(crate) fn get(&mut self, alpha: &Exponent) -> MultiPoly {
        if self.base.kind() == BasisKind::Monomial {
            let terms = self.base.terms().map(|(e, &c)| (e.add(alpha), c));
            return MultiPoly::from_terms(self.base.nvars(), BasisKind::Monomial, terms)
                .expect("shifted exponents keep their length");
        }
        if alpha.degree() == 0 {
            return self.base.clone();
        }
        if let Some(p) = self.cache.get(alpha) {
            return p.clone();
        }
        let i = alpha.0.iter().position(|&a| a > 0).unwrap();
        let prev = alpha.lowered(i).unwrap();
        let p = self.get(&prev).mul_var(i);
        self.cache.insert(alpha.clone(), p.clone());
        p
    }
}

/// Writes the coefficients of `p` into column `col` of `m`, indexed by `rows`.
pub(crate) fn fill_column(
    m: &mut CMat,
    col: usize,
    p: &MultiPoly,
    rows: &GradedSupport,
) -> Result<()> {
    for (e, &c) in p.terms() {
        match rows.position(e) {
            Some(r) => m[(r, col)] = c,
            None => {
                return Err(TnfError::DegreeOverflow {
                    degree: e.degree(),
                    bound: rows.degree(),
                })
            }
        }
    }
    Ok(())
}

/// Matrix whose columns are `x^alpha f_i` for the given labels, expressed on `rows`.
pub(crate) fn shift_matrix(
    system: &PolySystem,
    labels: &[ShiftLabel],
    rows: &GradedSupport,
) -> Result<CMat> {
    let mut m = CMat::zeros(rows.len(), labels.len());
    let mut caches: Vec<ShiftCache> = system.polys().iter().map(ShiftCache::new).collect();
    for (col, lab) in labels.iter().enumerate() {
        let p = caches[lab.equation].get(&lab.shift);
        fill_column(&mut m, col, &p, rows)?;
    }
    Ok(m)
}

fn labels_for(multiplier_supports: &[Option<GradedSupport>]) -> Vec<ShiftLabel> {
    let mut labels = Vec::new();
    for (i, sup) in multiplier_supports.iter().enumerate() {
        if let Some(sup) = sup {
            labels.extend(sup.elems().iter().map(|a| ShiftLabel {
                equation: i,
                shift: a.clone(),
            }));
        }
    }
    labels
}

/// Resultant map with row support `R_{<=rho_v}` and multiplier supports `R_{<=rho_vi[i]}`.
pub fn build_resultant(
    system: &PolySystem,
    rho_v: usize,
    rho_vi: &[usize],
) -> Result<ResultantMatrix> {
    if rho_vi.len() != system.len() {
        return Err(TnfError::InvalidInput(format!(
            "{} multiplier degrees for {} equations",
            rho_vi.len(),
            system.len()
        )));
    }
    let rows = GradedSupport::new(system.nvars(), rho_v);
    let sups: Vec<_> = rho_vi
        .iter()
        .map(|&r| Some(GradedSupport::new(system.nvars(), r)))
        .collect();
    let labels = labels_for(&sups);
    let matrix = shift_matrix(system, &labels, &rows)?;
    Ok(ResultantMatrix {
        rows,
        kind: system.kind(),
        columns: Columns::Shifts(labels),
        matrix,
    })
}

/// Resultant map `Res_k` with `V_k = R_{<=k}` and `V_{i,k} = R_{<=k-d_i}` (empty if `k < d_i`).
pub fn build_resultant_graded(system: &PolySystem, k: usize) -> Result<ResultantMatrix> {
    let rows = GradedSupport::new(system.nvars(), k);
    let sups: Vec<_> = system
        .degrees()
        .iter()
        .map(|&d| (k >= d).then(|| GradedSupport::new(system.nvars(), k - d)))
        .collect();
    let labels = labels_for(&sups);
    let matrix = shift_matrix(system, &labels, &rows)?;
    Ok(ResultantMatrix {
        rows,
        kind: system.kind(),
        columns: Columns::Shifts(labels),
        matrix,
    })
}

/// Random column compression `Res * C` with `C` an `m x (l - delta)` real Gaussian matrix.
pub fn fm_reduce(res: &ResultantMatrix, delta: usize, seed: u64) -> Result<ResultantMatrix> {
    let (l, m) = (res.nrows(), res.ncols());
    let target = l.checked_sub(delta).ok_or(TnfError::BadRankHint {
        hint: delta,
        rows: l,
        cols: m,
    })?;
    if target > m {
        return Err(TnfError::TooManyColumns {
            requested: target,
            available: m,
        });
    }
    let mut rng = random::rng(seed);
    // Column-major draw order: all entries of column 0 first.
    let mut c = CMat::zeros(m, target);
    for j in 0..target {
        for i in 0..m {
            c[(i, j)] = c64::new(random::normal(&mut rng), 0.0);
        }
    }
    Ok(ResultantMatrix {
        rows: res.rows.clone(),
        kind: res.kind,
        columns: Columns::Compressed {
            seed,
            count: target,
        },
        matrix: &res.matrix * &c,
    })
}

/// Column counts `(sum_i l_i, l - delta)` before and after compression for `n` dense
/// equations of degree `d`.
pub fn fm_column_counts(n: u64, d: u64) -> (u128, u128) {
    let li = binomial((n - 1) * d + 1, (n - 1) * (d - 1));
    let l = binomial(n * d + 1, n * (d - 1) + 1);
    let delta = (d as u128).pow(n as u32);
    (n as u128 * li, l - delta)
}

/// Ratio of the two counts of [`fm_column_counts`].
pub fn fm_column_ratio(n: u64, d: u64) -> f64 {
    let (full, reduced) = fm_column_counts(n, d);
    full as f64 / reduced as f64
}
