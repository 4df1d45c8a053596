//! Multivariate polynomials over the complex numbers, in monomial or Chebyshev basis.
//!
//! Exponents are ordered by total degree first. Within one degree the exponent with the
//! larger power of `x_1` comes first, then `x_2`, and so on. [`GradedSupport`] enumerates
//! `R_{<=d}` in exactly this order, so `R_{<=k}` is always a prefix of `R_{<=d}` for `k <= d`.

mod chebyshev;
pub mod json;

pub use json::{parse_system, system_to_json, SystemFile};
pub use chebyshev::{
    cheb_coeffs_from_values, cheb_to_monomial, chebyshev_interpolate, chebyshev_nodes,
    dct2_orthonormal, monomial_to_cheb, sample_on_chebyshev_grid,
};

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TnfError};

/// Exponent vector `alpha` of a monomial `x^alpha` (or of a Chebyshev product `T_alpha`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn zero(nvars: usize) -> Self {
        Exponent(vec![0; nvars])
    }

    /// Unit exponent `e_i`.
    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Exponent(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn shifted(&self, i: usize) -> Exponent {
        let mut e = self.clone();
        e.0[i] += 1;
        e
    }

    /// `alpha - e_i`, or `None` when `alpha_i = 0`.
    pub fn lowered(&self, i: usize) -> Option<Exponent> {
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.clone();
        e.0[i] -= 1;
        Some(e)
    }

    /// Number of zero entries.
    pub fn zero_count(&self) -> usize {
        self.0.iter().filter(|&&a| a == 0).count()
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Binomial coefficient, exact for the sizes that occur here.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// All exponents of total degree exactly `d` in `n` variables, in support order.
pub fn exponents_of_degree(n: usize, d: usize) -> Vec<Exponent> {
    fn rec(n: usize, d: usize, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == n {
            prefix.push(d as u32);
            out.push(Exponent(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a as u32);
            rec(n, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Exponent(Vec::new()));
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// The support `R_{<=d}` of all exponents of degree at most `d`.
#[derive(Clone, Debug)]
pub struct GradedSupport {
    nvars: usize,
    degree: usize,
    elems: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl GradedSupport {
    pub fn new(nvars: usize, degree: usize) -> Self {
        let mut elems = Vec::new();
        for k in 0..=degree {
            elems.extend(exponents_of_degree(nvars, k));
        }
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        GradedSupport {
            nvars,
            degree,
            elems,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[Exponent] {
        &self.elems
    }

    pub fn get(&self, i: usize) -> &Exponent {
        &self.elems[i]
    }

    pub fn position(&self, e: &Exponent) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Number of elements of degree at most `k`, i.e. the length of the `R_{<=k}` prefix.
    pub fn prefix_len(&self, k: usize) -> usize {
        binomial((k + self.nvars) as u64, self.nvars as u64) as usize
    }

    /// Indices of the elements whose shifts by every `e_i` stay inside the support.
    /// For `R_{<=d}` this is the prefix `R_{<=d-1}`.
    pub fn interior(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| {
                (0..self.nvars).all(|i| self.index.contains_key(&self.elems[j].shifted(i)))
            })
            .collect()
    }
}

/// `{alpha + e_i : alpha in support}` in the order of the input.
pub fn shift_support(support: &[Exponent], i: usize) -> Vec<Exponent> {
    support.iter().map(|a| a.shifted(i)).collect()
}

/// Basis in which coefficients are expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Monomial,
    Chebyshev,
}

/// Constants of the three-term recurrence `b_{k+1} = (a_k x + b_k) b_k(x) + c_k b_{k-1}(x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Recurrence {
    kind: BasisKind,
}

impl Recurrence {
    pub fn a(&self, k: u32) -> f64 {
        match self.kind {
            BasisKind::Monomial => 1.0,
            BasisKind::Chebyshev if k == 0 => 1.0,
            BasisKind::Chebyshev => 2.0,
        }
    }

    pub fn b(&self, _k: u32) -> f64 {
        0.0
    }

    pub fn c(&self, k: u32) -> f64 {
        match self.kind {
            BasisKind::Monomial => 0.0,
            BasisKind::Chebyshev if k == 0 => 0.0,
            BasisKind::Chebyshev => -1.0,
        }
    }
}

impl BasisKind {
    pub fn recurrence(self) -> Recurrence {
        Recurrence { kind: self }
    }

    pub fn name(self) -> &'static str {
        match self {
            BasisKind::Monomial => "monomial",
            BasisKind::Chebyshev => "chebyshev",
        }
    }

    /// Expansion of `x * b_k` as `(index, coefficient)` pairs in the same basis.
    pub fn times_x(self, k: u32) -> Vec<(u32, f64)> {
        let r = self.recurrence();
        let a = r.a(k);
        let mut out = vec![(k + 1, 1.0 / a)];
        if r.b(k) != 0.0 {
            out.push((k, -r.b(k) / a));
        }
        if k > 0 && r.c(k) != 0.0 {
            out.push((k - 1, -r.c(k) / a));
        }
        out
    }

    /// Values `b_0(x), ..., b_deg(x)` by forward recurrence.
    pub fn values(self, x: c64, deg: usize) -> Vec<c64> {
        let r = self.recurrence();
        let mut v = Vec::with_capacity(deg + 1);
        v.push(c64::new(1.0, 0.0));
        for k in 0..deg {
            let kk = k as u32;
            let mut next = v[k] * (x * r.a(kk) + r.b(kk));
            if k > 0 {
                next += v[k - 1] * r.c(kk);
            }
            v.push(next);
        }
        v
    }

    /// Values and first derivatives of `b_0, ..., b_deg` at `x`.
    pub fn values_and_derivatives(self, x: c64, deg: usize) -> (Vec<c64>, Vec<c64>) {
        let r = self.recurrence();
        let v = self.values(x, deg);
        let mut dv = Vec::with_capacity(deg + 1);
        dv.push(c64::new(0.0, 0.0));
        for k in 0..deg {
            let kk = k as u32;
            let mut next = dv[k] * (x * r.a(kk) + r.b(kk)) + v[k] * r.a(kk);
            if k > 0 {
                next += dv[k - 1] * r.c(kk);
            }
            dv.push(next);
        }
        (v, dv)
    }
}

/// Sparse multivariate polynomial `sum_alpha c_alpha b_alpha(x)`.
///
/// Exact zero coefficients are pruned on construction; nothing else is.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    kind: BasisKind,
    terms: BTreeMap<Exponent, c64>,
}

impl MultiPoly {
    pub fn zero(nvars: usize, kind: BasisKind) -> Self {
        MultiPoly {
            nvars,
            kind,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial from terms, summing repeated exponents.
    pub fn from_terms(
        nvars: usize,
        kind: BasisKind,
        terms: impl IntoIterator<Item = (Exponent, c64)>,
    ) -> Result<Self> {
        let mut p = MultiPoly::zero(nvars, kind);
        for (e, c) in terms {
            if e.nvars() != nvars {
                return Err(TnfError::InvalidInput(format!(
                    "exponent {:?} has {} entries, expected {}",
                    e,
                    e.nvars(),
                    nvars
                )));
            }
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(TnfError::NonFinite(format!("coefficient of {:?}", e)));
            }
            *p.terms.entry(e).or_insert(c64::new(0.0, 0.0)) += c;
        }
        p.prune();
        Ok(p)
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| *c != c64::new(0.0, 0.0));
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &c64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &Exponent) -> c64 {
        self.terms.get(e).copied().unwrap_or_default()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Exponent::degree).max().unwrap_or(0)
    }

    fn max_partial_degrees(&self) -> Vec<usize> {
        let mut m = vec![0usize; self.nvars];
        for e in self.terms.keys() {
            for (mi, &a) in m.iter_mut().zip(&e.0) {
                *mi = (*mi).max(a as usize);
            }
        }
        m
    }

    fn check_point(&self, z: &[c64]) -> Result<()> {
        if z.len() != self.nvars {
            return Err(TnfError::InvalidInput(format!(
                "point has {} coordinates, polynomial has {} variables",
                z.len(),
                self.nvars
            )));
        }
        Ok(())
    }

    fn basis_tables(&self, z: &[c64]) -> Vec<Vec<c64>> {
        let degs = self.max_partial_degrees();
        z.iter()
            .zip(degs)
            .map(|(&x, d)| self.kind.values(x, d))
            .collect()
    }

    pub fn eval(&self, z: &[c64]) -> Result<c64> {
        self.check_point(z)?;
        let tables = self.basis_tables(z);
        Ok(self
            .terms
            .iter()
            .map(|(e, &c)| c * basis_product(&tables, e))
            .sum())
    }

    /// `sum_alpha |c_alpha| |b_alpha(z)|`, the natural scale of `|f(z)|`.
    pub fn eval_abs(&self, z: &[c64]) -> Result<f64> {
        self.check_point(z)?;
        let tables = self.basis_tables(z);
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| c.norm() * basis_product(&tables, e).norm())
            .sum())
    }

    /// Value and gradient at `z`.
    pub fn eval_with_gradient(&self, z: &[c64]) -> Result<(c64, Vec<c64>)> {
        self.check_point(z)?;
        let degs = self.max_partial_degrees();
        let (vals, ders): (Vec<_>, Vec<_>) = z
            .iter()
            .zip(degs)
            .map(|(&x, d)| self.kind.values_and_derivatives(x, d))
            .unzip();
        let mut f = c64::new(0.0, 0.0);
        let mut grad = vec![c64::new(0.0, 0.0); self.nvars];
        for (e, &c) in &self.terms {
            f += c * basis_product(&vals, e);
            for (i, g) in grad.iter_mut().enumerate() {
                let mut prod = c;
                for (j, &a) in e.0.iter().enumerate() {
                    prod *= if i == j {
                        ders[j][a as usize]
                    } else {
                        vals[j][a as usize]
                    };
                }
                *g += prod;
            }
        }
        Ok((f, grad))
    }

    /// `x_i * self`, expressed in the same basis.
    pub fn mul_var(&self, i: usize) -> MultiPoly {
        let mut out: BTreeMap<Exponent, c64> = BTreeMap::new();
        for (e, &c) in &self.terms {
            for (k, w) in self.kind.times_x(e.0[i]) {
                let mut f = e.clone();
                f.0[i] = k;
                *out.entry(f).or_default() += c * w;
            }
        }
        let mut p = MultiPoly {
            nvars: self.nvars,
            kind: self.kind,
            terms: out,
        };
        p.prune();
        p
    }

    /// `x^alpha * self`, expressed in the same basis.
    pub fn mul_monomial(&self, alpha: &Exponent) -> MultiPoly {
        let mut p = self.clone();
        for (i, &a) in alpha.0.iter().enumerate() {
            for _ in 0..a {
                p = p.mul_var(i);
            }
        }
        p
    }

    pub fn scale(&self, s: c64) -> MultiPoly {
        let mut p = self.clone();
        for c in p.terms.values_mut() {
            *c *= s;
        }
        p.prune();
        p
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.kind, other.kind, "adding polynomials in different bases");
        let mut p = self.clone();
        for (e, &c) in &other.terms {
            *p.terms.entry(e.clone()).or_default() += c;
        }
        p.prune();
        p
    }

    /// Product of two monomial-basis polynomials.
    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert!(
            self.kind == BasisKind::Monomial && other.kind == BasisKind::Monomial,
            "products are only formed in the monomial basis"
        );
        let mut out: BTreeMap<Exponent, c64> = BTreeMap::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                *out.entry(a.add(b)).or_default() += ca * cb;
            }
        }
        let mut p = MultiPoly {
            nvars: self.nvars,
            kind: self.kind,
            terms: out,
        };
        p.prune();
        p
    }

    /// The same polynomial expressed in `kind`.
    pub fn to_kind(&self, kind: BasisKind) -> MultiPoly {
        match (self.kind, kind) {
            (a, b) if a == b => self.clone(),
            (BasisKind::Chebyshev, BasisKind::Monomial) => cheb_to_monomial(self),
            _ => monomial_to_cheb(self),
        }
    }
}

/// `p(A y)` for a square matrix `A`, by expansion in the monomial basis. The result is
/// expressed in the basis of `p`.
pub fn substitute_linear(p: &MultiPoly, a: &[Vec<c64>]) -> MultiPoly {
    let n = p.nvars();
    assert!(a.len() == n && a.iter().all(|r| r.len() == n), "A must be n x n");
    let mono = p.to_kind(BasisKind::Monomial);
    let forms: Vec<MultiPoly> = a
        .iter()
        .map(|row| {
            MultiPoly::from_terms(
                n,
                BasisKind::Monomial,
                row.iter()
                    .enumerate()
                    .map(|(k, &c)| (Exponent::unit(n, k), c)),
            )
            .expect("linear form is valid")
        })
        .collect();
    // Powers of each linear form, built on demand.
    let mut powers: Vec<Vec<MultiPoly>> = forms
        .iter()
        .map(|_| vec![MultiPoly::from_terms(n, BasisKind::Monomial, [(Exponent::zero(n), c64::new(1.0, 0.0))]).unwrap()])
        .collect();
    let mut out = MultiPoly::zero(n, BasisKind::Monomial);
    for (e, &c) in mono.terms() {
        let mut term = MultiPoly::from_terms(n, BasisKind::Monomial, [(Exponent::zero(n), c)]).unwrap();
        for (i, &ai) in e.0.iter().enumerate() {
            while powers[i].len() <= ai as usize {
                let next = powers[i].last().unwrap().mul(&forms[i]);
                powers[i].push(next);
            }
            term = term.mul(&powers[i][ai as usize]);
        }
        out = out.add(&term);
    }
    out.to_kind(p.kind())
}

fn basis_product(tables: &[Vec<c64>], e: &Exponent) -> c64 {
    e.0.iter()
        .zip(tables)
        .map(|(&a, t)| t[a as usize])
        .product()
}

/// A list of polynomials in a common basis and variable set.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem {
    nvars: usize,
    kind: BasisKind,
    polys: Vec<MultiPoly>,
}

impl PolySystem {
    pub fn new(nvars: usize, kind: BasisKind, polys: Vec<MultiPoly>) -> Result<Self> {
        if nvars == 0 {
            return Err(TnfError::InvalidInput("system needs at least one variable".into()));
        }
        if polys.is_empty() {
            return Err(TnfError::InvalidInput("system has no equations".into()));
        }
        for (i, p) in polys.iter().enumerate() {
            if p.nvars != nvars || p.kind != kind {
                return Err(TnfError::InvalidInput(format!(
                    "equation {} does not match the system's variables or basis",
                    i
                )));
            }
            if p.is_zero() {
                return Err(TnfError::InvalidInput(format!("equation {} is zero", i)));
            }
        }
        Ok(PolySystem { nvars, kind, polys })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.polys.iter().map(MultiPoly::degree).collect()
    }

    pub fn is_square(&self) -> bool {
        self.polys.len() == self.nvars
    }

    /// Product of the degrees, the number of roots of a generic square system.
    pub fn bezout_number(&self) -> usize {
        self.degrees().iter().product()
    }

    pub fn to_kind(&self, kind: BasisKind) -> PolySystem {
        PolySystem {
            nvars: self.nvars,
            kind,
            polys: self.polys.iter().map(|p| p.to_kind(kind)).collect(),
        }
    }

    pub fn eval(&self, z: &[c64]) -> Result<Vec<c64>> {
        self.polys.iter().map(|p| p.eval(z)).collect()
    }
}
