use proptest::prelude::*;
use tnf_core::c64;
use tnf_core::polyring::*;

prop_compose! {
    fn small_poly(nvars: usize, max_deg: usize)
        (terms in prop::collection::vec(
            (prop::collection::vec(0u32..=max_deg as u32, nvars), -2.0f64..2.0, -2.0f64..2.0),
            1..8))
        -> Vec<(Vec<u32>, f64, f64)> { terms }
}

fn build(nvars: usize, kind: BasisKind, terms: &[(Vec<u32>, f64, f64)]) -> MultiPoly {
    MultiPoly::from_terms(
        nvars,
        kind,
        terms.iter().map(|(e, re, im)| (Exponent(e.clone()), c64::new(*re, *im))),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn support_size_is_binomial(n in 1usize..5, d in 0usize..7) {
        let s = GradedSupport::new(n, d);
        prop_assert_eq!(s.len() as u128, binomial((d + n) as u64, n as u64));
        for w in s.elems().windows(2) {
            prop_assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn chebyshev_and_monomial_evaluations_agree(
        terms in small_poly(2, 5),
        x in -1.5f64..1.5, y in -1.5f64..1.5, xi in -0.5f64..0.5,
    ) {
        let p = build(2, BasisKind::Chebyshev, &terms);
        let m = cheb_to_monomial(&p);
        let z = [c64::new(x, xi), c64::new(y, 0.0)];
        let a = p.eval(&z).unwrap();
        let b = m.eval(&z).unwrap();
        prop_assert!((a - b).norm() <= 1e-11 * (1.0 + a.norm()), "{} vs {}", a, b);
    }

    #[test]
    fn basis_round_trip(terms in small_poly(3, 4)) {
        let m = build(3, BasisKind::Monomial, &terms);
        let back = cheb_to_monomial(&monomial_to_cheb(&m));
        for (e, &c) in back.terms() {
            prop_assert!((c - m.coeff(e)).norm() < 1e-12);
        }
        for (e, &c) in m.terms() {
            prop_assert!((c - back.coeff(e)).norm() < 1e-12);
        }
    }

    #[test]
    fn dct_round_trip(d1 in 0usize..=20, d2 in 0usize..=6, seed in any::<u64>()) {
        // Random Chebyshev coefficients on the tensor grid, sampled and recovered.
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut terms = Vec::new();
        for a in 0..=d1 as u32 {
            for b in 0..=d2 as u32 {
                terms.push((Exponent(vec![a, b]), c64::new(next(), next())));
            }
        }
        let p = MultiPoly::from_terms(2, BasisKind::Chebyshev, terms).unwrap();
        let q = chebyshev_interpolate(&p, &[d1, d2]).unwrap();
        for a in 0..=d1 as u32 {
            for b in 0..=d2 as u32 {
                let e = Exponent(vec![a, b]);
                prop_assert!((p.coeff(&e) - q.coeff(&e)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn mul_var_matches_pointwise_product(terms in small_poly(2, 4), i in 0usize..2,
        x in -1.0f64..1.0, y in -1.0f64..1.0) {
        for kind in [BasisKind::Monomial, BasisKind::Chebyshev] {
            let p = build(2, kind, &terms);
            let z = [c64::new(x, 0.1), c64::new(y, -0.2)];
            let lhs = p.mul_var(i).eval(&z).unwrap();
            let rhs = z[i] * p.eval(&z).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
        }
    }
}

#[test]
fn univariate_one_dimensional_dct_example() {
    // T_0 + 2 T_1 - T_3 sampled on 4 nodes.
    let p = MultiPoly::from_terms(
        1,
        BasisKind::Chebyshev,
        [
            (Exponent(vec![0]), c64::new(1.0, 0.0)),
            (Exponent(vec![1]), c64::new(2.0, 0.0)),
            (Exponent(vec![3]), c64::new(-1.0, 0.0)),
        ],
    )
    .unwrap();
    let values = sample_on_chebyshev_grid(&p, &[3]).unwrap();
    let c = cheb_coeffs_from_values(&values, &[3]).unwrap();
    let want = [1.0, 2.0, 0.0, -1.0];
    for (got, w) in c.iter().zip(want) {
        assert!((got - c64::new(w, 0.0)).norm() < 1e-14);
    }
}

#[test]
fn chebyshev_nodes_are_interior_and_descending() {
    let w = chebyshev_nodes(4);
    assert_eq!(w.len(), 5);
    assert!((w[2]).abs() < 1e-15);
    for pair in w.windows(2) {
        assert!(pair[0] > pair[1]);
    }
}
