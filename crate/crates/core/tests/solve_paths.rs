use proptest::prelude::*;
use tnf_core::c64;
use tnf_core::error::TnfError;
use tnf_core::polyring::*;
use tnf_core::rootfind::*;
use tnf_core::solver::*;
use tnf_core::verify::*;

fn generic(seed: u64) -> SolveConfig {
    SolveConfig {
        path: PathChoice::Generic,
        seed,
        ..Default::default()
    }
}

fn real(z: &[f64]) -> Vec<c64> {
    z.iter().map(|&v| c64::new(v, 0.0)).collect()
}

#[test]
fn spheres_through_the_pencil() {
    for method in [CokernelMethod::Direct, CokernelMethod::Dbd] {
        let opts = NongenericOptions {
            method,
            ..Default::default()
        };
        let (roots, report) = solve_nongeneric(&three_spheres(), &opts).unwrap();
        assert_eq!(report.rho, 1);
        assert_eq!(report.cokernel_dim, 9);
        assert_eq!((report.rank_w, report.rank_v), (2, 2));
        let t = 2.0 / 3.0;
        let exact = vec![real(&[0.0, 0.0, 0.0]), real(&[t, t, t])];
        assert!(match_roots(&roots.points(), &exact).unwrap() < 1e-12);
    }
}

#[test]
fn quartic_ranks_differ_at_rho_three() {
    let opts = NongenericOptions {
        rho: Some(3),
        ..Default::default()
    };
    let err = solve_nongeneric(&quartics_with_circle(), &opts).unwrap_err();
    match err {
        TnfError::SubspaceConditions { rank_w, rank_v } => assert_eq!((rank_w, rank_v), (9, 11)),
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn generic_system_through_the_pencil() {
    let (s, exact) = synthetic_system(2, 3, 4).unwrap();
    let (roots, report) = solve_nongeneric(&s, &NongenericOptions::default()).unwrap();
    assert_eq!(report.rank_w, 9);
    assert_eq!(roots.roots.len(), 9);
    assert!(match_roots_relative(&roots.points(), &exact).unwrap() < 1e-8);
}

#[test]
fn auto_path_falls_back_for_spheres() {
    let sol = solve(&three_spheres(), &SolveConfig::default()).unwrap();
    assert_eq!(sol.meta.path, SolvePath::Nongeneric);
    assert_eq!(sol.roots.roots.len(), 2);
}

#[test]
fn linear_system_matches_direct_solve() {
    // Oracle: Cramer's rule on the 2x2 system.
    let s = random_dense_system(2, 1, 8, BasisKind::Monomial).unwrap();
    let c = |p: &MultiPoly, e: [u32; 2]| p.coeff(&Exponent(e.to_vec()));
    let [f, g] = [&s.polys()[0], &s.polys()[1]];
    let (a, b, e) = (c(f, [1, 0]), c(f, [0, 1]), -c(f, [0, 0]));
    let (cc, d, h) = (c(g, [1, 0]), c(g, [0, 1]), -c(g, [0, 0]));
    let det = a * d - b * cc;
    let want = vec![(e * d - b * h) / det, (a * h - e * cc) / det];
    let sol = solve(&s, &generic(0)).unwrap();
    assert_eq!(sol.roots.roots.len(), 1);
    assert!(match_roots(&sol.roots.points(), &[want]).unwrap() < 1e-12);
}

#[test]
fn variants_agree_on_synthetic_systems() {
    for (n, d) in [(2, 4), (3, 2)] {
        let (s, exact) = synthetic_system(n, d, 21).unwrap();
        for config in [
            SolveConfig { refine: true, ..generic(1) },
            SolveConfig { refine: true, columns: ColumnMode::Fm, ..generic(1) },
            SolveConfig { refine: true, cokernel: CokernelMethod::Dbd, ..generic(1) },
            SolveConfig { refine: true, basis_select: BasisSelect::Svd, ..generic(1) },
        ] {
            let sol = solve(&s, &config).unwrap();
            assert!(match_roots_relative(&sol.roots.points(), &exact).unwrap() < 1e-8);
        }
    }
}

#[test]
fn dbd_with_fm_is_rejected() {
    let s = random_dense_system(2, 2, 0, BasisKind::Monomial).unwrap();
    let config = SolveConfig {
        cokernel: CokernelMethod::Dbd,
        columns: ColumnMode::Fm,
        ..generic(0)
    };
    assert!(matches!(solve(&s, &config), Err(TnfError::InvalidInput(_))));
}

#[test]
fn solutions_are_deterministic() {
    let s = random_dense_system(2, 4, 3, BasisKind::Chebyshev).unwrap();
    let a = solve(&s, &generic(9)).unwrap();
    let b = solve(&s, &generic(9)).unwrap();
    assert_eq!(a.roots.points(), b.roots.points());
}

#[test]
fn newton_never_grows_the_residual_tenfold() {
    let (s, exact) = synthetic_system(2, 3, 2).unwrap();
    for z in &exact {
        let start: Vec<c64> = z.iter().map(|v| v + c64::new(1e-3, -2e-3)).collect();
        let r0 = residual(&s, &start).unwrap();
        let out = newton_refine(&s, &start, 3).unwrap();
        assert!(out.residual <= 10.0 * r0);
        assert!(out.residual < 1e-12);
    }
}

#[test]
fn synthetic_roots_are_small_relative_to_coefficients() {
    for (n, d) in [(2, 5), (3, 3)] {
        let (s, roots) = synthetic_system(n, d, 13).unwrap();
        assert_eq!(roots.len(), d.pow(n as u32));
        for f in s.polys() {
            let norm1: f64 = f.terms().map(|(_, c)| c.norm()).sum();
            for z in &roots {
                assert!(f.eval(z).unwrap().norm() < 1e-10 * norm1);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn root_sets_do_not_depend_on_the_seed(sys_seed in 0u64..1000, a in any::<u64>(), b in any::<u64>()) {
        let s = random_dense_system(2, 3, sys_seed, BasisKind::Monomial).unwrap();
        let x = solve(&s, &generic(a));
        let y = solve(&s, &generic(b));
        // Random systems can be ill-conditioned; compare only when both solves succeed.
        if let (Ok(x), Ok(y)) = (x, y) {
            let scale = x.roots.points().iter().flatten().map(|v| v.norm()).fold(1.0, f64::max);
            let m = match_roots(&x.roots.points(), &y.roots.points()).unwrap();
            prop_assert!(m < 1e-6 * scale, "{m}");
        }
    }

    #[test]
    fn commutator_and_annihilation_bounds(seed in 0u64..1000, n in 1usize..=3, d in 1usize..=3) {
        prop_assume!(n < 3 || d < 3);
        let s = random_dense_system(n, d, seed, BasisKind::Chebyshev).unwrap();
        let b = tnf_core::resmap::dense_degree_bounds(&s.degrees(), n).unwrap();
        let res = tnf_core::resmap::build_resultant(&s, b.rho_v, &b.rho_vi).unwrap();
        let policy = tnf_core::linalg::RankPolicy::default();
        let cok = tnf_core::cokernel::cokernel_direct(&res, Some(d.pow(n as u32)), &policy).unwrap();
        prop_assert!(tnf_core::cokernel::annihilation_error(&cok.n, &res.matrix) < 1e-8);
        if let Ok(sol) = solve(&s, &generic(seed)) {
            let tnf = sol.tnf.as_ref().unwrap();
            let bound = 1e-6 * (1.0 + tnf.max_norm().unwrap());
            prop_assert!(tnf.commutator_error().unwrap() < bound);
        }
    }
}

#[test]
fn random_coordinates_map_roots_back() {
    let (s, exact) = synthetic_system(2, 3, 30).unwrap();
    let config = SolveConfig {
        random_coordinates: true,
        refine: true,
        ..generic(6)
    };
    let sol = solve(&s, &config).unwrap();
    assert!(match_roots_relative(&sol.roots.points(), &exact).unwrap() < 1e-8);
}
