mod common;

use common::*;
use proptest::prelude::*;
use rankone::decompose::best_permuted_ldl;
use rankone::*;

fn tol() -> Tolerances64 {
    Tolerances64::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eigh_reconstructs_with_orthonormal_vectors(a in hermitian(1..=7)) {
        let e = a.eigh().unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&a).unwrap() <= 1e-10 * scale_of(&a));
        for (i, u) in e.eigenvectors.iter().enumerate() {
            for (j, v) in e.eigenvectors.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                prop_assert!((u.inner(v) - c(expect, 0.0)).norm() < 1e-10);
            }
        }
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn gram_matrices_are_psd(a in psd(1..=7)) {
        prop_assert!(a.is_psd(tol().psd).unwrap());
    }

    #[test]
    fn ldl_vectors_start_at_increasing_pivots(a in psd(1..=7)) {
        let vs = ldl_factor(&a, tol().pivot).unwrap();
        prop_assert!(verify_reconstruction(&a, &vs, tol().recon).unwrap().pass);
        let firsts: Vec<usize> = vs
            .iter()
            .map(|v| v.iter().position(|z| z.norm() > 0.0).unwrap_or(usize::MAX))
            .collect();
        prop_assert!(firsts.windows(2).all(|w| w[0] < w[1]), "{:?}", firsts);
    }

    #[test]
    fn every_strategy_reconstructs_and_costs_at_least_l11(a in psd(2..=8)) {
        let t = tol();
        let l11 = a.norm_l11();
        let mut decs = vec![ldl_decompose(&a, &t).unwrap(), eigen_decompose(&a, &t).unwrap()];
        if a.n() <= 5 {
            decs.push(greedy_decompose(&a, &GreedyConfig::light(), &t).unwrap());
        }
        if is_diagonally_dominant(&a, t.dd).dominant {
            decs.push(dd_decompose(&a, &t).unwrap());
        }
        for d in decs {
            prop_assert!(d.verify(&a, t.recon).unwrap().pass, "{:?}", d.method());
            prop_assert!(d.cost() >= l11 - 1e-9 * l11.max(1.0), "{:?} {} < {}", d.method(), d.cost(), l11);
        }
    }

    #[test]
    fn dd_decomposition_is_exact(a in diagonally_dominant(2..=8)) {
        let d = dd_decompose(&a, &tol()).unwrap();
        prop_assert!((d.cost() - a.norm_l11()).abs() <= 1e-9 * a.norm_l11().max(1.0));
        prop_assert!(d.verify(&a, tol().recon).unwrap().pass);
        prop_assert!(structured_cost_check(&a, &d));
    }

    #[test]
    fn two_by_two_ldl_is_exact(a in psd(2..=2)) {
        let d = ldl_decompose(&a, &tol()).unwrap();
        prop_assert!((d.cost() - a.norm_l11()).abs() <= 1e-9 * a.norm_l11().max(1.0));
    }

    #[test]
    fn three_by_three_gap_matches_ldl(a in pd(3..=3)) {
        let t = tol();
        let gap = special_3x3_gap(&a, &t).unwrap();
        let d = ldl_decompose(&a, &t).unwrap();
        prop_assert!(gap >= -1e-12);
        prop_assert!((d.cost() - a.norm_l11() - gap).abs() <= 1e-9 * a.norm_l11().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn unit_quad_peel_drops_rank(a in pd(2..=6), seed in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 6)) {
        let n = a.n();
        let x = ComplexVector64::new(seed[..n].iter().map(|&(re, im)| c(re, im)).collect());
        prop_assume!(x.l2_norm() > 1e-3);
        let x = x.scale(1.0 / a.quad_form(&x).sqrt());
        let (step, res) = rank_one_peel(&a, &x).unwrap();
        prop_assert!((step.quad - 1.0).abs() <= 1e-9);
        let op = a.operator_norm().unwrap();
        prop_assert!(res.eigh().unwrap().min_eigenvalue() >= -1e-9 * op.max(1.0));
        let rank_tol = tol().rank;
        prop_assert_eq!(res.numerical_rank(rank_tol).unwrap(), a.numerical_rank(rank_tol).unwrap() - 1);
    }

    #[test]
    fn greedy_never_loses_to_any_pivot_order(a in psd(2..=4)) {
        let t = tol();
        let g = greedy_decompose(&a, &GreedyConfig::light(), &t).unwrap();
        let best = best_permuted_ldl(&a, 4, &t).unwrap();
        prop_assert!(g.cost() <= best.cost() + 1e-6);
    }

    #[test]
    fn positive_scaling_scales_every_cost(a in psd(2..=5), k in -2i32..=3) {
        // powers of four keep square roots exact
        let s = 4f64.powi(k);
        let t = tol();
        let b = a.scale(s);
        let pairs = [
            (ldl_decompose(&a, &t).unwrap().cost(), ldl_decompose(&b, &t).unwrap().cost()),
            (eigen_decompose(&a, &t).unwrap().cost(), eigen_decompose(&b, &t).unwrap().cost()),
        ];
        for (x, y) in pairs {
            prop_assert!((y - s * x).abs() <= 1e-9 * (s * x).max(1.0), "{} vs {}", y, s * x);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn caratheodory_shortens_long_decompositions(
        n in 2usize..=3,
        raw in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 13 * 3),
    ) {
        let m = n * n + 4;
        let vectors: Vec<ComplexVector64> = (0..m)
            .map(|k| ComplexVector64::new((0..n).map(|i| { let (re, im) = raw[k * n + i]; c(re, im) }).collect()))
            .filter(|v| v.l1_norm() > 1e-3)
            .collect();
        let d = RankOneDecomposition64::from_vectors(n, vectors, Method::External).unwrap();
        let r = reduce_decomposition(&d).unwrap();
        prop_assert!(r.len() <= n * n + 1);
        prop_assert!(r.len() <= d.len());
        prop_assert!(r.reconstruct().max_abs_diff(&d.reconstruct()).unwrap() <= 1e-9 * scale_of(&d.reconstruct()));
        prop_assert!((r.cost() - d.cost()).abs() <= 1e-9 * d.cost().max(1.0));
    }
}

#[test]
fn single_precision_ldl_reconstructs() {
    let a = HermitianMatrix32::from_real_rows(&[vec![4.0, 1.0, 0.5], vec![1.0, 3.0, -1.0], vec![0.5, -1.0, 2.0]]).unwrap();
    let t = Tolerances::<f32>::default();
    let d = ldl_decompose(&a, &t).unwrap();
    assert!(d.verify(&a, t.recon).unwrap().pass);
    assert!(d.cost() >= a.norm_l11() - 1e-4);
    let e = eigen_decompose(&a, &t).unwrap();
    assert!(e.verify(&a, t.recon).unwrap().pass);
}
