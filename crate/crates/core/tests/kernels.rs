//! Fast kernels against dense references, plus property tests.

mod common;

use common::*;
use fracsolve::spectra::{cluster_report, sym_eigs};
use fracsolve::tau::{tau_dense, tau_eigs, Dst1Plan, TauPrecond1D, TauPrecond2D};
use fracsolve::toeplitz::{build_g, g_first_column, SymToeplitz};
use fracsolve::{
    pcg, Axis, DenseMatrix, FracOperator1D, FracOperator2D, FracOrder, Identity, PcgOptions,
    Scheme, StepParams,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn alpha(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

fn op1(a: f64, scheme: Scheme, m: usize) -> FracOperator1D {
    let params = StepParams::new(1.0 / 16.0, 0.3, 8.0).unwrap();
    FracOperator1D::new(Axis::on_interval(alpha(a), scheme, m, 0.0, 1.0).unwrap(), scheme, params)
}

fn op2(a1: f64, a2: f64, scheme: Scheme, m1: usize, m2: usize) -> FracOperator2D {
    let params = StepParams::new(1.0 / 16.0, 0.3, 8.0).unwrap();
    FracOperator2D::new(
        Axis::on_interval(alpha(a1), scheme, m1, 0.0, 1.0).unwrap(),
        Axis::on_interval(alpha(a2), scheme, m2, 0.0, 1.0).unwrap(),
        scheme,
        params,
    )
}

#[test]
fn toeplitz_matvec_matches_dense() {
    let mut r = rng(1);
    for m in [1, 2, 3, 7, 16, 31, 32, 100] {
        let c = rand_column(&mut r, m);
        let t = SymToeplitz::new(c.clone()).unwrap();
        let d = toeplitz(&c);
        for _ in 0..5 {
            let v = rand_vec(&mut r, m);
            assert!(rel_err(&t.matvec(&v).unwrap(), &mul(&d, &v)) < 1e-12, "M={m}");
        }
    }
}

#[test]
fn g_entries_from_weights() {
    // c_0 = 2 w_1, c_1 = w_0 + w_2, c_k = w_{k+1}
    let a = 1.5;
    let g = |k: usize| -> f64 {
        (1..=k).fold(1.0, |p, j| p * (1.0 - (a + 1.0) / j as f64))
    };
    let w = |k: usize| -> f64 {
        if k == 0 {
            a / 2.0
        } else {
            a / 2.0 * g(k) + (2.0 - a) / 2.0 * g(k - 1)
        }
    };
    let c = g_first_column(alpha(a), Scheme::Pq10, 6).unwrap();
    assert!((c[0] - 2.0 * w(1)).abs() < 1e-15);
    assert!((c[1] - w(0) - w(2)).abs() < 1e-15);
    for k in 2..6 {
        assert!((c[k] - w(k + 1)).abs() < 1e-15);
    }
}

#[test]
fn g_is_negative_semidefinite() {
    for scheme in Scheme::ALL {
        let g = build_g(alpha(1.5), scheme, 32).unwrap().to_dense();
        let e = sym_eigs(&g).unwrap();
        assert!(e.iter().all(|&x| x <= 1e-10), "{scheme}: {}", e[e.len() - 1]);
    }
}

#[test]
fn dst_matches_formula_and_is_involutory() {
    let mut r = rng(2);
    for m in [1, 2, 5, 8, 31, 32, 63] {
        let plan = Dst1Plan::new(m).unwrap();
        let s = dst(m);
        let sq = &s * &s;
        assert!((sq - DMatrix::identity(m, m)).abs().max() < 1e-12);
        for _ in 0..4 {
            let v = rand_vec(&mut r, m);
            let y = plan.apply(&v).unwrap();
            assert!(rel_err(&y, &mul(&s, &v)) < 1e-12, "M={m}");
            assert!(rel_err(&plan.apply(&y).unwrap(), &v) < 1e-12);
        }
    }
}

#[test]
fn tau_eigs_match_direct_sum() {
    let mut r = rng(3);
    for m in [1, 2, 4, 9, 31, 64] {
        let c = rand_column(&mut r, m);
        let fast = tau_eigs(&SymToeplitz::new(c.clone()).unwrap());
        assert!(rel_err(&fast, &tau_eigs_direct(&c)) < 1e-12, "M={m}");
    }
}

#[test]
fn tau_dense_is_hankel_correction() {
    let c = vec![4.0, 1.0, 0.5, 0.25, 0.125];
    let t = tau_dense(&SymToeplitz::new(c.clone()).unwrap()).unwrap();
    let m = c.len();
    let at = |k: usize| if k < m { c[k] } else { 0.0 };
    for i in 1..=m {
        for j in 1..=m {
            let h = at(i + j) + if 2 * (m + 1) >= i + j { at(2 * (m + 1) - (i + j)) } else { 0.0 };
            let want = at(i.abs_diff(j)) - h;
            assert!((t[(i - 1, j - 1)] - want).abs() < 1e-14);
        }
    }
}

#[test]
fn operator_1d_matches_dense() {
    let mut r = rng(4);
    for scheme in Scheme::ALL {
        for m in [2, 8, 17, 32] {
            let op = op1(1.3, scheme, m);
            let d = op1d(&op);
            for _ in 0..4 {
                let v = rand_vec(&mut r, m);
                assert!(rel_err(&op.apply(&v).unwrap(), &mul(&d, &v)) < 1e-10);
            }
        }
    }
}

#[test]
fn operator_2d_matches_dense() {
    let mut r = rng(5);
    for scheme in Scheme::ALL {
        for (m1, m2) in [(2, 3), (5, 5), (8, 7), (8, 8)] {
            let op = op2(1.2, 1.7, scheme, m1, m2);
            let d = op2d(&op);
            for _ in 0..4 {
                let v = rand_vec(&mut r, m1 * m2);
                assert!(rel_err(&op.apply(&v).unwrap(), &mul(&d, &v)) < 1e-10);
            }
            assert!((to_na(&op.to_dense().unwrap()) - &d).abs().max() < 1e-9);
        }
    }
}

#[test]
fn precond_1d_matches_dense() {
    let mut r = rng(6);
    for m in [3, 16, 32] {
        let op = op1(1.6, Scheme::Pq1m1, m);
        let p = TauPrecond1D::new(&op).unwrap();
        let d = tau1d(&op);
        let inv = d.clone().try_inverse().unwrap();
        for _ in 0..4 {
            let v = rand_vec(&mut r, m);
            assert!(rel_err(&p.apply_forward(&v).unwrap(), &mul(&d, &v)) < 1e-10);
            assert!(rel_err(&p.solve(&v).unwrap(), &mul(&inv, &v)) < 1e-10);
        }
    }
}

#[test]
fn precond_2d_matches_dense() {
    let mut r = rng(7);
    for (m1, m2) in [(3, 4), (8, 8)] {
        let op = op2(1.4, 1.9, Scheme::Pq10, m1, m2);
        let p = TauPrecond2D::new(&op).unwrap();
        let d = tau2d(&op);
        let inv = d.clone().try_inverse().unwrap();
        for _ in 0..4 {
            let v = rand_vec(&mut r, m1 * m2);
            assert!(rel_err(&p.apply_forward(&v).unwrap(), &mul(&d, &v)) < 1e-10);
            assert!(rel_err(&p.solve(&v).unwrap(), &mul(&inv, &v)) < 1e-10);
        }
    }
}

#[test]
fn inverse_square_root_squares_to_inverse() {
    let op = op1(1.5, Scheme::Pq10, 20);
    let p = TauPrecond1D::new(&op).unwrap();
    let v = rand_vec(&mut rng(8), 20);
    let twice = p.apply_inv_sqrt(&p.apply_inv_sqrt(&v).unwrap()).unwrap();
    assert!(rel_err(&twice, &p.solve(&v).unwrap()) < 1e-12);
}

#[test]
fn jacobi_matches_nalgebra() {
    let mut r = rng(9);
    for n in [1, 2, 3, 10, 33, 64] {
        let a = DMatrix::from_fn(n, n, |_, _| 0.0);
        let mut a = a;
        for i in 0..n {
            for j in 0..=i {
                let x: f64 = rand_vec(&mut r, 1)[0];
                a[(i, j)] = x;
                a[(j, i)] = x;
            }
        }
        let mut want: Vec<f64> = a.clone().symmetric_eigenvalues().as_slice().to_vec();
        want.sort_by(f64::total_cmp);
        let got = sym_eigs(&DenseMatrix::from_fn(n, n, |i, j| a[(i, j)])).unwrap();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-10, "n={n}");
        }
    }
}

#[test]
fn jacobi_three_by_three_hand_case() {
    // [[2,-1,0],[-1,2,-1],[0,-1,2]] has eigenvalues 2 - sqrt2, 2, 2 + sqrt2
    let a = DenseMatrix::from_row_major(3, 3, vec![2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0])
        .unwrap();
    let e = sym_eigs(&a).unwrap();
    let s = std::f64::consts::SQRT_2;
    for (g, w) in e.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
        assert!((g - w).abs() < 1e-12);
    }
}

#[test]
fn pcg_with_tau_beats_cg() {
    let op = op1(1.8, Scheme::Pq10, 511);
    let p = TauPrecond1D::new(&op).unwrap();
    let b = rand_vec(&mut rng(10), 511);
    let (x1, s1) = pcg(&op, &Identity, &b, PcgOptions::default()).unwrap();
    let (x2, s2) = pcg(&op, &p, &b, PcgOptions::default()).unwrap();
    assert!(s1.converged && s2.converged);
    assert!(s2.iterations * 5 < s1.iterations, "{} vs {}", s2.iterations, s1.iterations);
    assert!(rel_err(&x1, &x2) < 1e-6);
    let d = op1d(&op);
    let x = d.lu().solve(&nalgebra::DVector::from_column_slice(&b)).unwrap();
    assert!(rel_err(&x2, x.as_slice()) < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tau_algebra_is_exact(seed in any::<u64>(), m in 1usize..40) {
        let c = rand_column(&mut rng(seed), m);
        let t = SymToeplitz::new(c).unwrap();
        let lhs = to_na(&tau_dense(&t).unwrap());
        let rhs = spectral(&dst(m), &tau_eigs(&t));
        prop_assert!((lhs - rhs).abs().max() <= 1e-10);
    }

    #[test]
    fn toeplitz_is_self_adjoint(seed in any::<u64>(), m in 1usize..64) {
        let mut r = rng(seed);
        let t = SymToeplitz::new(rand_column(&mut r, m)).unwrap();
        let x = rand_vec(&mut r, m);
        let y = rand_vec(&mut r, m);
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
        let l = dot(&t.matvec(&x).unwrap(), &y);
        let rr = dot(&x, &t.matvec(&y).unwrap());
        prop_assert!((l - rr).abs() <= 1e-11 * (1.0 + l.abs()));
    }

    #[test]
    fn dst_round_trip(seed in any::<u64>(), m in 1usize..80) {
        let v = rand_vec(&mut rng(seed), m);
        let p = Dst1Plan::new(m).unwrap();
        let back = p.apply(&p.apply(&v).unwrap()).unwrap();
        prop_assert!(rel_err(&back, &v) < 1e-12);
    }

    #[test]
    fn precond_solve_inverts_forward(seed in any::<u64>(), m1 in 2usize..12, m2 in 2usize..12, a in 1.05f64..1.95) {
        let op = op2(a, 3.0 - a, Scheme::Pq1m1, m1, m2);
        let p = TauPrecond2D::new(&op).unwrap();
        let v = rand_vec(&mut rng(seed), m1 * m2);
        let back = p.solve(&p.apply_forward(&v).unwrap()).unwrap();
        prop_assert!(rel_err(&back, &v) < 1e-10);
    }

    #[test]
    fn pcg_solves_spd(seed in any::<u64>(), n in 1usize..30) {
        let mut r = rng(seed);
        let b = DMatrix::from_fn(n, n, |_, _| 0.0).map(|_: f64| rand_vec(&mut r, 1)[0]);
        let a = &b * b.transpose() + DMatrix::identity(n, n) * n as f64;
        let rhs = rand_vec(&mut r, n);
        let ad = DenseMatrix::from_fn(n, n, |i, j| a[(i, j)]);
        let apply = |x: &[f64], y: &mut [f64]| y.copy_from_slice(&ad.matvec(x).unwrap());
        let (x, st) = pcg(&apply, &Identity, &rhs, PcgOptions::default()).unwrap();
        prop_assert!(st.converged);
        prop_assert!(st.iterations <= n + 2);
        let res = mul(&a, &x);
        prop_assert!(rel_err(&res, &rhs) < 1e-7);
    }

    #[test]
    fn eigen_trace_preserved(seed in any::<u64>(), n in 1usize..25) {
        let mut r = rng(seed);
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let x = rand_vec(&mut r, 1)[0];
                a.as_mut_slice()[i * n + j] = x;
                a.as_mut_slice()[j * n + i] = x;
            }
        }
        let e = sym_eigs(&a).unwrap();
        prop_assert!(e.windows(2).all(|w| w[0] <= w[1]));
        let s: f64 = e.iter().sum();
        prop_assert!((s - a.trace()).abs() <= 1e-9 * (1.0 + a.trace().abs()));
    }

    #[test]
    fn cluster_fractions_monotone(seed in any::<u64>(), n in 1usize..50) {
        let eigs = rand_vec(&mut rng(seed), n);
        let rep = cluster_report(&eigs, 0.1, &[0.5, 0.01, 0.2, 1.0]).unwrap();
        prop_assert!(rep.fractions.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(rep.fractions.iter().all(|f| (0.0..=1.0).contains(f)));
    }
}
