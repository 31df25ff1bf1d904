use hybrid_eq::maps::apply_map;
use hybrid_eq::sets::{contains, project, BallSet, BoxSet};
use hybrid_eq::subproblems::{prox_step, resolvent};
use hybrid_eq::{
    Bifunction, DiagonalResolventMap, InnerSolveConfig, Matrix, QuadraticBifunction, Vector,
};
use proptest::prelude::*;

const N: usize = 4;

fn vec_in(lo: f64, hi: f64) -> impl Strategy<Value = Vector> {
    prop::collection::vec(lo..hi, N).prop_map(Vector::from_vec)
}

/// `(Q, P)` with Q and P - Q both Gram matrices.
fn monotone_pair() -> impl Strategy<Value = (Matrix, Matrix)> {
    (
        prop::collection::vec(-2.0..2.0f64, N * N),
        prop::collection::vec(-2.0..2.0f64, N * N),
    )
        .prop_map(|(a, b)| {
            let a = Matrix::from_vec(N, N, a);
            let b = Matrix::from_vec(N, N, b);
            let q = a.tr_mul(&a);
            let p = &q + b.tr_mul(&b);
            ((&q + q.transpose()) * 0.5, (&p + p.transpose()) * 0.5)
        })
}

fn cube() -> BoxSet {
    BoxSet::cube(N, -3.0, 3.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn box_projection_is_firmly_nonexpansive(x in vec_in(-9.0, 9.0), y in vec_in(-9.0, 9.0)) {
        let c = cube();
        let (px, py) = (project(&c, &x).unwrap(), project(&c, &y).unwrap());
        prop_assert!(contains(&c, &px, 0.0).unwrap());
        prop_assert!((&px - &py).norm_squared() <= (&px - &py).dot(&(&x - &y)) + 1e-10);
    }

    #[test]
    fn ball_projection_is_idempotent_and_nonexpansive(x in vec_in(-9.0, 9.0), y in vec_in(-9.0, 9.0)) {
        let b = BallSet::new(Vector::from_element(N, 0.5), 2.0).unwrap();
        let (px, py) = (project(&b, &x).unwrap(), project(&b, &y).unwrap());
        prop_assert!((project(&b, &px).unwrap() - &px).norm() <= 1e-12);
        prop_assert!((&px - &py).norm() <= (&x - &y).norm() + 1e-12);
    }

    #[test]
    fn quadratic_monotonicity_identity((q, p) in monotone_pair(), x in vec_in(-3.0, 3.0), y in vec_in(-3.0, 3.0)) {
        let f = QuadraticBifunction::new(p.clone(), q.clone(), Vector::zeros(N)).unwrap();
        let d = &y - &x;
        let expected = -(d.dot(&((&p - &q) * &d)));
        let got = f.eval(&x, &y) + f.eval(&y, &x);
        prop_assert!((got - expected).abs() <= 1e-9 * (1.0 + expected.abs()));
        prop_assert!(got <= 1e-9 * (1.0 + expected.abs()));
        prop_assert_eq!(f.eval(&x, &x), 0.0);
    }

    #[test]
    fn prox_beats_feasible_points((q, p) in monotone_pair(), base in vec_in(-3.0, 3.0), anchor in vec_in(-5.0, 5.0),
                                  rho in 0.01..2.0f64, probes in prop::collection::vec(vec_in(-3.0, 3.0), 50)) {
        let f = QuadraticBifunction::new(p, q, Vector::zeros(N)).unwrap();
        let c = cube();
        let cfg = InnerSolveConfig { tol: 1e-10, ..InnerSolveConfig::default() };
        let y = prox_step(&f, &base, &anchor, rho, &c, &cfg).unwrap();
        let obj = |z: &Vector| rho * f.eval(&base, z) + 0.5 * (z - &anchor).norm_squared();
        let best = obj(&y);
        for z in &probes {
            prop_assert!(best <= obj(z) + 1e-7);
        }
    }

    #[test]
    fn resolvent_is_firmly_nonexpansive((q, p) in monotone_pair(), x in vec_in(-5.0, 5.0), y in vec_in(-5.0, 5.0), rho in 0.05..2.0f64) {
        let f = QuadraticBifunction::new(p, q, Vector::zeros(N)).unwrap();
        let c = cube();
        let cfg = InnerSolveConfig { tol: 1e-11, ..InnerSolveConfig::default() };
        let ux = resolvent(&f, &x, rho, &c, &cfg).unwrap();
        let uy = resolvent(&f, &y, rho, &c, &cfg).unwrap();
        prop_assert!((&ux - &uy).norm_squared() <= (&ux - &uy).dot(&(&x - &y)) + 1e-7);
    }

    #[test]
    fn diagonal_map_is_quasi_nonexpansive(u in prop::collection::vec(0.0..25.0f64, N), x in vec_in(-10.0, 10.0)) {
        let t = DiagonalResolventMap::new(Vector::from_vec(u.clone())).unwrap();
        // 0 is always fixed; the projection of x onto Fix(T) zeros the active entries
        let fixed = Vector::from_fn(N, |i, _| if u[i] > 0.0 { 0.0 } else { x[i] });
        let tx = apply_map(&t, &x).unwrap();
        prop_assert!(tx.norm() <= x.norm() + 1e-12);
        prop_assert!((&tx - &fixed).norm() <= (&x - &fixed).norm() + 1e-12);
    }
}
