// The two inner problems: the regularized minimization used by the
// extragradient steps, and the resolvent used by the proximal step.

use hybrid_eq::subproblems::{prox_step_detailed, resolvent, resolvent_gap, subgrad2_select};
use hybrid_eq::{BoxSet, InnerSolveConfig, Matrix, QuadraticBifunction, Vector};

fn main() {
    let c = BoxSet::cube(1, -10.0, 10.0).unwrap();
    let cfg = InnerSolveConfig::default();
    // f(x, y) = y² - x²
    let f = QuadraticBifunction::new(
        Matrix::identity(1, 1),
        Matrix::identity(1, 1),
        Vector::zeros(1),
    )
    .unwrap();
    let x = Vector::from_element(1, 3.0);

    for rho in [0.1, 0.5, 1.0, 4.0] {
        let u = resolvent(&f, &x, rho, &c, &cfg).unwrap();
        let gap = resolvent_gap(&f, &u, &x, rho, &c, 500, 0);
        println!(
            "rho={rho:<4} resolvent={:.6}  analytic={:.6}  sampled gap={gap:.2e}",
            u[0],
            3.0 / (1.0 + 2.0 * rho)
        );
    }

    // 2-D, with the minimizer pushed onto the boundary
    let c2 = BoxSet::cube(2, -1.0, 1.0).unwrap();
    let q = Matrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
    let p = &q + Matrix::identity(2, 2);
    let f2 = QuadraticBifunction::new(p, q, Vector::from_row_slice(&[-8.0, 0.0])).unwrap();
    let base = Vector::from_row_slice(&[0.5, 0.5]);
    let sol = prox_step_detailed(&f2, &base, &base, 1.0, &c2, &cfg).unwrap();
    println!(
        "prox: y = {:?} (certified residual {:.1e}, {} iterations)",
        sol.point.as_slice(),
        sol.residual,
        sol.iterations
    );
    println!(
        "subgradient of f(z, .) at x: {:?}",
        subgrad2_select(&f2, &base, &sol.point).unwrap().as_slice()
    );
}
