// A non-quadratic bifunction on a ball, solved through the generic inner
// solvers.
//
// f(x, y) = ⟨F(x), y - x⟩ with F(x) = x + 0.1·sin(x) (componentwise), a
// monotone operator; the only solution on the ball is 0.

use std::sync::Arc;

use hybrid_eq::maps::ScalingMap;
use hybrid_eq::model::ClosureBifunction;
use hybrid_eq::{
    run, BallSet, InnerSolveConfig, ProblemInstance, ScheduleConfig, StopConfig, Variant, Vector,
};

fn main() {
    let n = 3;
    let field = |x: &Vector| x + x.map(f64::sin) * 0.1;
    let f = ClosureBifunction::new(n, move |x, y| field(x).dot(&(y - x)), move |x, _| field(x));
    let inst = ProblemInstance::new(
        Arc::new(BallSet::new(Vector::zeros(n), 2.0).unwrap()),
        Arc::new(f),
        Arc::new(ScalingMap::identity(n)),
    )
    .unwrap()
    .with_start(Vector::from_row_slice(&[1.5, -1.0, 0.5]))
    .unwrap()
    .with_known_solution(Vector::zeros(n))
    .unwrap();

    for variant in [Variant::Proximal, Variant::Linesearch] {
        let r = run(
            &inst,
            variant,
            &ScheduleConfig::default(),
            &StopConfig::default(),
            &InnerSolveConfig::default(),
        )
        .unwrap();
        println!(
            "{variant}: {:?} in {} iterations, |x| = {:.2e}, violations {}",
            r.terminated,
            r.iterations,
            r.final_x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            r.invariants.violations().count()
        );
    }
}
