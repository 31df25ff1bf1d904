// Extragradient variant. Its step size must stay below 1/(2L); the
// schedule built by `ScheduleConfig::extragradient` uses half of that bound.

use hybrid_eq::model::schedule_params;
use hybrid_eq::{bench, run, InnerSolveConfig, ScheduleConfig, StopConfig, Variant};

fn main() {
    let inst = bench::generate_instance(&bench::GenSpec::new(10, 5)).unwrap();
    let (l1, l2) = inst.f.lipschitz_pair().unwrap();
    let schedule = ScheduleConfig::extragradient(inst.f.as_ref());
    println!(
        "L1 = L2 = {l1:.3}, rho = {:.4e} (bound {:.4e})",
        schedule_params(0, &schedule).rho,
        0.5 / l1.max(l2)
    );

    let stop = StopConfig {
        track_ep_residual: true,
        ..StopConfig::default()
    };
    let report = run(
        &inst,
        Variant::Extragradient,
        &schedule,
        &stop,
        &InnerSolveConfig::default(),
    )
    .unwrap();
    for t in report.trace.iter().step_by(25) {
        println!(
            "k={:>4} step={:.3e} ep={:.3e}",
            t.k,
            t.step_delta,
            t.ep_residual.unwrap()
        );
    }
    println!(
        "{:?} after {} iterations; {} descent checks, {} violated",
        report.terminated,
        report.iterations,
        report.invariants.named("extragradient_descent").count(),
        report.invariants.violations().count()
    );

    // an illegal step size is rejected up front
    let bad = ScheduleConfig::extragradient(inst.f.as_ref())
        .with_rho(hybrid_eq::Sequence::Constant(1.0 / l1));
    println!(
        "rho = 1/L: {}",
        run(
            &inst,
            Variant::Extragradient,
            &bad,
            &stop,
            &InnerSolveConfig::default()
        )
        .unwrap_err()
    );
}
