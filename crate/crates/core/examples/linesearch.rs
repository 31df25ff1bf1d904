// Linesearch variant: no Lipschitz constants needed. Shows the Armijo
// depth per iteration and the quantities of a single step.

use hybrid_eq::model::schedule_params;
use hybrid_eq::{
    alg3_step, bench, run, Aux, InnerSolveConfig, ScheduleConfig, SolverState, StopConfig, Variant,
};

fn main() {
    let inst = bench::generate_instance(&bench::GenSpec::new(5, 8)).unwrap();
    let schedule = ScheduleConfig::default();
    let inner = InnerSolveConfig::default();

    let first = alg3_step(
        &SolverState::new(inst.start.clone().unwrap()),
        &inst,
        &schedule_params(0, &schedule),
        &schedule,
        &inner,
    )
    .unwrap();
    if let Aux::Linesearch { sigma, f_zx, .. } = &first.aux {
        println!(
            "first step: m = {:?}, f(z, x) = {:.4e}, sigma = {:.4e}",
            first.armijo_m,
            f_zx.unwrap(),
            sigma.unwrap()
        );
    }

    let report = run(
        &inst,
        Variant::Linesearch,
        &schedule,
        &StopConfig::default(),
        &inner,
    )
    .unwrap();
    let ms: Vec<u32> = report.trace.iter().filter_map(|t| t.armijo_m).collect();
    println!(
        "{:?} after {} iterations; Armijo depth min/mean/max = {}/{:.1}/{}",
        report.terminated,
        report.iterations,
        ms.iter().min().unwrap(),
        ms.iter().sum::<u32>() as f64 / ms.len() as f64,
        ms.iter().max().unwrap()
    );
    println!(
        "invariant violations: {}",
        report.invariants.violations().count()
    );
}
