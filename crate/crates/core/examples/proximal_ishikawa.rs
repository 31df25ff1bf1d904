// Proximal (resolvent) step combined with the Ishikawa iteration, stepping
// by hand and then through the driver.

use hybrid_eq::model::schedule_params;
use hybrid_eq::{
    alg1_step, bench, run, InnerSolveConfig, ScheduleConfig, SolverState, StopConfig, Variant,
};

fn main() {
    let inst = bench::generate_instance(&bench::GenSpec::new(6, 21)).unwrap();
    let schedule = ScheduleConfig::default();
    let inner = InnerSolveConfig::default();

    let mut state = SolverState::new(inst.start.clone().unwrap());
    for k in 0..5 {
        state = alg1_step(&state, &inst, &schedule_params(k, &schedule), &inner).unwrap();
        println!(
            "k={k} |x| = {:.4e}  step = {:.4e}",
            state.x.norm(),
            state.step_delta
        );
    }

    let report = run(
        &inst,
        Variant::Proximal,
        &schedule,
        &StopConfig::default(),
        &inner,
    )
    .unwrap();
    println!(
        "driver: {:?} after {} iterations, |x| = {:.2e}, residuals ep={:.1e} fp={:.1e}",
        report.terminated,
        report.iterations,
        report.final_x.iter().map(|v| v * v).sum::<f64>().sqrt(),
        report.final_ep_residual.unwrap_or(f64::NAN),
        report.final_fixed_point_residual
    );
}
