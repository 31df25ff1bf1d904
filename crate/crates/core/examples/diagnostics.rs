// Runtime diagnostics: assumption validation before a run, invariant
// checks during it, and what a violation looks like.

use std::collections::BTreeSet;
use std::sync::Arc;

use hybrid_eq::diagnostics::fejer_check;
use hybrid_eq::maps::ScalingMap;
use hybrid_eq::model::validate_instance;
use hybrid_eq::{
    bench, run, BoxSet, InnerSolveConfig, Matrix, ProblemInstance, QuadraticBifunction,
    ScheduleConfig, StopConfig, Variant, Vector,
};

fn main() {
    let inst = bench::generate_instance(&bench::GenSpec::new(4, 2)).unwrap();
    let report = validate_instance(&inst, 500, 2).unwrap();
    for c in &report.checks {
        println!(
            "{:>22}: {} (worst {:.2e})",
            c.name,
            if c.passed { "ok" } else { "VIOLATED" },
            c.worst
        );
    }

    let stop = StopConfig {
        keep_iterates: true,
        ..StopConfig::default()
    };
    let run_report = run(
        &inst,
        Variant::Linesearch,
        &ScheduleConfig::default(),
        &stop,
        &InnerSolveConfig::default(),
    )
    .unwrap();
    let names: BTreeSet<&str> = run_report
        .invariants
        .records
        .iter()
        .map(|r| r.name)
        .collect();
    println!(
        "run checked {:?}: {} records, all satisfied = {}",
        names,
        run_report.invariants.len(),
        run_report.invariants.all_satisfied()
    );

    // perturb the trace: the Fejér check points at the step that moved away
    let mut xs = run_report.iterates().unwrap();
    xs[10] = xs[10].add_scalar(1.0);
    for v in fejer_check(&xs, &Vector::zeros(4)).violations() {
        println!(
            "fejer violated at k={:?}: {:.3} > {:.3}",
            v.iteration, v.lhs, v.rhs
        );
    }

    // P - Q indefinite: the monotonicity check produces a witness
    let bad = ProblemInstance::new(
        Arc::new(BoxSet::cube(2, -1.0, 1.0).unwrap()),
        Arc::new(
            QuadraticBifunction::new(
                Matrix::zeros(2, 2),
                Matrix::identity(2, 2),
                Vector::zeros(2),
            )
            .unwrap(),
        ),
        Arc::new(ScalingMap::identity(2)),
    )
    .unwrap();
    let report = validate_instance(&bad, 200, 0).unwrap();
    let mono = report.get("monotone").unwrap();
    println!(
        "monotone: passed={} worst={:.3} witness={:?}",
        mono.passed, mono.worst, mono.witness
    );
}
