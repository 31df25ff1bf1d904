// Sampling-based certification of the symmetric generalized hybrid
// inequality, for a map that satisfies it and for one that does not.

use hybrid_eq::maps::{certify_hybrid, fixed_point_residual, ScalingMap};
use hybrid_eq::{BoxSet, DiagonalResolventMap, HybridParams, Vector};

fn main() {
    let n = 4;
    let c = BoxSet::cube(n, -10.0, 10.0).unwrap();
    let t = DiagonalResolventMap::new(Vector::from_row_slice(&[3.0, 0.0, 12.5, 0.0])).unwrap();
    println!("Fix(T) pins coordinates {:?} to zero", t.active_indices());
    let x = Vector::from_row_slice(&[0.0, 4.0, 0.0, -2.0]);
    println!(
        "fixed-point residual of {:?}: {}",
        x.as_slice(),
        fixed_point_residual(&t, &x).unwrap()
    );

    for (name, params) in [
        ("nonexpansive", HybridParams::NONEXPANSIVE),
        ("nonspreading", HybridParams::NONSPREADING),
        ("hybrid", HybridParams::HYBRID),
    ] {
        let rep = certify_hybrid(&t, params, &c, 10_000, 3).unwrap();
        println!(
            "{name:>12}: passed={} max lhs={:.3e}",
            rep.passed, rep.max_lhs
        );
    }

    let doubling = ScalingMap {
        dim: n,
        factor: 2.0,
    };
    let rep = certify_hybrid(&doubling, HybridParams::NONEXPANSIVE, &c, 10_000, 3).unwrap();
    let (wx, wy) = rep.witness.unwrap();
    println!(
        "doubling map: passed={} max lhs={:.3e}\n  witness x={wx:.2?}\n          y={wy:.2?}",
        rep.passed, rep.max_lhs
    );
}
