// Projections onto a box and a ball, and the checks that make them safe to
// use inside the solvers.

use hybrid_eq::sets::{contains, project};
use hybrid_eq::{BallSet, BoxSet, FeasibleSet, Vector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let cube = BoxSet::cube(3, -1.0, 1.0).unwrap();
    let ball = BallSet::new(Vector::zeros(3), 1.0).unwrap();
    let x = Vector::from_row_slice(&[2.0, -0.5, -3.0]);

    for (name, set) in [("box", &cube as &dyn FeasibleSet), ("ball", &ball)] {
        let p = project(set, &x).unwrap();
        println!(
            "{name:>4}: P(x) = {:?}, in set: {}",
            p.as_slice(),
            contains(set, &p, 1e-12).unwrap()
        );

        // ⟨x - P(x), y - P(x)⟩ ≤ 0 for every y in the set
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let worst = (0..1000)
            .map(|_| (&x - &p).dot(&(set.sample(&mut rng) - &p)))
            .fold(f64::NEG_INFINITY, f64::max);
        println!("      max <x - Px, y - Px> over 1000 samples = {worst:.3e}");
    }
}
