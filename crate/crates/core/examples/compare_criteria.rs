//! Runs every applicable criterion on random games and times them.

use std::time::Instant;

use potentia::generate::{perturb, random_potential_game};
use potentia::{check_all, Tolerance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let tol = Tolerance::default();
    for shape in [
        vec![3, 4],
        vec![2, 2, 2],
        vec![3, 3, 3],
        vec![2, 2, 2, 2],
        vec![3, 3, 3, 3],
    ] {
        let (good, _) = random_potential_game(&shape, &mut rng).unwrap();
        let bad = perturb(&good, &mut rng).unwrap();
        for (label, g) in [("potential", &good), ("perturbed", &bad)] {
            let start = Instant::now();
            let report = check_all(g, &tol);
            let took = start.elapsed();
            println!(
                "{shape:?} {label}: consensus {:?} in {:.1?}",
                report.consensus(),
                took
            );
            for r in &report.results {
                println!(
                    "    {:<20} {:<5} residual {:>9.2e} equations {:>5}",
                    r.name, r.verdict.potential, r.verdict.max_residual, r.verdict.equations
                );
            }
        }
    }
}
