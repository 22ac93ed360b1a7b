//! Projects random bi-matrix games onto the potential subspace.

use potentia::generate::random_bimatrix;
use potentia::potential::{bimatrix_is_potential, project_to_potential};
use potentia::Tolerance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tol = Tolerance::default();
    for (k1, k2) in [(2, 2), (2, 3), (3, 3), (4, 2), (4, 4)] {
        let g = random_bimatrix(k1, k2, &mut rng).unwrap();
        let p = project_to_potential(&g);
        let twice = project_to_potential(&p.game);
        println!(
            "{k1}x{k2}: distance {:>7.3}, relative norm {:>7.3}, projected potential {}, second pass moves {:.1e}",
            p.distance,
            g.relative().frobenius_norm(),
            bimatrix_is_potential(&p.game, &tol).potential,
            twice.distance
        );
    }
}
