//! Breaks one payoff of a three-player potential game and reports which
//! two-player sub-games notice.

use potentia::generate::random_potential_game;
use potentia::minimal::{check_all_subgames, is_potential_minimal};
use potentia::{FiniteGame, StrategyProfile, Tolerance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tol = Tolerance::default();
    let (game, _) = random_potential_game(&[3, 3, 3], &mut rng).unwrap();

    let target = StrategyProfile::new(vec![2, 1, 3]);
    let idx = game.profile_to_index(&target).unwrap();
    let mut payoffs = game.payoffs().to_vec();
    payoffs[1][idx] += 1.5;
    let broken = FiniteGame::new(game.strategies().to_vec(), payoffs).unwrap();
    println!("changed player 2's payoff at {target}");

    let minimal = is_potential_minimal(&broken, &tol).unwrap();
    let nonzero = minimal
        .residuals
        .iter()
        .filter(|r| r.abs() > minimal.verdict.threshold)
        .count();
    println!(
        "minimal system: {nonzero} of {} equations violated",
        minimal.residuals.len()
    );

    let report = check_all_subgames(&broken, &tol).unwrap();
    println!("failing sub-games:");
    for f in &report.failures {
        println!(
            "  players {} and {} with the other player at {:?} (residual {:.2})",
            f.i, f.j, f.rest, f.max_residual
        );
    }
}
