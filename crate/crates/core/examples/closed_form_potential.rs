//! Computes the potential of a random four-player game three ways and checks
//! that they agree up to a constant.

use potentia::generate::random_potential_game;
use potentia::minimal::{potential_closed_form, potential_via_elimination};
use potentia::potential::{potential_by_equation, validate_potential};
use potentia::Tolerance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tol = Tolerance::default();
    let (game, _) = random_potential_game(&[3, 3, 3, 3], &mut rng).unwrap();

    let closed = potential_closed_form(&game, 0.0, &tol).unwrap();
    let eliminated = potential_via_elimination(&game, 0.0, &tol).unwrap();
    let solved = potential_by_equation(&game, &tol).unwrap();

    for (name, p) in [
        ("closed form", &closed),
        ("elimination", &eliminated),
        ("equation", &solved),
    ] {
        let v = validate_potential(&game, p, &tol).unwrap();
        println!(
            "{name:<12} valid={} max residual {:.2e} over {} deviations",
            v.potential, v.max_residual, v.equations
        );
    }
    println!(
        "closed form vs equation spread: {:.2e}",
        closed.spread_against(&solved)
    );
    println!(
        "closed form vs elimination spread: {:.2e}",
        closed.spread_against(&eliminated)
    );

    println!("\nfirst profiles:");
    for (profile, value) in game.profiles().zip(&closed.entries).take(6) {
        println!("  {profile} {value:>8.3}");
    }
}
