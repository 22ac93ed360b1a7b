//! Pure equilibria of a small congestion game, found by brute force and by
//! maximizing its potential.

use potentia::nash::{nash_from_potential, pure_nash_brute};
use potentia::{FiniteGame, PotentialVector, StrategyProfile, Tolerance};

const ROADS: usize = 2;
const DRIVERS: usize = 3;

// payoff of using a road with `load` drivers on it
fn payoff(road: usize, load: usize) -> f64 {
    let (free, slope) = [(10.0, 3.0), (8.0, 1.0)][road];
    free - slope * load as f64
}

fn main() {
    let game = FiniteGame::zero(vec![ROADS; DRIVERS]).unwrap();
    let loads = |p: &StrategyProfile| {
        let mut l = [0usize; ROADS];
        for &c in p.choices() {
            l[c - 1] += 1;
        }
        l
    };
    let mut payoffs = vec![Vec::new(); DRIVERS];
    let mut rosenthal = Vec::new();
    for p in game.profiles() {
        let l = loads(&p);
        for (i, row) in payoffs.iter_mut().enumerate() {
            let road = p.choices()[i] - 1;
            row.push(payoff(road, l[road]));
        }
        rosenthal.push(
            (0..ROADS)
                .map(|r| (1..=l[r]).map(|m| payoff(r, m)).sum::<f64>())
                .sum(),
        );
    }
    let game = FiniteGame::new(vec![ROADS; DRIVERS], payoffs).unwrap();
    let tol = Tolerance::default();

    let brute = pure_nash_brute(&game, &tol);
    let via = nash_from_potential(&game, &PotentialVector::new(rosenthal), &tol).unwrap();
    println!("equilibria by best responses:");
    for p in &brute.profiles {
        println!("  {p} loads {:?}", loads(p));
    }
    println!("equilibria by potential maxima: {}", via.len());
    let best: Vec<String> = via.global_argmax.iter().map(|p| p.to_string()).collect();
    println!("global maximum at {}", best.join(" "));
    println!("sets agree: {}", via.profiles == brute.profiles);
}
