//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use potentia::generate::{perturb, random_potential_game};
use potentia::{BiMatrixGame, FiniteGame, Matrix, PotentialVector, StrategyProfile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Decodes a flat index with the first player slowest, 0-based.
pub fn decode(ks: &[usize], mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; ks.len()];
    for i in (0..ks.len()).rev() {
        out[i] = idx % ks[i];
        idx /= ks[i];
    }
    out
}

pub fn encode(ks: &[usize], choice: &[usize]) -> usize {
    let mut idx = 0;
    for (c, k) in choice.iter().zip(ks) {
        idx = idx * k + c;
    }
    idx
}

/// Largest violation of `c_i(x, s) - c_i(y, s) = p(x, s) - p(y, s)` over all
/// players, profiles and alternatives.
pub fn deviation_residual(game: &FiniteGame, p: &[f64]) -> f64 {
    let ks = game.strategies();
    let mut worst = 0.0_f64;
    for idx in 0..game.profile_count() {
        let here = decode(ks, idx);
        for (i, &ki) in ks.iter().enumerate() {
            for y in 0..ki {
                let mut there = here.clone();
                there[i] = y;
                let alt = encode(ks, &there);
                let c = &game.payoffs()[i];
                worst = worst.max(((c[idx] - c[alt]) - (p[idx] - p[alt])).abs());
            }
        }
    }
    worst
}

/// Profiles (1-based) where nobody gains more than `eps` by deviating.
pub fn nash_oracle(game: &FiniteGame, eps: f64) -> Vec<StrategyProfile> {
    let ks = game.strategies();
    let mut out = Vec::new();
    for idx in 0..game.profile_count() {
        let here = decode(ks, idx);
        let stable = ks.iter().enumerate().all(|(i, &ki)| {
            (0..ki).all(|y| {
                let mut there = here.clone();
                there[i] = y;
                game.payoffs()[i][encode(ks, &there)] - game.payoffs()[i][idx] <= eps
            })
        });
        if stable {
            out.push(StrategyProfile::new(here.iter().map(|c| c + 1).collect()));
        }
    }
    out
}

/// `max - min` of `a - b`.
pub fn spread(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let hi = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = d.iter().copied().fold(f64::INFINITY, f64::min);
    hi - lo
}

pub fn bimatrix(c1: &[&[f64]], c2: &[&[f64]]) -> BiMatrixGame {
    BiMatrixGame::new(
        Matrix::from_rows(c1).unwrap(),
        Matrix::from_rows(c2).unwrap(),
    )
    .unwrap()
}

pub fn matching_pennies() -> FiniteGame {
    FiniteGame::from_bimatrix(&bimatrix(
        &[&[1.0, -1.0], &[-1.0, 1.0]],
        &[&[-1.0, 1.0], &[1.0, -1.0]],
    ))
}

/// A generated game with its ground truth.
pub struct Case {
    pub game: FiniteGame,
    pub potential: bool,
    /// The potential used to build the game, for potential cases.
    pub source: Option<PotentialVector>,
}

pub fn shapes() -> Vec<Vec<usize>> {
    let mut s = Vec::new();
    for k1 in 2..=4 {
        for k2 in 2..=4 {
            s.push(vec![k1, k2]);
        }
    }
    for k in 2..=3 {
        s.push(vec![k; 3]);
        s.push(vec![k; 4]);
    }
    s
}

/// `per_shape` potential games per shape, each followed by a perturbed copy.
pub fn suite(seed: u64, per_shape: usize) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for shape in shapes() {
        for _ in 0..per_shape {
            let (game, p) = random_potential_game(&shape, &mut rng).unwrap();
            let bad = perturb(&game, &mut rng).unwrap();
            out.push(Case {
                game,
                potential: true,
                source: Some(p),
            });
            out.push(Case {
                game: bad,
                potential: false,
                source: None,
            });
        }
    }
    out
}
