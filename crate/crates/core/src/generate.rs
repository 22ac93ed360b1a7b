//! Random games for experiments and tests.
//!
//! A potential game is built as `c_i = p + d_i` where `p` is random and each
//! dummy term `d_i` ignores player `i`'s own choice, so every unilateral
//! deviation changes `c_i` exactly as much as `p`.

use rand::Rng;

use crate::error::Result;
use crate::game::{BiMatrixGame, FiniteGame};
use crate::linalg::Matrix;
use crate::potential::PotentialVector;

const SPAN: f64 = 10.0;

fn draw(rng: &mut impl Rng) -> f64 {
    rng.random_range(-SPAN..=SPAN)
}

/// A random potential game together with the potential used to build it.
pub fn random_potential_game(
    strategies: &[usize],
    rng: &mut impl Rng,
) -> Result<(FiniteGame, PotentialVector)> {
    let total: usize = strategies.iter().product();
    crate::linalg::check_capacity(strategies.len(), total)?;
    let p: Vec<f64> = (0..total).map(|_| draw(rng)).collect();
    let mut payoffs = Vec::with_capacity(strategies.len());
    let mut stride = total;
    for &ki in strategies {
        stride /= ki;
        // one dummy value per opponent profile
        let dummy: Vec<f64> = (0..total / ki).map(|_| draw(rng)).collect();
        let row = (0..total)
            .map(|idx| {
                let opponents = (idx / (stride * ki)) * stride + idx % stride;
                p[idx] + dummy[opponents]
            })
            .collect();
        payoffs.push(row);
    }
    Ok((
        FiniteGame::new(strategies.to_vec(), payoffs)?,
        PotentialVector::new(p),
    ))
}

/// A game with independent uniform payoffs.
pub fn random_game(strategies: &[usize], rng: &mut impl Rng) -> Result<FiniteGame> {
    let total: usize = strategies.iter().product();
    crate::linalg::check_capacity(strategies.len(), total)?;
    let payoffs = strategies
        .iter()
        .map(|_| (0..total).map(|_| draw(rng)).collect())
        .collect();
    FiniteGame::new(strategies.to_vec(), payoffs)
}

pub fn random_bimatrix(k1: usize, k2: usize, rng: &mut impl Rng) -> Result<BiMatrixGame> {
    let mut m = || Matrix::from_vec(k1, k2, (0..k1 * k2).map(|_| draw(rng)).collect());
    let c1 = m()?;
    let c2 = m()?;
    BiMatrixGame::new(c1, c2)
}

/// Adds `±[1, 3]` to one random payoff entry. Any single-entry change of a
/// game with at least two strategies for two players breaks the potential
/// property.
pub fn perturb(game: &FiniteGame, rng: &mut impl Rng) -> Result<FiniteGame> {
    let mut payoffs = game.payoffs().to_vec();
    let player = rng.random_range(0..payoffs.len());
    let idx = rng.random_range(0..game.profile_count());
    let size = rng.random_range(1.0..=3.0);
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    payoffs[player][idx] += sign * size;
    FiniteGame::new(game.strategies().to_vec(), payoffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Tolerance;
    use crate::potential::validate_potential;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_potential_validates() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for shape in [vec![2, 2], vec![3, 4], vec![2, 3, 2], vec![3, 3, 3, 2]] {
            let (g, p) = random_potential_game(&shape, &mut rng).unwrap();
            assert!(
                validate_potential(&g, &p, &Tolerance::default())
                    .unwrap()
                    .potential
            );
            let bad = perturb(&g, &mut rng).unwrap();
            assert!(
                !validate_potential(&bad, &p, &Tolerance::default())
                    .unwrap()
                    .potential
            );
        }
    }
}
