//! Pure-strategy Nash equilibria.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{FiniteGame, StrategyProfile};
use crate::linalg::Tolerance;
use crate::potential::{validate_potential, PotentialVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquilibriumMethod {
    BruteForce,
    PotentialArgmax,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumSet {
    /// Sorted lexicographically, no duplicates.
    pub profiles: Vec<StrategyProfile>,
    pub method: EquilibriumMethod,
    /// Profiles attaining the global maximum of the potential; empty for
    /// brute force.
    pub global_argmax: Vec<StrategyProfile>,
}

impl EquilibriumSet {
    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn contains(&self, p: &StrategyProfile) -> bool {
        self.profiles.binary_search(p).is_ok()
    }
}

/// Flat indices of profiles where no single coordinate change raises
/// `value(player, idx)` by more than `threshold`.
fn stable_profiles(
    ks: &[usize],
    threshold: f64,
    value: impl Fn(usize, usize) -> f64,
) -> Vec<usize> {
    let total: usize = ks.iter().product();
    let strides: Vec<usize> = (0..ks.len())
        .map(|i| ks[i + 1..].iter().product())
        .collect();
    (0..total)
        .filter(|&idx| {
            ks.iter().enumerate().all(|(i, &ki)| {
                let stride = strides[i];
                let own = (idx / stride) % ki;
                let base = idx - own * stride;
                let here = value(i, idx);
                (0..ki).all(|y| value(i, base + y * stride) - here <= threshold)
            })
        })
        .collect()
}

fn to_profiles(game: &FiniteGame, idx: Vec<usize>) -> Vec<StrategyProfile> {
    // flat order is lexicographic order
    idx.into_iter()
        .map(|i| game.index_to_profile(i).expect("index in range"))
        .collect()
}

/// Every profile at which no player gains more than the zero threshold by a
/// unilateral deviation. Payoffs are maximized.
pub fn pure_nash_brute(game: &FiniteGame, tol: &Tolerance) -> EquilibriumSet {
    let threshold = tol.threshold(game.max_abs_payoff());
    let v = game.payoffs();
    let idx = stable_profiles(game.strategies(), threshold, |i, idx| v[i][idx]);
    EquilibriumSet {
        profiles: to_profiles(game, idx),
        method: EquilibriumMethod::BruteForce,
        global_argmax: Vec::new(),
    }
}

/// Local maxima of a validated potential under unilateral deviations; for a
/// potential game these are exactly its pure Nash equilibria.
pub fn nash_from_potential(
    game: &FiniteGame,
    pv: &PotentialVector,
    tol: &Tolerance,
) -> Result<EquilibriumSet> {
    let check = validate_potential(game, pv, tol)?;
    if !check.potential {
        return Err(Error::Precondition {
            message: "not a valid potential for this game".into(),
            max_residual: check.max_residual,
            residuals: vec![check.max_residual],
        });
    }
    // shift-invariant scale: payoff differences are what is compared
    let threshold = tol.threshold(game.max_abs_payoff());
    let p = &pv.entries;
    let idx = stable_profiles(game.strategies(), threshold, |_, idx| p[idx]);
    let best = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let argmax: Vec<usize> = idx
        .iter()
        .copied()
        .filter(|&i| best - p[i] <= threshold)
        .collect();
    Ok(EquilibriumSet {
        profiles: to_profiles(game, idx),
        method: EquilibriumMethod::PotentialArgmax,
        global_argmax: to_profiles(game, argmax),
    })
}
