//! Finite normal-form games and the profile <-> flat-index bijection.
//!
//! Profiles are ordered lexicographically with player 1 varying slowest and
//! player n fastest, which is the order produced by the Kronecker product
//! `x_1 ⊗ x_2 ⊗ ... ⊗ x_n` of logical strategy vectors. Every structured
//! matrix in this crate assumes that order.
//!
//! Players and strategies are numbered from 1 at the API surface.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_capacity, max_abs, Matrix};

/// Optional display labels carried through parsing and serialization.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Labels {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub players: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub strategies: Vec<Vec<String>>,
}

/// One strategy choice per player, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrategyProfile(Vec<usize>);

impl StrategyProfile {
    pub fn new(choices: Vec<usize>) -> Self {
        Self(choices)
    }

    pub fn choices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Copy of the profile with player `player`'s choice replaced.
    pub fn with_choice(&self, player: usize, choice: usize) -> Self {
        let mut c = self.0.clone();
        c[player - 1] = choice;
        Self(c)
    }
}

impl std::fmt::Display for StrategyProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Flat index of a 0-based multi-index in lexicographic order (first axis slowest).
pub(crate) fn flat_index(dims: &[usize], idx: &[usize]) -> usize {
    idx.iter().zip(dims).fold(0, |acc, (&i, &d)| acc * d + i)
}

/// 0-based multi-index of a flat index.
pub(crate) fn multi_index(dims: &[usize], mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0; dims.len()];
    for (slot, &d) in idx.iter_mut().zip(dims).rev() {
        *slot = flat % d;
        flat /= d;
    }
    idx
}

/// A finite game: `n >= 2` players, strategy counts `k_j`, and one payoff
/// row (the structure vector) per player over all profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGame {
    strategies: Vec<usize>,
    payoffs: Vec<Vec<f64>>,
    labels: Option<Labels>,
}

impl FiniteGame {
    pub fn new(strategies: Vec<usize>, payoffs: Vec<Vec<f64>>) -> Result<Self> {
        if strategies.len() < 2 {
            return Err(Error::InvalidDimension(format!(
                "a game needs at least 2 players, got {}",
                strategies.len()
            )));
        }
        if let Some(p) = strategies.iter().position(|&k| k == 0) {
            return Err(Error::InvalidDimension(format!(
                "player {} has no strategies",
                p + 1
            )));
        }
        let profiles = strategies
            .iter()
            .try_fold(1usize, |acc, &k| acc.checked_mul(k))
            .ok_or(Error::Capacity {
                rows: usize::MAX,
                cols: 1,
                cap: crate::linalg::MAX_ENTRIES,
            })?;
        check_capacity(strategies.len(), profiles)?;
        if payoffs.len() != strategies.len() {
            return Err(Error::InvalidDimension(format!(
                "{} payoff rows for {} players",
                payoffs.len(),
                strategies.len()
            )));
        }
        for (i, row) in payoffs.iter().enumerate() {
            if row.len() != profiles {
                return Err(Error::InvalidDimension(format!(
                    "payoff row {i} has length {}, expected {profiles}",
                    row.len()
                )));
            }
            if let Some(p) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidDimension(format!(
                    "payoff row {i} entry {p} is not finite"
                )));
            }
        }
        Ok(Self {
            strategies,
            payoffs,
            labels: None,
        })
    }

    /// The all-zero game with the given strategy counts.
    pub fn zero(strategies: Vec<usize>) -> Result<Self> {
        let profiles = strategies.iter().product();
        let n = strategies.len();
        Self::new(strategies, vec![vec![0.0; profiles]; n])
    }

    /// Converts a bi-matrix game by row-major vectorization of `C1`, `C2`.
    pub fn from_bimatrix(g: &BiMatrixGame) -> Self {
        let (k1, k2) = g.shape();
        Self {
            strategies: vec![k1, k2],
            payoffs: vec![g.c1.as_slice().to_vec(), g.c2.as_slice().to_vec()],
            labels: None,
        }
    }

    /// The two payoff matrices when the game has exactly two players.
    pub fn to_bimatrix(&self) -> Option<BiMatrixGame> {
        if self.players() != 2 {
            return None;
        }
        let (k1, k2) = (self.strategies[0], self.strategies[1]);
        Some(BiMatrixGame {
            c1: Matrix::from_raw(k1, k2, self.payoffs[0].clone()),
            c2: Matrix::from_raw(k1, k2, self.payoffs[1].clone()),
        })
    }

    pub fn with_labels(mut self, labels: Option<Labels>) -> Self {
        self.labels = labels;
        self
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn players(&self) -> usize {
        self.strategies.len()
    }

    pub fn strategies(&self) -> &[usize] {
        &self.strategies
    }

    pub fn profile_count(&self) -> usize {
        self.payoffs[0].len()
    }

    pub fn payoffs(&self) -> &[Vec<f64>] {
        &self.payoffs
    }

    /// Structure vector `V^c_player` (1-based player).
    pub fn payoff_row(&self, player: usize) -> Result<&[f64]> {
        self.check_player(player)?;
        Ok(&self.payoffs[player - 1])
    }

    pub fn max_abs_payoff(&self) -> f64 {
        self.payoffs.iter().map(|r| max_abs(r)).fold(0.0, f64::max)
    }

    /// Common strategy count when all players have the same number of strategies.
    pub fn uniform_k(&self) -> Option<usize> {
        let k = self.strategies[0];
        self.strategies.iter().all(|&x| x == k).then_some(k)
    }

    /// Like [`uniform_k`](Self::uniform_k) but reports an unsupported-shape error.
    pub fn require_uniform(&self) -> Result<usize> {
        self.uniform_k().ok_or_else(|| {
            Error::UnsupportedShape(format!(
                "multi-player criteria need equal strategy counts, got {:?}",
                self.strategies
            ))
        })
    }

    pub(crate) fn check_player(&self, player: usize) -> Result<()> {
        if player == 0 || player > self.players() {
            return Err(Error::PlayerOutOfRange {
                player,
                players: self.players(),
            });
        }
        Ok(())
    }

    /// Flat position of a profile: `sum_j (choice_j - 1) * prod_{m>j} k_m`.
    pub fn profile_to_index(&self, p: &StrategyProfile) -> Result<usize> {
        if p.len() != self.players() {
            return Err(Error::InvalidProfile(format!(
                "profile has {} choices for {} players",
                p.len(),
                self.players()
            )));
        }
        let mut idx = 0;
        for (j, (&c, &k)) in p.choices().iter().zip(&self.strategies).enumerate() {
            if c == 0 || c > k {
                return Err(Error::InvalidProfile(format!(
                    "player {} choice {c} outside 1..={k}",
                    j + 1
                )));
            }
            idx = idx * k + (c - 1);
        }
        Ok(idx)
    }

    pub fn index_to_profile(&self, index: usize) -> Result<StrategyProfile> {
        if index >= self.profile_count() {
            return Err(Error::InvalidProfile(format!(
                "flat index {index} outside 0..{}",
                self.profile_count()
            )));
        }
        Ok(StrategyProfile(
            multi_index(&self.strategies, index)
                .into_iter()
                .map(|c| c + 1)
                .collect(),
        ))
    }

    /// All profiles in lexicographic (flat-index) order.
    pub fn profiles(&self) -> impl Iterator<Item = StrategyProfile> + '_ {
        (0..self.profile_count()).map(move |i| {
            StrategyProfile(
                multi_index(&self.strategies, i)
                    .into_iter()
                    .map(|c| c + 1)
                    .collect(),
            )
        })
    }

    pub fn payoff(&self, player: usize, p: &StrategyProfile) -> Result<f64> {
        self.check_player(player)?;
        Ok(self.payoffs[player - 1][self.profile_to_index(p)?])
    }

    /// Relative payoff `(V^c_j - V^c_i)^T`.
    pub fn relative_payoff(&self, i: usize, j: usize) -> Result<Vec<f64>> {
        self.check_player(i)?;
        self.check_player(j)?;
        if i == j {
            return Err(Error::InvalidPair(i, j));
        }
        Ok(self.payoffs[j - 1]
            .iter()
            .zip(&self.payoffs[i - 1])
            .map(|(a, b)| a - b)
            .collect())
    }

    /// Bi-matrix sub-game of players `i < j` with every other player fixed by
    /// `rest` (their 1-based choices in increasing player order).
    pub fn subgame(&self, i: usize, j: usize, rest: &[usize]) -> Result<BiMatrixGame> {
        self.check_player(i)?;
        self.check_player(j)?;
        if i >= j {
            return Err(Error::InvalidPair(i, j));
        }
        let n = self.players();
        if rest.len() != n - 2 {
            return Err(Error::InvalidProfile(format!(
                "{} fixed choices given for {} other players",
                rest.len(),
                n - 2
            )));
        }
        let (ki, kj) = (self.strategies[i - 1], self.strategies[j - 1]);
        let mut choices = vec![1; n];
        let mut others = rest.iter();
        for (m, slot) in choices.iter_mut().enumerate() {
            if m + 1 != i && m + 1 != j {
                *slot = *others.next().expect("length checked above");
            }
        }
        let mut c1 = Vec::with_capacity(ki * kj);
        let mut c2 = Vec::with_capacity(ki * kj);
        for a in 1..=ki {
            for b in 1..=kj {
                choices[i - 1] = a;
                choices[j - 1] = b;
                let idx = self.profile_to_index(&StrategyProfile(choices.clone()))?;
                c1.push(self.payoffs[i - 1][idx]);
                c2.push(self.payoffs[j - 1][idx]);
            }
        }
        Ok(BiMatrixGame {
            c1: Matrix::from_raw(ki, kj, c1),
            c2: Matrix::from_raw(ki, kj, c2),
        })
    }
}

/// Two-player game given by payoff matrices `C1`, `C2` of shape `k1 x k2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiMatrixGame {
    c1: Matrix,
    c2: Matrix,
}

impl BiMatrixGame {
    pub fn new(c1: Matrix, c2: Matrix) -> Result<Self> {
        if c1.shape() != c2.shape() {
            return Err(Error::InvalidDimension(format!(
                "payoff matrices have shapes {:?} and {:?}",
                c1.shape(),
                c2.shape()
            )));
        }
        if c1.rows() == 0 || c1.cols() == 0 {
            return Err(Error::InvalidDimension(
                "payoff matrices must be nonempty".into(),
            ));
        }
        Ok(Self { c1, c2 })
    }

    pub fn c1(&self) -> &Matrix {
        &self.c1
    }

    pub fn c2(&self) -> &Matrix {
        &self.c2
    }

    pub fn shape(&self) -> (usize, usize) {
        self.c1.shape()
    }

    /// Relative payoff matrix `R = C2 - C1`.
    pub fn relative(&self) -> Matrix {
        &self.c2 - &self.c1
    }

    pub fn max_abs_payoff(&self) -> f64 {
        self.c1.max_abs().max(self.c2.max_abs())
    }
}

/// Rearranges a vector over the product index set `dims` into a matrix whose
/// rows are indexed by the axes in `row_axes` (in the given order) and whose
/// columns are indexed by the remaining axes in increasing order. Axes are
/// 1-based. Both multi-indices are lexicographic.
pub fn reshape_multi(v: &[f64], dims: &[usize], row_axes: &[usize]) -> Result<Matrix> {
    let (rows, cols, perm) = reshape_layout(v.len(), dims, row_axes)?;
    let mut data = vec![0.0; v.len()];
    for (flat, &value) in v.iter().enumerate() {
        data[perm(flat)] = value;
    }
    Ok(Matrix::from_raw(rows, cols, data))
}

/// Inverse of [`reshape_multi`].
pub fn flatten_multi(m: &Matrix, dims: &[usize], row_axes: &[usize]) -> Result<Vec<f64>> {
    let (rows, cols, perm) = reshape_layout(m.rows() * m.cols(), dims, row_axes)?;
    if m.shape() != (rows, cols) {
        return Err(Error::InvalidDimension(format!(
            "matrix is {:?}, layout expects {rows}x{cols}",
            m.shape()
        )));
    }
    let data = m.as_slice();
    Ok((0..data.len()).map(|flat| data[perm(flat)]).collect())
}

type Layout = (usize, usize, Box<dyn Fn(usize) -> usize>);

fn reshape_layout(len: usize, dims: &[usize], row_axes: &[usize]) -> Result<Layout> {
    let total: usize = dims.iter().product();
    if total != len {
        return Err(Error::InvalidDimension(format!(
            "vector of length {len} does not match index set {dims:?}"
        )));
    }
    let l = dims.len();
    let mut seen = vec![false; l];
    for &a in row_axes {
        if a == 0 || a > l || seen[a - 1] {
            return Err(Error::InvalidDimension(format!(
                "row axes {row_axes:?} invalid for {l} axes"
            )));
        }
        seen[a - 1] = true;
    }
    let col_axes: Vec<usize> = (1..=l).filter(|a| !seen[a - 1]).collect();
    let row_dims: Vec<usize> = row_axes.iter().map(|&a| dims[a - 1]).collect();
    let col_dims: Vec<usize> = col_axes.iter().map(|&a| dims[a - 1]).collect();
    let rows: usize = row_dims.iter().product();
    let cols: usize = col_dims.iter().product();
    let dims = dims.to_vec();
    let row_axes = row_axes.to_vec();
    let perm = move |flat: usize| {
        let idx = multi_index(&dims, flat);
        let ri: Vec<usize> = row_axes.iter().map(|&a| idx[a - 1]).collect();
        let ci: Vec<usize> = col_axes.iter().map(|&a| idx[a - 1]).collect();
        flat_index(&row_dims, &ri) * cols + flat_index(&col_dims, &ci)
    };
    Ok((rows, cols, Box::new(perm)))
}

/// `k^2 x k^{n-2}` arrangement of a `k^n` vector with rows indexed by the
/// choices of players `i < j` and columns by the remaining players.
pub fn reshape_pair(v: &[f64], n: usize, k: usize, i: usize, j: usize) -> Result<Matrix> {
    if i >= j || j > n {
        return Err(Error::InvalidPair(i, j));
    }
    reshape_multi(v, &vec![k; n], &[i, j])
}

/// Inverse of [`reshape_pair`].
pub fn flatten_pair(m: &Matrix, n: usize, k: usize, i: usize, j: usize) -> Result<Vec<f64>> {
    if i >= j || j > n {
        return Err(Error::InvalidPair(i, j));
    }
    flatten_multi(m, &vec![k; n], &[i, j])
}
