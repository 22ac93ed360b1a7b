//! The potential equation, potential recovery and validation, and the
//! bi-matrix criteria including projection onto the potential subspace.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{BiMatrixGame, FiniteGame};
use crate::linalg::{
    boundary_matrix, centering_matrix, check_capacity, kron, least_squares, max_abs, residual_inf,
    solve_consistent, Matrix, Tolerance,
};

/// Outcome of one criterion on one game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub potential: bool,
    /// Largest absolute residual over all tested equalities.
    pub max_residual: f64,
    /// Zero-test threshold the residuals were compared against.
    pub threshold: f64,
    /// Number of scalar equalities tested.
    pub equations: usize,
}

impl Verdict {
    pub(crate) fn from_residuals<'a>(
        residuals: impl IntoIterator<Item = &'a f64>,
        threshold: f64,
    ) -> Self {
        let mut max_residual = 0.0_f64;
        let mut equations = 0;
        for r in residuals {
            max_residual = max_residual.max(r.abs());
            equations += 1;
        }
        Self {
            potential: max_residual <= threshold,
            max_residual,
            threshold,
            equations,
        }
    }
}

/// Row vector `V^p` of a potential over all profiles, plus the free
/// constant that was chosen when it was computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialVector {
    pub entries: Vec<f64>,
    pub constant_offset: f64,
}

impl PotentialVector {
    pub fn new(entries: Vec<f64>) -> Self {
        Self {
            entries,
            constant_offset: 0.0,
        }
    }

    /// Matrix form `P` for a two-player game of shape `k1 x k2`.
    pub fn as_matrix(&self, k1: usize, k2: usize) -> Result<Matrix> {
        Matrix::from_vec(k1, k2, self.entries.clone())
    }

    /// `max - min` of the entrywise difference; zero iff the two potentials
    /// differ by a constant.
    pub fn spread_against(&self, other: &PotentialVector) -> f64 {
        let d = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b);
        let (lo, hi) = d.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
        if lo.is_finite() {
            hi - lo
        } else {
            0.0
        }
    }

    pub fn shifted(&self, c: f64) -> Self {
        Self {
            entries: self.entries.iter().map(|v| v + c).collect(),
            constant_offset: self.constant_offset + c,
        }
    }
}

/// The linear system `Ψ ξ = b` whose solvability characterizes potential games.
#[derive(Debug, Clone)]
pub struct PotentialEquationSystem {
    pub psi: Matrix,
    pub b: Vec<f64>,
    /// Length of each block `ξ_i` (the number of opponent profiles of player i).
    pub xi_blocks: Vec<usize>,
}

/// `Ψ_i = I_{prod_{m<i} k_m} ⊗ 1_{k_i} ⊗ I_{prod_{m>i} k_m}` (1-based `i`).
pub fn psi_block(strategies: &[usize], i: usize) -> Result<Matrix> {
    let before: usize = strategies[..i - 1].iter().product();
    let after: usize = strategies[i..].iter().product();
    let ki = strategies[i - 1];
    check_capacity(before * ki * after, before * after)?;
    // each row (a, x, c) has its single one in column (a, c)
    let cols = before * after;
    let mut data = vec![0.0; before * ki * after * cols];
    for a in 0..before {
        for x in 0..ki {
            for c in 0..after {
                let r = (a * ki + x) * after + c;
                data[r * cols + a * after + c] = 1.0;
            }
        }
    }
    Matrix::from_vec(before * ki * after, cols, data)
}

/// Assembles `Ψ` and `b`: block row `μ` is `[-Ψ_1, 0, .., Ψ_{μ+1}, .., 0]` with
/// right-hand side `(V^c_{μ+1} - V^c_1)^T`.
/// Strategy counts may differ between players.
pub fn build_potential_equation(game: &FiniteGame) -> Result<PotentialEquationSystem> {
    let n = game.players();
    let profiles = game.profile_count();
    let ks = game.strategies();
    let xi_blocks: Vec<usize> = ks.iter().map(|k| profiles / k).collect();
    let total_cols: usize = xi_blocks.iter().sum();
    check_capacity((n - 1) * profiles, total_cols)?;

    let blocks: Vec<Matrix> = (1..=n).map(|i| psi_block(ks, i)).collect::<Result<_>>()?;
    let offsets: Vec<usize> = xi_blocks
        .iter()
        .scan(0, |acc, &w| {
            let o = *acc;
            *acc += w;
            Some(o)
        })
        .collect();

    let mut data = vec![0.0; (n - 1) * profiles * total_cols];
    let mut b = Vec::with_capacity((n - 1) * profiles);
    for mu in 1..n {
        for r in 0..profiles {
            let row = &mut data[((mu - 1) * profiles + r) * total_cols..][..total_cols];
            for (c, v) in blocks[0].row(r).iter().enumerate() {
                row[offsets[0] + c] = -v;
            }
            for (c, v) in blocks[mu].row(r).iter().enumerate() {
                row[offsets[mu] + c] = *v;
            }
        }
        b.extend(game.relative_payoff(1, mu + 1)?);
    }
    Ok(PotentialEquationSystem {
        psi: Matrix::from_vec((n - 1) * profiles, total_cols, data)?,
        b,
        xi_blocks,
    })
}

/// Result of the potential-equation test: the verdict and one solution `ξ`.
#[derive(Debug, Clone, Serialize)]
pub struct EquationVerdict {
    pub verdict: Verdict,
    pub xi: Option<Vec<f64>>,
}

/// A game is potential iff `Ψ ξ = b` is solvable; returns the minimum-norm `ξ`.
pub fn is_potential_by_equation(game: &FiniteGame, tol: &Tolerance) -> Result<EquationVerdict> {
    let sys = build_potential_equation(game)?;
    let threshold = tol.threshold(game.max_abs_payoff());
    let equations = sys.b.len();
    match solve_consistent(&sys.psi, &sys.b, tol)? {
        Some(xi) => Ok(EquationVerdict {
            verdict: Verdict {
                potential: true,
                max_residual: residual_inf(&sys.psi, &xi, &sys.b),
                threshold,
                equations,
            },
            xi: Some(xi),
        }),
        None => {
            let ls = least_squares(&sys.psi, &sys.b)?;
            Ok(EquationVerdict {
                verdict: Verdict {
                    potential: false,
                    max_residual: residual_inf(&sys.psi, &ls, &sys.b),
                    threshold,
                    equations,
                },
                xi: None,
            })
        }
    }
}

/// `(V^p)^T = (V^c_1)^T - (1_{k_1} ⊗ I) ξ_1`.
pub fn potential_from_xi(game: &FiniteGame, xi1: &[f64]) -> Result<PotentialVector> {
    let k1 = game.strategies()[0];
    let rest = game.profile_count() / k1;
    if xi1.len() != rest {
        return Err(Error::InvalidDimension(format!(
            "xi_1 has length {}, expected {rest}",
            xi1.len()
        )));
    }
    let v1 = &game.payoffs()[0];
    Ok(PotentialVector::new(
        v1.iter()
            .enumerate()
            .map(|(idx, &c)| c - xi1[idx % rest])
            .collect(),
    ))
}

/// Potential via the equation route: solve `Ψ ξ = b`, then recover from `ξ_1`.
pub fn potential_by_equation(game: &FiniteGame, tol: &Tolerance) -> Result<PotentialVector> {
    let ev = is_potential_by_equation(game, tol)?;
    let Some(xi) = ev.xi else {
        return Err(Error::Precondition {
            message: "potential equation has no solution".into(),
            max_residual: ev.verdict.max_residual,
            residuals: vec![ev.verdict.max_residual],
        });
    };
    let first = game.profile_count() / game.strategies()[0];
    potential_from_xi(game, &xi[..first])
}

/// Checks every unilateral-deviation identity
/// `c_i(x, s^{-i}) - c_i(y, s^{-i}) = p(x, s^{-i}) - p(y, s^{-i})`.
pub fn validate_potential(
    game: &FiniteGame,
    pv: &PotentialVector,
    tol: &Tolerance,
) -> Result<Verdict> {
    let profiles = game.profile_count();
    if pv.entries.len() != profiles {
        return Err(Error::InvalidDimension(format!(
            "potential has {} entries, game has {profiles} profiles",
            pv.entries.len()
        )));
    }
    let ks = game.strategies();
    let p = &pv.entries;
    let mut worst = 0.0_f64;
    let mut equations = 0;
    let mut stride = profiles;
    for (i, &ki) in ks.iter().enumerate() {
        stride /= ki;
        let c = &game.payoffs()[i];
        for idx in 0..profiles {
            let own = (idx / stride) % ki;
            let base = idx - own * stride;
            for y in 0..ki {
                if y == own {
                    continue;
                }
                let alt = base + y * stride;
                let r = (c[idx] - c[alt]) - (p[idx] - p[alt]);
                worst = worst.max(r.abs());
                equations += 1;
            }
        }
    }
    let threshold = tol.threshold(game.max_abs_payoff().max(max_abs(p)));
    Ok(Verdict {
        potential: worst <= threshold,
        max_residual: worst,
        threshold,
        equations,
    })
}

fn relative_threshold(r: &Matrix, tol: &Tolerance) -> f64 {
    tol.threshold(r.max_abs())
}

/// `B_{k1} (C2 - C1) B_{k2}^T = 0`.
pub fn bimatrix_is_potential(g: &BiMatrixGame, tol: &Tolerance) -> Verdict {
    let r = g.relative();
    let threshold = tol.threshold(g.max_abs_payoff());
    let (k1, k2) = g.shape();
    if k1 < 2 || k2 < 2 {
        return Verdict::from_residuals([], threshold);
    }
    let b1 = boundary_matrix(k1).expect("k1 >= 2");
    let b2 = boundary_matrix(k2).expect("k2 >= 2");
    let m = &(&b1 * &r) * &b2.transpose();
    Verdict::from_residuals(m.as_slice(), threshold)
}

/// Matrix-form potential `P = C1 + 1_{k1} (δ_{k1}^{k1})^T (C2 - C1) + λ 1 1^T`:
/// the last row of `R` broadcast over all rows.
pub fn bimatrix_potential(
    g: &BiMatrixGame,
    lambda: f64,
    tol: &Tolerance,
) -> Result<PotentialVector> {
    let v = bimatrix_is_potential(g, tol);
    if !v.potential {
        return Err(Error::Precondition {
            message: "bi-matrix game is not potential".into(),
            max_residual: v.max_residual,
            residuals: vec![v.max_residual],
        });
    }
    let r = g.relative();
    let (k1, k2) = g.shape();
    let last = r.row(k1 - 1);
    let c1 = g.c1();
    let mut entries = Vec::with_capacity(k1 * k2);
    for a in 0..k1 {
        for (b, shift) in last.iter().enumerate() {
            entries.push(c1.get(a, b) + shift + lambda);
        }
    }
    Ok(PotentialVector {
        entries,
        constant_offset: lambda,
    })
}

/// Corner identities `r_ij - r_{i,k2} - r_{k1,j} + r_{k1,k2} = 0`.
pub fn check_corner(r: &Matrix, tol: &Tolerance) -> Verdict {
    let (k1, k2) = r.shape();
    let mut res = Vec::new();
    for i in 0..k1.saturating_sub(1) {
        for j in 0..k2.saturating_sub(1) {
            res.push(r.get(i, j) - r.get(i, k2 - 1) - r.get(k1 - 1, j) + r.get(k1 - 1, k2 - 1));
        }
    }
    Verdict::from_residuals(&res, relative_threshold(r, tol))
}

/// Adjacent identities `r_ij - r_{i+1,j} - r_{i,j+1} + r_{i+1,j+1} = 0`.
pub fn check_adjacent_cycles(r: &Matrix, tol: &Tolerance) -> Verdict {
    let (k1, k2) = r.shape();
    let mut res = Vec::new();
    for i in 0..k1.saturating_sub(1) {
        for j in 0..k2.saturating_sub(1) {
            res.push(r.get(i, j) - r.get(i + 1, j) - r.get(i, j + 1) + r.get(i + 1, j + 1));
        }
    }
    Verdict::from_residuals(&res, relative_threshold(r, tol))
}

/// Every four-cycle `r_ij - r_{i',j} - r_{i,j'} + r_{i',j'} = 0`, each cycle
/// once (`i < i'`, `j < j'`).
pub fn check_four_cycle(r: &Matrix, tol: &Tolerance) -> Verdict {
    let (k1, k2) = r.shape();
    let mut res = Vec::new();
    for i in 0..k1 {
        for ip in i + 1..k1 {
            for j in 0..k2 {
                for jp in j + 1..k2 {
                    res.push(r.get(i, j) - r.get(ip, j) - r.get(i, jp) + r.get(ip, jp));
                }
            }
        }
    }
    Verdict::from_residuals(&res, relative_threshold(r, tol))
}

/// `H_{k1} R H_{k2} = 0`.
pub fn check_centering(r: &Matrix, tol: &Tolerance) -> Verdict {
    let (k1, k2) = r.shape();
    let h1 = centering_matrix(k1).expect("k1 >= 1");
    let h2 = centering_matrix(k2).expect("k2 >= 1");
    let m = &(&h1 * r) * &h2;
    Verdict::from_residuals(m.as_slice(), relative_threshold(r, tol))
}

/// Row, column and grand averages of a relative payoff matrix, with the
/// residual `r_ij - r_{i-ave} - r^{j-ave} + r_ave`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AverageDecomposition {
    pub row_means: Vec<f64>,
    pub col_means: Vec<f64>,
    pub grand_mean: f64,
    pub residual: Matrix,
}

impl AverageDecomposition {
    pub fn verdict(&self, tol: &Tolerance, scale: f64) -> Verdict {
        Verdict::from_residuals(self.residual.as_slice(), tol.threshold(scale))
    }
}

pub fn average_decomposition(r: &Matrix) -> AverageDecomposition {
    let (k1, k2) = r.shape();
    let row_means: Vec<f64> = (0..k1)
        .map(|i| r.row(i).iter().sum::<f64>() / k2 as f64)
        .collect();
    let col_means: Vec<f64> = (0..k2)
        .map(|j| (0..k1).map(|i| r.get(i, j)).sum::<f64>() / k1 as f64)
        .collect();
    let grand_mean = r.as_slice().iter().sum::<f64>() / (k1 * k2) as f64;
    let mut data = Vec::with_capacity(k1 * k2);
    for (i, rm) in row_means.iter().enumerate() {
        for (j, cm) in col_means.iter().enumerate() {
            data.push(r.get(i, j) - rm - cm + grand_mean);
        }
    }
    AverageDecomposition {
        row_means,
        col_means,
        grand_mean,
        residual: Matrix::from_raw(k1, k2, data),
    }
}

/// Projector onto the potential subspace in Kronecker form, `I - H_{k1} ⊗ H_{k2}`.
pub fn potential_projector(k1: usize, k2: usize) -> Result<Matrix> {
    let hh = kron(&centering_matrix(k1)?, &centering_matrix(k2)?)?;
    Ok(&Matrix::identity(k1 * k2) - &hh)
}

/// The nearest potential game and its distance from the input.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub game: BiMatrixGame,
    /// Projected relative payoff matrix `R'`.
    pub relative: Matrix,
    /// Frobenius norm `||R - R'||`.
    pub distance: f64,
}

/// Orthogonal projection of the relative payoffs onto the potential subspace:
/// `R' = R - H_{k1} R H_{k2}`, returned as the game `(C1, C1 + R')`.
pub fn project_to_potential(g: &BiMatrixGame) -> Projection {
    let r = g.relative();
    let (k1, k2) = r.shape();
    let h1 = centering_matrix(k1).expect("k1 >= 1");
    let h2 = centering_matrix(k2).expect("k2 >= 1");
    let removed = &(&h1 * &r) * &h2;
    let relative = &r - &removed;
    let c2 = g.c1() + &relative;
    Projection {
        game: BiMatrixGame::new(g.c1().clone(), c2).expect("same shape"),
        relative,
        distance: removed.frobenius_norm(),
    }
}
