//! The minimal verification system for `n`-player games with `k` strategies
//! each, the closed-form potential, and the pairwise criteria.
//!
//! The potential equation is rewritten against
//! `b̃ = [V_n - V_1, ..., V_n - V_{n-1}]^T` and reduced by a nonsingular
//! transform `T = [T_1; T_2; T_3]` to
//!
//! ```text
//! [ I  Γ ] [ ξ̃  ]   [ T_1 b̃ ]
//! [ 0  Φ ] [ ξ_n ] = [ T_2 b̃ ]
//! [ 0  0 ]           [ T_3 b̃ ]
//! ```
//!
//! A second nonsingular matrix `S = [S_1; S_2]` (with explicit right inverse
//! `U`) turns `Φ` into `[-B_{k^{n-1}}; 0]`, which leaves exactly
//! `(n-1)k^n - n k^{n-1} + 1` scalar equations `[S_2 T_2; T_3] b̃ = 0`.
//!
//! All structured matrices hold small integers and are built by explicit
//! Kronecker assembly; they are cached per `(n, k)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{reshape_pair, FiniteGame};
use crate::linalg::{
    block_diag, boundary_matrix, centering_matrix, hstack, kron, kron_all, residual_inf,
    selector_matrix, solve_consistent, vec_rows, vstack, Matrix, Tolerance,
};
use crate::potential::{bimatrix_is_potential, psi_block, PotentialVector, Verdict};

fn pw(k: usize, e: usize) -> usize {
    k.pow(e as u32)
}

fn eye(k: usize, e: usize) -> Matrix {
    Matrix::identity(pw(k, e))
}

fn ones(m: usize) -> Matrix {
    Matrix::ones(m, 1)
}

/// `δ_m^m` as a row.
fn last_row(m: usize) -> Matrix {
    Matrix::last_unit(m).expect("m >= 1").transpose()
}

/// `1_m (δ_m^m)^T`.
fn ones_last(m: usize) -> Matrix {
    &ones(m) * &last_row(m)
}

fn check_sizes(n: usize, k: usize) -> Result<()> {
    if n < 2 || k < 2 {
        return Err(Error::InvalidDimension(format!(
            "need n >= 2 and k >= 2, got n={n}, k={k}"
        )));
    }
    // the widest assembled operator is k^n x k^n
    let kn = k.checked_pow(n as u32).ok_or(Error::Capacity {
        rows: usize::MAX,
        cols: usize::MAX,
        cap: crate::linalg::MAX_ENTRIES,
    })?;
    crate::linalg::check_capacity((n - 1) * kn, kn)
}

/// `T_{1j} = I_{k^{j-1}} ⊗ (δ_k^k)^T ⊗ I_{k^{n-j}}`.
pub fn t1_block(n: usize, k: usize, j: usize) -> Result<Matrix> {
    kron_all(&[eye(k, j - 1), last_row(k), eye(k, n - j)])
}

/// `T_{2j} = I_{k^{j-1}} ⊗ B_k ⊗ I_{k^{n-j-1}} ⊗ (δ_k^k)^T`.
pub fn t2_block(n: usize, k: usize, j: usize) -> Result<Matrix> {
    kron_all(&[
        eye(k, j - 1),
        boundary_matrix(k)?,
        eye(k, n - j - 1),
        last_row(k),
    ])
}

/// `T_{3j} = I_{k^{j-1}} ⊗ B_k ⊗ I_{k^{n-j-1}} ⊗ B_k`.
pub fn t3_block(n: usize, k: usize, j: usize) -> Result<Matrix> {
    kron_all(&[
        eye(k, j - 1),
        boundary_matrix(k)?,
        eye(k, n - j - 1),
        boundary_matrix(k)?,
    ])
}

/// `Φ_i = -I_{k^{i-1}} ⊗ B_k ⊗ I_{k^{n-i-1}}`.
pub fn phi_block(n: usize, k: usize, i: usize) -> Result<Matrix> {
    Ok(-&kron_all(&[
        eye(k, i - 1),
        boundary_matrix(k)?,
        eye(k, n - i - 1),
    ])?)
}

/// `Γ_i = -I_{k^{i-1}} ⊗ (δ_k^k)^T ⊗ I_{k^{n-1-i}} ⊗ 1_k`.
pub fn gamma_block(n: usize, k: usize, i: usize) -> Result<Matrix> {
    Ok(-&kron_all(&[
        eye(k, i - 1),
        last_row(k),
        eye(k, n - 1 - i),
        ones(k),
    ])?)
}

/// The transform `T` of the reduced potential equation together with the
/// blocks `Φ`, `Γ` it produces. `T_i = diag(-T_{i1}, ..., -T_{i,n-1})`.
#[derive(Debug, Clone)]
pub struct TransformBlocks {
    pub n: usize,
    pub k: usize,
    pub t1: Matrix,
    pub t2: Matrix,
    pub t3: Matrix,
    pub phi: Matrix,
    pub gamma: Matrix,
}

pub fn build_transform(n: usize, k: usize) -> Result<TransformBlocks> {
    check_sizes(n, k)?;
    let negated = |f: fn(usize, usize, usize) -> Result<Matrix>| -> Result<Matrix> {
        let blocks: Vec<Matrix> = (1..n)
            .map(|j| f(n, k, j).map(|m| -&m))
            .collect::<Result<_>>()?;
        block_diag(&blocks)
    };
    let phi: Vec<Matrix> = (1..n).map(|i| phi_block(n, k, i)).collect::<Result<_>>()?;
    let gamma: Vec<Matrix> = (1..n)
        .map(|i| gamma_block(n, k, i))
        .collect::<Result<_>>()?;
    Ok(TransformBlocks {
        n,
        k,
        t1: negated(t1_block)?,
        t2: negated(t2_block)?,
        t3: negated(t3_block)?,
        phi: vstack(&phi)?,
        gamma: vstack(&gamma)?,
    })
}

/// `N_{ij} = D_{k^{n-i}} (I_{k^{j-i}} ⊗ D_k^T ⊗ 1_{k^{n-j-1}} (δ_{k^{n-j-1}}^{k^{n-j-1}})^T)`.
pub fn n_block(n: usize, k: usize, i: usize, j: usize) -> Result<Matrix> {
    let inner = kron_all(&[
        eye(k, j - i),
        selector_matrix(k)?.transpose(),
        ones_last(pw(k, n - j - 1)),
    ])?;
    Ok(&selector_matrix(pw(k, n - i))? * &inner)
}

/// `L_{ij} = -I_{k^{i-2}} ⊗ B_k ⊗ N_{ij}`.
pub fn l_block(n: usize, k: usize, i: usize, j: usize) -> Result<Matrix> {
    Ok(-&kron_all(&[
        eye(k, i - 2),
        boundary_matrix(k)?,
        n_block(n, k, i, j)?,
    ])?)
}

/// `M_{i,i-1} = I_{k^{i-2}(k-1)} ⊗ B_{k^{n-i}}`.
pub fn m_block(n: usize, k: usize, i: usize) -> Result<Matrix> {
    kron(
        &Matrix::identity(pw(k, i - 2) * (k - 1)),
        &boundary_matrix(pw(k, n - i))?,
    )
}

/// `G_i = I_{k^{i-1}(k-1)} ⊗ D_{k^{n-i-1}}^T`.
pub fn g_block(n: usize, k: usize, i: usize) -> Result<Matrix> {
    kron(
        &Matrix::identity(pw(k, i - 1) * (k - 1)),
        &selector_matrix(pw(k, n - i - 1))?.transpose(),
    )
}

/// `S̃_1 = [S̃_{11}, ..., S̃_{1,n-1}]` with
/// `S̃_{1j} = I_{k^{j-1}} ⊗ D_k^T ⊗ 1_{k^{n-j-1}} (δ_{k^{n-j-1}}^{k^{n-j-1}})^T`, so
/// that `S_1 = D_{k^{n-1}} S̃_1`.
pub fn s_tilde(n: usize, k: usize) -> Result<Matrix> {
    let blocks: Vec<Matrix> = (1..n)
        .map(|j| {
            kron_all(&[
                eye(k, j - 1),
                selector_matrix(k)?.transpose(),
                ones_last(pw(k, n - j - 1)),
            ])
        })
        .collect::<Result<_>>()?;
    hstack(&blocks)
}

/// The elimination matrix `S = [S_1; S_2]` and its right inverse `U`.
#[derive(Debug, Clone)]
pub struct EliminationBlocks {
    pub n: usize,
    pub k: usize,
    /// `[N_{11}, ..., N_{1,n-1}]`, `k^{n-1} - 1` rows.
    pub s1: Matrix,
    /// Block rows `i = 2..n-1`: `M_{i,i-1}` in column block `i-1`, then
    /// `L_{i,i}, ..., L_{i,n-1}`.
    pub s2: Matrix,
    pub u: Matrix,
}

impl EliminationBlocks {
    pub fn s(&self) -> Matrix {
        vstack(&[self.s1.clone(), self.s2.clone()]).expect("same width")
    }
}

pub fn build_elimination(n: usize, k: usize) -> Result<EliminationBlocks> {
    check_sizes(n, k)?;
    if n < 3 {
        return Err(Error::UnsupportedShape(
            "the elimination step needs at least 3 players; use the bi-matrix criteria".into(),
        ));
    }
    let w = (k - 1) * pw(k, n - 2);
    let s1 = hstack(
        &(1..n)
            .map(|j| n_block(n, k, 1, j))
            .collect::<Result<Vec<_>>>()?,
    )?;

    let mut s2_rows = Vec::with_capacity(n - 2);
    for i in 2..n {
        let m = m_block(n, k, i)?;
        let h = m.rows();
        let blocks: Vec<Matrix> = (1..n)
            .map(|c| {
                if c == i - 1 {
                    Ok(m.clone())
                } else if c >= i {
                    l_block(n, k, i, c)
                } else {
                    Ok(Matrix::zeros(h, w))
                }
            })
            .collect::<Result<_>>()?;
        s2_rows.push(hstack(&blocks)?);
    }
    let s2 = vstack(&s2_rows)?;

    let d_big_t = selector_matrix(pw(k, n - 1))?.transpose();
    let first: Vec<Matrix> = (1..n)
        .map(|i| Ok(-&(&phi_block(n, k, i)? * &d_big_t)))
        .collect::<Result<_>>()?;
    let mut columns = vec![vstack(&first)?];
    for i in 1..n - 1 {
        let g = g_block(n, k, i)?;
        let blocks: Vec<Matrix> = (1..n)
            .map(|r| {
                if r == i {
                    g.clone()
                } else {
                    Matrix::zeros(w, g.cols())
                }
            })
            .collect();
        columns.push(vstack(&blocks)?);
    }
    let u = hstack(&columns)?;
    Ok(EliminationBlocks { n, k, s1, s2, u })
}

/// Everything needed to run the minimal test for one `(n, k)`.
#[derive(Debug)]
pub struct MinimalSystem {
    pub transform: TransformBlocks,
    /// `None` for two players.
    pub elimination: Option<EliminationBlocks>,
    /// `S̃_1`; `None` for two players.
    pub s_tilde: Option<Matrix>,
    pub check_matrix: Matrix,
}

fn assemble(n: usize, k: usize) -> Result<MinimalSystem> {
    let transform = build_transform(n, k)?;
    if n == 2 {
        let b = boundary_matrix(k)?;
        return Ok(MinimalSystem {
            transform,
            elimination: None,
            s_tilde: None,
            check_matrix: kron(&b, &b)?,
        });
    }
    let elimination = build_elimination(n, k)?;
    // Rows are sign-flipped relative to S_2 T_2 and T_3 built from the
    // negated blocks of T; this is the integer form with positive leading
    // boundary terms. The kernel is the same.
    let check_matrix = -&vstack(&[&elimination.s2 * &transform.t2, transform.t3.clone()])?;
    Ok(MinimalSystem {
        transform,
        s_tilde: Some(s_tilde(n, k)?),
        elimination: Some(elimination),
        check_matrix,
    })
}

type Cache = Mutex<HashMap<(usize, usize), Arc<MinimalSystem>>>;

static CACHE: OnceLock<Cache> = OnceLock::new();

/// Cached structured system for `(n, k)`.
pub fn minimal_system(n: usize, k: usize) -> Result<Arc<MinimalSystem>> {
    check_sizes(n, k)?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().expect("cache lock").get(&(n, k)) {
        return Ok(Arc::clone(s));
    }
    // built outside the lock; a racing builder produces an identical value
    let built = Arc::new(assemble(n, k)?);
    let mut guard = cache.lock().expect("cache lock");
    Ok(Arc::clone(guard.entry((n, k)).or_insert(built)))
}

/// Coefficient matrix of the minimal system, acting on `b̃`. For `n = 2`
/// this is `B_k ⊗ B_k` acting on `V_2 - V_1`.
pub fn minimal_check_matrix(n: usize, k: usize) -> Result<Matrix> {
    Ok(minimal_system(n, k)?.check_matrix.clone())
}

/// `b̃ = [V_n - V_1; V_n - V_2; ...; V_n - V_{n-1}]`.
pub fn relative_stack(game: &FiniteGame) -> Result<Vec<f64>> {
    let n = game.players();
    let mut out = Vec::with_capacity((n - 1) * game.profile_count());
    for i in 1..n {
        out.extend(game.relative_payoff(i, n)?);
    }
    Ok(out)
}

fn uniform_shape(game: &FiniteGame) -> Result<(usize, usize)> {
    let k = game.require_uniform()?;
    if k < 2 {
        return Err(Error::UnsupportedShape(
            "every player needs at least 2 strategies".into(),
        ));
    }
    Ok((game.players(), k))
}

fn bimatrix_residuals(game: &FiniteGame) -> Vec<f64> {
    let g = game.to_bimatrix().expect("two players");
    let (k1, k2) = g.shape();
    let b1 = boundary_matrix(k1).expect("k >= 2");
    let b2 = boundary_matrix(k2).expect("k >= 2");
    vec_rows(&(&(&b1 * &g.relative()) * &b2.transpose()))
}

/// Verdict of the minimal system with the value of every equation.
#[derive(Debug, Clone, Serialize)]
pub struct MinimalVerdict {
    pub verdict: Verdict,
    pub residuals: Vec<f64>,
}

/// Tests `[S_2 T_2; T_3] b̃ = 0`. Two-player games use `B_k R B_k^T = 0`.
pub fn is_potential_minimal(game: &FiniteGame, tol: &Tolerance) -> Result<MinimalVerdict> {
    let (n, k) = uniform_shape(game)?;
    let threshold = tol.threshold(game.max_abs_payoff());
    let residuals = if n == 2 {
        bimatrix_residuals(game)
    } else {
        minimal_system(n, k)?
            .check_matrix
            .mul_vec(&relative_stack(game)?)
    };
    Ok(MinimalVerdict {
        verdict: Verdict::from_residuals(&residuals, threshold),
        residuals,
    })
}

fn require_minimal(game: &FiniteGame, tol: &Tolerance) -> Result<()> {
    let mv = is_potential_minimal(game, tol)?;
    if !mv.verdict.potential {
        return Err(Error::Precondition {
            message: "game is not potential".into(),
            max_residual: mv.verdict.max_residual,
            residuals: mv.residuals,
        });
    }
    Ok(())
}

/// Closed-form potential:
///
/// ```text
/// V^p = V_1 + (1_k (δ_k^k)^T ⊗ I_{k^{n-1}}) (V_n - V_1)
///       - Σ_{j=2}^{n-1} (1_k (δ_k^k)^T ⊗ I_{k^{j-2}} ⊗ D_k^T B_k ⊗ 1_{k^{n-j}} (δ_{k^{n-j}}^{k^{n-j}})^T) (V_n - V_j)
///       + c 1
/// ```
pub fn potential_closed_form(
    game: &FiniteGame,
    c: f64,
    tol: &Tolerance,
) -> Result<PotentialVector> {
    let (n, k) = uniform_shape(game)?;
    check_sizes(n, k)?;
    require_minimal(game, tol)?;
    let v = game.payoffs();
    let mut p = v[0].clone();
    let lead = kron(&ones_last(k), &eye(k, n - 1))?;
    for (pi, d) in p.iter_mut().zip(lead.mul_vec(&game.relative_payoff(1, n)?)) {
        *pi += d;
    }
    let dtb = &selector_matrix(k)?.transpose() * &boundary_matrix(k)?;
    for j in 2..n {
        let op = kron_all(&[
            ones_last(k),
            eye(k, j - 2),
            dtb.clone(),
            ones_last(pw(k, n - j)),
        ])?;
        for (pi, d) in p.iter_mut().zip(op.mul_vec(&game.relative_payoff(j, n)?)) {
            *pi -= d;
        }
    }
    for pi in &mut p {
        *pi += c;
    }
    Ok(PotentialVector {
        entries: p,
        constant_offset: c,
    })
}

/// `ξ_n = -S̃_1 T_2 b̃ + c 1`, a solution of `Φ ξ_n = T_2 b̃` for potential games.
pub fn recover_xi_n(game: &FiniteGame, c: f64) -> Result<Vec<f64>> {
    let (n, k) = uniform_shape(game)?;
    if n < 3 {
        return Err(Error::UnsupportedShape(
            "ξ_n recovery applies to three or more players".into(),
        ));
    }
    let sys = minimal_system(n, k)?;
    let st = sys.s_tilde.as_ref().expect("n >= 3");
    let t2b = sys.transform.t2.mul_vec(&relative_stack(game)?);
    Ok(st.mul_vec(&t2b).into_iter().map(|x| c - x).collect())
}

/// Potential from the transformed system: `ξ_n` from [`recover_xi_n`],
/// `ξ̃ = T_1 b̃ - Γ ξ_n`, then `V^p = V_1 - (1_k ⊗ I) ξ_1`.
pub fn potential_via_elimination(
    game: &FiniteGame,
    c: f64,
    tol: &Tolerance,
) -> Result<PotentialVector> {
    require_minimal(game, tol)?;
    let (n, k) = uniform_shape(game)?;
    let sys = minimal_system(n, k)?;
    let xi_n = recover_xi_n(game, c)?;
    let bt = relative_stack(game)?;
    let t1b = sys.transform.t1.mul_vec(&bt);
    let gx = sys.transform.gamma.mul_vec(&xi_n);
    let block = pw(k, n - 1);
    let xi1: Vec<f64> = t1b[..block]
        .iter()
        .zip(&gx[..block])
        .map(|(a, b)| a - b)
        .collect();
    let mut pv = crate::potential::potential_from_xi(game, &xi1)?;
    pv.constant_offset = c;
    Ok(pv)
}

/// Intermediate test on the transformed system: `T_3 b̃ = 0` and
/// `Φ ξ_n = T_2 b̃` solvable.
pub fn is_potential_transformed(game: &FiniteGame, tol: &Tolerance) -> Result<Verdict> {
    let (n, k) = uniform_shape(game)?;
    let sys = minimal_system(n, k)?;
    let bt = relative_stack(game)?;
    let t3b = sys.transform.t3.mul_vec(&bt);
    let t2b = sys.transform.t2.mul_vec(&bt);
    let threshold = tol.threshold(game.max_abs_payoff());
    let mut v = Verdict::from_residuals(&t3b, threshold);
    v.equations += t2b.len();
    match solve_consistent(&sys.transform.phi, &t2b, tol)? {
        Some(x) => {
            v.max_residual = v
                .max_residual
                .max(residual_inf(&sys.transform.phi, &x, &t2b));
        }
        None => v.potential = false,
    }
    Ok(v)
}

/// Which family of pairwise equalities to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairwiseVariant {
    /// `(I ⊗ B_k ⊗ I ⊗ B_k)(V_n - V_i) = 0` for `i < n`, plus
    /// `(I ⊗ B_k ⊗ I ⊗ B_k ⊗ I ⊗ (δ_k^k)^T)(V_j - V_i) = 0` for `i < j < n`.
    AnchoredOnLast,
    /// `(I_{k^{i-1}} ⊗ B_k ⊗ I_{k^{j-i-1}} ⊗ B_k ⊗ I_{k^{n-j}})(V_j - V_i) = 0`
    /// for all `i < j`.
    AllPairs,
}

fn pair_operator(n: usize, k: usize, i: usize, j: usize, last_selector: bool) -> Result<Matrix> {
    let b = boundary_matrix(k)?;
    if last_selector {
        kron_all(&[
            eye(k, i - 1),
            b.clone(),
            eye(k, j - i - 1),
            b,
            eye(k, n - j - 1),
            last_row(k),
        ])
    } else {
        kron_all(&[
            eye(k, i - 1),
            b.clone(),
            eye(k, j - i - 1),
            b,
            eye(k, n - j),
        ])
    }
}

/// Pairwise equalities between players. Two-player games use `B_k R B_k^T = 0`.
pub fn check_pairwise_boundary(
    game: &FiniteGame,
    tol: &Tolerance,
    variant: PairwiseVariant,
) -> Result<Verdict> {
    let (n, k) = uniform_shape(game)?;
    check_sizes(n, k)?;
    let threshold = tol.threshold(game.max_abs_payoff());
    if n == 2 {
        return Ok(Verdict::from_residuals(
            &bimatrix_residuals(game),
            threshold,
        ));
    }
    let mut residuals = Vec::new();
    match variant {
        PairwiseVariant::AnchoredOnLast => {
            for i in 1..n {
                // equals T_{3i}
                let op = pair_operator(n, k, i, n, false)?;
                residuals.extend(op.mul_vec(&game.relative_payoff(i, n)?));
            }
            for i in 1..n - 1 {
                for j in i + 1..n {
                    let op = pair_operator(n, k, i, j, true)?;
                    residuals.extend(op.mul_vec(&game.relative_payoff(i, j)?));
                }
            }
        }
        PairwiseVariant::AllPairs => {
            for i in 1..n {
                for j in i + 1..=n {
                    let op = pair_operator(n, k, i, j, false)?;
                    residuals.extend(op.mul_vec(&game.relative_payoff(i, j)?));
                }
            }
        }
    }
    Ok(Verdict::from_residuals(&residuals, threshold))
}

/// For every pair `i < j`: `(B_k ⊗ B_k) R^{ij} = 0` (or `(H_k ⊗ H_k) R^{ij} = 0`
/// with `use_centering`), where `R^{ij}` is `V_j - V_i` arranged with rows
/// indexed by the choices of `i` and `j`.
pub fn check_pairwise_reshaped(
    game: &FiniteGame,
    tol: &Tolerance,
    use_centering: bool,
) -> Result<Verdict> {
    let (n, k) = uniform_shape(game)?;
    check_sizes(n, k)?;
    let left = if use_centering {
        let h = centering_matrix(k)?;
        kron(&h, &h)?
    } else {
        let b = boundary_matrix(k)?;
        kron(&b, &b)?
    };
    let mut residuals = Vec::new();
    for i in 1..n {
        for j in i + 1..=n {
            let r = reshape_pair(&game.relative_payoff(i, j)?, n, k, i, j)?;
            residuals.extend_from_slice((&left * &r).as_slice());
        }
    }
    Ok(Verdict::from_residuals(
        &residuals,
        tol.threshold(game.max_abs_payoff()),
    ))
}

/// A bi-matrix sub-game that is not potential.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubgameFailure {
    pub i: usize,
    pub j: usize,
    /// Choices of the other players, in increasing player order.
    pub rest: Vec<usize>,
    pub max_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubgameReport {
    pub verdict: Verdict,
    pub failures: Vec<SubgameFailure>,
}

/// Runs the boundary check on every bi-matrix sub-game; works for any
/// strategy counts.
pub fn check_all_subgames(game: &FiniteGame, tol: &Tolerance) -> Result<SubgameReport> {
    let n = game.players();
    let ks = game.strategies();
    let mut failures = Vec::new();
    let mut equations = 0;
    let mut worst = 0.0_f64;
    for i in 1..n {
        for j in i + 1..=n {
            let others: Vec<usize> = (1..=n)
                .filter(|&m| m != i && m != j)
                .map(|m| ks[m - 1])
                .collect();
            let count: usize = others.iter().product();
            for flat in 0..count {
                let rest: Vec<usize> = crate::game::multi_index(&others, flat)
                    .into_iter()
                    .map(|c| c + 1)
                    .collect();
                let sg = game.subgame(i, j, &rest)?;
                let v = bimatrix_is_potential(&sg, tol);
                equations += v.equations;
                worst = worst.max(v.max_residual);
                if !v.potential {
                    failures.push(SubgameFailure {
                        i,
                        j,
                        rest,
                        max_residual: v.max_residual,
                    });
                }
            }
        }
    }
    Ok(SubgameReport {
        verdict: Verdict {
            potential: failures.is_empty(),
            max_residual: worst,
            threshold: tol.threshold(game.max_abs_payoff()),
            equations,
        },
        failures,
    })
}

/// Equation counts for `n` players with `k` strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EquationCounts {
    /// `(n-1)k^n - n k^{n-1} + 1`.
    pub minimal: usize,
    /// `n(n-1)/2 · k^{n-2} (k-1)^2`, the count of the adjacent/pairwise methods.
    pub pairwise: usize,
}

pub fn minimal_equation_count(n: usize, k: usize) -> Result<EquationCounts> {
    if n < 2 || k < 2 {
        return Err(Error::InvalidDimension(format!(
            "need n >= 2 and k >= 2, got n={n}, k={k}"
        )));
    }
    let overflow = || Error::Capacity {
        rows: usize::MAX,
        cols: 1,
        cap: crate::linalg::MAX_ENTRIES,
    };
    let kn = k.checked_pow(n as u32).ok_or_else(overflow)?;
    let kn1 = kn / k;
    let minimal = (n - 1)
        .checked_mul(kn)
        .and_then(|a| a.checked_add(1))
        .and_then(|a| a.checked_sub(n * kn1))
        .ok_or_else(overflow)?;
    let pairwise = (n * (n - 1) / 2)
        .checked_mul(kn1 / k)
        .and_then(|a| a.checked_mul((k - 1) * (k - 1)))
        .ok_or_else(overflow)?;
    Ok(EquationCounts { minimal, pairwise })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
}

/// Exact structural identities of the transform and elimination matrices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub n: usize,
    pub k: usize,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.holds)
    }
}

pub fn verify_structure_identities(n: usize, k: usize) -> Result<IdentityReport> {
    check_sizes(n, k)?;
    if n < 3 {
        return Err(Error::UnsupportedShape(
            "structure identities need at least 3 players".into(),
        ));
    }
    let mut checks = Vec::new();
    let mut record = |name: String, holds: bool| checks.push(IdentityCheck { name, holds });

    let phis: Vec<Matrix> = (1..n).map(|i| phi_block(n, k, i)).collect::<Result<_>>()?;
    let big_b = boundary_matrix(pw(k, n - 1))?;

    // -Σ_j N_{1j} Φ_j = B_{k^{n-1}}
    let mut acc = Matrix::zeros(big_b.rows(), big_b.cols());
    for j in 1..n {
        acc = &acc - &(&n_block(n, k, 1, j)? * &phis[j - 1]);
    }
    record("-sum N1j Phi_j = B".into(), acc == big_b);

    for i in 2..n {
        let mut acc = &m_block(n, k, i)? * &phis[i - 2];
        for j in i..n {
            acc = &acc + &(&l_block(n, k, i, j)? * &phis[j - 1]);
        }
        record(format!("M Phi + sum L Phi = 0 (i={i})"), acc.is_zero());
        let mg = &m_block(n, k, i)? * &g_block(n, k, i - 1)?;
        record(
            format!("M G = I (i={i})"),
            mg == Matrix::identity(mg.rows()),
        );
        for j in i..n - 1 {
            let lg = &l_block(n, k, i, j)? * &g_block(n, k, j)?;
            record(format!("L G = 0 (i={i}, j={j})"), lg.is_zero());
        }
    }

    let el = build_elimination(n, k)?;
    let s = el.s();
    let order = (n - 1) * (k - 1) * pw(k, n - 2);
    record("S square".into(), s.shape() == (order, order));
    record("S U = I".into(), &s * &el.u == Matrix::identity(order));

    let tr = build_transform(n, k)?;
    let s_phi = &s * &tr.phi;
    let top = big_b.rows();
    record(
        "S Phi = [-B; 0]".into(),
        s_phi.row_range(0, top) == -&big_b && s_phi.row_range(top, s_phi.rows()).is_zero(),
    );

    let psi: Vec<Matrix> = (1..=n)
        .map(|i| psi_block(&vec![k; n], i))
        .collect::<Result<_>>()?;
    let mut t1_ok = true;
    let mut t23_ok = true;
    for j in 1..n {
        t1_ok &= &t1_block(n, k, j)? * &psi[j - 1] == eye(k, n - 1);
        t23_ok &= (&t2_block(n, k, j)? * &psi[j - 1]).is_zero();
        t23_ok &= (&t3_block(n, k, j)? * &psi[j - 1]).is_zero();
        t23_ok &= (&t3_block(n, k, j)? * &psi[n - 1]).is_zero();
    }
    record("T1j Psi_j = I".into(), t1_ok);
    record("T2j Psi_j = T3j Psi_j = T3j Psi_n = 0".into(), t23_ok);

    // T applied to the rearranged coefficient matrix gives [I Γ; 0 Φ; 0 0]
    let block = pw(k, n - 1);
    let rows = (n - 1) * pw(k, n);
    let mut coeff = Matrix::zeros(0, n * block);
    for j in 1..n {
        let mut parts = vec![Matrix::zeros(pw(k, n), block); n];
        parts[j - 1] = -&psi[j - 1];
        parts[n - 1] = psi[n - 1].clone();
        coeff = vstack(&[coeff, hstack(&parts)?])?;
    }
    let t = vstack(&[tr.t1.clone(), tr.t2.clone(), tr.t3.clone()])?;
    let lhs = &t * &coeff;
    let ident_rows = (n - 1) * block;
    let phi_rows = tr.phi.rows();
    let expected = vstack(&[
        hstack(&[Matrix::identity(ident_rows), tr.gamma.clone()])?,
        hstack(&[Matrix::zeros(phi_rows, ident_rows), tr.phi.clone()])?,
        Matrix::zeros(rows - ident_rows - phi_rows, n * block),
    ])?;
    record(
        "T Psi' = [I Gamma; 0 Phi; 0 0]".into(),
        t.shape() == (rows, rows) && lhs == expected,
    );

    Ok(IdentityReport { n, k, checks })
}
