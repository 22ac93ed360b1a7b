//! Potential-game detection for finite normal-form games.
//!
//! Every criterion works on the structure vectors of a [`FiniteGame`]: the
//! potential equation, the two-player conditions on the relative payoff
//! matrix `R = C2 - C1` (boundary, corner, adjacent, four-cycle, centering and
//! average forms), and the minimal verification system for `n` players with
//! `k` strategies each. Potential games also get a closed-form potential and
//! their pure Nash equilibria; non-potential bi-matrix games can be projected
//! onto the nearest potential game.
//!
//! ```
//! use potentia::{check_all, FiniteGame, Tolerance};
//!
//! // coordination game: both players are paid the same
//! let g = FiniteGame::new(vec![2, 2], vec![vec![2.0, 0.0, 0.0, 1.0]; 2]).unwrap();
//! let report = check_all(&g, &Tolerance::default());
//! assert_eq!(report.consensus(), Some(true));
//! ```

pub mod error;
pub mod game;
pub mod generate;
pub mod io;
pub mod linalg;
pub mod minimal;
pub mod nash;
pub mod potential;
pub mod report;

pub mod cli;

pub use error::{Error, Result};
pub use game::{BiMatrixGame, FiniteGame, StrategyProfile};
pub use linalg::{Matrix, Tolerance};
pub use potential::{PotentialVector, Verdict};
pub use report::{check_all, CheckReport, Method};
