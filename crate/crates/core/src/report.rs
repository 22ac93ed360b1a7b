//! Running one or all criteria on a game and comparing their verdicts.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::FiniteGame;
use crate::linalg::Tolerance;
use crate::minimal::{
    check_all_subgames, check_pairwise_boundary, check_pairwise_reshaped, is_potential_minimal,
    PairwiseVariant, SubgameFailure,
};
use crate::potential::{
    bimatrix_is_potential, check_adjacent_cycles, check_centering, check_corner, check_four_cycle,
    is_potential_by_equation, Verdict,
};

/// A detection criterion, named as on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Equation,
    Boundary,
    Corner,
    AdjacentCycles,
    FourCycle,
    Centering,
    Minimal,
    Pairwise,
    Reshaped,
    Subgames,
    All,
}

impl Method {
    pub const SINGLE: [Method; 10] = [
        Method::Equation,
        Method::Boundary,
        Method::Corner,
        Method::AdjacentCycles,
        Method::FourCycle,
        Method::Centering,
        Method::Minimal,
        Method::Pairwise,
        Method::Reshaped,
        Method::Subgames,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Equation => "equation",
            Method::Boundary => "theorem1",
            Method::Corner => "corner",
            Method::AdjacentCycles => "hino",
            Method::FourCycle => "four-cycle",
            Method::Centering => "centering",
            Method::Minimal => "minimal",
            Method::Pairwise => "t21",
            Method::Reshaped => "reshaped",
            Method::Subgames => "subgames",
            Method::All => "all",
        }
    }

    /// The condition a method tests, in words.
    pub fn condition(self) -> &'static str {
        match self {
            Method::Equation => "potential equation Psi xi = b is solvable",
            Method::Boundary => "B_k1 R B_k2^T = 0 with R = C2 - C1",
            Method::Corner => "r_ij - r_i,k2 - r_k1,j + r_k1,k2 = 0",
            Method::AdjacentCycles => "adjacent 2x2 cycles of R sum to zero",
            Method::FourCycle => "every 4-cycle of R sums to zero",
            Method::Centering => "H_k1 R H_k2 = 0",
            Method::Minimal => "minimal system [S2 T2; T3] b = 0",
            Method::Pairwise => "pairwise boundary equalities on V_j - V_i",
            Method::Reshaped => "(B x B) or (H x H) annihilates each reshaped V_j - V_i",
            Method::Subgames => "every bi-matrix sub-game is potential",
            Method::All => "all applicable criteria",
        }
    }

    fn two_player_only(self) -> bool {
        matches!(
            self,
            Method::Boundary
                | Method::Corner
                | Method::AdjacentCycles
                | Method::FourCycle
                | Method::Centering
        )
    }
}

impl Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::SINGLE
            .iter()
            .chain(&[Method::All])
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidDimension(format!("unknown method '{s}'")))
    }
}

/// One verdict inside a report. Some methods contribute more than one
/// (for example both pairwise variants).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub method: Method,
    pub name: String,
    pub verdict: Verdict,
    /// Value of every equation, for methods with a fixed equation list.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skipped {
    pub method: Method,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub strategies: Vec<usize>,
    pub results: Vec<CriterionResult>,
    pub skipped: Vec<Skipped>,
    /// Bi-matrix sub-games that failed, when the sub-game criterion ran.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub subgame_failures: Vec<SubgameFailure>,
}

impl CheckReport {
    /// The common verdict, or `None` if the criteria disagree or none ran.
    pub fn consensus(&self) -> Option<bool> {
        let first = self.results.first()?.verdict.potential;
        self.results
            .iter()
            .all(|r| r.verdict.potential == first)
            .then_some(first)
    }

    pub fn max_residual(&self) -> f64 {
        self.results
            .iter()
            .map(|r| r.verdict.max_residual)
            .fold(0.0, f64::max)
    }
}

fn applicability(game: &FiniteGame, method: Method) -> Result<()> {
    let n = game.players();
    if method.two_player_only() && n != 2 {
        return Err(Error::UnsupportedShape(format!(
            "{method} applies to two-player games, got {n} players"
        )));
    }
    if matches!(
        method,
        Method::Minimal | Method::Pairwise | Method::Reshaped
    ) {
        let k = game.require_uniform()?;
        if k < 2 {
            return Err(Error::UnsupportedShape(format!(
                "{method} needs at least 2 strategies per player"
            )));
        }
    }
    Ok(())
}

fn run(game: &FiniteGame, method: Method, tol: &Tolerance, report: &mut CheckReport) -> Result<()> {
    applicability(game, method)?;
    if method == Method::All {
        for m in Method::SINGLE {
            // shape and capacity limits skip a method instead of failing the run
            if let Err(e) = run(game, m, tol, report) {
                report.skipped.push(Skipped {
                    method: m,
                    reason: e.to_string(),
                });
            }
        }
        return Ok(());
    }
    let relative = || game.to_bimatrix().expect("two players").relative();
    let plain = |name: &str, v: Verdict| (name.to_string(), v, Vec::new());
    let found: Vec<(String, Verdict, Vec<f64>)> = match method {
        Method::Equation => vec![plain(
            "equation",
            is_potential_by_equation(game, tol)?.verdict,
        )],
        Method::Boundary => {
            let g = game.to_bimatrix().expect("two players");
            vec![plain("theorem1", bimatrix_is_potential(&g, tol))]
        }
        Method::Corner => vec![plain("corner", check_corner(&relative(), tol))],
        Method::AdjacentCycles => vec![plain("hino", check_adjacent_cycles(&relative(), tol))],
        Method::FourCycle => vec![plain("four-cycle", check_four_cycle(&relative(), tol))],
        Method::Centering => vec![plain("centering", check_centering(&relative(), tol))],
        Method::Minimal => {
            let mv = is_potential_minimal(game, tol)?;
            vec![("minimal".to_string(), mv.verdict, mv.residuals)]
        }
        Method::Pairwise => vec![
            plain(
                "t21-ii",
                check_pairwise_boundary(game, tol, PairwiseVariant::AnchoredOnLast)?,
            ),
            plain(
                "t21-iii",
                check_pairwise_boundary(game, tol, PairwiseVariant::AllPairs)?,
            ),
        ],
        Method::Reshaped => vec![
            plain(
                "reshaped-boundary",
                check_pairwise_reshaped(game, tol, false)?,
            ),
            plain(
                "reshaped-centering",
                check_pairwise_reshaped(game, tol, true)?,
            ),
        ],
        Method::Subgames => {
            let sub = check_all_subgames(game, tol)?;
            report.subgame_failures = sub.failures;
            vec![plain("subgames", sub.verdict)]
        }
        Method::All => unreachable!("handled above"),
    };
    report.results.extend(
        found
            .into_iter()
            .map(|(name, verdict, residuals)| CriterionResult {
                method,
                name,
                verdict,
                residuals,
            }),
    );
    Ok(())
}

fn empty_report(game: &FiniteGame) -> CheckReport {
    CheckReport {
        strategies: game.strategies().to_vec(),
        results: Vec::new(),
        skipped: Vec::new(),
        subgame_failures: Vec::new(),
    }
}

/// Runs one method; errors with [`Error::UnsupportedShape`] when the method
/// does not apply to the game's shape.
pub fn check(game: &FiniteGame, method: Method, tol: &Tolerance) -> Result<CheckReport> {
    let mut report = empty_report(game);
    run(game, method, tol, &mut report)?;
    Ok(report)
}

/// Runs every criterion that applies to the game's shape; the others are
/// listed in [`CheckReport::skipped`].
pub fn check_all(game: &FiniteGame, tol: &Tolerance) -> CheckReport {
    let mut report = empty_report(game);
    run(game, Method::All, tol, &mut report).expect("errors are recorded as skips");
    report
}
