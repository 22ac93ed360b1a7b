//! The `potentia` command line.
//!
//! Exit codes: 0 potential or success, 1 not potential or empty result,
//! 2 usage or input error, 3 criteria disagree.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::game::FiniteGame;
use crate::io::{game_to_value, parse_game, serialize_game};
use crate::linalg::Tolerance;
use crate::minimal::{minimal_check_matrix, minimal_equation_count, potential_closed_form};
use crate::nash::{nash_from_potential, pure_nash_brute, EquilibriumSet};
use crate::potential::{
    bimatrix_potential, is_potential_by_equation, potential_by_equation, project_to_potential,
    validate_potential, PotentialVector, Verdict,
};
use crate::report::{check, CheckReport, Method};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_POTENTIAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DISAGREE: i32 = 3;

const METHODS: [&str; 11] = [
    "equation",
    "theorem1",
    "corner",
    "hino",
    "four-cycle",
    "centering",
    "minimal",
    "t21",
    "reshaped",
    "subgames",
    "all",
];

#[derive(Debug, Parser)]
#[command(
    name = "potentia",
    version,
    about = "Decide whether a finite game is a potential game"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Absolute part of the zero-test threshold.
    #[arg(long, global = true, default_value_t = Tolerance::default().abs_eps)]
    abs_eps: f64,

    /// Relative part of the zero-test threshold, scaled by the largest payoff.
    #[arg(long, global = true, default_value_t = Tolerance::default().rel_scale)]
    rel_scale: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

/// Ways to compute a potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Route {
    /// Two players: `C1` plus the last row of `C2 - C1`, plus `λ`.
    #[value(name = "eq9-1")]
    #[serde(rename = "eq9-1")]
    Bimatrix,
    /// Any game: solve the potential equation and read off `ξ_1`.
    #[value(name = "eq8-1")]
    #[serde(rename = "eq8-1")]
    Equation,
    /// `n` players with `k` strategies each: closed form in the payoff differences.
    #[value(name = "eq40")]
    #[serde(rename = "eq40")]
    ClosedForm,
}

impl Route {
    fn name(self) -> &'static str {
        match self {
            Route::Bimatrix => "eq9-1",
            Route::Equation => "eq8-1",
            Route::ClosedForm => "eq40",
        }
    }

    fn applicable(self, game: &FiniteGame) -> bool {
        match self {
            Route::Bimatrix => game.players() == 2,
            Route::Equation => true,
            Route::ClosedForm => game.uniform_k().is_some_and(|k| k >= 2),
        }
    }

    /// Bi-matrix route for two players, closed form for uniform games,
    /// otherwise the equation route.
    pub fn default_for(game: &FiniteGame) -> Route {
        [Route::Bimatrix, Route::ClosedForm]
            .into_iter()
            .find(|r| r.applicable(game))
            .unwrap_or(Route::Equation)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one criterion or all of them.
    Check {
        /// Game file, or `-` for stdin.
        input: String,
        #[arg(long, default_value = "all", value_parser = METHODS)]
        method: String,
    },
    /// Compute a potential function.
    Potential {
        input: String,
        #[arg(long, value_enum)]
        route: Option<Route>,
        /// Free additive constant for the equation and closed-form routes.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        constant: f64,
        /// Free additive constant for the bi-matrix route.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        lambda: f64,
    },
    /// Project a bi-matrix game onto the nearest potential game.
    Project {
        input: String,
        /// Write the projected game here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// List pure Nash equilibria.
    Nash { input: String },
    /// Print the minimal verification matrix for `n` players with `k` strategies.
    Equations { n: usize, k: usize },
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    format: Format,
}

impl Io<'_> {
    fn load(&mut self, input: &str) -> Result<FiniteGame, String> {
        let text = if input == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| format!("reading stdin: {e}"))?;
            s
        } else {
            std::fs::read_to_string(input).map_err(|e| format!("reading {input}: {e}"))?
        };
        parse_game(&text).map_err(|e| e.to_string())
    }

    fn emit(&mut self, human: &str, machine: serde_json::Value) {
        let text = match self.format {
            Format::Human => human.to_string(),
            Format::Json => serde_json::to_string_pretty(&machine).expect("finite values") + "\n",
        };
        // a closed pipe is not worth a panic
        let _ = self.out.write_all(text.as_bytes());
    }

    fn fail(&mut self, code: i32, message: &str) -> i32 {
        let _ = writeln!(self.err, "error: {message}");
        code
    }
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::Precondition { .. } => EXIT_NOT_POTENTIAL,
        _ => EXIT_INPUT,
    }
}

/// Runs the CLI on explicit streams and returns the exit code.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_INPUT
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let mut io = Io {
        stdin,
        out,
        err,
        format: cli.format,
    };
    let tol = match Tolerance::new(cli.abs_eps, cli.rel_scale) {
        Ok(t) => t,
        Err(e) => return io.fail(EXIT_INPUT, &e.to_string()),
    };
    match cli.command {
        Command::Check { input, method } => cmd_check(&mut io, &input, &method, &tol),
        Command::Potential {
            input,
            route,
            constant,
            lambda,
        } => cmd_potential(&mut io, &input, route, constant, lambda, &tol),
        Command::Project { input, output } => cmd_project(&mut io, &input, output, &tol),
        Command::Nash { input } => cmd_nash(&mut io, &input, &tol),
        Command::Equations { n, k } => cmd_equations(&mut io, n, k),
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdin = std::io::stdin();
    let mut lock = stdin.lock();
    run(
        std::env::args_os(),
        &mut lock,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

fn verdict_word(potential: bool) -> &'static str {
    if potential {
        "potential"
    } else {
        "not potential"
    }
}

fn render_report(game: &FiniteGame, report: &CheckReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "game: {} players, strategies {:?}",
        game.players(),
        game.strategies()
    );
    let _ = writeln!(
        s,
        "{:<20} {:<14} {:>12} {:>12} {:>9}  condition",
        "criterion", "verdict", "max residual", "threshold", "equations"
    );
    for r in &report.results {
        let v = &r.verdict;
        let _ = writeln!(
            s,
            "{:<20} {:<14} {:>12.3e} {:>12.3e} {:>9}  {}",
            r.name,
            verdict_word(v.potential),
            v.max_residual,
            v.threshold,
            v.equations,
            r.method.condition()
        );
        if !r.residuals.is_empty() {
            let list: Vec<String> = r.residuals.iter().map(|x| format!("{x}")).collect();
            let _ = writeln!(s, "  residuals: [{}]", list.join(", "));
        }
    }
    for sk in &report.skipped {
        let _ = writeln!(s, "{:<20} skipped: {}", sk.method.name(), sk.reason);
    }
    for f in &report.subgame_failures {
        let _ = writeln!(
            s,
            "  sub-game of players ({}, {}) with others at {:?} fails (residual {:.3e})",
            f.i, f.j, f.rest, f.max_residual
        );
    }
    match report.consensus() {
        Some(p) => {
            let _ = writeln!(s, "result: {}", verdict_word(p));
        }
        None => {
            let _ = writeln!(s, "result: criteria disagree");
        }
    }
    s
}

fn cmd_check(io: &mut Io, input: &str, method: &str, tol: &Tolerance) -> i32 {
    let game = match io.load(input) {
        Ok(g) => g,
        Err(m) => return io.fail(EXIT_INPUT, &m),
    };
    let method: Method = method.parse().expect("clap restricts values");
    let report = match check(&game, method, tol) {
        Ok(r) => r,
        Err(e) => return io.fail(EXIT_INPUT, &e.to_string()),
    };
    let consensus = report.consensus();
    io.emit(
        &render_report(&game, &report),
        json!({ "report": report, "consensus": consensus }),
    );
    match consensus {
        Some(true) => EXIT_OK,
        Some(false) => EXIT_NOT_POTENTIAL,
        None if report.results.is_empty() => io.fail(EXIT_INPUT, "no criterion applies"),
        None => EXIT_DISAGREE,
    }
}

/// Computes a potential along one route; the game must be potential.
pub fn compute_potential(
    game: &FiniteGame,
    route: Route,
    constant: f64,
    lambda: f64,
    tol: &Tolerance,
) -> Result<PotentialVector> {
    if !route.applicable(game) {
        return Err(Error::UnsupportedShape(format!(
            "route {} does not apply to strategies {:?}",
            route.name(),
            game.strategies()
        )));
    }
    match route {
        Route::Bimatrix => {
            bimatrix_potential(&game.to_bimatrix().expect("two players"), lambda, tol)
        }
        Route::Equation => Ok(potential_by_equation(game, tol)?.shifted(constant)),
        Route::ClosedForm => potential_closed_form(game, constant, tol),
    }
}

#[derive(Serialize)]
struct CrossCheck {
    route: Route,
    spread: f64,
}

fn cmd_potential(
    io: &mut Io,
    input: &str,
    route: Option<Route>,
    constant: f64,
    lambda: f64,
    tol: &Tolerance,
) -> i32 {
    let game = match io.load(input) {
        Ok(g) => g,
        Err(m) => return io.fail(EXIT_INPUT, &m),
    };
    let route = route.unwrap_or_else(|| Route::default_for(&game));
    let pv = match compute_potential(&game, route, constant, lambda, tol) {
        Ok(p) => p,
        Err(e @ Error::Precondition { .. }) => {
            let code = exit_for(&e);
            if let Error::Precondition { residuals, .. } = &e {
                let failing: Vec<f64> = residuals.iter().copied().filter(|r| *r != 0.0).collect();
                let _ = writeln!(io.err, "failing residuals: {failing:?}");
            }
            return io.fail(code, &e.to_string());
        }
        Err(e) => return io.fail(exit_for(&e), &e.to_string()),
    };
    let validation = match validate_potential(&game, &pv, tol) {
        Ok(v) => v,
        Err(e) => return io.fail(EXIT_INPUT, &e.to_string()),
    };
    let others: Vec<CrossCheck> = [Route::Bimatrix, Route::Equation, Route::ClosedForm]
        .into_iter()
        .filter(|r| *r != route && r.applicable(&game))
        .filter_map(|r| {
            compute_potential(&game, r, constant, lambda, tol)
                .ok()
                .map(|q| CrossCheck {
                    route: r,
                    spread: pv.spread_against(&q),
                })
        })
        .collect();

    let matrix = (game.players() == 2).then(|| {
        let ks = game.strategies();
        pv.as_matrix(ks[0], ks[1]).expect("shape matches").to_rows()
    });
    let mut human = String::new();
    let _ = writeln!(human, "route: {}", route.name());
    match &matrix {
        Some(rows) => {
            let _ = writeln!(human, "potential matrix:");
            for r in rows {
                let cells: Vec<String> = r.iter().map(|x| format!("{x:>10.4}")).collect();
                let _ = writeln!(human, "  {}", cells.join(" "));
            }
        }
        None => {
            let _ = writeln!(human, "potential over profiles:");
            for (p, v) in game.profiles().zip(&pv.entries) {
                let _ = writeln!(human, "  {p}  {v:.6}");
            }
        }
    }
    let _ = writeln!(
        human,
        "validation: {} (max residual {:.3e}, threshold {:.3e})",
        verdict_word(validation.potential),
        validation.max_residual,
        validation.threshold
    );
    for c in &others {
        let _ = writeln!(
            human,
            "route {} differs by a constant up to spread {:.3e}",
            c.route.name(),
            c.spread
        );
    }
    io.emit(
        &human,
        json!({
            "route": route,
            "potential": pv.entries,
            "constant": pv.constant_offset,
            "matrix": matrix,
            "validation": validation,
            "cross_check": others,
        }),
    );
    if validation.potential {
        EXIT_OK
    } else {
        EXIT_NOT_POTENTIAL
    }
}

fn cmd_project(io: &mut Io, input: &str, output: Option<PathBuf>, tol: &Tolerance) -> i32 {
    let game = match io.load(input) {
        Ok(g) => g,
        Err(m) => return io.fail(EXIT_INPUT, &m),
    };
    let Some(bm) = game.to_bimatrix() else {
        return io.fail(
            EXIT_INPUT,
            &format!(
                "projection needs a two-player game, got {} players",
                game.players()
            ),
        );
    };
    let proj = project_to_potential(&bm);
    let projected = FiniteGame::from_bimatrix(&proj.game).with_labels(game.labels().cloned());
    let recheck = crate::potential::bimatrix_is_potential(&proj.game, tol);
    let text = serialize_game(&projected) + "\n";
    if let Some(path) = &output {
        if let Err(e) = std::fs::write(path, &text) {
            return io.fail(EXIT_INPUT, &format!("writing {}: {e}", path.display()));
        }
    }
    let mut human = format!("distance: {}\n", proj.distance);
    let _ = writeln!(
        human,
        "projected game is {}",
        verdict_word(recheck.potential)
    );
    if output.is_none() {
        human.push_str(&text);
    }
    io.emit(
        &human,
        json!({
            "distance": proj.distance,
            "potential": recheck.potential,
            "game": game_to_value(&projected),
        }),
    );
    EXIT_OK
}

fn profile_list(set: &EquilibriumSet) -> Vec<String> {
    set.profiles.iter().map(|p| p.to_string()).collect()
}

fn cmd_nash(io: &mut Io, input: &str, tol: &Tolerance) -> i32 {
    let game = match io.load(input) {
        Ok(g) => g,
        Err(m) => return io.fail(EXIT_INPUT, &m),
    };
    let brute = pure_nash_brute(&game, tol);
    let potential: Option<Verdict> = is_potential_by_equation(&game, tol).ok().map(|e| e.verdict);
    let via = match potential {
        Some(v) if v.potential => {
            let route = Route::default_for(&game);
            match compute_potential(&game, route, 0.0, 0.0, tol)
                .and_then(|pv| nash_from_potential(&game, &pv, tol))
            {
                Ok(s) => Some(s),
                Err(e) => return io.fail(EXIT_DISAGREE, &e.to_string()),
            }
        }
        _ => None,
    };
    let agree = via.as_ref().map(|s| s.profiles == brute.profiles);

    let mut human = String::new();
    let _ = writeln!(
        human,
        "pure Nash equilibria (best-response check): {}",
        brute.len()
    );
    for p in &brute.profiles {
        let _ = writeln!(human, "  {p}");
    }
    if let Some(s) = &via {
        let _ = writeln!(
            human,
            "potential maximization: {} local maxima, global maximum at {}",
            s.len(),
            profile_list(&EquilibriumSet {
                profiles: s.global_argmax.clone(),
                ..s.clone()
            })
            .join(" ")
        );
        let _ = writeln!(human, "methods agree: {}", agree == Some(true));
    }
    io.emit(
        &human,
        json!({
            "brute_force": profile_list(&brute),
            "potential_argmax": via.as_ref().map(profile_list),
            "global_argmax": via.as_ref().map(|s| s.global_argmax.iter().map(|p| p.to_string()).collect::<Vec<_>>()),
            "agree": agree,
        }),
    );
    if agree == Some(false) {
        return io.fail(EXIT_DISAGREE, "equilibrium sets differ");
    }
    if brute.is_empty() {
        EXIT_NOT_POTENTIAL
    } else {
        EXIT_OK
    }
}

fn cmd_equations(io: &mut Io, n: usize, k: usize) -> i32 {
    let result = minimal_equation_count(n, k).and_then(|c| Ok((c, minimal_check_matrix(n, k)?)));
    let (counts, m) = match result {
        Ok(x) => x,
        Err(e) => return io.fail(EXIT_INPUT, &e.to_string()),
    };
    // entries are small integers
    let rows: Vec<Vec<i64>> = m
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.round() as i64).collect())
        .collect();
    let mut human = String::new();
    for r in &rows {
        let cells: Vec<String> = r.iter().map(|x| format!("{x:>2}")).collect();
        let _ = writeln!(human, "{}", cells.join(" "));
    }
    let _ = writeln!(
        human,
        "({n},{k}): {} minimal vs {} pairwise",
        counts.minimal, counts.pairwise
    );
    io.emit(
        &human,
        json!({
            "n": n,
            "k": k,
            "rows": rows,
            "minimal": counts.minimal,
            "pairwise": counts.pairwise,
        }),
    );
    EXIT_OK
}
