//! JSON game files.
//!
//! ```text
//! { "players": 3,
//!   "strategies": [2, 2, 2],
//!   "payoffs": [[...8 numbers...], [...], [...]],
//!   "labels": { "players": [...], "strategies": [[...], ...] } }
//! ```
//!
//! Payoff row `i` lists player `i`'s payoffs over all profiles in
//! lexicographic order with player 1 varying slowest. A two-player game may
//! instead be given as `{ "bimatrix": { "C1": [[...]], "C2": [[...]] } }`.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::game::{BiMatrixGame, FiniteGame, Labels};
use crate::linalg::Matrix;

fn parse_err(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.into(),
        message: message.into(),
    }
}

fn as_count(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| parse_err(path, "expected a nonnegative integer"))
}

fn as_number(v: &Value, path: &str) -> Result<f64> {
    let x = v
        .as_f64()
        .ok_or_else(|| parse_err(path, "expected a number"))?;
    if !x.is_finite() {
        return Err(parse_err(path, "number is not finite"));
    }
    Ok(x)
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| parse_err(path, "expected an array"))
}

fn number_row(v: &Value, path: &str) -> Result<Vec<f64>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_number(x, &format!("{path}[{i}]")))
        .collect()
}

fn parse_matrix(v: &Value, path: &str) -> Result<Matrix> {
    let rows: Vec<Vec<f64>> = as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, r)| number_row(r, &format!("{path}[{i}]")))
        .collect::<Result<_>>()?;
    if rows.is_empty() {
        return Err(parse_err(path, "matrix has no rows"));
    }
    let cols = rows[0].len();
    if let Some(i) = rows.iter().position(|r| r.len() != cols) {
        return Err(parse_err(
            format!("{path}[{i}]"),
            format!("row has {} entries, expected {cols}", rows[i].len()),
        ));
    }
    Matrix::from_rows(&rows).map_err(|e| parse_err(path, e.to_string()))
}

fn parse_bimatrix(v: &Value) -> Result<FiniteGame> {
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err("bimatrix", "expected an object"))?;
    let c1 = parse_matrix(
        obj.get("C1")
            .ok_or_else(|| parse_err("bimatrix.C1", "missing"))?,
        "bimatrix.C1",
    )?;
    let c2 = parse_matrix(
        obj.get("C2")
            .ok_or_else(|| parse_err("bimatrix.C2", "missing"))?,
        "bimatrix.C2",
    )?;
    let g = BiMatrixGame::new(c1, c2).map_err(|e| parse_err("bimatrix", e.to_string()))?;
    Ok(FiniteGame::from_bimatrix(&g))
}

fn parse_labels(v: &Value) -> Result<Labels> {
    serde_json::from_value(v.clone()).map_err(|e| parse_err("labels", e.to_string()))
}

/// Parses a game document.
pub fn parse_game(text: &str) -> Result<FiniteGame> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| parse_err("$", format!("invalid JSON: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| parse_err("$", "expected a JSON object"))?;
    let labels = obj.get("labels").map(parse_labels).transpose()?;

    if let Some(bm) = obj.get("bimatrix") {
        return Ok(parse_bimatrix(bm)?.with_labels(labels));
    }

    let players = as_count(
        obj.get("players")
            .ok_or_else(|| parse_err("players", "missing"))?,
        "players",
    )?;
    if players < 2 {
        return Err(parse_err(
            "players",
            format!("need at least 2 players, got {players}"),
        ));
    }
    let strategies: Vec<usize> = as_array(
        obj.get("strategies")
            .ok_or_else(|| parse_err("strategies", "missing"))?,
        "strategies",
    )?
    .iter()
    .enumerate()
    .map(|(i, k)| {
        let path = format!("strategies[{i}]");
        let k = as_count(k, &path)?;
        if k == 0 {
            return Err(parse_err(path, "strategy count must be at least 1"));
        }
        Ok(k)
    })
    .collect::<Result<_>>()?;
    if strategies.len() != players {
        return Err(parse_err(
            "strategies",
            format!("{} strategy counts for {players} players", strategies.len()),
        ));
    }
    let profiles = strategies
        .iter()
        .try_fold(1usize, |a, &k| a.checked_mul(k))
        .ok_or_else(|| parse_err("strategies", "profile count overflows"))?;

    let rows = as_array(
        obj.get("payoffs")
            .ok_or_else(|| parse_err("payoffs", "missing"))?,
        "payoffs",
    )?;
    if rows.len() != players {
        return Err(parse_err(
            "payoffs",
            format!("{} payoff rows for {players} players", rows.len()),
        ));
    }
    let mut payoffs = Vec::with_capacity(players);
    for (i, r) in rows.iter().enumerate() {
        let path = format!("payoffs[{i}]");
        let row = number_row(r, &path)?;
        if row.len() != profiles {
            return Err(parse_err(
                path,
                format!(
                    "row {i} has {} entries, expected {profiles} for strategies {strategies:?}",
                    row.len()
                ),
            ));
        }
        payoffs.push(row);
    }
    Ok(FiniteGame::new(strategies, payoffs)
        .map_err(|e| parse_err("$", e.to_string()))?
        .with_labels(labels))
}

#[derive(Serialize)]
struct GameDoc<'a> {
    players: usize,
    strategies: &'a [usize],
    payoffs: &'a [Vec<f64>],
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<&'a Labels>,
}

/// The game as a JSON value in the standard (non-bimatrix) form.
pub fn game_to_value(game: &FiniteGame) -> Value {
    let doc = GameDoc {
        players: game.players(),
        strategies: game.strategies(),
        payoffs: game.payoffs(),
        labels: game.labels(),
    };
    serde_json::to_value(doc).unwrap_or_else(|_| Value::Object(Map::new()))
}

fn compact<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("finite values serialize")
}

/// Serializes a game as a JSON document with one payoff row per line.
pub fn serialize_game(game: &FiniteGame) -> String {
    let rows: Vec<String> = game
        .payoffs()
        .iter()
        .map(|r| format!("    {}", compact(r)))
        .collect();
    let mut out = format!(
        "{{\n  \"players\": {},\n  \"strategies\": {},\n  \"payoffs\": [\n{}\n  ]",
        game.players(),
        compact(game.strategies()),
        rows.join(",\n")
    );
    if let Some(labels) = game.labels() {
        out.push_str(&format!(",\n  \"labels\": {}", compact(labels)));
    }
    out.push_str("\n}");
    out
}
