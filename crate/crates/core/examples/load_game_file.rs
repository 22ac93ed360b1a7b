//! Reads a game file (default: the bundled prisoners dilemma) and prints the
//! report of every criterion as JSON.

use potentia::io::parse_game;
use potentia::{check_all, Tolerance};

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/data/games/prisoners_dilemma.json"
        )
        .to_string()
    });
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| {
        eprintln!("cannot read {path}: {e}");
        std::process::exit(2);
    });
    let game = match parse_game(&text) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let report = check_all(&game, &Tolerance::default());
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
}
