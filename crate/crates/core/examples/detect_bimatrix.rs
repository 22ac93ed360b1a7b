//! Runs every two-player criterion on a few classic games.

use potentia::potential::{
    average_decomposition, bimatrix_is_potential, check_adjacent_cycles, check_centering,
    check_corner, check_four_cycle,
};
use potentia::{BiMatrixGame, Matrix, Tolerance};

fn game(c1: &[&[f64]], c2: &[&[f64]]) -> BiMatrixGame {
    BiMatrixGame::new(
        Matrix::from_rows(c1).unwrap(),
        Matrix::from_rows(c2).unwrap(),
    )
    .unwrap()
}

fn main() {
    let tol = Tolerance::default();
    let games = [
        (
            "prisoners dilemma",
            game(&[&[3.0, 0.0], &[5.0, 1.0]], &[&[3.0, 5.0], &[0.0, 1.0]]),
        ),
        (
            "matching pennies",
            game(&[&[1.0, -1.0], &[-1.0, 1.0]], &[&[-1.0, 1.0], &[1.0, -1.0]]),
        ),
        (
            "battle of the sexes",
            game(&[&[2.0, 0.0], &[0.0, 1.0]], &[&[1.0, 0.0], &[0.0, 2.0]]),
        ),
        (
            "rock paper scissors",
            game(
                &[&[0.0, -1.0, 1.0], &[1.0, 0.0, -1.0], &[-1.0, 1.0, 0.0]],
                &[&[0.0, 1.0, -1.0], &[-1.0, 0.0, 1.0], &[1.0, -1.0, 0.0]],
            ),
        ),
    ];

    println!(
        "{:<22} {:>9} {:>7} {:>6} {:>10} {:>9} {:>8}",
        "game", "boundary", "corner", "hino", "four-cycle", "centering", "average"
    );
    for (name, g) in &games {
        let r = g.relative();
        let avg = average_decomposition(&r);
        let row = [
            bimatrix_is_potential(g, &tol).potential,
            check_corner(&r, &tol).potential,
            check_adjacent_cycles(&r, &tol).potential,
            check_four_cycle(&r, &tol).potential,
            check_centering(&r, &tol).potential,
            avg.verdict(&tol, g.max_abs_payoff()).potential,
        ];
        let cells: Vec<String> = row
            .iter()
            .zip([9, 7, 6, 10, 9, 8])
            .map(|(v, w)| format!("{:>w$}", if *v { "yes" } else { "no" }))
            .collect();
        println!("{name:<22} {}", cells.join(" "));
    }

    let rps = &games[3].1;
    let avg = average_decomposition(&rps.relative());
    println!("\nrock paper scissors: R = row mean + column mean - grand mean + residual");
    println!("residual:\n{:?}", avg.residual);
}
