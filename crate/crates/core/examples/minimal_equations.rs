//! Prints the minimal verification matrix and compares equation counts.

use potentia::minimal::{minimal_check_matrix, minimal_equation_count};

fn main() {
    let m = minimal_check_matrix(3, 2).unwrap();
    println!(
        "three players, two strategies each: {} equations on V3-V1, V3-V2",
        m.rows()
    );
    for r in m.to_rows() {
        let cells: Vec<String> = r.iter().map(|x| format!("{:>2}", *x as i64)).collect();
        println!("  {}", cells.join(" "));
    }

    println!(
        "\n{:>3} {:>3} {:>10} {:>10}",
        "n", "k", "minimal", "pairwise"
    );
    for n in 2..=6 {
        for k in 2..=4 {
            let c = minimal_equation_count(n, k).unwrap();
            println!("{n:>3} {k:>3} {:>10} {:>10}", c.minimal, c.pairwise);
        }
    }
}
