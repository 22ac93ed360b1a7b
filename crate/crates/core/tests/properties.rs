mod common;

use common::{deviation_residual, nash_oracle, spread};
use potentia::game::{flatten_pair, reshape_pair};
use potentia::generate::{perturb, random_bimatrix, random_game, random_potential_game};
use potentia::linalg::{
    boundary_matrix, centering_matrix, hstack, kron, max_abs, nullity, numerical_rank,
    selector_matrix, solve_consistent, unvec_rows, vec_rows, Matrix,
};
use potentia::minimal::{
    check_all_subgames, check_pairwise_boundary, check_pairwise_reshaped, is_potential_minimal,
    is_potential_transformed, minimal_check_matrix, minimal_equation_count, minimal_system,
    recover_xi_n, relative_stack, verify_structure_identities, PairwiseVariant,
};
use potentia::nash::{nash_from_potential, pure_nash_brute};
use potentia::potential::{
    average_decomposition, bimatrix_is_potential, bimatrix_potential, check_adjacent_cycles,
    check_centering, check_corner, check_four_cycle, is_potential_by_equation,
    potential_by_equation, potential_projector, project_to_potential, validate_potential,
};
use potentia::{FiniteGame, StrategyProfile, Tolerance};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_matrix(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(-5i32..=5, r * c).prop_map(move |v| {
            Matrix::from_vec(r, c, v.into_iter().map(f64::from).collect()).unwrap()
        })
    })
}

/// A game that is potential by construction, optionally perturbed.
fn game_case(shapes: Vec<Vec<usize>>) -> impl Strategy<Value = (FiniteGame, bool)> {
    (prop::sample::select(shapes), any::<u64>(), any::<bool>()).prop_map(|(shape, seed, bad)| {
        let mut r = rng(seed);
        let (g, _) = random_potential_game(&shape, &mut r).unwrap();
        if bad {
            (perturb(&g, &mut r).unwrap(), false)
        } else {
            (g, true)
        }
    })
}

fn bimatrix_shapes() -> Vec<Vec<usize>> {
    let mut s = Vec::new();
    for a in 2..=4 {
        for b in 2..=4 {
            s.push(vec![a, b]);
        }
    }
    s
}

fn uniform_shapes() -> Vec<Vec<usize>> {
    vec![
        vec![2, 2],
        vec![3, 3],
        vec![2, 2, 2],
        vec![3, 3, 3],
        vec![2, 2, 2, 2],
        vec![3, 3, 3, 3],
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn structured_block_identities(k in 2usize..12) {
        let b = boundary_matrix(k).unwrap();
        let d = selector_matrix(k).unwrap();
        let ones = Matrix::ones(k, 1);
        let last = Matrix::last_unit(k).unwrap();
        prop_assert!((&b * &ones).is_zero());
        prop_assert!((&d * &last).is_zero());
        prop_assert_eq!(&b * &d.transpose(), Matrix::identity(k - 1));
        prop_assert_eq!(&d.transpose() * &b, &Matrix::identity(k) - &(&ones * &last.transpose()));
    }

    #[test]
    fn centering_is_an_orthogonal_projector(k in 1usize..12) {
        let h = centering_matrix(k).unwrap();
        prop_assert!(h.max_abs_diff(&h.transpose()) == 0.0);
        prop_assert!((&h * &h).max_abs_diff(&h) <= 1e-12);
        prop_assert!((&h * &Matrix::ones(k, 1)).max_abs() <= 1e-12);
    }

    #[test]
    fn vec_rows_round_trip(m in small_matrix(6)) {
        let v = vec_rows(&m);
        prop_assert_eq!(unvec_rows(&v, m.rows(), m.cols()).unwrap(), m);
    }

    #[test]
    fn kron_matches_index_formula(a in small_matrix(4), b in small_matrix(4)) {
        let k = kron(&a, &b).unwrap();
        prop_assert_eq!(k.shape(), (a.rows() * b.rows(), a.cols() * b.cols()));
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                for p in 0..b.rows() {
                    for q in 0..b.cols() {
                        prop_assert_eq!(k.get(i * b.rows() + p, j * b.cols() + q), a.get(i, j) * b.get(p, q));
                    }
                }
            }
        }
    }

    #[test]
    fn solve_consistent_agrees_with_rank_test(a in small_matrix(5), seed in any::<u64>(), inside in any::<bool>()) {
        use rand::Rng;
        let mut r = rng(seed);
        // right-hand sides inside the column space are consistent by construction
        let b: Vec<f64> = if inside {
            let x: Vec<f64> = (0..a.cols()).map(|_| f64::from(r.random_range(-3i32..=3))).collect();
            a.mul_vec(&x)
        } else {
            (0..a.rows()).map(|_| f64::from(r.random_range(-3i32..=3))).collect()
        };
        let tol = Tolerance::default();
        let scale = a.max_abs().max(max_abs(&b));
        let aug = hstack(&[a.clone(), Matrix::column(&b)]).unwrap();
        let inconsistent = numerical_rank(&aug, &tol, scale) > numerical_rank(&a, &tol, scale);
        let sol = solve_consistent(&a, &b, &tol).unwrap();
        prop_assert_eq!(sol.is_none(), inconsistent);
        if inside {
            prop_assert!(sol.is_some());
        }
        if let Some(x) = sol {
            let ax = a.mul_vec(&x);
            prop_assert!(ax.iter().zip(&b).all(|(l, r)| (l - r).abs() <= 1e-8));
        }
    }

    #[test]
    fn profile_index_bijection(shape in prop::collection::vec(1usize..=4, 2..=4)) {
        let g = FiniteGame::zero(shape).unwrap();
        let mut seen = vec![false; g.profile_count()];
        for p in g.profiles() {
            let i = g.profile_to_index(&p).unwrap();
            prop_assert!(!seen[i]);
            seen[i] = true;
            prop_assert_eq!(g.index_to_profile(i).unwrap(), p);
        }
        prop_assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn relative_payoffs_compose(shape in prop::collection::vec(1usize..=3, 3..=4), seed in any::<u64>()) {
        let g = random_game(&shape, &mut rng(seed)).unwrap();
        let n = g.players();
        for i in 1..=n {
            for j in 1..=n {
                for m in 1..=n {
                    if i == j || j == m || i == m {
                        continue;
                    }
                    let ij = g.relative_payoff(i, j).unwrap();
                    let jm = g.relative_payoff(j, m).unwrap();
                    let im = g.relative_payoff(i, m).unwrap();
                    for t in 0..ij.len() {
                        prop_assert!((ij[t] + jm[t] - im[t]).abs() <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn reshape_pair_round_trip(n in 2usize..=4, k in 2usize..=3, seed in any::<u64>()) {
        use rand::Rng;
        let mut r = rng(seed);
        let v: Vec<f64> = (0..k.pow(n as u32)).map(|_| r.random_range(-5.0..5.0)).collect();
        for i in 1..n {
            for j in i + 1..=n {
                let m = reshape_pair(&v, n, k, i, j).unwrap();
                prop_assert_eq!(m.shape(), (k * k, k.pow(n as u32 - 2)));
                prop_assert_eq!(flatten_pair(&m, n, k, i, j).unwrap(), v.clone());
            }
        }
    }

    #[test]
    fn subgames_are_columns_of_reshaped_relative(k in 2usize..=3, seed in any::<u64>()) {
        let g = random_game(&[k, k, k], &mut rng(seed)).unwrap();
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            let m = reshape_pair(&g.relative_payoff(i, j).unwrap(), 3, k, i, j).unwrap();
            for other in 1..=k {
                let sub = g.subgame(i, j, &[other]).unwrap();
                let col: Vec<f64> = (0..k * k).map(|r| m.get(r, other - 1)).collect();
                prop_assert_eq!(vec_rows(&sub.relative()), col);
            }
        }
    }

    #[test]
    fn bimatrix_criteria_agree((g, truth) in game_case(bimatrix_shapes())) {
        let tol = Tolerance::default();
        let bm = g.to_bimatrix().unwrap();
        let r = bm.relative();
        let verdicts = [
            bimatrix_is_potential(&bm, &tol).potential,
            check_corner(&r, &tol).potential,
            check_adjacent_cycles(&r, &tol).potential,
            check_four_cycle(&r, &tol).potential,
            check_centering(&r, &tol).potential,
            average_decomposition(&r).verdict(&tol, bm.max_abs_payoff()).potential,
            is_potential_by_equation(&g, &tol).unwrap().verdict.potential,
        ];
        prop_assert!(verdicts.iter().all(|&v| v == truth), "{:?}", verdicts);
    }

    #[test]
    fn projection_is_idempotent_and_orthogonal(k1 in 1usize..=4, k2 in 1usize..=4, seed in any::<u64>()) {
        let g = random_bimatrix(k1, k2, &mut rng(seed)).unwrap();
        let p = project_to_potential(&g);
        let again = project_to_potential(&p.game);
        prop_assert!(again.relative.max_abs_diff(&p.relative) <= 1e-10);
        let removed = vec_rows(&(&g.relative() - &p.relative));
        let proj = potential_projector(k1, k2).unwrap();
        prop_assert!(proj.mul_vec(&removed).iter().all(|x| x.abs() <= 1e-10));
        prop_assert!(bimatrix_is_potential(&p.game, &Tolerance::default()).potential);
    }

    #[test]
    fn bimatrix_potential_is_valid_and_unique_up_to_constant((g, truth) in game_case(bimatrix_shapes())) {
        prop_assume!(truth);
        let tol = Tolerance::default();
        let bm = g.to_bimatrix().unwrap();
        let closed = bimatrix_potential(&bm, 0.0, &tol).unwrap();
        prop_assert!(validate_potential(&g, &closed, &tol).unwrap().potential);
        let solved = potential_by_equation(&g, &tol).unwrap();
        prop_assert!(deviation_residual(&g, &solved.entries) <= 1e-9 * (1.0 + g.max_abs_payoff()));
        prop_assert!(spread(&closed.entries, &solved.entries) <= 1e-9 * (1.0 + g.max_abs_payoff()));
        let shifted = bimatrix_potential(&bm, 2.0, &tol).unwrap();
        prop_assert!(shifted.entries.iter().zip(&closed.entries).all(|(a, b)| (a - b - 2.0).abs() <= 1e-12));
    }

    #[test]
    fn potential_subspace_dimension(k1 in 2usize..=5, k2 in 2usize..=5) {
        let b = kron(&boundary_matrix(k1).unwrap(), &boundary_matrix(k2).unwrap()).unwrap();
        prop_assert_eq!(nullity(&b, &Tolerance::default()), k1 + k2 - 1);
    }

    #[test]
    fn multi_player_methods_agree((g, truth) in game_case(uniform_shapes())) {
        let tol = Tolerance::default();
        let verdicts = [
            is_potential_minimal(&g, &tol).unwrap().verdict.potential,
            check_pairwise_boundary(&g, &tol, PairwiseVariant::AnchoredOnLast).unwrap().potential,
            check_pairwise_boundary(&g, &tol, PairwiseVariant::AllPairs).unwrap().potential,
            check_pairwise_reshaped(&g, &tol, false).unwrap().potential,
            check_pairwise_reshaped(&g, &tol, true).unwrap().potential,
            check_all_subgames(&g, &tol).unwrap().verdict.potential,
            is_potential_by_equation(&g, &tol).unwrap().verdict.potential,
            is_potential_transformed(&g, &tol).unwrap().potential,
        ];
        prop_assert!(verdicts.iter().all(|&v| v == truth), "{:?}", verdicts);
    }

    #[test]
    fn recovered_last_block_solves_reduced_system(n in 3usize..=4, k in 2usize..=3, seed in any::<u64>(), c in -3.0f64..3.0) {
        let (g, _) = random_potential_game(&vec![k; n], &mut rng(seed)).unwrap();
        let sys = minimal_system(n, k).unwrap();
        let xi = recover_xi_n(&g, c).unwrap();
        let rhs = sys.transform.t2.mul_vec(&relative_stack(&g).unwrap());
        let lhs = sys.transform.phi.mul_vec(&xi);
        prop_assert!(lhs.iter().zip(&rhs).all(|(a, b)| (a - b).abs() <= 1e-10));
    }

    #[test]
    fn equilibria_from_potential_match_brute_force(shape in prop::sample::select(vec![
        vec![2, 2], vec![3, 4], vec![4, 2], vec![2, 2, 2], vec![3, 2, 3], vec![2, 2, 2, 2],
    ]), seed in any::<u64>(), shift in -50.0f64..50.0) {
        let tol = Tolerance::default();
        let (g, p) = random_potential_game(&shape, &mut rng(seed)).unwrap();
        let brute = pure_nash_brute(&g, &tol);
        let via = nash_from_potential(&g, &p, &tol).unwrap();
        let shifted = nash_from_potential(&g, &p.shifted(shift), &tol).unwrap();
        prop_assert!(!brute.is_empty());
        prop_assert_eq!(&via.profiles, &brute.profiles);
        prop_assert_eq!(&shifted.profiles, &via.profiles);
        prop_assert_eq!(brute.profiles.clone(), nash_oracle(&g, tol.threshold(g.max_abs_payoff())));
        prop_assert!(via.global_argmax.iter().all(|x| via.contains(x)));
        let mut sorted: Vec<StrategyProfile> = via.profiles.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted, via.profiles);
    }
}

#[test]
fn transformed_system_has_block_structure() {
    for (n, k) in [(3, 2), (4, 2), (3, 3)] {
        let r = verify_structure_identities(n, k).unwrap();
        assert_eq!(
            r.get("T Psi' = [I Gamma; 0 Phi; 0 0]"),
            Some(true),
            "({n},{k})"
        );
        assert!(r.all_hold(), "{r:?}");
    }
}

#[test]
fn minimal_rows_match_count_for_built_sizes() {
    for n in 2usize..=5 {
        for k in 2usize..=4 {
            if k.pow(n as u32) > 300 {
                continue;
            }
            let rows = minimal_check_matrix(n, k).unwrap().rows();
            let counts = minimal_equation_count(n, k).unwrap();
            assert_eq!(rows, counts.minimal, "({n},{k})");
            assert_eq!(
                (n - 1) * (k - 1) * k.pow(n as u32 - 2) * k - (k.pow(n as u32 - 1) - 1),
                counts.minimal
            );
        }
    }
}
