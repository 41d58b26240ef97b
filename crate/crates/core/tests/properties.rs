use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use proptest::prelude::*;
use rand::Rng;

use qgames::cli::GameDefinition;
use qgames::engine::{QuantumGame, Strategy as Play, StrategyProfile, StrategySpace};
use qgames::game_a::{
    self, Equilibrium, GameAParams, IterationOutcome, PlayerParams, PSI_EQUALITY_TOL,
};
use qgames::oracle::{self, Domain};
use qgames::qmatrix::{
    rotation, validate_density, validate_hermitian, Complex64, ComplexMatrix, MatrixLiteral,
    DEFAULT_TOLERANCE,
};
use qgames::reductions::{self, Model, SinusoidalPayoff};
use qgames::sampling::{random_density, random_hermitian, random_unitary, seeded};

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(complex(), n * n).prop_map(move |d| ComplexMatrix::new(n, n, d).unwrap())
}

fn phase() -> impl Strategy<Value = f64> {
    -FRAC_PI_2..=FRAC_PI_2
}

fn player() -> impl Strategy<Value = PlayerParams> {
    (-2.0..2.0f64, 0.05..3.0f64, phase()).prop_map(|(o, q, p)| PlayerParams::new(o, q, p))
}

proptest! {
    #[test]
    fn dagger_is_an_involution(m in matrix(3)) {
        prop_assert_eq!(m.dagger().dagger(), m);
    }

    #[test]
    fn tensor_is_associative(a in matrix(2), b in matrix(2), c in matrix(2)) {
        let left = a.tensor(&b).tensor(&c);
        let right = a.tensor(&b.tensor(&c));
        prop_assert!(left.max_abs_diff(&right).unwrap() <= 1e-12);
    }

    #[test]
    fn conjugation_keeps_density(seed in any::<u64>(), n in prop::sample::select(vec![2usize, 4])) {
        let mut rng = seeded(seed);
        let rho = random_density(&mut rng, n);
        let out = rho.matrix().conjugate_by(&random_unitary(&mut rng, n)).unwrap();
        prop_assert!((out.trace().unwrap().re - 1.0).abs() <= 1e-12);
        prop_assert!(validate_density(&out, DEFAULT_TOLERANCE).is_ok());
    }

    #[test]
    fn payoff_is_linear_in_the_operator(seed in any::<u64>(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let mut rng = seeded(seed);
        let p = random_hermitian(&mut rng, 4);
        let q = random_hermitian(&mut rng, 4);
        let pq = p.combine(a, &q, b).unwrap();
        let game = QuantumGame::new(
            random_density(&mut rng, 4),
            vec![StrategySpace::unrestricted(); 3],
            vec![p, q, pq],
        ).unwrap();
        let profile = StrategyProfile((0..3).map(|_| Play::Unitary(random_unitary(&mut rng, 4))).collect());
        let f = game.payoffs(&profile).unwrap();
        prop_assert!((f[2] - a * f[0] - b * f[1]).abs() <= 1e-12);
    }

    #[test]
    fn closed_form_points_are_best_response_fixed_points(p1 in player(), p2 in player()) {
        let params = GameAParams::new(p1, p2).unwrap();
        let sol = game_a::solve_closed_form(&params, PSI_EQUALITY_TOL).unwrap();
        for (t, f) in sol.points(11) {
            let (bt, bf) = params.best_response_map(t, f).unwrap();
            prop_assert!((bt - t).abs().max((bf - f).abs()) <= 1e-9);
        }
    }

    #[test]
    fn closed_form_points_are_certified(p1 in player(), p2 in player()) {
        let params = GameAParams::new(p1, p2).unwrap();
        let sol = game_a::solve_certified(&params).unwrap();
        prop_assert!(sol.is_certified());
    }

    #[test]
    fn boundary_cases_agree(psi in phase()) {
        for (a, b) in [(0.0, psi), (psi, 0.0)] {
            let params = GameAParams::from_phases(a, b).unwrap();
            prop_assert!(game_a::solve_closed_form(&params, PSI_EQUALITY_TOL).is_ok());
        }
    }

    #[test]
    fn at_most_one_player_reaches_the_ceiling(p1 in player(), p2 in player()) {
        prop_assume!((p1.phase - p2.phase).abs() > 1e-6);
        let params = GameAParams::new(p1, p2).unwrap();
        let sol = game_a::solve_closed_form(&params, PSI_EQUALITY_TOL).unwrap();
        if let Equilibrium::Unique { theta, phi, .. } = sol.equilibrium {
            let at_top = (0..2)
                .filter(|&k| {
                    let pp = params.player(k);
                    (params.eval(theta, phi, k).unwrap() - pp.offset - pp.amplitude).abs() <= 1e-9
                })
                .count();
            prop_assert!(at_top <= 1);
        }
    }

    #[test]
    fn iteration_reaches_a_nash_point(p1 in player(), p2 in player(), t in 0.0..=FRAC_PI_2, f in 0.0..=FRAC_PI_2) {
        let params = GameAParams::new(p1, p2).unwrap();
        // each round moves the phase sum by |ΔΨ|, so π/|ΔΨ| rounds always suffice
        let bound = (std::f64::consts::PI / (p1.phase - p2.phase).abs()).ceil() + 3.0;
        let budget = if bound.is_finite() { bound.min(200_000.0) as usize } else { 100 };
        let rec = game_a::iterate_best_response(&params, (t, f), budget.max(100), 1e-12).unwrap();
        match rec.outcome {
            IterationOutcome::Converged { point, .. } => {
                let cert = oracle::verify_nash(&params, point, Domain::square(0.0, FRAC_PI_2), 1e-6, 200);
                prop_assert!(cert.pass);
            }
            other => prop_assert!(bound > 200_000.0, "{:?}", other),
        }
    }

    #[test]
    fn verify_nash_is_monotone_in_epsilon(p1 in player(), p2 in player(), t in 0.0..=FRAC_PI_2, f in 0.0..=FRAC_PI_2, e in 0.0..0.5f64) {
        let params = GameAParams::new(p1, p2).unwrap();
        let d = Domain::square(0.0, FRAC_PI_2);
        if oracle::verify_nash(&params, (t, f), d, e, 100).pass {
            prop_assert!(oracle::verify_nash(&params, (t, f), d, e * 1.5 + 1e-9, 100).pass);
        }
    }

    #[test]
    fn fit_recovers_exact_sinusoids(c in -3.0..3.0f64, a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let truth = SinusoidalPayoff::new(c, a, b);
        let samples: Vec<_> = oracle::grid_points(0.0, FRAC_PI_2, 64).into_iter().map(|x| (x, truth.eval(x))).collect();
        let (fit, residual) = oracle::fit_sinusoid(&samples).unwrap();
        prop_assert!(residual <= 1e-10);
        prop_assert!((fit.offset - c).abs() <= 1e-10);
        prop_assert!((fit.sin_coeff - a).abs() <= 1e-10);
        prop_assert!((fit.cos_coeff - b).abs() <= 1e-10);
    }

    #[test]
    fn reductions_match_game_a(seed in any::<u64>(), which in 0usize..5) {
        let model = [
            Model::OneQubitPure,
            Model::OneQubitMixed { p: 0.0 },
            Model::OneQubitMixed { p: 0.25 },
            Model::OneQubitMixed { p: 0.5 },
            Model::TwoQubitBell,
        ][which];
        let n = if which == 4 { 4 } else { 2 };
        let mut rng = seeded(seed);
        let report = reductions::reduce_model(model, &random_hermitian(&mut rng, n), &random_hermitian(&mut rng, n)).unwrap();
        prop_assert!(report.sum_dependence <= 1e-12);
        for &t in &oracle::grid_points(0.0, FRAC_PI_4, 12) {
            for &p in &oracle::grid_points(0.0, FRAC_PI_4, 12) {
                for k in 0..2 {
                    let e = report.physical_payoff(t, p, k).unwrap();
                    prop_assert!((e - report.sinusoids[k].eval(t + p)).abs() <= 1e-9);
                    prop_assert!((e - report.sinusoids[k].canonical_eval(t + p)).abs() <= 1e-9);
                }
            }
        }
        if report.params.is_some() {
            prop_assert!(reductions::fidelity_deviation(&report, 12).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn offsets_match_the_closed_form(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let p1 = random_hermitian(&mut rng, 2);
        let p2 = random_hermitian(&mut rng, 2);
        for r in [
            reductions::reduce_one_qubit_pure(&p1, &p2).unwrap(),
            reductions::reduce_one_qubit_mixed(&p1, &p2, rng.random_range(0.0..=1.0)).unwrap(),
        ] {
            for (k, p) in [&p1, &p2].into_iter().enumerate() {
                let m = p.matrix();
                let expected = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
                prop_assert!((r.sinusoids[k].offset - expected).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn mixed_half_is_always_degenerate(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let r = reductions::reduce_one_qubit_mixed(&random_hermitian(&mut rng, 2), &random_hermitian(&mut rng, 2), 0.5).unwrap();
        prop_assert_eq!(r.degenerate_players(), vec![1, 2]);
    }

    #[test]
    fn mixed_zero_is_the_pure_one_state(seed in any::<u64>(), t in 0.0..=FRAC_PI_4, f in 0.0..=FRAC_PI_4) {
        let mut rng = seeded(seed);
        let p1 = random_hermitian(&mut rng, 2);
        let p2 = random_hermitian(&mut rng, 2);
        let mixed = reductions::reduce_one_qubit_mixed(&p1, &p2, 0.0).unwrap();
        let one = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let rho = qgames::qmatrix::DensityMatrix::pure(&one, DEFAULT_TOLERANCE).unwrap();
        let space = StrategySpace::rotation(0.0, FRAC_PI_4).unwrap();
        let pure_one = QuantumGame::new(rho, vec![space.clone(), space], vec![p1, p2]).unwrap();
        let profile = StrategyProfile::angles(&[t, f]);
        let a = mixed.game.payoffs(&profile).unwrap();
        let b = pure_one.payoffs(&profile).unwrap();
        prop_assert!((a[0] - b[0]).abs() <= 1e-12 && (a[1] - b[1]).abs() <= 1e-12);
    }

    #[test]
    fn definitions_round_trip(seed in any::<u64>(), p in 0.0..=1.0f64) {
        let mut rng = seeded(seed);
        let lit = |m: &ComplexMatrix| MatrixLiteral::from(m);
        let text = format!(
            "model = \"one_qubit_mixed\"\np = {p:?}\nP1 = {}\nP2 = {}\nseed = {}\n",
            toml_matrix(&lit(random_hermitian(&mut rng, 2).matrix())),
            toml_matrix(&lit(random_hermitian(&mut rng, 2).matrix())),
            seed >> 1,
        );
        let def = GameDefinition::parse(&text).unwrap();
        let again = GameDefinition::parse(&def.to_toml()).unwrap();
        prop_assert_eq!(def, again);
    }
}

fn toml_matrix(m: &MatrixLiteral) -> String {
    #[derive(serde::Serialize)]
    struct Wrap<'a> {
        m: &'a MatrixLiteral,
    }
    toml::to_string(&Wrap { m })
        .unwrap()
        .trim_start_matches("m = ")
        .trim()
        .to_string()
}

#[test]
fn rotations_are_unitary() {
    let mut rng = seeded(11);
    for _ in 0..1000 {
        let r = rotation(rng.random_range(-10.0..10.0));
        let dev = r
            .multiply(&r.dagger())
            .unwrap()
            .max_abs_diff(&ComplexMatrix::identity(2))
            .unwrap();
        assert!(dev <= 1e-12);
    }
}

#[test]
fn best_response_beats_a_fine_grid() {
    let mut rng = seeded(12);
    let grid = oracle::grid_points(0.0, FRAC_PI_2, 10_000);
    for _ in 0..1000 {
        let params = GameAParams::new(
            PlayerParams::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(0.0..2.0),
                rng.random_range(-FRAC_PI_2..=FRAC_PI_2),
            ),
            PlayerParams::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(0.0..2.0),
                rng.random_range(-FRAC_PI_2..=FRAC_PI_2),
            ),
        )
        .unwrap();
        let phi = rng.random_range(0.0..=FRAC_PI_2);
        let br = params.best_response_p1(phi).unwrap();
        let best = params.eval(br, phi, 0).unwrap();
        for &t in &grid {
            assert!(best >= params.eval(t, phi, 0).unwrap() - 1e-12);
        }
        let (argmax, _) =
            oracle::grid_argmax(|t| params.eval(t, phi, 0).unwrap(), (0.0, FRAC_PI_2), 500);
        let step = FRAC_PI_2 / 499.0;
        if params.player(0).amplitude > 1e-3 {
            assert!(
                (argmax - br).abs() <= step + 1e-12,
                "argmax {argmax} br {br}"
            );
        }
    }
}

#[test]
fn uniqueness_away_from_the_diagonal() {
    let mut rng = seeded(13);
    let n = 200;
    let step = FRAC_PI_2 / (n - 1) as f64;
    let mut done = 0;
    while done < 6 {
        let (a, b) = (
            rng.random_range(-FRAC_PI_2..FRAC_PI_2),
            rng.random_range(-FRAC_PI_2..FRAC_PI_2),
        );
        if (a - b).abs() <= 0.1 {
            continue;
        }
        done += 1;
        let params = GameAParams::from_phases(a, b).unwrap();
        let Equilibrium::Unique { theta, phi, .. } =
            game_a::solve_closed_form(&params, PSI_EQUALITY_TOL)
                .unwrap()
                .equilibrium
        else {
            panic!("expected a unique equilibrium");
        };
        let hits = oracle::nash_scan(&params, Domain::square(0.0, FRAC_PI_2), 1e-4, n).unwrap();
        assert!(!hits.is_empty());
        for h in hits {
            let (ci, cj) = (theta / step, phi / step);
            assert!(h.i as f64 >= ci.floor() - 2.0 && h.i as f64 <= ci.ceil() + 2.0);
            assert!(h.j as f64 >= cj.floor() - 2.0 && h.j as f64 <= cj.ceil() + 2.0);
        }
    }
}

#[test]
fn solve_physical_is_always_certified() {
    let mut rng = seeded(14);
    let mut certified = 0;
    while certified < 20 {
        let model = if certified % 2 == 0 {
            Model::OneQubitPure
        } else {
            Model::TwoQubitBell
        };
        let n = if model == Model::TwoQubitBell { 4 } else { 2 };
        let report = reductions::reduce_model(
            model,
            &random_hermitian(&mut rng, n),
            &random_hermitian(&mut rng, n),
        )
        .unwrap();
        if report.params.is_none() {
            continue;
        }
        let sol = reductions::solve_physical(&report).unwrap();
        assert!(sol.is_certified(), "{:?}", sol);
        certified += 1;
    }
}

#[test]
fn hermitian_validation_rejects_asymmetry() {
    let mut m = ComplexMatrix::identity(2);
    m[(0, 1)] = Complex64::new(1.0, 0.0);
    assert!(validate_hermitian(&m, DEFAULT_TOLERANCE).is_err());
}
