//! Seeded invariant suites over the engine, the matrix layer and the reductions.

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::engine::{
    probability_payoff, product_basis, projection_payoff, EngineError, QuantumGame, Strategy,
    StrategyProfile, StrategySpace,
};
use crate::qmatrix::{
    rotation, validate_density, validate_unitary, ComplexMatrix, DensityMatrix, DEFAULT_TOLERANCE,
};
use crate::reductions::{self, Model, PHYSICAL_MAX_ANGLE, SUM_DEPENDENCE_TOL};
use crate::sampling::{random_density, random_hermitian, random_state, random_unitary, seeded};

pub const TRACE_SAMPLES: usize = 200;
pub const LINEARITY_SAMPLES: usize = 100;
pub const PROJECTION_SAMPLES: usize = 100;
pub const SUM_DEPENDENCE_SAMPLES: usize = 100;
pub const COMMUTATIVITY_SAMPLES: usize = 100;
pub const ROTATION_SAMPLES: usize = 1000;
pub const SUITE_TOL: f64 = 1e-12;

/// Outcome of one invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteCheck {
    pub name: &'static str,
    pub samples: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl SuiteCheck {
    fn new(name: &'static str, samples: usize, worst: f64, tolerance: f64) -> Self {
        Self {
            name,
            samples,
            worst,
            tolerance,
            pass: worst.is_finite() && worst <= tolerance,
        }
    }

    fn failed(name: &'static str, samples: usize) -> Self {
        Self {
            name,
            samples,
            worst: f64::INFINITY,
            tolerance: 0.0,
            pass: false,
        }
    }
}

impl fmt::Display for SuiteCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<34} samples={:<5} worst={:.3e} tol={:.0e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.samples,
            self.worst,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub seed: u64,
    pub checks: Vec<SuiteCheck>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&SuiteCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn unitary_game(rho: DensityMatrix, players: usize) -> Result<QuantumGame, EngineError> {
    let n = rho.dim();
    let payoffs = (0..players)
        .map(|_| crate::qmatrix::validate_hermitian(&ComplexMatrix::identity(n), DEFAULT_TOLERANCE))
        .collect::<Result<Vec<_>, _>>()?;
    QuantumGame::new(rho, vec![StrategySpace::unrestricted(); players], payoffs)
}

fn unitary_profile(rng: &mut ChaCha8Rng, n: usize, players: usize) -> StrategyProfile {
    StrategyProfile(
        (0..players)
            .map(|_| Strategy::Unitary(random_unitary(rng, n)))
            .collect(),
    )
}

fn trace_preservation(rng: &mut ChaCha8Rng) -> Result<f64, EngineError> {
    let mut worst: f64 = 0.0;
    for k in 0..TRACE_SAMPLES {
        let n = if k % 2 == 0 { 2 } else { 4 };
        let players = 1 + k % 3;
        let game = unitary_game(random_density(rng, n), players)?;
        let rho = game.final_state(&unitary_profile(rng, n, players))?;
        let t = rho.matrix().trace()?;
        worst = worst.max((t.re - 1.0).abs()).max(t.im.abs());
    }
    Ok(worst)
}

fn payoff_linearity(rng: &mut ChaCha8Rng) -> Result<f64, EngineError> {
    let mut worst: f64 = 0.0;
    for k in 0..LINEARITY_SAMPLES {
        let n = if k % 2 == 0 { 2 } else { 4 };
        let p = random_hermitian(rng, n);
        let q = random_hermitian(rng, n);
        let a: f64 = rng.random_range(-2.0..2.0);
        let b: f64 = rng.random_range(-2.0..2.0);
        let combined = p.combine(a, &q, b)?;
        let game = unitary_game(random_density(rng, n), 3)?.with_payoffs(vec![p, q, combined])?;
        let f = game.payoffs(&unitary_profile(rng, n, 3))?;
        worst = worst.max((f[2] - (a * f[0] + b * f[1])).abs());
    }
    Ok(worst)
}

fn unitary_columns(u: &ComplexMatrix) -> Vec<Vec<crate::qmatrix::Complex64>> {
    (0..u.cols())
        .map(|j| (0..u.rows()).map(|i| u[(i, j)]).collect())
        .collect()
}

fn projection_equivalence(rng: &mut ChaCha8Rng) -> Result<f64, EngineError> {
    let mut worst: f64 = 0.0;
    for k in 0..PROJECTION_SAMPLES {
        let players = 1 + k % 2;
        let locals: Vec<_> = (0..players)
            .map(|_| unitary_columns(&random_unitary(rng, 2)))
            .collect();
        let basis = product_basis(&locals);
        let n = basis.len();
        let coefficients: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let psi = random_state(rng, n);
        let p = projection_payoff(&coefficients, &basis)?;
        let game = unitary_game(DensityMatrix::pure(&psi, DEFAULT_TOLERANCE)?, players)?;
        let game = game.with_payoffs(vec![p; players])?;
        let profile = unitary_profile(rng, n, players);
        let trace = game.payoff(&profile, 0)?;
        let e = game.composite_unitary(&profile)?.apply(&psi)?;
        let prob = probability_payoff(&coefficients, &basis, &e)?;
        worst = worst.max((trace - prob).abs());
    }
    Ok(worst)
}

fn sum_dependence(rng: &mut ChaCha8Rng) -> Result<f64, reductions::ReductionError> {
    let models = [
        Model::OneQubitPure,
        Model::OneQubitMixed { p: 0.0 },
        Model::OneQubitMixed { p: 0.25 },
        Model::OneQubitMixed { p: 0.5 },
        Model::TwoQubitBell,
    ];
    let mut worst: f64 = 0.0;
    for model in models {
        let n = if model == Model::TwoQubitBell { 4 } else { 2 };
        let game = model.game(&random_hermitian(rng, n), &random_hermitian(rng, n))?;
        worst = worst.max(reductions::sum_dependence_deviation(
            &game,
            PHYSICAL_MAX_ANGLE,
            SUM_DEPENDENCE_SAMPLES,
        )?);
    }
    Ok(worst)
}

fn local_commutativity(rng: &mut ChaCha8Rng) -> Result<f64, EngineError> {
    let id = ComplexMatrix::identity(2);
    let mut worst: f64 = 0.0;
    for _ in 0..COMMUTATIVITY_SAMPLES {
        let a = random_unitary(rng, 2).tensor(&id);
        let b = id.tensor(&random_unitary(rng, 2));
        worst = worst.max(a.multiply(&b)?.max_abs_diff(&b.multiply(&a)?)?);
    }
    Ok(worst)
}

fn conjugation_stays_density(rng: &mut ChaCha8Rng) -> Result<f64, EngineError> {
    let mut worst: f64 = 0.0;
    for k in 0..TRACE_SAMPLES {
        let n = if k % 2 == 0 { 2 } else { 4 };
        let rho = random_density(rng, n);
        let out = rho.matrix().conjugate_by(&random_unitary(rng, n))?;
        validate_density(&out, DEFAULT_TOLERANCE)?;
        worst = worst.max((out.trace()?.re - 1.0).abs());
    }
    Ok(worst)
}

fn dagger_and_tensor(rng: &mut ChaCha8Rng) -> Result<f64, EngineError> {
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let a = random_unitary(rng, 2);
        let b = random_hermitian(rng, 2).into_matrix();
        let c = random_unitary(rng, 2);
        if a.dagger().dagger() != a {
            return Ok(f64::INFINITY);
        }
        let left = a.tensor(&b).tensor(&c);
        let right = a.tensor(&b.tensor(&c));
        worst = worst.max(left.max_abs_diff(&right)?);
    }
    Ok(worst)
}

fn rotation_unitarity(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..ROTATION_SAMPLES {
        let r = rotation(rng.random_range(-2.0 * PI..2.0 * PI));
        let dev = match validate_unitary(&r, SUITE_TOL) {
            Ok(()) => r
                .multiply(&r.dagger())
                .and_then(|m| m.max_abs_diff(&ComplexMatrix::identity(2)))
                .unwrap_or(f64::INFINITY),
            Err(_) => f64::INFINITY,
        };
        worst = worst.max(dev);
    }
    worst
}

fn record<E>(
    checks: &mut Vec<SuiteCheck>,
    name: &'static str,
    samples: usize,
    tolerance: f64,
    outcome: Result<f64, E>,
) {
    checks.push(match outcome {
        Ok(worst) => SuiteCheck::new(name, samples, worst, tolerance),
        Err(_) => SuiteCheck::failed(name, samples),
    });
}

/// Run every invariant suite from one seed.
pub fn run_suite(seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut rng = seeded(seed);
    let mut checks = Vec::new();
    record(
        &mut checks,
        "trace preservation",
        TRACE_SAMPLES,
        SUITE_TOL,
        trace_preservation(&mut rng),
    );
    record(
        &mut checks,
        "payoff linearity",
        LINEARITY_SAMPLES,
        SUITE_TOL,
        payoff_linearity(&mut rng),
    );
    record(
        &mut checks,
        "projection-payoff equivalence",
        PROJECTION_SAMPLES,
        SUITE_TOL,
        projection_equivalence(&mut rng),
    );
    record(
        &mut checks,
        "sum dependence",
        5 * SUM_DEPENDENCE_SAMPLES,
        SUM_DEPENDENCE_TOL,
        sum_dependence(&mut rng),
    );
    record(
        &mut checks,
        "local-operation commutativity",
        COMMUTATIVITY_SAMPLES,
        SUITE_TOL,
        local_commutativity(&mut rng),
    );
    record(
        &mut checks,
        "conjugation keeps density",
        TRACE_SAMPLES,
        SUITE_TOL,
        conjugation_stays_density(&mut rng),
    );
    record(
        &mut checks,
        "dagger involution, tensor assoc.",
        50,
        SUITE_TOL,
        dagger_and_tensor(&mut rng),
    );
    record::<EngineError>(
        &mut checks,
        "rotation unitarity",
        ROTATION_SAMPLES,
        SUITE_TOL,
        Ok(rotation_unitarity(&mut rng)),
    );
    SuiteReport {
        seed,
        checks,
        elapsed: start.elapsed(),
    }
}
