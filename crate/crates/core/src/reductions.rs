//! Reduction of the qubit models to GAME A.
//!
//! Each model's payoff depends on the two rotation angles only through their
//! sum `x = θ + φ`, and is of the form `offset + α sin 2x + β cos 2x`. The
//! coefficients are read off the engine's trace payoff (three exact samples,
//! cross-checked by a least-squares fit), never from a hand-derived formula.
//! Closed-form coefficient formulas are still evaluated, both the ones that
//! agree with the trace and the ones printed in the literature, and kept in
//! the report as [`FormulaCheck`] diagnostics.
//!
//! Physical angles live in `[0, π/4]`; GAME A angles are `2θ, 2φ ∈ [0, π/2]`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use rand::Rng;

use crate::engine::{
    non_triviality, EngineError, NonTriviality, Ordering, QuantumGame, StrategyKind,
    StrategyProfile, StrategySpace,
};
use crate::game_a::{
    self, Equilibrium, GameAError, GameAParams, NashSolution, PlayerParams, DEGENERATE_AMPLITUDE,
};
use crate::oracle::{self, Domain, OracleError, TwoPlayerPayoff};
use crate::qmatrix::{
    Complex64, ComplexMatrix, DensityMatrix, HermitianOperator, MatrixError, DEFAULT_TOLERANCE,
};
use crate::sampling;

/// Physical angle `θ` corresponds to GAME A angle `ANGLE_SCALE · θ`.
pub const ANGLE_SCALE: f64 = 2.0;
/// Upper end of each physical strategy interval.
pub const PHYSICAL_MAX_ANGLE: f64 = FRAC_PI_4;
/// `α ≥ −ADMISSIBILITY_SLACK` keeps the canonical phase inside `[−π/2, π/2]`.
pub const ADMISSIBILITY_SLACK: f64 = 1e-12;
/// Largest least-squares residual accepted from [`extract_sinusoid`].
pub const SINUSOID_FIT_TOL: f64 = 1e-9;
/// Largest `|f(θ, φ) − f(θ+δ, φ−δ)|` accepted by the sum-dependence check.
pub const SUM_DEPENDENCE_TOL: f64 = 1e-12;
/// Extracted offsets must match the closed-form constant term this closely.
pub const OFFSET_TOL: f64 = 1e-12;

const FIT_SAMPLES: usize = 1000;
const SUM_DEPENDENCE_SAMPLES: usize = 100;
const SUM_DEPENDENCE_SEED: u64 = 0x5eed_0f5a;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReductionError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    GameA(#[from] GameAError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("payoff is not sinusoidal in 2x: fit residual {residual:e}")]
    NotSinusoidal { residual: f64 },
    #[error("payoff depends on more than θ+φ: deviation {deviation:e}")]
    SumDependence { deviation: f64 },
    #[error("player {player}: extracted offset {extracted} differs from closed form {expected}")]
    OffsetMismatch {
        player: usize,
        extracted: f64,
        expected: f64,
    },
    #[error("mixing probability {0} outside [0, 1]")]
    MixingOutOfRange(f64),
    #[error("{model} needs {expected}x{expected} payoff operators, got {actual}x{actual}")]
    PayoffDimension {
        model: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("inadmissible player(s) {players:?}: canonical phase outside [-π/2, π/2]")]
    Inadmissible { players: Vec<usize> },
    #[error("game is not reducible: {0}")]
    NotReducible(String),
}

pub type Result<T> = std::result::Result<T, ReductionError>;

/// `offset + sin_coeff · sin 2x + cos_coeff · cos 2x` in the total angle `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinusoidalPayoff {
    pub offset: f64,
    pub sin_coeff: f64,
    pub cos_coeff: f64,
}

impl SinusoidalPayoff {
    pub fn new(offset: f64, sin_coeff: f64, cos_coeff: f64) -> Self {
        Self {
            offset,
            sin_coeff,
            cos_coeff,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.offset + self.sin_coeff * (2.0 * x).sin() + self.cos_coeff * (2.0 * x).cos()
    }

    pub fn amplitude(&self) -> f64 {
        self.sin_coeff.hypot(self.cos_coeff)
    }

    /// Phase of `amplitude · sin(2x + phase)`, in `(−π, π]`.
    pub fn phase(&self) -> f64 {
        if self.amplitude() <= DEGENERATE_AMPLITUDE {
            0.0
        } else if self.is_admissible() {
            self.cos_coeff.atan2(self.sin_coeff.max(0.0))
        } else {
            self.cos_coeff.atan2(self.sin_coeff)
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.sin_coeff >= -ADMISSIBILITY_SLACK
    }

    /// Canonical `offset + amplitude · sin(2x + phase)`, valid for any phase.
    pub fn canonical_eval(&self, x: f64) -> f64 {
        self.offset + self.amplitude() * (2.0 * x + self.phase()).sin()
    }

    pub fn player_params(&self) -> PlayerParams {
        PlayerParams::new(self.offset, self.amplitude(), self.phase())
    }
}

/// Read `offset, α, β` off three exact samples of `f` at `x = 0, π/4, π/2`,
/// then confirm with a least-squares fit over `[0, π/2]`.
pub fn extract_sinusoid(f: impl Fn(f64) -> Result<f64>) -> Result<SinusoidalPayoff> {
    let f0 = f(0.0)?;
    let f_quarter = f(FRAC_PI_4)?;
    let f_half = f(FRAC_PI_2)?;
    let offset = 0.5 * (f0 + f_half);
    let exact = SinusoidalPayoff::new(offset, f_quarter - offset, f0 - offset);

    let samples = oracle::grid_points(0.0, FRAC_PI_2, FIT_SAMPLES)
        .into_iter()
        .map(|x| Ok((x, f(x)?)))
        .collect::<Result<Vec<_>>>()?;
    let (fit, residual) = oracle::fit_sinusoid(&samples)?;
    let disagreement = (fit.offset - exact.offset)
        .abs()
        .max((fit.sin_coeff - exact.sin_coeff).abs())
        .max((fit.cos_coeff - exact.cos_coeff).abs());
    let worst = residual.max(disagreement);
    if worst > SINUSOID_FIT_TOL {
        return Err(ReductionError::NotSinusoidal { residual: worst });
    }
    Ok(exact)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// One qubit starting in `(|0⟩+|1⟩)/√2`; rotations applied in turn.
    OneQubitPure,
    /// One qubit starting in `diag(p, 1−p)`.
    OneQubitMixed { p: f64 },
    /// Two qubits starting in `(|01⟩+|10⟩)/√2`; each player rotates one qubit.
    TwoQubitBell,
    /// A user-supplied game that passed the sum-dependence and sinusoid checks.
    Custom,
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::OneQubitPure => "one_qubit_pure",
            Model::OneQubitMixed { .. } => "one_qubit_mixed",
            Model::TwoQubitBell => "two_qubit_bell",
            Model::Custom => "custom",
        }
    }

    fn payoff_dim(&self) -> Option<usize> {
        match self {
            Model::OneQubitPure | Model::OneQubitMixed { .. } => Some(2),
            Model::TwoQubitBell => Some(4),
            Model::Custom => None,
        }
    }

    /// The engine game this model plays with the given payoff operators.
    pub fn game(&self, p1: &HermitianOperator, p2: &HermitianOperator) -> Result<QuantumGame> {
        if let Some(d) = self.payoff_dim() {
            for p in [p1, p2] {
                if p.dim() != d {
                    return Err(ReductionError::PayoffDimension {
                        model: self.name(),
                        expected: d,
                        actual: p.dim(),
                    });
                }
            }
        }
        let space = StrategySpace::rotation(0.0, PHYSICAL_MAX_ANGLE)?;
        let payoffs = vec![p1.clone(), p2.clone()];
        let game = match *self {
            Model::OneQubitPure => {
                let plus = [Complex64::new(FRAC_1_SQRT_2, 0.0); 2];
                let rho = DensityMatrix::pure(&plus, DEFAULT_TOLERANCE)?;
                QuantumGame::new(rho, vec![space.clone(), space], payoffs)?
                    .with_ordering(Ordering::Dynamic(vec![0, 1]))?
            }
            Model::OneQubitMixed { p } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(ReductionError::MixingOutOfRange(p));
                }
                let rho = crate::qmatrix::validate_density(
                    &ComplexMatrix::diagonal(&[p, 1.0 - p]),
                    DEFAULT_TOLERANCE,
                )?;
                QuantumGame::new(rho, vec![space.clone(), space], payoffs)?
                    .with_ordering(Ordering::Dynamic(vec![0, 1]))?
            }
            Model::TwoQubitBell => {
                let mut v = vec![Complex64::new(0.0, 0.0); 4];
                v[1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
                v[2] = Complex64::new(FRAC_1_SQRT_2, 0.0);
                let rho = DensityMatrix::pure(&v, DEFAULT_TOLERANCE)?;
                QuantumGame::new(
                    rho,
                    vec![space.clone().on_factor(0), space.on_factor(1)],
                    payoffs,
                )?
                .with_factors(vec![2, 2])?
            }
            Model::Custom => {
                return Err(ReductionError::NotReducible(
                    "custom games are built from their definition".into(),
                ))
            }
        };
        Ok(game)
    }
}

/// Physical-angle payoffs of a two-player rotation game, for the oracle.
#[derive(Debug, Clone, Copy)]
pub struct EnginePayoff<'a>(pub &'a QuantumGame);

impl TwoPlayerPayoff for EnginePayoff<'_> {
    fn payoff(&self, player: usize, theta: f64, phi: f64) -> f64 {
        self.0
            .payoff(&StrategyProfile::angles(&[theta, phi]), player)
            .expect("engine payoff inside the declared strategy intervals")
    }
}

/// Which coefficient a [`FormulaCheck`] is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Offset,
    SinCoeff,
    CosCoeff,
    Amplitude,
    Phase,
}

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::Offset => "offset",
            Quantity::SinCoeff => "sin 2x coefficient",
            Quantity::CosCoeff => "cos 2x coefficient",
            Quantity::Amplitude => "amplitude q",
            Quantity::Phase => "phase Ψ",
        }
    }
}

/// One coefficient three ways: read from the trace payoff, from the
/// closed form that matches it, and from the formula as printed in the
/// literature (when one exists and is defined).
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaCheck {
    /// 1-based player.
    pub player: usize,
    pub quantity: Quantity,
    pub derived_formula: &'static str,
    pub printed_formula: &'static str,
    pub oracle: f64,
    pub derived: f64,
    pub printed: Option<f64>,
}

impl FormulaCheck {
    pub fn derived_residual(&self) -> f64 {
        (self.derived - self.oracle).abs()
    }

    pub fn printed_residual(&self) -> Option<f64> {
        self.printed.map(|p| (p - self.oracle).abs())
    }
}

/// Coefficient aggregates of a two-qubit payoff operator `x_kl` (1-based,
/// basis `|00⟩, |01⟩, |10⟩, |11⟩`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitAggregates {
    /// `Σ x_jj + 2 Re x23 − 2 Re x14`; four times the offset.
    pub constant: f64,
    /// `A = −x11 + x22 + x33 − x44 + 2 Re x23 + 2 Re x14`; four times the cos coefficient.
    pub cos_aggregate: f64,
    /// `B = Re x12 + Re x13 + Re x24 + Re x34`, the printed sin aggregate.
    pub printed_sin_aggregate: f64,
    /// `Re x24 + Re x34 − Re x12 − Re x13`; twice the sin coefficient.
    pub sin_aggregate: f64,
}

impl TwoQubitAggregates {
    pub fn of(p: &ComplexMatrix) -> Self {
        let x = |k: usize, l: usize| p[(k - 1, l - 1)].re;
        Self {
            constant: x(1, 1) + x(2, 2) + x(3, 3) + x(4, 4) + 2.0 * x(2, 3) - 2.0 * x(1, 4),
            cos_aggregate: -x(1, 1) + x(2, 2) + x(3, 3) - x(4, 4) + 2.0 * x(2, 3) + 2.0 * x(1, 4),
            printed_sin_aggregate: x(1, 2) + x(1, 3) + x(2, 4) + x(3, 4),
            sin_aggregate: x(2, 4) + x(3, 4) - x(1, 2) - x(1, 3),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport {
    pub model: Model,
    pub game: QuantumGame,
    pub sinusoids: [SinusoidalPayoff; 2],
    pub admissible: [bool; 2],
    /// Present when both players are admissible.
    pub params: Option<GameAParams>,
    pub angle_scale: f64,
    pub checks: Vec<FormulaCheck>,
    pub aggregates: Option<[TwoQubitAggregates; 2]>,
    /// Largest sum-dependence deviation seen.
    pub sum_dependence: f64,
    pub non_triviality: NonTriviality,
}

impl ReductionReport {
    /// 1-based players that are not admissible.
    pub fn inadmissible_players(&self) -> Vec<usize> {
        (0..2)
            .filter(|&i| !self.admissible[i])
            .map(|i| i + 1)
            .collect()
    }

    pub fn degenerate_players(&self) -> Vec<usize> {
        (0..2)
            .filter(|&i| self.sinusoids[i].amplitude() <= DEGENERATE_AMPLITUDE)
            .map(|i| i + 1)
            .collect()
    }

    /// Largest printed-formula residual for a quantity over both players.
    pub fn max_printed_residual(&self, quantity: Quantity) -> Option<f64> {
        self.checks
            .iter()
            .filter(|c| c.quantity == quantity)
            .filter_map(FormulaCheck::printed_residual)
            .reduce(f64::max)
    }

    pub fn max_derived_residual(&self) -> f64 {
        self.checks
            .iter()
            .map(FormulaCheck::derived_residual)
            .fold(0.0, f64::max)
    }

    /// Engine payoff at physical angles.
    pub fn physical_payoff(&self, theta: f64, phi: f64, player: usize) -> Result<f64> {
        Ok(self
            .game
            .payoff(&StrategyProfile::angles(&[theta, phi]), player)?)
    }
}

fn total_angle_payoff(game: &QuantumGame, player: usize) -> impl Fn(f64) -> Result<f64> + '_ {
    move |x: f64| {
        let half = 0.5 * x;
        Ok(game.payoff(&StrategyProfile::angles(&[half, half]), player)?)
    }
}

/// Max `|f(θ, φ) − f(θ+δ, φ−δ)|` over seeded samples inside `[0, max]²`.
pub fn sum_dependence_deviation(game: &QuantumGame, max: f64, samples: usize) -> Result<f64> {
    let mut rng = sampling::seeded(SUM_DEPENDENCE_SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let theta: f64 = rng.random_range(0.0..=max);
        let phi: f64 = rng.random_range(0.0..=max);
        let lo = (-theta).max(phi - max);
        let hi = (max - theta).min(phi);
        let delta = if hi > lo {
            rng.random_range(lo..=hi)
        } else {
            lo
        };
        let a = game.payoffs(&StrategyProfile::angles(&[theta, phi]))?;
        let b = game.payoffs(&StrategyProfile::angles(&[
            (theta + delta).clamp(0.0, max),
            (phi - delta).clamp(0.0, max),
        ]))?;
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x - y).abs());
        }
    }
    Ok(worst)
}

fn reduce_game(model: Model, game: QuantumGame) -> Result<ReductionReport> {
    if game.num_players() != 2 {
        return Err(ReductionError::NotReducible(format!(
            "{} players, reductions need exactly 2",
            game.num_players()
        )));
    }
    for (k, space) in game.players().iter().enumerate() {
        match space.kind() {
            StrategyKind::Rotation { lo, hi }
                if lo.abs() <= ADMISSIBILITY_SLACK
                    && (hi - PHYSICAL_MAX_ANGLE).abs() <= ADMISSIBILITY_SLACK => {}
            _ => {
                return Err(ReductionError::NotReducible(format!(
                    "player {} must choose a rotation angle in [0, π/4]",
                    k + 1
                )))
            }
        }
    }
    let sum_dependence =
        sum_dependence_deviation(&game, PHYSICAL_MAX_ANGLE, SUM_DEPENDENCE_SAMPLES)?;
    if sum_dependence > SUM_DEPENDENCE_TOL {
        return Err(ReductionError::SumDependence {
            deviation: sum_dependence,
        });
    }
    let s1 = extract_sinusoid(total_angle_payoff(&game, 0))?;
    let s2 = extract_sinusoid(total_angle_payoff(&game, 1))?;
    let sinusoids = [s1, s2];
    let admissible = [s1.is_admissible(), s2.is_admissible()];
    let params = if admissible[0] && admissible[1] {
        Some(GameAParams::new(s1.player_params(), s2.player_params())?)
    } else {
        None
    };
    let samples = oracle::grid_points(0.0, PHYSICAL_MAX_ANGLE, 9);
    let non_triviality = non_triviality(&game, &samples)?;

    let mut checks = Vec::new();
    let mut aggregates = None;
    let ops: Vec<ComplexMatrix> = game
        .payoff_operators()
        .iter()
        .map(|p| p.matrix().clone())
        .collect();
    match model {
        Model::OneQubitPure => {
            for (i, op) in ops.iter().enumerate() {
                checks.extend(one_qubit_pure_checks(i + 1, op, &sinusoids[i]));
            }
        }
        Model::OneQubitMixed { p } => {
            for (i, op) in ops.iter().enumerate() {
                checks.extend(one_qubit_mixed_checks(i + 1, op, p, &sinusoids[i]));
            }
        }
        Model::TwoQubitBell => {
            let aggs = [
                TwoQubitAggregates::of(&ops[0]),
                TwoQubitAggregates::of(&ops[1]),
            ];
            for (i, agg) in aggs.iter().enumerate() {
                checks.extend(two_qubit_checks(i + 1, agg, &sinusoids[i]));
            }
            aggregates = Some(aggs);
        }
        Model::Custom => {}
    }
    for c in checks.iter().filter(|c| c.quantity == Quantity::Offset) {
        if c.derived_residual() > OFFSET_TOL {
            return Err(ReductionError::OffsetMismatch {
                player: c.player,
                extracted: c.oracle,
                expected: c.derived,
            });
        }
    }

    Ok(ReductionReport {
        model,
        game,
        sinusoids,
        admissible,
        params,
        angle_scale: ANGLE_SCALE,
        checks,
        aggregates,
        sum_dependence,
        non_triviality,
    })
}

/// `atan(num / den)` as printed; undefined for `0/0`.
fn printed_arctan(num: f64, den: f64) -> Option<f64> {
    if num == 0.0 && den == 0.0 {
        None
    } else {
        Some((num / den).atan())
    }
}

fn check(
    player: usize,
    quantity: Quantity,
    oracle: f64,
    (derived_formula, derived): (&'static str, f64),
    (printed_formula, printed): (&'static str, Option<f64>),
) -> FormulaCheck {
    FormulaCheck {
        player,
        quantity,
        derived_formula,
        printed_formula,
        oracle,
        derived,
        printed,
    }
}

fn one_qubit_pure_checks(
    player: usize,
    p: &ComplexMatrix,
    s: &SinusoidalPayoff,
) -> Vec<FormulaCheck> {
    let a = p[(0, 0)].re;
    let d = p[(1, 1)].re;
    let bb = 2.0 * p[(0, 1)].re;
    vec![
        check(
            player,
            Quantity::Offset,
            s.offset,
            ("(a+d)/2", 0.5 * (a + d)),
            ("(a+d)/2", Some(0.5 * (a + d))),
        ),
        check(
            player,
            Quantity::SinCoeff,
            s.sin_coeff,
            ("(d-a)/2", 0.5 * (d - a)),
            ("(a-d)/2", Some(0.5 * (a - d))),
        ),
        check(
            player,
            Quantity::CosCoeff,
            s.cos_coeff,
            ("(b+b̄)/2", 0.5 * bb),
            ("(b+b̄)/2", Some(0.5 * bb)),
        ),
        check(
            player,
            Quantity::Amplitude,
            s.amplitude(),
            ("½√((d-a)²+(b+b̄)²)", 0.5 * (d - a).hypot(bb)),
            ("½√((a-d)²+(b+b̄)²)", Some(0.5 * (a - d).hypot(bb))),
        ),
        check(
            player,
            Quantity::Phase,
            s.phase(),
            (
                "atan2((b+b̄)/2, (d-a)/2)",
                canonical_phase(0.5 * (d - a), 0.5 * bb),
            ),
            ("arctan((b+b̄)/(a-d))", printed_arctan(bb, a - d)),
        ),
    ]
}

fn one_qubit_mixed_checks(
    player: usize,
    m: &ComplexMatrix,
    p: f64,
    s: &SinusoidalPayoff,
) -> Vec<FormulaCheck> {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let bb = 2.0 * m[(0, 1)].re;
    let w = 1.0 - 2.0 * p;
    let sin = -0.5 * w * bb;
    let cos = 0.5 * w * (d - a);
    vec![
        check(
            player,
            Quantity::Offset,
            s.offset,
            ("(a+d)/2", 0.5 * (a + d)),
            ("(a+d)/2", Some(0.5 * (a + d))),
        ),
        check(
            player,
            Quantity::SinCoeff,
            s.sin_coeff,
            ("-(1-2p)(b+b̄)/2", sin),
            ("(1-2p)(b+b̄)/2", Some(0.5 * w * bb)),
        ),
        check(
            player,
            Quantity::CosCoeff,
            s.cos_coeff,
            ("(1-2p)(d-a)/2", cos),
            ("(1-p)(d-a)", Some((1.0 - p) * (d - a))),
        ),
        check(
            player,
            Quantity::CosCoeff,
            s.cos_coeff,
            ("(1-2p)(d-a)/2", cos),
            ("½·(1-p)(d-a)", Some(0.5 * (1.0 - p) * (d - a))),
        ),
        check(
            player,
            Quantity::Amplitude,
            s.amplitude(),
            ("½|1-2p|√((d-a)²+(b+b̄)²)", 0.5 * w.abs() * (d - a).hypot(bb)),
            (
                "½√((d-a)²(1-p)²+(b+b̄)²(1-2p)²)",
                Some(0.5 * ((d - a) * (1.0 - p)).hypot(bb * w)),
            ),
        ),
        check(
            player,
            Quantity::Phase,
            s.phase(),
            (
                "atan2((1-2p)(d-a)/2, -(1-2p)(b+b̄)/2)",
                canonical_phase(sin, cos),
            ),
            (
                "arctan((1-p)(d-a)/((1-2p)(b+b̄)))",
                printed_arctan((1.0 - p) * (d - a), w * bb),
            ),
        ),
    ]
}

fn two_qubit_checks(
    player: usize,
    agg: &TwoQubitAggregates,
    s: &SinusoidalPayoff,
) -> Vec<FormulaCheck> {
    let big_a = agg.cos_aggregate;
    let big_b = agg.printed_sin_aggregate;
    let sin = 0.5 * agg.sin_aggregate;
    let cos = 0.25 * big_a;
    vec![
        check(
            player,
            Quantity::Offset,
            s.offset,
            ("¼(Σx_jj + 2Re x23 − 2Re x14)", 0.25 * agg.constant),
            ("¼(Σx_jj + 2Re x23 − 2Re x14)", Some(0.25 * agg.constant)),
        ),
        check(
            player,
            Quantity::CosCoeff,
            s.cos_coeff,
            ("A/4", cos),
            ("A/4", Some(cos)),
        ),
        check(
            player,
            Quantity::SinCoeff,
            s.sin_coeff,
            ("(Re x24 + Re x34 − Re x12 − Re x13)/2", sin),
            ("−B/2", Some(-0.5 * big_b)),
        ),
        check(
            player,
            Quantity::Amplitude,
            s.amplitude(),
            ("¼√(A² + 4B'²)", 0.25 * big_a.hypot(2.0 * agg.sin_aggregate)),
            (
                "√(¼A² + 4B²)",
                Some((0.25 * big_a * big_a + 4.0 * big_b * big_b).sqrt()),
            ),
        ),
        check(
            player,
            Quantity::Phase,
            s.phase(),
            ("atan2(A/4, B'/2)", canonical_phase(sin, cos)),
            ("−arctan(A/B)", printed_arctan(big_a, big_b).map(|v| -v)),
        ),
    ]
}

fn canonical_phase(sin: f64, cos: f64) -> f64 {
    SinusoidalPayoff::new(0.0, sin, cos).phase()
}

pub fn reduce_one_qubit_pure(
    p1: &HermitianOperator,
    p2: &HermitianOperator,
) -> Result<ReductionReport> {
    reduce_game(Model::OneQubitPure, Model::OneQubitPure.game(p1, p2)?)
}

pub fn reduce_one_qubit_mixed(
    p1: &HermitianOperator,
    p2: &HermitianOperator,
    p: f64,
) -> Result<ReductionReport> {
    let model = Model::OneQubitMixed { p };
    reduce_game(model, model.game(p1, p2)?)
}

pub fn reduce_two_qubit(p1: &HermitianOperator, p2: &HermitianOperator) -> Result<ReductionReport> {
    reduce_game(Model::TwoQubitBell, Model::TwoQubitBell.game(p1, p2)?)
}

pub fn reduce_model(
    model: Model,
    p1: &HermitianOperator,
    p2: &HermitianOperator,
) -> Result<ReductionReport> {
    reduce_game(model, model.game(p1, p2)?)
}

/// Reduce an arbitrary two-player game whose players rotate in `[0, π/4]`.
pub fn reduce_custom(game: QuantumGame) -> Result<ReductionReport> {
    reduce_game(Model::Custom, game)
}

/// Closed-form equilibrium in physical angles, without a certificate.
pub fn solve_physical_uncertified(
    report: &ReductionReport,
    psi_equality_tol: f64,
) -> Result<NashSolution> {
    let inadmissible = report.inadmissible_players();
    if !inadmissible.is_empty() {
        return Err(ReductionError::Inadmissible {
            players: inadmissible,
        });
    }
    let params = report
        .params
        .as_ref()
        .expect("admissible reports carry params");
    let solution = game_a::solve_closed_form(params, psi_equality_tol)?;
    if matches!(solution.equilibrium, Equilibrium::Degenerate { .. }) {
        return Ok(solution);
    }
    Ok(solution.scaled(1.0 / report.angle_scale))
}

/// Solve in GAME A coordinates, map back to physical angles and certify
/// against the engine payoff on `[0, π/4]²`.
pub fn solve_physical_with(
    report: &ReductionReport,
    psi_equality_tol: f64,
    epsilon: f64,
    grid_n: usize,
) -> Result<NashSolution> {
    let solution = solve_physical_uncertified(report, psi_equality_tol)?;
    if matches!(solution.equilibrium, Equilibrium::Degenerate { .. }) {
        return Ok(solution);
    }
    let params = report
        .params
        .as_ref()
        .expect("admissible reports carry params");
    Ok(solution.certify(
        &EnginePayoff(&report.game),
        Domain::square(0.0, PHYSICAL_MAX_ANGLE),
        epsilon,
        grid_n,
        ANGLE_SCALE * params.max_amplitude(),
    ))
}

pub fn solve_physical(report: &ReductionReport) -> Result<NashSolution> {
    solve_physical_with(
        report,
        game_a::PSI_EQUALITY_TOL,
        game_a::CERTIFICATE_EPSILON,
        game_a::CERTIFICATE_GRID,
    )
}

/// Largest `|engine(θ, φ) − GAME A(2θ, 2φ)|` over an `n × n` physical grid.
pub fn fidelity_deviation(report: &ReductionReport, n: usize) -> Result<f64> {
    let params = report
        .params
        .as_ref()
        .ok_or_else(|| ReductionError::Inadmissible {
            players: report.inadmissible_players(),
        })?;
    let grid = oracle::grid_points(0.0, PHYSICAL_MAX_ANGLE, n);
    let mut worst: f64 = 0.0;
    for &t in &grid {
        for &p in &grid {
            let engine = report.game.payoffs(&StrategyProfile::angles(&[t, p]))?;
            for (player, e) in engine.iter().enumerate() {
                let a = params.eval(report.angle_scale * t, report.angle_scale * p, player)?;
                worst = worst.max((e - a).abs());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmatrix::validate_hermitian;

    fn herm(m: ComplexMatrix) -> HermitianOperator {
        validate_hermitian(&m, DEFAULT_TOLERANCE).unwrap()
    }

    fn id(n: usize) -> HermitianOperator {
        herm(ComplexMatrix::identity(n))
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn extract_constant_is_degenerate() {
        let s = extract_sinusoid(|_| Ok(1.0)).unwrap();
        assert_eq!(s, SinusoidalPayoff::new(1.0, 0.0, 0.0));
        assert_eq!(s.amplitude(), 0.0);
    }

    #[test]
    fn extract_rejects_non_sinusoids() {
        let err = extract_sinusoid(|x| Ok((4.0 * x).sin())).unwrap_err();
        assert!(matches!(err, ReductionError::NotSinusoidal { .. }));
    }

    #[test]
    fn one_qubit_pure_sinusoids() {
        let r = reduce_one_qubit_pure(
            &herm(ComplexMatrix::pauli_x()),
            &herm(ComplexMatrix::pauli_z()),
        )
        .unwrap();
        let [sx, sz] = r.sinusoids;
        assert!(close(sx.offset, 0.0, 1e-12) && close(sx.sin_coeff, 0.0, 1e-12));
        assert!(close(sx.cos_coeff, 1.0, 1e-12));
        assert!(close(sz.sin_coeff, -1.0, 1e-12) && close(sz.cos_coeff, 0.0, 1e-12));
        assert_eq!(r.admissible, [true, false]);
        assert!(r.params.is_none());
        assert!(close(sx.phase(), FRAC_PI_2, 1e-12) && close(sx.amplitude(), 1.0, 1e-12));
    }

    #[test]
    fn minus_sigma_z_is_a_positive_sine() {
        let r = reduce_one_qubit_pure(&herm(-&ComplexMatrix::pauli_z()), &id(2)).unwrap();
        let s = r.sinusoids[0];
        assert!(close(s.amplitude(), 1.0, 1e-12) && close(s.phase(), 0.0, 1e-12));
        assert!(close(s.sin_coeff, 1.0, 1e-12));
    }

    #[test]
    fn printed_pure_sin_coefficient_has_the_opposite_sign() {
        let r = reduce_one_qubit_pure(&herm(ComplexMatrix::pauli_z()), &id(2)).unwrap();
        let c = r
            .checks
            .iter()
            .find(|c| c.player == 1 && c.quantity == Quantity::SinCoeff)
            .unwrap();
        assert!(c.derived_residual() < 1e-12);
        assert!(close(c.printed_residual().unwrap(), 2.0, 1e-12));
    }

    #[test]
    fn mixed_half_is_degenerate() {
        let r = reduce_one_qubit_mixed(
            &herm(ComplexMatrix::pauli_x()),
            &herm(ComplexMatrix::diagonal(&[3.0, -1.0])),
            0.5,
        )
        .unwrap();
        assert_eq!(r.degenerate_players(), vec![1, 2]);
        let sol = solve_physical(&r).unwrap();
        assert!(matches!(sol.equilibrium, Equilibrium::Degenerate { .. }));
    }

    #[test]
    fn mixed_zero_matches_pure_one_state() {
        let r = reduce_one_qubit_mixed(&herm(ComplexMatrix::pauli_x()), &id(2), 0.0).unwrap();
        // |1⟩ rotated by x: amplitudes (−sin x, cos x), so ⟨σ_x⟩ = −sin 2x
        let s = r.sinusoids[0];
        assert!(close(s.sin_coeff, -1.0, 1e-12) && close(s.cos_coeff, 0.0, 1e-12));
    }

    #[test]
    fn mixed_quarter_cos_coefficient_diagnostic() {
        let r = reduce_one_qubit_mixed(&herm(ComplexMatrix::diagonal(&[2.0, 0.0])), &id(2), 0.25)
            .unwrap();
        let c = r
            .checks
            .iter()
            .find(|c| {
                c.player == 1
                    && c.quantity == Quantity::CosCoeff
                    && c.printed_formula == "(1-p)(d-a)"
            })
            .unwrap();
        assert!(close(c.oracle, -0.5, 1e-12));
        assert!(c.derived_residual() <= 1e-12);
        assert!(close(c.printed.unwrap(), -1.5, 1e-12));
        assert!(close(c.printed_residual().unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn mixed_range_is_checked() {
        assert!(matches!(
            reduce_one_qubit_mixed(&id(2), &id(2), 1.2),
            Err(ReductionError::MixingOutOfRange(_))
        ));
    }

    #[test]
    fn two_qubit_zz() {
        let z = ComplexMatrix::pauli_z();
        let r = reduce_two_qubit(&herm(z.tensor(&z)), &id(4)).unwrap();
        let s = r.sinusoids[0];
        assert!(close(s.cos_coeff, -1.0, 1e-12) && close(s.sin_coeff, 0.0, 1e-12));
        assert!(close(s.amplitude(), 1.0, 1e-12) && close(s.phase(), -FRAC_PI_2, 1e-12));
        let agg = r.aggregates.unwrap()[0];
        assert_eq!(agg.cos_aggregate, -4.0);
        assert_eq!(agg.printed_sin_aggregate, 0.0);
        assert!(r.admissible[0]);
        assert_eq!(r.degenerate_players(), vec![2]);
    }

    #[test]
    fn two_qubit_sin_aggregate_signs() {
        // x12 = x13 = x24 = x34 = 1: the printed aggregate B is 4, but the
        // x12/x13 and x24/x34 contributions cancel in the trace payoff
        let mut m = ComplexMatrix::zeros(4, 4);
        for (k, l) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            m[(k, l)] = Complex64::new(1.0, 0.0);
            m[(l, k)] = Complex64::new(1.0, 0.0);
        }
        let r = reduce_two_qubit(&herm(m), &id(4)).unwrap();
        assert_eq!(r.aggregates.unwrap()[0].printed_sin_aggregate, 4.0);
        assert!(close(r.sinusoids[0].sin_coeff, 0.0, 1e-12));
        assert!(r.admissible[0]);

        let mut m = ComplexMatrix::zeros(4, 4);
        for (k, l) in [(0, 1), (0, 2)] {
            m[(k, l)] = Complex64::new(1.0, 0.0);
            m[(l, k)] = Complex64::new(1.0, 0.0);
        }
        let r = reduce_two_qubit(&herm(m), &id(4)).unwrap();
        assert!(close(r.sinusoids[0].sin_coeff, -1.0, 1e-12));
        assert_eq!(r.admissible, [false, true]);
        assert!(matches!(
            solve_physical(&r),
            Err(ReductionError::Inadmissible { .. })
        ));
    }

    #[test]
    fn payoff_dimension_is_checked() {
        assert!(matches!(
            reduce_two_qubit(&id(2), &id(2)),
            Err(ReductionError::PayoffDimension { .. })
        ));
    }

    #[test]
    fn worked_equilibrium() {
        let r = reduce_one_qubit_pure(
            &herm(-&ComplexMatrix::pauli_z()),
            &herm(ComplexMatrix::pauli_x()),
        )
        .unwrap();
        let sol = solve_physical(&r).unwrap();
        let (t, p) = sol.points(1)[0];
        assert!(close(t, FRAC_PI_4, 1e-12) && close(p, 0.0, 1e-12));
        assert!(close(r.physical_payoff(t, p, 0).unwrap(), 1.0, 1e-9));
        assert!(close(r.physical_payoff(t, p, 1).unwrap(), 0.0, 1e-9));
        assert!(sol.is_certified());
    }

    #[test]
    fn equal_players_give_a_physical_continuum() {
        let mz = herm(-&ComplexMatrix::pauli_z());
        let r = reduce_one_qubit_pure(&mz, &mz).unwrap();
        let sol = solve_physical(&r).unwrap();
        match sol.equilibrium {
            Equilibrium::Continuum {
                sum, theta_range, ..
            } => {
                assert!(close(sum, FRAC_PI_4, 1e-12));
                assert!(close(theta_range.0, 0.0, 1e-12) && close(theta_range.1, FRAC_PI_4, 1e-12));
            }
            ref other => panic!("{other:?}"),
        }
        assert!(sol.is_certified());
    }

    #[test]
    fn identity_payoff_is_degenerate_player_one() {
        let r = reduce_one_qubit_pure(&id(2), &herm(ComplexMatrix::pauli_x())).unwrap();
        let sol = solve_physical(&r).unwrap();
        assert!(matches!(
            sol.equilibrium,
            Equilibrium::Degenerate { ref players, .. } if players == &vec![1]
        ));
    }
}
