//! The `qgames` command line.
//!
//! Every subcommand reads one definition file (see [`definition`]); profiles
//! and grid controls come from flags. Reports go to the supplied writer,
//! errors are returned with an exit code attached.

pub mod definition;
pub mod format;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::Rng;

use crate::engine::{EngineError, QuantumGame, Strategy, StrategyKind, StrategyProfile};
use crate::game_a::Equilibrium;
use crate::oracle;
use crate::reductions::{
    self, Model, Quantity, ReductionError, ReductionReport, PHYSICAL_MAX_ANGLE,
};
use crate::sampling::{self, DEFAULT_SEED};
use crate::suite::{run_suite, SuiteCheck};

pub use definition::{BuiltGame, DefinitionError, GameDefinition};
use format::{angle, num, small};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const INVALID: i32 = 2;
    pub const INADMISSIBLE: i32 = 3;
    pub const DEGENERATE: i32 = 4;
    pub const CERTIFICATE: i32 = 5;
}

/// Largest engine/GAME A disagreement accepted by `check`.
pub const FIDELITY_TOL: f64 = 1e-9;
const FIDELITY_GRID: usize = 50;
const CHECK_PROFILES: usize = 200;

#[derive(Debug, Parser)]
#[command(
    name = "qgames",
    version,
    about = "Quantum games with coherent payoff operators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Payoffs at one strategy profile.
    Eval {
        definition: PathBuf,
        /// Player 1 angle in radians.
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        /// Player 2 angle in radians.
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<f64>,
        /// Member index for each finite-strategy player, in player order.
        #[arg(long)]
        member: Vec<usize>,
    },
    /// Reduce the game to GAME A and print coefficients and diagnostics.
    Reduce { definition: PathBuf },
    /// Closed-form Nash equilibrium in physical angles.
    Solve {
        definition: PathBuf,
        /// Certify the equilibrium on a grid against the engine payoff.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Payoffs on an n×n grid over the physical domain, as CSV.
    Sweep {
        definition: PathBuf,
        #[arg(long, default_value_t = 11)]
        n: usize,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariant checks for one game and/or the built-in suites.
    Check {
        definition: Option<PathBuf>,
        #[arg(long)]
        suite: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Definition {
        path: PathBuf,
        source: DefinitionError,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Definition { .. } | CliError::Usage(_) => exit::INVALID,
            CliError::Reduction(ReductionError::Inadmissible { .. }) => exit::INADMISSIBLE,
            CliError::Reduction(
                ReductionError::NotReducible(_)
                | ReductionError::SumDependence { .. }
                | ReductionError::NotSinusoidal { .. },
            ) => exit::INVALID,
            CliError::Engine(
                EngineError::AngleOutOfRange { .. }
                | EngineError::MemberOutOfRange { .. }
                | EngineError::StrategyKindMismatch { .. },
            ) => exit::INVALID,
            _ => exit::FAILURE,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Read, parse and validate a definition file.
pub fn load(path: &Path) -> Result<GameDefinition> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    GameDefinition::parse(&text).map_err(|source| CliError::Definition {
        path: path.to_owned(),
        source,
    })
}

fn build(path: &Path, def: &GameDefinition) -> Result<BuiltGame> {
    def.build().map_err(|source| CliError::Definition {
        path: path.to_owned(),
        source,
    })
}

/// Run one command; returns the exit code for a completed run.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Eval {
            definition,
            theta,
            phi,
            member,
        } => {
            let def = load(definition)?;
            let built = build(definition, &def)?;
            let profile = eval_profile(&built.game, *theta, *phi, member)?;
            out.write_all(cmd_eval(&built.game, &profile)?.as_bytes())?;
            Ok(exit::OK)
        }
        Command::Reduce { definition } => {
            let def = load(definition)?;
            let built = build(definition, &def)?;
            let report = reduce(built)?;
            out.write_all(format_reduction(&report).as_bytes())?;
            Ok(if !report.inadmissible_players().is_empty() {
                exit::INADMISSIBLE
            } else if !report.degenerate_players().is_empty() {
                exit::DEGENERATE
            } else {
                exit::OK
            })
        }
        Command::Solve {
            definition,
            verify,
            epsilon,
            grid,
        } => {
            let def = load(definition)?;
            let built = build(definition, &def)?;
            let report = reduce(built)?;
            let epsilon = epsilon.unwrap_or(def.certificate_epsilon());
            let grid = grid.unwrap_or(def.certificate_grid());
            if *verify && !(epsilon.is_finite() && epsilon >= 0.0) {
                return Err(CliError::Usage(
                    "--epsilon must be a finite non-negative number".into(),
                ));
            }
            if *verify && grid < 2 {
                return Err(CliError::Usage("--grid must be at least 2".into()));
            }
            let solution = if *verify {
                reductions::solve_physical_with(
                    &report,
                    def.psi_equality_tolerance(),
                    epsilon,
                    grid,
                )?
            } else {
                reductions::solve_physical_uncertified(&report, def.psi_equality_tolerance())?
            };
            out.write_all(format_solution(&report, &solution)?.as_bytes())?;
            Ok(match (&solution.equilibrium, &solution.certificate) {
                (Equilibrium::Degenerate { .. }, _) => exit::DEGENERATE,
                (_, Some(c)) if !c.pass => exit::CERTIFICATE,
                _ => exit::OK,
            })
        }
        Command::Sweep {
            definition,
            n,
            out: path,
        } => {
            let def = load(definition)?;
            let built = build(definition, &def)?;
            let csv = cmd_sweep(&built.game, *n)?;
            match path {
                Some(p) => fs::write(p, csv).map_err(|source| CliError::Io {
                    path: p.clone(),
                    source,
                })?,
                None => out.write_all(csv.as_bytes())?,
            }
            Ok(exit::OK)
        }
        Command::Check {
            definition,
            suite,
            seed,
        } => {
            if definition.is_none() && !suite {
                return Err(CliError::Usage(
                    "check needs a definition file or --suite".into(),
                ));
            }
            let mut checks = Vec::new();
            let mut seed_used = seed.unwrap_or(DEFAULT_SEED);
            if let Some(path) = definition {
                let def = load(path)?;
                seed_used = seed.unwrap_or(def.seed());
                let built = build(path, &def)?;
                checks.extend(check_game(&built, seed_used)?);
            }
            if *suite {
                checks.extend(run_suite(seed_used).checks);
            }
            let mut text = format!("seed {seed_used}\n");
            for c in &checks {
                writeln!(text, "{c}").unwrap();
            }
            let failed = checks.iter().filter(|c| !c.pass).count();
            writeln!(text, "{} checks, {} failed", checks.len(), failed).unwrap();
            out.write_all(text.as_bytes())?;
            Ok(if failed == 0 { exit::OK } else { exit::FAILURE })
        }
    }
}

fn reduce(built: BuiltGame) -> Result<ReductionReport> {
    Ok(match built.model {
        Model::Custom => reductions::reduce_custom(built.game)?,
        model => {
            let [p1, p2] = [0, 1].map(|i| built.game.payoff_operators()[i].clone());
            reductions::reduce_model(model, &p1, &p2)?
        }
    })
}

/// Profile from `--theta`, `--phi` and `--member` flags.
pub fn eval_profile(
    game: &QuantumGame,
    theta: Option<f64>,
    phi: Option<f64>,
    members: &[usize],
) -> Result<StrategyProfile> {
    let mut angles = [("--theta", theta), ("--phi", phi)].into_iter();
    let mut members = members.iter();
    let mut profile = Vec::new();
    for (k, space) in game.players().iter().enumerate() {
        let (flag, value) = angles.next().unwrap_or(("--theta", None));
        profile.push(match space.kind() {
            StrategyKind::Rotation { .. } => Strategy::Angle(value.ok_or_else(|| {
                CliError::Usage(format!("player {} chooses an angle: pass {flag}", k + 1))
            })?),
            StrategyKind::Finite(_) => {
                if value.is_some() {
                    return Err(CliError::Usage(format!(
                        "player {} has a finite strategy set: pass --member instead of {flag}",
                        k + 1
                    )));
                }
                Strategy::Member(
                    *members.next().ok_or_else(|| {
                        CliError::Usage(format!("player {} needs --member", k + 1))
                    })?,
                )
            }
            StrategyKind::Unrestricted => {
                return Err(CliError::Usage(format!(
                    "player {} has an unrestricted strategy space",
                    k + 1
                )))
            }
        });
    }
    if members.next().is_some() {
        return Err(CliError::Usage(
            "more --member values than finite players".into(),
        ));
    }
    Ok(StrategyProfile(profile))
}

pub fn cmd_eval(game: &QuantumGame, profile: &StrategyProfile) -> Result<String> {
    let payoffs = game.payoffs(profile)?;
    let mut s = String::new();
    for (k, strategy) in profile.0.iter().enumerate() {
        let name = ["theta", "phi"].get(k).copied().unwrap_or("angle");
        match strategy {
            Strategy::Angle(a) => writeln!(s, "{name} = {}", angle(*a)).unwrap(),
            Strategy::Member(m) => writeln!(s, "player {} member = {m}", k + 1).unwrap(),
            Strategy::Unitary(_) => writeln!(s, "player {} unitary", k + 1).unwrap(),
        }
    }
    for (k, f) in payoffs.iter().enumerate() {
        writeln!(s, "f{} = {}", k + 1, num(*f)).unwrap();
    }
    Ok(s)
}

fn rotation_intervals(game: &QuantumGame) -> Result<Vec<(f64, f64)>> {
    game.players()
        .iter()
        .enumerate()
        .map(|(k, s)| {
            s.interval().ok_or_else(|| {
                CliError::Usage(format!(
                    "sweep needs rotation players; player {} is not",
                    k + 1
                ))
            })
        })
        .collect()
}

/// CSV `theta,phi,f1,f2` over the players' angle intervals, `theta` outer.
pub fn cmd_sweep(game: &QuantumGame, n: usize) -> Result<String> {
    if n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    let intervals = rotation_intervals(game)?;
    let thetas = oracle::grid_points(intervals[0].0, intervals[0].1, n);
    let phis = oracle::grid_points(intervals[1].0, intervals[1].1, n);
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Output(io::Error::other(e));
    w.write_record(["theta", "phi", "f1", "f2"])
        .map_err(csv_err)?;
    for &t in &thetas {
        for &p in &phis {
            let f = game.payoffs(&StrategyProfile::angles(&[t, p]))?;
            w.write_record([num(t), num(p), num(f[0]), num(f[1])])
                .map_err(csv_err)?;
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Output(io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("ascii csv"))
}

fn random_profile(game: &QuantumGame, rng: &mut impl Rng) -> StrategyProfile {
    StrategyProfile(
        game.players()
            .iter()
            .map(|s| match s.kind() {
                StrategyKind::Rotation { lo, hi } => Strategy::Angle(rng.random_range(*lo..=*hi)),
                StrategyKind::Finite(ms) => Strategy::Member(rng.random_range(0..ms.len())),
                StrategyKind::Unrestricted => {
                    Strategy::Unitary(sampling::random_unitary(rng, game.dimension()))
                }
            })
            .collect(),
    )
}

/// Invariants of one concrete game.
pub fn check_game(built: &BuiltGame, seed: u64) -> Result<Vec<SuiteCheck>> {
    let game = &built.game;
    let mut rng = sampling::seeded(seed);
    let mut trace: f64 = 0.0;
    for _ in 0..CHECK_PROFILES {
        let rho = game.final_state(&random_profile(game, &mut rng))?;
        let t = rho.matrix().trace().map_err(EngineError::from)?;
        trace = trace.max((t.re - 1.0).abs()).max(t.im.abs());
    }
    let mut checks = vec![suite_check(
        "game: trace preservation",
        CHECK_PROFILES,
        trace,
        1e-12,
    )];

    let reducible = built.model != Model::Custom
        || game
            .players()
            .iter()
            .all(|s| matches!(s.interval(), Some((lo, hi)) if lo == 0.0 && (hi - PHYSICAL_MAX_ANGLE).abs() <= 1e-12));
    if reducible {
        match reduce(built.clone()) {
            Ok(report) => {
                checks.push(suite_check(
                    "game: sum dependence",
                    100,
                    report.sum_dependence,
                    reductions::SUM_DEPENDENCE_TOL,
                ));
                let grid = oracle::grid_points(0.0, PHYSICAL_MAX_ANGLE, FIDELITY_GRID);
                let mut worst: f64 = 0.0;
                for &t in &grid {
                    for &p in &grid {
                        for (k, s) in report.sinusoids.iter().enumerate() {
                            let e = report.physical_payoff(t, p, k)?;
                            worst = worst.max((e - s.canonical_eval(t + p)).abs());
                        }
                    }
                }
                checks.push(suite_check(
                    "game: sinusoid fidelity",
                    FIDELITY_GRID * FIDELITY_GRID,
                    worst,
                    FIDELITY_TOL,
                ));
                if report.params.is_some() {
                    checks.push(suite_check(
                        "game: GAME A fidelity",
                        FIDELITY_GRID * FIDELITY_GRID,
                        reductions::fidelity_deviation(&report, FIDELITY_GRID)?,
                        FIDELITY_TOL,
                    ));
                }
            }
            Err(_) => checks.push(suite_check("game: reduction", 1, f64::INFINITY, 0.0)),
        }
    }
    Ok(checks)
}

fn suite_check(name: &'static str, samples: usize, worst: f64, tolerance: f64) -> SuiteCheck {
    SuiteCheck {
        name,
        samples,
        worst,
        tolerance,
        pass: worst.is_finite() && worst <= tolerance,
    }
}

fn model_line(model: &Model) -> String {
    match model {
        Model::OneQubitMixed { p } => format!("{} (p = {})", model.name(), num(*p)),
        m => m.name().to_string(),
    }
}

pub fn format_reduction(r: &ReductionReport) -> String {
    let mut s = String::new();
    writeln!(s, "model: {}", model_line(&r.model)).unwrap();
    writeln!(
        s,
        "form: f_i = c_i + α_i sin 2x + β_i cos 2x = c_i + q_i sin(2x + Ψ_i), x = θ + φ"
    )
    .unwrap();
    writeln!(
        s,
        "angle map: GAME A angles = {} × physical angles; physical domain [0, {}]²",
        num(r.angle_scale),
        angle(PHYSICAL_MAX_ANGLE)
    )
    .unwrap();
    writeln!(
        s,
        "sum dependence: max deviation {}",
        small(r.sum_dependence)
    )
    .unwrap();
    for (k, sin) in r.sinusoids.iter().enumerate() {
        writeln!(s).unwrap();
        writeln!(s, "player {}", k + 1).unwrap();
        writeln!(s, "  c  = {}", num(sin.offset)).unwrap();
        writeln!(s, "  α  = {}", num(sin.sin_coeff)).unwrap();
        writeln!(s, "  β  = {}", num(sin.cos_coeff)).unwrap();
        writeln!(s, "  q  = {}", num(sin.amplitude())).unwrap();
        writeln!(s, "  Ψ  = {}", angle(sin.phase())).unwrap();
        let status = if sin.amplitude() <= crate::game_a::DEGENERATE_AMPLITUDE {
            "degenerate (q = 0, payoff is constant)"
        } else if r.admissible[k] {
            "admissible"
        } else {
            "inadmissible (α < 0, Ψ outside [-π/2, π/2])"
        };
        writeln!(s, "  status: {status}").unwrap();
    }
    writeln!(s).unwrap();
    match &r.params {
        Some(p) => {
            writeln!(s, "GAME A parameters").unwrap();
            for k in 0..2 {
                let pp = p.player(k);
                writeln!(
                    s,
                    "  player {}: offset {}, q {}, Ψ {}",
                    k + 1,
                    num(pp.offset),
                    num(pp.amplitude),
                    angle(pp.phase)
                )
                .unwrap();
            }
        }
        None => writeln!(
            s,
            "GAME A parameters: none, player(s) {:?} inadmissible",
            r.inadmissible_players()
        )
        .unwrap(),
    }
    if let Some(aggs) = &r.aggregates {
        writeln!(s).unwrap();
        writeln!(s, "two-qubit aggregates").unwrap();
        for (k, a) in aggs.iter().enumerate() {
            writeln!(
                s,
                "  player {}: constant {}, A {}, B {}, B' {}",
                k + 1,
                num(a.constant),
                num(a.cos_aggregate),
                num(a.printed_sin_aggregate),
                num(a.sin_aggregate)
            )
            .unwrap();
        }
    }
    if !r.checks.is_empty() {
        writeln!(s).unwrap();
        writeln!(s, "formula checks (oracle = engine trace payoff)").unwrap();
        for c in &r.checks {
            writeln!(s, "  player {} {}", c.player, c.quantity.name()).unwrap();
            writeln!(s, "    oracle   {}", num(c.oracle)).unwrap();
            writeln!(
                s,
                "    derived  {:<44} = {:<16} residual {}",
                c.derived_formula,
                num(c.derived),
                small(c.derived_residual())
            )
            .unwrap();
            match (c.printed, c.printed_residual()) {
                (Some(v), Some(res)) => writeln!(
                    s,
                    "    printed  {:<44} = {:<16} residual {}{}",
                    c.printed_formula,
                    num(v),
                    small(res),
                    if res > 1e-9 { "  MISMATCH" } else { "" }
                )
                .unwrap(),
                _ => writeln!(s, "    printed  {:<44} = undefined", c.printed_formula).unwrap(),
            }
        }
        for q in [
            Quantity::SinCoeff,
            Quantity::CosCoeff,
            Quantity::Amplitude,
            Quantity::Phase,
        ] {
            if let Some(res) = r.max_printed_residual(q) {
                writeln!(s, "  max printed residual, {}: {}", q.name(), small(res)).unwrap();
            }
        }
    }
    let nt = &r.non_triviality;
    writeln!(s).unwrap();
    writeln!(s, "non-triviality").unwrap();
    writeln!(
        s,
        "  max |[P1, P2]| = {}{}",
        small(nt.payoff_commutator),
        if nt.payoffs_commute { " (commute)" } else { "" }
    )
    .unwrap();
    for (k, (lo, hi)) in nt.strategy_commutator.iter().enumerate() {
        writeln!(
            s,
            "  |[P{}, U]| over sampled strategies: min {}, max {}{}",
            k + 1,
            small(*lo),
            small(*hi),
            if nt.commutes_with_strategies[k] {
                " (commutes)"
            } else {
                ""
            }
        )
        .unwrap();
    }
    writeln!(
        s,
        "  {}",
        if nt.trivial {
            "trivial: the payoffs commute, or a payoff commutes with every sampled strategy"
        } else {
            "non-trivial"
        }
    )
    .unwrap();
    s
}

pub fn format_solution(
    r: &ReductionReport,
    solution: &crate::game_a::NashSolution,
) -> Result<String> {
    let mut s = String::new();
    writeln!(s, "model: {}", model_line(&r.model)).unwrap();
    match &solution.equilibrium {
        Equilibrium::Unique { theta, phi, case } => {
            writeln!(s, "equilibrium: unique (case {})", case.number()).unwrap();
            writeln!(s, "  theta = {}", angle(*theta)).unwrap();
            writeln!(s, "  phi   = {}", angle(*phi)).unwrap();
            let f = r.game.payoffs(&StrategyProfile::angles(&[*theta, *phi]))?;
            writeln!(s, "  f1 = {}", num(f[0])).unwrap();
            writeln!(s, "  f2 = {}", num(f[1])).unwrap();
        }
        Equilibrium::Continuum {
            phase,
            sum,
            theta_range,
        } => {
            writeln!(s, "equilibrium: continuum (Ψ1 = Ψ2 = {})", angle(*phase)).unwrap();
            writeln!(s, "  theta + phi = {}", angle(*sum)).unwrap();
            writeln!(
                s,
                "  theta in [{}, {}]",
                angle(theta_range.0),
                angle(theta_range.1)
            )
            .unwrap();
            let f = r.game.payoffs(&StrategyProfile::angles(&[
                theta_range.0,
                (sum - theta_range.0).clamp(0.0, PHYSICAL_MAX_ANGLE),
            ]))?;
            writeln!(s, "  f1 = {}", num(f[0])).unwrap();
            writeln!(s, "  f2 = {}", num(f[1])).unwrap();
        }
        Equilibrium::Degenerate { players, note } => {
            writeln!(
                s,
                "equilibrium: degenerate, player(s) {players:?} indifferent"
            )
            .unwrap();
            writeln!(s, "  {note}").unwrap();
        }
    }
    if let Some(c) = &solution.certificate {
        writeln!(s, "certificate: {}", if c.pass { "PASS" } else { "FAIL" }).unwrap();
        writeln!(
            s,
            "  epsilon = {}, grid = {}x{}",
            num(c.epsilon),
            c.grid_n,
            c.grid_n
        )
        .unwrap();
        writeln!(
            s,
            "  worst point ({}, {})",
            angle(c.checked_point.0),
            angle(c.checked_point.1)
        )
        .unwrap();
        writeln!(
            s,
            "  max unilateral gain: player 1 {}, player 2 {}",
            small(c.max_unilateral_gain[0]),
            small(c.max_unilateral_gain[1])
        )
        .unwrap();
        if let Some(eff) = c.effective_epsilon {
            writeln!(s, "  off-grid bound: epsilon + L·step = {}", small(eff)).unwrap();
        }
    }
    Ok(s)
}
