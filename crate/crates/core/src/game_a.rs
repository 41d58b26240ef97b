//! GAME A: two players pick `θ, φ ∈ [0, π/2]` and player `i` receives
//! `offset_i + amplitude_i · sin(θ + φ + phase_i)` with `phase_i ∈ [−π/2, π/2]`.
//!
//! Because `θ + φ + phase` never leaves `[−π/2, 3π/2]`, each best response is
//! the clamp of the unconstrained peak `π/2 − other − phase` onto the strategy
//! interval. The closed-form solver below enumerates the fixed points of that
//! clamp map region by region; [`iterate_best_response`] walks the same map
//! numerically and [`crate::oracle`] checks both on a grid.

use std::f64::consts::FRAC_PI_2;

use crate::oracle::{self, Domain, NashCertificate, TwoPlayerPayoff};

/// Phases closer than this are treated as equal and solved as a continuum.
pub const PSI_EQUALITY_TOL: f64 = 1e-9;
/// Amplitudes at or below this make a player indifferent.
pub const DEGENERATE_AMPLITUDE: f64 = 1e-12;
/// Default ε for certificates attached by the solver.
pub const CERTIFICATE_EPSILON: f64 = 1e-6;
/// Default grid per axis for certificates attached by the solver.
pub const CERTIFICATE_GRID: usize = 500;

const DOMAIN_SLACK: f64 = 1e-12;
const CASE_AGREEMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GameAError {
    #[error("player {player}: amplitude {amplitude} must be a non-negative number")]
    BadAmplitude { player: usize, amplitude: f64 },
    #[error("player {player}: phase {phase} outside [-π/2, π/2]")]
    PhaseOutOfBand { player: usize, phase: f64 },
    #[error("player {player}: offset {offset} is not finite")]
    BadOffset { player: usize, offset: f64 },
    #[error("angle ({theta}, {phi}) outside [0, π/2]²")]
    AngleOutOfDomain { theta: f64, phi: f64 },
    #[error("player index {0} out of range")]
    PlayerIndex(usize),
    #[error("degenerate player(s) {players:?}: every strategy is a best response")]
    Degenerate { players: Vec<usize> },
    #[error("case table disagrees at a region boundary: cases {a} and {b}")]
    CaseTableInconsistent { a: u8, b: u8 },
}

pub type Result<T> = std::result::Result<T, GameAError>;

/// One player's payoff `offset + amplitude · sin(θ + φ + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlayerParams {
    pub offset: f64,
    pub amplitude: f64,
    pub phase: f64,
}

impl PlayerParams {
    pub fn new(offset: f64, amplitude: f64, phase: f64) -> Self {
        Self {
            offset,
            amplitude,
            phase,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.amplitude <= DEGENERATE_AMPLITUDE
    }

    fn value(&self, total: f64) -> f64 {
        self.offset + self.amplitude * (total + self.phase).sin()
    }

    /// Maximizer of this player's payoff given the opponent's angle.
    fn respond(&self, other: f64) -> f64 {
        (FRAC_PI_2 - other - self.phase).clamp(0.0, FRAC_PI_2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameAParams {
    players: [PlayerParams; 2],
}

impl GameAParams {
    pub fn new(first: PlayerParams, second: PlayerParams) -> Result<Self> {
        for (i, p) in [first, second].iter().enumerate() {
            let player = i + 1;
            if !p.offset.is_finite() {
                return Err(GameAError::BadOffset {
                    player,
                    offset: p.offset,
                });
            }
            if !(p.amplitude.is_finite() && p.amplitude >= 0.0) {
                return Err(GameAError::BadAmplitude {
                    player,
                    amplitude: p.amplitude,
                });
            }
            if p.phase.is_nan() || p.phase.abs() > FRAC_PI_2 + DOMAIN_SLACK {
                return Err(GameAError::PhaseOutOfBand {
                    player,
                    phase: p.phase,
                });
            }
        }
        let clamp = |p: PlayerParams| PlayerParams {
            phase: p.phase.clamp(-FRAC_PI_2, FRAC_PI_2),
            ..p
        };
        Ok(Self {
            players: [clamp(first), clamp(second)],
        })
    }

    /// Unit amplitudes, zero offsets.
    pub fn from_phases(phase1: f64, phase2: f64) -> Result<Self> {
        Self::new(
            PlayerParams::new(0.0, 1.0, phase1),
            PlayerParams::new(0.0, 1.0, phase2),
        )
    }

    pub fn player(&self, index: usize) -> &PlayerParams {
        &self.players[index]
    }

    pub fn phases(&self) -> (f64, f64) {
        (self.players[0].phase, self.players[1].phase)
    }

    pub fn max_amplitude(&self) -> f64 {
        self.players[0].amplitude.max(self.players[1].amplitude)
    }

    /// 1-based indices of players with zero amplitude.
    pub fn degenerate_players(&self) -> Vec<usize> {
        (0..2)
            .filter(|&i| self.players[i].is_degenerate())
            .map(|i| i + 1)
            .collect()
    }

    fn require_active(&self, index: usize) -> Result<()> {
        if self.players[index].is_degenerate() {
            Err(GameAError::Degenerate {
                players: vec![index + 1],
            })
        } else {
            Ok(())
        }
    }

    /// Payoff of `player` (0 or 1) at `(θ, φ)`.
    pub fn eval(&self, theta: f64, phi: f64, player: usize) -> Result<f64> {
        if player > 1 {
            return Err(GameAError::PlayerIndex(player));
        }
        if !Domain::square(0.0, FRAC_PI_2).contains((theta, phi), DOMAIN_SLACK) {
            return Err(GameAError::AngleOutOfDomain { theta, phi });
        }
        Ok(self.players[player].value(theta + phi))
    }

    /// χ(φ): player 1's payoff-maximizing θ.
    pub fn best_response_p1(&self, phi: f64) -> Result<f64> {
        check_angle(phi)?;
        self.require_active(0)?;
        Ok(self.players[0].respond(phi))
    }

    /// κ(θ): player 2's payoff-maximizing φ.
    pub fn best_response_p2(&self, theta: f64) -> Result<f64> {
        check_angle(theta)?;
        self.require_active(1)?;
        Ok(self.players[1].respond(theta))
    }

    /// g(θ, φ) = (χ(φ), κ(θ)), evaluated simultaneously.
    pub fn best_response_map(&self, theta: f64, phi: f64) -> Result<(f64, f64)> {
        let degenerate = self.degenerate_players();
        if !degenerate.is_empty() {
            return Err(GameAError::Degenerate {
                players: degenerate,
            });
        }
        Ok((self.best_response_p1(phi)?, self.best_response_p2(theta)?))
    }
}

fn check_angle(a: f64) -> Result<()> {
    if (-DOMAIN_SLACK..=FRAC_PI_2 + DOMAIN_SLACK).contains(&a) {
        Ok(())
    } else {
        Err(GameAError::AngleOutOfDomain { theta: a, phi: a })
    }
}

impl TwoPlayerPayoff for GameAParams {
    fn payoff(&self, player: usize, theta: f64, phi: f64) -> f64 {
        self.players[player.min(1)].value(theta + phi)
    }
}

/// Which row of the unique-equilibrium case table produced a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UniqueCase {
    /// Both phases ≤ 0, first above second: `(−Ψ₁, π/2)`.
    One,
    /// Both phases ≤ 0, first below second: `(π/2, −Ψ₂)`.
    Two,
    /// First ≤ 0 ≤ second: `(π/2, 0)`.
    Three,
    /// Second ≤ 0 ≤ first: `(0, π/2)`.
    Four,
    /// Both phases ≥ 0, first above second: `(0, π/2 − Ψ₂)`.
    Five,
    /// Both phases ≥ 0, first below second: `(π/2 − Ψ₁, 0)`.
    Six,
}

impl UniqueCase {
    pub fn number(self) -> u8 {
        match self {
            UniqueCase::One => 1,
            UniqueCase::Two => 2,
            UniqueCase::Three => 3,
            UniqueCase::Four => 4,
            UniqueCase::Five => 5,
            UniqueCase::Six => 6,
        }
    }

    /// Cases whose (closed) phase region contains `(psi1, psi2)`.
    pub fn matching(psi1: f64, psi2: f64) -> Vec<UniqueCase> {
        let neg = |x: f64| x <= 0.0;
        let pos = |x: f64| x >= 0.0;
        let mut out = Vec::new();
        if neg(psi1) && neg(psi2) && psi1 > psi2 {
            out.push(UniqueCase::One);
        }
        if neg(psi1) && neg(psi2) && psi1 < psi2 {
            out.push(UniqueCase::Two);
        }
        if neg(psi1) && pos(psi2) {
            out.push(UniqueCase::Three);
        }
        if pos(psi1) && neg(psi2) {
            out.push(UniqueCase::Four);
        }
        if pos(psi1) && pos(psi2) && psi1 > psi2 {
            out.push(UniqueCase::Five);
        }
        if pos(psi1) && pos(psi2) && psi1 < psi2 {
            out.push(UniqueCase::Six);
        }
        out
    }

    /// The equilibrium the table assigns to this case.
    pub fn point(self, psi1: f64, psi2: f64) -> (f64, f64) {
        match self {
            UniqueCase::One => (-psi1, FRAC_PI_2),
            UniqueCase::Two => (FRAC_PI_2, -psi2),
            UniqueCase::Three => (FRAC_PI_2, 0.0),
            UniqueCase::Four => (0.0, FRAC_PI_2),
            UniqueCase::Five => (0.0, FRAC_PI_2 - psi2),
            UniqueCase::Six => (FRAC_PI_2 - psi1, 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Equilibrium {
    Unique {
        theta: f64,
        phi: f64,
        case: UniqueCase,
    },
    /// Every `(θ, sum − θ)` with θ in `theta_range` is an equilibrium. In GAME A
    /// coordinates `sum = π/2 − phase`.
    Continuum {
        phase: f64,
        sum: f64,
        theta_range: (f64, f64),
    },
    /// At least one player is indifferent; 1-based player indices.
    Degenerate { players: Vec<usize>, note: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NashSolution {
    pub equilibrium: Equilibrium,
    pub certificate: Option<NashCertificate>,
}

impl NashSolution {
    fn uncertified(equilibrium: Equilibrium) -> Self {
        Self {
            equilibrium,
            certificate: None,
        }
    }

    /// Representative equilibrium points: the point itself, or `samples`
    /// evenly spaced points along a continuum. Empty for degenerate outcomes.
    pub fn points(&self, samples: usize) -> Vec<(f64, f64)> {
        match &self.equilibrium {
            Equilibrium::Unique { theta, phi, .. } => vec![(*theta, *phi)],
            Equilibrium::Continuum {
                sum, theta_range, ..
            } => oracle::grid_points(theta_range.0, theta_range.1, samples.max(1))
                .into_iter()
                .map(|t| (t, sum - t))
                .collect(),
            Equilibrium::Degenerate { .. } => Vec::new(),
        }
    }

    /// Rescale every angle, e.g. by ½ to go from GAME A to physical angles.
    pub fn scaled(&self, factor: f64) -> Self {
        let equilibrium = match &self.equilibrium {
            Equilibrium::Unique { theta, phi, case } => Equilibrium::Unique {
                theta: theta * factor,
                phi: phi * factor,
                case: *case,
            },
            Equilibrium::Continuum {
                phase,
                sum,
                theta_range,
            } => Equilibrium::Continuum {
                phase: *phase,
                sum: sum * factor,
                theta_range: (theta_range.0 * factor, theta_range.1 * factor),
            },
            d @ Equilibrium::Degenerate { .. } => d.clone(),
        };
        Self {
            equilibrium,
            certificate: None,
        }
    }

    /// Attach the worst certificate over [`NashSolution::points`] (11 samples
    /// on a continuum).
    pub fn certify(
        mut self,
        game: &impl TwoPlayerPayoff,
        domain: Domain,
        epsilon: f64,
        grid_n: usize,
        lipschitz: f64,
    ) -> Self {
        self.certificate = self
            .points(11)
            .into_iter()
            .map(|pt| {
                oracle::verify_nash(game, pt, domain, epsilon, grid_n).with_lipschitz(lipschitz)
            })
            .max_by(|a, b| a.worst_gain().total_cmp(&b.worst_gain()));
        self
    }

    pub fn is_certified(&self) -> bool {
        self.certificate.as_ref().is_some_and(|c| c.pass)
    }
}

/// Closed-form equilibrium from the case table, or the continuum when the
/// phases agree within `psi_equality_tol`.
pub fn solve_closed_form(params: &GameAParams, psi_equality_tol: f64) -> Result<NashSolution> {
    let degenerate = params.degenerate_players();
    if !degenerate.is_empty() {
        let note = match degenerate.as_slice() {
            [1, 2] => "both payoffs are constant; every profile is an equilibrium".to_string(),
            [p] => {
                let other = 3 - p;
                format!(
                    "player {p} is indifferent; equilibria are all profiles where player {other} best-responds"
                )
            }
            _ => unreachable!(),
        };
        return Ok(NashSolution::uncertified(Equilibrium::Degenerate {
            players: degenerate,
            note,
        }));
    }

    let (psi1, psi2) = params.phases();
    if (psi1 - psi2).abs() <= psi_equality_tol {
        let phase = 0.5 * (psi1 + psi2);
        let sum = FRAC_PI_2 - phase;
        let lo = (-phase).max(0.0);
        let hi = (FRAC_PI_2 - phase).min(FRAC_PI_2);
        return Ok(NashSolution::uncertified(Equilibrium::Continuum {
            phase,
            sum,
            theta_range: (lo, hi),
        }));
    }

    let cases = UniqueCase::matching(psi1, psi2);
    let first = *cases
        .first()
        .expect("phase band is covered by the case table");
    let (theta, phi) = first.point(psi1, psi2);
    for &other in &cases[1..] {
        let (t, p) = other.point(psi1, psi2);
        if (t - theta).abs() > CASE_AGREEMENT_TOL || (p - phi).abs() > CASE_AGREEMENT_TOL {
            return Err(GameAError::CaseTableInconsistent {
                a: first.number(),
                b: other.number(),
            });
        }
    }
    Ok(NashSolution::uncertified(Equilibrium::Unique {
        theta,
        phi,
        case: first,
    }))
}

/// Closed form plus a certificate on the GAME A square with the default ε
/// and grid.
pub fn solve_certified(params: &GameAParams) -> Result<NashSolution> {
    Ok(solve_closed_form(params, PSI_EQUALITY_TOL)?.certify(
        params,
        Domain::square(0.0, FRAC_PI_2),
        CERTIFICATE_EPSILON,
        CERTIFICATE_GRID,
        2.0 * params.max_amplitude(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub enum IterationOutcome {
    /// A sweep changed nothing; `sweeps` counts the sweeps that moved.
    Converged {
        point: (f64, f64),
        sweeps: usize,
    },
    /// Revisited a state seen within the detection window.
    Cycle {
        period: usize,
    },
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// States after each sweep, starting with the initial state.
    pub trajectory: Vec<(f64, f64)>,
    pub outcome: IterationOutcome,
    /// ε-Nash certificate of the limit, when converged.
    pub certificate: Option<NashCertificate>,
}

const CYCLE_WINDOW: usize = 8;

/// Alternating best responses: θ ← χ(φ), then φ ← κ(θ) with the fresh θ.
pub fn iterate_best_response(
    params: &GameAParams,
    start: (f64, f64),
    max_iter: usize,
    tol: f64,
) -> Result<IterationRecord> {
    check_angle(start.0)?;
    check_angle(start.1)?;
    let degenerate = params.degenerate_players();
    if !degenerate.is_empty() {
        return Err(GameAError::Degenerate {
            players: degenerate,
        });
    }
    let mut trajectory = vec![start];
    let mut state = start;
    let mut outcome = IterationOutcome::MaxIterations;
    for sweep in 0..max_iter {
        let theta = params.best_response_p1(state.1)?;
        let phi = params.best_response_p2(theta)?;
        let next = (theta, phi);
        let moved = (next.0 - state.0).abs().max((next.1 - state.1).abs());
        if moved <= tol {
            outcome = IterationOutcome::Converged {
                point: next,
                sweeps: sweep,
            };
            break;
        }
        let window_start = trajectory.len().saturating_sub(CYCLE_WINDOW);
        if let Some(pos) = trajectory[window_start..]
            .iter()
            .position(|s| (s.0 - next.0).abs() <= tol && (s.1 - next.1).abs() <= tol)
        {
            trajectory.push(next);
            outcome = IterationOutcome::Cycle {
                period: trajectory.len() - 1 - (window_start + pos),
            };
            break;
        }
        trajectory.push(next);
        state = next;
    }
    let certificate = match outcome {
        IterationOutcome::Converged { point, .. } => Some(oracle::verify_nash(
            params,
            point,
            Domain::square(0.0, FRAC_PI_2),
            CERTIFICATE_EPSILON,
            CERTIFICATE_GRID,
        )),
        _ => None,
    };
    Ok(IterationRecord {
        trajectory,
        outcome,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, FRAC_PI_8};

    fn phases(a: f64, b: f64) -> GameAParams {
        GameAParams::from_phases(a, b).unwrap()
    }

    #[test]
    fn eval_examples() {
        let g = GameAParams::new(
            PlayerParams::new(0.0, 1.0, 0.0),
            PlayerParams::new(2.0, 1.0, FRAC_PI_2),
        )
        .unwrap();
        assert!((g.eval(FRAC_PI_4, FRAC_PI_4, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!((g.eval(0.0, 0.0, 1).unwrap() - 3.0).abs() < 1e-15);
        let g = phases(-FRAC_PI_4, 0.0);
        assert!(g.eval(FRAC_PI_8, FRAC_PI_8, 0).unwrap().abs() < 1e-15);
        assert!(matches!(
            g.eval(2.0, 0.0, 0),
            Err(GameAError::AngleOutOfDomain { .. })
        ));
    }

    #[test]
    fn params_validation() {
        assert!(GameAParams::from_phases(2.0, 0.0).is_err());
        assert!(GameAParams::new(
            PlayerParams::new(0.0, -1.0, 0.0),
            PlayerParams::new(0.0, 1.0, 0.0)
        )
        .is_err());
        let g = GameAParams::new(
            PlayerParams::new(1.0, 0.0, 0.0),
            PlayerParams::new(0.0, 1e-13, 0.0),
        )
        .unwrap();
        assert_eq!(g.degenerate_players(), vec![1, 2]);
    }

    #[test]
    fn best_response_examples() {
        assert_eq!(
            phases(-FRAC_PI_2, 0.0).best_response_p1(0.0).unwrap(),
            FRAC_PI_2
        );
        assert_eq!(phases(0.0, 0.0).best_response_p1(0.0).unwrap(), FRAC_PI_2);
        assert_eq!(
            phases(FRAC_PI_2, 0.0).best_response_p1(FRAC_PI_2).unwrap(),
            0.0
        );
    }

    #[test]
    fn best_response_matches_fine_grid() {
        let g = phases(0.0, 0.0);
        let (x, _) = oracle::grid_argmax(|t| g.payoff(0, t, 0.0), (0.0, FRAC_PI_2), 100_000);
        assert!((x - g.best_response_p1(0.0).unwrap()).abs() <= FRAC_PI_2 / 99_999.0);
    }

    #[test]
    fn best_response_signals_degeneracy() {
        let g = GameAParams::new(
            PlayerParams::new(1.0, 0.0, 0.0),
            PlayerParams::new(0.0, 1.0, 0.0),
        )
        .unwrap();
        assert!(matches!(
            g.best_response_p1(0.3),
            Err(GameAError::Degenerate { .. })
        ));
        assert!(g.best_response_p2(0.3).is_ok());
        assert!(g.best_response_map(0.1, 0.1).is_err());
    }

    #[test]
    fn best_response_map_examples() {
        assert_eq!(
            phases(0.0, 0.0).best_response_map(FRAC_PI_2, 0.0).unwrap(),
            (FRAC_PI_2, 0.0)
        );
        assert_eq!(
            phases(-FRAC_PI_4, FRAC_PI_4)
                .best_response_map(FRAC_PI_2, 0.0)
                .unwrap(),
            (FRAC_PI_2, 0.0)
        );
    }

    #[test]
    fn closed_form_examples() {
        let s = solve_closed_form(&phases(-FRAC_PI_4, FRAC_PI_4), PSI_EQUALITY_TOL).unwrap();
        assert_eq!(
            s.equilibrium,
            Equilibrium::Unique {
                theta: FRAC_PI_2,
                phi: 0.0,
                case: UniqueCase::Three
            }
        );
        let s = solve_closed_form(&phases(FRAC_PI_6, FRAC_PI_3), PSI_EQUALITY_TOL).unwrap();
        match s.equilibrium {
            Equilibrium::Unique { theta, phi, case } => {
                assert!((theta - FRAC_PI_3).abs() < 1e-15 && phi == 0.0);
                assert_eq!(case, UniqueCase::Six);
            }
            other => panic!("{other:?}"),
        }
        let s = solve_closed_form(&phases(-FRAC_PI_4, -FRAC_PI_4), PSI_EQUALITY_TOL).unwrap();
        match s.equilibrium {
            Equilibrium::Continuum {
                sum, theta_range, ..
            } => {
                assert!((sum - 3.0 * FRAC_PI_4).abs() < 1e-15);
                assert!((theta_range.0 - FRAC_PI_4).abs() < 1e-15);
                assert!((theta_range.1 - FRAC_PI_2).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_solution_names_players() {
        let g = GameAParams::new(
            PlayerParams::new(1.0, 0.0, 0.0),
            PlayerParams::new(0.0, 1.0, 0.3),
        )
        .unwrap();
        let s = solve_closed_form(&g, PSI_EQUALITY_TOL).unwrap();
        assert!(matches!(
            s.equilibrium,
            Equilibrium::Degenerate { ref players, .. } if players == &vec![1]
        ));
    }

    #[test]
    fn zero_phase_boundaries_agree() {
        for other in [0.3, -0.3, FRAC_PI_2, -FRAC_PI_2] {
            let s = solve_closed_form(&phases(0.0, other), PSI_EQUALITY_TOL).unwrap();
            let t = solve_closed_form(&phases(other, 0.0), PSI_EQUALITY_TOL).unwrap();
            assert!(matches!(s.equilibrium, Equilibrium::Unique { .. }));
            assert!(matches!(t.equilibrium, Equilibrium::Unique { .. }));
            assert!(UniqueCase::matching(0.0, other).len() == 2);
        }
        let (a, b) = (
            UniqueCase::Three.point(0.0, 0.4),
            UniqueCase::Six.point(0.0, 0.4),
        );
        assert_eq!(a, b);
        let (a, b) = (
            UniqueCase::Four.point(0.4, 0.0),
            UniqueCase::Five.point(0.4, 0.0),
        );
        assert_eq!(a, b);
    }

    #[test]
    fn unique_solutions_are_fixed_points() {
        for (a, b) in [
            (-0.3, -1.0),
            (-1.0, -0.3),
            (-0.5, 0.5),
            (0.5, -0.5),
            (1.0, 0.3),
            (0.3, 1.0),
        ] {
            let g = phases(a, b);
            let s = solve_closed_form(&g, PSI_EQUALITY_TOL).unwrap();
            let (t, p) = s.points(1)[0];
            let (gt, gp) = g.best_response_map(t, p).unwrap();
            assert!((gt - t).abs() <= 1e-9 && (gp - p).abs() <= 1e-9);
        }
    }

    #[test]
    fn iteration_examples() {
        let r =
            iterate_best_response(&phases(-FRAC_PI_4, FRAC_PI_4), (0.0, 0.0), 50, 1e-12).unwrap();
        match r.outcome {
            IterationOutcome::Converged { point, sweeps } => {
                assert_eq!(point, (FRAC_PI_2, 0.0));
                assert!(sweeps <= 3);
            }
            other => panic!("{other:?}"),
        }
        assert!(r.certificate.unwrap().pass);

        let r =
            iterate_best_response(&phases(0.0, 0.0), (FRAC_PI_4, FRAC_PI_4), 50, 1e-12).unwrap();
        assert_eq!(
            r.outcome,
            IterationOutcome::Converged {
                point: (FRAC_PI_4, FRAC_PI_4),
                sweeps: 0
            }
        );

        let g = phases(1.0, 0.3);
        let s = solve_closed_form(&g, PSI_EQUALITY_TOL).unwrap();
        let start = s.points(1)[0];
        let r = iterate_best_response(&g, start, 50, 1e-12).unwrap();
        assert!(matches!(
            r.outcome,
            IterationOutcome::Converged { sweeps: 0, .. }
        ));
    }

    #[test]
    fn iteration_rejects_degenerate_and_out_of_domain() {
        let g = GameAParams::new(
            PlayerParams::new(1.0, 0.0, 0.0),
            PlayerParams::new(0.0, 1.0, 0.0),
        )
        .unwrap();
        assert!(iterate_best_response(&g, (0.0, 0.0), 10, 1e-12).is_err());
        assert!(iterate_best_response(&phases(0.1, 0.2), (3.0, 0.0), 10, 1e-12).is_err());
    }

    #[test]
    fn slow_drift_hits_the_iteration_cap() {
        let g = phases(0.2, 0.2 + 1e-6);
        // interior sweeps move φ by Ψ₁ − Ψ₂ each time
        let r = iterate_best_response(&g, (0.0, 1.0), 20, 1e-12).unwrap();
        assert_eq!(r.outcome, IterationOutcome::MaxIterations);
        assert!(r.certificate.is_none());
    }
}
