//! N-player games over a density matrix with Hermitian payoff operators.
//!
//! A [`QuantumGame`] holds the initial state, one [`StrategySpace`] per player
//! and one payoff operator per player. A [`StrategyProfile`] selects a unitary
//! for every player; the composite unitary `U` maps the state to
//! `ρ_f = U ρ U†` and player `i` receives `Tr(P_i ρ_f)`.

use crate::qmatrix::{
    rotation, validate_density, validate_hermitian, validate_unitary, Complex64, ComplexMatrix,
    DensityMatrix, HermitianOperator, MatrixError, DEFAULT_TOLERANCE,
};

/// Largest imaginary part of `Tr(P ρ_f)` silently discarded.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-10;

/// Tolerance used by the angle-interval membership check.
const ANGLE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("a game needs at least one player")]
    NoPlayers,
    #[error("{players} strategy spaces but {payoffs} payoff operators")]
    PlayerPayoffCount { players: usize, payoffs: usize },
    #[error("{what} has dimension {actual}, game dimension is {expected}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        actual: usize,
    },
    #[error("rotation interval [{lo}, {hi}] is empty or non-finite")]
    BadInterval { lo: f64, hi: f64 },
    #[error("profile has {actual} strategies for {expected} players")]
    ProfileLength { expected: usize, actual: usize },
    #[error("player {player}: angle {angle} outside [{lo}, {hi}]")]
    AngleOutOfRange {
        player: usize,
        angle: f64,
        lo: f64,
        hi: f64,
    },
    #[error("player {player}: strategy does not match the declared strategy space")]
    StrategyKindMismatch { player: usize },
    #[error("player {player}: member index {index} out of {len}")]
    MemberOutOfRange {
        player: usize,
        index: usize,
        len: usize,
    },
    #[error("player index {player} out of {players}")]
    PlayerIndex { player: usize, players: usize },
    #[error("player {player}: target factor {target} out of {factors}")]
    BadTarget {
        player: usize,
        target: usize,
        factors: usize,
    },
    #[error("factor dimensions {factors:?} do not multiply to {dimension}")]
    BadFactors {
        factors: Vec<usize>,
        dimension: usize,
    },
    #[error("dynamic ordering {0:?} is not a permutation of the players")]
    BadOrdering(Vec<usize>),
    #[error("payoff of player {player} has imaginary residue {residue:e}")]
    ImaginaryResidue { player: usize, residue: f64 },
    #[error("{coefficients} coefficients for {basis} basis states")]
    CoefficientMismatch { coefficients: usize, basis: usize },
    #[error("basis is not orthonormal: Gram deviation {deviation:e}")]
    NonOrthonormalBasis { deviation: f64 },
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, EngineError>;

#[derive(Debug, Clone, PartialEq)]
pub enum StrategyKind {
    /// Planar rotations `U(θ)` (2×2) with θ in `[lo, hi]`.
    Rotation { lo: f64, hi: f64 },
    /// An explicit finite menu of unitaries.
    Finite(Vec<ComplexMatrix>),
    /// Any unitary of the right size.
    Unrestricted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategySpace {
    kind: StrategyKind,
    target: Option<usize>,
}

impl StrategySpace {
    pub fn rotation(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(EngineError::BadInterval { lo, hi });
        }
        Ok(Self {
            kind: StrategyKind::Rotation { lo, hi },
            target: None,
        })
    }

    pub fn finite(members: Vec<ComplexMatrix>) -> Result<Self> {
        for m in &members {
            validate_unitary(m, DEFAULT_TOLERANCE)?;
        }
        Ok(Self {
            kind: StrategyKind::Finite(members),
            target: None,
        })
    }

    pub fn unrestricted() -> Self {
        Self {
            kind: StrategyKind::Unrestricted,
            target: None,
        }
    }

    /// Act locally on tensor factor `factor` instead of the whole space.
    pub fn on_factor(mut self, factor: usize) -> Self {
        self.target = Some(factor);
        self
    }

    pub fn kind(&self) -> &StrategyKind {
        &self.kind
    }

    pub fn target(&self) -> Option<usize> {
        self.target
    }

    /// Angle interval for rotation spaces.
    pub fn interval(&self) -> Option<(f64, f64)> {
        match self.kind {
            StrategyKind::Rotation { lo, hi } => Some((lo, hi)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    Angle(f64),
    Member(usize),
    Unitary(ComplexMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile(pub Vec<Strategy>);

impl StrategyProfile {
    pub fn angles(angles: &[f64]) -> Self {
        Self(angles.iter().copied().map(Strategy::Angle).collect())
    }
}

/// Order in which the players' operators are composed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ordering {
    /// The product `U_1 U_2 ⋯ U_N` as written.
    Static,
    /// Players act one after another in the listed order, so the composite is
    /// `U_last ⋯ U_first`.
    Dynamic(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumGame {
    dimension: usize,
    factors: Vec<usize>,
    initial_state: DensityMatrix,
    players: Vec<StrategySpace>,
    payoffs: Vec<HermitianOperator>,
    ordering: Ordering,
}

impl QuantumGame {
    pub fn new(
        initial_state: DensityMatrix,
        players: Vec<StrategySpace>,
        payoffs: Vec<HermitianOperator>,
    ) -> Result<Self> {
        if players.is_empty() {
            return Err(EngineError::NoPlayers);
        }
        if players.len() != payoffs.len() {
            return Err(EngineError::PlayerPayoffCount {
                players: players.len(),
                payoffs: payoffs.len(),
            });
        }
        let dimension = initial_state.dim();
        for (i, p) in payoffs.iter().enumerate() {
            if p.dim() != dimension {
                return Err(EngineError::DimensionMismatch {
                    what: format!("payoff operator {}", i + 1),
                    expected: dimension,
                    actual: p.dim(),
                });
            }
        }
        let game = Self {
            dimension,
            factors: vec![dimension],
            initial_state,
            players,
            payoffs,
            ordering: Ordering::Static,
        };
        game.check_spaces(false)?;
        Ok(game)
    }

    /// Declare the tensor-factor structure used by local strategy spaces.
    pub fn with_factors(mut self, factors: Vec<usize>) -> Result<Self> {
        if factors.iter().product::<usize>() != self.dimension || factors.is_empty() {
            return Err(EngineError::BadFactors {
                factors,
                dimension: self.dimension,
            });
        }
        self.factors = factors;
        self.check_spaces(true)?;
        Ok(self)
    }

    pub fn with_ordering(mut self, ordering: Ordering) -> Result<Self> {
        if let Ordering::Dynamic(order) = &ordering {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != (0..self.players.len()).collect::<Vec<_>>() {
                return Err(EngineError::BadOrdering(order.clone()));
            }
        }
        self.ordering = ordering;
        Ok(self)
    }

    fn operator_dim(&self, player: usize) -> Result<usize> {
        match self.players[player].target {
            None => Ok(self.dimension),
            Some(t) => self.factors.get(t).copied().ok_or(EngineError::BadTarget {
                player,
                target: t,
                factors: self.factors.len(),
            }),
        }
    }

    /// Local spaces are only checked once the factor structure is declared.
    fn check_spaces(&self, include_local: bool) -> Result<()> {
        for (k, space) in self.players.iter().enumerate() {
            if space.target.is_some() && !include_local {
                continue;
            }
            let d = self.operator_dim(k)?;
            let check = |actual: usize| {
                if actual == d {
                    Ok(())
                } else {
                    Err(EngineError::DimensionMismatch {
                        what: format!("strategy space of player {}", k + 1),
                        expected: d,
                        actual,
                    })
                }
            };
            match &space.kind {
                StrategyKind::Rotation { .. } => check(2)?,
                StrategyKind::Finite(ms) => {
                    for m in ms {
                        check(m.rows())?;
                    }
                }
                StrategyKind::Unrestricted => {}
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn initial_state(&self) -> &DensityMatrix {
        &self.initial_state
    }

    pub fn players(&self) -> &[StrategySpace] {
        &self.players
    }

    pub fn payoff_operators(&self) -> &[HermitianOperator] {
        &self.payoffs
    }

    pub fn ordering(&self) -> &Ordering {
        &self.ordering
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    /// Same game with different payoff operators.
    pub fn with_payoffs(&self, payoffs: Vec<HermitianOperator>) -> Result<Self> {
        let mut g = Self::new(self.initial_state.clone(), self.players.clone(), payoffs)?
            .with_factors(self.factors.clone())?;
        g.ordering = self.ordering.clone();
        Ok(g)
    }

    /// Lift a local operator acting on tensor factor `factor` to the full space.
    pub fn embed(&self, op: &ComplexMatrix, factor: usize) -> ComplexMatrix {
        let left: usize = self.factors[..factor].iter().product();
        let right: usize = self.factors[factor + 1..].iter().product();
        ComplexMatrix::identity(left)
            .tensor(op)
            .tensor(&ComplexMatrix::identity(right))
    }

    /// The operator player `player` applies under `strategy`, on the full space.
    pub fn player_operator(&self, player: usize, strategy: &Strategy) -> Result<ComplexMatrix> {
        let space = &self.players[player];
        let local = match (&space.kind, strategy) {
            (StrategyKind::Rotation { lo, hi }, Strategy::Angle(a)) => {
                if !a.is_finite() || *a < lo - ANGLE_SLACK || *a > hi + ANGLE_SLACK {
                    return Err(EngineError::AngleOutOfRange {
                        player,
                        angle: *a,
                        lo: *lo,
                        hi: *hi,
                    });
                }
                rotation(*a)
            }
            (StrategyKind::Finite(ms), Strategy::Member(i)) => {
                ms.get(*i).cloned().ok_or(EngineError::MemberOutOfRange {
                    player,
                    index: *i,
                    len: ms.len(),
                })?
            }
            (StrategyKind::Unrestricted, Strategy::Unitary(u)) => {
                validate_unitary(u, DEFAULT_TOLERANCE)?;
                let d = self.operator_dim(player)?;
                if u.rows() != d {
                    return Err(EngineError::DimensionMismatch {
                        what: format!("unitary of player {}", player + 1),
                        expected: d,
                        actual: u.rows(),
                    });
                }
                u.clone()
            }
            _ => return Err(EngineError::StrategyKindMismatch { player }),
        };
        Ok(match space.target {
            Some(t) => self.embed(&local, t),
            None => local,
        })
    }

    fn check_profile(&self, profile: &StrategyProfile) -> Result<()> {
        if profile.0.len() != self.players.len() {
            return Err(EngineError::ProfileLength {
                expected: self.players.len(),
                actual: profile.0.len(),
            });
        }
        Ok(())
    }

    fn compose(&self, ops: &[ComplexMatrix], order: &[usize]) -> Result<ComplexMatrix> {
        let mut u = ComplexMatrix::identity(self.dimension);
        for &k in order {
            u = u.multiply(&ops[k])?;
        }
        Ok(u)
    }

    fn application_order(&self) -> Vec<usize> {
        match &self.ordering {
            Ordering::Static => (0..self.players.len()).collect(),
            // U_last ⋯ U_first: multiply left to right in reverse action order
            Ordering::Dynamic(order) => order.iter().rev().copied().collect(),
        }
    }

    /// Composite unitary of a profile under the game's ordering.
    pub fn composite_unitary(&self, profile: &StrategyProfile) -> Result<ComplexMatrix> {
        self.check_profile(profile)?;
        let ops = profile
            .0
            .iter()
            .enumerate()
            .map(|(k, s)| self.player_operator(k, s))
            .collect::<Result<Vec<_>>>()?;
        self.compose(&ops, &self.application_order())
    }

    /// `ρ_f = U ρ U†`, validated as a density matrix.
    pub fn final_state(&self, profile: &StrategyProfile) -> Result<DensityMatrix> {
        let u = self.composite_unitary(profile)?;
        let rho = self.initial_state.matrix().conjugate_by(&u)?;
        Ok(validate_density(&rho, self.initial_state.tolerance())?)
    }

    fn trace_payoff(&self, rho: &ComplexMatrix, player: usize) -> Result<f64> {
        let value = expectation(self.payoffs[player].matrix(), rho)?;
        if value.im.abs() > IMAGINARY_RESIDUE_TOL {
            return Err(EngineError::ImaginaryResidue {
                player,
                residue: value.im.abs(),
            });
        }
        Ok(value.re)
    }

    /// `Tr(P_player ρ_f)`.
    pub fn payoff(&self, profile: &StrategyProfile, player: usize) -> Result<f64> {
        if player >= self.players.len() {
            return Err(EngineError::PlayerIndex {
                player,
                players: self.players.len(),
            });
        }
        let u = self.composite_unitary(profile)?;
        let rho = self.initial_state.matrix().conjugate_by(&u)?;
        self.trace_payoff(&rho, player)
    }

    /// Every player's payoff from a single final-state computation.
    pub fn payoffs(&self, profile: &StrategyProfile) -> Result<Vec<f64>> {
        let u = self.composite_unitary(profile)?;
        let rho = self.initial_state.matrix().conjugate_by(&u)?;
        (0..self.players.len())
            .map(|i| self.trace_payoff(&rho, i))
            .collect()
    }

    /// `max |ρ_f(declared order) - ρ_f(reversed order)|`; zero whenever the
    /// players' operators commute.
    pub fn ordering_sensitivity(&self, profile: &StrategyProfile) -> Result<f64> {
        self.check_profile(profile)?;
        let ops = profile
            .0
            .iter()
            .enumerate()
            .map(|(k, s)| self.player_operator(k, s))
            .collect::<Result<Vec<_>>>()?;
        let order = self.application_order();
        let reversed: Vec<usize> = order.iter().rev().copied().collect();
        let rho = self.initial_state.matrix();
        let a = rho.conjugate_by(&self.compose(&ops, &order)?)?;
        let b = rho.conjugate_by(&self.compose(&ops, &reversed)?)?;
        Ok(a.max_abs_diff(&b)?)
    }
}

/// `Tr(P ρ)` without forming the product matrix.
pub fn expectation(p: &ComplexMatrix, rho: &ComplexMatrix) -> Result<Complex64> {
    if p.shape() != rho.shape() || !p.is_square() {
        return Err(MatrixError::DimensionMismatch {
            op: "expectation",
            left: p.shape(),
            right: rho.shape(),
        }
        .into());
    }
    let n = p.rows();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        for l in 0..n {
            acc += p[(k, l)] * rho[(l, k)];
        }
    }
    Ok(acc)
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Product basis `|σ_{j1}⟩⊗⋯⊗|σ_{jN}⟩` in row-major multi-index order, so a
/// flattened coefficient tensor `C_{j1…jN}` lines up with it.
pub fn product_basis(local_bases: &[Vec<Vec<Complex64>>]) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0, 0.0)]];
    for local in local_bases {
        out = out
            .iter()
            .flat_map(|prefix| {
                local
                    .iter()
                    .map(move |v| crate::qmatrix::tensor_vectors(prefix, v))
            })
            .collect();
    }
    out
}

fn check_basis(coefficients: &[f64], basis: &[Vec<Complex64>]) -> Result<()> {
    if coefficients.len() != basis.len() {
        return Err(EngineError::CoefficientMismatch {
            coefficients: coefficients.len(),
            basis: basis.len(),
        });
    }
    let mut deviation: f64 = 0.0;
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate() {
            if u.len() != v.len() {
                return Err(EngineError::NonOrthonormalBasis {
                    deviation: f64::INFINITY,
                });
            }
            let target = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((inner(u, v) - target).norm());
        }
    }
    if deviation > 1e-10 {
        return Err(EngineError::NonOrthonormalBasis { deviation });
    }
    Ok(())
}

/// Payoff operator `Σ_j C_j |σ_j⟩⟨σ_j|` from real weights on an orthonormal basis.
pub fn projection_payoff(
    coefficients: &[f64],
    basis: &[Vec<Complex64>],
) -> Result<HermitianOperator> {
    check_basis(coefficients, basis)?;
    let dim = basis.first().map_or(0, Vec::len);
    let mut p = ComplexMatrix::zeros(dim, dim);
    for (c, v) in coefficients.iter().zip(basis) {
        p = &p + &ComplexMatrix::projector(v).scale_real(*c);
    }
    Ok(validate_hermitian(&p, DEFAULT_TOLERANCE)?)
}

/// Probability-weighted payoff `Σ_j C_j |⟨σ_j|E⟩|²` of a final pure state.
pub fn probability_payoff(
    coefficients: &[f64],
    basis: &[Vec<Complex64>],
    final_vector: &[Complex64],
) -> Result<f64> {
    check_basis(coefficients, basis)?;
    Ok(coefficients
        .iter()
        .zip(basis)
        .map(|(c, v)| c * inner(v, final_vector).norm_sqr())
        .sum())
}

/// Commutator norms deciding whether a two-player game is classical in
/// disguise.
#[derive(Debug, Clone, PartialEq)]
pub struct NonTriviality {
    /// `max |[P_1, P_2]|`.
    pub payoff_commutator: f64,
    /// Per payoff operator: min and max over sampled strategy operators of
    /// `max |[P_i, U]|`.
    pub strategy_commutator: Vec<(f64, f64)>,
    pub payoffs_commute: bool,
    /// Per payoff operator: commutes with every sampled strategy operator.
    pub commutes_with_strategies: Vec<bool>,
    pub trivial: bool,
}

pub const TRIVIALITY_TOL: f64 = 1e-10;

pub fn non_triviality(game: &QuantumGame, sample_angles: &[f64]) -> Result<NonTriviality> {
    if game.num_players() != 2 {
        return Err(EngineError::Unsupported(
            "non-triviality is defined for two-player games".into(),
        ));
    }
    let [p1, p2] = [&game.payoffs[0], &game.payoffs[1]];
    let payoff_commutator = p1.matrix().commutator(p2.matrix())?.max_abs();

    let mut strategy_ops = Vec::new();
    for (k, space) in game.players.iter().enumerate() {
        match &space.kind {
            StrategyKind::Rotation { .. } => {
                for &a in sample_angles {
                    let local = rotation(a);
                    strategy_ops.push(match space.target {
                        Some(t) => game.embed(&local, t),
                        None => local,
                    });
                }
            }
            StrategyKind::Finite(ms) => {
                for i in 0..ms.len() {
                    strategy_ops.push(game.player_operator(k, &Strategy::Member(i))?);
                }
            }
            StrategyKind::Unrestricted => {}
        }
    }

    let mut strategy_commutator = Vec::new();
    for p in &game.payoffs {
        let norms = strategy_ops
            .iter()
            .map(|u| Ok(p.matrix().commutator(u)?.max_abs()))
            .collect::<Result<Vec<f64>>>()?;
        let min = norms.iter().copied().fold(f64::INFINITY, f64::min);
        let max = norms.iter().copied().fold(0.0, f64::max);
        strategy_commutator.push((min, max));
    }
    let payoffs_commute = payoff_commutator <= TRIVIALITY_TOL;
    let commutes_with_strategies: Vec<bool> = strategy_commutator
        .iter()
        .map(|&(_, max)| max <= TRIVIALITY_TOL)
        .collect();
    let trivial = payoffs_commute || commutes_with_strategies.iter().any(|&b| b);
    Ok(NonTriviality {
        payoff_commutator,
        strategy_commutator,
        payoffs_commute,
        commutes_with_strategies,
        trivial,
    })
}
