//! Game definition files.
//!
//! A definition is a TOML document describing one game. Matrices are nested
//! arrays of entries, each a bare real number or an `[re, im]` pair:
//!
//! ```toml
//! model = "one_qubit_pure"
//! P1 = [[0, 1], [1, 0]]
//! P2 = [[1, 0], [0, -1]]
//! ```
//!
//! Custom games also declare `dimension`, `initial_state`, optional
//! `factors` and `order`, and one `[[players]]` table per player.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::engine::{Ordering, QuantumGame, StrategySpace};
use crate::game_a::{CERTIFICATE_EPSILON, CERTIFICATE_GRID, PSI_EQUALITY_TOL};
use crate::qmatrix::{
    validate_density, validate_hermitian, HermitianOperator, MatrixLiteral, DEFAULT_TOLERANCE,
};
use crate::reductions::Model;
use crate::sampling::DEFAULT_SEED;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DefinitionError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid definition: {0}")]
    Invalid(String),
}

type Result<T> = std::result::Result<T, DefinitionError>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(DefinitionError::Invalid(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    OneQubitPure,
    OneQubitMixed,
    TwoQubitBell,
    Custom,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::OneQubitPure => "one_qubit_pure",
            ModelKind::OneQubitMixed => "one_qubit_mixed",
            ModelKind::TwoQubitBell => "two_qubit_bell",
            ModelKind::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlayerKind {
    Rotation,
    Finite,
}

/// One `[[players]]` table of a custom game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerSpec {
    pub kind: PlayerKind,
    /// Rotation interval; defaults to `[0, π/4]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    /// Tensor factor the player acts on; the whole space when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<usize>,
    /// Members of a finite strategy set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitaries: Option<Vec<MatrixLiteral>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Hermitian, density and unitary validation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<f64>,
    /// Phases closer than this are treated as equal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_equality: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate_epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate_grid: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDefinition {
    pub model: ModelKind,
    /// Mixing probability of `diag(p, 1 - p)`; mixed model only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(rename = "P1")]
    pub p1: MatrixLiteral,
    #[serde(rename = "P2")]
    pub p2: MatrixLiteral,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<MatrixLiteral>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<usize>>,
    /// Players act one after another in this order; the written product
    /// `U1 U2` is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub players: Option<Vec<PlayerSpec>>,
}

/// A definition turned into an engine game.
#[derive(Debug, Clone, PartialEq)]
pub struct BuiltGame {
    pub model: Model,
    pub game: QuantumGame,
}

impl GameDefinition {
    /// Parse and validate a definition document.
    pub fn parse(text: &str) -> Result<Self> {
        let def: Self = toml::from_str(text).map_err(|e| DefinitionError::Parse(e.to_string()))?;
        def.build()?;
        Ok(def)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("definitions serialize")
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    fn tol(&self) -> &Tolerances {
        const NONE: &Tolerances = &Tolerances {
            validation: None,
            psi_equality: None,
            certificate_epsilon: None,
            certificate_grid: None,
        };
        self.tolerances.as_ref().unwrap_or(NONE)
    }

    pub fn validation_tolerance(&self) -> f64 {
        self.tol().validation.unwrap_or(DEFAULT_TOLERANCE)
    }

    pub fn psi_equality_tolerance(&self) -> f64 {
        self.tol().psi_equality.unwrap_or(PSI_EQUALITY_TOL)
    }

    pub fn certificate_epsilon(&self) -> f64 {
        self.tol()
            .certificate_epsilon
            .unwrap_or(CERTIFICATE_EPSILON)
    }

    pub fn certificate_grid(&self) -> usize {
        self.tol().certificate_grid.unwrap_or(CERTIFICATE_GRID)
    }

    fn payoff(&self, name: &str, lit: &MatrixLiteral) -> Result<HermitianOperator> {
        let m = lit
            .to_matrix()
            .map_err(|e| DefinitionError::Invalid(format!("{name}: {e}")))?;
        validate_hermitian(&m, self.validation_tolerance())
            .map_err(|e| DefinitionError::Invalid(format!("{name}: {e}")))
    }

    fn check_tolerances(&self) -> Result<()> {
        let t = self.tol();
        for (name, v) in [
            ("validation", t.validation),
            ("psi_equality", t.psi_equality),
            ("certificate_epsilon", t.certificate_epsilon),
        ] {
            if let Some(v) = v {
                if !(v.is_finite() && v >= 0.0) {
                    return invalid(format!(
                        "tolerances.{name} must be a finite non-negative number"
                    ));
                }
            }
        }
        if t.certificate_grid == Some(0) || t.certificate_grid == Some(1) {
            return invalid("tolerances.certificate_grid must be at least 2");
        }
        Ok(())
    }

    fn reject_custom_fields(&self) -> Result<()> {
        let present = [
            ("dimension", self.dimension.is_some()),
            ("initial_state", self.initial_state.is_some()),
            ("factors", self.factors.is_some()),
            ("order", self.order.is_some()),
            ("players", self.players.is_some()),
        ];
        for (name, is) in present {
            if is {
                return invalid(format!("`{name}` is only allowed for model = \"custom\""));
            }
        }
        Ok(())
    }

    /// Validate every invariant and build the engine game.
    pub fn build(&self) -> Result<BuiltGame> {
        self.check_tolerances()?;
        let p1 = self.payoff("P1", &self.p1)?;
        let p2 = self.payoff("P2", &self.p2)?;
        if self.p.is_some() && self.model != ModelKind::OneQubitMixed {
            return invalid("`p` is only allowed for model = \"one_qubit_mixed\"");
        }
        let model = match self.model {
            ModelKind::OneQubitPure => Model::OneQubitPure,
            ModelKind::OneQubitMixed => {
                let Some(p) = self.p else {
                    return invalid("model = \"one_qubit_mixed\" requires `p`");
                };
                if !(0.0..=1.0).contains(&p) {
                    return invalid(format!("p = {p} is outside the range [0, 1]"));
                }
                Model::OneQubitMixed { p }
            }
            ModelKind::TwoQubitBell => Model::TwoQubitBell,
            ModelKind::Custom => return self.build_custom(p1, p2),
        };
        self.reject_custom_fields()?;
        let game = model
            .game(&p1, &p2)
            .map_err(|e| DefinitionError::Invalid(e.to_string()))?;
        Ok(BuiltGame { model, game })
    }

    fn build_custom(&self, p1: HermitianOperator, p2: HermitianOperator) -> Result<BuiltGame> {
        let tol = self.validation_tolerance();
        let Some(dimension) = self.dimension else {
            return invalid("model = \"custom\" requires `dimension`");
        };
        let Some(state) = &self.initial_state else {
            return invalid("model = \"custom\" requires `initial_state`");
        };
        let Some(specs) = &self.players else {
            return invalid("model = \"custom\" requires `[[players]]` tables");
        };
        if specs.len() != 2 {
            return invalid(format!(
                "custom games have 2 players (P1, P2), got {}",
                specs.len()
            ));
        }
        let rho = state
            .to_matrix()
            .map_err(|e| DefinitionError::Invalid(format!("initial_state: {e}")))?;
        if rho.shape() != (dimension, dimension) {
            return invalid(format!(
                "initial_state is {}x{}, dimension is {dimension}",
                rho.rows(),
                rho.cols()
            ));
        }
        for (name, p) in [("P1", &p1), ("P2", &p2)] {
            if p.dim() != dimension {
                return invalid(format!(
                    "{name} is {0}x{0}, dimension is {dimension}",
                    p.dim()
                ));
            }
        }
        let rho = validate_density(&rho, tol)
            .map_err(|e| DefinitionError::Invalid(format!("initial_state: {e}")))?;
        let mut players = Vec::with_capacity(specs.len());
        for (k, spec) in specs.iter().enumerate() {
            players.push(player_space(k + 1, spec, tol)?);
        }
        let err = |e: crate::engine::EngineError| DefinitionError::Invalid(e.to_string());
        let mut game = QuantumGame::new(rho, players, vec![p1, p2]).map_err(err)?;
        if let Some(factors) = &self.factors {
            game = game.with_factors(factors.clone()).map_err(err)?;
        } else if specs.iter().any(|s| s.target.is_some()) {
            return invalid("players with a `target` need `factors`");
        }
        if let Some(order) = &self.order {
            game = game
                .with_ordering(Ordering::Dynamic(order.clone()))
                .map_err(err)?;
        }
        Ok(BuiltGame {
            model: Model::Custom,
            game,
        })
    }
}

fn player_space(k: usize, spec: &PlayerSpec, tol: f64) -> Result<StrategySpace> {
    let space = match spec.kind {
        PlayerKind::Rotation => {
            if spec.unitaries.is_some() {
                return invalid(format!("player {k}: rotation players take no `unitaries`"));
            }
            let lo = spec.lo.unwrap_or(0.0);
            let hi = spec.hi.unwrap_or(FRAC_PI_4);
            StrategySpace::rotation(lo, hi)
                .map_err(|e| DefinitionError::Invalid(format!("player {k}: {e}")))?
        }
        PlayerKind::Finite => {
            if spec.lo.is_some() || spec.hi.is_some() {
                return invalid(format!("player {k}: finite players take no `lo`/`hi`"));
            }
            let Some(lits) = &spec.unitaries else {
                return invalid(format!("player {k}: finite players need `unitaries`"));
            };
            let mut members = Vec::with_capacity(lits.len());
            for (j, lit) in lits.iter().enumerate() {
                let m = lit.to_matrix().map_err(|e| {
                    DefinitionError::Invalid(format!("player {k} unitary {j}: {e}"))
                })?;
                crate::qmatrix::validate_unitary(&m, tol).map_err(|e| {
                    DefinitionError::Invalid(format!("player {k} unitary {j}: {e}"))
                })?;
                members.push(m);
            }
            StrategySpace::finite(members)
                .map_err(|e| DefinitionError::Invalid(format!("player {k}: {e}")))?
        }
    };
    Ok(match spec.target {
        Some(t) => space.on_factor(t),
        None => space,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PURE: &str = r#"
model = "one_qubit_pure"
P1 = [[0, 1], [1, 0]]
P2 = [[1, 0], [0, -1]]
"#;

    #[test]
    fn minimal_pure_definition() {
        let def = GameDefinition::parse(PURE).unwrap();
        assert_eq!(def.model, ModelKind::OneQubitPure);
        assert_eq!(def.build().unwrap().model, Model::OneQubitPure);
    }

    #[test]
    fn two_qubit_needs_four_by_four() {
        let text = PURE.replace("one_qubit_pure", "two_qubit_bell");
        let err = GameDefinition::parse(&text).unwrap_err();
        assert!(
            matches!(err, DefinitionError::Invalid(ref m) if m.contains("4x4")),
            "{err}"
        );
    }

    #[test]
    fn mixed_range_error() {
        let text = PURE.replace("one_qubit_pure", "one_qubit_mixed") + "p = 1.2\n";
        let err = GameDefinition::parse(&text).unwrap_err();
        assert!(
            matches!(err, DefinitionError::Invalid(ref m) if m.contains("[0, 1]")),
            "{err}"
        );
        let text = PURE.replace("one_qubit_pure", "one_qubit_mixed");
        assert!(GameDefinition::parse(&text).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = GameDefinition::parse(&format!("{PURE}colour = 3\n")).unwrap_err();
        assert!(
            matches!(err, DefinitionError::Parse(ref m) if m.contains("colour")),
            "{err}"
        );
    }

    #[test]
    fn parse_errors_carry_a_position() {
        let err = GameDefinition::parse("model = \"one_qubit_pure\"\nP1 = [[0, 1]\n").unwrap_err();
        let DefinitionError::Parse(msg) = err else {
            panic!()
        };
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn non_hermitian_payoff_is_named() {
        let text = PURE.replace("[[0, 1], [1, 0]]", "[[0, 1], [0, 0]]");
        let err = GameDefinition::parse(&text).unwrap_err();
        assert!(err.to_string().contains("P1: not Hermitian"), "{err}");
    }

    #[test]
    fn complex_entries_and_round_trip() {
        let text = r#"
model = "one_qubit_mixed"
p = 0.25
P1 = [[0, [0, -1]], [[0, 1], 0]]
P2 = [[2, 0], [0, 0]]
seed = 9
[tolerances]
certificate_grid = 200
"#;
        let def = GameDefinition::parse(text).unwrap();
        let again = GameDefinition::parse(&def.to_toml()).unwrap();
        assert_eq!(def, again);
        assert_eq!(def.certificate_grid(), 200);
        assert_eq!(def.seed(), 9);
    }

    #[test]
    fn custom_definition() {
        let text = r#"
model = "custom"
dimension = 4
factors = [2, 2]
initial_state = [[0, 0, 0, 0], [0, 0.5, 0.5, 0], [0, 0.5, 0.5, 0], [0, 0, 0, 0]]
P1 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
P2 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]

[[players]]
kind = "rotation"
target = 0

[[players]]
kind = "finite"
target = 1
unitaries = [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]
"#;
        let def = GameDefinition::parse(text).unwrap();
        let built = def.build().unwrap();
        assert_eq!(built.game.factors(), &[2, 2]);
        assert_eq!(GameDefinition::parse(&def.to_toml()).unwrap(), def);
    }

    #[test]
    fn custom_fields_belong_to_custom() {
        let err = GameDefinition::parse(&format!("{PURE}dimension = 2\n")).unwrap_err();
        assert!(err.to_string().contains("dimension"), "{err}");
    }
}
