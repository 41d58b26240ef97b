//! Quantum games with coherent payoff operators.
//!
//! Players apply unitaries to a shared state `ρ` and player `i` is paid
//! `Tr(P_i U ρ U†)`. The crate provides:
//!
//! - [`qmatrix`]: dense complex matrices and validated quantum objects;
//! - [`engine`]: N-player games, strategy spaces and trace payoffs;
//! - [`game_a`]: the two-player game `c_i + q_i sin(θ + φ + Ψ_i)` and its
//!   closed-form Nash equilibria;
//! - [`reductions`]: qubit games whose payoffs reduce to GAME A;
//! - [`oracle`]: grid certificates, scans and sinusoid fits that check the
//!   closed forms without using them;
//! - [`cli`]: definition files and the `qgames` command.
//!
//! ```
//! use qgames::qmatrix::{validate_hermitian, ComplexMatrix, DEFAULT_TOLERANCE};
//! use qgames::reductions::{reduce_one_qubit_pure, solve_physical};
//!
//! let p1 = validate_hermitian(&-&ComplexMatrix::pauli_z(), DEFAULT_TOLERANCE).unwrap();
//! let p2 = validate_hermitian(&ComplexMatrix::pauli_x(), DEFAULT_TOLERANCE).unwrap();
//! let report = reduce_one_qubit_pure(&p1, &p2).unwrap();
//! assert!(solve_physical(&report).unwrap().is_certified());
//! ```

pub mod cli;
pub mod engine;
pub mod game_a;
pub mod oracle;
pub mod qmatrix;
pub mod reductions;
pub mod sampling;
pub mod suite;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    mod matrices {}
    #[doc = include_str!("../../../book/src/engine.md")]
    mod engine {}
    #[doc = include_str!("../../../book/src/game_a.md")]
    mod game_a {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/reductions.md")]
    mod reductions {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
