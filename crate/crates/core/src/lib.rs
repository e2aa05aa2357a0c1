//! Higher-order modal logic over finite Kripke models.
//!
//! Theories are written in a small line-oriented language ([`surface`]),
//! evaluated exhaustively over explicit finite models ([`semantics`]) and
//! compiled to propositional constraints for bounded model finding
//! ([`grounder`]).

pub mod analysis;
pub mod grounder;
pub mod semantics;
pub mod surface;
pub mod theories;
