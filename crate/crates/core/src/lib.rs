//! A higher-order saturation prover.
//!
//! The crate is layered bottom-up: [`term`] (types, terms, normalization,
//! substitution), [`tptp`] (THF0/FOF/CNF front-end), [`clausify`] and
//! [`clause`], [`unify`] (extensional preunification), [`calculus`] (the
//! inference rules), [`fol`] (translation to first-order TPTP and the
//! bundled first-order prover), [`atp`] (external prover interface) and
//! [`search`] (main loop, scheduling, finite-model oracle).

pub mod atp;
pub mod calculus;
pub mod clause;
pub mod clausify;
pub mod fol;
pub mod model;
pub mod search;
pub mod term;
pub mod tptp;
pub mod unify;
