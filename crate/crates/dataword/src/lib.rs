//! Decision procedures for Büchi automata and temporal logic over data ω-words.
//!
//! A data ω-word is an infinite word in which every position carries a label
//! from a finite alphabet and a data value from an infinite domain. This crate
//! implements:
//!
//! * finite-word NFAs, Büchi automata and their products ([`automata`]),
//! * existential Presburger formulas over Parikh images and the emptiness
//!   check for Presburger automata ([`presburger`]),
//! * data words, key/inclusion/denial constraints and their class-partition
//!   machinery ([`data`]),
//! * emptiness of Büchi automata with data constraints, including the key-free
//!   fast path and witness synthesis ([`adc`]),
//! * profiles, zones, zonal automata and the locally-different / zonal
//!   emptiness procedures ([`profile`]),
//! * the data-LTL dialect `LTL[Dw, Ds, Xs, Xd]`: parsing, lasso evaluation,
//!   normal form, automaton translations and satisfiability ([`ltl`]),
//! * a JSON problem-file format and reporting layer used by the `dataword`
//!   binary ([`cli`]).
//!
//! Every procedure is deterministic: identical inputs yield identical verdicts,
//! witnesses and reports. Witnesses are *recipes* — an extended-alphabet lasso
//! plus data-assignment rules — which concretize to arbitrarily long prefixes of
//! an accepted data ω-word and can be replayed and checked independently.
//!
//! The `examples/` directory of this crate walks through each capability; see
//! the README for an overview.

pub mod automata;
pub mod cli;
pub mod data;
pub mod ltl;
pub mod presburger;
pub mod profile;
pub mod rng;
pub(crate) mod simplex;

pub mod adc;

pub use automata::{Alphabet, BuchiAutomaton, Lasso, Nfa, Symbol, TransitionSystem};
pub use data::{Constraint, ConstraintSet, DataValue, FiniteDataWord, LassoDataWord};
