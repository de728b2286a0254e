//! Greedy sequential-arrival profiles versus pure Nash equilibria in
//! symmetric monotone congestion games.
//!
//! The library decides tree representability of game forms, builds R-tree
//! representations, enumerates greedy profiles and equilibria exactly,
//! recovers greedy arrival orders from equilibria, and synthesizes verified
//! counterexample games for forms that are not tree representable.
//!
//! Games are generic over the payoff scalar ([`Payoff`]); the aliases below
//! fix it to exact rationals, which is what the file format and the CLI use.

pub mod catalog;
pub mod cli;
pub mod dynamics;
pub mod equilibrium;
pub mod error;
pub mod form;
pub mod io;
pub mod model;
pub mod scalar;
pub mod synthesis;

pub use dynamics::{
    extract_greedy_order, greedy_certificates, greedy_enumerate, greedy_run, is_greedy_profile, response_dynamics,
    ArrivalOrder, DynamicsTrace, MoverPolicy, ResponseMode, Step, TieBreak,
};
pub use equilibrium::{
    compare, enumerate_nash, enumerate_strong, is_nash, is_strong_equilibrium, Classification, DeviationWitness,
    SolutionReport,
};
pub use error::{Error, Result};
pub use form::{
    build_r_tree, find_bad_configuration, induced_strategies, is_tree_representable, random_tree_form,
    verify_representation, BadConfiguration, RTree,
};
pub use io::{parse_game_file, serialize_form, serialize_game, GameFile, ParseError};
pub use model::{
    canonicalize, CanonicalProfile, CongestionGame, CongestionVector, GameForm, Strategy, StrategyProfile,
};
pub use scalar::Payoff;
pub use synthesis::{synthesize_counterexample, validate_certificate, ConstructionCase, CounterexampleCertificate};

/// Exact payoff scalar.
pub type Rational = num_rational::BigRational;
/// Exact payoff scalar on machine integers; faster, overflows on large tables.
pub type Rational64 = num_rational::Rational64;

/// A game with exact rational payoffs.
pub type Game = CongestionGame<Rational>;
/// A game with `i64`-backed rational payoffs.
pub type Game64 = CongestionGame<Rational64>;
/// A game with floating-point payoffs; ties are compared exactly.
pub type GameF64 = CongestionGame<f64>;
