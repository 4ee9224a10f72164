//! Model-free identification of governing-equation structure in
//! dynamical systems.
//!
//! Given a uniformly sampled trajectory of system states, the pipeline
//! estimates which candidate terms (monomials of the state variables)
//! appear in each state's differential equation, using only ranks:
//!
//! 1. forward differences approximate each state derivative
//!    ([`diffop`]);
//! 2. rank-based mutual information is estimated between every
//!    derivative and every candidate term via copula entropy
//!    ([`copula_entropy`]);
//! 3. terms are ranked per derivative, optionally with permutation
//!    p-values ([`identify`]).
//!
//! The estimator is invariant under monotone transforms of the data and
//! needs no binning, bandwidths, or model assumptions. A fixed-step RK4
//! integrator and a Lorenz system are built in for experimentation
//! ([`dynsys`]), and everything is reachable from the `cesysid` binary
//! (`simulate`, `identify`, `ce` subcommands).
//!
//! ```
//! use cesysid::{identify, integrate_rk4, SimConfig, SystemSpec, TermMode};
//!
//! let spec = SystemSpec::lorenz(10.0, 28.0, 8.0 / 3.0).unwrap();
//! let config = SimConfig::new(vec![1.0, 2.0, 3.0], 5.0, 100);
//! let traj = integrate_rk4(&spec, &config).unwrap();
//! let report = identify(&traj, &TermMode::Paper, 3, None).unwrap();
//! for ranking in &report.derivatives {
//!     println!("{}: best term {}", ranking.derivative, ranking.terms[0].term);
//! }
//! ```
//!
//! See the `examples/` directory for runnable walkthroughs of each
//! capability.

pub mod cli;
pub mod copula_entropy;
pub mod diffop;
pub mod dynsys;
pub mod error;
pub mod identify;
pub mod io;
pub mod term_library;

pub use copula_entropy::{
    copula_entropy, empirical_copula, knn_entropy, knn_entropy_unit_cube, CeEstimate,
    NeighborBackend, RankMatrix,
};
pub use diffop::{forward_difference, DerivativeMatrix};
pub use dynsys::{
    integrate_rk4, lorenz_rhs, random_initial_state, SimConfig, StateTrajectory, SystemSpec,
};
pub use error::{Error, Result};
pub use identify::{
    identify, permutation_null, rank_terms, score_terms, CeMatrix, DerivativeRanking,
    IdentificationReport, PermutationConfig, RankedTerm,
};
pub use term_library::{build_terms, evaluate_terms, TermMode, TermSpec};
