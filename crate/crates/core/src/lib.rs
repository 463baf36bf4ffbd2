//! Simulation of a measurement-driven solver for random 3-SAT.
//!
//! Each boolean maps to a rebit (real-amplitude qubit). A clause check
//! projects out the three-qubit component that would fail the clause in a
//! basis tilted by θ; driving θ towards π/2, or repeating checks at a fixed
//! θ and measuring, steers the register towards the state that encodes a
//! satisfying assignment.
//!
//! - [`sat`]: instances, generation, DIMACS, exhaustive counting.
//! - [`rebit`]: the state vector and its kernels.
//! - [`solver`]: schedules, trajectories, cost accounting, solvers.
//! - [`baselines`]: Grover and classical reference costs.
//! - [`inference`]: majority-vote decoding of repeated measurements.
//!
//! Kernels run on rayon when the `parallel` feature is on (the default);
//! results are bitwise identical either way.

pub mod baselines;
pub mod exec;
pub mod inference;
pub mod rebit;
pub mod sat;
pub mod solver;

pub use exec::Exec;
pub use rebit::{RebitState, RotationNoise, TargetSpec};
pub use sat::{Assignment, Clause, Literal, SatInstance};
pub use solver::Schedule;
