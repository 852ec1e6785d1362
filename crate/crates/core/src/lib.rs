//! Enumeration and optimization of CHSH-like nonlocal binary games.
//!
//! An n-player game is a pair of Boolean functions (f, g): the referee
//! draws questions uniformly, and the players win when
//! `f(questions) = g(answers)`. The crate enumerates all such games over
//! essential functions, computes exact classical optima by brute force,
//! optimizes quantum strategies over shared entangled states with a dense
//! state-vector simulator, and evaluates the associated Bell and Mermin
//! operator expectations.

pub mod bell;
pub mod boolfn;
pub mod cli;
pub mod catalog;
pub mod circuit;
pub mod classical;
pub mod game;
pub mod optimize;
pub mod quantum;
pub mod search;
pub mod verify;

pub use cli::run;
