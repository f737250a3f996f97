//! Symbolic engines for topological games over countably-based spaces.
//!
//! - [`topology`]: the space zoo, decidable base relations and dense-open oracles.
//! - [`game`]: referee-checked Banach-Mazur, strong Choquet and Gruenhage games.
//! - [`krom`]: decreasing sequences of opens, Krom points and their certificates.
//! - [`branchtree`]: the binary tree of nodes used by the product-game transfer.
//! - [`transfer`]: executable strategy transfers between spaces and their products.
//! - [`suites`]: invariant suites shared by `verify` and the acceptance run.

pub mod branchtree;
pub mod error;
pub mod rational;
pub mod game;
pub mod krom;
pub mod suites;
pub mod topology;
pub mod transfer;

pub use error::{Error, Result, Side};
pub use rational::Rat;
