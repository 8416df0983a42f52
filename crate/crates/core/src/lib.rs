//! Exact normal forms of area-preserving maps near `n:1` resonances, the
//! bifurcation diagrams of the resulting unfoldings, and their level sets.

pub mod bifurcation;
pub mod error;
pub mod homology;
pub mod levelset;
pub mod lie;
pub mod linalg;
pub mod normalform;
pub mod rational;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use rational::{ComplexRational, Rational};
pub use series::{GradingScheme, MonomialKey, ResonantSeries};
