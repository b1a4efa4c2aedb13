//! Exact computations around Nil–Bohr recurrence along syndetic finite sums.
//!
//! The crate works entirely in exact rational arithmetic: index-set algebra
//! ([`setalg`]), torus-valued polynomial maps in coefficient form
//! ([`toruspoly`]), Host–Kra cubes ([`hkcube`]), unitriangular nilmanifolds
//! ([`nilmanifold`]) and the search engines built on them ([`search`]).

pub mod approx;
pub mod error;
pub mod hkcube;
pub mod nilmanifold;
pub mod par;
pub mod rational;
pub mod search;
pub mod setalg;
pub mod toruspoly;

pub use error::{Error, Result};
pub use rational::{fmt_q, parse_q, q, qi, TorusPoint, Q};
pub use setalg::{BlockSequence, FiniteIndexSet};
