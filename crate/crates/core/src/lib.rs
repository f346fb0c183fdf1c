//! Local aggregation rules over pairwise choice, read as conservative
//! 2-functions, and the clones they generate.
//!
//! - [`universe`]: alternatives, pairs, choice functions, permutations.
//! - [`two_function`]: conservative 2-functions and their Boolean slices.
//! - [`clone`]: closures, Post classes, free/dependent extensions.
//! - [`rules`]: aggregation rules, decisive coalitions, the four named rules.
//! - [`domains`]: restricted domains and the sets a rule keeps invariant.
//! - [`scenarios`]: the registry behind `agclone verify`.

pub mod boolean;
pub mod clone;
pub mod domains;
pub mod error;
pub mod rules;
pub mod scenarios;
pub mod two_function;
pub mod universe;

pub use boolean::BooleanFunction;
pub use error::{Error, Result};
pub use two_function::{TwoDomain, TwoFunction};
pub use universe::{ChoiceFunction, Permutation, Tournament, Universe};
