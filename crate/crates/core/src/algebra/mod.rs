//! Exact arithmetic, index sets, product sets and intuples.

mod product;
mod rational;
mod set;

pub use product::{Intuple, ProductSet};
pub use rational::{
    format_rational, parse_rational, rat, rat_int, rat_recip, rational_from_f64, rational_to_f64,
    within, Rational,
};
pub use set::{ElementSet, MAX_ELEMENTS};
