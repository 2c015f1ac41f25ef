//! Special-function building blocks shared by the zeta evaluator.

mod bernoulli;
mod gamma;

pub use bernoulli::{bernoulli_even, em_coefficient, MAX_BERNOULLI_INDEX};
pub use gamma::ln_gamma;
