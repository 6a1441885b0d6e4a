//! Exact arithmetic substrate: coefficient rings, Bernoulli numbers and
//! dense polynomials over `Z/p`.

mod bernoulli;
mod fppoly;
mod ring;

pub use bernoulli::{bernoulli, bernoulli_even_table};
pub use fppoly::{factor_multiplicity, multiplicity_capped, FpPoly, Multiplicity};
pub use ring::{binomial_row_mod, is_prime, pow_mod, IntegerRing, PrimeField, RationalField, Ring};
