//! Exact commutative algebra for Kohn's multiplier algorithm on special
//! domains `Re w + Σ|F_j(z)|² < 0`.

pub mod groebner;
pub mod engine;
pub mod invariants;
pub mod lp;
pub mod par;
pub mod poly;
pub mod rational;
pub mod verifiers;

pub use groebner::{Budget, GroebnerBasis, GroebnerError, Ideal};
pub use poly::{Monomial, MonomialOrder, Polynomial};
pub use rational::Rational;
