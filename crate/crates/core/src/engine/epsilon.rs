//! The bookkeeping rules for assigned orders of subellipticity.
//!
//! * a generator's differential is a vector multiplier with `ε = 1/4`;
//! * the differential of a scalar multiplier with `ε` carries `ε/2`;
//! * a Jacobian determinant of vector multipliers gets the minimum of their
//!   orders;
//! * a root `f` with `f^σ` in an ideal of multipliers gets the minimum of
//!   their orders divided by `σ`;
//! * a multiple of a multiplier keeps its order.

use num_traits::One;

use crate::rational::{format_rational, int, parse_rational, rat, Rational};

pub fn quarter() -> Rational {
    rat(1, 4)
}

/// Order of the differential of a scalar multiplier.
pub fn differential(eps: &Rational) -> Rational {
    eps / int(2)
}

/// Minimum of a nonempty collection.
pub fn min_of<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    values.into_iter().min().cloned()
}

pub fn root(eps: &Rational, sigma: u32) -> Rational {
    eps / int(sigma as i64)
}

/// One fiber-chain step: the Jacobian of the `h_i` (differentials at
/// `1/4`) and the previous multiplier, followed by the comparison that
/// trades the minor for the cofactor, which also involves `h̃`.
pub fn chain_step(prev: &Rational, squarefree: &Rational, sigma_step: u32) -> Rational {
    let jac = quarter().min(differential(prev));
    root(&jac.min(squarefree.clone()), sigma_step)
}

pub fn is_valid(eps: &Rational) -> bool {
    *eps > int(0) && *eps <= Rational::one()
}

pub fn show(eps: &Rational) -> String {
    format_rational(eps)
}

pub fn parse(text: &str) -> Option<Rational> {
    parse_rational(text).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules() {
        assert_eq!(chain_step(&rat(1, 8), &rat(1, 8), 1), rat(1, 16));
        assert_eq!(chain_step(&rat(1, 2), &rat(1, 8), 1), rat(1, 8));
        assert_eq!(root(&rat(1, 4), 2), rat(1, 8));
        assert_eq!(min_of(&[rat(1, 3), rat(1, 5)]), Some(rat(1, 5)));
        assert!(is_valid(&quarter()));
    }
}
