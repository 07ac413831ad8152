use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Upper bound on the number of ring variables, including auxiliary
/// variables introduced by elimination and the Rabinowitsch trick.
pub const MAX_VARS: usize = 16;

/// Exponent vector `z^α`. Entries past the ring dimension are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u16; MAX_VARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; MAX_VARS])
    }

    pub fn var(index: usize) -> Self {
        Self::var_pow(index, 1)
    }

    pub fn var_pow(index: usize, exponent: u32) -> Self {
        let mut m = Self::one();
        m.0[index] = to_exp(exponent);
        m
    }

    pub fn from_exponents(exponents: &[u32]) -> Self {
        assert!(exponents.len() <= MAX_VARS, "too many variables");
        let mut m = Self::one();
        for (slot, &e) in m.0.iter_mut().zip(exponents) {
            *slot = to_exp(e);
        }
        m
    }

    #[inline]
    pub fn exponent(&self, index: usize) -> u32 {
        self.0[index] as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.0[..nvars].iter().map(|&e| e as u32).collect()
    }

    pub fn set_exponent(&mut self, index: usize, exponent: u32) {
        self.0[index] = to_exp(exponent);
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn degree_in(&self, mask: u32) -> u32 {
        (0..MAX_VARS)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| self.0[i] as u32)
            .sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Highest variable index with a nonzero exponent, plus one.
    pub fn support_len(&self) -> usize {
        self.0.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1)
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(std::array::from_fn(|i| {
            self.0[i].checked_add(other.0[i]).expect("exponent overflow")
        }))
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(std::array::from_fn(|i| other.0[i] - self.0[i])))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(std::array::from_fn(|i| self.0[i].max(other.0[i])))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(std::array::from_fn(|i| self.0[i].min(other.0[i])))
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Graded reverse lexicographic comparison with `z1 > z2 > ... `.
    #[inline]
    pub fn grevlex_cmp(&self, other: &Monomial) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for i in (0..MAX_VARS).rev() {
            if self.0[i] != other.0[i] {
                return other.0[i].cmp(&self.0[i]);
            }
        }
        Ordering::Equal
    }

    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        self.0.cmp(&other.0)
    }

    fn grevlex_cmp_masked(&self, other: &Monomial, mask: u32) -> Ordering {
        match self.degree_in(mask).cmp(&other.degree_in(mask)) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for i in (0..MAX_VARS).rev() {
            if mask & (1 << i) != 0 && self.0[i] != other.0[i] {
                return other.0[i].cmp(&self.0[i]);
            }
        }
        Ordering::Equal
    }
}

fn to_exp(e: u32) -> u16 {
    u16::try_from(e).expect("exponent overflow")
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.0[..self.support_len()])
    }
}

/// Monomial orders used by the Gröbner engine.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
    /// Block order: graded reverse lex on the eliminated variables first,
    /// ties broken by graded reverse lex on the remaining ones.
    Block { eliminate: u32 },
    /// Total degree first, then the larger power of the homogenizing
    /// variable `t`, then graded reverse lex on the rest. After setting
    /// `t = 1`, leading terms are the lowest-degree terms, so this order
    /// produces local standard bases from homogenized input.
    Homogenized { t: u32 },
}

impl MonomialOrder {
    pub fn block(eliminate: &[usize]) -> Self {
        let mask = eliminate.iter().fold(0u32, |m, &i| {
            assert!(i < MAX_VARS, "variable index out of range");
            m | (1 << i)
        });
        MonomialOrder::Block { eliminate: mask }
    }

    pub fn eliminated(&self) -> Vec<usize> {
        match self {
            MonomialOrder::Block { eliminate } => {
                (0..MAX_VARS).filter(|i| eliminate & (1 << i) != 0).collect()
            }
            _ => Vec::new(),
        }
    }

    #[inline]
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::GrevLex => a.grevlex_cmp(b),
            MonomialOrder::Lex => a.lex_cmp(b),
            MonomialOrder::Block { eliminate } => {
                match a.grevlex_cmp_masked(b, *eliminate) {
                    Ordering::Equal => a.grevlex_cmp_masked(b, !*eliminate),
                    ord => ord,
                }
            }
            MonomialOrder::Homogenized { t } => {
                let t = *t as usize;
                a.degree()
                    .cmp(&b.degree())
                    .then_with(|| a.exponent(t).cmp(&b.exponent(t)))
                    .then_with(|| a.grevlex_cmp_masked(b, !(1u32 << t)))
            }
        }
    }

    /// Whether the order refines total degree, so that truncating at a
    /// degree never changes leading terms of surviving polynomials.
    pub fn is_degree_compatible(&self) -> bool {
        matches!(self, MonomialOrder::GrevLex | MonomialOrder::Homogenized { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn grevlex_basics() {
        // degree first
        assert_eq!(m(&[0, 3]).grevlex_cmp(&m(&[2, 0])), Ordering::Greater);
        // z1^2 > z1 z2 > z2^2
        assert_eq!(m(&[2, 0]).grevlex_cmp(&m(&[1, 1])), Ordering::Greater);
        assert_eq!(m(&[1, 1]).grevlex_cmp(&m(&[0, 2])), Ordering::Greater);
        // classic: x y z^0 ... z1 z2^? : x^1 y^1 z^1 vs x^2 z^1 -> (1,1,1) > (2,0,1)
        assert_eq!(
            m(&[1, 1, 1]).grevlex_cmp(&m(&[2, 0, 1])),
            Ordering::Less
        );
        assert_eq!(
            m(&[1, 2, 0]).grevlex_cmp(&m(&[2, 0, 1])),
            Ordering::Greater
        );
    }

    #[test]
    fn block_eliminates() {
        let ord = MonomialOrder::block(&[0]);
        // anything with z1 beats anything without it
        assert_eq!(ord.compare(&m(&[1, 0]), &m(&[0, 9])), Ordering::Greater);
        assert_eq!(ord.compare(&m(&[1, 2]), &m(&[1, 1])), Ordering::Greater);
        assert_eq!(ord.eliminated(), vec![0]);
    }

    #[test]
    fn divisibility() {
        assert!(m(&[1, 1]).divides(&m(&[2, 1])));
        assert!(!m(&[1, 2]).divides(&m(&[2, 1])));
        assert_eq!(m(&[1, 2]).lcm(&m(&[2, 1])), m(&[2, 2]));
        assert_eq!(m(&[1, 0]).quotient_of(&m(&[3, 1])), Some(m(&[2, 1])));
        assert!(m(&[1, 0]).is_coprime(&m(&[0, 4])));
    }
}
