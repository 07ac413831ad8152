//! Ideals modulo a power of the maximal ideal, by linear algebra.
//!
//! `ℚ[z]/𝔪^K` is finite-dimensional, and the image of `I + 𝔪^K` in it is
//! spanned by the truncations of `z^α f` over the generators `f`. Row
//! reduction that pivots on the lowest-degree monomial first works in a
//! local order. It therefore never sees the zeros of `I` away from the
//! origin, which is where Buchberger's algorithm over ℚ spends its time.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::monomials_of_degree;
use crate::poly::{Monomial, Polynomial};
use crate::rational::Rational;

type Row = Vec<(u32, Rational)>;

/// Row-echelon form of `(I + 𝔪^K)/𝔪^K` inside `ℚ[z]/𝔪^K`.
#[derive(Debug, Clone)]
pub struct TruncatedSpan {
    nvars: usize,
    k: u32,
    columns: HashMap<Monomial, u32>,
    ncols: usize,
    /// Indexed by pivot column; each row has leading coefficient one.
    pivots: HashMap<u32, Row>,
}

impl TruncatedSpan {
    pub fn new<'a>(nvars: usize, generators: impl IntoIterator<Item = &'a Polynomial>, k: u32) -> Self {
        let mut columns = HashMap::new();
        let mut shifts_by_degree: Vec<Vec<Monomial>> = Vec::new();
        for d in 0..k {
            let monos = monomials_of_degree(nvars, d);
            for m in &monos {
                let next = columns.len() as u32;
                columns.insert(*m, next);
            }
            shifts_by_degree.push(monos);
        }
        let ncols = columns.len();
        let mut span = TruncatedSpan {
            nvars,
            k,
            columns,
            ncols,
            pivots: HashMap::new(),
        };
        let mut rows: Vec<Row> = Vec::new();
        for f in generators {
            let f = f.truncate(k);
            let Some(ord) = f.ord_at_origin() else {
                continue;
            };
            for shifts in shifts_by_degree.iter().take((k - ord) as usize) {
                for alpha in shifts {
                    let row = span.row_of(&f.mul_monomial(alpha, &Rational::one()));
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
        // lowest pivots first keeps fill-in down
        rows.sort_by_key(|r| r[0].0);
        for r in rows {
            span.insert(r);
        }
        span
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// `dim ℚ[z]/(I + 𝔪^K)`.
    pub fn quotient_dimension(&self) -> u64 {
        (self.ncols - self.rank()) as u64
    }

    fn row_of(&self, f: &Polynomial) -> Row {
        let mut row: Row = f
            .terms()
            .iter()
            .filter_map(|(m, c)| self.columns.get(m).map(|&i| (i, c.clone())))
            .collect();
        row.sort_by_key(|(i, _)| *i);
        row
    }

    /// Reduces `row` against the pivots; returns the remainder.
    fn reduce_row(&self, mut row: Row) -> Row {
        let mut done: Row = Vec::new();
        while !row.is_empty() {
            let (col, coeff) = row[0].clone();
            match self.pivots.get(&col) {
                Some(p) => row = sub_scaled(&row, p, &coeff),
                None => {
                    // keep the leading entry, continue on the tail
                    done.push(row.remove(0));
                }
            }
        }
        done
    }

    fn insert(&mut self, row: Row) {
        let mut row = row;
        loop {
            if row.is_empty() {
                return;
            }
            let (col, coeff) = row[0].clone();
            match self.pivots.get(&col) {
                Some(p) => row = sub_scaled(&row, p, &coeff),
                None => {
                    let inv = coeff.recip();
                    for (_, c) in row.iter_mut() {
                        *c *= &inv;
                    }
                    self.pivots.insert(col, row);
                    return;
                }
            }
        }
    }

    /// Whether `f ∈ I + 𝔪^K`.
    pub fn contains(&self, f: &Polynomial) -> bool {
        self.reduce_row(self.row_of(&f.truncate(self.k))).is_empty()
    }

    /// `f · g` modulo `𝔪^K`.
    pub fn mul_truncated(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (a, ca) in f.terms() {
            let da = a.degree();
            if da >= self.k {
                continue;
            }
            for (b, cb) in g.terms() {
                if da + b.degree() >= self.k {
                    continue;
                }
                *acc.entry(a.mul(b)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Polynomial::from_terms(self.nvars, acc.into_iter().filter(|(_, c)| !c.is_zero()))
    }
}

/// `a - c·b` where `b` has leading coefficient one and the same leading
/// column as `a`; the leading column cancels.
fn sub_scaled(a: &Row, b: &Row, c: &Rational) -> Row {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (1, 1);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(c * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse;

    #[test]
    fn monomial_quotient() {
        let gens = [parse("z1^2", 2).unwrap(), parse("z2^3", 2).unwrap()];
        // (z1^2, z2^3) has colength 6; with K = 4 nothing of degree >= 4 survives
        let span = TruncatedSpan::new(2, gens.iter(), 4);
        assert_eq!(span.quotient_dimension(), 6);
        assert!(span.contains(&parse("z1^2*z2 + z2^3", 2).unwrap()));
        assert!(!span.contains(&parse("z1*z2^2", 2).unwrap()));
        let span = TruncatedSpan::new(2, gens.iter(), 2);
        assert_eq!(span.quotient_dimension(), 3);
    }
}
