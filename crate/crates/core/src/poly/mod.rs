//! Exact sparse multivariate polynomials over ℚ.
//!
//! A [`Polynomial`] lives in a ring of fixed dimension `nvars`; variables are
//! addressed positionally and names only matter for parsing and printing.
//! Terms are stored without zero coefficients, sorted in descending graded
//! reverse lexicographic order, so structural equality is mathematical
//! equality.

mod gcd;
mod monomial;
mod parse;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{format_rational, Rational};

pub use gcd::{gcd, squarefree_part};
pub use monomial::{Monomial, MonomialOrder, MAX_VARS};
pub use parse::{parse, parse_with_names, default_names, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("variable index {index} out of range for dimension {nvars}")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("expected {expected} polynomials, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("repeated variable index {0}")]
    RepeatedVariable(usize),
    #[error("polynomial must be nonzero")]
    ZeroPolynomial,
    #[error("ring dimension {0} exceeds the supported maximum {MAX_VARS}")]
    TooManyVariables(usize),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(Monomial, Rational)>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        Polynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(nvars, Monomial::one(), c)
    }

    pub fn term(nvars: usize, mono: Monomial, c: Rational) -> Self {
        assert!(mono.support_len() <= nvars, "monomial outside the ring");
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push((mono, c));
        }
        p
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        Self::term(nvars, Monomial::var(index), Rational::one())
    }

    /// Builds the canonical form from arbitrary (possibly repeated) terms.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            assert!(m.support_len() <= nvars, "monomial outside the ring");
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(nvars, acc)
    }

    fn from_map(nvars: usize, acc: HashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.grevlex_cmp(&a.0));
        Polynomial { nvars, terms }
    }

    /// Terms already sorted descending in grevlex with no zeros or repeats.
    pub(crate) fn from_sorted_terms(nvars: usize, terms: Vec<(Monomial, Rational)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0.grevlex_cmp(&w[1].0).is_gt()));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Polynomial { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_nonzero_constant(&self) -> bool {
        !self.is_zero() && self.is_constant()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn constant_term(&self) -> Rational {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Rational::zero(),
        }
    }

    /// Nonvanishing at the origin, i.e. a unit of the local ring there.
    pub fn is_unit_at_origin(&self) -> bool {
        !self.constant_term().is_zero()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Leading term under graded reverse lex.
    pub fn leading_term(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn leading_term_in(&self, order: &MonomialOrder) -> Option<&(Monomial, Rational)> {
        self.terms
            .iter()
            .max_by(|a, b| order.compare(&a.0, &b.0))
    }

    pub fn coefficient(&self, mono: &Monomial) -> Rational {
        self.terms
            .binary_search_by(|(m, _)| mono.grevlex_cmp(m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    /// Vanishing order at the origin; `None` stands for infinity.
    pub fn ord_at_origin(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max()
    }

    /// Indices of variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exponent(i) > 0))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, a * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.mul(mono), a * c))
                .collect(),
        }
    }

    /// Scales so the grevlex leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, lc)) if lc.is_one() => self.clone(),
            Some((_, lc)) => self.scale(&lc.recip()),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var` (0-based).
    pub fn derivative(&self, var: usize) -> Result<Self, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::VariableOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(var) > 0)
            .map(|(m, c)| {
                let e = m.exponent(var);
                let mut d = *m;
                d.set_exponent(var, e - 1);
                (d, c * Rational::from_integer(e.into()))
            });
        Ok(Self::from_terms(self.nvars, terms))
    }

    /// Drops every term of total degree `>= degree`.
    pub fn truncate(&self, degree: u32) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < degree)
                .cloned()
                .collect(),
        }
    }

    /// Reinterprets the polynomial in a ring of dimension `nvars`, sending
    /// variable `i` to variable `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars, "variable map length");
        let terms = self.terms.iter().map(|(m, c)| {
            let mut out = Monomial::one();
            for (i, &target) in map.iter().enumerate() {
                let e = m.exponent(i);
                if e > 0 {
                    assert!(target < nvars, "variable map out of range");
                    out.set_exponent(target, out.exponent(target) + e);
                }
            }
            (out, c.clone())
        });
        Self::from_terms(nvars, terms)
    }

    /// Same polynomial in a ring with extra trailing variables.
    pub fn extend(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars && nvars <= MAX_VARS);
        Polynomial {
            nvars,
            terms: self.terms.clone(),
        }
    }

    /// Restricts to a smaller ring; panics if a dropped variable occurs.
    pub fn restrict(&self, nvars: usize) -> Self {
        assert!(
            self.terms.iter().all(|(m, _)| m.support_len() <= nvars),
            "polynomial involves dropped variables"
        );
        Polynomial {
            nvars,
            terms: self.terms.clone(),
        }
    }

    /// Composition `f(g_1, ..., g_k)` where `k = self.nvars()`; the result
    /// lives in the common ring of the `g_i`.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Self, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::WrongCount {
                expected: self.nvars,
                got: images.len(),
            });
        }
        let target = images.first().map_or(0, |g| g.nvars);
        if let Some(bad) = images.iter().find(|g| g.nvars != target) {
            return Err(PolyError::DimensionMismatch(target, bad.nvars));
        }
        if self.nvars == 0 {
            return Ok(Polynomial::from_terms(0, self.terms.clone()));
        }
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|g| vec![Polynomial::one(target), g.clone()])
            .collect();
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut prod = Polynomial::constant(target, c.clone());
            for (i, pw) in powers.iter_mut().enumerate() {
                let e = m.exponent(i) as usize;
                if e == 0 {
                    continue;
                }
                while pw.len() <= e {
                    let next = &pw[pw.len() - 1] * &images[i];
                    pw.push(next);
                }
                prod = &prod * &pw[e];
            }
            for (pm, pc) in prod.terms {
                *acc.entry(pm).or_insert_with(Rational::zero) += pc;
            }
        }
        Ok(Self::from_map(target, acc))
    }

    /// Linear change of coordinates `z = B w`: returns `f(B w)`.
    pub fn linear_substitution(&self, matrix: &[Vec<Rational>]) -> Result<Self, PolyError> {
        let n = self.nvars;
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(PolyError::WrongCount {
                expected: n,
                got: matrix.len(),
            });
        }
        let images: Vec<Polynomial> = matrix
            .iter()
            .map(|row| {
                Polynomial::from_terms(
                    n,
                    row.iter()
                        .enumerate()
                        .map(|(j, c)| (Monomial::var(j), c.clone())),
                )
            })
            .collect();
        self.compose(&images)
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, x) in point.iter().enumerate() {
                let e = m.exponent(i);
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += v;
        }
        total
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn exact_divide(&self, divisor: &Polynomial) -> Result<Option<Self>, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if divisor.nvars != self.nvars {
            return Err(PolyError::DimensionMismatch(self.nvars, divisor.nvars));
        }
        let (dm, dc) = divisor.terms[0].clone();
        let dc_inv = dc.recip();
        let mut rem = self.clone();
        let mut quotient: Vec<(Monomial, Rational)> = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let Some(qm) = dm.quotient_of(&m) else {
                return Ok(None);
            };
            let qc = c * &dc_inv;
            rem = rem.sub_scaled(divisor, &qm, &qc);
            quotient.push((qm, qc));
        }
        Ok(Some(Polynomial::from_sorted_terms(self.nvars, quotient)))
    }

    /// `self - c * mono * other`, by a sorted merge.
    pub fn sub_scaled(&self, other: &Polynomial, mono: &Monomial, c: &Rational) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other
            .terms
            .iter()
            .map(|(m, k)| (m.mul(mono), k * c))
            .peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (m, k) = b.next().unwrap();
                    out.push((m, -k));
                }
                (Some((ma, _)), Some((mb, _))) => match ma.grevlex_cmp(mb) {
                    std::cmp::Ordering::Greater => out.push(a.next().unwrap().clone()),
                    std::cmp::Ordering::Less => {
                        let (m, k) = b.next().unwrap();
                        out.push((m, -k));
                    }
                    std::cmp::Ordering::Equal => {
                        let (m, ka) = a.next().unwrap();
                        let (_, kb) = b.next().unwrap();
                        let k = ka - kb;
                        if !k.is_zero() {
                            out.push((*m, k));
                        }
                    }
                },
            }
        }
        Polynomial {
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        let mut out = String::new();
        if self.terms.is_empty() {
            return "0".to_string();
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let negative = c < &Rational::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(format_rational(&abs));
            }
            for (i, name) in names.iter().enumerate().take(self.nvars) {
                let e = m.exponent(i);
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&default_names(self.nvars)))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.nvars, self)
    }
}

fn merge_add(a: &Polynomial, b: &Polynomial, negate_b: bool) -> Polynomial {
    assert_eq!(a.nvars, b.nvars, "dimension mismatch");
    let sign = if negate_b { -Rational::one() } else { Rational::one() };
    a.sub_scaled(b, &Monomial::one(), &(-sign))
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        merge_add(self, rhs, false)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        merge_add(self, rhs, true)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "dimension mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        if rhs.terms.len() == 1 {
            let (m, c) = &rhs.terms[0];
            return self.mul_monomial(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return rhs.mul_monomial(m, c);
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let c = ca * cb;
                acc.entry(ma.mul(mb))
                    .and_modify(|v| *v += &c)
                    .or_insert(c);
            }
        }
        Polynomial::from_map(self.nvars, acc)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Determinant of a square matrix of polynomials by cofactor expansion with
/// memoised column subsets.
pub fn determinant(matrix: &[Vec<Polynomial>], nvars: usize) -> Polynomial {
    let k = matrix.len();
    if k == 0 {
        return Polynomial::one(nvars);
    }
    // minors[mask] = det of rows (k - popcount(mask))..k restricted to columns in mask
    let mut minors: HashMap<u32, Polynomial> = HashMap::new();
    minors.insert(0, Polynomial::one(nvars));
    for size in 1..=k {
        let row = k - size;
        let mut next: HashMap<u32, Polynomial> = HashMap::new();
        for mask in 0u32..(1 << k) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let mut acc = Polynomial::zero(nvars);
            let mut sign_pos = true;
            for col in 0..k {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let entry = &matrix[row][col];
                if !entry.is_zero() {
                    let sub = &minors[&(mask & !(1 << col))];
                    if !sub.is_zero() {
                        let prod = entry * sub;
                        acc = if sign_pos { &acc + &prod } else { &acc - &prod };
                    }
                }
                sign_pos = !sign_pos;
            }
            next.insert(mask, acc);
        }
        minors = next;
    }
    minors.remove(&((1u32 << k) - 1)).unwrap()
}

/// Jacobian determinant `∂(f_1..f_n)/∂(z_1..z_n)`.
pub fn jacobian_determinant(fs: &[Polynomial]) -> Result<Polynomial, PolyError> {
    let n = fs.first().map_or(0, |f| f.nvars);
    if fs.len() != n {
        return Err(PolyError::WrongCount {
            expected: n,
            got: fs.len(),
        });
    }
    let vars: Vec<usize> = (0..n).collect();
    minor_jacobian(fs, &vars)
}

/// Determinant of the submatrix of partials `∂(f_1..f_k)/∂(z_{v_1}..z_{v_k})`.
pub fn minor_jacobian(fs: &[Polynomial], vars: &[usize]) -> Result<Polynomial, PolyError> {
    if fs.len() != vars.len() {
        return Err(PolyError::WrongCount {
            expected: vars.len(),
            got: fs.len(),
        });
    }
    let Some(first) = fs.first() else {
        return Err(PolyError::WrongCount {
            expected: 1,
            got: 0,
        });
    };
    let n = first.nvars;
    if let Some(bad) = fs.iter().find(|f| f.nvars != n) {
        return Err(PolyError::DimensionMismatch(n, bad.nvars));
    }
    if vars.len() > n {
        return Err(PolyError::WrongCount {
            expected: n,
            got: vars.len(),
        });
    }
    for (i, v) in vars.iter().enumerate() {
        if *v >= n {
            return Err(PolyError::VariableOutOfRange { index: *v, nvars: n });
        }
        if vars[..i].contains(v) {
            return Err(PolyError::RepeatedVariable(*v));
        }
    }
    let matrix: Vec<Vec<Polynomial>> = fs
        .iter()
        .map(|f| vars.iter().map(|&v| f.derivative(v)).collect())
        .collect::<Result<_, _>>()?;
    Ok(determinant(&matrix, n))
}

#[cfg(test)]
mod tests;
