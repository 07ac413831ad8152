//! Gröbner bases and the ideal-theoretic decision procedures built on them.
//!
//! Global procedures (membership, elimination, radical membership) work in
//! the polynomial ring. The [`local`] submodule answers the same questions
//! for the localization at the origin, which is what statements about germs
//! need.

mod buchberger;
pub mod local;
pub mod truncated;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::poly::{Monomial, MonomialOrder, Polynomial, MAX_VARS};
use crate::rational::Rational;
use buchberger::{buchberger, reduce, sort_terms, Terms};

/// Resource limits for a single Gröbner basis computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Budget {
    /// Maximum number of S-pairs reduced.
    pub max_spairs: usize,
    /// Maximum total degree of any basis element produced.
    pub max_degree: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_spairs: 100_000,
            max_degree: 120,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroebnerError {
    #[error("S-pair budget of {limit} exceeded")]
    SpairBudget { limit: usize },
    #[error("degree budget of {limit} exceeded")]
    DegreeBudget { limit: u32 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("an auxiliary variable would exceed {MAX_VARS} variables")]
    TooManyVariables,
}

impl GroebnerError {
    pub fn is_budget(&self) -> bool {
        matches!(self, Self::SpairBudget { .. } | Self::DegreeBudget { .. })
    }
}

/// A reduced Gröbner basis: monic elements with pairwise-irreducible tails,
/// sorted by ascending leading monomial.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    nvars: usize,
    elements: Vec<Terms>,
    polys: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn compute(gens: &[Polynomial], order: &MonomialOrder, budget: &Budget) -> Result<Self, GroebnerError> {
        let nvars = gens.first().map_or(0, |g| g.nvars());
        for g in gens {
            if g.nvars() != nvars {
                return Err(GroebnerError::DimensionMismatch {
                    expected: nvars,
                    got: g.nvars(),
                });
            }
        }
        let inputs: Vec<Terms> = gens
            .iter()
            .map(|g| {
                let mut t = g.terms().to_vec();
                sort_terms(&mut t, order);
                t
            })
            .collect();
        let elements = buchberger(inputs, order, budget)?;
        let polys = elements
            .iter()
            .map(|t| Polynomial::from_terms(nvars, t.iter().cloned()))
            .collect();
        Ok(GroebnerBasis {
            order: order.clone(),
            nvars,
            elements,
            polys,
        })
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_reduced(&self) -> bool {
        true
    }

    pub fn basis(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().map(|t| t[0].0).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0][0].0.is_one()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        assert_eq!(f.nvars(), self.nvars, "dimension mismatch");
        if self.elements.is_empty() || f.is_zero() {
            return f.clone();
        }
        let mut t = f.terms().to_vec();
        sort_terms(&mut t, &self.order);
        let refs: Vec<&Terms> = self.elements.iter().collect();
        let r = reduce(t, &refs, &self.order);
        Polynomial::from_terms(self.nvars, r)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// True when every variable has a pure power among the leading
    /// monomials, i.e. the quotient ring is finite dimensional.
    pub fn is_zero_dimensional(&self) -> bool {
        let lms = self.leading_monomials();
        (0..self.nvars).all(|v| {
            lms.iter()
                .any(|m| m.exponent(v) > 0 && m.degree() == m.exponent(v))
        })
    }

    /// Number of standard monomials, when finite and at most `limit`.
    pub fn quotient_dimension(&self, limit: u64) -> Option<u64> {
        if self.is_unit() {
            return Some(0);
        }
        if !self.is_zero_dimensional() {
            return None;
        }
        let lms = self.leading_monomials();
        let mut count = 0u64;
        let mut frontier = vec![Monomial::one()];
        let mut seen = std::collections::HashSet::new();
        seen.insert(Monomial::one());
        while let Some(m) = frontier.pop() {
            count += 1;
            if count > limit {
                return None;
            }
            for v in 0..self.nvars {
                let mut next = m;
                next.set_exponent(v, m.exponent(v) + 1);
                if !lms.iter().any(|l| l.divides(&next)) && seen.insert(next) {
                    frontier.push(next);
                }
            }
        }
        Some(count)
    }

    /// Elements involving only the variables in `keep_mask`.
    fn elements_in(&self, keep_mask: u32) -> Vec<Polynomial> {
        self.polys
            .iter()
            .filter(|p| {
                p.terms()
                    .iter()
                    .all(|(m, _)| (0..self.nvars).all(|v| m.exponent(v) == 0 || keep_mask & (1 << v) != 0))
            })
            .cloned()
            .collect()
    }
}

type CacheCell = Arc<Mutex<Option<Arc<GroebnerBasis>>>>;

/// An ideal given by generators, with reduced Gröbner bases cached per
/// monomial order. Each basis is computed at most once even under
/// concurrent access.
pub struct Ideal {
    nvars: usize,
    generators: Vec<Polynomial>,
    budget: Budget,
    cache: RwLock<HashMap<MonomialOrder, CacheCell>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            nvars: self.nvars,
            generators: self.generators.clone(),
            budget: self.budget,
            cache: RwLock::new(self.cache.read().unwrap().clone()),
        }
    }
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.generators.iter()).finish()
    }
}

impl Ideal {
    pub fn new(nvars: usize, generators: Vec<Polynomial>) -> Self {
        Self::with_budget(nvars, generators, Budget::default())
    }

    pub fn with_budget(nvars: usize, mut generators: Vec<Polynomial>, budget: Budget) -> Self {
        assert!(
            generators.iter().all(|g| g.nvars() == nvars),
            "generator dimension mismatch"
        );
        if generators.is_empty() {
            generators.push(Polynomial::zero(nvars));
        }
        Ideal {
            nvars,
            generators,
            budget,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    /// Nonzero generators.
    pub fn nonzero_generators(&self) -> impl Iterator<Item = &Polynomial> {
        self.generators.iter().filter(|g| !g.is_zero())
    }

    /// A new ideal with extra generators (same budget, fresh cache).
    pub fn extended(&self, more: impl IntoIterator<Item = Polynomial>) -> Ideal {
        let mut gens: Vec<Polynomial> = self.nonzero_generators().cloned().collect();
        gens.extend(more);
        Ideal::with_budget(self.nvars, gens, self.budget)
    }

    pub fn groebner(&self, order: &MonomialOrder) -> Result<Arc<GroebnerBasis>, GroebnerError> {
        let cell = {
            let read = self.cache.read().unwrap();
            read.get(order).cloned()
        };
        let cell = match cell {
            Some(c) => c,
            None => {
                let mut write = self.cache.write().unwrap();
                write.entry(order.clone()).or_default().clone()
            }
        };
        let mut slot = cell.lock().unwrap();
        if let Some(gb) = slot.as_ref() {
            return Ok(gb.clone());
        }
        let gb = Arc::new(GroebnerBasis::compute(&self.generators, order, &self.budget)?);
        *slot = Some(gb.clone());
        Ok(gb)
    }

    pub fn grevlex(&self) -> Result<Arc<GroebnerBasis>, GroebnerError> {
        self.groebner(&MonomialOrder::GrevLex)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool, GroebnerError> {
        if f.is_zero() {
            return Ok(true);
        }
        Ok(self.grevlex()?.contains(f))
    }

    pub fn is_unit(&self) -> Result<bool, GroebnerError> {
        if self.generators.iter().any(|g| g.is_nonzero_constant()) {
            return Ok(true);
        }
        Ok(self.grevlex()?.is_unit())
    }

    /// Both ideals contain each other's generators.
    pub fn same_ideal(&self, other: &Ideal) -> Result<bool, GroebnerError> {
        for g in other.nonzero_generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        for g in self.nonzero_generators() {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Reduced Gröbner basis of `ideal` in `order` (cached on the ideal).
pub fn groebner(ideal: &Ideal, order: &MonomialOrder) -> Result<Arc<GroebnerBasis>, GroebnerError> {
    ideal.groebner(order)
}

pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Polynomial {
    gb.normal_form(f)
}

pub fn ideal_member(f: &Polynomial, ideal: &Ideal) -> Result<bool, GroebnerError> {
    ideal.contains(f)
}

/// `I ∩ ℚ[z_keep]`, returned as an ideal of the same ambient ring.
pub fn elimination_ideal(ideal: &Ideal, keep: &[usize]) -> Result<Ideal, GroebnerError> {
    let n = ideal.nvars;
    let keep_mask = keep.iter().fold(0u32, |m, &v| m | (1 << v));
    let eliminate: Vec<usize> = (0..n).filter(|v| keep_mask & (1 << v) == 0).collect();
    if eliminate.is_empty() {
        return Ok(Ideal::with_budget(n, ideal.generators.clone(), ideal.budget));
    }
    let gb = ideal.groebner(&MonomialOrder::block(&eliminate))?;
    let gens = gb.elements_in(keep_mask);
    Ok(Ideal::with_budget(n, gens, ideal.budget))
}

fn with_extra_var(ideal: &Ideal) -> Result<usize, GroebnerError> {
    if ideal.nvars + 1 > MAX_VARS {
        return Err(GroebnerError::TooManyVariables);
    }
    Ok(ideal.nvars + 1)
}

/// Rabinowitsch: `f ∈ √I` iff `1 ∈ I + (1 - t f)`.
pub fn radical_member(f: &Polynomial, ideal: &Ideal) -> Result<bool, GroebnerError> {
    if f.is_zero() {
        return Ok(true);
    }
    let m = with_extra_var(ideal)?;
    let t = Polynomial::var(m, ideal.nvars);
    let mut gens: Vec<Polynomial> = ideal.nonzero_generators().map(|g| g.extend(m)).collect();
    gens.push(&Polynomial::one(m) - &(&t * &f.extend(m)));
    Ideal::with_budget(m, gens, ideal.budget).is_unit()
}

/// Least `σ ≤ bound` with `f^σ ∈ I`.
pub fn minimal_power_in(f: &Polynomial, ideal: &Ideal, bound: u32) -> Result<Option<u32>, GroebnerError> {
    let gb = ideal.grevlex()?;
    let mut power = Polynomial::one(f.nvars());
    for sigma in 1..=bound {
        power = gb.normal_form(&(&power * f));
        if power.is_zero() {
            return Ok(Some(sigma));
        }
    }
    Ok(None)
}

/// `I ∩ J` via `t I + (1 - t) J` and elimination of `t`.
pub fn intersection(a: &Ideal, b: &Ideal) -> Result<Ideal, GroebnerError> {
    if a.nvars != b.nvars {
        return Err(GroebnerError::DimensionMismatch {
            expected: a.nvars,
            got: b.nvars,
        });
    }
    let n = a.nvars;
    let m = with_extra_var(a)?;
    let t = Polynomial::var(m, n);
    let one_minus_t = &Polynomial::one(m) - &t;
    let mut gens: Vec<Polynomial> = a.nonzero_generators().map(|g| &t * &g.extend(m)).collect();
    gens.extend(b.nonzero_generators().map(|g| &one_minus_t * &g.extend(m)));
    let big = Ideal::with_budget(m, gens, a.budget);
    let gb = big.groebner(&MonomialOrder::block(&[n]))?;
    let keep = (1u32 << n) - 1;
    let out = gb.elements_in(keep).into_iter().map(|p| p.restrict(n)).collect();
    Ok(Ideal::with_budget(n, out, a.budget))
}

/// Ideal quotient `I : f`.
pub fn quotient(ideal: &Ideal, f: &Polynomial) -> Result<Ideal, GroebnerError> {
    let n = ideal.nvars;
    if f.is_zero() {
        return Ok(Ideal::with_budget(n, vec![Polynomial::one(n)], ideal.budget));
    }
    let principal = Ideal::with_budget(n, vec![f.clone()], ideal.budget);
    let both = intersection(ideal, &principal)?;
    let gens = both
        .nonzero_generators()
        .map(|g| {
            g.exact_divide(f)
                .expect("nonzero divisor")
                .expect("elements of (f) are divisible by f")
        })
        .collect();
    Ok(Ideal::with_budget(n, gens, ideal.budget))
}

/// All monomials of total degree `d` in `n` variables, in descending
/// graded reverse lex order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, var: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if var + 1 == n {
            cur.set_exponent(var, left);
            out.push(*cur);
            cur.set_exponent(var, 0);
            return;
        }
        for e in (0..=left).rev() {
            cur.set_exponent(var, e);
            rec(n, var + 1, left - e, cur, out);
        }
        cur.set_exponent(var, 0);
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial::one());
        }
        return out;
    }
    rec(n, 0, d, &mut Monomial::one(), &mut out);
    out.sort_unstable_by(|a, b| b.grevlex_cmp(a));
    out
}

/// Generators of `𝔪^d` as polynomials.
pub fn max_ideal_power(n: usize, d: u32) -> Vec<Polynomial> {
    monomials_of_degree(n, d)
        .into_iter()
        .map(|m| Polynomial::term(n, m, Rational::from_integer(1.into())))
        .collect()
}

/// Checks Buchberger's criterion directly: every S-polynomial of basis
/// pairs reduces to zero.
pub fn satisfies_buchberger_criterion(gb: &GroebnerBasis) -> bool {
    let order = gb.order().clone();
    let refs: Vec<&Terms> = gb.elements.iter().collect();
    for i in 0..gb.elements.len() {
        for j in i + 1..gb.elements.len() {
            let (f, g) = (&gb.elements[i], &gb.elements[j]);
            let lcm = f[0].0.lcm(&g[0].0);
            let mf = f[0].0.quotient_of(&lcm).unwrap();
            let mg = g[0].0.quotient_of(&lcm).unwrap();
            let fm: Terms = f.iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
            let s = buchberger::sub_mul(&fm, g, &mg, &Rational::from_integer(1.into()), &order);
            if !reduce(s, &refs, &order).iter().all(|t| t.1.is_zero()) {
                return false;
            }
        }
    }
    true
}
