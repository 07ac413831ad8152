//! Membership questions in the local ring at the origin.
//!
//! Germ membership is reduced to global computations:
//!
//! * `f ∈ I·𝒪₀` iff the quotient `I : f` is not contained in the maximal
//!   ideal `𝔪`.
//! * When `𝔪^K ⊆ I·𝒪₀`, the germ ideal equals `(I + 𝔪^K)·𝒪₀`. The ideal
//!   `I + 𝔪^K` is primary to `𝔪` globally, so global membership in it is
//!   the same as germ membership.
//!
//! The exponent `K` and the colength come from a local standard basis,
//! computed by homogenization (see [`local_standard_basis`]). The
//! colength sequence `d_K = dim ℚ[z]/(I + 𝔪^K)` stabilizes exactly at
//! `K = q`, and Nakayama turns `d_K = d_{K+1}` into `𝔪^K ⊆ I·𝒪₀`.

use std::sync::Arc;

use super::truncated::TruncatedSpan;
use super::{max_ideal_power, monomials_of_degree, quotient, GroebnerError, Ideal};

use crate::poly::{gcd, Monomial, MonomialOrder, Polynomial};
use crate::rational::Rational;

/// How germ membership is decided for a [`LocalPrimary`].
#[derive(Debug, Clone)]
enum Membership {
    /// Row-echelon span of `(I + 𝔪^K*)/𝔪^K*`.
    Span(TruncatedSpan),
    /// Local standard basis as `(leading monomial, element)` pairs, with
    /// every element truncated below degree `K*`.
    Standard(Arc<Vec<(Monomial, Polynomial)>>),
}

/// An ideal whose germ at the origin is `𝔪`-primary, together with the
/// data certifying it.
#[derive(Debug, Clone)]
pub struct LocalPrimary {
    ideal: Ideal,
    membership: Membership,
    k_star: u32,
    q: u32,
    colength: u64,
    sequence: Vec<u64>,
}

impl LocalPrimary {
    fn from_standard_basis(ideal: Ideal, basis: Vec<(Monomial, Polynomial)>, q: u32, sequence: Vec<u64>) -> Self {
        let k_star = q.max(1);
        let basis = basis
            .into_iter()
            .map(|(l, g)| (l, g.truncate(k_star)))
            .collect();
        LocalPrimary {
            ideal,
            membership: Membership::Standard(Arc::new(basis)),
            k_star,
            q,
            colength: *sequence.last().expect("nonempty sequence"),
            sequence,
        }
    }

    fn from_span(ideal: Ideal, span: TruncatedSpan, sequence: Vec<u64>) -> Self {
        let k_star = span.k();
        let colength = span.quotient_dimension();
        let mut lp = LocalPrimary {
            ideal,
            membership: Membership::Span(span),
            k_star,
            q: k_star,
            colength,
            sequence,
        };
        let n = lp.ideal.nvars();
        lp.q = (0..=k_star)
            .find(|&q| {
                monomials_of_degree(n, q)
                    .into_iter()
                    .all(|m| lp.contains_truncated(&Polynomial::term(n, m, Rational::from_integer(1.into()))))
            })
            .unwrap_or(k_star);
        lp
    }

    /// Local colength `dim 𝒪₀ / I𝒪₀`.
    pub fn colength(&self) -> u64 {
        self.colength
    }

    /// An exponent with `𝔪^K* ⊆ I𝒪₀`: the first repeat of the sequence.
    pub fn k_star(&self) -> u32 {
        self.k_star
    }

    /// The sequence `d_1, d_2, ..., d_{K*+1}`, with
    /// `d_K = dim ℚ[z]/(I + 𝔪^K)`.
    pub fn sequence(&self) -> &[u64] {
        &self.sequence
    }

    /// `I + 𝔪^K*`, whose global membership is germ membership in `I`.
    pub fn augmented(&self) -> Ideal {
        plus_max_power(&self.ideal, self.k_star)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool, GroebnerError> {
        Ok(self.contains_truncated(&f.truncate(self.k_star)))
    }

    fn contains_truncated(&self, f: &Polynomial) -> bool {
        match &self.membership {
            Membership::Span(span) => span.contains(f),
            Membership::Standard(basis) => reduces_to_zero(f, basis, self.k_star),
        }
    }

    /// `f · g` modulo `𝔪^K*`.
    fn mul_truncated(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let k = self.k_star;
        Polynomial::from_terms(
            f.nvars(),
            f.terms().iter().flat_map(|(a, ca)| {
                g.terms()
                    .iter()
                    .filter(move |(b, _)| a.degree() + b.degree() < k)
                    .map(move |(b, cb)| (a.mul(b), ca * cb))
            }),
        )
    }

    /// Least `σ ≤ bound` with `f^σ ∈ I𝒪₀`.
    pub fn minimal_power(&self, f: &Polynomial, bound: u32) -> Result<Option<u32>, GroebnerError> {
        let f = f.truncate(self.k_star);
        let mut power = Polynomial::one(f.nvars());
        for sigma in 1..=bound {
            power = self.mul_truncated(&power, &f);
            if self.contains_truncated(&power) {
                return Ok(Some(sigma));
            }
        }
        Ok(None)
    }

    /// Least `q` with `𝔪^q ⊆ I𝒪₀` (`q = 0` only for the unit ideal).
    pub fn min_q(&self) -> Result<u32, GroebnerError> {
        Ok(self.q)
    }
}

/// Orders monomials so that the *first* key is the local leading term:
/// lowest degree, ties broken by graded reverse lex (larger first).
#[derive(PartialEq, Eq)]
struct LocalKey(Monomial);

impl Ord for LocalKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .degree()
            .cmp(&other.0.degree())
            .then_with(|| other.0.grevlex_cmp(&self.0))
    }
}

impl PartialOrd for LocalKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Truncated local normal form test: reduce the local leading term of `f`
/// by the standard basis, discarding terms of degree `≥ k`. The jet
/// space is finite and each step lowers the leading term, so this
/// terminates. A leading term that no basis lead divides is a standard
/// monomial, so `f ∉ I𝒪₀`.
fn reduces_to_zero(f: &Polynomial, basis: &[(Monomial, Polynomial)], k: u32) -> bool {
    use std::collections::BTreeMap;
    use num_traits::Zero;
    let mut rest: BTreeMap<LocalKey, Rational> = f
        .terms()
        .iter()
        .filter(|(m, _)| m.degree() < k)
        .map(|(m, c)| (LocalKey(*m), c.clone()))
        .collect();
    while let Some((LocalKey(lead), c)) = rest.pop_first() {
        let Some((l, g)) = basis.iter().find(|(l, _)| l.divides(&lead)) else {
            return false;
        };
        let shift = l.quotient_of(&lead).expect("divides");
        let scale = &c / &g.coefficient(l);
        for (m, gc) in g.terms() {
            let m = m.mul(&shift);
            if m.degree() >= k || m == lead {
                continue;
            }
            let key = LocalKey(m);
            let v = rest.entry(key).or_insert_with(Rational::zero);
            *v -= &scale * gc;
            if v.is_zero() {
                rest.remove(&LocalKey(m));
            }
        }
    }
    true
}

/// Outcome of the local colength computation.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum LocalColength {
    Finite(LocalPrimary),
    /// The origin lies on a positive-dimensional component of the zero set.
    NotIsolated,
    /// The sequence climbed past the ceiling without repeating.
    CeilingExceeded { last: u64 },
}

impl LocalColength {
    pub fn finite(&self) -> Option<&LocalPrimary> {
        match self {
            LocalColength::Finite(p) => Some(p),
            _ => None,
        }
    }
}

/// Generators of `I + 𝔪^K`, with the generators of `I` truncated below
/// degree `K` (the dropped terms already lie in `𝔪^K`).
fn plus_max_power(ideal: &Ideal, k: u32) -> Ideal {
    let n = ideal.nvars();
    let mut gens: Vec<Polynomial> = ideal
        .nonzero_generators()
        .map(|g| g.truncate(k))
        .filter(|g| !g.is_zero())
        .collect();
    gens.extend(max_ideal_power(n, k));
    Ideal::with_budget(n, gens, ideal.budget())
}

/// Whether the origin is an isolated point of `V(I)` (or not on it).
///
/// A zero-dimensional ideal passes at once. Otherwise, for every variable,
/// the saturation `I : z_i^∞ = (I + (1 - t z_i)) ∩ ℚ[z]` describes the
/// closure of `V(I) ∖ {z_i = 0}`. The origin is isolated iff it lies on
/// none of these closures, i.e. each saturation has a generator that does
/// not vanish at the origin.
pub fn is_isolated_zero(ideal: &Ideal) -> Result<bool, GroebnerError> {
    let n = ideal.nvars();
    if ideal.nonzero_generators().any(|g| g.is_unit_at_origin()) {
        return Ok(true);
    }
    let gb = ideal.grevlex()?;
    if gb.is_unit() || gb.is_zero_dimensional() {
        return Ok(true);
    }
    if gb.is_zero_ideal() {
        return Ok(n == 0);
    }
    if n + 1 > crate::poly::MAX_VARS {
        return Err(GroebnerError::TooManyVariables);
    }
    let m = n + 1;
    let t = Polynomial::var(m, n);
    for i in 0..n {
        let mut gens: Vec<Polynomial> = gb.basis().iter().map(|g| g.extend(m)).collect();
        gens.push(&Polynomial::one(m) - &(&t * &Polynomial::var(m, i)));
        let sat = Ideal::with_budget(m, gens, ideal.budget());
        let sgb = sat.groebner(&MonomialOrder::block(&[n]))?;
        let hit = sgb
            .basis()
            .iter()
            .filter(|p| p.degree_in(n) == Some(0))
            .any(|p| p.is_unit_at_origin());
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A standard basis of `I·ℚ[z]_𝔪` for the local degree order (lowest
/// degree first, ties by graded reverse lex), as `(lead, element)` pairs.
///
/// This is Lazard's method. Homogenize with a new variable `t`, take a
/// Gröbner basis for [`MonomialOrder::Homogenized`], then set `t = 1`.
/// The leading term of each basis element is its lowest-degree term.
pub fn local_standard_basis(ideal: &Ideal) -> Result<Vec<(Monomial, Polynomial)>, GroebnerError> {
    let n = ideal.nvars();
    if n + 1 > crate::poly::MAX_VARS {
        return Err(GroebnerError::TooManyVariables);
    }
    let m = n + 1;
    let homogenized: Vec<Polynomial> = ideal
        .nonzero_generators()
        .map(|g| {
            let d = g.total_degree().unwrap_or(0);
            Polynomial::from_terms(
                m,
                g.terms().iter().map(|(mono, c)| {
                    let mut h = *mono;
                    h.set_exponent(n, d - mono.degree());
                    (h, c.clone())
                }),
            )
        })
        .collect();
    let order = MonomialOrder::Homogenized { t: n as u32 };
    let gb = Ideal::with_budget(m, homogenized, ideal.budget()).groebner(&order)?;
    let mut out: Vec<(Monomial, Polynomial)> = gb
        .basis()
        .iter()
        .map(|g| {
            let mut l = g.leading_term_in(&order).expect("nonzero basis element").0;
            l.set_exponent(n, 0);
            let g = Polynomial::from_terms(
                n,
                g.terms().iter().map(|(mono, c)| {
                    let mut z = *mono;
                    z.set_exponent(n, 0);
                    (z, c.clone())
                }),
            );
            (l, g)
        })
        .collect();
    out.sort_by(|a, b| a.0.grevlex_cmp(&b.0).then_with(|| a.1.num_terms().cmp(&b.1.num_terms())));
    out.dedup_by(|a, b| a.0 == b.0);
    Ok(out)
}

/// Standard monomials for `leads`, grouped by degree, or `None` when
/// there are more than `limit` of them. The set must be finite: every
/// variable needs a pure power among `leads`.
fn standard_by_degree(n: usize, leads: &[Monomial], limit: u64) -> Option<Vec<u64>> {
    if leads.iter().any(|l| l.is_one()) {
        return Some(Vec::new());
    }
    let mut by_degree: Vec<u64> = Vec::new();
    let mut count = 0u64;
    let mut frontier = vec![Monomial::one()];
    let mut seen = std::collections::HashSet::new();
    seen.insert(Monomial::one());
    while let Some(mono) = frontier.pop() {
        count += 1;
        if count > limit {
            return None;
        }
        let d = mono.degree() as usize;
        if by_degree.len() <= d {
            by_degree.resize(d + 1, 0);
        }
        by_degree[d] += 1;
        for v in 0..n {
            let mut next = mono;
            next.set_exponent(v, mono.exponent(v) + 1);
            if !leads.iter().any(|l| l.divides(&next)) && seen.insert(next) {
                frontier.push(next);
            }
        }
    }
    Some(by_degree)
}

/// Jet spaces up to this many monomials are tried before the standard
/// basis. Small local colengths usually stabilize well below it, even
/// when the ideal has many zeros away from the origin (which is what
/// makes the standard basis expensive).
const SMALL_JET_SPACE: u128 = 120;

/// Computes the local colength.
///
/// There are two certificates, and the cheaper one is tried first:
/// * The truncation sequence: `d_K = d_{K+1}` for the dimensions of the
///   `𝔪^K`-truncated quotients gives `𝔪^K ⊆ I𝒪₀` by Nakayama. It is
///   tried while the jet space `ℚ[z]/𝔪^{K+1}` stays small.
/// * A local standard basis: `I𝒪₀` is `𝔪`-primary iff every variable
///   has a pure power among the leading monomials. The colength is the
///   number of standard monomials, `𝔪^q ⊆ I𝒪₀` iff every monomial of
///   degree `q` is a leading monomial, and `d_K` counts the standard
///   monomials of degree below `K`.
///
/// If the standard basis exceeds the budget, truncation continues up to
/// `ceiling`, which bounds both the values `d_K` and the number of steps.
pub fn local_colength(ideal: &Ideal, ceiling: u64) -> Result<LocalColength, GroebnerError> {
    let n = ideal.nvars();
    if ideal.nonzero_generators().any(|g| g.is_unit_at_origin()) {
        let unit = vec![(Monomial::one(), Polynomial::one(n))];
        return Ok(LocalColength::Finite(LocalPrimary::from_standard_basis(ideal.clone(), unit, 0, vec![0, 0])));
    }
    let jet_space = |k: u32| crate::invariants::binomial(k as u64 + n as u64, n as u64);
    if let Some(found) = truncation_sequence(ideal, ceiling, |k| jet_space(k) <= SMALL_JET_SPACE) {
        return Ok(found);
    }
    match colength_by_standard_basis(ideal, ceiling) {
        Err(e) if e.is_budget() => colength_by_truncation(ideal, ceiling),
        other => other,
    }
}

/// Runs the truncation sequence while `keep_going(K)` holds. Returns
/// `None` if it stops without a verdict.
fn truncation_sequence(ideal: &Ideal, ceiling: u64, keep_going: impl Fn(u32) -> bool) -> Option<LocalColength> {
    let n = ideal.nvars();
    let mut sequence: Vec<u64> = Vec::new();
    let mut prev: Option<TruncatedSpan> = None;
    for k in 1u32.. {
        if !keep_going(k) {
            return None;
        }
        let span = TruncatedSpan::new(n, ideal.nonzero_generators(), k);
        let d = span.quotient_dimension();
        sequence.push(d);
        if let Some(pspan) = prev.take() {
            if d == pspan.quotient_dimension() {
                return Some(LocalColength::Finite(LocalPrimary::from_span(ideal.clone(), pspan, sequence)));
            }
        }
        if d > ceiling || k as u64 > ceiling + 1 {
            return Some(LocalColength::CeilingExceeded { last: d });
        }
        prev = Some(span);
    }
    unreachable!()
}

/// The standard-basis path alone (no truncation shortcut).
pub(crate) fn colength_by_standard_basis(ideal: &Ideal, ceiling: u64) -> Result<LocalColength, GroebnerError> {
    let n = ideal.nvars();
    let basis = local_standard_basis(ideal)?;
    let leads: Vec<Monomial> = basis.iter().map(|(l, _)| *l).collect();
    if !(0..n).all(|v| leads.iter().any(|l| l.exponent(v) > 0 && l.degree() == l.exponent(v))) {
        return Ok(LocalColength::NotIsolated);
    }
    let Some(by_degree) = standard_by_degree(n, &leads, ceiling) else {
        return Ok(LocalColength::CeilingExceeded { last: ceiling + 1 });
    };
    let q = by_degree.len() as u32;
    let sequence: Vec<u64> = (1..=q.max(1) + 1)
        .map(|k| by_degree.iter().take(k as usize).sum())
        .collect();
    Ok(LocalColength::Finite(LocalPrimary::from_standard_basis(ideal.clone(), basis, q, sequence)))
}

pub(crate) fn colength_by_truncation(ideal: &Ideal, ceiling: u64) -> Result<LocalColength, GroebnerError> {
    if !is_isolated_zero(ideal)? {
        return Ok(LocalColength::NotIsolated);
    }
    Ok(truncation_sequence(ideal, ceiling, |_| true).expect("runs until a verdict"))
}

/// True when some generator does not vanish at the origin, i.e. the germ
/// ideal is the whole local ring.
pub fn is_local_unit(ideal: &Ideal) -> bool {
    ideal.nonzero_generators().any(|g| g.is_unit_at_origin())
}

/// `f ∈ (g)·𝒪₀` iff `g / gcd(f, g)` does not vanish at the origin.
pub fn principal_local_member(f: &Polynomial, g: &Polynomial) -> bool {
    if f.is_zero() {
        return true;
    }
    if g.is_zero() {
        return false;
    }
    let d = gcd(f, g);
    let cofactor = g
        .exact_divide(&d)
        .expect("nonzero gcd")
        .expect("gcd divides");
    cofactor.is_unit_at_origin()
}

/// Germ membership `f ∈ I·𝒪₀` for an arbitrary ideal.
pub fn local_member(f: &Polynomial, ideal: &Ideal) -> Result<bool, GroebnerError> {
    if f.is_zero() || is_local_unit(ideal) {
        return Ok(true);
    }
    let gens: Vec<&Polynomial> = ideal.nonzero_generators().collect();
    match gens.len() {
        0 => return Ok(false),
        1 => return Ok(principal_local_member(f, gens[0])),
        _ => {}
    }
    if ideal.contains(f)? {
        return Ok(true);
    }
    let q = quotient(ideal, f)?;
    Ok(is_local_unit(&q))
}

/// Least `σ ≤ bound` with `f^σ ∈ I·𝒪₀`, for an arbitrary ideal.
pub fn minimal_local_power(f: &Polynomial, ideal: &Ideal, bound: u32) -> Result<Option<u32>, GroebnerError> {
    let gens: Vec<&Polynomial> = ideal.nonzero_generators().collect();
    if gens.len() == 1 {
        let g = gens[0];
        let mut power = Polynomial::one(f.nvars());
        for sigma in 1..=bound {
            power = &power * f;
            if principal_local_member(&power, g) {
                return Ok(Some(sigma));
            }
        }
        return Ok(None);
    }
    for sigma in 1..=bound {
        if local_member(&f.pow(sigma), ideal)? {
            return Ok(Some(sigma));
        }
    }
    Ok(None)
}

