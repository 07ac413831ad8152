//! Effectivity invariants of an ideal at the origin.
//!
//! * `s`: the local colength.
//! * `q`: the least power of the maximal ideal that the ideal contains.
//! * `p`: the Łojasiewicz exponent. It is computed exactly for monomial
//!   ideals and otherwise bracketed by `⌈q/(n+2)⌉ ≤ p ≤ q`.
//! * The D'Angelo type, which is `2p`.

use serde::{Deserialize, Serialize};

use crate::groebner::local::{local_colength, LocalColength, LocalPrimary};
use crate::groebner::{monomials_of_degree, GroebnerError, Ideal};
use crate::lp::in_newton_polyhedron;
use crate::poly::Polynomial;

/// Default ceiling on colength values before giving up.
pub const DEFAULT_COLENGTH_CEILING: u64 = 4096;
/// Default largest ring dimension accepted.
pub const DEFAULT_MAX_DIMENSION: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error("colength at the origin is not certified finite")]
    NotFinite,
    #[error("generator `{0}` is not a single term")]
    NonMonomial(String),
    #[error("dimension {0} exceeds the configured maximum {1}")]
    DimensionTooLarge(usize, usize),
    #[error("inequality violated: {0}")]
    InequalityViolated(String),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// The local colength `dim 𝒪₀/I𝒪₀`, or `None` when it is not certified
/// finite within `ceiling`.
pub fn colength_at_origin(ideal: &Ideal, ceiling: u64) -> Result<Option<u64>, GroebnerError> {
    Ok(local_colength(ideal, ceiling)?.finite().map(|p| p.colength()))
}

/// Least `q ≤ bound` with every monomial of degree `q` in `I` (global
/// membership).
pub fn min_q_with_power_contained(ideal: &Ideal, bound: u32) -> Result<Option<u32>, GroebnerError> {
    let n = ideal.nvars();
    let gb = ideal.grevlex()?;
    for q in 1..=bound {
        let all = monomials_of_degree(n, q)
            .into_iter()
            .all(|m| gb.contains(&Polynomial::term(n, m, crate::rational::int(1))));
        if all {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

fn monomial_exponents(ideal: &Ideal) -> Result<Vec<Vec<u32>>, InvariantError> {
    let n = ideal.nvars();
    ideal
        .nonzero_generators()
        .map(|g| {
            if g.is_monomial() {
                Ok(g.terms()[0].0.exponents(n))
            } else {
                Err(InvariantError::NonMonomial(g.to_string()))
            }
        })
        .collect()
}

pub fn is_monomial_ideal(ideal: &Ideal) -> bool {
    ideal.nonzero_generators().all(|g| g.is_monomial())
}

/// Łojasiewicz exponent of an `𝔪`-primary monomial ideal: the least `p`
/// such that every exponent vector of degree `p` lies in the Newton
/// polyhedron of the generators.
pub fn lojasiewicz_p_monomial(ideal: &Ideal) -> Result<u32, InvariantError> {
    let points = monomial_exponents(ideal)?;
    let n = ideal.nvars();
    // Finite colength for a monomial ideal means a pure power of every
    // variable is present; that also bounds the search.
    let mut bound = 0;
    for v in 0..n {
        let pure = points
            .iter()
            .filter(|g| g[v] > 0 && g.iter().enumerate().all(|(i, &e)| i == v || e == 0))
            .map(|g| g[v])
            .min()
            .ok_or(InvariantError::NotFinite)?;
        bound = bound.max(pure);
    }
    for p in 1..=bound {
        let all = monomials_of_degree(n, p)
            .iter()
            .all(|m| in_newton_polyhedron(&points, &m.exponents(n)));
        if all {
            return Ok(p);
        }
    }
    Ok(bound)
}

/// Exact value or a closed interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bracket {
    Exact(u32),
    Interval(u32, u32),
}

impl Bracket {
    pub fn exact(&self) -> Option<u32> {
        match self {
            Bracket::Exact(v) => Some(*v),
            Bracket::Interval(..) => None,
        }
    }

    pub fn bounds(&self) -> (u32, u32) {
        match *self {
            Bracket::Exact(v) => (v, v),
            Bracket::Interval(lo, hi) => (lo, hi),
        }
    }

    fn doubled(&self) -> Bracket {
        match *self {
            Bracket::Exact(v) => Bracket::Exact(2 * v),
            Bracket::Interval(lo, hi) => Bracket::Interval(2 * lo, 2 * hi),
        }
    }
}

impl std::fmt::Display for Bracket {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bracket::Exact(v) => write!(f, "{v}"),
            Bracket::Interval(lo, hi) => write!(f, "[{lo}, {hi}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub statement: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub n: usize,
    pub colength_s: u64,
    pub q_power: u32,
    pub p_exponent: Bracket,
    pub dangelo_type: Bracket,
    pub monomial: bool,
    pub colength_sequence: Vec<u64>,
    pub checks: Vec<InequalityCheck>,
}

/// `C(a, b)`, saturating.
pub fn binomial(a: u64, b: u64) -> u128 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc.saturating_mul((a - i) as u128) / (i as u128 + 1);
    }
    acc
}

#[derive(Debug, Clone, Copy)]
pub struct InvariantConfig {
    pub colength_ceiling: u64,
    pub max_dimension: usize,
}

impl Default for InvariantConfig {
    fn default() -> Self {
        InvariantConfig {
            colength_ceiling: DEFAULT_COLENGTH_CEILING,
            max_dimension: DEFAULT_MAX_DIMENSION,
        }
    }
}

/// Certifies finite colength and returns the local data, or
/// [`InvariantError::NotFinite`].
pub fn certify_primary(ideal: &Ideal, config: &InvariantConfig) -> Result<LocalPrimary, InvariantError> {
    if ideal.nvars() > config.max_dimension {
        return Err(InvariantError::DimensionTooLarge(ideal.nvars(), config.max_dimension));
    }
    match local_colength(ideal, config.colength_ceiling)? {
        LocalColength::Finite(lp) => Ok(lp),
        _ => Err(InvariantError::NotFinite),
    }
}

/// Assembles `(s, q, p, type)` and checks `p ≤ q ≤ (n+2)p` and
/// `q ≤ s ≤ C(n+q-1, q-1)`; any violation is an error.
pub fn invariant_report(ideal: &Ideal, config: &InvariantConfig) -> Result<InvariantReport, InvariantError> {
    let n = ideal.nvars();
    let lp = certify_primary(ideal, config)?;
    let s = lp.colength();
    if s == 0 {
        return Err(InvariantError::NotFinite);
    }
    let q = lp.min_q()?;
    let monomial = is_monomial_ideal(ideal);
    let p = if monomial {
        Bracket::Exact(lojasiewicz_p_monomial(ideal)?)
    } else {
        Bracket::Interval(q.div_ceil(n as u32 + 2), q)
    };
    let (plo, phi) = p.bounds();
    let bin = binomial((n as u64) + q as u64 - 1, q as u64 - 1);
    let checks = vec![
        InequalityCheck {
            name: "p<=q<=(n+2)p".into(),
            statement: format!("{p} <= {q} <= {}*{p}", n + 2),
            holds: phi <= q && (q as u64) <= (n as u64 + 2) * plo as u64,
        },
        InequalityCheck {
            name: "q<=s".into(),
            statement: format!("{q} <= {s}"),
            holds: q as u64 <= s,
        },
        InequalityCheck {
            name: "s<=C(n+q-1,q-1)".into(),
            statement: format!("{s} <= C({}, {}) = {bin}", n as u32 + q - 1, q - 1),
            holds: (s as u128) <= bin,
        },
    ];
    if let Some(bad) = checks.iter().find(|c| !c.holds) {
        return Err(InvariantError::InequalityViolated(format!("{}: {}", bad.name, bad.statement)));
    }
    Ok(InvariantReport {
        n,
        colength_s: s,
        q_power: q,
        dangelo_type: p.doubled(),
        p_exponent: p,
        monomial,
        colength_sequence: lp.sequence().to_vec(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse;

    fn ideal(gens: &[&str], n: usize) -> Ideal {
        Ideal::new(n, gens.iter().map(|g| parse(g, n).unwrap()).collect())
    }

    #[test]
    fn colength_examples() {
        assert_eq!(colength_at_origin(&ideal(&["z1", "z2"], 2), 100).unwrap(), Some(1));
        assert_eq!(colength_at_origin(&ideal(&["z1^2", "z2^3"], 2), 100).unwrap(), Some(6));
        assert_eq!(
            colength_at_origin(&ideal(&["z1^2", "z1*z2", "z2^2"], 2), 100).unwrap(),
            Some(3)
        );
        assert_eq!(colength_at_origin(&ideal(&["z1^2"], 2), 100).unwrap(), None);
    }

    #[test]
    fn q_examples() {
        assert_eq!(min_q_with_power_contained(&ideal(&["z1", "z2"], 2), 10).unwrap(), Some(1));
        assert_eq!(min_q_with_power_contained(&ideal(&["z1^2", "z2^3"], 2), 10).unwrap(), Some(4));
        assert_eq!(min_q_with_power_contained(&ideal(&["z1^2", "z2^2"], 2), 10).unwrap(), Some(3));
        assert_eq!(min_q_with_power_contained(&ideal(&["z1^2"], 2), 10).unwrap(), None);
    }

    #[test]
    fn p_examples() {
        assert_eq!(lojasiewicz_p_monomial(&ideal(&["z1", "z2"], 2)).unwrap(), 1);
        assert_eq!(lojasiewicz_p_monomial(&ideal(&["z1^2", "z2^3"], 2)).unwrap(), 3);
        assert_eq!(lojasiewicz_p_monomial(&ideal(&["z1^2", "z2^2"], 2)).unwrap(), 2);
        assert_eq!(
            lojasiewicz_p_monomial(&ideal(&["z1^3", "z2^4", "z1*z2^2"], 2)).unwrap(),
            4
        );
        assert!(matches!(
            lojasiewicz_p_monomial(&ideal(&["z1^2 + z2", "z2^2"], 2)),
            Err(InvariantError::NonMonomial(_))
        ));
    }

    #[test]
    fn reports() {
        let r = invariant_report(&ideal(&["z1", "z2"], 2), &Default::default()).unwrap();
        assert_eq!((r.colength_s, r.q_power), (1, 1));
        assert_eq!(r.p_exponent, Bracket::Exact(1));
        assert_eq!(r.dangelo_type, Bracket::Exact(2));

        let r = invariant_report(&ideal(&["z1^2", "z2^3"], 2), &Default::default()).unwrap();
        assert_eq!((r.colength_s, r.q_power), (6, 4));
        assert_eq!(r.p_exponent, Bracket::Exact(3));
        assert_eq!(r.dangelo_type, Bracket::Exact(6));
        assert!(r.checks.iter().all(|c| c.holds));
        assert_eq!(binomial(5, 3), 10);

        let r = invariant_report(&ideal(&["z1^2 + z2^3", "z2^4"], 2), &Default::default()).unwrap();
        let q = r.q_power;
        assert_eq!(r.p_exponent, Bracket::Interval(q.div_ceil(4), q));
        assert!(!r.monomial);

        assert!(matches!(
            invariant_report(&ideal(&["z1^2"], 2), &Default::default()),
            Err(InvariantError::NotFinite)
        ));
    }
}
