//! The four appendix propositions as decidable checks.
//!
//! All four are statements about germs at the origin, so membership is
//! decided in the local ring through the truncated-span representation
//! (`LocalPrimary`). A precondition that fails is reported as
//! [`CheckError::Precondition`]. That is a skip, not a failure.

use crate::groebner::local::{local_colength, LocalPrimary};
use crate::groebner::truncated::TruncatedSpan;
use crate::groebner::{Budget, GroebnerError, Ideal};
use crate::poly::{jacobian_determinant, minor_jacobian, PolyError, Polynomial};

pub const COLENGTH_CEILING: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("internal: {0}")]
    Internal(String),
}

impl From<GroebnerError> for CheckError {
    fn from(e: GroebnerError) -> Self {
        if e.is_budget() {
            CheckError::Resource(e.to_string())
        } else {
            CheckError::Internal(e.to_string())
        }
    }
}

impl From<PolyError> for CheckError {
    fn from(e: PolyError) -> Self {
        CheckError::Internal(e.to_string())
    }
}

/// Certifies that `(gens)𝒪₀` has finite colength.
pub fn primary(n: usize, gens: Vec<Polynomial>, budget: Budget, what: &str) -> Result<LocalPrimary, CheckError> {
    local_colength(&Ideal::with_budget(n, gens, budget), COLENGTH_CEILING)?
        .finite()
        .cloned()
        .ok_or_else(|| CheckError::Precondition(format!("{what} does not have finite colength at the origin")))
}

fn nvars(polys: &[Polynomial]) -> Result<usize, CheckError> {
    polys
        .first()
        .map(|p| p.nvars())
        .ok_or_else(|| CheckError::Precondition("empty polynomial list".into()))
}

/// `ρ·J(g) ∈ (g)𝒪₀` whenever `(g)` is `𝔪`-primary and `ρ` vanishes on its
/// zero set.
///
/// The zero-set hypothesis becomes radical membership, which is decidable
/// (Nullstellensatz). For an `𝔪`-primary germ the radical is `𝔪`, so the
/// test is `ρ^k ∈ (g)𝒪₀` for some `k ≤ K*`.
pub fn check_a1(g: &[Polynomial], rho: &Polynomial, budget: Budget) -> Result<bool, CheckError> {
    let n = nvars(g)?;
    if g.len() != n {
        return Err(CheckError::Precondition(format!("need {n} functions, got {}", g.len())));
    }
    let lp = primary(n, g.to_vec(), budget, "(g)")?;
    if lp.minimal_power(rho, lp.k_star().max(1))?.is_none() {
        return Err(CheckError::Precondition("ρ does not vanish on the zero set".into()));
    }
    let j = jacobian_determinant(g)?;
    Ok(lp.contains(&(rho * &j))?)
}

/// Result of [`check_a2`]. The proposition is `power_in_gradient`. The
/// first flag records the intermediate membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct A2Outcome {
    pub f_in_gradient: bool,
    pub power_in_gradient: bool,
}

/// `f^{n+1} ∈ (∂f/∂z_1, …, ∂f/∂z_n)𝒪₀` for `f(0) = 0` with an isolated
/// critical point at the origin.
pub fn check_a2(f: &Polynomial, budget: Budget) -> Result<A2Outcome, CheckError> {
    let n = f.nvars();
    if !num_traits::Zero::is_zero(&f.constant_term()) {
        return Err(CheckError::Precondition("f(0) ≠ 0".into()));
    }
    let grad = (0..n).map(|i| f.derivative(i)).collect::<Result<Vec<_>, _>>()?;
    let lp = primary(n, grad, budget, "the gradient ideal")?;
    let f_in = lp.contains(f)?;
    let power = lp.minimal_power(f, n as u32 + 1)?;
    Ok(A2Outcome {
        f_in_gradient: f_in,
        power_in_gradient: power.is_some(),
    })
}

/// All `ν × ν` minors `∂(F_S)/∂(z_V)` for `|S| = |V| = ν`.
pub fn minor_ideal(f: &[Polynomial], nu: usize) -> Result<Vec<Polynomial>, CheckError> {
    let n = nvars(f)?;
    let mut out = Vec::new();
    for s in subsets(f.len(), nu) {
        let fs: Vec<Polynomial> = s.iter().map(|&i| f[i].clone()).collect();
        for v in subsets(n, nu) {
            let m = minor_jacobian(&fs, &v)?;
            if !m.is_zero() && !out.contains(&m) {
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// The least `k ≤ bound` with `𝔪^k ⊆ J_ν 𝒪₀`, where `J_ν` is generated by
/// all `ν × ν` minor Jacobians of `F`. `None` means no such power up to the
/// bound. A unit `J_ν` counts as `k = 1`.
pub fn check_a3(f: &[Polynomial], nu: usize, bound: u32, budget: Budget) -> Result<Option<u32>, CheckError> {
    let n = nvars(f)?;
    if nu == 0 || nu >= n {
        return Err(CheckError::Precondition(format!("need 1 ≤ ν < n, got ν = {nu}")));
    }
    if nu > f.len() {
        return Err(CheckError::Precondition(format!("ν = {nu} exceeds the number of functions")));
    }
    primary(n, f.to_vec(), budget, "(F)")?;
    let minors = minor_ideal(f, nu)?;
    if minors.is_empty() {
        return Ok(None);
    }
    let Some(lp) = local_colength(&Ideal::with_budget(n, minors, budget), COLENGTH_CEILING)?.finite().cloned() else {
        return Ok(None);
    };
    let k = lp.min_q()?.max(1);
    Ok((k <= bound).then_some(k))
}

/// Jet spaces up to this size get an independent second membership test.
const CROSS_CHECK_JETS: u128 = 220;

/// `J(h) ∉ (h)𝒪₀` for `𝔪`-primary `(h)`.
///
/// When the jet space `ℚ[z]/𝔪^K*` is small, the answer is recomputed by
/// linear algebra on truncations. That route is independent of the
/// standard-basis route, and a disagreement is an internal error.
pub fn check_a4(h: &[Polynomial], budget: Budget) -> Result<bool, CheckError> {
    let n = nvars(h)?;
    if h.len() != n {
        return Err(CheckError::Precondition(format!("need {n} functions, got {}", h.len())));
    }
    let lp = primary(n, h.to_vec(), budget, "(h)")?;
    let j = jacobian_determinant(h)?;
    let local = lp.contains(&j)?;
    let k = lp.k_star();
    if crate::invariants::binomial(k as u64 + n as u64, n as u64) <= CROSS_CHECK_JETS {
        let span = TruncatedSpan::new(n, h.iter(), k);
        if span.contains(&j) != local {
            return Err(CheckError::Internal(format!(
                "membership of J disagrees between the standard basis and the 𝔪^{k}-truncation"
            )));
        }
    }
    Ok(!local)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
