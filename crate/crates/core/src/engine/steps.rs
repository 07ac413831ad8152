//! The individual constructions of the algorithm, each usable on its own.
//!
//! Throughout, the fiber variable is the last coordinate. Polynomials on
//! the image side live in a ring of the same dimension `n`, with variables
//! `(u1, ..., u_{n-1}, w)`: the `u_i` stand for the values of `h_i` and `w`
//! for the fiber coordinate.

use rand_chacha::ChaCha8Rng;

use super::certificate::CofactorWitness;
use super::linalg::Matrix;
use super::rng::draw_matrix;
use super::EngineError;
use crate::groebner::local::{is_local_unit, local_colength, local_member, LocalColength};
use crate::groebner::{elimination_ideal, Budget, GroebnerError, Ideal};
use crate::poly::{gcd, minor_jacobian, Monomial, PolyError, Polynomial};
use crate::rational::{factorial, Rational};

/// Variable names of the image ring: `u1, ..., u_{n-1}, w`.
pub fn fiber_names(n: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..n).map(|i| format!("u{i}")).collect();
    names.push("w".into());
    names
}

/// `Σ_k coeffs[j][k] · gens[k]` for each row `j`.
pub fn combine(coeffs: &Matrix, gens: &[Polynomial]) -> Vec<Polynomial> {
    let nvars = gens.first().map_or(0, |g| g.nvars());
    coeffs
        .iter()
        .map(|row| {
            row.iter()
                .zip(gens)
                .fold(Polynomial::zero(nvars), |acc, (c, g)| &acc + &g.scale(c))
        })
        .collect()
}

/// `k` random combinations of the generators with coefficients from the
/// pool. Whether they are generic enough is for the caller to check.
pub fn draw_generic_combinations(
    generators: &[Polynomial],
    k: usize,
    rng: &mut ChaCha8Rng,
    pool: &[Rational],
) -> (Vec<Polynomial>, Matrix) {
    let coeffs = draw_matrix(rng, pool, k, generators.len());
    (combine(&coeffs, generators), coeffs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeierstrassImage {
    pub lambda: u32,
    /// `w^λ + Σ_{j<λ} a_j(u) w^j`, in the image ring.
    pub g: Polynomial,
}

impl WeierstrassImage {
    /// `a_0, ..., a_{λ-1}` as polynomials in the image ring (free of `w`).
    pub fn coefficients(&self) -> Vec<Polynomial> {
        let n = self.g.nvars();
        let w = n - 1;
        (0..self.lambda)
            .map(|j| {
                Polynomial::from_terms(
                    n,
                    self.g.terms().iter().filter(|(m, _)| m.exponent(w) == j).map(|(m, c)| {
                        let mut m = *m;
                        m.set_exponent(w, 0);
                        (m, c.clone())
                    }),
                )
            })
            .collect()
    }
}

/// Whether `f` has exactly one term of top degree in `var`, and that term
/// is a pure power of `var`. Returns the degree and the coefficient.
fn monic_in(f: &Polynomial, var: usize) -> Option<(u32, Rational)> {
    let lambda = f.degree_in(var)?;
    if lambda == 0 {
        return None;
    }
    let mut top = f.terms().iter().filter(|(m, _)| m.exponent(var) == lambda);
    let (m, c) = top.next()?;
    if top.next().is_some() || m.degree() != lambda {
        return None;
    }
    Some((lambda, c.clone()))
}

/// The Weierstrass polynomial of the image of `V(h̃)` under
/// `z ↦ (h_1(z), ..., h_{n-1}(z), z_n)`.
///
/// Eliminates `z_1..z_{n-1}` from `(h̃, u_i - h_i)` and returns a least-degree
/// generator that is monic in the fiber variable. `None` means no generator
/// is monic, i.e. the projection is not finite for this choice.
pub fn weierstrass_image(
    h_list: &[Polynomial],
    squarefree: &Polynomial,
    budget: Budget,
) -> Result<Option<WeierstrassImage>, GroebnerError> {
    let n = squarefree.nvars();
    assert_eq!(h_list.len() + 1, n, "need n-1 functions");
    let m = 2 * n - 1;
    if m > crate::poly::MAX_VARS {
        return Err(GroebnerError::TooManyVariables);
    }
    // ring: z_1..z_n at 0..n, u_i at n + i - 1
    let mut gens = vec![squarefree.extend(m)];
    for (i, h) in h_list.iter().enumerate() {
        gens.push(&Polynomial::var(m, n + i) - &h.extend(m));
    }
    let keep: Vec<usize> = std::iter::once(n - 1).chain(n..m).collect();
    let elim = elimination_ideal(&Ideal::with_budget(m, gens, budget), &keep)?;
    let best = elim
        .nonzero_generators()
        .filter_map(|f| monic_in(f, n - 1).map(|(l, c)| (l, c, f)))
        .min_by_key(|(l, _, _)| *l);
    let Some((lambda, lead, f)) = best else {
        return Ok(None);
    };
    let mut map = vec![0usize; m];
    map[n - 1] = n - 1;
    for i in 0..n - 1 {
        map[n + i] = i;
    }
    let g = f.scale(&lead.recip()).remap(n, &map);
    Ok(Some(WeierstrassImage { lambda, g }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainCofactor {
    /// `p(u)`, in the image ring.
    pub p: Polynomial,
    pub witness: CofactorWitness,
}

/// The minor `∂(h_1..h_{n-1})/∂(z_1..z_{n-1})` (one when `n = 1`).
pub fn slot_minor(h_list: &[Polynomial], n: usize) -> Result<Polynomial, PolyError> {
    if h_list.is_empty() {
        return Ok(Polynomial::one(n));
    }
    let vars: Vec<usize> = (0..h_list.len()).collect();
    minor_jacobian(h_list, &vars)
}

/// Whether `gcd(minor, h̃)` does not vanish at the origin, i.e. the two
/// have no common factor through the origin.
pub fn minor_condition(minor: &Polynomial, squarefree: &Polynomial) -> bool {
    !minor.is_zero() && gcd(minor, squarefree).is_unit_at_origin()
}

/// Finds `p` with `p(h_1, ..., h_{n-1}) ∈ (minor, h̃)` at the origin.
///
/// For `n = 2` this is `u1^s` with `s` minimal; in general a least-degree
/// element of `(minor, h̃, u - h) ∩ ℚ[u]`. Returns `None` when the minor
/// condition fails or no such element exists.
pub fn find_chain_cofactor(
    h_list: &[Polynomial],
    squarefree: &Polynomial,
    budget: Budget,
    colength_ceiling: u64,
    power_cap: u32,
) -> Result<Option<ChainCofactor>, EngineError> {
    let n = squarefree.nvars();
    let minor = slot_minor(h_list, n)?;
    if !minor_condition(&minor, squarefree) {
        return Ok(None);
    }
    let target = Ideal::with_budget(n, vec![minor.clone(), squarefree.clone()], budget);
    if is_local_unit(&target) {
        return Ok(Some(ChainCofactor {
            p: Polynomial::one(n),
            witness: CofactorWitness::Unit,
        }));
    }
    if n == 2 {
        let LocalColength::Finite(lp) = local_colength(&target, colength_ceiling)? else {
            return Ok(None);
        };
        let m = lp.colength();
        let bound = (m.saturating_mul(m).max(1)).min(power_cap as u64) as u32;
        let Some(s) = lp.minimal_power(&h_list[0], bound)? else {
            return Ok(None);
        };
        let p = Polynomial::term(n, Monomial::var_pow(0, s), Rational::from_integer(1.into()));
        return Ok(Some(ChainCofactor {
            p,
            witness: CofactorWitness::Power { s },
        }));
    }
    let m = 2 * n - 1;
    if m > crate::poly::MAX_VARS {
        return Err(GroebnerError::TooManyVariables.into());
    }
    let mut gens = vec![minor.extend(m), squarefree.extend(m)];
    for (i, h) in h_list.iter().enumerate() {
        gens.push(&Polynomial::var(m, n + i) - &h.extend(m));
    }
    let keep: Vec<usize> = (n..m).collect();
    let elim = elimination_ideal(&Ideal::with_budget(m, gens, budget), &keep)?;
    let Some(best) = elim
        .nonzero_generators()
        .min_by_key(|f| f.total_degree().unwrap_or(0))
    else {
        return Ok(None);
    };
    let mut map = vec![0usize; m];
    for i in 0..n - 1 {
        map[n + i] = i;
    }
    let p = best.monic().remap(n, &map);
    let mut images: Vec<Polynomial> = h_list.to_vec();
    images.push(Polynomial::var(n, n - 1));
    let ph = p.compose(&images)?;
    if !local_member(&ph, &target)? {
        return Err(EngineError::Internal(
            "eliminant does not lie in (minor, h~)".into(),
        ));
    }
    Ok(Some(ChainCofactor {
        p,
        witness: CofactorWitness::Elimination,
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainLink {
    pub nu: u32,
    /// `φ_ν = p^ν ∂_w^ν g` in the image ring.
    pub phi: Polynomial,
    /// `φ_ν(h(z), ℓ(z))` in the source ring.
    pub poly: Polynomial,
}

/// `φ_ν` for a given `ν`, in closed form.
pub fn chain_phi(g: &Polynomial, p: &Polynomial, nu: u32) -> Result<Polynomial, PolyError> {
    let w = g.nvars() - 1;
    let mut d = g.clone();
    for _ in 0..nu {
        d = d.derivative(w)?;
    }
    Ok(&p.pow(nu) * &d)
}

/// The fiber-differentiation chain `φ_ν = p · ∂_w φ_{ν-1}`, `φ_0 = g`, for
/// `ν = 1..=λ`, pulled back along `images = (h_1, ..., h_{n-1}, ℓ)`.
/// The last link is `λ! · p(h)^λ`.
pub fn fiber_chain(
    g: &Polynomial,
    lambda: u32,
    p: &Polynomial,
    images: &[Polynomial],
) -> Result<Vec<ChainLink>, EngineError> {
    let w = g.nvars() - 1;
    let mut phi = g.clone();
    let mut out = Vec::with_capacity(lambda as usize);
    for nu in 1..=lambda {
        phi = p * &phi.derivative(w)?;
        let poly = phi.compose(images)?;
        out.push(ChainLink {
            nu,
            phi: phi.clone(),
            poly,
        });
    }
    if let Some(last) = out.last() {
        let expected = &p.pow(lambda) * &Polynomial::constant(g.nvars(), factorial(lambda));
        if last.phi != expected {
            return Err(EngineError::Internal("chain terminal is not λ!·p^λ".into()));
        }
    }
    Ok(out)
}
