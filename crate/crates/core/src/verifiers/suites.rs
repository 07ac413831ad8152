//! Case bodies, one function per suite.

use rand::Rng;

use super::appendix::{check_a1, check_a2, check_a3, check_a4, primary};
use super::corpus::{non_quasi_homogeneous_family, staircase_count};
use super::{ensure, Case, CaseResult, Suite, Verdict};
use crate::engine::draw_generic_combinations;
use crate::engine::rng::default_pool;
use crate::groebner::local::{local_colength, LocalColength};
use crate::invariants::{binomial, lojasiewicz_p_monomial, min_q_with_power_contained};
use crate::poly::{jacobian_determinant, Monomial, Polynomial};
use crate::rational::int;
use crate::{Budget, Ideal};

pub(super) fn run(suite: Suite, c: &mut Case) -> CaseResult {
    match suite {
        Suite::I4 => i4(c),
        Suite::I5 => i5(c),
        Suite::I6 => i6(c),
        Suite::Iii4 => iii4(c),
        Suite::Iii5 => iii5(c),
        Suite::A1 => a1(c),
        Suite::A2 => a2(c),
        Suite::A3 => a3(c),
        Suite::A4 => a4(c),
    }
}

/// Alternates `n = 2, 3`; exponents shrink with `n` to keep costs flat.
fn dimension_and_box(c: &Case, hi2: u32, hi3: u32) -> (usize, u32) {
    if c.index.is_multiple_of(2) {
        (2, hi2)
    } else {
        (3, hi3)
    }
}

fn monomial_case(c: &mut Case, hi2: u32, hi3: u32) -> (usize, Vec<u32>, Vec<Polynomial>) {
    let (n, hi) = dimension_and_box(c, hi2, hi3);
    let exps = c.sampler().exponents(n, 1, hi);
    let gens = c.sampler().monomial_ideal(&exps);
    c.echo("n", n);
    c.echo_polys("generators", &gens);
    (n, exps, gens)
}

/// `(s, q)` after checking `q ≤ s ≤ C(n+q-1, q-1)`.
fn colength_and_q(n: usize, gens: Vec<Polynomial>, budget: Budget) -> Result<(u64, u32), Verdict> {
    let lp = primary(n, gens, budget, "I")?;
    let s = lp.colength();
    let q = lp.min_q()?;
    ensure(q as u64 <= s, || format!("q = {q} > s = {s}"))?;
    let bin = binomial(n as u64 + q as u64 - 1, q as u64 - 1);
    ensure(s as u128 <= bin, || format!("s = {s} > C({}, {}) = {bin}", n as u32 + q - 1, q - 1))?;
    Ok((s, q))
}

fn i5(c: &mut Case) -> CaseResult {
    let (n, exps, gens) = monomial_case(c, 6, 4);
    let expected = staircase_count(n, &exps, &gens);
    let (s, q) = colength_and_q(n, gens, c.budget)?;
    ensure(s == expected, || format!("colength {s}, staircase count {expected}"))?;
    c.echo("s_q", (s, q));

    // The same exponent box as a non-monomial ideal: a triangular system
    // under a linear change of coordinates, whose colength is ∏ a_i.
    let mixed = c.sampler().mixed_ideal(&exps);
    c.echo_polys("mixed_generators", &mixed);
    let (s2, q2) = colength_and_q(n, mixed, c.budget)?;
    let product: u64 = exps.iter().map(|&a| a as u64).product();
    ensure(s2 == product, || format!("mixed colength {s2}, expected {product}"))?;
    c.echo("mixed_s_q", (s2, q2));
    Ok(vec!["mixed_checked"])
}

fn i4(c: &mut Case) -> CaseResult {
    let (n, _, gens) = monomial_case(c, 6, 4);
    let ideal = Ideal::with_budget(n, gens.clone(), c.budget);
    let p = lojasiewicz_p_monomial(&ideal)?;
    let lp = primary(n, gens, c.budget, "I")?;
    let q = lp.min_q()?;
    // for a monomial ideal germ and global containment coincide
    let global = min_q_with_power_contained(&ideal, q)?;
    ensure(global == Some(q), || format!("local q = {q}, global q = {global:?}"))?;
    c.echo("p_q", (p, q));
    ensure(p <= q, || format!("p = {p} > q = {q}"))?;
    ensure(q as u64 <= (n as u64 + 2) * p as u64, || format!("q = {q} > (n+2)p = {}", (n as u32 + 2) * p))?;
    Ok(if p == q { vec!["p_equals_q"] } else { vec![] })
}

fn i6(c: &mut Case) -> CaseResult {
    let (n, hi) = dimension_and_box(c, 4, 3);
    let exps = loop {
        let e = c.sampler().exponents(n, 1, hi);
        if e.iter().product::<u32>() <= 12 {
            break e;
        }
    };
    let monomial = (c.index / 2).is_multiple_of(2);
    let gens = if monomial {
        c.sampler().monomial_ideal(&exps)
    } else {
        c.sampler().mixed_ideal(&exps)
    };
    let f = c.sampler().vanishing(n, 1, 4, 3);
    c.echo("n", n);
    c.echo_polys("generators", &gens);
    c.echo("f", f.to_string());
    let lp = primary(n, gens, c.budget, "I")?;
    let m = lp.colength();
    ensure(m <= 12, || format!("generator produced colength {m} > 12"))?;
    let bound = (m * m) as u32;
    let sigma = lp.minimal_power(&f, bound)?;
    c.echo("m_sigma", (m, sigma));
    let Some(sigma) = sigma else {
        return Err(Verdict::Fail(format!("no σ ≤ m² = {bound} with f^σ ∈ I")));
    };
    let mut tags = vec![if monomial { "monomial" } else { "mixed" }];
    if sigma as u64 <= m {
        tags.push("sigma_le_m");
    }
    Ok(tags)
}

/// Draws `n` combinations of `gens` until their colength is finite and
/// at most `cap`, returning `(h, colength)`. A draw that misses is
/// treated as non-generic. Running out of draws is a failure, because the
/// claim is about a generic choice.
fn generic_draw(c: &mut Case, n: usize, gens: &[Polynomial], cap: Option<u64>) -> Result<(Vec<Polynomial>, u64, u32), Verdict> {
    const DRAWS: u32 = 6;
    let pool = default_pool();
    let mut last = String::new();
    for attempt in 0..DRAWS {
        let (h, _) = draw_generic_combinations(gens, n, &mut c.rng, &pool);
        match local_colength(&Ideal::with_budget(n, h.clone(), c.budget), super::appendix::COLENGTH_CEILING)?.finite() {
            None => last = "colength not finite".into(),
            Some(lp) if cap.is_some_and(|cap| lp.colength() > cap) => {
                last = format!("colength {} > {}", lp.colength(), cap.unwrap());
            }
            Some(lp) => return Ok((h, lp.colength(), attempt)),
        }
    }
    Err(Verdict::Fail(format!("{DRAWS} draws, none generic; last: {last}")))
}

fn ord_jacobian_bounded(c: &mut Case, h: &[Polynomial], colength: u64) -> Result<u32, Verdict> {
    let j = jacobian_determinant(h)?;
    let Some(ord) = j.ord_at_origin() else {
        return Err(Verdict::Fail("Jacobian vanishes identically".into()));
    };
    c.echo_polys("combinations", h);
    c.echo("colength_ord", (colength, ord));
    ensure(ord as u64 <= colength, || format!("ord0 J = {ord} > colength {colength}"))?;
    Ok(ord)
}

fn iii4(c: &mut Case) -> CaseResult {
    let (n, _, gens) = monomial_case(c, 6, 4);
    let p = lojasiewicz_p_monomial(&Ideal::with_budget(n, gens.clone(), c.budget))?;
    let cap = (p as u64).pow(n as u32);
    c.echo("p", p);
    let (h, colength, retries) = generic_draw(c, n, &gens, Some(cap))?;
    ord_jacobian_bounded(c, &h, colength)?;
    Ok(if retries > 0 { vec!["redrawn"] } else { vec![] })
}

fn iii5(c: &mut Case) -> CaseResult {
    let (n, hi) = dimension_and_box(c, 4, 3);
    let exps = c.sampler().exponents(n, 1, hi);
    let mut gens = c.sampler().mixed_ideal(&exps);
    let extra = c.sampler().vanishing(n, 2, 4, 2);
    gens.push(extra);
    c.echo("n", n);
    c.echo_polys("generators", &gens);
    let (h, colength, retries) = generic_draw(c, n, &gens, None)?;
    ord_jacobian_bounded(c, &h, colength)?;
    Ok(if retries > 0 { vec!["redrawn"] } else { vec![] })
}

fn a1(c: &mut Case) -> CaseResult {
    let (n, hi) = dimension_and_box(c, 4, 3);
    let exps = c.sampler().exponents(n, 1, hi);
    let g = if c.index % 4 < 2 {
        c.sampler().mixed_ideal(&exps)
    } else {
        c.sampler().triangular(&exps)
    };
    let rho = c.sampler().vanishing(n, 1, 3, 3);
    c.echo("n", n);
    c.echo_polys("g", &g);
    c.echo("rho", rho.to_string());
    let holds = check_a1(&g, &rho, c.budget)?;
    ensure(holds, || "ρ·J(g) ∉ (g)".into())?;
    Ok(vec![])
}

/// `z1^a + z2^b + t z1^c z2^d`.
fn family_member(c: &mut Case) -> (Polynomial, (u32, u32, u32, u32)) {
    let fam = non_quasi_homogeneous_family();
    let abcd = *c.sampler().choose(&fam);
    let (a, b, cc, d) = abcd;
    let t = c.sampler().coefficient();
    let f = Polynomial::from_terms(
        2,
        [
            (Monomial::var_pow(0, a), int(1)),
            (Monomial::var_pow(1, b), int(1)),
            (Monomial::from_exponents(&[cc, d]), t),
        ],
    );
    (f, abcd)
}

/// A sum of pure powers plus random higher terms after a linear change of
/// coordinates. Usually an isolated critical point; otherwise the
/// precondition check skips it.
fn random_critical_draw(c: &mut Case, n: usize) -> Polynomial {
    let hi = if n == 2 { 5 } else { 4 };
    let exps = c.sampler().exponents(n, 2, hi);
    let mut terms: Vec<(Monomial, crate::Rational)> =
        (0..n).map(|i| (Monomial::var_pow(i, exps[i]), c.sampler().coefficient())).collect();
    let lo = exps.iter().copied().min().unwrap_or(2);
    let extra = c.sampler().vanishing(n, lo, hi + 1, 2);
    terms.extend(extra.terms().iter().cloned());
    let b = c.sampler().unimodular(n);
    Polynomial::from_terms(n, terms)
        .linear_substitution(&b)
        .expect("square matrix")
}

/// A germ with an isolated critical point at the origin, redrawn (a few
/// times) when the extra terms destroy isolatedness. The second value
/// says whether a redraw happened.
fn random_critical(c: &mut Case, n: usize) -> Result<(Polynomial, bool), Verdict> {
    const DRAWS: usize = 8;
    let mut f = random_critical_draw(c, n);
    for draw in 1..=DRAWS {
        let grad = (0..n).map(|i| f.derivative(i)).collect::<Result<Vec<_>, _>>()?;
        let ideal = Ideal::with_budget(n, grad, c.budget);
        if matches!(local_colength(&ideal, super::appendix::COLENGTH_CEILING)?, LocalColength::Finite(_)) {
            return Ok((f, draw > 1));
        }
        if draw < DRAWS {
            f = random_critical_draw(c, n);
        }
    }
    Ok((f, true))
}

fn a2(c: &mut Case) -> CaseResult {
    match c.index % 3 {
        0 => {
            let (f, abcd) = family_member(c);
            c.echo("n", 2);
            c.echo("family_abcd", abcd);
            c.echo("f", f.to_string());
            let o = check_a2(&f, c.budget)?;
            ensure(o.power_in_gradient, || "f^3 ∉ (∇f)".into())?;
            ensure(!o.f_in_gradient, || "f ∈ (∇f) for a non-quasi-homogeneous f".into())?;
            Ok(vec!["non_quasi_homogeneous"])
        }
        k => {
            let n = k + 1;
            let (f, redrawn) = random_critical(c, n)?;
            c.echo("n", n);
            c.echo("f", f.to_string());
            let o = check_a2(&f, c.budget)?;
            ensure(o.power_in_gradient, || format!("f^{} ∉ (∇f)", n + 1))?;
            let mut tags = vec![if o.f_in_gradient { "f_in_gradient" } else { "f_not_in_gradient" }];
            if redrawn {
                tags.push("redrawn");
            }
            Ok(tags)
        }
    }
}

fn a3(c: &mut Case) -> CaseResult {
    let n = 2 + c.index % 2;
    let nu = c.rng.gen_range(1..n);
    let f: Vec<Polynomial> = (0..n)
        .map(|_| {
            let d = c.rng.gen_range(2..=3);
            c.sampler().dense_form(n, d)
        })
        .collect();
    c.echo("n", n);
    c.echo("nu", nu);
    c.echo_polys("F", &f);
    let k = check_a3(&f, nu, 64, c.budget)?;
    c.echo("k", k);
    ensure(k.is_some(), || "no power of 𝔪 up to 𝔪^64 in the minor ideal".into())?;
    Ok(vec![if nu == 1 { "nu_1" } else { "nu_2" }])
}

fn a4(c: &mut Case) -> CaseResult {
    let (n, hi) = dimension_and_box(c, 4, 3);
    let (h, tag) = if c.index % 4 < 2 {
        let exps = c.sampler().exponents(n, 1, hi);
        (c.sampler().mixed_ideal(&exps), "mixed")
    } else {
        // gradients of the a2 inputs: the Hessian generates the socle
        let f = if n == 2 && c.index % 8 < 4 {
            family_member(c).0
        } else {
            random_critical(c, n)?.0
        };
        c.echo("f", f.to_string());
        let grad = (0..n).map(|i| f.derivative(i)).collect::<Result<Vec<_>, _>>()?;
        (grad, "gradient")
    };
    c.echo("n", n);
    c.echo_polys("h", &h);
    let holds = check_a4(&h, c.budget)?;
    ensure(holds, || "J(h) ∈ (h)".into())?;
    Ok(vec![tag])
}
