//! Independent replay of a certificate.
//!
//! Nodes are checked in order. Each check uses only the claimed polynomials
//! of earlier nodes, the domain and the node's own witness. Every node's
//! polynomial is recomputed from those, so any tampering shows up at the
//! node where it happened.

use std::collections::HashMap;
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde::{Deserialize, Serialize};

use super::certificate::{Certificate, CofactorWitness, Node, NodeKind, Witness, CERTIFICATE_SCHEMA};
use super::domain::SpecialDomain;
use super::epsilon;
use super::linalg::{inverse, Matrix};
use super::steps::{chain_phi, combine, fiber_names, minor_condition, slot_minor};
use crate::groebner::local::{
    is_local_unit, local_colength, local_member, LocalColength, LocalPrimary,
};
use crate::groebner::{Budget, Ideal};
use crate::invariants::{is_monomial_ideal, lojasiewicz_p_monomial};
use crate::poly::{jacobian_determinant, parse_with_names, squarefree_part, Polynomial};
use crate::rational::{factorial, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyFailure {
    /// The first node that failed, or `None` for certificate-level problems.
    pub node: Option<usize>,
    pub kind: Option<NodeKind>,
    pub reason: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.node, self.kind) {
            (Some(id), Some(kind)) => write!(f, "node {id} ({kind:?}): {}", self.reason),
            (Some(id), None) => write!(f, "node {id}: {}", self.reason),
            _ => write!(f, "{}", self.reason),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub accepted: bool,
    pub nodes_checked: usize,
    pub terminal: Option<usize>,
    pub terminal_epsilon: Option<String>,
    pub failure: Option<VerifyFailure>,
}

/// Checks `cert` against `domain`. Never panics.
pub fn verify_certificate(cert: &Certificate, domain: &SpecialDomain) -> VerifyReport {
    match catch_unwind(AssertUnwindSafe(|| Checker::new(cert, domain).run())) {
        Ok(report) => report,
        Err(_) => VerifyReport {
            accepted: false,
            nodes_checked: 0,
            terminal: None,
            terminal_epsilon: None,
            failure: Some(VerifyFailure {
                node: None,
                kind: None,
                reason: "malformed certificate (checker aborted)".into(),
            }),
        },
    }
}

/// Checks `cert` against the domain it records.
pub fn verify_standalone(cert: &Certificate) -> VerifyReport {
    let file = super::domain::DomainFile {
        schema: super::domain::DOMAIN_SCHEMA.into(),
        n: cert.domain.n,
        vars: cert.domain.vars.clone(),
        generators: cert.domain.generators.clone(),
    };
    match SpecialDomain::from_file(&file) {
        Ok(d) => verify_certificate(cert, &d),
        Err(e) => reject(None, None, 0, format!("recorded domain is invalid: {e}")),
    }
}

fn reject(node: Option<usize>, kind: Option<NodeKind>, checked: usize, reason: String) -> VerifyReport {
    VerifyReport {
        accepted: false,
        nodes_checked: checked,
        terminal: None,
        terminal_epsilon: None,
        failure: Some(VerifyFailure { node, kind, reason }),
    }
}

type Check<T = ()> = Result<T, String>;

fn ensure(cond: bool, reason: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(reason())
    }
}

/// Replay data of one short-cut slot, keyed by its pullback node.
struct Slot {
    squarefree: usize,
    lambda: u32,
    g: Polynomial,
    p: Polynomial,
    change: Matrix,
    /// `h_i(Bw)`.
    h_w: Vec<Polynomial>,
    minor_w: Polynomial,
    /// `(h_1, ..., h_{n-1}, ℓ_n)` in the original coordinates.
    images: Vec<Polynomial>,
}

struct Checker<'a> {
    cert: &'a Certificate,
    domain: &'a SpecialDomain,
    n: usize,
    budget: Budget,
    polys: Vec<Polynomial>,
    eps: Vec<Option<Rational>>,
    slots: HashMap<usize, Slot>,
}

impl<'a> Checker<'a> {
    fn new(cert: &'a Certificate, domain: &'a SpecialDomain) -> Self {
        Checker {
            cert,
            domain,
            n: domain.n,
            budget: cert.config.budget,
            polys: Vec::new(),
            eps: Vec::new(),
            slots: HashMap::new(),
        }
    }

    fn run(mut self) -> VerifyReport {
        if self.cert.schema != CERTIFICATE_SCHEMA {
            return reject(None, None, 0, format!("unknown schema `{}`", self.cert.schema));
        }
        if self.cert.domain.n != self.n {
            return reject(
                None,
                None,
                0,
                format!("certificate is for n = {}, domain has n = {}", self.cert.domain.n, self.n),
            );
        }
        for (idx, node) in self.cert.nodes.iter().enumerate() {
            if let Err(reason) = self.check_node(idx, node) {
                return reject(Some(idx), Some(node.kind), idx, reason);
            }
        }
        let checked = self.cert.nodes.len();
        let t = self.cert.terminal;
        let Some(node) = self.cert.nodes.get(t) else {
            return reject(None, None, checked, format!("terminal id {t} does not exist"));
        };
        if !self.polys[t].is_nonzero_constant() {
            return reject(Some(t), Some(node.kind), checked, "terminal polynomial is not a nonzero constant".into());
        }
        let Some(eps) = self.eps[t].clone() else {
            return reject(Some(t), Some(node.kind), checked, "terminal carries no epsilon".into());
        };
        VerifyReport {
            accepted: true,
            nodes_checked: checked,
            terminal: Some(t),
            terminal_epsilon: Some(epsilon::show(&eps)),
            failure: None,
        }
    }

    fn parse_poly(&self, text: &str) -> Check<Polynomial> {
        parse_with_names(text, &self.domain.vars).map_err(|e| format!("bad polynomial `{text}`: {e}"))
    }

    fn parse_fiber(&self, text: &str) -> Check<Polynomial> {
        parse_with_names(text, &fiber_names(self.n)).map_err(|e| format!("bad polynomial `{text}`: {e}"))
    }

    fn parse_matrix(&self, rows: &[Vec<String>], r: usize, c: usize) -> Check<Matrix> {
        ensure(rows.len() == r && rows.iter().all(|row| row.len() == c), || {
            format!("expected a {r}x{c} coefficient matrix")
        })?;
        rows.iter()
            .map(|row| {
                row.iter()
                    .map(|t| parse_rational(t).map_err(|e| e.to_string()))
                    .collect()
            })
            .collect()
    }

    fn ideal(&self, gens: Vec<Polynomial>) -> Ideal {
        Ideal::with_budget(self.n, gens, self.budget)
    }

    fn primary(&self, ideal: &Ideal) -> Check<Option<LocalPrimary>> {
        match local_colength(ideal, self.cert.config.colength_ceiling).map_err(|e| e.to_string())? {
            LocalColength::Finite(lp) => Ok(Some(lp)),
            _ => Ok(None),
        }
    }

    fn node(&self, id: usize) -> &Node {
        &self.cert.nodes[id]
    }

    fn scalar_eps(&self, id: usize) -> Check<Rational> {
        self.eps[id]
            .clone()
            .ok_or_else(|| format!("input {id} is not a scalar multiplier"))
    }

    /// `σ ≥ 1`, `f^σ ∈ I𝒪₀` and (for `σ > 1`) `f^{σ-1} ∉ I𝒪₀`.
    fn check_sigma(&self, f: &Polynomial, gens: Vec<Polynomial>, sigma: u32) -> Check {
        ensure(sigma >= 1, || "radical exponent must be at least 1".into())?;
        let ideal = self.ideal(gens);
        let lp = if is_local_unit(&ideal) || ideal.nonzero_generators().count() <= 1 {
            None
        } else {
            self.primary(&ideal)?
        };
        let member = |e: u32| -> Check<bool> {
            let fe = f.pow(e);
            match &lp {
                Some(lp) => lp.contains(&fe).map_err(|e| e.to_string()),
                None => local_member(&fe, &ideal).map_err(|e| e.to_string()),
            }
        };
        ensure(member(sigma)?, || format!("f^{sigma} is not in the ideal of its inputs"))?;
        if sigma > 1 {
            ensure(!member(sigma - 1)?, || {
                format!("sigma = {sigma} is not minimal: f^{} already lies in the ideal", sigma - 1)
            })?;
        }
        Ok(())
    }

    fn check_node(&mut self, idx: usize, node: &Node) -> Check {
        ensure(node.id == idx, || format!("id {} out of sequence", node.id))?;
        for &i in &node.inputs {
            ensure(i < idx, || format!("input {i} does not precede the node"))?;
        }
        let poly = self.parse_poly(&node.poly)?;
        let eps = match &node.epsilon {
            None => None,
            Some(t) => {
                let e = epsilon::parse(t).ok_or_else(|| format!("bad epsilon `{t}`"))?;
                ensure(epsilon::is_valid(&e), || format!("epsilon {t} outside (0, 1]"))?;
                Some(e)
            }
        };
        let n_gens = self.domain.generators.len();
        ensure((idx < n_gens) == (node.kind == NodeKind::PreMultiplier), || {
            format!("the first {n_gens} nodes must be the pre-multipliers, in order")
        })?;
        if node.kind != NodeKind::PreMultiplier {
            ensure(eps.is_some(), || "missing epsilon".into())?;
        }
        let expected_eps = self.check_kind(idx, node, &poly)?;
        ensure(eps == expected_eps, || {
            format!(
                "epsilon {} does not match the replayed value {}",
                node.epsilon.as_deref().unwrap_or("null"),
                expected_eps.as_ref().map_or("null".into(), epsilon::show)
            )
        })?;
        self.polys.push(poly);
        self.eps.push(eps);
        Ok(())
    }

    /// Kind-specific checks; returns the expected epsilon.
    fn check_kind(&mut self, idx: usize, node: &Node, poly: &Polynomial) -> Check<Option<Rational>> {
        let n = self.n;
        let same = |computed: &Polynomial| {
            ensure(computed == poly, || {
                format!("polynomial does not match the recomputed {}", self.domain.show(computed))
            })
        };
        match (node.kind, &node.witness) {
            (NodeKind::PreMultiplier, Witness::Premultiplier { index, differential_epsilon }) => {
                ensure(*index == idx, || "generator index out of order".into())?;
                ensure(node.inputs.is_empty(), || "pre-multipliers have no inputs".into())?;
                same(&self.domain.generators[*index])
                    .map_err(|_| format!("pre-multiplier does not match generator {}", index + 1))?;
                ensure(
                    epsilon::parse(differential_epsilon) == Some(epsilon::quarter()),
                    || "generator differentials carry 1/4".into(),
                )?;
                Ok(None)
            }
            (
                NodeKind::InitialJacobian,
                Witness::GenericJacobian { coefficients, colength, ord, monomial_bound },
            ) => {
                let gens = &self.domain.generators;
                let expected_inputs: Vec<usize> = (0..gens.len()).collect();
                ensure(node.inputs == expected_inputs, || "inputs must be all pre-multipliers".into())?;
                let c = self.parse_matrix(coefficients, n, gens.len())?;
                let combos = combine(&c, gens);
                let lp = self
                    .primary(&self.ideal(combos.clone()))?
                    .ok_or("combinations do not have finite colength")?;
                ensure(lp.colength() == *colength, || {
                    format!("colength is {}, witness says {colength}", lp.colength())
                })?;
                let jac = jacobian_determinant(&combos).map_err(|e| e.to_string())?;
                same(&jac)?;
                let o = jac.ord_at_origin().ok_or("Jacobian vanishes identically")?;
                ensure(o == *ord, || format!("order is {o}, witness says {ord}"))?;
                ensure(o as u64 <= *colength, || "order exceeds the colength".into())?;
                let gi = self.ideal(gens.clone());
                let bound = if is_monomial_ideal(&gi) {
                    let p = lojasiewicz_p_monomial(&gi).map_err(|e| e.to_string())?;
                    Some((p as u64).pow(n as u32))
                } else {
                    None
                };
                ensure(bound == *monomial_bound, || "wrong monomial colength bound".into())?;
                if let Some(b) = bound {
                    ensure(*colength <= b, || format!("colength {colength} exceeds p^n = {b}"))?;
                }
                Ok(Some(epsilon::quarter()))
            }
            (NodeKind::AugmentedJacobian, Witness::PoolJacobian { rows }) => {
                ensure(rows.len() == n, || format!("need {n} rows"))?;
                ensure(!node.inputs.is_empty(), || "no inputs".into())?;
                let mut combos = Vec::with_capacity(n);
                for row in rows {
                    let mut acc = Polynomial::zero(n);
                    for (id, c) in row {
                        ensure(node.inputs.contains(id), || format!("row uses {id}, not an input"))?;
                        let c = parse_rational(c).map_err(|e| e.to_string())?;
                        acc = &acc + &self.polys[*id].scale(&c);
                    }
                    combos.push(acc);
                }
                same(&jacobian_determinant(&combos).map_err(|e| e.to_string())?)?;
                ensure(!poly.is_zero(), || "zero Jacobian".into())?;
                let mut min: Option<Rational> = None;
                for &i in &node.inputs {
                    let e = match &self.eps[i] {
                        None => epsilon::quarter(),
                        Some(e) => epsilon::differential(e),
                    };
                    min = Some(min.map_or(e.clone(), |m: Rational| m.min(e)));
                }
                Ok(min)
            }
            (NodeKind::SquarefreeRadical, Witness::Root { sigma }) => {
                let [x] = node.inputs[..] else {
                    return Err("needs exactly one input".into());
                };
                ensure(
                    matches!(self.node(x).kind, NodeKind::InitialJacobian | NodeKind::AugmentedJacobian),
                    || "input must be a Jacobian".into(),
                )?;
                same(&squarefree_part(&self.polys[x]).map_err(|e| e.to_string())?)?;
                self.check_sigma(poly, vec![self.polys[x].clone()], *sigma)?;
                Ok(Some(epsilon::root(&self.scalar_eps(x)?, *sigma)))
            }
            (NodeKind::RadicalRoot, Witness::Root { sigma }) => {
                let [x] = node.inputs[..] else {
                    return Err("needs exactly one input".into());
                };
                let input = &self.polys[x];
                if input.is_unit_at_origin() {
                    same(&Polynomial::one(n))?;
                } else {
                    ensure(self.node(x).kind == NodeKind::ChainTerminal, || {
                        "roots are taken of chain terminals or of units".into()
                    })?;
                    let Witness::Chain { pullback, .. } = &self.node(x).witness else {
                        return Err("input is not a chain node".into());
                    };
                    let slot = self.slots.get(pullback).ok_or("unknown slot")?;
                    same(&slot.p.compose(&slot.images).map_err(|e| e.to_string())?)?;
                }
                self.check_sigma(poly, vec![input.clone()], *sigma)?;
                Ok(Some(epsilon::root(&self.scalar_eps(x)?, *sigma)))
            }
            (NodeKind::CoordinateMultiplier, Witness::Coordinate { sigma, coordinate }) => {
                ensure(*coordinate < n, || "coordinate out of range".into())?;
                ensure(!node.inputs.is_empty(), || "no inputs".into())?;
                same(&Polynomial::var(n, *coordinate))?;
                let mut min: Option<Rational> = None;
                for &i in &node.inputs {
                    let e = self.scalar_eps(i)?;
                    min = Some(min.map_or(e.clone(), |m: Rational| m.min(e)));
                }
                let gens = node.inputs.iter().map(|&i| self.polys[i].clone()).collect();
                self.check_sigma(poly, gens, *sigma)?;
                Ok(min.map(|m| epsilon::root(&m, *sigma)))
            }
            (NodeKind::FinalJacobian, Witness::Jacobian {}) => {
                ensure(node.inputs.len() == n, || format!("needs {n} inputs"))?;
                let mut seen = vec![false; n];
                for &i in &node.inputs {
                    let Witness::Coordinate { coordinate, .. } = self.node(i).witness else {
                        return Err(format!("input {i} is not a coordinate multiplier"));
                    };
                    ensure(!seen[coordinate], || "repeated coordinate".into())?;
                    seen[coordinate] = true;
                }
                let fs: Vec<Polynomial> = node.inputs.iter().map(|&i| self.polys[i].clone()).collect();
                same(&jacobian_determinant(&fs).map_err(|e| e.to_string())?)?;
                let mut min: Option<Rational> = None;
                for &i in &node.inputs {
                    let e = self.scalar_eps(i)?;
                    min = Some(min.map_or(e.clone(), |m: Rational| m.min(e)));
                }
                Ok(min.map(|m| epsilon::differential(&m)))
            }
            (NodeKind::WeierstrassPullback, w @ Witness::Pullback { .. }) => {
                self.check_pullback(idx, node, poly, w)
            }
            (
                NodeKind::FiberChainStep | NodeKind::ChainTerminal,
                Witness::Chain { pullback, nu, phi, sigma_step },
            ) => self.check_chain(node, poly, *pullback, *nu, phi, *sigma_step),
            (kind, _) => Err(format!("witness does not fit node kind {kind:?}")),
        }
    }

    fn check_pullback(
        &mut self,
        idx: usize,
        node: &Node,
        poly: &Polynomial,
        witness: &Witness,
    ) -> Check<Option<Rational>> {
        let Witness::Pullback {
            slot,
            h_coefficients,
            change_of_coordinates,
            lambda,
            g,
            quotient,
            cofactor,
            cofactor_witness,
        } = witness
        else {
            unreachable!()
        };
        let n = self.n;
        ensure(n >= 2, || "slots need n >= 2".into())?;
        ensure(*slot < n, || "slot out of range".into())?;
        let [ht] = node.inputs[..] else {
            return Err("needs exactly one input".into());
        };
        ensure(self.node(ht).kind == NodeKind::SquarefreeRadical, || {
            "input must be a squarefree radical".into()
        })?;
        let squarefree = self.polys[ht].clone();
        let gens = &self.domain.generators;
        let hc = self.parse_matrix(h_coefficients, n - 1, gens.len())?;
        let b = self.parse_matrix(change_of_coordinates, n, n)?;
        let inv = inverse(&b).ok_or("coordinate change is singular")?;
        let g = self.parse_fiber(g)?;
        let p = self.parse_fiber(cofactor)?;
        let w = n - 1;
        ensure(*lambda >= 1 && *lambda <= self.cert.config.max_chain_length, || {
            "lambda out of range".into()
        })?;
        let top: Vec<_> = g.terms().iter().filter(|(m, _)| m.exponent(w) == *lambda).collect();
        ensure(
            g.degree_in(w) == Some(*lambda)
                && top.len() == 1
                && top[0].0.degree() == *lambda
                && top[0].1 == Rational::from_integer(1.into()),
            || format!("g is not monic of degree {lambda} in w"),
        )?;
        ensure(p.degree_in(w).unwrap_or(0) == 0 && !p.is_zero(), || {
            "cofactor must be a nonzero polynomial in u".into()
        })?;

        let h_list = combine(&hc, gens);
        let subst = |f: &Polynomial| f.linear_substitution(&b).map_err(|e| e.to_string());
        let h_w = h_list.iter().map(subst).collect::<Check<Vec<_>>>()?;
        let ht_w = subst(&squarefree)?;
        let minor_w = slot_minor(&h_w, n).map_err(|e| e.to_string())?;
        ensure(minor_condition(&minor_w, &ht_w), || {
            "minor and h~ share a factor through the origin".into()
        })?;

        // g(h(w), w) vanishes on V(h~): the image lies in {g = 0}
        let mut fiber_images = h_w.clone();
        fiber_images.push(Polynomial::var(n, w));
        let on_fiber = g.compose(&fiber_images).map_err(|e| e.to_string())?;
        ensure(
            on_fiber.exact_divide(&ht_w).map_err(|e| e.to_string())?.is_some(),
            || "g does not vanish on the image of V(h~)".into(),
        )?;

        let ell = Polynomial::from_terms(
            n,
            inv[w].iter().enumerate().map(|(i, c)| (crate::poly::Monomial::var(i), c.clone())),
        );
        let mut images = h_list.clone();
        images.push(ell);
        let pull = g.compose(&images).map_err(|e| e.to_string())?;
        ensure(&pull == poly, || "polynomial is not the pullback of g".into())?;
        let q = self.parse_poly(quotient)?;
        ensure(&(&squarefree * &q) == poly, || "h~ times the quotient is not the pullback".into())?;

        // p(h) ∈ (minor, h~) at the origin
        let target = self.ideal(vec![minor_w.clone(), ht_w.clone()]);
        let ph = p.compose(&fiber_images).map_err(|e| e.to_string())?;
        match cofactor_witness {
            CofactorWitness::Unit => {
                ensure(is_local_unit(&target), || "(minor, h~) is not a unit ideal".into())?;
                ensure(p.is_nonzero_constant(), || "unit cofactor must be constant".into())?;
            }
            CofactorWitness::Power { s } => {
                ensure(n == 2, || "power cofactors are for n = 2".into())?;
                let mut expected = Polynomial::var(n, 0).pow(*s);
                expected = expected.monic();
                ensure(p == expected, || format!("cofactor is not u1^{s}"))?;
                let lp = self.primary(&target)?.ok_or("(minor, h~) is not m-primary")?;
                let h1 = &h_w[0];
                ensure(
                    *s >= 1 && lp.contains(&h1.pow(*s)).map_err(|e| e.to_string())?,
                    || format!("h1^{s} is not in (minor, h~)"),
                )?;
                if *s > 1 {
                    ensure(!lp.contains(&h1.pow(s - 1)).map_err(|e| e.to_string())?, || {
                        format!("s = {s} is not minimal")
                    })?;
                }
            }
            CofactorWitness::Elimination => {
                ensure(
                    local_member(&ph, &target).map_err(|e| e.to_string())?,
                    || "p(h) is not in (minor, h~)".into(),
                )?;
            }
        }
        self.slots.insert(
            idx,
            Slot {
                squarefree: ht,
                lambda: *lambda,
                g,
                p,
                change: b,
                h_w,
                minor_w,
                images,
            },
        );
        Ok(Some(self.scalar_eps(ht)?))
    }

    fn check_chain(
        &self,
        node: &Node,
        poly: &Polynomial,
        pullback: usize,
        nu: u32,
        phi: &str,
        sigma_step: u32,
    ) -> Check<Option<Rational>> {
        let n = self.n;
        let slot = self.slots.get(&pullback).ok_or("chain refers to an unknown pullback")?;
        ensure(nu >= 1 && nu <= slot.lambda, || format!("nu = {nu} out of range"))?;
        ensure((node.kind == NodeKind::ChainTerminal) == (nu == slot.lambda), || {
            "only the last step is the chain terminal".into()
        })?;
        let [prev, ht] = node.inputs[..] else {
            return Err("needs inputs [previous, h~]".into());
        };
        ensure(ht == slot.squarefree, || "second input must be the slot's h~".into())?;
        if nu == 1 {
            ensure(prev == pullback, || "first step must follow the pullback".into())?;
        } else {
            match &self.node(prev).witness {
                Witness::Chain { pullback: pb, nu: pn, .. } if *pb == pullback && *pn == nu - 1 => {}
                _ => return Err("previous input is not the preceding chain step".into()),
            }
        }
        ensure(sigma_step == 1, || "sigma_step must be 1 (cofactor lies in the ideal)".into())?;

        let err = |e: crate::poly::PolyError| e.to_string();
        let claimed_phi = self.parse_fiber(phi)?;
        let expected_phi = chain_phi(&slot.g, &slot.p, nu).map_err(err)?;
        ensure(claimed_phi == expected_phi, || "phi is not p^nu d^nu g / dw^nu".into())?;
        let x = expected_phi.compose(&slot.images).map_err(err)?;
        ensure(&x == poly, || "polynomial is not phi pulled back".into())?;
        if nu == slot.lambda {
            let terminal = (&slot.p.pow(nu) * &Polynomial::constant(n, factorial(nu)))
                .compose(&slot.images)
                .map_err(err)?;
            ensure(&terminal == poly, || "terminal is not lambda! p(h)^lambda".into())?;
        }

        // replay identity in the fiber coordinates:
        // Jac(h_1..h_{n-1}, X_{ν-1}) = minor · (∂_w φ_{ν-1})(h, w)
        let w = n - 1;
        let prev_w = self.polys[prev].linear_substitution(&slot.change).map_err(err)?;
        let mut fs = slot.h_w.clone();
        fs.push(prev_w);
        let direct = jacobian_determinant(&fs).map_err(err)?;
        let mut fiber_images = slot.h_w.clone();
        fiber_images.push(Polynomial::var(n, w));
        let d_prev = chain_phi(&slot.g, &slot.p, nu - 1)
            .map_err(err)?
            .derivative(w)
            .map_err(err)?
            .compose(&fiber_images)
            .map_err(err)?;
        ensure(direct == &slot.minor_w * &d_prev, || {
            "replay identity fails: Jacobian differs from minor times fiber derivative".into()
        })?;

        let prev_eps = self.scalar_eps(prev)?;
        let ht_eps = self.scalar_eps(ht)?;
        Ok(Some(epsilon::chain_step(&prev_eps, &ht_eps, sigma_step)))
    }
}
