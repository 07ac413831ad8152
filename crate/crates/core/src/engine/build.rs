//! The engine pipeline.
//!
//! 1. Register each generator as a pre-multiplier (differential at `1/4`).
//! 2. Draw `n` generic combinations, take their Jacobian `J` and its
//!    squarefree part `h̃`.
//! 3. Short-cut: for generic `H_1..H_n`, slot `j` runs the
//!    Weierstrass/fiber-chain construction on `H` without `H_j`, producing a
//!    multiplier `p_j(H)`. Once the `p_j` cut out only the origin, every
//!    coordinate is a multiplier and so is their Jacobian, `1`.
//! 4. If no generic short-cut exists, iterate: Jacobians of combinations of
//!    generators and multipliers, then squarefree roots, until the
//!    multiplier ideal contains a power of the maximal ideal.

use super::certificate::{
    Certificate, DomainEcho, Interpretation, Node, NodeKind, Strategy, Witness,
    CERTIFICATE_SCHEMA,
};
use super::config::EngineConfig;
use super::domain::SpecialDomain;
use super::epsilon;
use super::linalg::{identity, inverse, Matrix};
use super::rng::{draw, draw_matrix, stream};
use super::steps::{
    combine, fiber_chain, fiber_names, find_chain_cofactor, minor_condition, slot_minor,
    weierstrass_image, ChainCofactor, ChainLink, WeierstrassImage,
};
use super::verify::verify_certificate;
use super::EngineError;
use crate::groebner::local::{
    local_colength, local_member, minimal_local_power, principal_local_member, LocalColength, LocalPrimary,
};
use crate::groebner::Ideal;
use crate::invariants::{is_monomial_ideal, lojasiewicz_p_monomial};
use crate::par;
use crate::poly::{jacobian_determinant, squarefree_part, Polynomial};
use crate::rational::{format_rational, Rational};

struct Ctx<'a> {
    domain: &'a SpecialDomain,
    config: &'a EngineConfig,
    pool: Vec<Rational>,
}

impl Ctx<'_> {
    fn n(&self) -> usize {
        self.domain.n
    }

    fn ideal(&self, gens: Vec<Polynomial>) -> Ideal {
        Ideal::with_budget(self.n(), gens, self.config.budget)
    }

    /// Local data when the germ of the ideal is `𝔪`-primary (or the unit
    /// ideal); `None` otherwise.
    fn primary(&self, ideal: &Ideal) -> Result<Option<LocalPrimary>, EngineError> {
        match local_colength(ideal, self.config.colength_ceiling)? {
            LocalColength::Finite(lp) => Ok(Some(lp)),
            _ => Ok(None),
        }
    }

    fn exhausted(&self, stage: &str) -> EngineError {
        EngineError::GenericityExhausted {
            stage: stage.into(),
            attempts: self.config.max_retries,
        }
    }
}

struct Builder<'a> {
    domain: &'a SpecialDomain,
    nodes: Vec<Node>,
    polys: Vec<Polynomial>,
    eps: Vec<Option<Rational>>,
}

impl<'a> Builder<'a> {
    fn push(
        &mut self,
        kind: NodeKind,
        poly: Polynomial,
        eps: Option<Rational>,
        inputs: Vec<usize>,
        witness: Witness,
    ) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node {
            id,
            kind,
            poly: self.domain.show(&poly),
            epsilon: eps.as_ref().map(epsilon::show),
            inputs,
            witness,
        });
        self.polys.push(poly);
        self.eps.push(eps);
        id
    }

    fn eps(&self, id: usize) -> Rational {
        self.eps[id].clone().expect("scalar multiplier")
    }

    fn min_eps(&self, ids: &[usize]) -> Rational {
        ids.iter().map(|&i| self.eps(i)).min().expect("nonempty")
    }

    /// `1` as a root of a multiplier that does not vanish at the origin.
    fn unit_root(&mut self, input: usize) -> usize {
        let n = self.domain.n;
        let eps = self.eps(input);
        self.push(
            NodeKind::RadicalRoot,
            Polynomial::one(n),
            Some(eps),
            vec![input],
            Witness::Root { sigma: 1 },
        )
    }
}

fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(format_rational).collect()).collect()
}

/// Runs the engine and self-verifies the certificate it produces.
pub fn run(domain: &SpecialDomain, config: &EngineConfig) -> Result<Certificate, EngineError> {
    config
        .validate()
        .map_err(|e| EngineError::InvalidDomain(format!("configuration: {e}")))?;
    if domain.n > config.max_dimension {
        return Err(EngineError::InvalidDomain(format!(
            "dimension {} exceeds the configured maximum {}",
            domain.n, config.max_dimension
        )));
    }
    let ctx = Ctx {
        domain,
        config,
        pool: config.pool(),
    };
    let n = ctx.n();
    let generator_ideal = ctx.ideal(domain.generators.clone());
    if ctx.primary(&generator_ideal)?.is_none() {
        return Err(EngineError::NotFinite);
    }

    let mut b = Builder {
        domain,
        nodes: Vec::new(),
        polys: Vec::new(),
        eps: Vec::new(),
    };
    let premultipliers: Vec<usize> = domain
        .generators
        .iter()
        .enumerate()
        .map(|(index, f)| {
            b.push(
                NodeKind::PreMultiplier,
                f.clone(),
                None,
                Vec::new(),
                Witness::Premultiplier {
                    index,
                    differential_epsilon: epsilon::show(&epsilon::quarter()),
                },
            )
        })
        .collect();

    let init = initial_jacobian(&ctx, &generator_ideal)?;
    let j_id = b.push(
        NodeKind::InitialJacobian,
        init.jacobian.clone(),
        Some(epsilon::quarter()),
        premultipliers.clone(),
        Witness::GenericJacobian {
            coefficients: matrix_strings(&init.coefficients),
            colength: init.colength,
            ord: init.ord,
            monomial_bound: init.monomial_bound,
        },
    );

    let (strategy, terminal) = if init.jacobian.is_nonzero_constant() {
        (Strategy::Immediate, j_id)
    } else if init.jacobian.is_unit_at_origin() {
        (Strategy::Immediate, b.unit_root(j_id))
    } else {
        let squarefree = squarefree_part(&init.jacobian)?;
        let j_ideal = ctx.ideal(vec![init.jacobian.clone()]);
        let sigma = minimal_local_power(&squarefree, &j_ideal, config.power_cap)?
            .ok_or_else(|| EngineError::Internal("no power of h~ lies in (J)".into()))?;
        let ht_id = b.push(
            NodeKind::SquarefreeRadical,
            squarefree.clone(),
            Some(epsilon::root(&b.eps(j_id), sigma)),
            vec![j_id],
            Witness::Root { sigma },
        );
        if let Some(lp) = ctx.primary(&ctx.ideal(vec![squarefree.clone()]))? {
            (Strategy::Shortcut, finalize(&ctx, &mut b, &[ht_id], &lp)?)
        } else {
            match shortcut(&ctx, &mut b, ht_id) {
                Ok(t) => (Strategy::Shortcut, t),
                Err(EngineError::GenericityExhausted { .. }) => {
                    let t = iterate(&ctx, &mut b, &premultipliers, ht_id)?;
                    (Strategy::Iteration, t)
                }
                Err(e) => return Err(e),
            }
        }
    };

    let cert = Certificate {
        schema: CERTIFICATE_SCHEMA.into(),
        domain: DomainEcho {
            n,
            vars: domain.vars.clone(),
            generators: domain.generator_strings(),
        },
        seed: config.seed,
        strategy,
        interpretation: Interpretation::default(),
        config: config.clone(),
        nodes: b.nodes,
        terminal,
    };
    let report = verify_certificate(&cert, domain);
    if !report.accepted {
        let why = report
            .failure
            .map(|f| f.to_string())
            .unwrap_or_else(|| "rejected".into());
        return Err(EngineError::Internal(format!("self-check failed: {why}")));
    }
    Ok(cert)
}

struct InitialChoice {
    coefficients: Matrix,
    jacobian: Polynomial,
    colength: u64,
    ord: u32,
    monomial_bound: Option<u64>,
}

/// `n` generic combinations of finite colength; identity first when there
/// are exactly `n` generators.
fn initial_jacobian(ctx: &Ctx, generator_ideal: &Ideal) -> Result<InitialChoice, EngineError> {
    let n = ctx.n();
    let gens = &ctx.domain.generators;
    let monomial_bound = if is_monomial_ideal(generator_ideal) {
        Some((lojasiewicz_p_monomial(generator_ideal)? as u64).pow(n as u32))
    } else {
        None
    };
    for attempt in 0..ctx.config.max_retries {
        let coefficients = if attempt == 0 && gens.len() == n {
            identity(n)
        } else {
            let mut rng = stream(ctx.config.seed, &format!("initial/{attempt}"));
            draw_matrix(&mut rng, &ctx.pool, n, gens.len())
        };
        let combos = combine(&coefficients, gens);
        let Some(lp) = ctx.primary(&ctx.ideal(combos.clone()))? else {
            continue;
        };
        let colength = lp.colength();
        if monomial_bound.is_some_and(|bound| colength > bound) {
            continue;
        }
        let jacobian = jacobian_determinant(&combos)?;
        let Some(ord) = jacobian.ord_at_origin() else {
            return Err(EngineError::Degenerate(
                "the Jacobian of generic combinations vanishes identically".into(),
            ));
        };
        if ord as u64 > colength {
            return Err(EngineError::Internal(format!(
                "Jacobian order {ord} exceeds colength {colength}"
            )));
        }
        return Ok(InitialChoice {
            coefficients,
            jacobian,
            colength,
            ord,
            monomial_bound,
        });
    }
    Err(ctx.exhausted("initial combinations"))
}

/// The `n` coordinates as multipliers of a locally `𝔪`-primary multiplier
/// ideal, then their Jacobian.
fn finalize(
    ctx: &Ctx,
    b: &mut Builder,
    multipliers: &[usize],
    lp: &LocalPrimary,
) -> Result<usize, EngineError> {
    let n = ctx.n();
    let base = b.min_eps(multipliers);
    let bound = ctx.config.power_bound(lp.colength());
    let mut coords = Vec::with_capacity(n);
    for i in 0..n {
        let z = Polynomial::var(n, i);
        let sigma = lp
            .minimal_power(&z, bound)?
            .ok_or_else(|| EngineError::Internal(format!("no power of z{} found", i + 1)))?;
        coords.push(b.push(
            NodeKind::CoordinateMultiplier,
            z,
            Some(epsilon::root(&base, sigma)),
            multipliers.to_vec(),
            Witness::Coordinate {
                sigma,
                coordinate: i,
            },
        ));
    }
    let final_eps = epsilon::differential(&b.min_eps(&coords));
    let vars: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(n, i)).collect();
    let jac = jacobian_determinant(&vars)?;
    Ok(b.push(
        NodeKind::FinalJacobian,
        jac,
        Some(final_eps),
        coords,
        Witness::Jacobian {},
    ))
}

struct SlotPlan {
    slot: usize,
    h_coefficients: Matrix,
    change: Matrix,
    image: WeierstrassImage,
    pullback: Polynomial,
    quotient: Polynomial,
    cofactor: ChainCofactor,
    /// `(h_1, ..., h_{n-1}, ℓ_n)` in the original coordinates.
    images: Vec<Polynomial>,
    /// `p(h)`.
    root: Polynomial,
}

fn change_of_coordinates(ctx: &Ctx, label: &str, k: u32) -> Option<(Matrix, Matrix)> {
    let n = ctx.n();
    let b = if k == 0 {
        identity(n)
    } else {
        let mut rng = stream(ctx.config.seed, &format!("{label}/b{k}"));
        draw_matrix(&mut rng, &ctx.pool, n, n)
    };
    let inv = inverse(&b)?;
    Some((b, inv))
}

/// The first coordinate change (from attempt `start` on) under which the
/// minor condition holds; returns the attempt index and the minor pulled
/// back to the original coordinates.
fn minor_screen(
    ctx: &Ctx,
    label: &str,
    h_list: &[Polynomial],
    squarefree: &Polynomial,
) -> Result<Option<(u32, Polynomial)>, EngineError> {
    for k in 0..ctx.config.max_retries {
        let Some((b, inv)) = change_of_coordinates(ctx, label, k) else {
            continue;
        };
        let h_w = h_list
            .iter()
            .map(|h| h.linear_substitution(&b))
            .collect::<Result<Vec<_>, _>>()?;
        let minor = slot_minor(&h_w, ctx.n())?;
        if minor_condition(&minor, &squarefree.linear_substitution(&b)?) {
            return Ok(Some((k, minor.linear_substitution(&inv)?)));
        }
    }
    Ok(None)
}

fn plan_slot(
    ctx: &Ctx,
    label: &str,
    slot: usize,
    h_coefficients: Matrix,
    squarefree: &Polynomial,
    start: u32,
) -> Result<Option<SlotPlan>, EngineError> {
    let n = ctx.n();
    let cfg = ctx.config;
    let h_list = combine(&h_coefficients, &ctx.domain.generators);
    for k in start..cfg.max_retries {
        let Some((b, inv)) = change_of_coordinates(ctx, label, k) else {
            continue;
        };
        let h_w = h_list
            .iter()
            .map(|h| h.linear_substitution(&b))
            .collect::<Result<Vec<_>, _>>()?;
        let ht_w = squarefree.linear_substitution(&b)?;
        let Some(cofactor) =
            find_chain_cofactor(&h_w, &ht_w, cfg.budget, cfg.colength_ceiling, cfg.power_cap)?
        else {
            continue;
        };
        let Some(image) = weierstrass_image(&h_w, &ht_w, cfg.budget)? else {
            continue;
        };
        if image.lambda > cfg.max_chain_length {
            continue;
        }
        let fiber = Polynomial::from_terms(
            n,
            inv[n - 1]
                .iter()
                .enumerate()
                .map(|(i, c)| (crate::poly::Monomial::var(i), c.clone())),
        );
        let mut images = h_list.clone();
        images.push(fiber);
        let pullback = image.g.compose(&images)?;
        let quotient = pullback.exact_divide(squarefree)?.ok_or_else(|| {
            EngineError::Internal(format!("slot {}: h~ does not divide the pullback", slot + 1))
        })?;
        let root = cofactor.p.compose(&images)?;
        return Ok(Some(SlotPlan {
            slot,
            h_coefficients,
            change: b,
            image,
            pullback,
            quotient,
            cofactor,
            images,
            root,
        }));
    }
    Ok(None)
}

fn shortcut(ctx: &Ctx, b: &mut Builder, ht_id: usize) -> Result<usize, EngineError> {
    let n = ctx.n();
    let squarefree = b.polys[ht_id].clone();
    let gens = &ctx.domain.generators;
    let mode = ctx.config.parallelism;
    for attempt in 0..ctx.config.max_retries {
        let mut rng = stream(ctx.config.seed, &format!("shortcut/{attempt}/h"));
        let big_h = draw_matrix(&mut rng, &ctx.pool, n, gens.len());
        if ctx.primary(&ctx.ideal(combine(&big_h, gens)))?.is_none() {
            continue;
        }
        let slot_coeffs: Vec<Matrix> = (0..n)
            .map(|j| {
                big_h
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != j)
                    .map(|(_, r)| r.clone())
                    .collect()
            })
            .collect();
        let labels: Vec<String> = (0..n).map(|j| format!("shortcut/{attempt}/slot{j}")).collect();

        // cheap screen: every p_j(H) lies in (M_j, h̃), so those must
        // already cut out only the origin
        let screens = par::map(mode, (0..n).collect(), |j| {
            minor_screen(ctx, &labels[j], &combine(&slot_coeffs[j], gens), &squarefree)
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
        let Some(screens) = screens.into_iter().collect::<Option<Vec<_>>>() else {
            continue;
        };
        let mut necessary = vec![squarefree.clone()];
        necessary.extend(screens.iter().map(|(_, m)| m.clone()));
        if ctx.primary(&ctx.ideal(necessary))?.is_none() {
            continue;
        }

        let plans = par::map(mode, (0..n).collect(), |j| {
            plan_slot(ctx, &labels[j], j, slot_coeffs[j].clone(), &squarefree, screens[j].0)
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
        let Some(plans) = plans.into_iter().collect::<Option<Vec<_>>>() else {
            continue;
        };

        if let Some(plan) = plans.iter().find(|p| p.root.is_unit_at_origin()) {
            let chain = fiber_chain(&plan.image.g, plan.image.lambda, &plan.cofactor.p, &plan.images)?;
            return match emit_slot(ctx, b, ht_id, plan, chain)? {
                SlotEnd::Terminal(t) => Ok(t),
                SlotEnd::Root(_) => Err(EngineError::Internal("unit root not terminal".into())),
            };
        }
        let roots: Vec<Polynomial> = plans.iter().map(|p| p.root.clone()).collect();
        let Some(lp) = ctx.primary(&ctx.ideal(roots))? else {
            continue;
        };
        let chains = par::map(mode, plans.iter().collect(), |p| {
            fiber_chain(&p.image.g, p.image.lambda, &p.cofactor.p, &p.images)
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
        let mut root_ids = Vec::with_capacity(n);
        for (plan, chain) in plans.iter().zip(chains) {
            match emit_slot(ctx, b, ht_id, plan, chain)? {
                SlotEnd::Terminal(t) => return Ok(t),
                SlotEnd::Root(r) => root_ids.push(r),
            }
        }
        return finalize(ctx, b, &root_ids, &lp);
    }
    Err(ctx.exhausted("short-cut slots"))
}

enum SlotEnd {
    Terminal(usize),
    Root(usize),
}

fn emit_slot(
    ctx: &Ctx,
    b: &mut Builder,
    ht_id: usize,
    plan: &SlotPlan,
    chain: Vec<ChainLink>,
) -> Result<SlotEnd, EngineError> {
    let n = ctx.n();
    let names = fiber_names(n);
    let lambda = plan.image.lambda;
    let ht_eps = b.eps(ht_id);
    let pb_id = b.push(
        NodeKind::WeierstrassPullback,
        plan.pullback.clone(),
        Some(ht_eps.clone()),
        vec![ht_id],
        Witness::Pullback {
            slot: plan.slot,
            h_coefficients: matrix_strings(&plan.h_coefficients),
            change_of_coordinates: matrix_strings(&plan.change),
            lambda,
            g: plan.image.g.to_string_with(&names),
            quotient: ctx.domain.show(&plan.quotient),
            cofactor: plan.cofactor.p.to_string_with(&names),
            cofactor_witness: plan.cofactor.witness.clone(),
        },
    );
    let mut prev = pb_id;
    for link in chain {
        let kind = if link.nu == lambda {
            NodeKind::ChainTerminal
        } else {
            NodeKind::FiberChainStep
        };
        let eps = epsilon::chain_step(&b.eps(prev), &ht_eps, 1);
        prev = b.push(
            kind,
            link.poly,
            Some(eps),
            vec![prev, ht_id],
            Witness::Chain {
                pullback: pb_id,
                nu: link.nu,
                phi: link.phi.to_string_with(&names),
                sigma_step: 1,
            },
        );
    }
    let terminal = prev;
    let tpoly = b.polys[terminal].clone();
    if tpoly.is_nonzero_constant() {
        return Ok(SlotEnd::Terminal(terminal));
    }
    if tpoly.is_unit_at_origin() {
        return Ok(SlotEnd::Terminal(b.unit_root(terminal)));
    }
    // the terminal is λ!·p(h)^λ, so σ ≤ λ; one test usually settles it
    let sigma = if lambda > 1 && !principal_local_member(&plan.root.pow(lambda - 1), &tpoly) {
        lambda
    } else {
        minimal_local_power(&plan.root, &ctx.ideal(vec![tpoly]), lambda)?
            .ok_or_else(|| EngineError::Internal("cofactor root not found".into()))?
    };
    let eps = epsilon::root(&b.eps(terminal), sigma);
    Ok(SlotEnd::Root(b.push(
        NodeKind::RadicalRoot,
        plan.root.clone(),
        Some(eps),
        vec![terminal],
        Witness::Root { sigma },
    )))
}

/// Jacobians of `n`-element subsets (and, failing those, of random
/// combinations) of the generators and the scalar multipliers found so
/// far, each followed by its squarefree root, until the roots cut out only
/// the origin.
fn iterate(
    ctx: &Ctx,
    b: &mut Builder,
    premultipliers: &[usize],
    ht_id: usize,
) -> Result<usize, EngineError> {
    let n = ctx.n();
    let cfg = ctx.config;
    let mut state = Iteration {
        multipliers: vec![ht_id],
        pool: premultipliers.iter().copied().chain([ht_id]).collect(),
    };
    for round in 0..cfg.iteration_rounds {
        let pool = state.pool.clone();
        let mut progress = false;
        for subset in subsets(pool.len(), n) {
            let rows: Vec<Vec<(usize, Rational)>> = subset
                .iter()
                .map(|&k| vec![(pool[k], Rational::from_integer(1.into()))])
                .collect();
            match state.try_add(ctx, b, &pool, rows)? {
                Added::Terminal(t) => return Ok(t),
                Added::Root => progress = true,
                Added::Nothing => {}
            }
        }
        if !progress {
            for attempt in 0..cfg.max_retries {
                let mut rng = stream(cfg.seed, &format!("iteration/{round}/{attempt}"));
                let rows = (0..n)
                    .map(|_| pool.iter().map(|&id| (id, draw(&mut rng, &ctx.pool))).collect())
                    .collect();
                match state.try_add(ctx, b, &pool, rows)? {
                    Added::Terminal(t) => return Ok(t),
                    Added::Root => {
                        progress = true;
                        break;
                    }
                    Added::Nothing => {}
                }
            }
        }
        if !progress {
            return Err(EngineError::GenericityExhausted {
                stage: format!("iteration round {}", round + 1),
                attempts: cfg.max_retries,
            });
        }
        let ideal = ctx.ideal(state.multipliers.iter().map(|&i| b.polys[i].clone()).collect());
        if let Some(lp) = ctx.primary(&ideal)? {
            return finalize(ctx, b, &state.multipliers, &lp);
        }
    }
    Err(EngineError::GenericityExhausted {
        stage: "iteration rounds".into(),
        attempts: cfg.iteration_rounds,
    })
}

/// All `k`-element index subsets of `0..m`, in lexicographic order.
fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::with_capacity(k), &mut out);
    out
}

struct Iteration {
    /// Roots generating the multiplier ideal.
    multipliers: Vec<usize>,
    /// Everything whose differential may enter a Jacobian.
    pool: Vec<usize>,
}

enum Added {
    Terminal(usize),
    Root,
    Nothing,
}

impl Iteration {
    fn try_add(
        &mut self,
        ctx: &Ctx,
        b: &mut Builder,
        pool: &[usize],
        rows: Vec<Vec<(usize, Rational)>>,
    ) -> Result<Added, EngineError> {
        let n = ctx.n();
        let combos: Vec<Polynomial> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .fold(Polynomial::zero(n), |acc, (id, c)| &acc + &b.polys[*id].scale(c))
            })
            .collect();
        let jac = jacobian_determinant(&combos)?;
        if jac.is_zero() {
            return Ok(Added::Nothing);
        }
        let unit = jac.is_unit_at_origin();
        let root = if unit { None } else { Some(squarefree_part(&jac)?) };
        if let Some(r) = &root {
            let current =
                ctx.ideal(self.multipliers.iter().map(|&i| b.polys[i].clone()).collect());
            if local_member(r, &current)? {
                return Ok(Added::Nothing);
            }
        }
        let inputs: Vec<usize> = pool
            .iter()
            .copied()
            .filter(|id| rows.iter().any(|row| row.iter().any(|(r, _)| r == id)))
            .collect();
        let eps = inputs
            .iter()
            .map(|&i| match b.eps[i].as_ref() {
                None => epsilon::quarter(),
                Some(e) => epsilon::differential(e),
            })
            .min()
            .expect("nonempty rows");
        let witness_rows = rows
            .iter()
            .map(|row| row.iter().map(|(id, c)| (*id, format_rational(c))).collect())
            .collect();
        let aj = b.push(
            NodeKind::AugmentedJacobian,
            jac.clone(),
            Some(eps),
            inputs,
            Witness::PoolJacobian { rows: witness_rows },
        );
        let Some(root) = root else {
            return Ok(Added::Terminal(if jac.is_nonzero_constant() {
                aj
            } else {
                b.unit_root(aj)
            }));
        };
        let sigma = minimal_local_power(&root, &ctx.ideal(vec![jac]), ctx.config.power_cap)?
            .ok_or_else(|| EngineError::Internal("no power of the root lies in (J)".into()))?;
        let r_id = b.push(
            NodeKind::SquarefreeRadical,
            root,
            Some(epsilon::root(&b.eps(aj), sigma)),
            vec![aj],
            Witness::Root { sigma },
        );
        self.multipliers.push(r_id);
        self.pool.push(r_id);
        Ok(Added::Root)
    }
}
