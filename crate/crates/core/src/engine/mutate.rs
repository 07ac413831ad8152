//! Seeded single-node corruptions of a certificate.
//!
//! Used to exercise the checker: every mutation changes exactly one node,
//! and a sound checker must reject the result at that node.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::certificate::{Certificate, Witness};
use super::{epsilon, rng};
use crate::rational::rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationKind {
    /// A radical exponent (or chain `σ_step`) lowered by one.
    SigmaDecremented,
    /// The recorded ε replaced by a strictly larger rational.
    EpsilonInflated,
    /// A nonzero term added to the node's polynomial.
    PolynomialPerturbed,
}

impl MutationKind {
    pub const ALL: [MutationKind; 3] = [
        MutationKind::SigmaDecremented,
        MutationKind::EpsilonInflated,
        MutationKind::PolynomialPerturbed,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mutation {
    pub node: usize,
    pub kind: MutationKind,
    pub description: String,
}

fn sigma_of(w: &mut Witness) -> Option<&mut u32> {
    match w {
        Witness::Root { sigma } | Witness::Coordinate { sigma, .. } => Some(sigma),
        Witness::Chain { sigma_step, .. } => Some(sigma_step),
        _ => None,
    }
}

/// Nodes a mutation of `kind` can be applied to.
pub fn targets(cert: &Certificate, kind: MutationKind) -> Vec<usize> {
    cert.nodes
        .iter()
        .filter(|node| match kind {
            MutationKind::SigmaDecremented => {
                let mut w = node.witness.clone();
                sigma_of(&mut w).is_some_and(|s| *s >= 1)
            }
            MutationKind::EpsilonInflated => node.epsilon.as_deref().and_then(epsilon::parse).is_some(),
            MutationKind::PolynomialPerturbed => true,
        })
        .map(|node| node.id)
        .collect()
}

/// Applies one mutation of `kind` chosen by `rng`; `None` if the
/// certificate has no eligible node.
pub fn mutate_one(cert: &Certificate, kind: MutationKind, rng: &mut impl Rng) -> Option<(Mutation, Certificate)> {
    let &id = targets(cert, kind).choose(rng)?;
    let mut out = cert.clone();
    let node = out.nodes.iter_mut().find(|n| n.id == id)?;
    let description = match kind {
        MutationKind::SigmaDecremented => {
            let s = sigma_of(&mut node.witness)?;
            *s -= 1;
            format!("sigma {} -> {}", *s + 1, *s)
        }
        MutationKind::EpsilonInflated => {
            let old = epsilon::parse(node.epsilon.as_deref()?)?;
            let factor = rat(rng.gen_range(3..=9), 2);
            let new = &old * &factor;
            node.epsilon = Some(epsilon::show(&new));
            format!("epsilon {} -> {}", epsilon::show(&old), epsilon::show(&new))
        }
        MutationKind::PolynomialPerturbed => {
            let var = &cert.domain.vars[rng.gen_range(0..cert.domain.vars.len())];
            let c = rng.gen_range(1..=7i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let e = rng.gen_range(1..=4u32);
            let term = format!("({c})*{var}^{e}");
            node.poly = format!("{} + {term}", node.poly);
            format!("added {term}")
        }
    };
    Some((Mutation { node: id, kind, description }, out))
}

/// `count` mutations from the stream `mutations/{label}`, cycling through
/// the three kinds and skipping kinds with no eligible node.
pub fn seeded_mutations(cert: &Certificate, seed: u64, label: &str, count: usize) -> Vec<(Mutation, Certificate)> {
    let mut rng = rng::stream(seed, &format!("mutations/{label}"));
    let kinds: Vec<MutationKind> = MutationKind::ALL
        .into_iter()
        .filter(|&k| !targets(cert, k).is_empty())
        .collect();
    if kinds.is_empty() {
        return Vec::new();
    }
    (0..count)
        .filter_map(|i| mutate_one(cert, kinds[i % kinds.len()], &mut rng))
        .collect()
}
