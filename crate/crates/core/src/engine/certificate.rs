//! The certificate: a derivation DAG of multipliers ending in a nonzero
//! constant, with enough witness data to replay every step.

use serde::{Deserialize, Serialize};

use super::config::EngineConfig;

pub const CERTIFICATE_SCHEMA: &str = "kohnlab-certificate/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    PreMultiplier,
    InitialJacobian,
    /// Jacobian of combinations of generators and earlier multipliers.
    AugmentedJacobian,
    SquarefreeRadical,
    WeierstrassPullback,
    FiberChainStep,
    ChainTerminal,
    RadicalRoot,
    CoordinateMultiplier,
    FinalJacobian,
}

impl NodeKind {
    /// Kinds whose witness carries a radical exponent.
    pub fn has_sigma(self) -> bool {
        matches!(
            self,
            NodeKind::SquarefreeRadical | NodeKind::RadicalRoot | NodeKind::CoordinateMultiplier
        )
    }
}

/// How the cofactor `p` of a slot was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum CofactorWitness {
    /// `(minor, h̃)` is the unit ideal at the origin; `p = 1`.
    Unit,
    /// `p = u1^s`, with `s` minimal such that `h_1^s ∈ (minor, h̃)` at the origin.
    Power { s: u32 },
    /// `p` is a least-degree element of `(minor, h̃, u - h) ∩ ℚ[u]`.
    Elimination,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Witness {
    Premultiplier {
        index: usize,
        differential_epsilon: String,
    },
    /// `n` combinations `C·F` of the generators.
    GenericJacobian {
        coefficients: Vec<Vec<String>>,
        colength: u64,
        ord: u32,
        /// `pⁿ` when the domain is monomial.
        monomial_bound: Option<u64>,
    },
    /// Each row is a combination `[(input id, coefficient)]`.
    PoolJacobian { rows: Vec<Vec<(usize, String)>> },
    Root { sigma: u32 },
    Coordinate { sigma: u32, coordinate: usize },
    Pullback {
        slot: usize,
        /// Coefficients of the `n-1` combinations `h_i` over the generators.
        h_coefficients: Vec<Vec<String>>,
        /// `B` in `z = B w`.
        change_of_coordinates: Vec<Vec<String>>,
        lambda: u32,
        /// Monic in `w`, over `(u1, ..., w)`.
        g: String,
        quotient: String,
        cofactor: String,
        cofactor_witness: CofactorWitness,
    },
    Chain {
        pullback: usize,
        nu: u32,
        /// Closed form `φ_ν(u, w) = p(u)^ν ∂_w^ν g`.
        phi: String,
        sigma_step: u32,
    },
    Jacobian {},
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    pub kind: NodeKind,
    pub poly: String,
    pub epsilon: Option<String>,
    pub inputs: Vec<usize>,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainEcho {
    pub n: usize,
    pub vars: Vec<String>,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Terminated by the Jacobian of the initial generic combinations.
    Immediate,
    /// The n-slot fiber-chain construction.
    Shortcut,
    /// The Jacobian/radical iteration on generators and multipliers.
    Iteration,
}

/// How the engine read the points the construction leaves open.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interpretation {
    pub chain_epsilon: String,
    pub cover_condition: String,
    pub membership: String,
}

impl Default for Interpretation {
    fn default() -> Self {
        Interpretation {
            chain_epsilon: "eps(step) = min(min(1/4, eps(prev)/2), eps(h~)) / sigma_step; \
                            sigma_step = 1 because the cofactor lies in (minor, h~)"
                .into(),
            cover_condition: "projection finite <=> eliminant monic in the fiber variable; \
                              minor condition <=> gcd(minor, h~) is a unit at the origin"
                .into(),
            membership: "all exponents are minimal for membership in the local ring at the origin"
                .into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub domain: DomainEcho,
    pub seed: u64,
    pub strategy: Strategy,
    pub interpretation: Interpretation,
    pub config: EngineConfig,
    pub nodes: Vec<Node>,
    pub terminal: usize,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn terminal_node(&self) -> Option<&Node> {
        self.nodes.get(self.terminal)
    }

    pub fn terminal_epsilon(&self) -> Option<&str> {
        self.terminal_node().and_then(|n| n.epsilon.as_deref())
    }
}
