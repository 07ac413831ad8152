//! Seeded generators for the suite corpora.
//!
//! Everything stays at desk scale: `n ∈ {2, 3}`, generator degrees at most
//! 6, at most 4 generators.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::poly::{Monomial, Polynomial};
use crate::rational::{int, rat, Rational};

pub const MAX_DEGREE: u32 = 6;
pub const MAX_GENERATORS: usize = 4;

pub struct Sampler<'a> {
    pub rng: &'a mut ChaCha8Rng,
}

impl Sampler<'_> {
    /// A small nonzero coefficient, occasionally a fraction.
    pub fn coefficient(&mut self) -> Rational {
        let a: i64 = self.rng.gen_range(1..=5);
        let sign = if self.rng.gen_bool(0.5) { 1 } else { -1 };
        let b: i64 = if self.rng.gen_bool(0.2) { 2 } else { 1 };
        rat(sign * a, b)
    }

    pub fn exponents(&mut self, n: usize, lo: u32, hi: u32) -> Vec<u32> {
        (0..n).map(|_| self.rng.gen_range(lo..=hi)).collect()
    }

    /// Pure powers `z_i^{a_i}` plus up to two mixed monomials strictly
    /// below the staircase corner (so they are not redundant).
    pub fn monomial_ideal(&mut self, exps: &[u32]) -> Vec<Polynomial> {
        let n = exps.len();
        let mut gens: Vec<Polynomial> = (0..n)
            .map(|i| Polynomial::term(n, Monomial::var_pow(i, exps[i]), int(1)))
            .collect();
        let extra = self.rng.gen_range(0..=(MAX_GENERATORS - n).min(2));
        for _ in 0..extra {
            let e: Vec<u32> = exps
                .iter()
                .map(|&a| if a > 1 { self.rng.gen_range(0..a) } else { 0 })
                .collect();
            let m = Monomial::from_exponents(&e);
            if m.degree() == 0 || m.degree() > MAX_DEGREE || m.support_len() < 2 {
                continue;
            }
            let p = Polynomial::term(n, m, int(1));
            if !gens.contains(&p) {
                gens.push(p);
            }
        }
        gens
    }

    /// `g_i = z_i^{a_i} + (terms in z_i..z_n, each involving a later
    /// variable, with z_i-degree below a_i)`.
    ///
    /// Setting `z_n = 0, z_{n-1} = 0, ...` in turn shows the only common zero
    /// is the origin, and the `z_i^{a_i}` are the lex leading terms, so the
    /// colength is exactly `∏ a_i`.
    pub fn triangular(&mut self, exps: &[u32]) -> Vec<Polynomial> {
        let n = exps.len();
        (0..n)
            .map(|i| {
                let mut terms = vec![(Monomial::var_pow(i, exps[i]), int(1))];
                if i + 1 < n {
                    for _ in 0..self.rng.gen_range(1..=2) {
                        let mut e = vec![0u32; n];
                        e[i] = self.rng.gen_range(0..exps[i]);
                        let j = self.rng.gen_range(i + 1..n);
                        e[j] = self.rng.gen_range(1..=3);
                        if Monomial::from_exponents(&e).degree() <= MAX_DEGREE {
                            terms.push((Monomial::from_exponents(&e), self.coefficient()));
                        }
                    }
                }
                Polynomial::from_terms(n, terms)
            })
            .collect()
    }

    /// A unimodular matrix `L·U` with unit diagonals and small entries.
    pub fn unimodular(&mut self, n: usize) -> Vec<Vec<Rational>> {
        let mut l = vec![vec![int(0); n]; n];
        let mut u = vec![vec![int(0); n]; n];
        for i in 0..n {
            l[i][i] = int(1);
            u[i][i] = int(1);
            for j in 0..i {
                l[i][j] = int(self.rng.gen_range(-2..=2));
                u[j][i] = int(self.rng.gen_range(-2..=2));
            }
        }
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(int(0), |acc, k| acc + &l[i][k] * &u[k][j]))
                    .collect()
            })
            .collect()
    }

    /// A triangular system after a random linear change of coordinates:
    /// non-monomial, zero set the origin, colength `∏ a_i`.
    pub fn mixed_ideal(&mut self, exps: &[u32]) -> Vec<Polynomial> {
        let b = self.unimodular(exps.len());
        self.triangular(exps)
            .iter()
            .map(|g| g.linear_substitution(&b).expect("square matrix"))
            .collect()
    }

    /// A random polynomial vanishing at the origin with `1..=terms` terms
    /// of degree `lo..=hi`.
    pub fn vanishing(&mut self, n: usize, lo: u32, hi: u32, terms: usize) -> Polynomial {
        loop {
            let k = self.rng.gen_range(1..=terms);
            let f = Polynomial::from_terms(
                n,
                (0..k).map(|_| {
                    let d = self.rng.gen_range(lo..=hi);
                    (self.monomial_of_degree(n, d), self.coefficient())
                }),
            );
            if !f.is_zero() {
                return f;
            }
        }
    }

    pub fn monomial_of_degree(&mut self, n: usize, d: u32) -> Monomial {
        let mut e = vec![0u32; n];
        for _ in 0..d {
            e[self.rng.gen_range(0..n)] += 1;
        }
        Monomial::from_exponents(&e)
    }

    /// A homogeneous form of degree `d` with every coefficient drawn.
    pub fn dense_form(&mut self, n: usize, d: u32) -> Polynomial {
        let monos = crate::groebner::monomials_of_degree(n, d);
        Polynomial::from_terms(n, monos.into_iter().map(|m| (m, self.coefficient())))
    }

    pub fn choose<'b, T>(&mut self, items: &'b [T]) -> &'b T {
        items.choose(self.rng).expect("nonempty")
    }
}

/// Standard monomials of a monomial ideal containing every `z_i^{a_i}`:
/// exponent vectors in the box not divisible by any generator.
pub fn staircase_count(n: usize, box_exps: &[u32], gens: &[Polynomial]) -> u64 {
    let leads: Vec<Monomial> = gens.iter().map(|g| g.terms()[0].0).collect();
    let mut count = 0;
    let mut e = vec![0u32; n];
    loop {
        let m = Monomial::from_exponents(&e);
        if !leads.iter().any(|l| l.divides(&m)) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            e[i] += 1;
            if e[i] < box_exps[i] {
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

/// `(a, b, c, d)` with `z1^a + z2^b + t z1^c z2^d` semi-quasi-homogeneous
/// but not quasi-homogeneous in any coordinates: `c ≤ a-2`, `d ≤ b-2` and
/// `c/a + d/b > 1` put `z1^c z2^d` among the Milnor-algebra monomials above
/// the Newton diagonal, so it is a genuine modulus.
pub fn non_quasi_homogeneous_family() -> Vec<(u32, u32, u32, u32)> {
    let mut out = Vec::new();
    for a in 4..=6u32 {
        for b in 4..=6u32 {
            for c in 1..=a - 2 {
                for d in 1..=b - 2 {
                    if c * b + d * a > a * b && c + d <= 7 {
                        out.push((a, b, c, d));
                    }
                }
            }
        }
    }
    out
}
