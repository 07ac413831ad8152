//! Buchberger's algorithm with sugar-degree pair selection and the
//! Gebauer–Möller installation of the product and chain criteria.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::{Budget, GroebnerError};
use crate::poly::{Monomial, MonomialOrder};
use crate::rational::Rational;

/// Terms sorted descending in some fixed monomial order.
pub(crate) type Terms = Vec<(Monomial, Rational)>;

pub(crate) fn sort_terms(terms: &mut Terms, order: &MonomialOrder) {
    terms.sort_unstable_by(|a, b| order.compare(&b.0, &a.0));
}

/// `a - c * m * b` for order-sorted term lists.
pub(crate) fn sub_mul(a: &[(Monomial, Rational)], b: &[(Monomial, Rational)], m: &Monomial, c: &Rational, order: &MonomialOrder) -> Terms {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let bm = b[j].0.mul(m);
        match order.compare(&a[i].0, &bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((bm, -(&b[j].1 * c)));
                j += 1;
            }
            Ordering::Equal => {
                let v = &a[i].1 - &b[j].1 * c;
                if !v.is_zero() {
                    out.push((bm, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for t in &b[j..] {
        out.push((t.0.mul(m), -(&t.1 * c)));
    }
    out
}

pub(crate) fn make_monic(terms: &mut Terms) {
    if let Some((_, lc)) = terms.first() {
        if !lc.is_one() {
            let inv = lc.recip();
            for t in terms.iter_mut() {
                t.1 *= &inv;
            }
        }
    }
}

/// Full reduction of `f` modulo monic `basis` elements.
pub(crate) fn reduce(f: Terms, basis: &[&Terms], order: &MonomialOrder) -> Terms {
    let mut p = f;
    let mut rem: Terms = Vec::new();
    let mut start = 0;
    // `p[start..]` is the part still to be processed; `p[..start]` is dead.
    while start < p.len() {
        let (m, c) = (p[start].0, p[start].1.clone());
        let reducer = basis
            .iter()
            .find_map(|g| g[0].0.quotient_of(&m).map(|q| (g, q)));
        match reducer {
            Some((g, q)) => {
                let next = sub_mul(&p[start + 1..], &g[1..], &q, &c, order);
                p = next;
                start = 0;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    rem
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct Element {
    terms: Terms,
    sugar: u32,
    active: bool,
}

fn lead(e: &Element) -> &Monomial {
    &e.terms[0].0
}

/// Computes the reduced Gröbner basis of the given generators. Inputs may
/// contain zeros; the result is sorted by ascending leading monomial.
pub(crate) fn buchberger(gens: Vec<Terms>, order: &MonomialOrder, budget: &Budget) -> Result<Vec<Terms>, GroebnerError> {
    let mut elems: Vec<Element> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut processed = 0usize;

    // Seed with the interreduced input, inserted smallest first so that
    // the criteria have the most to work with.
    let mut inputs: Vec<Terms> = gens.into_iter().filter(|g| !g.is_empty()).collect();
    inputs.sort_by(|a, b| order.compare(&a[0].0, &b[0].0));
    for g in inputs {
        let actives: Vec<&Terms> = elems.iter().filter(|e| e.active).map(|e| &e.terms).collect();
        let mut h = reduce(g, &actives, order);
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h);
        let sugar = h.iter().map(|t| t.0.degree()).max().unwrap_or(0);
        check_degree(&h, budget)?;
        insert(&mut elems, &mut pairs, h, sugar, order);
    }

    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                pairs[a]
                    .sugar
                    .cmp(&pairs[b].sugar)
                    .then_with(|| order.compare(&pairs[a].lcm, &pairs[b].lcm))
                    .then_with(|| (pairs[a].i, pairs[a].j).cmp(&(pairs[b].i, pairs[b].j)))
            })
            .unwrap();
        let pair = pairs.swap_remove(best);
        processed += 1;
        if processed > budget.max_spairs {
            return Err(GroebnerError::SpairBudget {
                limit: budget.max_spairs,
            });
        }
        let s = s_polynomial(&elems[pair.i].terms, &elems[pair.j].terms, &pair.lcm, order);
        let actives: Vec<&Terms> = elems.iter().filter(|e| e.active).map(|e| &e.terms).collect();
        let mut h = reduce(s, &actives, order);
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h);
        check_degree(&h, budget)?;
        insert(&mut elems, &mut pairs, h, pair.sugar, order);
    }

    let mut minimal: Vec<Terms> = elems
        .into_iter()
        .filter(|e| e.active)
        .map(|e| e.terms)
        .collect();
    minimal.sort_by(|a, b| order.compare(&a[0].0, &b[0].0));
    // Interreduce tails.
    let mut reduced: Vec<Terms> = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<&Terms> = minimal
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, t)| t)
            .collect();
        let head = minimal[k][0].clone();
        let tail = reduce(minimal[k][1..].to_vec(), &others, order);
        let mut t = Vec::with_capacity(tail.len() + 1);
        t.push(head);
        t.extend(tail);
        reduced.push(t);
    }
    Ok(reduced)
}

fn check_degree(h: &Terms, budget: &Budget) -> Result<(), GroebnerError> {
    let deg = h.iter().map(|t| t.0.degree()).max().unwrap_or(0);
    if deg > budget.max_degree {
        return Err(GroebnerError::DegreeBudget {
            limit: budget.max_degree,
        });
    }
    Ok(())
}

fn s_polynomial(f: &Terms, g: &Terms, lcm: &Monomial, order: &MonomialOrder) -> Terms {
    let mf = f[0].0.quotient_of(lcm).expect("lcm");
    let mg = g[0].0.quotient_of(lcm).expect("lcm");
    let fm: Terms = f[1..].iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    sub_mul(&fm, &g[1..], &mg, &Rational::one(), order)
}

/// Gebauer–Möller update after adding `h`.
fn insert(elems: &mut Vec<Element>, pairs: &mut Vec<Pair>, h: Terms, sugar: u32, _order: &MonomialOrder) {
    let hi = elems.len();
    let hl = h[0].0;
    let hdeg = hl.degree();

    let cands: Vec<Pair> = elems
        .iter()
        .enumerate()
        .filter(|(_, e)| e.active)
        .map(|(i, e)| {
            let l = lead(e);
            let lcm = l.lcm(&hl);
            let s = (sugar + lcm.degree() - hdeg).max(e.sugar + lcm.degree() - l.degree());
            Pair { i, j: hi, lcm, sugar: s }
        })
        .collect();

    // Chain criterion among the new pairs, in the Gebauer–Möller form:
    // keep (i, h) if it is coprime or no other surviving candidate's lcm
    // divides its lcm; then drop the coprime ones (product criterion).
    let coprime = |p: &Pair| lead(&elems[p.i]).is_coprime(&hl);
    let mut kept: Vec<Pair> = Vec::new();
    let mut pending = cands;
    while !pending.is_empty() {
        let p = pending.remove(0);
        let dominated = pending
            .iter()
            .chain(kept.iter())
            .any(|q| q.lcm.divides(&p.lcm));
        if coprime(&p) || !dominated {
            kept.push(p);
        }
    }
    let fresh: Vec<Pair> = kept.into_iter().filter(|p| !coprime(p)).collect();

    // Old pairs made redundant by h.
    pairs.retain(|p| {
        if !hl.divides(&p.lcm) {
            return true;
        }
        let li = lead(&elems[p.i]).lcm(&hl);
        let lj = lead(&elems[p.j]).lcm(&hl);
        li == p.lcm || lj == p.lcm
    });
    pairs.extend(fresh);

    for e in elems.iter_mut() {
        if e.active && hl.divides(lead(e)) {
            e.active = false;
        }
    }
    elems.push(Element {
        terms: h,
        sugar,
        active: true,
    });
}
