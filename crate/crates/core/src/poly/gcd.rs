//! Multivariate gcd by recursive primitive pseudo-remainder sequences, and
//! the squarefree part built on it.


use super::{Monomial, PolyError, Polynomial};
use crate::rational::Rational;

/// Greatest common divisor, normalized to leading coefficient one under
/// graded reverse lex. `gcd(0, 0) = 0`.
pub fn gcd(f: &Polynomial, g: &Polynomial) -> Polynomial {
    assert_eq!(f.nvars(), g.nvars(), "dimension mismatch");
    gcd_inner(f, g).monic()
}

fn gcd_inner(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let n = f.nvars();
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    if f.is_constant() || g.is_constant() {
        return Polynomial::one(n);
    }
    if f.is_monomial() {
        return monomial_gcd(&f.terms()[0].0, g);
    }
    if g.is_monomial() {
        return monomial_gcd(&g.terms()[0].0, f);
    }
    // Pull out the common monomial factor first; it keeps the PRS small.
    let mf = monomial_content(f);
    let mg = monomial_content(g);
    let common = mf.gcd(&mg);
    let f = divide_monomial(f, &mf);
    let g = divide_monomial(g, &mg);

    let fs = f.support();
    let gs = g.support();
    let core = match fs.iter().find(|v| gs.contains(v)) {
        None => {
            // No shared variable: any common factor lies in the
            // intersection of coefficient rings, which is ℚ.
            Polynomial::one(n)
        }
        Some(&v) => {
            if fs.len() == 1 && gs.len() == 1 {
                univariate_gcd(&f, &g, v)
            } else {
                gcd_in_var(&f, &g, v)
            }
        }
    };
    core.mul_monomial(&common, &Rational::from_integer(1.into()))
        .monic()
}

fn monomial_content(f: &Polynomial) -> Monomial {
    let mut it = f.terms().iter().map(|(m, _)| *m);
    let first = it.next().unwrap_or_else(Monomial::one);
    it.fold(first, |acc, m| acc.gcd(&m))
}

fn divide_monomial(f: &Polynomial, m: &Monomial) -> Polynomial {
    if m.is_one() {
        return f.clone();
    }
    Polynomial::from_terms(
        f.nvars(),
        f.terms()
            .iter()
            .map(|(t, c)| (m.quotient_of(t).expect("monomial content"), c.clone())),
    )
}

fn monomial_gcd(m: &Monomial, g: &Polynomial) -> Polynomial {
    let content = monomial_content(g);
    Polynomial::term(g.nvars(), m.gcd(&content), Rational::from_integer(1.into()))
}

/// Coefficients of `f` viewed as a polynomial in `v`, lowest power first.
fn coefficients_in(f: &Polynomial, v: usize) -> Vec<Polynomial> {
    let n = f.nvars();
    let deg = f.degree_in(v).unwrap_or(0) as usize;
    let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); deg + 1];
    for (m, c) in f.terms() {
        let e = m.exponent(v) as usize;
        let mut rest = *m;
        rest.set_exponent(v, 0);
        buckets[e].push((rest, c.clone()));
    }
    buckets
        .into_iter()
        .map(|b| Polynomial::from_terms(n, b))
        .collect()
}

fn from_coefficients(coeffs: &[Polynomial], v: usize, n: usize) -> Polynomial {
    let mut terms = Vec::new();
    for (e, c) in coeffs.iter().enumerate() {
        for (m, k) in c.terms() {
            let mut mm = *m;
            mm.set_exponent(v, e as u32);
            terms.push((mm, k.clone()));
        }
    }
    Polynomial::from_terms(n, terms)
}

fn content_in(f: &Polynomial, v: usize) -> Polynomial {
    let mut acc = Polynomial::zero(f.nvars());
    for c in coefficients_in(f, v) {
        if c.is_zero() {
            continue;
        }
        acc = gcd_inner(&acc, &c);
        if acc.is_nonzero_constant() {
            break;
        }
    }
    acc
}

fn primitive_in(f: &Polynomial, v: usize) -> (Polynomial, Polynomial) {
    let c = content_in(f, v);
    let p = f
        .exact_divide(&c)
        .expect("nonzero content")
        .expect("content divides");
    (c, p.monic())
}

/// Pseudo-remainder of `a` by `b` in the variable `v`.
fn pseudo_remainder(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let n = a.nvars();
    let bc = coefficients_in(b, v);
    let db = bc.len() - 1;
    let lb = &bc[db];
    let mut rc = coefficients_in(a, v);
    while rc.len() > db && !rc.iter().all(|c| c.is_zero()) {
        let dr = rc.len() - 1;
        let lr = rc[dr].clone();
        let shift = dr - db;
        let mut next: Vec<Polynomial> = rc.iter().map(|c| c * lb).collect();
        for (i, c) in bc.iter().enumerate() {
            if !c.is_zero() {
                next[i + shift] = &next[i + shift] - &(c * &lr);
            }
        }
        debug_assert!(next[dr].is_zero());
        next.pop();
        while next.last().is_some_and(|c| c.is_zero()) {
            next.pop();
        }
        rc = next;
    }
    from_coefficients(&rc, v, n)
}

fn gcd_in_var(f: &Polynomial, g: &Polynomial, v: usize) -> Polynomial {
    let (cf, mut a) = primitive_in(f, v);
    let (cg, mut b) = primitive_in(g, v);
    let content = gcd_inner(&cf, &cg);
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    while b.degree_in(v).unwrap_or(0) > 0 {
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            break;
        }
        a = b;
        b = if r.degree_in(v).unwrap_or(0) == 0 {
            // A remainder free of v: the primitive parts are coprime in v.
            Polynomial::one(f.nvars())
        } else {
            primitive_in(&r, v).1
        };
    }
    let prim = if b.degree_in(v).unwrap_or(0) == 0 {
        Polynomial::one(f.nvars())
    } else {
        b
    };
    &content * &prim
}

fn univariate_gcd(f: &Polynomial, g: &Polynomial, v: usize) -> Polynomial {
    let mut a = f.monic();
    let mut b = g.monic();
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = pseudo_remainder(&a, &b, v).monic();
        a = b;
        b = r;
    }
    a
}

/// `f / gcd(f, ∂f/∂z_1, ..., ∂f/∂z_n)`, normalized; the product of the
/// distinct irreducible factors of `f`.
pub fn squarefree_part(f: &Polynomial) -> Result<Polynomial, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if f.is_constant() {
        return Ok(Polynomial::one(f.nvars()));
    }
    let mut g = f.clone();
    for v in f.support() {
        let d = f.derivative(v)?;
        g = gcd(&g, &d);
        if g.is_nonzero_constant() {
            return Ok(f.monic());
        }
    }
    let q = f
        .exact_divide(&g)?
        .expect("gcd divides its argument");
    Ok(q.monic())
}

