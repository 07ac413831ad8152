use super::*;
use crate::rational::{int, rat};

fn p(s: &str, n: usize) -> Polynomial {
    parse(s, n).unwrap()
}

#[test]
fn parse_examples() {
    let f = p("z1^2 + z2^3", 2);
    assert_eq!(f.num_terms(), 2);
    assert_eq!(f.coefficient(&Monomial::from_exponents(&[2, 0])), int(1));
    assert_eq!(f.coefficient(&Monomial::from_exponents(&[0, 3])), int(1));
    assert!(p("0", 3).is_zero());
    let g = p("(1/2)*z1*z2 - z1*z2", 2);
    assert_eq!(g.terms(), &[(Monomial::from_exponents(&[1, 1]), rat(-1, 2))]);
    assert_eq!(g.to_string(), "-1/2*z1*z2");
}

#[test]
fn parse_errors() {
    assert!(matches!(parse("z1 z2", 2), Err(ParseError::Syntax { pos: 3, .. })));
    assert!(matches!(parse("z3", 2), Err(ParseError::UnknownVariable { .. })));
    assert!(matches!(parse("1/0*z1", 2), Err(ParseError::DivisionByZero { .. })));
    assert!(matches!(parse("z1/2", 2), Err(ParseError::Syntax { .. })));
    assert!(matches!(parse("(z1", 2), Err(ParseError::Syntax { .. })));
    assert!(matches!(parse("z1^", 2), Err(ParseError::Syntax { .. })));
    assert!(matches!(parse("", 2), Err(ParseError::Syntax { .. })));
}

#[test]
fn print_reparse_roundtrip() {
    for s in [
        "z1^2*z2 - 3/7*z1*z2^4 + 5",
        "-z1 + z2 - 1",
        "(z1 + z2 - z3)^3",
        "0",
        "-2",
    ] {
        let f = p(s, 3);
        let printed = f.to_string();
        assert_eq!(p(&printed, 3), f, "{printed}");
    }
    assert_eq!(p("z2 + z1^2 + z1*z2", 2).to_string(), "z1^2 + z1*z2 + z2");
}

#[test]
fn custom_names() {
    let names = vec!["x".to_string(), "y".to_string()];
    let f = parse_with_names("x^2 - 2*x*y", &names).unwrap();
    assert_eq!(f.to_string_with(&names), "x^2 - 2*x*y");
    assert_eq!(f.to_string(), "z1^2 - 2*z1*z2");
}

#[test]
fn derivatives() {
    assert_eq!(p("z1^2*z2", 2).derivative(0).unwrap(), p("2*z1*z2", 2));
    assert!(p("z1^2", 2).derivative(1).unwrap().is_zero());
    assert_eq!(
        p("z1^5 + z1^3*z2^3", 2).derivative(0).unwrap(),
        p("5*z1^4 + 3*z1^2*z2^3", 2)
    );
    assert!(matches!(
        p("z1", 2).derivative(2),
        Err(PolyError::VariableOutOfRange { .. })
    ));
}

#[test]
fn jacobians() {
    assert_eq!(jacobian_determinant(&[p("z1", 2), p("z2", 2)]).unwrap(), p("1", 2));
    assert_eq!(
        jacobian_determinant(&[p("z1+z2", 2), p("z1-z2", 2)]).unwrap(),
        p("-2", 2)
    );
    let j = jacobian_determinant(&[p("z1^2", 2), p("z2^3", 2)]).unwrap();
    assert_eq!(j, p("6*z1*z2^2", 2));
    assert_eq!(j.ord_at_origin(), Some(3));
    assert!(matches!(
        jacobian_determinant(&[p("z1", 2)]),
        Err(PolyError::WrongCount { .. })
    ));
}

#[test]
fn minors() {
    assert_eq!(minor_jacobian(&[p("z1^2*z2", 2)], &[0]).unwrap(), p("2*z1*z2", 2));
    assert_eq!(
        minor_jacobian(&[p("z1^2", 3), p("z2^3", 3)], &[0, 1]).unwrap(),
        p("6*z1*z2^2", 3)
    );
    assert!(minor_jacobian(&[p("z1", 3), p("z1", 3)], &[1, 2]).unwrap().is_zero());
    assert!(matches!(
        minor_jacobian(&[p("z1", 3), p("z2", 3)], &[1, 1]),
        Err(PolyError::RepeatedVariable(1))
    ));
}

#[test]
fn determinant_3x3() {
    let fs = [p("z1 + z2*z3", 3), p("z2^2", 3), p("z3 + z1^2", 3)];
    // rows: (1, z3, z2), (0, 2z2, 0), (2z1, 0, 1)
    let expect = p("2*z2 - 4*z1*z2^2", 3);
    assert_eq!(jacobian_determinant(&fs).unwrap(), expect);
}

#[test]
fn orders() {
    assert_eq!(p("6*z1*z2^2", 2).ord_at_origin(), Some(3));
    assert_eq!(p("1 + z1", 2).ord_at_origin(), Some(0));
    assert_eq!(p("0", 2).ord_at_origin(), None);
}

#[test]
fn gcd_examples() {
    assert_eq!(gcd(&p("z1^2*z2", 2), &p("z1*z2^2", 2)), p("z1*z2", 2));
    assert_eq!(gcd(&p("3*z1 + 6*z2", 2), &p("0", 2)), p("z1 + 2*z2", 2));
    assert_eq!(gcd(&p("z1+z2", 2), &p("z1-z2", 2)), p("1", 2));
    let a = p("(z1 + z2^2)*(z1*z2 - 1)^2", 2);
    let b = p("(z1 + z2^2)*(z1 - z2)*(z1*z2 - 1)", 2);
    assert_eq!(gcd(&a, &b), p("(z1 + z2^2)*(z1*z2 - 1)", 2).monic());
    let c = p("(z1 - z3)*(z2 + z3^2)", 3);
    let d = p("(z2 + z3^2)^2*(z1 + 1)", 3);
    assert_eq!(gcd(&c, &d), p("z2 + z3^2", 3).monic());
}

#[test]
fn squarefree_examples() {
    assert_eq!(squarefree_part(&p("6*z1*z2^2", 2)).unwrap(), p("z1*z2", 2));
    assert_eq!(squarefree_part(&p("z1*z2", 2)).unwrap(), p("z1*z2", 2));
    assert_eq!(squarefree_part(&p("(z1+z2)^3", 2)).unwrap(), p("z1+z2", 2));
    assert_eq!(
        squarefree_part(&p("(z1^2 - z2^3)^2*(z1 + z2)", 2)).unwrap(),
        p("(z1^2 - z2^3)*(z1+z2)", 2).monic()
    );
    assert!(matches!(
        squarefree_part(&p("0", 2)),
        Err(PolyError::ZeroPolynomial)
    ));
}

#[test]
fn division() {
    assert_eq!(
        p("-z1^2*z2", 2).exact_divide(&p("z1*z2", 2)).unwrap(),
        Some(p("-z1", 2))
    );
    assert_eq!(p("z1+z2", 2).exact_divide(&p("z1", 2)).unwrap(), None);
    assert_eq!(p("0", 2).exact_divide(&p("z1", 2)).unwrap(), Some(p("0", 2)));
    assert!(p("z1", 2).exact_divide(&p("0", 2)).is_err());
    let f = p("z1^3 - z2^2 + z1*z2", 2);
    let d = p("z1 - z2 + 1", 2);
    assert_eq!((&f * &d).exact_divide(&d).unwrap(), Some(f));
}

#[test]
fn composition_and_substitution() {
    let g = p("z1^2 - z2", 2);
    let images = [p("z1 + z2", 2), p("z1*z2", 2)];
    assert_eq!(g.compose(&images).unwrap(), p("z1^2 + z1*z2 + z2^2", 2));
    let b = vec![vec![int(1), int(1)], vec![int(0), int(1)]];
    assert_eq!(
        p("z1*z2", 2).linear_substitution(&b).unwrap(),
        p("z1*z2 + z2^2", 2)
    );
    assert_eq!(p("z1^2*z2 + 3", 2).evaluate(&[int(2), rat(1, 2)]), int(5));
}

#[test]
fn remap_extend_restrict() {
    let f = p("z1^2 + z2", 2);
    assert_eq!(f.remap(3, &[2, 0]), p("z3^2 + z1", 3));
    assert_eq!(f.extend(4).restrict(2), f);
}
