use super::*;

fn op(src: &str) -> ConnectionSpec {
    parse_operator_file(src).unwrap().1
}

fn zero() -> Point {
    Point::Finite(q(0))
}

#[test]
fn stirling_numbers() {
    let s = stirling_first(3);
    let row: Vec<i64> = s[3].iter().map(|v| v.try_into().unwrap()).collect();
    assert_eq!(row, vec![0, 2, -3, 1]);
}

#[test]
fn delta_forms() {
    let d = to_delta_form(op("a1 = 1\nZ = {0, inf}").op(), &zero());
    assert_eq!(d.coeffs[1], parse_expr("1/z").unwrap());
    assert!(d.coeffs[0].is_zero());
    let d = to_delta_form(op("a1 = z^2\na0 = 1\nZ = {0, inf}").op(), &zero());
    assert_eq!(d.valuations, vec![Some(0), Some(1)]);
    let d = to_delta_form(op("a2 = 1\na0 = -z\nZ = {inf}").op(), &Point::Infinity);
    assert_eq!(d.valuations, vec![Some(-1), Some(2), Some(2)]);
}

#[test]
fn polygons_and_irregularities() {
    let airy = op("a2 = 1\na0 = -z\nZ = {inf}");
    let p = newton_polygon(airy.op(), &Point::Infinity);
    assert_eq!(p.slopes, vec![(rat(3, 2), 2)]);
    assert_eq!(p.rise(), q(3));
    assert_eq!(irregularity(airy.op(), &Point::Infinity), 3);
    let e = op("a1 = z^2\na0 = 1\nZ = {0, inf}");
    assert_eq!(newton_polygon(e.op(), &zero()).slopes, vec![(q(1), 1)]);
    assert_eq!(irregularity(e.op(), &zero()), 1);
    assert_eq!(irregularity(e.op(), &Point::Infinity), 0);
    let mixed = op(builtin_corpus().iter().find(|c| c.name == "mixed-slopes").unwrap().source);
    let p = newton_polygon(mixed.op(), &zero());
    assert_eq!(p.slopes, vec![(q(1), 1), (q(2), 1)]);
    assert_eq!(irregularity(mixed.op(), &zero()), 3);
    let euler = op("a1 = z\na0 = -3\nZ = {0, inf}");
    assert_eq!(newton_polygon(euler.op(), &zero()).slopes, vec![]);
}

#[test]
fn formula_values() {
    let chi = |s: &str| deligne_chi(&op(s));
    assert_eq!(chi("a1 = 1\nZ = {0, inf}"), 0);
    assert_eq!(chi("a1 = z^2\na0 = 1\nZ = {0, inf}"), -1);
    assert_eq!(chi("a2 = 1\na0 = -z\nZ = {inf}"), -1);
    assert_eq!(chi("a1 = 1\nZ = {0, 1, inf}"), -1);
}

#[test]
fn oracle_values() {
    let o = |s: &str| {
        let r = derham_oracle(&op(s), 5).unwrap();
        assert!(r.stabilized);
        (r.h0, r.h1)
    };
    assert_eq!(o("a1 = 1\nZ = {0, inf}"), (1, 1));
    assert_eq!(o("a1 = z^2\na0 = 1\nZ = {0, inf}"), (0, 1));
    assert_eq!(o("a1 = z\na0 = -2\nZ = {0, inf}"), (1, 1));
    assert_eq!(o("a1 = z\na0 = -1/2\nZ = {0, inf}"), (0, 0));
    assert_eq!(o("a1 = 1\nZ = {0, 1, inf}"), (1, 2));
    assert_eq!(o("a2 = 1\na0 = -z\nZ = {inf}"), (0, 1));
}

#[test]
fn corpus_agrees() {
    for c in builtin_corpus() {
        let r = index_report(&c.spec().unwrap(), DEFAULT_DMAX).unwrap();
        assert!(r.agree(), "{}: {:?}", c.name, r.lines());
    }
}

#[test]
fn spec_validation() {
    let e = parse_operator_file("a1 = 1\nZ = {0}").unwrap_err();
    assert!(matches!(e, Error::MissingSingularity(_)));
    let e = parse_operator_file("a1 = 1/(z-2)\nZ = {0, inf}").unwrap_err();
    assert!(matches!(e, Error::MissingSingularity(_)));
    let e = parse_operator_file("a0 = z\nZ = {inf}").unwrap_err();
    assert_eq!(e, Error::ZeroOperator);
    assert_eq!(parse_operator_file("a1 = 1\nZ = {}").unwrap_err(), Error::EmptySingularSet);
    assert!(matches!(parse_operator_file("a1 = 1\nZ = {0, x}"), Err(Error::Parse { line: 2, column: 9, .. })));
    assert!(matches!(parse_operator_file("a1 = z +\nZ = {inf}"), Err(Error::Parse { line: 1, column: 9, .. })));
    assert!(matches!(parse_operator_file("b1 = 1"), Err(Error::Parse { line: 1, column: 1, .. })));
}

#[test]
fn operator_file_roundtrip() {
    for c in builtin_corpus() {
        let s = c.spec().unwrap();
        let text = format_operator_file(c.name, &s);
        let (name, back) = parse_operator_file(&text).unwrap();
        assert_eq!((name.as_str(), &back), (c.name, &s));
        assert_eq!(format_operator_file(&name, &back), text);
    }
}
