use proptest::prelude::*;

use tightmaps::algebra::{AlgebraDescriptor, Family};
use tightmaps::catalog::{compose, direct_sum, rho_odd, std_inclusion, StdKind};
use tightmaps::hull::ShapeFactor;
use tightmaps_cli::elaborate::{elaborate, Value};
use tightmaps_cli::syntax::{parse_spec, Expr, ExprKind, Pos, ShapeLit};

fn hom(text: &str) -> tightmaps::catalog::Homomorphism {
    match elaborate(&parse_spec(text).unwrap()).unwrap() {
        Value::Hom(h) => h,
        v => panic!("{} elaborated to {:?}", text, v),
    }
}

fn error_at(text: &str) -> (Pos, String) {
    match parse_spec(text) {
        Err(e) => (e.pos, e.message),
        Ok(e) => match elaborate(&e) {
            Err(e) => (e.pos, e.message),
            Ok(_) => panic!("{} was accepted", text),
        },
    }
}

#[test]
fn composition_elaborates_to_su22_map() {
    let h = hom("comp(std(SP_TO_SU,2), rho(2))");
    assert_eq!(h.source, AlgebraDescriptor::su(1, 1));
    assert_eq!(h.target, AlgebraDescriptor::su(2, 2));
    let direct = compose(&std_inclusion(StdKind::SpToSu, &[2]).unwrap(), &rho_odd(2).unwrap()).unwrap();
    assert_eq!(h.images, direct.images);
}

#[test]
fn same_source_sum_matches_library_construction() {
    let h = hom("dsum(rho(1), rho(2), same_source=true)");
    let direct = direct_sum(&rho_odd(1).unwrap(), &rho_odd(2).unwrap(), true).unwrap();
    assert_eq!(h.source, AlgebraDescriptor::su(1, 1));
    assert_eq!(h.target, AlgebraDescriptor::sp(3));
    assert_eq!(h.images, direct.images);
    assert_eq!(hom("dsum(rho(1), rho(2), true)").images, direct.images);
    assert_eq!(
        hom("dsum(rho(1), rho(2))").source,
        AlgebraDescriptor::su(1, 1).direct_sum(&AlgebraDescriptor::su(1, 1))
    );
}

#[test]
fn comments_and_layout_are_ignored() {
    let a = parse_spec("comp(std(SP_TO_SU,2),rho(2))").unwrap();
    let b = parse_spec("# outer map first\ncomp(\n  std( SP_TO_SU , 2 ),  # sp(4) -> su(2,2)\n  rho(2)\n)\n").unwrap();
    assert_eq!(a, b);
    assert_eq!(b.to_string(), "comp(std(SP_TO_SU, 2), rho(2))");
}

#[test]
fn other_values() {
    match elaborate(&parse_spec("asum(alg(SU,1,1), alg(SP,2))").unwrap()).unwrap() {
        Value::Alg(a) => assert_eq!(a.rank(), 3),
        v => panic!("{:?}", v),
    }
    match elaborate(&parse_spec("shape(alg(SU,2,2), SU11_VIA_RHO(1,2))").unwrap()).unwrap() {
        Value::Shape(s) => assert_eq!(s.capacity_used, 2),
        v => panic!("{:?}", v),
    }
    assert_eq!(hom("spin(4, -1)").source.factors()[0], tightmaps::algebra::Factor::So2 { n: 4 });
    assert_eq!(hom("disc(alg(SP,2), -1)").target, AlgebraDescriptor::sp(2));
    assert_eq!(hom("incl(alg(SU,1,1), alg(SU,1,2))").target, AlgebraDescriptor::su(1, 2));
}

#[test]
fn errors_carry_positions() {
    assert_eq!(error_at("rho(0)"), (Pos { line: 1, col: 1 }, "invalid parameter: rho_odd requires n >= 1".into()));
    let (p, m) = error_at("comp(std(SP_TO_SU,2),\n     rhoo(2))");
    assert_eq!((p, m.as_str()), (Pos { line: 2, col: 6 }, "unknown constructor 'rhoo'"));
    let (p, m) = error_at("rho(1) $");
    assert_eq!((p, m.as_str()), (Pos { line: 1, col: 8 }, "unexpected character '$'"));
    let (p, m) = error_at("rho(1, 2)");
    assert_eq!((p, m.as_str()), (Pos { line: 1, col: 1 }, "rho takes 1 argument(s), got 2"));
    let (p, m) = error_at("disc(rho(1), 1)");
    assert_eq!((p, m.as_str()), (Pos { line: 1, col: 6 }, "expected an algebra, found a homomorphism"));
    let (p, m) = error_at("dsum(rho(1), rho(1), same=true)");
    assert_eq!((p, m.as_str()), (Pos { line: 1, col: 22 }, "dsum has no keyword argument 'same'"));
    let (p, m) = error_at("std(SP_TO_SP, 2)");
    assert_eq!((p, m.as_str()), (Pos { line: 1, col: 5 }, "unknown standard inclusion 'SP_TO_SP'"));
    let (p, _) = error_at("comp(rho(1), rho(2))");
    assert_eq!(p, Pos { line: 1, col: 1 });
    let (p, m) = error_at("rho(2");
    assert_eq!((p, m.as_str()), (Pos { line: 1, col: 6 }, "expected ',' or ')', found end of input"));
    let (p, m) = error_at("spin(3, 2)");
    assert_eq!((p, m.as_str()), (Pos { line: 1, col: 9 }, "expected +1 or -1, found 2"));
}

fn alg() -> impl Strategy<Value = Expr> {
    let fam = prop::sample::select(vec![Family::Su, Family::Sp, Family::SoStar, Family::So2n, Family::U, Family::Gl]);
    let leaf = (fam, prop::collection::vec(0usize..9, 0..3))
        .prop_map(|(family, params)| Expr::new(ExprKind::Alg { family, params }));
    leaf.prop_recursive(2, 6, 3, |inner| prop::collection::vec(inner, 1..3).prop_map(|v| Expr::new(ExprKind::Asum(v))))
}

fn hom_expr() -> impl Strategy<Value = Expr> {
    let kind = prop::sample::select(vec![StdKind::SpToSu, StdKind::SostarToSu, StdKind::SuToSp, StdKind::SuToSostar]);
    let sign = prop::sample::select(vec![1i8, -1]);
    let leaf = prop_oneof![
        (kind, prop::collection::vec(0usize..9, 0..3)).prop_map(|(kind, params)| ExprKind::Std { kind, params }),
        (0usize..9).prop_map(ExprKind::Rho),
        (0usize..12, prop::option::of(sign.clone())).prop_map(|(p, chirality)| ExprKind::Spin { p, chirality }),
        (alg(), prop::collection::vec(sign, 1..3)).prop_map(|(a, signs)| ExprKind::Disc { alg: Box::new(a), signs }),
        alg().prop_map(|a| ExprKind::Polydisc(Box::new(a))),
        alg().prop_map(|a| ExprKind::Id(Box::new(a))),
        (alg(), alg()).prop_map(|(a, b)| ExprKind::Incl { small: Box::new(a), big: Box::new(b) }),
        Just(ExprKind::Gl2),
    ]
    .prop_map(Expr::new);
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone(), any::<bool>()).prop_map(|(a, b, s)| ExprKind::Dsum {
                first: Box::new(a),
                second: Box::new(b),
                same_source: s
            }),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ExprKind::Comp { outer: Box::new(a), inner: Box::new(b) }),
            (inner.clone(), inner).prop_map(|(a, b)| ExprKind::Tensor(Box::new(a), Box::new(b))),
        ]
        .prop_map(Expr::new)
    })
}

fn shape_lit() -> impl Strategy<Value = ShapeLit> {
    let g = 1usize..4;
    prop_oneof![
        prop::collection::vec((1usize..5, 1usize..3), 1..3)
            .prop_map(|blocks| ShapeLit { factor: ShapeFactor::Su11Rho { blocks }, multiplicity: 1 }),
        (1usize..6, g.clone()).prop_map(|(p, m)| ShapeLit { factor: ShapeFactor::SuPP { p }, multiplicity: m }),
        (1usize..6, g.clone()).prop_map(|(n, m)| ShapeLit { factor: ShapeFactor::Sp { n }, multiplicity: m }),
        (1usize..6, g.clone()).prop_map(|(m, k)| ShapeLit { factor: ShapeFactor::SoStar4 { m }, multiplicity: k }),
        (1usize..10, g.clone()).prop_map(|(r, m)| ShapeLit { factor: ShapeFactor::So2 { r }, multiplicity: m }),
        (1usize..4, 1usize..3, g)
            .prop_map(|(p, d, m)| ShapeLit { factor: ShapeFactor::SuPQ { p, q: p + d }, multiplicity: m }),
        (1usize..4).prop_map(|k| ShapeLit { factor: ShapeFactor::SoStarOdd { k }, multiplicity: 1 }),
    ]
}

fn any_expr() -> impl Strategy<Value = Expr> {
    prop_oneof![
        alg(),
        hom_expr(),
        (alg(), prop::collection::vec(shape_lit(), 1..4))
            .prop_map(|(t, entries)| Expr::new(ExprKind::Shape { target: Box::new(t), entries })),
    ]
}

proptest! {
    #[test]
    fn parse_inverts_print(e in any_expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse_spec(&text).unwrap(), e.clone());
        let spaced = text.replace(", ", " ,\n   # note\n  ").replace('(', " ( ");
        prop_assert_eq!(parse_spec(&spaced).unwrap(), e);
    }
}
