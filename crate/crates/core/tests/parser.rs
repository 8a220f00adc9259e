use gwpo::trs::TrsError;
use gwpo::{parse_trs, Rule, Term, Trs};
use proptest::prelude::*;

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["x", "y", "z'"]).prop_map(Term::var),
        prop::sample::select(vec!["0", "nil", "a-b"]).prop_map(Term::constant),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("s", vec![t])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app("plus", vec![a, b])),
            (inner.clone(), inner.clone(), inner).prop_map(|(a, b, c)| Term::app("if#", vec![a, b, c])),
        ]
    })
}

proptest! {
    #[test]
    fn printed_systems_parse_back(rules in prop::collection::vec((arb_term(), arb_term()), 0..5)) {
        let trs = Trs::from_rules(rules.into_iter().map(|(l, r)| Rule::new(l, r)).collect()).unwrap();
        let back = parse_trs(&trs.to_string()).unwrap();
        prop_assert_eq!(back.rules, trs.rules);
        prop_assert_eq!(back.signature.len(), trs.signature.len());
    }

    #[test]
    fn parser_never_panics(text in "[()a-z ,>\\-\\n]{0,60}") {
        let _ = parse_trs(&text);
    }
}

#[test]
fn corpus_files_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        parse_trs(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        n += 1;
    }
    assert!(n >= 20);
}

#[test]
fn error_positions() {
    match parse_trs("(VAR x)\n(RULES\n  f(x) -> f(x, x)\n)") {
        Err(TrsError::Arity { symbol, line, .. }) => {
            assert_eq!(symbol, "f");
            assert_eq!(line, 3);
        }
        other => panic!("{other:?}"),
    }
}
