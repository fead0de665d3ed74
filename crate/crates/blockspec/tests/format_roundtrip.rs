//! Symbol documents survive save → load → save unchanged.

use blockspec::format::{parse_document, Document, ExplicitSymbol};
use proptest::prelude::*;

/// Any finite double, including subnormals and signed zero.
fn finite() -> impl Strategy<Value = f64> {
    any::<u64>()
        .prop_map(f64::from_bits)
        .prop_filter("finite", |x| x.is_finite())
}

fn explicit() -> impl Strategy<Value = ExplicitSymbol> {
    prop::collection::vec(1..5usize, 1..6)
        .prop_flat_map(|dims| {
            let n = dims.len();
            let blocks: Vec<_> = dims
                .iter()
                .map(|&d| prop::collection::vec([finite(), finite()], d * d))
                .collect();
            (
                Just(dims),
                blocks,
                prop::option::of(prop::collection::vec(1..10u64, n)),
            )
        })
        .prop_map(|(dims, blocks, multiplicity)| ExplicitSymbol {
            dims,
            blocks,
            multiplicity: multiplicity.filter(|m| m.iter().any(|&x| x != 1)),
        })
}

fn bits(doc: &ExplicitSymbol) -> Vec<u64> {
    doc.blocks
        .iter()
        .flatten()
        .flatten()
        .map(|x| x.to_bits())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn save_load_save_is_bit_faithful(doc in explicit()) {
        let text = doc.to_json().unwrap();
        let Document::Single(symbol) = parse_document(&text).unwrap() else {
            panic!("expected a single symbol");
        };
        let again = ExplicitSymbol::from_symbol(&symbol).unwrap();
        prop_assert_eq!(bits(&again), bits(&doc));
        prop_assert_eq!(&again.dims, &doc.dims);
        prop_assert_eq!(&again.multiplicity, &doc.multiplicity);
        prop_assert_eq!(again.to_json().unwrap(), text);
    }
}

#[test]
fn non_finite_entries_are_rejected() {
    let doc = ExplicitSymbol {
        dims: vec![1],
        blocks: vec![vec![[f64::NAN, 0.0]]],
        multiplicity: None,
    };
    assert!(doc.to_symbol().is_err());
    assert!(parse_document(r#"{"dims":[1],"blocks":[[[1e999,0]]]}"#).is_err());
}

#[test]
fn signed_zero_and_subnormals_survive() {
    let tiny = f64::from_bits(1);
    let doc = ExplicitSymbol {
        dims: vec![1, 1],
        blocks: vec![vec![[-0.0, tiny]], vec![[0.1 + 0.2, -f64::MAX]]],
        multiplicity: None,
    };
    let text = doc.to_json().unwrap();
    let Document::Single(s) = parse_document(&text).unwrap() else {
        panic!()
    };
    let back = ExplicitSymbol::from_symbol(&s).unwrap();
    assert_eq!(bits(&back), bits(&doc));
}
