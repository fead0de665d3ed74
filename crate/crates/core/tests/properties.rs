//! Algebraic identities on random explicit symbols.

use blockspec_core::spectral::{schatten_norm, singular_values_block};
use blockspec_core::tensor::{kron, tensor_schatten_norm, tensor_symbols, tensor_trace};
use blockspec_core::{
    apply_symbol, conjugate_by_unitary, plancherel_norm, symbol_of_operator, BlockUnitary, CMatrix,
    CVector, FourierCoefficients, MatrixSymbol, Partition, TruncationPolicy, C64,
};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn matrix(d: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(complex(), d * d).prop_map(move |v| CMatrix::from_vec(d, d, v))
}

fn symbol(max_blocks: usize, max_dim: usize) -> impl Strategy<Value = MatrixSymbol> {
    prop::collection::vec(1..=max_dim, 1..=max_blocks)
        .prop_flat_map(|dims| dims.into_iter().map(matrix).collect::<Vec<_>>())
        .prop_map(|blocks| MatrixSymbol::from_blocks(blocks).unwrap())
}

fn coefficients(dims: Vec<usize>) -> impl Strategy<Value = FourierCoefficients> {
    let vectors: Vec<_> = dims
        .iter()
        .map(|&d| prop::collection::vec(complex(), d).prop_map(CVector::from_vec))
        .collect();
    vectors.prop_map(move |vs| {
        FourierCoefficients::from_blocks(
            Partition::from_dims(dims.clone()).unwrap(),
            vs.into_iter().enumerate(),
        )
        .unwrap()
    })
}

fn all_blocks(s: &MatrixSymbol) -> TruncationPolicy {
    TruncationPolicy::exhaustive(s.partition().len().unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Unitary from the QR factorization of a random matrix.
fn unitary(m: CMatrix) -> CMatrix {
    m.qr().q()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_norm_is_multiplicative(a in symbol(6, 4), b in symbol(6, 4), p in prop::sample::select(vec![0.5, 1.0, 2.0, 3.0])) {
        let ts = tensor_symbols(vec![a.clone(), b.clone()]).unwrap();
        let t = TruncationPolicy::exhaustive(6);
        let joint = tensor_schatten_norm(&ts, p, &t).unwrap().value;
        let na = schatten_norm(&a, p, &all_blocks(&a)).unwrap().value;
        let nb = schatten_norm(&b, p, &all_blocks(&b)).unwrap().value;
        prop_assert!(rel(joint, na * nb) < 1e-10);
    }

    #[test]
    fn kron_singular_values_are_pairwise_products(a in (1..5usize).prop_flat_map(matrix), b in (1..5usize).prop_flat_map(matrix)) {
        let sa = singular_values_block(&a).unwrap();
        let sb = singular_values_block(&b).unwrap();
        let mut products: Vec<f64> = sa.iter().flat_map(|x| sb.iter().map(move |y| x * y)).collect();
        products.sort_by(|x, y| y.total_cmp(x));
        let joint = singular_values_block(&kron(&a, &b)).unwrap();
        prop_assert_eq!(joint.len(), products.len());
        let scale = joint[0].max(1.0);
        for (x, y) in joint.iter().zip(&products) {
            prop_assert!((x - y).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn trace_is_multiplicative(a in symbol(5, 3), b in symbol(5, 3)) {
        let ts = tensor_symbols(vec![a.clone(), b.clone()]).unwrap();
        let t = TruncationPolicy::exhaustive(5);
        let joint = tensor_trace(&ts, &t).unwrap().value;
        let ta: C64 = a.explicit_blocks().unwrap().iter().map(|m| m.trace()).sum();
        let tb: C64 = b.explicit_blocks().unwrap().iter().map(|m| m.trace()).sum();
        prop_assert!((joint - ta * tb).norm() <= 1e-10 * (ta * tb).norm().max(1.0));
    }

    #[test]
    fn symbol_round_trips_through_its_action(s in symbol(8, 5)) {
        let n = s.partition().len().unwrap();
        let recovered = symbol_of_operator(|f| apply_symbol(&s, f), s.partition(), n).unwrap();
        for ell in 0..n {
            let diff = (recovered.block(ell).unwrap() - s.block(ell).unwrap()).camax();
            prop_assert!(diff <= 1e-12);
        }
    }

    #[test]
    fn plancherel_matches_flat_norm(f in prop::collection::vec(1..6usize, 1..10).prop_flat_map(coefficients)) {
        let flat: f64 = f.blocks().flat_map(|(_, v)| v.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>()).sum::<f64>().sqrt();
        prop_assert!((plancherel_norm(&f) - flat).abs() <= 1e-12 * flat.max(1.0));
    }

    #[test]
    fn unitary_conjugation_preserves_norms(s in symbol(5, 4), seeds in prop::collection::vec(matrix(4), 5), p in 0.5..4.0f64) {
        let dims = s.partition().explicit_dims().unwrap().to_vec();
        let blocks: Vec<CMatrix> = dims
            .iter()
            .zip(&seeds)
            .map(|(&d, m)| unitary(m.view((0, 0), (d, d)).into_owned() + CMatrix::identity(d, d) * C64::new(3.0, 0.0)))
            .collect();
        let u = BlockUnitary::from_blocks(blocks).unwrap();
        let conj = conjugate_by_unitary(&s, &u).unwrap();
        let t = all_blocks(&s);
        let before = schatten_norm(&s, p, &t).unwrap().value;
        let after = schatten_norm(&conj, p, &t).unwrap().value;
        prop_assert!(rel(after, before) < 1e-10);
    }

    #[test]
    fn schatten_norms_decrease_in_p(s in symbol(6, 4), p in 0.5..3.0f64, dq in 0.1..3.0f64) {
        let t = all_blocks(&s);
        let np = schatten_norm(&s, p, &t).unwrap().value;
        let nq = schatten_norm(&s, p + dq, &t).unwrap().value;
        prop_assert!(nq <= np * (1.0 + 1e-12));
    }

    #[test]
    fn multiplicities_weight_the_sum(s in symbol(5, 3), mult in prop::collection::vec(1..5u64, 5), p in 0.5..3.0f64) {
        let n = s.partition().len().unwrap();
        let weighted = s.clone().with_multiplicities(mult[..n].to_vec()).unwrap();
        let t = all_blocks(&s);
        let direct: f64 = (0..n)
            .map(|ell| {
                let sv = singular_values_block(&s.block(ell).unwrap()).unwrap();
                mult[ell] as f64 * sv.iter().map(|x| x.powf(p)).sum::<f64>()
            })
            .sum::<f64>()
            .powf(1.0 / p);
        prop_assert!(rel(schatten_norm(&weighted, p, &t).unwrap().value, direct) < 1e-12);
    }
}

#[test]
fn leaking_action_is_rejected() {
    let partition = Partition::from_dims(vec![2, 2]).unwrap();
    let shift = |f: &FourierCoefficients| {
        let mut out = FourierCoefficients::zero(f.partition().clone());
        if let Some(v) = f.block(0) {
            out.insert(1, v.clone())?;
        }
        Ok(out)
    };
    assert!(matches!(
        symbol_of_operator(shift, &partition, 1),
        Err(blockspec_core::Error::NonInvariant { block: 0, .. })
    ));
}
