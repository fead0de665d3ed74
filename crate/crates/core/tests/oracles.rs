//! Library results checked against independent computations: direct sums,
//! finite differences, FFT convolution and explicit Kronecker matrices.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use blockspec_core::dixmier::{
    assemble_truncated_matrix, tensor_trace_power, trace_power, Multiplier, SeparableSymbol,
};
use blockspec_core::generators::{
    anharmonic_galerkin_spectrum, inv_power_multiplier, su2_laplacian_power_symbol,
    su2_tensor_norm, torus_multiplier_symbol, AnharmonicSpec,
};
use blockspec_core::spectral::schatten_norm;
use blockspec_core::{CMatrix, CVector, TruncationPolicy, C64};
use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

/// `Σ_{t≥0} (t+1)² (1 + t(t+2)/4)^{−q}` for `q > 3/2`. With `x = t + 1`
/// the term is `4^q x² (x² + 3)^{−q}`; it is summed directly up to `x = N`,
/// smallest terms first, and the remainder is `∫_N^∞` of the two leading
/// asymptotic terms minus half the term at `N`.
fn su2_series(q: f64) -> f64 {
    let f = |x: f64| 4f64.powf(q) * x * x * (x * x + 3.0).powf(-q);
    let n = 2_000_000u32;
    let head: f64 = (1..=n).rev().map(|x| f(x as f64)).sum();
    let x = n as f64;
    let tail = 4f64.powf(q)
        * (x.powf(3.0 - 2.0 * q) / (2.0 * q - 3.0)
            - 3.0 * q * x.powf(1.0 - 2.0 * q) / (2.0 * q - 1.0));
    head + tail - f(x) / 2.0
}

#[test]
fn su2_direct_sums_match_frozen_values() {
    assert!((su2_series(2.0) - 7.252504447492721).abs() < 1e-9);
    assert!((su2_series(2.5) - 3.5501830814013867).abs() < 1e-9);
}

#[test]
fn su2_norm_matches_direct_double_sum() {
    let t = TruncationPolicy::default();
    let r = su2_tensor_norm(4.0, 4.0, 1.0, &t).unwrap();
    assert!(r.estimate.converged);
    let single = su2_series(2.0);
    let limit = r.estimate.limit.unwrap();
    assert!(
        ((limit - single * single) / (single * single)).abs() < 1e-8,
        "{limit}"
    );

    let r2 = su2_tensor_norm(4.0, 4.0, 2.0, &t).unwrap();
    let factor = su2_series(4.0).sqrt();
    let limit = r2.estimate.limit.unwrap();
    assert!(
        ((limit - factor * factor) / (factor * factor)).abs() < 1e-8,
        "{limit}"
    );
    assert_eq!(r2.alpha_factor, r2.beta_factor);
}

#[test]
fn su2_partial_sums_increase() {
    let s = su2_laplacian_power_symbol(2.0).unwrap();
    let series =
        blockspec_core::spectral::schatten_series(&s, 1.0, &TruncationPolicy::default()).unwrap();
    assert!(!series.estimate.converged);
    assert!(series.partial_sums.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(series.partial_sums.len(), 401);
}

#[test]
fn torus_norm_matches_lattice_sum() {
    let radius = 10_000;
    let tm = torus_multiplier_symbol(inv_power_multiplier(2.0), 1, radius).unwrap();
    let est = schatten_norm(
        &tm.symbol,
        1.0,
        &TruncationPolicy::exhaustive(2 * radius + 1),
    )
    .unwrap();
    let direct: f64 = (-(radius as i64)..=radius as i64)
        .map(|j| 1.0 / (1.0 + (j * j) as f64))
        .sum();
    assert!(((est.value - direct) / direct).abs() < 1e-10);
    assert!((direct - 3.1531481049374956).abs() < 1e-12);
}

/// Eigenvalues of a symmetric tridiagonal matrix below `x`, by Sturm count.
fn sturm_count(diag: &[f64], off: f64, x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for &d in &diag[1..] {
        let prev = if q == 0.0 { f64::EPSILON } else { q };
        q = d - x - off * off / prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn sturm_eigenvalue(diag: &[f64], off: f64, m: usize, hi: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, hi);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(diag, off, mid) > m {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn harmonic_levels_against_finite_differences() {
    let (points, extent) = (2000, 12.0);
    let h = 2.0 * extent / (points + 1) as f64;
    let diag: Vec<f64> = (1..=points)
        .map(|j| {
            let x = -extent + j as f64 * h;
            2.0 / (h * h) + x * x
        })
        .collect();
    let off = -1.0 / (h * h);

    let spec = AnharmonicSpec::new(1, 1, 1.0).with_grid(points, extent);
    let galerkin = anharmonic_galerkin_spectrum(&spec, 20).unwrap();
    assert_eq!(galerkin.count, 20);
    assert!(galerkin.hermiticity_residual <= 1e-8);
    for m in 0..20 {
        let exact = (2 * m + 1) as f64;
        let fd = sturm_eigenvalue(&diag, off, m, 100.0);
        assert!(((fd - exact) / exact).abs() < 1e-3, "fd level {m}: {fd}");
        let e = galerkin.eigenvalues[m];
        assert!(
            ((e - exact) / exact).abs() < 1e-3,
            "galerkin level {m}: {e}"
        );
        assert!(((e - fd) / fd).abs() < 1e-3);
    }
}

#[test]
fn harmonic_levels_stable_under_box_growth() {
    let small = AnharmonicSpec::new(1, 1, 1.0).with_grid(2000, 12.0);
    let large = AnharmonicSpec::new(1, 1, 1.0).with_grid(2667, 16.0);
    let a = anharmonic_galerkin_spectrum(&small, 20).unwrap();
    let b = anharmonic_galerkin_spectrum(&large, 20).unwrap();
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
        assert!(((x - y) / y).abs() <= 1e-4, "{x} vs {y}");
    }
}

#[test]
fn spectra_are_positive_and_increasing() {
    for (k, ell) in [(1, 1), (2, 1), (1, 2), (3, 2)] {
        let spec = AnharmonicSpec::new(k, ell, 1.0).with_grid(1000, 8.0);
        let s = anharmonic_galerkin_spectrum(&spec, 40).unwrap();
        assert_eq!(s.eigenvalues.len(), 40);
        assert!(s.eigenvalues[0] > 0.0);
        assert!(
            s.eigenvalues.windows(2).all(|w| w[1] > w[0]),
            "k={k} ell={ell}"
        );
    }
}

fn random_symbol(rng: &mut ChaCha8Rng, degree: i64) -> SeparableSymbol {
    // a = |q|² for a random trigonometric polynomial q is nonnegative.
    let q: Vec<C64> = (0..=degree / 2)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let mut a_hat = BTreeMap::new();
    for (i, x) in q.iter().enumerate() {
        for (j, y) in q.iter().enumerate() {
            *a_hat
                .entry(i as i64 - j as i64)
                .or_insert(C64::new(0.0, 0.0)) += x * y.conj();
        }
    }
    let values: Vec<f64> = (0..2048).map(|_| rng.random_range(0.0..1.0)).collect();
    let beta = Multiplier::Custom(std::sync::Arc::new(move |j| values[(j + 1024) as usize]));
    SeparableSymbol::new(a_hat, beta).unwrap()
}

#[test]
fn assembled_matrix_matches_fft_convolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cutoff = 40usize;
    let size = 2 * cutoff + 1;
    for _ in 0..5 {
        let s = random_symbol(&mut rng, 6);
        let m = assemble_truncated_matrix(&s, cutoff).unwrap();
        let v = CVector::from_fn(size, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let direct = &m * &v;

        // Zero-padded circular convolution of â with β·v, then read off |j| ≤ J.
        let n = 4 * size;
        let wrap = |j: i64| j.rem_euclid(n as i64) as usize;
        let mut a = vec![C64::new(0.0, 0.0); n];
        for (&j, &c) in s.a_hat() {
            a[wrap(j)] = c;
        }
        let mut w = vec![C64::new(0.0, 0.0); n];
        for k in 0..size {
            let j = k as i64 - cutoff as i64;
            w[wrap(j)] = v[k] * s.beta().eval(j);
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        fwd.process(&mut a);
        fwd.process(&mut w);
        let mut prod: Vec<C64> = a.iter().zip(&w).map(|(x, y)| x * y).collect();
        inv.process(&mut prod);
        for k in 0..size {
            let got = prod[wrap(k as i64 - cutoff as i64)] / n as f64;
            assert!((got - direct[k]).norm() < 1e-10, "{got} vs {}", direct[k]);
        }
    }
}

#[test]
fn trace_power_converges_to_pi_coth_pi() {
    let s = SeparableSymbol::constant(1.0, Multiplier::inv_sqrt_quadratic()).unwrap();
    let cutoff = 10_000;
    let direct: f64 = (-cutoff..=cutoff)
        .map(|j: i64| 1.0 / (1.0 + (j * j) as f64))
        .sum();
    let got = trace_power(&s, 2.0, cutoff as usize).unwrap();
    assert!(((got - direct) / direct).abs() < 1e-8);
    let pi_coth_pi = PI / PI.tanh();
    assert!((pi_coth_pi - 3.153348094937162).abs() < 1e-14);
    assert!((got - pi_coth_pi).abs() < 2.1e-4);
}

#[test]
fn trace_power_two_matches_frobenius_norm() {
    let mut a_hat = BTreeMap::new();
    a_hat.insert(0, C64::new(2.0, 0.0));
    a_hat.insert(1, C64::new(0.5, 0.0));
    a_hat.insert(-1, C64::new(0.5, 0.0));
    let s = SeparableSymbol::new(a_hat, Multiplier::InvPower { s: 2.0 }).unwrap();
    let cutoff = 256;
    let m = assemble_truncated_matrix(&s, cutoff).unwrap();
    let herm = (&m + m.adjoint()).scale(0.5);
    let frob = herm.norm_squared();
    let got = trace_power(&s, 2.0, cutoff).unwrap();
    assert!(((got - frob) / frob).abs() < 1e-8, "{got} vs {frob}");
}

#[test]
fn tensor_trace_power_matches_kronecker_eigenvalues() {
    let mut a_hat = BTreeMap::new();
    a_hat.insert(0, C64::new(2.0, 0.0));
    a_hat.insert(1, C64::new(0.5, 0.0));
    a_hat.insert(-1, C64::new(0.5, 0.0));
    let s1 = SeparableSymbol::new(a_hat, Multiplier::InvPower { s: 1.5 }).unwrap();
    let s2 = SeparableSymbol::constant(1.0, Multiplier::inv_sqrt_quadratic()).unwrap();
    let (p, cutoff) = (1.7, 12);
    // Both factors are real, so the oracle takes symmetric parts in real
    // arithmetic.
    let sym = |m: CMatrix| {
        assert!(m.iter().all(|z| z.im == 0.0));
        let r = m.map(|z| z.re);
        (&r + r.transpose()) * 0.5
    };
    let m1 = sym(assemble_truncated_matrix(&s1, cutoff).unwrap());
    let m2 = sym(assemble_truncated_matrix(&s2, cutoff).unwrap());
    let big = m1.kronecker(&m2);
    let oracle: f64 = SymmetricEigen::try_new(big, f64::EPSILON, 1_000_000)
        .unwrap()
        .eigenvalues
        .iter()
        .map(|l| l.max(0.0).powf(p))
        .sum();
    let got = tensor_trace_power(&[s1.clone(), s2.clone()], p, cutoff).unwrap();
    assert!(((got - oracle) / oracle).abs() < 1e-6, "{got} vs {oracle}");

    let single = trace_power(&s1, p, cutoff).unwrap();
    assert_eq!(
        tensor_trace_power(std::slice::from_ref(&s1), p, cutoff).unwrap(),
        single
    );
    let square = tensor_trace_power(&[s1.clone(), s1], p, cutoff).unwrap();
    assert!((square - single * single).abs() <= 1e-12 * square);
}
