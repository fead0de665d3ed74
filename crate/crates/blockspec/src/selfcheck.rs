//! Seeded self-checks of the tensor identities on random explicit symbols.
//!
//! Every check draws its cases serially from its own ChaCha8 stream of the
//! seed and then evaluates them in parallel, one case per task. Each case is
//! computed sequentially and results are reduced in case order, so the report
//! does not depend on the number of worker threads.

use blockspec_core::spectral::{schatten_norm, singular_values_block};
use blockspec_core::tensor::{kron, tensor_schatten_norm, tensor_symbols, tensor_trace};
use blockspec_core::{CMatrix, MatrixSymbol, TruncationPolicy, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfCheckConfig {
    pub seed: u64,
    pub p: Vec<f64>,
    /// Random pairs for the norm identities.
    pub pairs: usize,
    pub max_blocks: usize,
    pub max_dim: usize,
    /// Random triples for the trace identity.
    pub triples: usize,
    pub triple_max_blocks: usize,
    pub triple_max_dim: usize,
    /// Random matrix pairs for the Kronecker singular values.
    pub kron_pairs: usize,
    pub tol: f64,
}

impl SelfCheckConfig {
    pub fn new(seed: u64, p: Vec<f64>) -> Self {
        Self {
            seed,
            p,
            pairs: 200,
            max_blocks: 20,
            max_dim: 6,
            triples: 100,
            triple_max_blocks: 8,
            triple_max_dim: 4,
            kron_pairs: 100,
            tol: 1e-10,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.p.is_empty() || self.p.iter().any(|&p| !(p > 0.0) || !p.is_finite()) {
            return Err(Error::Usage("p values must be positive and finite".into()));
        }
        if self.max_blocks == 0
            || self.max_dim == 0
            || self.triple_max_blocks == 0
            || self.triple_max_dim == 0
        {
            return Err(Error::Usage(
                "block counts and dimensions must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of one identity over all its cases.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub cases: usize,
    pub max_rel_error: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CheckResult {
    fn new(name: &'static str, p: Option<f64>, errors: &[f64], tol: f64) -> Self {
        // NaN must fail, so the maximum is taken with NaN propagating.
        let max_rel_error = errors.iter().fold(0.0f64, |m, &e| {
            if e.is_nan() || m.is_nan() {
                f64::NAN
            } else {
                m.max(e)
            }
        });
        Self {
            name,
            p,
            cases: errors.len(),
            max_rel_error,
            tol,
            pass: max_rel_error <= tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TensorCheckReport {
    pub config: SelfCheckConfig,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

/// Independent stream `stream` of the seed.
fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Entries with real and imaginary parts uniform on `[−1, 1)`.
pub fn random_matrix<R: Rng>(rng: &mut R, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Explicit symbol with `1..=max_blocks` blocks of dimension `1..=max_dim`
/// and multiplicities `1..=3`.
pub fn random_symbol<R: Rng>(rng: &mut R, max_blocks: usize, max_dim: usize) -> MatrixSymbol {
    let n = rng.random_range(1..=max_blocks);
    let blocks: Vec<CMatrix> = (0..n)
        .map(|_| {
            let d = rng.random_range(1..=max_dim);
            random_matrix(rng, d)
        })
        .collect();
    let mult: Vec<u64> = (0..n).map(|_| rng.random_range(1..=3)).collect();
    MatrixSymbol::from_blocks(blocks)
        .and_then(|s| s.with_multiplicities(mult))
        .expect("random blocks are square and finite")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn exhaustive(s: &MatrixSymbol) -> TruncationPolicy {
    TruncationPolicy::exhaustive(s.partition().len().unwrap_or(1).max(1))
}

/// Per-block singular values of every block pair's Kronecker product,
/// weighted by the product multiplicity.
fn pair_spectra(a: &MatrixSymbol, b: &MatrixSymbol) -> Result<Vec<(f64, Vec<f64>)>> {
    let (na, nb) = (
        a.partition().len().unwrap_or(0),
        b.partition().len().unwrap_or(0),
    );
    let mut out = Vec::with_capacity(na * nb);
    for i in 0..na {
        let ai = a.block(i)?;
        for j in 0..nb {
            let m = (a.multiplicity(i) * b.multiplicity(j)) as f64;
            out.push((m, singular_values_block(&kron(&ai, &b.block(j)?))?));
        }
    }
    Ok(out)
}

/// `‖A⊗B‖_p = ‖A‖_p‖B‖_p`, with the tensor norm also compared against a
/// direct sum over all block pairs of the Kronecker blocks. Returns one
/// product check and one oracle check per `p`.
pub fn multiplicativity(cfg: &SelfCheckConfig) -> Result<Vec<CheckResult>> {
    cfg.validate()?;
    let mut r = rng(cfg.seed, 1);
    let cases: Vec<(MatrixSymbol, MatrixSymbol)> = (0..cfg.pairs)
        .map(|_| {
            let a = random_symbol(&mut r, cfg.max_blocks, cfg.max_dim);
            let b = random_symbol(&mut r, cfg.max_blocks, cfg.max_dim);
            (a, b)
        })
        .collect();
    let errors: Vec<Vec<(f64, f64)>> = cases
        .par_iter()
        .map(|(a, b)| -> Result<Vec<(f64, f64)>> {
            let spectra = pair_spectra(a, b)?;
            let ts = tensor_symbols(vec![a.clone(), b.clone()])?;
            let t = TruncationPolicy::exhaustive(cfg.max_blocks);
            cfg.p
                .iter()
                .map(|&p| {
                    let joint = tensor_schatten_norm(&ts, p, &t)?.value;
                    let na = schatten_norm(a, p, &exhaustive(a))?.value;
                    let nb = schatten_norm(b, p, &exhaustive(b))?.value;
                    let direct = spectra
                        .iter()
                        .map(|(m, sv)| m * sv.iter().map(|s| s.powf(p)).sum::<f64>())
                        .sum::<f64>()
                        .powf(1.0 / p);
                    Ok((rel(joint, na * nb), rel(joint, direct)))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(2 * cfg.p.len());
    for (k, &p) in cfg.p.iter().enumerate() {
        let product: Vec<f64> = errors.iter().map(|e| e[k].0).collect();
        let oracle: Vec<f64> = errors.iter().map(|e| e[k].1).collect();
        out.push(CheckResult::new("norm_product", Some(p), &product, cfg.tol));
        out.push(CheckResult::new("norm_oracle", Some(p), &oracle, cfg.tol));
    }
    Ok(out)
}

/// `Tr(A⊗B⊗C) = Tr A · Tr B · Tr C`, with the tensor trace also compared
/// against the direct sum of Kronecker-block traces over all multi-indices.
///
/// Errors are relative to `Π Σ_ℓ mult(ℓ)|Tr σ(ℓ)|`, which bounds the trace
/// and stays away from zero when the traces themselves cancel.
pub fn trace_products(cfg: &SelfCheckConfig) -> Result<Vec<CheckResult>> {
    cfg.validate()?;
    let mut r = rng(cfg.seed, 2);
    let cases: Vec<[MatrixSymbol; 3]> = (0..cfg.triples)
        .map(|_| {
            core::array::from_fn(|_| {
                random_symbol(&mut r, cfg.triple_max_blocks, cfg.triple_max_dim)
            })
        })
        .collect();
    let errors: Vec<(f64, f64)> = cases
        .par_iter()
        .map(|syms| -> Result<(f64, f64)> {
            let blocks: Vec<Vec<(f64, CMatrix)>> = syms
                .iter()
                .map(|s| {
                    (0..s.partition().len().unwrap_or(0))
                        .map(|ell| Ok((s.multiplicity(ell) as f64, s.block(ell)?)))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            let traces: Vec<C64> = blocks
                .iter()
                .map(|bs| bs.iter().map(|(m, b)| b.trace() * *m).sum())
                .collect();
            let scale: f64 = blocks
                .iter()
                .map(|bs| bs.iter().map(|(m, b)| m * b.trace().norm()).sum::<f64>())
                .product();
            let ts = tensor_symbols(syms.to_vec())?;
            let joint =
                tensor_trace(&ts, &TruncationPolicy::exhaustive(cfg.triple_max_blocks))?.value;
            let mut direct = C64::new(0.0, 0.0);
            for (ma, a) in &blocks[0] {
                for (mb, b) in &blocks[1] {
                    let ab = kron(a, b);
                    for (mc, c) in &blocks[2] {
                        direct += kron(&ab, c).trace() * (ma * mb * mc);
                    }
                }
            }
            let product: C64 = traces.iter().product();
            let scale = scale.max(f64::MIN_POSITIVE);
            Ok((
                (joint - product).norm() / scale,
                (joint - direct).norm() / scale,
            ))
        })
        .collect::<Result<_>>()?;
    let product: Vec<f64> = errors.iter().map(|e| e.0).collect();
    let oracle: Vec<f64> = errors.iter().map(|e| e.1).collect();
    Ok(vec![
        CheckResult::new("trace_product", None, &product, cfg.tol),
        CheckResult::new("trace_oracle", None, &oracle, cfg.tol),
    ])
}

/// Singular values of `A⊗B` are the products `s_i(A)s_j(B)` with
/// multiplicity. Errors are relative to the largest singular value.
pub fn kron_singular_values(cfg: &SelfCheckConfig) -> Result<CheckResult> {
    cfg.validate()?;
    let mut r = rng(cfg.seed, 3);
    let cases: Vec<(CMatrix, CMatrix)> = (0..cfg.kron_pairs)
        .map(|_| {
            let da = r.random_range(1..=cfg.max_dim);
            let a = random_matrix(&mut r, da);
            let db = r.random_range(1..=cfg.max_dim);
            (a, random_matrix(&mut r, db))
        })
        .collect();
    let errors: Vec<f64> = cases
        .par_iter()
        .map(|(a, b)| -> Result<f64> {
            let sa = singular_values_block(a)?;
            let sb = singular_values_block(b)?;
            let mut products: Vec<f64> = sa
                .iter()
                .flat_map(|x| sb.iter().map(move |y| x * y))
                .collect();
            products.sort_by(|x, y| y.total_cmp(x));
            let joint = singular_values_block(&kron(a, b))?;
            if joint.len() != products.len() {
                return Ok(f64::INFINITY);
            }
            let scale = joint[0].max(f64::MIN_POSITIVE);
            Ok(joint
                .iter()
                .zip(&products)
                .map(|(x, y)| (x - y).abs() / scale)
                .fold(0.0, f64::max))
        })
        .collect::<Result<_>>()?;
    Ok(CheckResult::new(
        "kron_singular_values",
        None,
        &errors,
        cfg.tol,
    ))
}

/// Run every check.
pub fn tensor_check(cfg: &SelfCheckConfig) -> Result<TensorCheckReport> {
    let mut checks = multiplicativity(cfg)?;
    checks.extend(trace_products(cfg)?);
    checks.push(kron_singular_values(cfg)?);
    let pass = checks.iter().all(|c| c.pass);
    Ok(TensorCheckReport {
        config: cfg.clone(),
        checks,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> SelfCheckConfig {
        SelfCheckConfig {
            pairs: 10,
            triples: 5,
            kron_pairs: 10,
            ..SelfCheckConfig::new(seed, vec![0.5, 1.0, 2.0, 3.0])
        }
    }

    #[test]
    fn small_run_passes() {
        let report = tensor_check(&small(7)).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.checks.len(), 8 + 2 + 1);
    }

    #[test]
    fn same_seed_same_report() {
        assert_eq!(
            tensor_check(&small(3)).unwrap(),
            tensor_check(&small(3)).unwrap()
        );
        assert_ne!(
            tensor_check(&small(3)).unwrap().checks[1].max_rel_error,
            tensor_check(&small(4)).unwrap().checks[1].max_rel_error
        );
    }

    #[test]
    fn random_symbols_respect_limits() {
        let mut r = rng(1, 0);
        for _ in 0..50 {
            let s = random_symbol(&mut r, 4, 3);
            let dims = s.partition().explicit_dims().unwrap();
            assert!((1..=4).contains(&dims.len()));
            assert!(dims.iter().all(|d| (1..=3).contains(d)));
            assert!((0..dims.len()).all(|ell| (1..=3).contains(&s.multiplicity(ell))));
        }
    }

    #[test]
    fn nan_fails_the_check() {
        assert!(!CheckResult::new("x", None, &[0.0, f64::NAN, 0.0], 1.0).pass);
        assert!(CheckResult::new("x", None, &[], 1.0).pass);
    }

    #[test]
    fn invalid_p_is_rejected() {
        assert!(tensor_check(&SelfCheckConfig::new(1, vec![])).is_err());
        assert!(tensor_check(&SelfCheckConfig::new(1, vec![-1.0])).is_err());
    }
}
