//! Spectral-efficiency evaluation and the Monte-Carlo experiment harness.
//!
//! The achievable rate of a (precoder, combiner) pair is the
//! log-determinant formula with combining noise whitened through
//! R_n = sigma^2 W^H W; it is computed as
//! log2|R_n + (P/Ns) A A^H| - log2|R_n| with A = W^H H F, so both
//! determinant arguments are Hermitian positive definite by construction.
//!
//! Experiments sweep SNR, stream count or transmit antennas, averaging over
//! seeded per-trial channel draws. Trials run in parallel but reduce in
//! trial-index order, so results are identical at any thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::binaryopt::{exhaustive_pair, BinaryOptError};
use crate::channel::{generate_channel, ChannelError, ChannelParams, UlaGeometry};
use crate::hybrid::{
    design_digital, design_hybrid, effective_channel, DesignConfig, HybridBeamformer,
    HybridError, SignMatrix, SystemConfig,
};
use crate::linalg::{self, ComplexMatrix, LinalgError};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Hybrid(#[from] HybridError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("exhaustive guard exceeded: {0}")]
    ExhaustiveGuard(String),
    #[error("combiner is rank deficient: noise covariance is singular")]
    SingularCombiner,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl From<BinaryOptError> for EvalError {
    fn from(e: BinaryOptError) -> Self {
        match e {
            BinaryOptError::ExhaustiveGuard { size, max } => {
                EvalError::ExhaustiveGuard(format!("dimension {size} exceeds {max}"))
            }
            other => EvalError::Hybrid(HybridError::BinaryOpt(other)),
        }
    }
}

/// Algorithms the harness can score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Unconstrained full-digital SVD beamforming (upper benchmark).
    Opt,
    /// The successive one-bit candidate-set design.
    Proposed,
    /// Sign-quantized singular vectors (naive comparator).
    NaiveQuant,
    /// Brute-force search over all one-bit pairs (small sizes only).
    Exhaustive,
}

impl Algorithm {
    pub fn label(&self) -> &'static str {
        match self {
            Algorithm::Opt => "opt",
            Algorithm::Proposed => "proposed",
            Algorithm::NaiveQuant => "naive-quant",
            Algorithm::Exhaustive => "exhaustive",
        }
    }
}

/// One averaged measurement: algorithm x sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub sweep_var: String,
    pub sweep_value: f64,
    pub algorithm: String,
    pub mean_se: f64,
    pub std_err: f64,
    pub trials: usize,
    pub seed: u64,
}

/// What to sweep. SNR is in dB relative to the configured noise variance
/// (P = noise_var * 10^(dB/10)); stream and antenna sweeps evaluate at a
/// fixed SNR.
#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    Snr { grid_db: Vec<f64> },
    NumStreams { grid: Vec<usize>, snr_db: f64 },
    NumTxAntennas { grid: Vec<usize>, snr_db: f64 },
    EsCompare { grid_db: Vec<f64> },
    Single { snr_db: f64 },
}

/// A full experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub sweep: Sweep,
    pub sys: SystemConfig,
    pub chan: ChannelParams,
    pub design: DesignConfig,
    pub spacing_ratio: f64,
}

/// Spectral efficiency (bits/s/Hz) of a designed hybrid beamformer.
pub fn spectral_efficiency(
    h: &ComplexMatrix,
    bf: &HybridBeamformer,
    power: f64,
    noise_var: f64,
) -> Result<f64, EvalError> {
    se_from_beamformers(h, &bf.precoder(), &bf.combiner(), power, noise_var)
}

/// Spectral efficiency for explicit (possibly full-digital) beamformers.
///
/// `f` is nt x ns, `w` is nr x ns; the power is split evenly over the ns
/// streams.
pub fn se_from_beamformers(
    h: &ComplexMatrix,
    f: &ComplexMatrix,
    w: &ComplexMatrix,
    power: f64,
    noise_var: f64,
) -> Result<f64, EvalError> {
    if w.rows() != h.rows() || f.rows() != h.cols() || f.cols() != w.cols() {
        return Err(EvalError::InvalidInput(format!(
            "beamformer shapes ({}x{}, {}x{}) do not conform to channel {}x{}",
            f.rows(),
            f.cols(),
            w.rows(),
            w.cols(),
            h.rows(),
            h.cols()
        )));
    }
    if !(power >= 0.0) || !power.is_finite() {
        return Err(EvalError::InvalidInput(format!(
            "power must be nonnegative, got {power}"
        )));
    }
    if !(noise_var > 0.0) || !noise_var.is_finite() {
        return Err(EvalError::InvalidInput(format!(
            "noise_var must be positive, got {noise_var}"
        )));
    }

    let ns = f.cols() as f64;
    let a = w.adjoint().mul(h).mul(f);
    let rn = w.adjoint().mul(w).scale_real(noise_var).hermitian_part();
    let signal = a
        .mul(&a.adjoint())
        .scale_real(power / ns)
        .hermitian_part();

    let denom = linalg::logdet2_hermitian_pd(&rn).map_err(|e| match e {
        LinalgError::NotPositiveDefinite { .. } => EvalError::SingularCombiner,
        other => EvalError::Linalg(other),
    })?;
    let numer = linalg::logdet2_hermitian_pd(&rn.add(&signal).hermitian_part())?;
    Ok(numer - denom)
}

/// Spectral efficiency of unconstrained SVD beamforming with equal power
/// per stream: F is the top-ns right singular block, W the left one.
pub fn full_digital_opt(h: &ComplexMatrix, sys: &SystemConfig) -> Result<f64, EvalError> {
    let thin = linalg::svd_thin(h, sys.ns)?;
    se_from_beamformers(h, &thin.right, &thin.left, sys.power, sys.noise_var)
}

/// Naive comparator: one-bit analog stages obtained by sign-quantizing the
/// real parts of the top singular vectors (zero real parts map to +1),
/// digital stage identical to the proposed design.
pub fn naive_one_bit_baseline(
    h: &ComplexMatrix,
    sys: &SystemConfig,
) -> Result<HybridBeamformer, EvalError> {
    let thin = linalg::svd_thin(h, sys.ns)?;
    let quantize = |m: &ComplexMatrix| -> SignMatrix {
        let mut sm = SignMatrix::empty(m.rows());
        for j in 0..m.cols() {
            let signs: Vec<i8> = (0..m.rows())
                .map(|i| if m[(i, j)].re >= 0.0 { 1 } else { -1 })
                .collect();
            sm.push(crate::binaryopt::SignVector::new(signs));
        }
        sm
    };
    let f_rf = quantize(&thin.right);
    let w_rf = quantize(&thin.left);
    let h_eff = effective_channel(h, &f_rf, &w_rf)?;
    let (f_bb, w_bb) = design_digital(&h_eff, &f_rf, &w_rf)?;
    Ok(HybridBeamformer {
        f_rf,
        w_rf,
        f_bb,
        w_bb,
    })
}

/// Brute-force hybrid design: exhaustive search over all one-bit pairs of
/// the analog stage (single-stream only), then the usual digital stage.
pub fn exhaustive_hybrid(
    h: &ComplexMatrix,
    sys: &SystemConfig,
) -> Result<HybridBeamformer, EvalError> {
    if sys.ns != 1 {
        return Err(EvalError::ExhaustiveGuard(format!(
            "exhaustive search supports a single stream, got ns = {}",
            sys.ns
        )));
    }
    let (f, w) = exhaustive_pair(h)?;
    let mut f_rf = SignMatrix::empty(sys.nt);
    f_rf.push(f);
    let mut w_rf = SignMatrix::empty(sys.nr);
    w_rf.push(w);
    let h_eff = effective_channel(h, &f_rf, &w_rf)?;
    let (f_bb, w_bb) = design_digital(&h_eff, &f_rf, &w_rf)?;
    Ok(HybridBeamformer {
        f_rf,
        w_rf,
        f_bb,
        w_bb,
    })
}

struct GridPoint {
    sweep_var: &'static str,
    sweep_value: f64,
    sys: SystemConfig,
}

/// Points sharing channel dimensions and stream count; the channel draw and
/// the designs are reused across such points (only the power differs).
struct Group {
    sys: SystemConfig,
    point_indices: Vec<usize>,
}

fn db_to_power(noise_var: f64, snr_db: f64) -> f64 {
    noise_var * 10f64.powf(snr_db / 10.0)
}

fn expand_grid(spec: &ExperimentSpec) -> Result<Vec<GridPoint>, EvalError> {
    let base = spec.sys;
    let mk = |nt: usize, ns: usize, snr_db: f64| -> Result<SystemConfig, EvalError> {
        SystemConfig::new(
            nt,
            base.nr,
            ns,
            ns,
            db_to_power(base.noise_var, snr_db),
            base.noise_var,
        )
        .map_err(EvalError::Hybrid)
    };
    let points = match &spec.sweep {
        Sweep::Snr { grid_db } | Sweep::EsCompare { grid_db } => grid_db
            .iter()
            .map(|&db| {
                Ok(GridPoint {
                    sweep_var: "snr_db",
                    sweep_value: db,
                    sys: mk(base.nt, base.ns, db)?,
                })
            })
            .collect::<Result<Vec<_>, EvalError>>()?,
        Sweep::NumStreams { grid, snr_db } => grid
            .iter()
            .map(|&ns| {
                Ok(GridPoint {
                    sweep_var: "ns",
                    sweep_value: ns as f64,
                    sys: mk(base.nt, ns, *snr_db)?,
                })
            })
            .collect::<Result<Vec<_>, EvalError>>()?,
        Sweep::NumTxAntennas { grid, snr_db } => grid
            .iter()
            .map(|&nt| {
                Ok(GridPoint {
                    sweep_var: "nt",
                    sweep_value: nt as f64,
                    sys: mk(nt, base.ns, *snr_db)?,
                })
            })
            .collect::<Result<Vec<_>, EvalError>>()?,
        Sweep::Single { snr_db } => vec![GridPoint {
            sweep_var: "snr_db",
            sweep_value: *snr_db,
            sys: mk(base.nt, base.ns, *snr_db)?,
        }],
    };
    if points.is_empty() {
        return Err(EvalError::InvalidInput("empty sweep grid".into()));
    }
    Ok(points)
}

fn group_points(points: &[GridPoint]) -> Vec<Group> {
    let mut groups: Vec<Group> = Vec::new();
    for (idx, p) in points.iter().enumerate() {
        let key = (p.sys.nt, p.sys.nr, p.sys.ns);
        match groups
            .iter_mut()
            .find(|g| (g.sys.nt, g.sys.nr, g.sys.ns) == key)
        {
            Some(g) => g.point_indices.push(idx),
            None => groups.push(Group {
                sys: p.sys,
                point_indices: vec![idx],
            }),
        }
    }
    groups
}

fn algorithms_for(sweep: &Sweep) -> Vec<Algorithm> {
    match sweep {
        Sweep::EsCompare { .. } => vec![
            Algorithm::Opt,
            Algorithm::Proposed,
            Algorithm::NaiveQuant,
            Algorithm::Exhaustive,
        ],
        _ => vec![Algorithm::Opt, Algorithm::Proposed, Algorithm::NaiveQuant],
    }
}

/// Run a Monte-Carlo experiment: average the spectral efficiency of every
/// algorithm at every grid point over `trials` channel realizations.
///
/// Trial `t` draws its channel from ChaCha8(seed) on stream `t`, so the
/// result set is a pure function of (spec, trials, seed) regardless of
/// thread count or scheduling.
pub fn run_monte_carlo(
    spec: &ExperimentSpec,
    trials: usize,
    seed: u64,
) -> Result<Vec<ExperimentResult>, EvalError> {
    if trials == 0 {
        return Err(EvalError::InvalidInput("trials must be at least 1".into()));
    }
    spec.chan.validate()?;
    spec.design
        .validate()
        .map_err(EvalError::Hybrid)?;
    let points = expand_grid(spec)?;
    let groups = group_points(&points);
    let algs = algorithms_for(&spec.sweep);

    // Surface guard violations before burning trial time.
    if algs.contains(&Algorithm::Exhaustive) {
        let worst = groups
            .iter()
            .map(|g| g.sys.nt + g.sys.nr)
            .max()
            .unwrap_or(0);
        if worst > crate::binaryopt::EXHAUSTIVE_PAIR_MAX {
            return Err(EvalError::ExhaustiveGuard(format!(
                "nt + nr = {worst} exceeds {}",
                crate::binaryopt::EXHAUSTIVE_PAIR_MAX
            )));
        }
        if groups.iter().any(|g| g.sys.ns != 1) {
            return Err(EvalError::ExhaustiveGuard(
                "exhaustive search supports a single stream only".into(),
            ));
        }
    }

    let n_algs = algs.len();
    let per_trial: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| trial_values(spec, &points, &groups, &algs, seed, t as u64))
        .collect::<Result<Vec<_>, EvalError>>()?;

    let mut results = Vec::with_capacity(points.len() * n_algs);
    for (pi, point) in points.iter().enumerate() {
        for (ai, alg) in algs.iter().enumerate() {
            let slot = pi * n_algs + ai;
            // Reduce in trial-index order: the sum is re-associated the same
            // way no matter how trials were scheduled.
            let mean = per_trial.iter().map(|row| row[slot]).sum::<f64>() / trials as f64;
            let std_err = if trials > 1 {
                let var = per_trial
                    .iter()
                    .map(|row| (row[slot] - mean).powi(2))
                    .sum::<f64>()
                    / (trials - 1) as f64;
                (var / trials as f64).sqrt()
            } else {
                0.0
            };
            results.push(ExperimentResult {
                sweep_var: point.sweep_var.to_string(),
                sweep_value: point.sweep_value,
                algorithm: alg.label().to_string(),
                mean_se: mean,
                std_err,
                trials,
                seed,
            });
        }
    }
    Ok(results)
}

fn trial_values(
    spec: &ExperimentSpec,
    points: &[GridPoint],
    groups: &[Group],
    algs: &[Algorithm],
    seed: u64,
    trial: u64,
) -> Result<Vec<f64>, EvalError> {
    let n_algs = algs.len();
    let mut vals = vec![0.0f64; points.len() * n_algs];
    for group in groups {
        let tx = UlaGeometry::new(group.sys.nt, spec.spacing_ratio)?;
        let rx = UlaGeometry::new(group.sys.nr, spec.spacing_ratio)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let chan = generate_channel(tx, rx, &spec.chan, &mut rng)?;

        for (ai, alg) in algs.iter().enumerate() {
            // Designs do not depend on transmit power, so each group designs
            // once and re-evaluates per SNR point.
            let bf = match alg {
                Algorithm::Opt => None,
                Algorithm::Proposed => Some(design_hybrid(&chan.h, &group.sys, &spec.design)?),
                Algorithm::NaiveQuant => Some(naive_one_bit_baseline(&chan.h, &group.sys)?),
                Algorithm::Exhaustive => Some(exhaustive_hybrid(&chan.h, &group.sys)?),
            };
            for &pi in &group.point_indices {
                let sys_p = points[pi].sys;
                let se = match &bf {
                    Some(bf) => spectral_efficiency(&chan.h, bf, sys_p.power, sys_p.noise_var)?,
                    None => full_digital_opt(&chan.h, &sys_p)?,
                };
                vals[pi * n_algs + ai] = se;
            }
        }
    }
    Ok(vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(m, n, |_, _| {
            c(rng.sample(StandardNormal), rng.sample(StandardNormal))
        })
    }

    fn spec_8x8_ns1() -> ExperimentSpec {
        ExperimentSpec {
            sweep: Sweep::Single { snr_db: 0.0 },
            sys: SystemConfig::new(8, 8, 1, 1, 1.0, 1.0).unwrap(),
            chan: ChannelParams::defaults(),
            design: DesignConfig::default(),
            spacing_ratio: 0.5,
        }
    }

    #[test]
    fn zero_power_gives_zero_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = random_matrix(&mut rng, 4, 6);
        let sys = SystemConfig::new(6, 4, 2, 2, 1.0, 1.0).unwrap();
        let bf = design_hybrid(&h, &sys, &DesignConfig::default()).unwrap();
        let r = spectral_efficiency(&h, &bf, 0.0, 1.0).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn identity_channel_closed_form() {
        // H = I2, F = W = I2, P/sigma^2 = 1: R = 2 log2(1 + 1/2).
        let h = ComplexMatrix::identity(2);
        let eye = ComplexMatrix::identity(2);
        let r = se_from_beamformers(&h, &eye, &eye, 1.0, 1.0).unwrap();
        assert!((r - 2.0 * 1.5f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn combiner_scaling_leaves_rate_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = random_matrix(&mut rng, 5, 7);
        let sys = SystemConfig::new(7, 5, 2, 2, 2.0, 0.5).unwrap();
        let bf = design_hybrid(&h, &sys, &DesignConfig::default()).unwrap();
        let r1 = spectral_efficiency(&h, &bf, sys.power, sys.noise_var).unwrap();
        let scaled = HybridBeamformer {
            w_bb: bf.w_bb.scale_real(3.0),
            ..bf
        };
        let r2 = spectral_efficiency(&h, &scaled, sys.power, sys.noise_var).unwrap();
        assert!((r1 - r2).abs() < 1e-9, "{} vs {}", r1, r2);
    }

    #[test]
    fn opt_diagonal_closed_form() {
        // H = diag(2,1), ns = 2, P/sigma^2 = 1: per-stream power P/2 gives
        // log2(1 + 4/2) + log2(1 + 1/2).
        let h = ComplexMatrix::from_real_diag(&[2.0, 1.0]);
        let sys = SystemConfig::new(2, 2, 2, 2, 1.0, 1.0).unwrap();
        let r = full_digital_opt(&h, &sys).unwrap();
        let expect = 3f64.log2() + 1.5f64.log2();
        assert!((r - expect).abs() < 1e-12, "{} vs {}", r, expect);
    }

    #[test]
    fn opt_rank_one_scalar_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u: Vec<Complex64> = (0..5)
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let v: Vec<Complex64> = (0..4)
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let h = ComplexMatrix::from_fn(5, 4, |i, j| u[i] * v[j].conj());
        let sigma1 = crate::linalg::svd(&h).unwrap().singular[0];
        let sys = SystemConfig::new(4, 5, 1, 1, 2.0, 0.5).unwrap();
        let r = full_digital_opt(&h, &sys).unwrap();
        let expect = (1.0 + 2.0 * sigma1 * sigma1 / 0.5).log2();
        assert!((r - expect).abs() < 1e-9);
    }

    #[test]
    fn opt_dominates_hybrid_designs() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..25 {
            let h = random_matrix(&mut rng, 6, 10);
            let sys = SystemConfig::new(10, 6, 2, 2, 10.0, 1.0).unwrap();
            let opt = full_digital_opt(&h, &sys).unwrap();
            let bf = design_hybrid(&h, &sys, &DesignConfig::default()).unwrap();
            let prop = spectral_efficiency(&h, &bf, sys.power, sys.noise_var).unwrap();
            let naive = naive_one_bit_baseline(&h, &sys).unwrap();
            let nv = spectral_efficiency(&h, &naive, sys.power, sys.noise_var).unwrap();
            assert!(opt >= prop - 1e-9, "opt {} < proposed {}", opt, prop);
            assert!(opt >= nv - 1e-9);
            assert!(prop >= 0.0 && nv >= 0.0);
        }
    }

    #[test]
    fn naive_baseline_satisfies_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_matrix(&mut rng, 8, 8);
        let sys = SystemConfig::new(8, 8, 3, 3, 1.0, 1.0).unwrap();
        let bf = naive_one_bit_baseline(&h, &sys).unwrap();
        assert!((bf.precoder().frobenius_norm().powi(2) - 3.0).abs() < 1e-10);
        assert!((bf.combiner().frobenius_norm().powi(2) - 3.0).abs() < 1e-10);
    }

    #[test]
    fn naive_baseline_matches_rank1_direction_for_real_positive_vectors() {
        // A channel with entrywise-positive real singular vectors: both the
        // naive sign quantization and the candidate search return all-ones.
        let p = [0.9, 1.1, 1.0, 0.95];
        let q = [1.0, 1.05, 0.98];
        let h = ComplexMatrix::from_fn(4, 3, |i, j| c(3.0 * p[i] * q[j], 0.0));
        let sys = SystemConfig::new(3, 4, 1, 1, 1.0, 1.0).unwrap();
        let naive = naive_one_bit_baseline(&h, &sys).unwrap();
        assert!(naive.f_rf.column(0).signs().iter().all(|&s| s == 1));
        assert!(naive.w_rf.column(0).signs().iter().all(|&s| s == 1));
        let best = crate::binaryopt::maximize_rank1(
            &crate::linalg::svd_thin(&h, 1).unwrap().right.col(0),
        )
        .unwrap();
        assert_eq!(best.signs(), naive.f_rf.column(0).signs());
    }

    #[test]
    fn per_trial_rate_is_monotone_in_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let h = random_matrix(&mut rng, 4, 8);
        let sys = SystemConfig::new(8, 4, 2, 2, 1.0, 1.0).unwrap();
        let bf = design_hybrid(&h, &sys, &DesignConfig::default()).unwrap();
        let mut last = -1.0;
        for db in [-10.0, -5.0, 0.0, 5.0, 10.0, 20.0] {
            let p = db_to_power(1.0, db);
            let r = spectral_efficiency(&h, &bf, p, 1.0).unwrap();
            assert!(r >= last, "rate decreased: {} after {}", r, last);
            last = r;
        }
    }

    #[test]
    fn monte_carlo_is_deterministic_and_thread_independent() {
        let spec = ExperimentSpec {
            sweep: Sweep::Snr {
                grid_db: vec![0.0, 10.0],
            },
            ..spec_8x8_ns1()
        };
        let a = run_monte_carlo(&spec, 8, 42).unwrap();
        let b = run_monte_carlo(&spec, 8, 42).unwrap();
        assert_eq!(a, b);

        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let c = pool.install(|| run_monte_carlo(&spec, 8, 42).unwrap());
        assert_eq!(a, c);
    }

    #[test]
    fn monte_carlo_single_trial_rows() {
        let spec = spec_8x8_ns1();
        let rows = run_monte_carlo(&spec, 1, 7).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.std_err == 0.0));
        assert!(rows.iter().all(|r| r.mean_se >= 0.0));
        assert!(rows.iter().all(|r| r.trials == 1 && r.seed == 7));
        let labels: Vec<&str> = rows.iter().map(|r| r.algorithm.as_str()).collect();
        assert_eq!(labels, vec!["opt", "proposed", "naive-quant"]);
    }

    #[test]
    fn es_compare_includes_exhaustive_and_respects_guard() {
        let spec = ExperimentSpec {
            sweep: Sweep::EsCompare {
                grid_db: vec![0.0],
            },
            ..spec_8x8_ns1()
        };
        let rows = run_monte_carlo(&spec, 3, 1).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().any(|r| r.algorithm == "exhaustive"));

        let too_big = ExperimentSpec {
            sys: SystemConfig::new(64, 16, 1, 1, 1.0, 1.0).unwrap(),
            ..spec
        };
        assert!(matches!(
            run_monte_carlo(&too_big, 1, 1),
            Err(EvalError::ExhaustiveGuard(_))
        ));
    }

    #[test]
    fn snr_sweep_means_are_nondecreasing() {
        let spec = ExperimentSpec {
            sweep: Sweep::Snr {
                grid_db: vec![-10.0, 0.0, 10.0],
            },
            ..spec_8x8_ns1()
        };
        let rows = run_monte_carlo(&spec, 10, 3).unwrap();
        for alg in ["opt", "proposed", "naive-quant"] {
            let curve: Vec<f64> = rows
                .iter()
                .filter(|r| r.algorithm == alg)
                .map(|r| r.mean_se)
                .collect();
            assert_eq!(curve.len(), 3);
            assert!(curve.windows(2).all(|w| w[1] >= w[0]), "{alg}: {curve:?}");
        }
    }

    #[test]
    fn rejects_zero_trials() {
        let spec = spec_8x8_ns1();
        assert!(matches!(
            run_monte_carlo(&spec, 0, 1),
            Err(EvalError::InvalidInput(_))
        ));
    }
}
