//! Python bindings for the one-bit hybrid beamforming simulator.
//!
//! Matrices cross the boundary as `list[list[complex]]` (row-major), sign
//! vectors as `list[int]` over {+1, -1}. Everything is seeded and
//! deterministic, matching the Rust library and CLI bit for bit.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hbf_core::channel::{self, AngleInterval, ChannelDump};
use hbf_core::evaluate;
use hbf_core::hybrid;
use hbf_core::linalg::ComplexMatrix;

fn to_py_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix_from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<ComplexMatrix> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err(PyValueError::new_err("matrix must be non-empty"));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("matrix rows have unequal lengths"));
    }
    ComplexMatrix::new(rows.len(), cols, rows.into_iter().flatten().collect()).map_err(to_py_err)
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Antenna/RF-chain/stream counts plus transmit power and noise variance.
#[pyclass(name = "SystemConfig", frozen, from_py_object)]
#[derive(Clone)]
struct PySystemConfig {
    inner: hybrid::SystemConfig,
}

#[pymethods]
impl PySystemConfig {
    #[new]
    #[pyo3(signature = (nt, nr, n_rf, ns, power=1.0, noise_var=1.0))]
    fn new(nt: usize, nr: usize, n_rf: usize, ns: usize, power: f64, noise_var: f64) -> PyResult<Self> {
        Ok(Self {
            inner: hybrid::SystemConfig::new(nt, nr, n_rf, ns, power, noise_var)
                .map_err(to_py_err)?,
        })
    }

    #[getter]
    fn nt(&self) -> usize {
        self.inner.nt
    }

    #[getter]
    fn nr(&self) -> usize {
        self.inner.nr
    }

    #[getter]
    fn ns(&self) -> usize {
        self.inner.ns
    }

    #[getter]
    fn power(&self) -> f64 {
        self.inner.power
    }

    #[getter]
    fn noise_var(&self) -> f64 {
        self.inner.noise_var
    }

    fn __repr__(&self) -> String {
        format!(
            "SystemConfig(nt={}, nr={}, n_rf={}, ns={}, power={}, noise_var={})",
            self.inner.nt, self.inner.nr, self.inner.n_rf, self.inner.ns, self.inner.power,
            self.inner.noise_var
        )
    }
}

/// Cluster-ray channel parameters; angles in degrees.
#[pyclass(name = "ChannelParams", frozen, from_py_object)]
#[derive(Clone)]
struct PyChannelParams {
    inner: channel::ChannelParams,
}

#[pymethods]
impl PyChannelParams {
    #[new]
    #[pyo3(signature = (n_cl=10, n_ray=10, angle_spread_deg=2.5, aoa_sector_deg=60.0,
                        aod_start_deg=0.0, aod_width_deg=360.0, decay_base=0.7))]
    fn new(
        n_cl: usize,
        n_ray: usize,
        angle_spread_deg: f64,
        aoa_sector_deg: f64,
        aod_start_deg: f64,
        aod_width_deg: f64,
        decay_base: f64,
    ) -> PyResult<Self> {
        let inner = channel::ChannelParams {
            num_clusters: n_cl,
            rays_per_cluster: n_ray,
            angle_spread_rad: angle_spread_deg.to_radians(),
            aod_mean_range: AngleInterval {
                start_rad: aod_start_deg.to_radians(),
                width_rad: aod_width_deg.to_radians(),
            },
            aoa_mean_sector_width: aoa_sector_deg.to_radians(),
            power_decay_base: decay_base,
        };
        inner.validate().map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n_cl(&self) -> usize {
        self.inner.num_clusters
    }

    #[getter]
    fn n_ray(&self) -> usize {
        self.inner.rays_per_cluster
    }
}

/// Analog design knobs.
#[pyclass(name = "DesignConfig", frozen, from_py_object)]
#[derive(Clone)]
struct PyDesignConfig {
    inner: hybrid::DesignConfig,
}

#[pymethods]
impl PyDesignConfig {
    #[new]
    #[pyo3(signature = (alpha_rel=1e-6, q1_raw=false))]
    fn new(alpha_rel: f64, q1_raw: bool) -> PyResult<Self> {
        let inner = hybrid::DesignConfig { alpha_rel, q1_raw };
        inner.validate().map_err(to_py_err)?;
        Ok(Self { inner })
    }
}

/// A generated channel realization.
#[pyclass(name = "Channel", frozen)]
struct PyChannel {
    realization: channel::ChannelRealization,
    params: channel::ChannelParams,
    seed: u64,
}

#[pymethods]
impl PyChannel {
    #[getter]
    fn nt(&self) -> usize {
        self.realization.nt()
    }

    #[getter]
    fn nr(&self) -> usize {
        self.realization.nr()
    }

    /// Row-major channel matrix.
    fn matrix(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(&self.realization.h)
    }

    /// JSON dump ({nt, nr, seed, params, h_real, h_imag}).
    fn to_json(&self) -> String {
        ChannelDump::from_realization(&self.realization, &self.params, self.seed).to_json()
    }
}

/// The designed beamformer quadruple.
#[pyclass(name = "Beamformer", frozen)]
struct PyBeamformer {
    inner: hybrid::HybridBeamformer,
}

#[pymethods]
impl PyBeamformer {
    /// Analog precoder F_RF (entries +-1/sqrt(nt)).
    fn f_rf(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(&self.inner.f_rf.to_matrix())
    }

    /// Analog combiner W_RF (entries +-1/sqrt(nr)).
    fn w_rf(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(&self.inner.w_rf.to_matrix())
    }

    fn f_bb(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(&self.inner.f_bb)
    }

    fn w_bb(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(&self.inner.w_bb)
    }

    /// Combined transmit beamformer F_RF @ F_BB.
    fn precoder(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(&self.inner.precoder())
    }

    /// Combined receive beamformer W_RF @ W_BB.
    fn combiner(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(&self.inner.combiner())
    }
}

/// Draw a seeded channel realization for two half-wavelength-by-default
/// ULAs.
#[pyfunction]
#[pyo3(signature = (nt, nr, seed, params=None, spacing_ratio=0.5))]
fn generate_channel(
    nt: usize,
    nr: usize,
    seed: u64,
    params: Option<PyChannelParams>,
    spacing_ratio: f64,
) -> PyResult<PyChannel> {
    let params = params
        .map(|p| p.inner)
        .unwrap_or_else(channel::ChannelParams::defaults);
    let tx = channel::UlaGeometry::new(nt, spacing_ratio).map_err(to_py_err)?;
    let rx = channel::UlaGeometry::new(nr, spacing_ratio).map_err(to_py_err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let realization = channel::generate_channel(tx, rx, &params, &mut rng).map_err(to_py_err)?;
    Ok(PyChannel {
        realization,
        params,
        seed,
    })
}

/// Parse a channel dump produced by `Channel.to_json` back into a matrix.
#[pyfunction]
fn channel_matrix_from_json(text: &str) -> PyResult<Vec<Vec<Complex64>>> {
    let dump = ChannelDump::from_json(text).map_err(to_py_err)?;
    Ok(matrix_to_rows(&dump.matrix()))
}

/// ULA steering vector for `n` antennas at angle `theta` (radians).
#[pyfunction]
#[pyo3(signature = (n, theta, spacing_ratio=0.5))]
fn array_response(n: usize, theta: f64, spacing_ratio: f64) -> PyResult<Vec<Complex64>> {
    let geom = channel::UlaGeometry::new(n, spacing_ratio).map_err(to_py_err)?;
    Ok(channel::array_response(geom, theta))
}

/// Normalized geometric cluster powers (sum equals `n_cl`).
#[pyfunction]
fn cluster_powers(n_cl: usize, decay_base: f64) -> PyResult<Vec<f64>> {
    if n_cl < 1 || !(decay_base > 0.0 && decay_base < 1.0) {
        return Err(PyValueError::new_err(
            "need n_cl >= 1 and decay_base in (0,1)",
        ));
    }
    Ok(channel::cluster_powers(n_cl, decay_base))
}

/// Exact one-bit maximizer of |b^H q| via the candidate-set construction.
/// Returns (signs, objective) with the 1/sqrt(N) modulus included.
#[pyfunction]
fn maximize_rank1(q: Vec<Complex64>) -> PyResult<(Vec<i8>, f64)> {
    let best = hbf_core::binaryopt::maximize_rank1(&q).map_err(to_py_err)?;
    let obj = best.objective(&q);
    Ok((best.signs().to_vec(), obj))
}

/// Brute-force reference for `maximize_rank1` (N <= 20).
#[pyfunction]
fn exhaustive_rank1(q: Vec<Complex64>) -> PyResult<(Vec<i8>, f64)> {
    let best = hbf_core::binaryopt::exhaustive_rank1(&q).map_err(to_py_err)?;
    let obj = best.objective(&q);
    Ok((best.signs().to_vec(), obj))
}

/// Design the one-bit hybrid beamformer for a channel matrix.
#[pyfunction]
#[pyo3(signature = (h, sys, cfg=None))]
fn design_hybrid(
    h: Vec<Vec<Complex64>>,
    sys: PySystemConfig,
    cfg: Option<PyDesignConfig>,
) -> PyResult<PyBeamformer> {
    let h = matrix_from_rows(h)?;
    let cfg = cfg.map(|c| c.inner).unwrap_or_default();
    let inner = hybrid::design_hybrid(&h, &sys.inner, &cfg).map_err(to_py_err)?;
    Ok(PyBeamformer { inner })
}

/// Sign-quantized comparator design.
#[pyfunction]
fn naive_one_bit_baseline(h: Vec<Vec<Complex64>>, sys: PySystemConfig) -> PyResult<PyBeamformer> {
    let h = matrix_from_rows(h)?;
    let inner = evaluate::naive_one_bit_baseline(&h, &sys.inner).map_err(to_py_err)?;
    Ok(PyBeamformer { inner })
}

/// Achievable spectral efficiency (bits/s/Hz) of a designed beamformer.
#[pyfunction]
fn spectral_efficiency(
    h: Vec<Vec<Complex64>>,
    bf: &PyBeamformer,
    power: f64,
    noise_var: f64,
) -> PyResult<f64> {
    let h = matrix_from_rows(h)?;
    evaluate::spectral_efficiency(&h, &bf.inner, power, noise_var).map_err(to_py_err)
}

/// Spectral efficiency of unconstrained full-digital SVD beamforming.
#[pyfunction]
fn full_digital_opt(h: Vec<Vec<Complex64>>, sys: PySystemConfig) -> PyResult<f64> {
    let h = matrix_from_rows(h)?;
    evaluate::full_digital_opt(&h, &sys.inner).map_err(to_py_err)
}

/// Monte-Carlo sweep. `experiment` is one of "snr-sweep", "ns-sweep",
/// "nt-sweep", "es-compare" or "single"; `grid` is the dB grid for SNR
/// sweeps or the integer grid for ns/nt sweeps (ignored for "single").
/// Returns one dict per (grid point, algorithm).
#[pyfunction]
#[pyo3(signature = (experiment, sys, trials, seed, grid=None, snr_db=20.0,
                    params=None, design=None, spacing_ratio=0.5))]
#[allow(clippy::too_many_arguments)]
fn run_monte_carlo(
    py: Python<'_>,
    experiment: &str,
    sys: PySystemConfig,
    trials: usize,
    seed: u64,
    grid: Option<Vec<f64>>,
    snr_db: f64,
    params: Option<PyChannelParams>,
    design: Option<PyDesignConfig>,
    spacing_ratio: f64,
) -> PyResult<Vec<Py<PyAny>>> {
    let to_usize_grid = |g: &[f64]| -> PyResult<Vec<usize>> {
        g.iter()
            .map(|&x| {
                if x.fract() == 0.0 && x >= 1.0 {
                    Ok(x as usize)
                } else {
                    Err(PyValueError::new_err(format!(
                        "grid entry {x} is not a positive integer"
                    )))
                }
            })
            .collect()
    };
    let sweep = match experiment {
        "snr-sweep" => evaluate::Sweep::Snr {
            grid_db: grid.ok_or_else(|| PyValueError::new_err("snr-sweep needs a grid"))?,
        },
        "es-compare" => evaluate::Sweep::EsCompare {
            grid_db: grid.ok_or_else(|| PyValueError::new_err("es-compare needs a grid"))?,
        },
        "ns-sweep" => evaluate::Sweep::NumStreams {
            grid: to_usize_grid(
                &grid.ok_or_else(|| PyValueError::new_err("ns-sweep needs a grid"))?,
            )?,
            snr_db,
        },
        "nt-sweep" => evaluate::Sweep::NumTxAntennas {
            grid: to_usize_grid(
                &grid.ok_or_else(|| PyValueError::new_err("nt-sweep needs a grid"))?,
            )?,
            snr_db,
        },
        "single" => evaluate::Sweep::Single { snr_db },
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown experiment '{other}'"
            )))
        }
    };
    let spec = evaluate::ExperimentSpec {
        sweep,
        sys: sys.inner,
        chan: params
            .map(|p| p.inner)
            .unwrap_or_else(channel::ChannelParams::defaults),
        design: design.map(|d| d.inner).unwrap_or_default(),
        spacing_ratio,
    };
    let rows = evaluate::run_monte_carlo(&spec, trials, seed).map_err(to_py_err)?;
    rows.iter()
        .map(|r| {
            let d = pyo3::types::PyDict::new(py);
            d.set_item("sweep_var", &r.sweep_var)?;
            d.set_item("sweep_value", r.sweep_value)?;
            d.set_item("algorithm", &r.algorithm)?;
            d.set_item("mean_se", r.mean_se)?;
            d.set_item("std_err", r.std_err)?;
            d.set_item("trials", r.trials)?;
            d.set_item("seed", r.seed)?;
            Ok(d.into_any().unbind())
        })
        .collect()
}

#[pymodule]
fn hbf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystemConfig>()?;
    m.add_class::<PyChannelParams>()?;
    m.add_class::<PyDesignConfig>()?;
    m.add_class::<PyChannel>()?;
    m.add_class::<PyBeamformer>()?;
    m.add_function(wrap_pyfunction!(generate_channel, m)?)?;
    m.add_function(wrap_pyfunction!(channel_matrix_from_json, m)?)?;
    m.add_function(wrap_pyfunction!(array_response, m)?)?;
    m.add_function(wrap_pyfunction!(cluster_powers, m)?)?;
    m.add_function(wrap_pyfunction!(maximize_rank1, m)?)?;
    m.add_function(wrap_pyfunction!(exhaustive_rank1, m)?)?;
    m.add_function(wrap_pyfunction!(design_hybrid, m)?)?;
    m.add_function(wrap_pyfunction!(naive_one_bit_baseline, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_efficiency, m)?)?;
    m.add_function(wrap_pyfunction!(full_digital_opt, m)?)?;
    m.add_function(wrap_pyfunction!(run_monte_carlo, m)?)?;
    Ok(())
}
