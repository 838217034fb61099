//! Clustered mmWave channel generation for uniform linear arrays.
//!
//! A realization is a sum of `N_cl` scattering clusters with `N_ray` rays
//! each: every ray contributes a complex Gaussian gain times an outer
//! product of receive/transmit steering vectors, with per-ray angles drawn
//! as cluster mean plus a Laplacian offset. Cluster powers decay
//! geometrically and are normalized so they sum to the cluster count.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::ComplexMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("invalid {field}: {message}")]
    InvalidParameter {
        field: &'static str,
        message: String,
    },
}

/// Uniform linear array: antenna count and element spacing as a fraction of
/// the wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UlaGeometry {
    pub num_antennas: usize,
    pub spacing_ratio: f64,
}

impl UlaGeometry {
    pub fn new(num_antennas: usize, spacing_ratio: f64) -> Result<Self, ChannelError> {
        if num_antennas < 1 {
            return Err(ChannelError::InvalidParameter {
                field: "num_antennas",
                message: "must be at least 1".into(),
            });
        }
        if !(spacing_ratio > 0.0) || !spacing_ratio.is_finite() {
            return Err(ChannelError::InvalidParameter {
                field: "spacing_ratio",
                message: format!("must be positive and finite, got {spacing_ratio}"),
            });
        }
        Ok(Self {
            num_antennas,
            spacing_ratio,
        })
    }

    /// Half-wavelength spacing.
    pub fn half_wavelength(num_antennas: usize) -> Result<Self, ChannelError> {
        Self::new(num_antennas, 0.5)
    }
}

/// A contiguous angle interval in radians, as start plus width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleInterval {
    pub start_rad: f64,
    pub width_rad: f64,
}

/// Cluster-ray model parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub num_clusters: usize,
    pub rays_per_cluster: usize,
    /// Standard deviation of the per-ray Laplacian angle offset (radians),
    /// shared between departure and arrival sides.
    pub angle_spread_rad: f64,
    /// Interval the mean cluster departure angles are drawn from.
    pub aod_mean_range: AngleInterval,
    /// Width of the arrival sector; its start is redrawn uniformly once per
    /// realization.
    pub aoa_mean_sector_width: f64,
    /// Geometric decay base of the cluster powers, in (0, 1).
    pub power_decay_base: f64,
}

impl ChannelParams {
    /// The simulation defaults: 10 clusters of 10 rays, 2.5 degree spread,
    /// departure means over the full circle, a pi/3 arrival sector and a
    /// 0.7 power decay base.
    pub fn defaults() -> Self {
        Self {
            num_clusters: 10,
            rays_per_cluster: 10,
            angle_spread_rad: 2.5f64.to_radians(),
            aod_mean_range: AngleInterval {
                start_rad: 0.0,
                width_rad: 2.0 * std::f64::consts::PI,
            },
            aoa_mean_sector_width: std::f64::consts::FRAC_PI_3,
            power_decay_base: 0.7,
        }
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        if self.num_clusters < 1 {
            return Err(ChannelError::InvalidParameter {
                field: "num_clusters",
                message: "must be at least 1".into(),
            });
        }
        if self.rays_per_cluster < 1 {
            return Err(ChannelError::InvalidParameter {
                field: "rays_per_cluster",
                message: "must be at least 1".into(),
            });
        }
        if !(self.angle_spread_rad > 0.0) {
            return Err(ChannelError::InvalidParameter {
                field: "angle_spread_rad",
                message: format!("must be positive, got {}", self.angle_spread_rad),
            });
        }
        if !(self.power_decay_base > 0.0 && self.power_decay_base < 1.0) {
            return Err(ChannelError::InvalidParameter {
                field: "power_decay_base",
                message: format!("must be in (0,1), got {}", self.power_decay_base),
            });
        }
        if !(self.aoa_mean_sector_width > 0.0) {
            return Err(ChannelError::InvalidParameter {
                field: "aoa_mean_sector_width",
                message: "must be positive".into(),
            });
        }
        Ok(())
    }
}

/// One generated channel: the matrix plus the per-ray metadata it was
/// assembled from.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub h: ComplexMatrix,
    /// Ray gains, cluster-major (cluster i, ray l at index i*rays + l).
    pub ray_gains: Vec<Complex64>,
    /// Departure angles per ray, radians, same layout as `ray_gains`.
    pub aod: Vec<f64>,
    /// Arrival angles per ray, radians.
    pub aoa: Vec<f64>,
    /// Average power per cluster.
    pub cluster_powers: Vec<f64>,
    tx: UlaGeometry,
    rx: UlaGeometry,
}

impl ChannelRealization {
    pub fn nr(&self) -> usize {
        self.h.rows()
    }

    pub fn nt(&self) -> usize {
        self.h.cols()
    }

    /// Rebuild the matrix from the stored rays (the generation formula).
    pub fn reconstruct(&self) -> ComplexMatrix {
        assemble(&self.ray_gains, &self.aod, &self.aoa, self.tx, self.rx)
    }
}

/// ULA steering vector: entry k is exp(j*k*2*pi*spacing*sin(theta))/sqrt(N).
pub fn array_response(geom: UlaGeometry, theta: f64) -> Vec<Complex64> {
    let n = geom.num_antennas;
    let norm = 1.0 / (n as f64).sqrt();
    let step = 2.0 * std::f64::consts::PI * geom.spacing_ratio * theta.sin();
    (0..n)
        .map(|k| Complex64::from_polar(norm, step * k as f64))
        .collect()
}

/// Geometrically decaying cluster powers normalized to sum to the cluster
/// count: power_i = c * base^i (1-based) with c chosen so the sum is N_cl.
pub fn cluster_powers(num_clusters: usize, decay_base: f64) -> Vec<f64> {
    assert!(num_clusters >= 1);
    assert!(decay_base > 0.0 && decay_base < 1.0);
    let raw: Vec<f64> = (1..=num_clusters)
        .map(|i| decay_base.powi(i as i32))
        .collect();
    let total: f64 = raw.iter().sum();
    let c = num_clusters as f64 / total;
    raw.into_iter().map(|p| c * p).collect()
}

/// Laplacian draw with the given mean and standard deviation, by inverse
/// CDF of a single uniform. The scale is spread/sqrt(2) so that "spread"
/// means standard deviation. No truncation: angles only enter through sin.
pub fn sample_laplacian_angle<R: Rng + ?Sized>(mean: f64, spread: f64, rng: &mut R) -> f64 {
    assert!(spread > 0.0);
    let scale = spread / std::f64::consts::SQRT_2;
    let mut u = 0.5 - rng.random::<f64>();
    if u == 0.5 {
        // One-ulp clamp keeps the extreme tail finite.
        u = 0.5 - f64::EPSILON / 2.0;
    }
    mean - scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
}

/// Draw one channel realization.
///
/// Draw order (fixed for reproducibility): arrival sector start, then per
/// cluster the mean departure/arrival angles, then per ray the departure
/// offset, arrival offset and the two Gaussian gain components.
pub fn generate_channel<R: Rng + ?Sized>(
    tx: UlaGeometry,
    rx: UlaGeometry,
    params: &ChannelParams,
    rng: &mut R,
) -> Result<ChannelRealization, ChannelError> {
    params.validate()?;

    let ncl = params.num_clusters;
    let nray = params.rays_per_cluster;
    let powers = cluster_powers(ncl, params.power_decay_base);

    let two_pi = 2.0 * std::f64::consts::PI;
    let sector_start = rng.random::<f64>() * two_pi;

    let mut mean_aod = Vec::with_capacity(ncl);
    let mut mean_aoa = Vec::with_capacity(ncl);
    for _ in 0..ncl {
        mean_aod.push(
            params.aod_mean_range.start_rad + rng.random::<f64>() * params.aod_mean_range.width_rad,
        );
        mean_aoa.push(sector_start + rng.random::<f64>() * params.aoa_mean_sector_width);
    }

    let total_rays = ncl * nray;
    let mut gains = Vec::with_capacity(total_rays);
    let mut aod = Vec::with_capacity(total_rays);
    let mut aoa = Vec::with_capacity(total_rays);
    for i in 0..ncl {
        let gain_std = (powers[i] / 2.0).sqrt();
        for _ in 0..nray {
            aod.push(sample_laplacian_angle(
                mean_aod[i],
                params.angle_spread_rad,
                rng,
            ));
            aoa.push(sample_laplacian_angle(
                mean_aoa[i],
                params.angle_spread_rad,
                rng,
            ));
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            gains.push(Complex64::new(re * gain_std, im * gain_std));
        }
    }

    let h = assemble(&gains, &aod, &aoa, tx, rx);
    Ok(ChannelRealization {
        h,
        ray_gains: gains,
        aod,
        aoa,
        cluster_powers: powers,
        tx,
        rx,
    })
}

/// Sum of scaled rank-1 ray contributions.
fn assemble(
    gains: &[Complex64],
    aod: &[f64],
    aoa: &[f64],
    tx: UlaGeometry,
    rx: UlaGeometry,
) -> ComplexMatrix {
    let (nt, nr) = (tx.num_antennas, rx.num_antennas);
    let total_rays = gains.len();
    let scale = ((nt * nr) as f64 / total_rays as f64).sqrt();
    let mut h = ComplexMatrix::zeros(nr, nt);
    for ((&g, &td), &ra) in gains.iter().zip(aod).zip(aoa) {
        let at = array_response(tx, td);
        let ar = array_response(rx, ra);
        let g_scaled = g * scale;
        for (r, &ar_r) in ar.iter().enumerate() {
            let lhs = g_scaled * ar_r;
            for (t, &at_t) in at.iter().enumerate() {
                h[(r, t)] += lhs * at_t.conj();
            }
        }
    }
    h
}

/// JSON-serializable dump of a realization, for comparing channel
/// generation across implementations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelDump {
    pub nt: usize,
    pub nr: usize,
    pub seed: u64,
    pub params: ChannelParams,
    pub h_real: Vec<Vec<f64>>,
    pub h_imag: Vec<Vec<f64>>,
}

impl ChannelDump {
    pub fn from_realization(real: &ChannelRealization, params: &ChannelParams, seed: u64) -> Self {
        let (nr, nt) = (real.nr(), real.nt());
        let mut h_real = vec![vec![0.0; nt]; nr];
        let mut h_imag = vec![vec![0.0; nt]; nr];
        for r in 0..nr {
            for t in 0..nt {
                h_real[r][t] = real.h[(r, t)].re;
                h_imag[r][t] = real.h[(r, t)].im;
            }
        }
        Self {
            nt,
            nr,
            seed,
            params: params.clone(),
            h_real,
            h_imag,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dump serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.nr, self.nt, |r, t| {
            Complex64::new(self.h_real[r][t], self.h_imag[r][t])
        })
    }
}
