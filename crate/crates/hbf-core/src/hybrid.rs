//! Successive one-bit analog beamformer design plus the SVD-based digital
//! stage.
//!
//! Streams are designed one at a time: for stream l, the interference of
//! the l-1 already-selected pairs is folded into a regularized equivalent
//! channel Q_l, the strongest singular pair of Q_l seeds the two candidate
//! sets, and the column pair is picked by maximizing |w^H Q_l f| over the
//! candidate cross product. The digital precoder/combiner then diagonalize
//! the resulting baseband effective channel and are normalized to the
//! transmit/receive power constraints.

use num_complex::Complex64;
use thiserror::Error;

use crate::binaryopt::{build_candidates, joint_pair_select, BinaryOptError, SignVector};
use crate::linalg::{self, ComplexMatrix, LinalgError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HybridError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    BinaryOpt(#[from] BinaryOptError),
    #[error("invalid system config: {0}")]
    InvalidConfig(String),
    #[error("channel is numerically zero; no beamformer is defined")]
    DegenerateChannel,
    #[error("dimension mismatch: channel is {h_rows}x{h_cols}, config expects {nr}x{nt}")]
    ChannelShape {
        h_rows: usize,
        h_cols: usize,
        nr: usize,
        nt: usize,
    },
}

/// Antenna/RF-chain/stream counts plus the link budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    pub nt: usize,
    pub nr: usize,
    pub n_rf: usize,
    pub ns: usize,
    pub power: f64,
    pub noise_var: f64,
}

impl SystemConfig {
    pub fn new(
        nt: usize,
        nr: usize,
        n_rf: usize,
        ns: usize,
        power: f64,
        noise_var: f64,
    ) -> Result<Self, HybridError> {
        if nt == 0 || nr == 0 || ns == 0 {
            return Err(HybridError::InvalidConfig(
                "antenna and stream counts must be positive".into(),
            ));
        }
        if ns != n_rf {
            return Err(HybridError::InvalidConfig(format!(
                "ns ({ns}) must equal n_rf ({n_rf}): one stream per RF chain"
            )));
        }
        if ns > nt.min(nr) {
            return Err(HybridError::InvalidConfig(format!(
                "ns ({ns}) cannot exceed min(nt, nr) = {}",
                nt.min(nr)
            )));
        }
        if !(power > 0.0) || !power.is_finite() {
            return Err(HybridError::InvalidConfig(format!(
                "power must be positive, got {power}"
            )));
        }
        if !(noise_var > 0.0) || !noise_var.is_finite() {
            return Err(HybridError::InvalidConfig(format!(
                "noise_var must be positive, got {noise_var}"
            )));
        }
        Ok(Self {
            nt,
            nr,
            n_rf,
            ns,
            power,
            noise_var,
        })
    }

    pub fn with_power(mut self, power: f64) -> Self {
        self.power = power;
        self
    }

    /// Linear SNR P / sigma^2.
    pub fn snr(&self) -> f64 {
        self.power / self.noise_var
    }
}

/// Knobs of the analog design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignConfig {
    /// Regularizer as a fraction of the channel's largest singular value.
    pub alpha_rel: f64,
    /// Use the raw channel instead of its rank-ns truncation for the first
    /// stream's equivalent channel.
    pub q1_raw: bool,
}

impl Default for DesignConfig {
    fn default() -> Self {
        Self {
            alpha_rel: 1e-6,
            q1_raw: false,
        }
    }
}

impl DesignConfig {
    pub fn validate(&self) -> Result<(), HybridError> {
        if !(self.alpha_rel > 0.0 && self.alpha_rel < 1.0) {
            return Err(HybridError::InvalidConfig(format!(
                "alpha_rel must lie in (0,1), got {}",
                self.alpha_rel
            )));
        }
        Ok(())
    }
}

/// Columns of one-bit sign vectors sharing a 1/sqrt(rows) modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct SignMatrix {
    rows: usize,
    columns: Vec<SignVector>,
}

impl SignMatrix {
    pub fn empty(rows: usize) -> Self {
        assert!(rows > 0);
        Self {
            rows,
            columns: Vec::new(),
        }
    }

    pub fn push(&mut self, col: SignVector) {
        assert_eq!(col.len(), self.rows);
        self.columns.push(col);
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, k: usize) -> &SignVector {
        &self.columns[k]
    }

    /// The scaled complex matrix (entries +-1/sqrt(rows)).
    pub fn to_matrix(&self) -> ComplexMatrix {
        assert!(!self.columns.is_empty(), "sign matrix has no columns");
        let cols: Vec<Vec<Complex64>> = self
            .columns
            .iter()
            .map(|c| c.to_scaled_column())
            .collect();
        ComplexMatrix::from_cols(&cols)
    }
}

/// The designed quadruple, normalized so both beamformer products carry
/// Frobenius norm squared equal to the stream count.
#[derive(Debug, Clone)]
pub struct HybridBeamformer {
    pub f_rf: SignMatrix,
    pub w_rf: SignMatrix,
    pub f_bb: ComplexMatrix,
    pub w_bb: ComplexMatrix,
}

impl HybridBeamformer {
    /// F_RF * F_BB, the nt x ns transmit beamformer.
    pub fn precoder(&self) -> ComplexMatrix {
        self.f_rf.to_matrix().mul(&self.f_bb)
    }

    /// W_RF * W_BB, the nr x ns receive beamformer.
    pub fn combiner(&self) -> ComplexMatrix {
        self.w_rf.to_matrix().mul(&self.w_bb)
    }

    pub fn ns(&self) -> usize {
        self.f_bb.cols()
    }
}

/// Truncated SVD of the channel: ns strongest components.
///
/// Returns (U_hat: nr x ns, sigma_hat: ns values, V_hat: nt x ns).
pub fn truncate_svd(
    h: &ComplexMatrix,
    ns: usize,
) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix), HybridError> {
    let thin = linalg::svd_thin(h, ns)?;
    let mut sigma = thin.singular;
    sigma.truncate(ns);
    Ok((thin.left, sigma, thin.right))
}

/// The ns x ns core of the equivalent channel for stream l:
/// B_l = (alpha I + Sigma V^H F_prev W_prev^H U)^-1 Sigma, so that
/// Q_l = U B_l V^H.
fn interference_core(
    u_hat: &ComplexMatrix,
    sigma_hat: &[f64],
    v_hat: &ComplexMatrix,
    f_prev: &SignMatrix,
    w_prev: &SignMatrix,
    alpha: f64,
) -> Result<ComplexMatrix, HybridError> {
    let ns = sigma_hat.len();
    let sigma = ComplexMatrix::from_real_diag(sigma_hat);
    let t = if f_prev.num_cols() == 0 {
        ComplexMatrix::zeros(ns, ns)
    } else {
        // Sigma V^H F_prev W_prev^H U, built small-side-first.
        let vf = v_hat.adjoint().mul(&f_prev.to_matrix()); // ns x (l-1)
        let wu = w_prev.to_matrix().adjoint().mul(u_hat); // (l-1) x ns
        sigma.mul(&vf).mul(&wu)
    };
    Ok(linalg::solve_regularized(&t, alpha, &sigma)?)
}

/// Interference-included equivalent channel Q_l (nr x nt) for the stream
/// after the `f_prev`/`w_prev` pairs. With no previous pairs this is the
/// truncated channel scaled by 1/alpha, whose pair selection coincides with
/// the truncated channel's.
pub fn interference_matrix(
    u_hat: &ComplexMatrix,
    sigma_hat: &[f64],
    v_hat: &ComplexMatrix,
    f_prev: &SignMatrix,
    w_prev: &SignMatrix,
    alpha: f64,
) -> Result<ComplexMatrix, HybridError> {
    if f_prev.num_cols() != w_prev.num_cols() {
        return Err(HybridError::InvalidConfig(format!(
            "precoder and combiner history lengths differ: {} vs {}",
            f_prev.num_cols(),
            w_prev.num_cols()
        )));
    }
    let core = interference_core(u_hat, sigma_hat, v_hat, f_prev, w_prev, alpha)?;
    Ok(u_hat.mul(&core).mul(&v_hat.adjoint()))
}

/// Successively select the one-bit analog precoder/combiner columns.
pub fn design_analog(
    h: &ComplexMatrix,
    sys: &SystemConfig,
    cfg: &DesignConfig,
) -> Result<(SignMatrix, SignMatrix), HybridError> {
    cfg.validate()?;
    if h.rows() != sys.nr || h.cols() != sys.nt {
        return Err(HybridError::ChannelShape {
            h_rows: h.rows(),
            h_cols: h.cols(),
            nr: sys.nr,
            nt: sys.nt,
        });
    }

    let (u_hat, sigma_hat, v_hat) = truncate_svd(h, sys.ns)?;
    let sigma_max = sigma_hat[0];
    if !(sigma_max > 0.0) {
        return Err(HybridError::DegenerateChannel);
    }
    let alpha = cfg.alpha_rel * sigma_max;

    let mut f_rf = SignMatrix::empty(sys.nt);
    let mut w_rf = SignMatrix::empty(sys.nr);
    for l in 0..sys.ns {
        // Strongest singular pair (p, q) of Q_l and the dense Q_l itself.
        let (p_top, q_top, q_dense) = if l == 0 {
            let dense = if cfg.q1_raw {
                h.clone()
            } else {
                let core =
                    interference_core(&u_hat, &sigma_hat, &v_hat, &f_rf, &w_rf, alpha)?;
                u_hat.mul(&core).mul(&v_hat.adjoint())
            };
            // Q_1 is (proportional to) the truncated channel either way, so
            // its top pair is the channel's own.
            (u_hat.col(0), v_hat.col(0), dense)
        } else {
            let core = interference_core(&u_hat, &sigma_hat, &v_hat, &f_rf, &w_rf, alpha)?;
            // Q_l = U_hat core V_hat^H with orthonormal U_hat/V_hat columns:
            // the SVD of the small core lifts exactly to the SVD of Q_l.
            let core_svd = linalg::svd(&core)?;
            let mut p = u_hat.mul_vec(&core_svd.left.col(0));
            let mut q = v_hat.mul_vec(&core_svd.right.col(0));
            linalg::pin_vector_pair(&mut p, &mut q);
            let dense = u_hat.mul(&core).mul(&v_hat.adjoint());
            (p, q, dense)
        };

        let fcands = build_candidates(&q_top)?;
        let wcands = build_candidates(&p_top)?;
        let (f, w) = joint_pair_select(&q_dense, &fcands, &wcands)?;
        f_rf.push(f);
        w_rf.push(w);
    }
    Ok((f_rf, w_rf))
}

/// Baseband effective channel W_RF^H H F_RF (ns x ns).
pub fn effective_channel(
    h: &ComplexMatrix,
    f_rf: &SignMatrix,
    w_rf: &SignMatrix,
) -> Result<ComplexMatrix, HybridError> {
    if h.rows() != w_rf.rows() || h.cols() != f_rf.rows() {
        return Err(HybridError::ChannelShape {
            h_rows: h.rows(),
            h_cols: h.cols(),
            nr: w_rf.rows(),
            nt: f_rf.rows(),
        });
    }
    Ok(w_rf.to_matrix().adjoint().mul(h).mul(&f_rf.to_matrix()))
}

/// SVD-based digital stage on the effective channel, normalized to meet the
/// power constraints exactly.
pub fn design_digital(
    h_eff: &ComplexMatrix,
    f_rf: &SignMatrix,
    w_rf: &SignMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix), HybridError> {
    let svd = linalg::svd(h_eff)?;
    let f_bb = svd.right;
    let w_bb = svd.left;

    let ns = h_eff.rows() as f64;
    let f_nrm = f_rf.to_matrix().mul(&f_bb).frobenius_norm();
    let w_nrm = w_rf.to_matrix().mul(&w_bb).frobenius_norm();
    if f_nrm == 0.0 || w_nrm == 0.0 {
        return Err(HybridError::DegenerateChannel);
    }
    Ok((
        f_bb.scale_real(ns.sqrt() / f_nrm),
        w_bb.scale_real(ns.sqrt() / w_nrm),
    ))
}

/// Full design: successive analog pairs, then the digital stage.
pub fn design_hybrid(
    h: &ComplexMatrix,
    sys: &SystemConfig,
    cfg: &DesignConfig,
) -> Result<HybridBeamformer, HybridError> {
    let (f_rf, w_rf) = design_analog(h, sys, cfg)?;
    let h_eff = effective_channel(h, &f_rf, &w_rf)?;
    let (f_bb, w_bb) = design_digital(&h_eff, &f_rf, &w_rf)?;
    Ok(HybridBeamformer {
        f_rf,
        w_rf,
        f_bb,
        w_bb,
    })
}
