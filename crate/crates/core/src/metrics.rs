//! Reconstruction scores.

use crate::error::{Error, Result};
use crate::signal_model::Signal;
use crate::spectral::UnitaryDft;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    /// `10 log10(peak^2 / mse)`; `+inf` when the reconstruction is exact.
    pub psnr_db: f64,
    pub mse: f64,
    /// Peak absolute amplitude of the original.
    pub peak: f64,
    /// `|| |S_orig| - |S_rec| ||_2 / || |S_orig| ||_2`.
    pub spectrum_l2_error: f64,
}

/// PSNR on raw sample slices.
pub fn psnr_samples(original: &[f64], reconstructed: &[f64]) -> Result<EvalReport> {
    if original.is_empty() {
        return Err(Error::InvalidSignal("cannot score an empty signal".into()));
    }
    if original.len() != reconstructed.len() {
        return Err(Error::LengthMismatch {
            expected: original.len(),
            actual: reconstructed.len(),
        });
    }
    let n = original.len();
    let mse = original
        .iter()
        .zip(reconstructed)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / n as f64;
    let peak = original.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let psnr_db = if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (peak * peak / mse).log10()
    };

    let dft = UnitaryDft::new(n);
    let so = dft.forward_real(original);
    let sr = dft.forward_real(reconstructed);
    let diff: f64 = so
        .iter()
        .zip(&sr)
        .map(|(a, b)| (a.norm() - b.norm()).powi(2))
        .sum::<f64>()
        .sqrt();
    let reference = so.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let spectrum_l2_error = if reference == 0.0 {
        if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        diff / reference
    };

    Ok(EvalReport {
        psnr_db,
        mse,
        peak,
        spectrum_l2_error,
    })
}

pub fn psnr(original: &Signal, reconstructed: &Signal) -> Result<EvalReport> {
    psnr_samples(original.samples(), reconstructed.samples())
}
