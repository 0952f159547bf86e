//! Unitary discrete Fourier analysis.
//!
//! Both directions are scaled by `1/sqrt(N)` so that time and frequency
//! energies agree exactly and the transform's adjoint is its inverse.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::signal_model::Signal;

/// A pair of planned FFTs of one length with unitary scaling.
#[derive(Clone)]
pub struct UnitaryDft {
    len: usize,
    scale: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for UnitaryDft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UnitaryDft").field("len", &self.len).finish()
    }
}

impl UnitaryDft {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        UnitaryDft {
            len,
            scale: 1.0 / (len as f64).sqrt(),
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.len);
        self.forward.process(buf);
        buf.iter_mut().for_each(|c| *c *= self.scale);
    }

    pub fn inverse_in_place(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.len);
        self.inverse.process(buf);
        buf.iter_mut().for_each(|c| *c *= self.scale);
    }

    pub fn forward_real(&self, x: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward_in_place(&mut buf);
        buf
    }
}

/// Frequency-domain view of a signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    coefficients: Vec<Complex64>,
    bin_frequencies: Vec<f64>,
    energy_density: Vec<f64>,
    sample_rate: f64,
}

impl Spectrum {
    pub fn from_coefficients(coefficients: Vec<Complex64>, sample_rate: f64) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::InvalidSignal(format!(
                "spectrum length {} is shorter than 2",
                coefficients.len()
            )));
        }
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::InvalidSignal(format!(
                "sample rate {sample_rate} is not positive"
            )));
        }
        let n = coefficients.len();
        let energy_density = coefficients.iter().map(|c| c.norm()).collect();
        Ok(Spectrum {
            bin_frequencies: bin_frequencies(n, sample_rate),
            coefficients,
            energy_density,
            sample_rate,
        })
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Signed bin frequencies in Hz (`k fs / N`, wrapping to negative above
    /// `N/2`).
    pub fn bin_frequencies(&self) -> &[f64] {
        &self.bin_frequencies
    }

    /// `|S(k)|` per bin: the first power of the modulus, not its square.
    pub fn energy_density(&self) -> &[f64] {
        &self.energy_density
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// `fftfreq`-style bin frequencies.
pub fn bin_frequencies(n: usize, sample_rate: f64) -> Vec<f64> {
    let df = sample_rate / n as f64;
    (0..n)
        .map(|k| {
            if k <= (n - 1) / 2 {
                k as f64 * df
            } else {
                (k as f64 - n as f64) * df
            }
        })
        .collect()
}

pub fn forward(signal: &Signal) -> Spectrum {
    let dft = UnitaryDft::new(signal.len());
    let coefficients = dft.forward_real(signal.samples());
    let energy_density = coefficients.iter().map(|c| c.norm()).collect();
    Spectrum {
        bin_frequencies: bin_frequencies(signal.len(), signal.sample_rate()),
        coefficients,
        energy_density,
        sample_rate: signal.sample_rate(),
    }
}

/// Complex inverse transform, keeping any imaginary residue.
pub fn inverse_complex(spectrum: &Spectrum) -> Vec<Complex64> {
    let dft = UnitaryDft::new(spectrum.len());
    let mut buf = spectrum.coefficients.clone();
    dft.inverse_in_place(&mut buf);
    buf
}

/// Inverse transform to a real signal; the imaginary part is dropped.
pub fn inverse(spectrum: &Spectrum) -> Result<Signal> {
    let samples = inverse_complex(spectrum).into_iter().map(|c| c.re).collect();
    Signal::new(samples, spectrum.sample_rate)
}

/// Returns `(sum |s(t)|^2, sum |S(k)|^2)`.
pub fn check_parseval(signal: &Signal) -> (f64, f64) {
    (signal.energy(), forward(signal).energy())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_signal(n: usize, seed: u64) -> Signal {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Signal::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(), 1.0).unwrap()
    }

    #[test]
    fn zero_signal_has_zero_spectrum() {
        let s = forward(&Signal::zeros(32, 1.0).unwrap());
        assert!(s.coefficients().iter().all(|c| c.norm() == 0.0));
        assert!(s.energy_density().iter().all(|&d| d == 0.0));
    }

    #[test]
    fn impulse_has_flat_density() {
        let n = 64;
        let mut x = vec![0.0; n];
        x[0] = 1.0;
        let s = forward(&Signal::new(x, 1.0).unwrap());
        let expected = 1.0 / (n as f64).sqrt();
        for d in s.energy_density() {
            assert!((d - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn real_signal_is_conjugate_symmetric() {
        let n = 50;
        let s = forward(&random_signal(n, 3));
        let c = s.coefficients();
        for k in 0..n {
            let mirror = c[(n - k) % n].conj();
            assert!((c[k] - mirror).norm() < 1e-12);
        }
    }

    #[test]
    fn round_trip() {
        for &n in &[2, 7, 64, 256, 1000] {
            let x = random_signal(n, n as u64);
            let back = inverse(&forward(&x)).unwrap();
            let err: f64 = x
                .samples()
                .iter()
                .zip(back.samples())
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(err / x.energy().sqrt() < 1e-12, "n={n} err={err}");
        }
    }

    #[test]
    fn zero_spectrum_inverts_to_zero() {
        let s = Spectrum::from_coefficients(vec![Complex64::new(0.0, 0.0); 16], 1.0).unwrap();
        assert!(inverse(&s).unwrap().samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn conjugate_symmetric_spectrum_inverts_to_real() {
        let n = 33;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        c[0] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for k in 1..=n / 2 {
            let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            c[k] = v;
            c[n - k] = v.conj();
        }
        let out = inverse_complex(&Spectrum::from_coefficients(c, 1.0).unwrap());
        assert!(out.iter().all(|v| v.im.abs() < 1e-12));
    }

    #[test]
    fn parseval_examples() {
        assert_eq!(check_parseval(&Signal::zeros(8, 1.0).unwrap()), (0.0, 0.0));
        let mut x = vec![0.0; 16];
        x[5] = 1.0;
        let (t, f) = check_parseval(&Signal::new(x, 1.0).unwrap());
        assert_eq!(t, 1.0);
        assert!((f - 1.0).abs() < 1e-14);
        for seed in 0..20 {
            let (t, f) = check_parseval(&random_signal(128, seed));
            assert!((t - f).abs() / t < 1e-12);
        }
    }

    #[test]
    fn bin_frequency_layout() {
        let f = bin_frequencies(8, 8.0);
        assert_eq!(f, vec![0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
        let f = bin_frequencies(5, 5.0);
        assert_eq!(f, vec![0.0, 1.0, 2.0, -2.0, -1.0]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn forward_is_linear(seed in 0u64..10_000, a in -5.0f64..5.0, b in -5.0f64..5.0) {
                let x = random_signal(48, seed);
                let y = random_signal(48, seed + 1);
                let combo: Vec<f64> = x.samples().iter().zip(y.samples()).map(|(p, q)| a * p + b * q).collect();
                let lhs = forward(&Signal::new(combo, 1.0).unwrap());
                let fx = forward(&x);
                let fy = forward(&y);
                for k in 0..48 {
                    let rhs = fx.coefficients()[k] * a + fy.coefficients()[k] * b;
                    prop_assert!((lhs.coefficients()[k] - rhs).norm() < 1e-12);
                }
            }
        }
    }
}
