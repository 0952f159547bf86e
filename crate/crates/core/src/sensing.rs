//! Measurement model `b = Phi Psi x`.
//!
//! `Psi` is a circulant dictionary whose columns are the unit-normalized
//! circular shifts of one atom (a monocycle, or a unit spike for the
//! identity basis). `Phi` keeps a set of unitary-DFT bins and splits each
//! complex coefficient into a real and an imaginary row, so one selected
//! frequency contributes two real measurements.
//!
//! Because `F(atom * x) = sqrt(N) F(atom) F(x)`, the composed operator is a
//! diagonal gain applied to a partial DFT and runs in `O(N log N)`. Rows for
//! distinct bins strictly inside `(0, N/2)` are mutually orthogonal, which
//! makes `A A^T` diagonal.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sampling::SamplingPlan;
use crate::signal_model::{MonocycleTemplate, Signal, SparseScene};
use crate::solver::{LinearOperator, OrthogonalRows};
use crate::spectral::UnitaryDft;

/// Circulant sparsity basis.
#[derive(Debug, Clone)]
pub struct Dictionary {
    atom: Vec<f64>,
    template_norm: f64,
    response: Vec<Complex64>,
    dft: UnitaryDft,
}

impl Dictionary {
    /// Dictionary of all circular shifts of `waveform`, normalized to unit
    /// l2 norm.
    pub fn from_waveform(waveform: &[f64]) -> Result<Self> {
        if waveform.len() < 2 {
            return Err(Error::InvalidSignal("atom shorter than 2 samples".into()));
        }
        let norm = waveform.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroAtom);
        }
        let atom: Vec<f64> = waveform.iter().map(|v| v / norm).collect();
        let dft = UnitaryDft::new(atom.len());
        let scale = (atom.len() as f64).sqrt();
        let response = dft
            .forward_real(&atom)
            .into_iter()
            .map(|c| c * scale)
            .collect();
        Ok(Dictionary {
            atom,
            template_norm: norm,
            response,
            dft,
        })
    }

    /// The identity (spike) basis of length `n`.
    pub fn spike(n: usize) -> Result<Self> {
        let mut delta = vec![0.0; n];
        if let Some(first) = delta.first_mut() {
            *first = 1.0;
        }
        Dictionary::from_waveform(&delta)
    }

    pub fn len(&self) -> usize {
        self.atom.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atom.is_empty()
    }

    /// l2 norm of the waveform the dictionary was built from.
    pub fn template_norm(&self) -> f64 {
        self.template_norm
    }

    /// l2 norms of the unnormalized shifted templates, one per column.
    pub fn column_norms(&self) -> Vec<f64> {
        vec![self.template_norm; self.len()]
    }

    /// Column `j`: the unit-norm atom rotated by `j` bins.
    pub fn atom(&self, j: usize) -> Vec<f64> {
        crate::signal_model::circular_shift(&self.atom, j)
    }

    /// `sqrt(N) F(atom_0)`: the per-bin gain of the dictionary.
    pub fn frequency_response(&self) -> &[Complex64] {
        &self.response
    }

    /// `Psi x`, the time signal with coefficients `x`.
    pub fn synthesize(&self, coefficients: &[f64]) -> Result<Vec<f64>> {
        if coefficients.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: coefficients.len(),
            });
        }
        let mut buf = self.dft.forward_real(coefficients);
        for (c, h) in buf.iter_mut().zip(&self.response) {
            *c *= h;
        }
        self.dft.inverse_in_place(&mut buf);
        Ok(buf.into_iter().map(|c| c.re).collect())
    }

    /// Coefficients that reproduce `scene` exactly, assuming the dictionary
    /// was built from the scene's own pulse.
    pub fn scene_coefficients(&self, scene: &SparseScene) -> Result<Vec<f64>> {
        if scene.length() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: scene.length(),
            });
        }
        let mut x = vec![0.0; self.len()];
        for e in scene.events() {
            x[e.shift_bin] += e.amplitude * self.template_norm;
        }
        Ok(x)
    }
}

pub fn build_dictionary(template: &MonocycleTemplate) -> Result<Dictionary> {
    Dictionary::from_waveform(template.waveform())
}

/// Stacked `[Re S(k_1..k_M); Im S(k_1..k_M)]` for the selected bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    values: Vec<f64>,
    bins: Vec<usize>,
}

impl Measurement {
    pub fn new(values: Vec<f64>, bins: Vec<usize>) -> Result<Self> {
        if values.len() != 2 * bins.len() {
            return Err(Error::LengthMismatch {
                expected: 2 * bins.len(),
                actual: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidProblem("measurement is not finite".into()));
        }
        Ok(Measurement { values, bins })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn bins(&self) -> &[usize] {
        &self.bins
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

fn check_plan_fits(plan: &SamplingPlan, n: usize) -> Result<()> {
    let band = plan.band();
    if 2 * band.upper() >= n {
        return Err(Error::InvalidBand {
            lower: band.lower(),
            upper: band.upper(),
            length: n,
        });
    }
    Ok(())
}

fn split(values: impl Iterator<Item = Complex64>, m: usize) -> Vec<f64> {
    let mut out = vec![0.0; 2 * m];
    for (i, c) in values.enumerate() {
        out[i] = c.re;
        out[m + i] = c.im;
    }
    out
}

/// Samples the unitary DFT of `signal` at the plan's bins.
pub fn measure(signal: &Signal, plan: &SamplingPlan) -> Result<Measurement> {
    check_plan_fits(plan, signal.len())?;
    let spectrum = UnitaryDft::new(signal.len()).forward_real(signal.samples());
    let bins = plan.selected_bins().to_vec();
    let values = split(bins.iter().map(|&k| spectrum[k]), bins.len());
    Measurement::new(values, bins)
}

/// `Delta = Phi Psi` for one plan and dictionary.
#[derive(Debug, Clone)]
pub struct SensingOperator {
    plan: SamplingPlan,
    dictionary: Dictionary,
    gains: Vec<Complex64>,
}

impl SensingOperator {
    pub fn new(plan: SamplingPlan, dictionary: Dictionary) -> Result<Self> {
        check_plan_fits(&plan, dictionary.len())?;
        let gains = plan
            .selected_bins()
            .iter()
            .map(|&k| dictionary.response[k])
            .collect();
        Ok(SensingOperator {
            plan,
            dictionary,
            gains,
        })
    }

    pub fn plan(&self) -> &SamplingPlan {
        &self.plan
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dictionary
    }

    /// Number of real rows: twice the number of selected frequencies.
    pub fn real_row_count(&self) -> usize {
        2 * self.gains.len()
    }

    fn check_cols(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dictionary.len() {
            return Err(Error::LengthMismatch {
                expected: self.dictionary.len(),
                actual: x.len(),
            });
        }
        Ok(())
    }
}

impl LinearOperator for SensingOperator {
    fn rows(&self) -> usize {
        self.real_row_count()
    }

    fn cols(&self) -> usize {
        self.dictionary.len()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let spectrum = self.dictionary.dft.forward_real(x);
        let bins = self.plan.selected_bins();
        split(
            bins.iter().zip(&self.gains).map(|(&k, g)| g * spectrum[k]),
            bins.len(),
        )
    }

    fn adjoint(&self, y: &[f64]) -> Vec<f64> {
        let m = self.gains.len();
        let mut buf = vec![Complex64::new(0.0, 0.0); self.cols()];
        for (i, (&k, g)) in self.plan.selected_bins().iter().zip(&self.gains).enumerate() {
            buf[k] = g.conj() * Complex64::new(y[i], y[m + i]);
        }
        self.dictionary.dft.inverse_in_place(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }
}

impl OrthogonalRows for SensingOperator {
    fn row_gram_diagonal(&self) -> Vec<f64> {
        let half: Vec<f64> = self.gains.iter().map(|g| 0.5 * g.norm_sqr()).collect();
        half.iter().chain(&half).copied().collect()
    }
}

/// `measure(Psi x, plan)`, evaluated through the cached frequency response.
pub fn apply_delta(coefficients: &[f64], operator: &SensingOperator) -> Result<Measurement> {
    operator.check_cols(coefficients)?;
    Measurement::new(
        operator.apply(coefficients),
        operator.plan.selected_bins().to_vec(),
    )
}

/// Coherence between the selected DFT rows and the dictionary columns, both
/// unit-normalized, scaled by `sqrt(N)`.
///
/// `|<f_k, atom_j>| = |F(atom_0)(k)|` for every shift `j`, so the maximum
/// reduces to the largest dictionary gain over the plan's bins.
pub fn coherence(plan: &SamplingPlan, dictionary: &Dictionary) -> f64 {
    plan.selected_bins()
        .iter()
        .map(|&k| dictionary.response[k].norm())
        .fold(0.0, f64::max)
}

/// `sqrt(N) max |<phi, psi>|` over explicit row and column sets, each vector
/// normalized first. `N` is the column length.
pub fn mutual_coherence(rows: &[Vec<Complex64>], cols: &[Vec<f64>]) -> f64 {
    let n = cols.first().map_or(0, Vec::len);
    let unit_rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| {
            let norm = r.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            r.iter().map(|c| c / norm).collect()
        })
        .collect();
    let mut best = 0.0_f64;
    for col in cols {
        let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        for row in &unit_rows {
            let dot: Complex64 = row.iter().zip(col).map(|(r, c)| r.conj() * *c).sum();
            best = best.max(dot.norm() / norm);
        }
    }
    best * (n as f64).sqrt()
}

/// Sample-count bound `ceil(c mu^2 F ln N)`. Reported as a diagnostic only.
pub fn required_samples(mu: f64, dof: usize, n: usize, c: f64) -> usize {
    (c * mu * mu * dof as f64 * (n as f64).ln()).ceil().max(0.0) as usize
}
