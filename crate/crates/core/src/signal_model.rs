//! UWB monocycle pulses and sparse A-scan scenes built from shifted,
//! attenuated copies of the pulse.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Fraction of the peak amplitude that defines a pulse's effective support.
const SUPPORT_THRESHOLD: f64 = 1e-2;

/// Maximum number of full redraws attempted by [`make_scene`].
const SCENE_ATTEMPTS: usize = 1000;

/// A real, uniformly sampled time-domain signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidSignal(format!(
                "length {} is shorter than 2",
                samples.len()
            )));
        }
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::InvalidSignal(format!(
                "sample rate {sample_rate} is not positive"
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSignal(format!("sample {i} is not finite")));
        }
        Ok(Signal {
            samples,
            sample_rate,
        })
    }

    pub fn zeros(length: usize, sample_rate: f64) -> Result<Self> {
        Signal::new(vec![0.0; length], sample_rate)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; signals hold at least two samples.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|v| v * v).sum()
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// First derivative of a Gaussian, centered in an `N`-sample frame and
/// scaled to unit peak amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct MonocycleTemplate {
    center_frequency: f64,
    sample_rate: f64,
    duration_bins: usize,
    waveform: Vec<f64>,
}

impl MonocycleTemplate {
    pub fn center_frequency(&self) -> f64 {
        self.center_frequency
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    /// Number of samples whose magnitude exceeds 1% of the peak, measured
    /// across the contiguous span that contains them.
    pub fn duration_bins(&self) -> usize {
        self.duration_bins
    }

    pub fn waveform(&self) -> &[f64] {
        &self.waveform
    }

    pub fn len(&self) -> usize {
        self.waveform.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waveform.is_empty()
    }

    pub fn to_signal(&self) -> Signal {
        Signal {
            samples: self.waveform.clone(),
            sample_rate: self.sample_rate,
        }
    }
}

/// Builds a monocycle `s(t) = -t exp(-t^2 / 2 sigma^2)` with
/// `sigma = 1 / (2 pi f_c)`, which places the magnitude-spectrum peak at
/// `center_frequency`. `t = 0` sits halfway between samples `(N-1)/2` and
/// `N/2`, so the sampled pulse is exactly antisymmetric.
pub fn make_monocycle(
    center_frequency: f64,
    sample_rate: f64,
    length: usize,
) -> Result<MonocycleTemplate> {
    if !(sample_rate.is_finite() && sample_rate > 0.0) {
        return Err(Error::InvalidSignal(format!(
            "sample rate {sample_rate} is not positive"
        )));
    }
    let nyquist = sample_rate / 2.0;
    if !(center_frequency.is_finite() && center_frequency > 0.0 && center_frequency < nyquist) {
        return Err(Error::AboveNyquist {
            center_frequency,
            nyquist,
        });
    }
    if length < 2 {
        return Err(Error::InvalidSignal(format!(
            "length {length} is shorter than 2"
        )));
    }

    let sigma = 1.0 / (2.0 * PI * center_frequency);
    let origin = (length as f64 - 1.0) / 2.0;
    let mut waveform: Vec<f64> = (0..length)
        .map(|n| {
            let t = (n as f64 - origin) / sample_rate;
            -t * (-t * t / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let peak = waveform.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return Err(Error::InvalidSignal(
            "pulse vanishes at this sample rate".into(),
        ));
    }
    waveform.iter_mut().for_each(|v| *v /= peak);

    let threshold = SUPPORT_THRESHOLD;
    let first = waveform.iter().position(|v| v.abs() >= threshold);
    let last = waveform.iter().rposition(|v| v.abs() >= threshold);
    let duration_bins = match (first, last) {
        (Some(a), Some(b)) => b - a + 1,
        _ => 1,
    };

    Ok(MonocycleTemplate {
        center_frequency,
        sample_rate,
        duration_bins,
        waveform,
    })
}

/// One reflection: a circular shift of the pulse and its signed amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub shift_bin: usize,
    pub amplitude: f64,
}

/// A set of reflections on an `N`-bin circular time axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseScene {
    length: usize,
    events: Vec<Event>,
}

impl SparseScene {
    /// Events must have distinct shifts in `[0, length)` and finite,
    /// nonzero amplitudes. An empty event list is allowed.
    pub fn new(length: usize, events: Vec<Event>) -> Result<Self> {
        if length < 2 {
            return Err(Error::InvalidScene(format!("length {length} < 2")));
        }
        for (i, e) in events.iter().enumerate() {
            if e.shift_bin >= length {
                return Err(Error::InvalidScene(format!(
                    "shift {} outside [0, {length})",
                    e.shift_bin
                )));
            }
            if !e.amplitude.is_finite() || e.amplitude == 0.0 {
                return Err(Error::InvalidScene(format!(
                    "event {i} has amplitude {}",
                    e.amplitude
                )));
            }
            if events[..i].iter().any(|p| p.shift_bin == e.shift_bin) {
                return Err(Error::InvalidScene(format!(
                    "duplicate shift {}",
                    e.shift_bin
                )));
            }
        }
        Ok(SparseScene { length, events })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Degree of freedom: the number of reflections.
    pub fn dof(&self) -> usize {
        self.events.len()
    }

    /// The same scene rotated by `k` bins.
    pub fn shifted(&self, k: usize) -> SparseScene {
        let events = self
            .events
            .iter()
            .map(|e| Event {
                shift_bin: (e.shift_bin + k) % self.length,
                amplitude: e.amplitude,
            })
            .collect();
        SparseScene {
            length: self.length,
            events,
        }
    }
}

/// Smallest circular distance between two bins on an `n`-bin ring.
pub fn circular_distance(a: usize, b: usize, n: usize) -> usize {
    let d = a.abs_diff(b) % n;
    d.min(n - d)
}

/// Draws `dof` reflections with seeded uniform shifts that are pairwise at
/// least `guard` bins apart (circularly), and amplitudes uniform in
/// `amplitude_range` with a random sign.
pub fn make_scene(
    length: usize,
    dof: usize,
    seed: u64,
    amplitude_range: (f64, f64),
    guard: usize,
) -> Result<SparseScene> {
    let (lo, hi) = amplitude_range;
    if dof == 0 {
        return Err(Error::InvalidScene("dof must be at least 1".into()));
    }
    if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo <= hi) {
        return Err(Error::InvalidScene(format!(
            "amplitude range [{lo}, {hi}] must satisfy 0 < lo <= hi"
        )));
    }
    if dof.saturating_mul(guard.max(1)) > length {
        return Err(Error::SceneUnsatisfiable {
            dof,
            guard,
            length,
            attempts: 0,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SCENE_ATTEMPTS {
        let mut shifts: Vec<usize> = Vec::with_capacity(dof);
        for _ in 0..dof {
            let s = rng.gen_range(0..length);
            if shifts
                .iter()
                .any(|&p| p == s || circular_distance(p, s, length) < guard)
            {
                break;
            }
            shifts.push(s);
        }
        if shifts.len() < dof {
            continue;
        }
        let events = shifts
            .into_iter()
            .map(|shift_bin| {
                let magnitude = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
                let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                Event {
                    shift_bin,
                    amplitude: sign * magnitude,
                }
            })
            .collect();
        return SparseScene::new(length, events);
    }
    Err(Error::SceneUnsatisfiable {
        dof,
        guard,
        length,
        attempts: SCENE_ATTEMPTS,
    })
}

/// Rotates `x` right by `k` positions: `out[(n + k) % N] = x[n]`.
pub fn circular_shift(x: &[f64], k: usize) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let k = k % n;
    let mut out = vec![0.0; n];
    for (i, v) in x.iter().enumerate() {
        out[(i + k) % n] = *v;
    }
    out
}

/// Sums `amplitude * circular_shift(template, shift_bin)` over all events.
pub fn synthesize(scene: &SparseScene, template: &MonocycleTemplate) -> Result<Signal> {
    if template.len() != scene.length() {
        return Err(Error::LengthMismatch {
            expected: scene.length(),
            actual: template.len(),
        });
    }
    let n = scene.length();
    let wave = template.waveform();
    let mut out = vec![0.0; n];
    for e in scene.events() {
        for (i, v) in wave.iter().enumerate() {
            out[(i + e.shift_bin) % n] += e.amplitude * v;
        }
    }
    Signal::new(out, template.sample_rate())
}

#[cfg(test)]
mod tests {
    use super::*;

    const FS: f64 = 16e9;
    const FC: f64 = 2e9;

    fn naive_dft_magnitude(x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                let (mut re, mut im) = (0.0, 0.0);
                for (t, v) in x.iter().enumerate() {
                    let phase = -2.0 * PI * (k * t) as f64 / n as f64;
                    re += v * phase.cos();
                    im += v * phase.sin();
                }
                (re * re + im * im).sqrt()
            })
            .collect()
    }

    #[test]
    fn monocycle_spectrum_peaks_at_center_frequency() {
        for &(fc, fs, n) in &[(FC, FS, 256), (1e9, 16e9, 512), (3e9, 20e9, 256)] {
            let t = make_monocycle(fc, fs, n).unwrap();
            let mag = naive_dft_magnitude(t.waveform());
            let (peak_bin, _) = mag[..n / 2]
                .iter()
                .enumerate()
                .fold((0, 0.0), |acc, (k, &v)| if v > acc.1 { (k, v) } else { acc });
            let bin_width = fs / n as f64;
            let peak_freq = peak_bin as f64 * bin_width;
            assert!(
                (peak_freq - fc).abs() <= bin_width,
                "peak at {peak_freq} Hz, expected {fc} Hz"
            );
        }
    }

    #[test]
    fn monocycle_is_zero_mean_with_unit_peak() {
        for &(fc, fs, n) in &[(FC, FS, 256), (FC, FS, 16), (0.5e9, 16e9, 1024)] {
            let t = make_monocycle(fc, fs, n).unwrap();
            let sum: f64 = t.waveform().iter().sum();
            assert!(sum.abs() < 1e-9, "sum {sum}");
            let peak = t.waveform().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            assert_eq!(peak, 1.0);
        }
    }

    #[test]
    fn default_monocycle_support_is_about_ten_bins() {
        let t = make_monocycle(FC, FS, 256).unwrap();
        assert!((8..=12).contains(&t.duration_bins()), "{}", t.duration_bins());
    }

    #[test]
    fn rejects_center_frequency_at_or_above_nyquist() {
        assert!(matches!(
            make_monocycle(8e9, FS, 256),
            Err(Error::AboveNyquist { .. })
        ));
        assert!(make_monocycle(9e9, FS, 256).is_err());
        assert!(make_monocycle(0.0, FS, 256).is_err());
        assert!(make_monocycle(FC, FS, 1).is_err());
    }

    #[test]
    fn scene_cardinality_and_guard() {
        let one = make_scene(256, 1, 7, (0.3, 1.0), 10).unwrap();
        assert_eq!(one.dof(), 1);

        for seed in 0..50 {
            let s = make_scene(256, 3, seed, (0.3, 1.0), 10).unwrap();
            assert_eq!(s.dof(), 3);
            let ev = s.events();
            for i in 0..3 {
                assert!((0.3..=1.0).contains(&ev[i].amplitude.abs()));
                for j in i + 1..3 {
                    assert_ne!(ev[i].shift_bin, ev[j].shift_bin);
                    assert!(circular_distance(ev[i].shift_bin, ev[j].shift_bin, 256) >= 10);
                }
            }
        }
    }

    #[test]
    fn scene_is_deterministic_per_seed() {
        let a = make_scene(256, 3, 42, (0.3, 1.0), 10).unwrap();
        let b = make_scene(256, 3, 42, (0.3, 1.0), 10).unwrap();
        assert_eq!(a, b);
        let c = make_scene(256, 3, 43, (0.3, 1.0), 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn scene_rejects_unsatisfiable_constraints() {
        assert!(make_scene(16, 4, 1, (0.3, 1.0), 5).is_err());
        assert!(make_scene(16, 0, 1, (0.3, 1.0), 2).is_err());
        assert!(make_scene(16, 1, 1, (0.0, 1.0), 2).is_err());
    }

    #[test]
    fn scene_validation() {
        let ok = SparseScene::new(8, vec![Event { shift_bin: 1, amplitude: 0.5 }]);
        assert!(ok.is_ok());
        assert!(SparseScene::new(8, vec![Event { shift_bin: 8, amplitude: 0.5 }]).is_err());
        assert!(SparseScene::new(8, vec![Event { shift_bin: 1, amplitude: 0.0 }]).is_err());
        let dup = vec![
            Event { shift_bin: 2, amplitude: 1.0 },
            Event { shift_bin: 2, amplitude: -1.0 },
        ];
        assert!(SparseScene::new(8, dup).is_err());
    }

    #[test]
    fn synthesize_basic_identities() {
        let t = make_monocycle(FC, FS, 64).unwrap();
        let empty = SparseScene::new(64, vec![]).unwrap();
        assert!(synthesize(&empty, &t).unwrap().samples().iter().all(|&v| v == 0.0));

        let unit = SparseScene::new(64, vec![Event { shift_bin: 0, amplitude: 1.0 }]).unwrap();
        assert_eq!(synthesize(&unit, &t).unwrap().samples(), t.waveform());

        let e1 = Event { shift_bin: 3, amplitude: 0.7 };
        let e2 = Event { shift_bin: 40, amplitude: -0.4 };
        let both = SparseScene::new(64, vec![e1, e2]).unwrap();
        let s1 = synthesize(&SparseScene::new(64, vec![e1]).unwrap(), &t).unwrap();
        let s2 = synthesize(&SparseScene::new(64, vec![e2]).unwrap(), &t).unwrap();
        let sum = synthesize(&both, &t).unwrap();
        for i in 0..64 {
            assert!((sum.samples()[i] - s1.samples()[i] - s2.samples()[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn synthesize_checks_lengths() {
        let t = make_monocycle(FC, FS, 64).unwrap();
        let scene = SparseScene::new(32, vec![]).unwrap();
        assert!(synthesize(&scene, &t).is_err());
    }

    #[test]
    fn signal_rejects_bad_input() {
        assert!(Signal::new(vec![1.0], 1.0).is_err());
        assert!(Signal::new(vec![1.0, f64::NAN], 1.0).is_err());
        assert!(Signal::new(vec![1.0, 2.0], 0.0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn shift_covariance(seed in 0u64..1000, k in 0usize..128) {
                let t = make_monocycle(FC, FS, 128).unwrap();
                let scene = make_scene(128, 3, seed, (0.3, 1.0), 10).unwrap();
                let base = synthesize(&scene, &t).unwrap();
                let moved = synthesize(&scene.shifted(k), &t).unwrap();
                let expected = circular_shift(base.samples(), k);
                for (a, b) in moved.samples().iter().zip(&expected) {
                    prop_assert!((a - b).abs() < 1e-12);
                }
            }

            #[test]
            fn synthesis_is_linear(seed in 0u64..1000, scale in -3.0f64..3.0) {
                prop_assume!(scale.abs() > 1e-3);
                let t = make_monocycle(FC, FS, 128).unwrap();
                let scene = make_scene(128, 2, seed, (0.3, 1.0), 10).unwrap();
                let scaled = SparseScene::new(
                    128,
                    scene.events().iter().map(|e| Event { amplitude: e.amplitude * scale, ..*e }).collect(),
                ).unwrap();
                let a = synthesize(&scene, &t).unwrap();
                let b = synthesize(&scaled, &t).unwrap();
                for (x, y) in a.samples().iter().zip(b.samples()) {
                    prop_assert!((x * scale - y).abs() < 1e-12);
                }
            }
        }
    }
}
