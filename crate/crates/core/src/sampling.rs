//! Frequency-domain sampling plans.
//!
//! A plan picks `m` distinct DFT bins from a band of strictly positive
//! frequencies. Three schemes are provided:
//!
//! * [`plan_fes`]: the band is cut into `m` equal-width subbands and the bin
//!   holding each subband's center is sampled.
//! * [`plan_random`]: `m` bins drawn uniformly without replacement.
//! * [`plan_ees`]: the band is cut into `m` subbands carrying equal shares of
//!   the spectral energy density `|S(k)|`, and the bin holding each subband's
//!   energy midpoint is sampled. Low-density regions get wide subbands.
//!
//! Bins are treated as unit cells `[k, k + 1)` on a continuous axis. A bin
//! belongs to the subband containing its center, and the selected bin is the
//! one containing the subband's (geometric or energy) midpoint. With a flat
//! density the two partitions coincide, so EES reproduces FES exactly.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Inclusive range of positive-frequency DFT bins, excluding DC and Nyquist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Band {
    lower: usize,
    upper: usize,
}

impl Band {
    pub fn new(lower: usize, upper: usize, length: usize) -> Result<Self> {
        // upper < length / 2 keeps both conjugate halves distinct and excludes Nyquist.
        if lower == 0 || lower > upper || 2 * upper >= length {
            return Err(Error::InvalidBand {
                lower,
                upper,
                length,
            });
        }
        Ok(Band { lower, upper })
    }

    /// Every bin in `1 ..= ceil(N/2) - 1`.
    pub fn full(length: usize) -> Result<Self> {
        Band::new(1, (length - 1) / 2, length)
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn width(&self) -> usize {
        self.upper - self.lower + 1
    }

    pub fn contains(&self, bin: usize) -> bool {
        (self.lower..=self.upper).contains(&bin)
    }

    pub fn bins(&self) -> std::ops::RangeInclusive<usize> {
        self.lower..=self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Scheme {
    Fes,
    Random,
    Ees,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Fes, Scheme::Random, Scheme::Ees];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Fes => "FES",
            Scheme::Random => "RANDOM",
            Scheme::Ees => "EES",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "FES" | "UNIFORM" => Ok(Scheme::Fes),
            "RANDOM" | "RAN" => Ok(Scheme::Random),
            "EES" => Ok(Scheme::Ees),
            other => Err(Error::Config(format!("unknown sampling scheme `{other}`"))),
        }
    }
}

impl TryFrom<String> for Scheme {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Scheme> for String {
    fn from(s: Scheme) -> String {
        s.as_str().to_string()
    }
}

/// How EES places a sample inside its subband.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum MidpointRule {
    /// Bin containing the point where the subband's cumulative energy reaches half.
    #[default]
    Energy,
    /// Bin at offset `floor(width / 2)` within the subband.
    Geometric,
}

impl FromStr for MidpointRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "energy" => Ok(MidpointRule::Energy),
            "geometric" => Ok(MidpointRule::Geometric),
            other => Err(Error::Config(format!("unknown midpoint rule `{other}`"))),
        }
    }
}

impl MidpointRule {
    pub fn as_str(&self) -> &'static str {
        match self {
            MidpointRule::Energy => "energy",
            MidpointRule::Geometric => "geometric",
        }
    }
}

impl TryFrom<String> for MidpointRule {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<MidpointRule> for String {
    fn from(r: MidpointRule) -> String {
        r.as_str().to_string()
    }
}

/// Inclusive bin interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subband {
    pub lower: usize,
    pub upper: usize,
}

impl Subband {
    pub fn width(&self) -> usize {
        self.upper - self.lower + 1
    }

    pub fn contains(&self, bin: usize) -> bool {
        (self.lower..=self.upper).contains(&bin)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPlan {
    scheme: Scheme,
    band: Band,
    selected_bins: Vec<usize>,
    subbands: Vec<Subband>,
    seed: Option<u64>,
}

impl SamplingPlan {
    /// Validates the plan invariants: bins strictly increasing and inside the
    /// band; subbands (when present) tile the band with one selected bin each.
    pub fn new(
        scheme: Scheme,
        band: Band,
        selected_bins: Vec<usize>,
        subbands: Vec<Subband>,
        seed: Option<u64>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::PlanFormat { line: 0, message: msg });
        if selected_bins.is_empty() {
            return bad("plan selects no bins".into());
        }
        if selected_bins.windows(2).any(|w| w[0] >= w[1]) {
            return bad("selected bins are not strictly increasing".into());
        }
        if let Some(b) = selected_bins.iter().find(|&&b| !band.contains(b)) {
            return bad(format!(
                "bin {b} outside band [{}, {}]",
                band.lower, band.upper
            ));
        }
        if !subbands.is_empty() {
            if subbands.len() != selected_bins.len() {
                return bad("subband count differs from sample count".into());
            }
            let mut next = band.lower;
            for (sb, &bin) in subbands.iter().zip(&selected_bins) {
                if sb.lower != next || sb.upper < sb.lower {
                    return bad(format!("subband [{}, {}] breaks the tiling", sb.lower, sb.upper));
                }
                if !sb.contains(bin) {
                    return bad(format!(
                        "bin {bin} outside its subband [{}, {}]",
                        sb.lower, sb.upper
                    ));
                }
                next = sb.upper + 1;
            }
            if next != band.upper + 1 {
                return bad("subbands do not cover the band".into());
            }
        }
        Ok(SamplingPlan {
            scheme,
            band,
            selected_bins,
            subbands,
            seed,
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn band(&self) -> Band {
        self.band
    }

    pub fn selected_bins(&self) -> &[usize] {
        &self.selected_bins
    }

    /// Empty for random plans.
    pub fn subbands(&self) -> &[Subband] {
        &self.subbands
    }

    /// Subband widths in bins, aligned with [`Self::selected_bins`].
    pub fn subband_widths(&self) -> Vec<usize> {
        self.subbands.iter().map(Subband::width).collect()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.selected_bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected_bins.is_empty()
    }

    /// Serializes to the plain-text audit format: `#`-prefixed header lines
    /// followed by one selected bin per line.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# eqsamp sampling plan\n");
        out.push_str(&format!("# scheme = {}\n", self.scheme));
        match self.seed {
            Some(s) => out.push_str(&format!("# seed = {s}\n")),
            None => out.push_str("# seed = none\n"),
        }
        out.push_str(&format!("# band = {} {}\n", self.band.lower, self.band.upper));
        out.push_str(&format!("# samples = {}\n", self.selected_bins.len()));
        if !self.subbands.is_empty() {
            let list: Vec<String> = self
                .subbands
                .iter()
                .map(|s| format!("{}-{}", s.lower, s.upper))
                .collect();
            out.push_str(&format!("# subbands = {}\n", list.join(" ")));
        }
        for b in &self.selected_bins {
            out.push_str(&format!("{b}\n"));
        }
        out
    }

    /// Parses the format written by [`Self::to_text`]. The band header is
    /// checked against `length` (the signal length).
    pub fn from_text(text: &str, length: usize) -> Result<Self> {
        let err = |line: usize, message: String| Error::PlanFormat { line, message };
        let mut scheme = None;
        let mut seed = None;
        let mut band = None;
        let mut declared = None;
        let mut subbands = Vec::new();
        let mut bins = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                let Some((key, value)) = header.split_once('=') else {
                    continue;
                };
                let value = value.trim();
                match key.trim() {
                    "scheme" => scheme = Some(value.parse::<Scheme>().map_err(|e| err(line_no, e.to_string()))?),
                    "seed" => {
                        seed = if value == "none" {
                            None
                        } else {
                            Some(value.parse::<u64>().map_err(|e| err(line_no, e.to_string()))?)
                        }
                    }
                    "band" => {
                        let parts: Vec<&str> = value.split_whitespace().collect();
                        if parts.len() != 2 {
                            return Err(err(line_no, "band needs two bounds".into()));
                        }
                        let lo = parts[0].parse().map_err(|_| err(line_no, "bad band bound".into()))?;
                        let hi = parts[1].parse().map_err(|_| err(line_no, "bad band bound".into()))?;
                        band = Some(Band::new(lo, hi, length).map_err(|e| err(line_no, e.to_string()))?);
                    }
                    "samples" => {
                        declared = Some(value.parse::<usize>().map_err(|e| err(line_no, e.to_string()))?)
                    }
                    "subbands" => {
                        for item in value.split_whitespace() {
                            let (lo, hi) = item
                                .split_once('-')
                                .ok_or_else(|| err(line_no, format!("bad subband `{item}`")))?;
                            let lower = lo.parse().map_err(|_| err(line_no, format!("bad subband `{item}`")))?;
                            let upper = hi.parse().map_err(|_| err(line_no, format!("bad subband `{item}`")))?;
                            subbands.push(Subband { lower, upper });
                        }
                    }
                    _ => {}
                }
                continue;
            }
            bins.push(
                line.parse::<usize>()
                    .map_err(|_| err(line_no, format!("expected a bin index, got `{line}`")))?,
            );
        }

        let scheme = scheme.ok_or_else(|| err(0, "missing scheme header".into()))?;
        let band = band.ok_or_else(|| err(0, "missing band header".into()))?;
        if let Some(n) = declared {
            if n != bins.len() {
                return Err(err(0, format!("header declares {n} samples, found {}", bins.len())));
            }
        }
        SamplingPlan::new(scheme, band, bins, subbands, seed)
    }
}

/// `|S(k)|` restricted to a band.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyProfile {
    band: Band,
    density: Vec<f64>,
    total: f64,
}

impl EnergyProfile {
    /// `density` is indexed by absolute bin over the full spectrum (length
    /// `N`); only the band's bins are kept.
    pub fn new(band: Band, density: &[f64]) -> Result<Self> {
        if density.len() <= band.upper {
            return Err(Error::LengthMismatch {
                expected: band.upper + 1,
                actual: density.len(),
            });
        }
        let slice = density[band.bins()].to_vec();
        if slice.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::InvalidSignal(
                "energy density must be finite and nonnegative".into(),
            ));
        }
        let total = slice.iter().sum();
        Ok(EnergyProfile {
            band,
            density: slice,
            total,
        })
    }

    pub fn from_spectrum(band: Band, spectrum: &crate::spectral::Spectrum) -> Result<Self> {
        EnergyProfile::new(band, spectrum.energy_density())
    }

    pub fn band(&self) -> Band {
        self.band
    }

    /// Density over the band, index 0 = `band.lower()`.
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// Energy each of `m` subbands should carry: `total / m`.
    pub fn per_band_target(&self, m: usize) -> f64 {
        self.total / m as f64
    }

    pub fn max_bin_weight(&self) -> f64 {
        self.density.iter().fold(0.0, |a, &b| a.max(b))
    }
}

fn check_count(band: Band, m: usize) -> Result<()> {
    if m == 0 || m > band.width() {
        return Err(Error::TooManySamples {
            requested: m,
            available: band.width(),
        });
    }
    Ok(())
}

/// Uniform partition, computed in exact integer arithmetic.
///
/// Subband `i` (0-based) covers the continuous span `[i w/m, (i+1) w/m)`
/// measured from the band's lower edge; the sampled bin is the one holding
/// the span's center `(i + 1/2) w/m`.
pub fn plan_fes(band: Band, m: usize) -> Result<SamplingPlan> {
    check_count(band, m)?;
    let w = band.width();
    let lo = band.lower;
    // Offset k belongs to subband i when i w/m <= k + 1/2, i.e. k >= (2iw - m) / 2m.
    let start = |i: usize| -> usize {
        if i == 0 {
            0
        } else {
            (2 * i * w - m).div_ceil(2 * m)
        }
    };
    let selected: Vec<usize> = (0..m).map(|i| lo + (2 * i + 1) * w / (2 * m)).collect();
    let subbands: Vec<Subband> = (0..m)
        .map(|i| Subband {
            lower: lo + start(i),
            upper: if i + 1 == m { band.upper } else { lo + start(i + 1) - 1 },
        })
        .collect();
    SamplingPlan::new(Scheme::Fes, band, selected, subbands, None)
}

/// `m` distinct bins drawn uniformly from the band, sorted ascending.
pub fn plan_random(band: Band, m: usize, seed: u64) -> Result<SamplingPlan> {
    check_count(band, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bins: Vec<usize> = index::sample(&mut rng, band.width(), m)
        .into_iter()
        .map(|k| band.lower + k)
        .collect();
    bins.sort_unstable();
    SamplingPlan::new(Scheme::Random, band, bins, Vec::new(), Some(seed))
}

/// Energy-equipartition plan over the profile's band.
///
/// Cumulative energy is a prefix sum over bins. Boundary `i` is the first bin
/// whose center-cumulative energy reaches `i eps` (`eps = total / m`); the
/// sample is the bin containing the `(i - 1/2) eps` crossing, or the
/// geometric middle of the subband under [`MidpointRule::Geometric`].
/// If a very peaked density sends two samples to the same bin, the later one
/// advances to the next free bin; samples pushed past the top of the band are
/// packed back below it, so any `m` up to the band width can be placed.
pub fn plan_ees(profile: &EnergyProfile, m: usize, rule: MidpointRule) -> Result<SamplingPlan> {
    let band = profile.band;
    check_count(band, m)?;
    if profile.total <= 0.0 {
        return Err(Error::ZeroEnergy);
    }
    let w = band.width();
    let density = &profile.density;
    let eps = profile.per_band_target(m);
    let tol = profile.total * 1e-12;

    let mut cum_end = Vec::with_capacity(w);
    let mut acc = 0.0;
    for d in density {
        acc += d;
        cum_end.push(acc);
    }
    let cum_mid = |k: usize| cum_end[k] - 0.5 * density[k];

    // Natural starts of subbands 1..m (offsets; may equal w when empty).
    let mut starts = vec![0usize; m];
    let mut k = 0;
    for (i, s) in starts.iter_mut().enumerate().skip(1) {
        let target = i as f64 * eps - tol;
        while k < w && cum_mid(k) < target {
            k += 1;
        }
        *s = k;
    }

    let mut selected: Vec<usize> = match rule {
        MidpointRule::Energy => {
            let mut out = Vec::with_capacity(m);
            let mut k = 0;
            for i in 0..m {
                let target = (i as f64 + 0.5) * eps + tol;
                while k + 1 < w && cum_end[k] <= target {
                    k += 1;
                }
                out.push(k);
            }
            out
        }
        MidpointRule::Geometric => (0..m)
            .map(|i| {
                let lo = starts[i];
                let hi = if i + 1 == m { w } else { starts[i + 1] };
                if hi > lo {
                    lo + (hi - lo) / 2
                } else {
                    lo.min(w - 1)
                }
            })
            .collect(),
    };

    for i in 1..m {
        if selected[i] <= selected[i - 1] {
            selected[i] = selected[i - 1] + 1;
        }
    }
    // Advancing can run past the top of the band; pull the tail back down so
    // that sample i never sits above offset w - m + i.
    for i in (0..m).rev() {
        let cap = if i + 1 == m { w - 1 } else { selected[i + 1] - 1 };
        selected[i] = selected[i].min(cap);
    }

    // Clamp boundaries so every subband is nonempty and holds its sample.
    for i in 1..m {
        starts[i] = starts[i].clamp(selected[i - 1] + 1, selected[i]);
    }
    let lo = band.lower;
    let subbands = (0..m)
        .map(|i| Subband {
            lower: lo + starts[i],
            upper: if i + 1 == m { band.upper } else { lo + starts[i + 1] - 1 },
        })
        .collect();
    let bins = selected.into_iter().map(|k| lo + k).collect();
    SamplingPlan::new(Scheme::Ees, band, bins, subbands, None)
}
