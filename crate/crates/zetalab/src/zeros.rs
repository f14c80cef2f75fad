//! Locating, importing, persisting, and querying nontrivial-zero ordinates.
//!
//! A [`ZeroSet`] is an immutable, strictly increasing list of ordinates
//! γ₁ < γ₂ < … ≤ t_max, either computed by sign-change bracketing of Hardy's
//! Z function ([`find_zeros`]) or read from a reference table
//! ([`ingest_zeros`]). All downstream statistics — nearest-gap distances,
//! successor-gap fractions, pair-correlation histograms — are pure queries
//! on the finished set.
//!
//! Completeness of a computed set is monitored Turing-style: the cumulative
//! zero count is compared with θ(T)/π + 1 at checkpoints; the difference is
//! the bounded, zero-mean argument term, so a *persistent* integer offset
//! means sign changes were missed (they disappear in pairs between grid
//! points) and triggers a progressively finer rescan of the offending
//! windows.

use crate::error::{Error, Result};
use crate::zeta;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::io::{BufWriter, Write};
use std::path::Path;

/// Ordinates closer than this are considered the same zero everywhere
/// (matching, deduplication, self-exclusion in gap queries). Desk-height
/// zeros are separated by far more than 10⁻³, so the tolerance is safe.
const MATCH_TOL: f64 = 1e-9;

/// Scanning starts below the first zero (γ₁ ≈ 14.13) but above the θ domain
/// edge, so every checkpoint can be compared against θ(T)/π + 1.
const SCAN_START: f64 = 10.0;

/// Width of the parallel scan windows; also the checkpoint spacing for the
/// completeness monitor.
const WINDOW_WIDTH: f64 = 50.0;

/// Each rescan round shrinks the grid step of the flagged windows by 4×;
/// after this many rounds a still-unresolved count mismatch is an error.
/// Five rounds reach a grid 1024× below the quarter-mean-gap start, far past
/// any spacing the correlation repulsion makes remotely likely.
const MAX_REFINE_ROUNDS: usize = 5;

/// How a zero set was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZeroSource {
    /// Produced by this crate's sign-change scan.
    Computed,
    /// Parsed from an external ordinate file.
    Ingested,
}

/// An immutable set of zero ordinates in (0, t_max], strictly increasing.
#[derive(Debug, Clone)]
pub struct ZeroSet {
    ordinates: Vec<f64>,
    t_max: f64,
    source: ZeroSource,
}

impl ZeroSet {
    /// Validates and wraps a list of ordinates: strictly increasing, all
    /// finite, positive, and ≤ t_max. An empty list is allowed (it simply
    /// certifies that no zeros lie below t_max — true for t_max < γ₁).
    pub fn new(ordinates: Vec<f64>, t_max: f64, source: ZeroSource) -> Result<Self> {
        if !t_max.is_finite() || t_max <= 0.0 {
            return Err(Error::Domain(format!(
                "t_max must be positive and finite, got {t_max}"
            )));
        }
        let mut prev = 0.0f64;
        for (k, &g) in ordinates.iter().enumerate() {
            if !g.is_finite() || g <= prev {
                return Err(Error::Domain(format!(
                    "ordinate #{k} = {g} breaks the strictly increasing positive order"
                )));
            }
            if g > t_max + MATCH_TOL {
                return Err(Error::Domain(format!(
                    "ordinate #{k} = {g} exceeds t_max = {t_max}"
                )));
            }
            prev = g;
        }
        Ok(Self {
            ordinates,
            t_max,
            source,
        })
    }

    /// The ordinates, ascending.
    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    /// The certified completeness bound T.
    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Whether the set was computed or ingested.
    pub fn source(&self) -> ZeroSource {
        self.source
    }

    /// Number of ordinates.
    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    /// True when the set holds no ordinates.
    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Count of ordinates ≤ t.
    pub fn count_up_to(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&g| g <= t)
    }

    /// The ordinates ≤ t, as a prefix slice.
    pub fn ordinates_up_to(&self, t: f64) -> &[f64] {
        &self.ordinates[..self.count_up_to(t)]
    }

    /// The ordinate nearest to t if it lies within `tol`, else None.
    pub fn nearest_within(&self, t: f64, tol: f64) -> Option<f64> {
        let idx = self.ordinates.partition_point(|&g| g < t);
        let mut best: Option<f64> = None;
        for k in idx.saturating_sub(1)..=idx {
            if let Some(&g) = self.ordinates.get(k) {
                if (g - t).abs() <= tol && best.is_none_or(|b| (g - t).abs() < (b - t).abs()) {
                    best = Some(g);
                }
            }
        }
        best
    }

    /// Multiplicity assigned to the point t: 1 when t matches an ordinate to
    /// the standard tolerance, 0 otherwise (all desk-height zeros are simple).
    pub fn multiplicity(&self, t: f64) -> u32 {
        u32::from(self.nearest_within(t, MATCH_TOL).is_some())
    }

    /// Distance from t to the nearest ordinate *other than t itself*
    /// (ordinates within 10⁻⁹ of t are excluded), by binary search.
    pub fn nearest_gap(&self, t: f64) -> Result<f64> {
        if self.ordinates.is_empty() {
            return Err(Error::EmptyZeroSet);
        }
        if !(t > 0.0 && t <= self.t_max) {
            return Err(Error::Domain(format!(
                "nearest_gap needs t in (0, {}], got {t}",
                self.t_max
            )));
        }
        let idx = self.ordinates.partition_point(|&g| g < t);
        let lo = idx.saturating_sub(2);
        let hi = (idx + 1).min(self.ordinates.len() - 1);
        let mut best = f64::INFINITY;
        for k in lo..=hi {
            let d = (self.ordinates[k] - t).abs();
            if d > MATCH_TOL && d < best {
                best = d;
            }
        }
        if best.is_finite() {
            Ok(best)
        } else {
            Err(Error::Domain(format!(
                "no ordinate distinct from {t} to measure a gap against"
            )))
        }
    }

    /// Fraction of successor gaps γ⁺ − γ that are ≤ C/log t_max, over the
    /// ordinates that have a successor in the set. C must lie in (0, 1).
    pub fn gap_fraction(&self, c: f64) -> Result<f64> {
        if self.ordinates.is_empty() {
            return Err(Error::EmptyZeroSet);
        }
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::Domain(format!(
                "gap_fraction needs C in (0, 1), got {c}"
            )));
        }
        if self.ordinates.len() < 2 {
            return Ok(0.0);
        }
        let threshold = c / self.t_max.ln();
        let hits = self
            .ordinates
            .windows(2)
            .filter(|w| w[1] - w[0] <= threshold)
            .count();
        Ok(hits as f64 / (self.ordinates.len() - 1) as f64)
    }

    /// Histogram of pair differences γ − γ′ > 0 scaled by the local zero
    /// density log(γ′/2π)/2π, over scaled values in (0, x_max], as a density
    /// normalized by the number of zeros — directly comparable to the
    /// conjectured pair-correlation density 1 − (sin πx/πx)², whose values at
    /// the bin centers ride along in `predicted`.
    ///
    /// Unordered pairs are counted once (γ > γ′); the diagonal γ = γ′ is
    /// excluded. Local rather than end-of-range scaling keeps low and high
    /// ordinates on the same footing at desk heights, where the density still
    /// changes noticeably across the set.
    pub fn pair_correlation_histogram(
        &self,
        bins: usize,
        x_max: f64,
    ) -> Result<PairCorrelationHistogram> {
        if bins < 10 {
            return Err(Error::Domain(format!(
                "pair_correlation_histogram needs ≥ 10 bins, got {bins}"
            )));
        }
        if !(x_max > 0.0 && x_max <= 5.0) {
            return Err(Error::Domain(format!(
                "pair_correlation_histogram needs 0 < x_max ≤ 5, got {x_max}"
            )));
        }
        if self.ordinates.is_empty() {
            return Err(Error::EmptyZeroSet);
        }
        let width = x_max / bins as f64;
        let mut counts = vec![0u64; bins];
        let mut pair_count = 0u64;
        for (i, &gi) in self.ordinates.iter().enumerate() {
            let scale = (gi / (2.0 * PI)).ln() / (2.0 * PI);
            for &gj in &self.ordinates[i + 1..] {
                let x = (gj - gi) * scale;
                if x > x_max {
                    break;
                }
                if x <= 0.0 {
                    continue;
                }
                counts[((x / width) as usize).min(bins - 1)] += 1;
                pair_count += 1;
            }
        }
        let n = self.ordinates.len() as f64;
        let centers: Vec<f64> = (0..bins).map(|b| (b as f64 + 0.5) * width).collect();
        let density = counts.iter().map(|&c| c as f64 / (n * width)).collect();
        let predicted = centers.iter().map(|&x| montgomery_density(x)).collect();
        Ok(PairCorrelationHistogram {
            bins,
            x_max,
            bin_width: width,
            centers,
            density,
            predicted,
            pair_count,
            zero_count: self.ordinates.len(),
        })
    }
}

/// Pair-correlation histogram in density units, with the conjectured density
/// evaluated at the same bin centers for overlay.
#[derive(Debug, Clone, Serialize)]
pub struct PairCorrelationHistogram {
    /// Number of bins over (0, x_max].
    pub bins: usize,
    /// Upper end of the scaled-difference range.
    pub x_max: f64,
    /// Width of each bin.
    pub bin_width: f64,
    /// Bin centers.
    pub centers: Vec<f64>,
    /// Empirical density: pair count per bin / (zero count · bin width).
    pub density: Vec<f64>,
    /// Conjectured density 1 − (sin πx/πx)² at the bin centers.
    pub predicted: Vec<f64>,
    /// Total pairs that landed in the range.
    pub pair_count: u64,
    /// Number of zeros the histogram was built from.
    pub zero_count: usize,
}

/// The conjectured pair-correlation density 1 − (sin πx/(πx))², with the
/// x = 0 limit taken (the value is 0 there).
pub fn montgomery_density(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let s = (PI * x).sin() / (PI * x);
    1.0 - s * s
}

/// Smooth part of the zero-counting function:
/// (T/2π) log(T/2π) − T/2π + 7/8, for T ≥ 2. The oscillatory argument term
/// S(T) is exposed separately by the statistics module.
pub fn rv_mangoldt_count(t: f64) -> Result<f64> {
    if !(t >= 2.0) {
        return Err(Error::Domain(format!(
            "rv_mangoldt_count needs T ≥ 2, got {t}"
        )));
    }
    let r = t / (2.0 * PI);
    Ok(r * r.ln() - r + 0.875)
}

/// Expected cumulative count θ(T)/π + 1 used by the completeness monitor;
/// the true count differs from this by the bounded argument term only.
fn predicted_count(t: f64) -> Result<f64> {
    Ok(zeta::riemann_siegel_theta(t)? / PI + 1.0)
}

/// Grid step for the sign-change scan: a quarter of the local mean gap
/// 2π/log(t/2π).
fn grid_step(t: f64) -> f64 {
    0.5 * PI / (t / (2.0 * PI)).ln().max(0.4)
}

/// All zeros with ordinate in (0, t_max], for 10 ≤ t_max ≤ 10⁷.
///
/// Z(t) is sampled on a grid finer than a quarter of the local mean gap;
/// each sign change is refined by a guarded secant/bisection hybrid to an
/// interval below 10⁻⁹. Windows of width 50 are scanned in parallel and
/// stitched serially; the Turing-style count monitor rescans any window
/// whose cumulative count acquires a persistent offset, 4× finer per round,
/// and reports an incomplete-set error with the offending interval if five
/// rounds cannot reconcile the count.
pub fn find_zeros(t_max: f64) -> Result<ZeroSet> {
    if !t_max.is_finite() || !(10.0..=1.0e7).contains(&t_max) {
        return Err(Error::Domain(format!(
            "find_zeros needs 10 ≤ t_max ≤ 1e7, got {t_max}"
        )));
    }
    let n_windows = ((t_max - SCAN_START) / WINDOW_WIDTH).ceil() as usize;
    let bounds: Vec<f64> = (0..=n_windows)
        .map(|i| (SCAN_START + WINDOW_WIDTH * i as f64).min(t_max))
        .collect();

    let mut per_window: Vec<Vec<f64>> = (0..n_windows)
        .into_par_iter()
        .map(|w| scan_window(bounds[w], bounds[w + 1], 1.0))
        .collect::<Result<_>>()?;
    let mut factors = vec![1.0f64; n_windows];

    for round in 0..=MAX_REFINE_ROUNDS {
        let flagged = mismatched_windows(&bounds, &per_window)?;
        if std::env::var_os("ZETALAB_SCAN_DEBUG").is_some() {
            let mut cumulative = 0usize;
            let mut devs = vec![0.0 - predicted_count(bounds[0])?];
            for (w, window) in per_window.iter().enumerate() {
                cumulative += window.len();
                devs.push(cumulative as f64 - predicted_count(bounds[w + 1])?);
            }
            eprintln!("round {round}: flagged {flagged:?}");
            for &w in &flagged {
                eprintln!(
                    "  window {w} ({:.1},{:.1}] count {} dev_before {:.3} dev_after {:.3}",
                    bounds[w], bounds[w + 1], per_window[w].len(), devs[w], devs[w + 1]
                );
            }
        }
        if flagged.is_empty() {
            break;
        }
        if round == MAX_REFINE_ROUNDS {
            let w = flagged[0];
            let expected =
                (predicted_count(bounds[w + 1])? - predicted_count(bounds[w])?).round() as i64;
            return Err(Error::IncompleteZeroSet {
                lo: bounds[w],
                hi: bounds[w + 1],
                expected,
                found: per_window[w].len() as i64,
            });
        }
        for &w in &flagged {
            factors[w] *= 0.25;
        }
        let rescanned: Vec<(usize, Vec<f64>)> = flagged
            .par_iter()
            .map(|&w| scan_window(bounds[w], bounds[w + 1], factors[w]).map(|z| (w, z)))
            .collect::<Result<_>>()?;
        for (w, z) in rescanned {
            per_window[w] = z;
        }
    }

    // Stitch: windows are disjoint and ascending, so concatenation is sorted;
    // only zeros landing exactly on a shared boundary can repeat.
    let mut ordinates: Vec<f64> = Vec::new();
    for window in per_window {
        for g in window {
            if let Some(&last) = ordinates.last() {
                if (g - last).abs() <= MATCH_TOL {
                    continue;
                }
            }
            ordinates.push(g);
        }
    }
    ZeroSet::new(ordinates, t_max, ZeroSource::Computed)
}

/// Scan (a, b] on a grid of `factor` × the base step, bracketing and
/// refining every sign change of Z.
fn scan_window(a: f64, b: f64, factor: f64) -> Result<Vec<f64>> {
    let mut found = Vec::new();
    let mut t0 = a;
    let mut z0 = zeta::hardy_z(t0)?;
    if z0 == 0.0 {
        found.push(t0);
    }
    while t0 < b {
        let t1 = (t0 + factor * grid_step(t0)).min(b);
        let z1 = zeta::hardy_z(t1)?;
        if z1 == 0.0 {
            found.push(t1);
        } else if z0 * z1 < 0.0 {
            found.push(refine_bracket(t0, t1, z0, z1)?);
        }
        t0 = t1;
        z0 = z1;
    }
    Ok(found)
}

/// Shrink a sign-change bracket below 2×10⁻¹⁰ and return its midpoint.
/// Secant steps alternate with bisection steps, and a secant proposal too
/// close to an endpoint is replaced by the midpoint, so the bracket width at
/// least halves every other evaluation — guaranteed termination with
/// near-secant typical cost.
fn refine_bracket(mut a: f64, mut b: f64, mut za: f64, mut zb: f64) -> Result<f64> {
    let mut bisect = false;
    while b - a > 2e-10 {
        let mut m = if bisect || zb == za {
            0.5 * (a + b)
        } else {
            b - zb * (b - a) / (zb - za)
        };
        let guard = 0.05 * (b - a);
        if !(m >= a + guard && m <= b - guard) {
            m = 0.5 * (a + b);
        }
        let zm = zeta::hardy_z(m)?;
        if zm == 0.0 {
            return Ok(m);
        }
        if za * zm < 0.0 {
            b = m;
            zb = zm;
        } else {
            a = m;
            za = zm;
        }
        bisect = !bisect;
    }
    Ok(0.5 * (a + b))
}

/// Windows whose zero counts disagree persistently with the θ-based
/// prediction. The deviation at each checkpoint is the argument term plus
/// −2 per missed bracket pair; the even integer offset is estimated by an
/// upper-median over a 4-checkpoint lookahead (a transient argument
/// excursion touches one checkpoint, a real miss shifts all later ones).
/// The lookahead can place the change one checkpoint early — an argument
/// excursion just before a real shift drags the median crossing forward —
/// or one late, when the first post-shift checkpoint rides back above the
/// threshold, so the windows on both sides of a level change are flagged
/// along with the change window itself.
fn mismatched_windows(bounds: &[f64], per_window: &[Vec<f64>]) -> Result<Vec<usize>> {
    let n = per_window.len();
    let mut devs = Vec::with_capacity(n + 1);
    let mut cumulative = 0usize;
    devs.push(0.0 - predicted_count(bounds[0])?);
    for (w, window) in per_window.iter().enumerate() {
        cumulative += window.len();
        devs.push(cumulative as f64 - predicted_count(bounds[w + 1])?);
    }
    let levels = offset_levels(&devs);
    let mut flagged = BTreeSet::new();
    for i in 1..levels.len() {
        if levels[i] != levels[i - 1] {
            flagged.insert(i - 1);
            for w in [i, i + 1] {
                if w < n {
                    flagged.insert(w);
                }
            }
        }
    }
    Ok(flagged.into_iter().collect())
}

/// Even-integer offset level at each checkpoint, median-filtered over a
/// short lookahead. The final two checkpoints lack lookahead, so a level
/// change there must clear a deviation of 1.2 before it is believed —
/// the argument term stays well under that at desk heights.
fn offset_levels(devs: &[f64]) -> Vec<i64> {
    let n = devs.len();
    let mut levels = vec![0i64; n];
    for i in 0..n {
        let hi = (i + 4).min(n);
        let mut look = devs[i..hi].to_vec();
        look.sort_by(f64::total_cmp);
        let med = look[look.len() / 2];
        levels[i] = 2 * (med / 2.0).round() as i64;
    }
    for i in n.saturating_sub(2)..n {
        if i == 0 {
            continue;
        }
        if levels[i] != levels[i - 1] && (devs[i] - levels[i - 1] as f64).abs() < 1.2 {
            levels[i] = levels[i - 1];
        }
    }
    levels
}

/// Parse a zero-ordinate file: one ascending decimal ordinate per line,
/// blank lines and '#' comment lines ignored, an optional '# t_max=<value>'
/// header overriding the default t_max (the last ordinate).
///
/// Returns the set and a list of warnings — currently a density sanity
/// check: if the total count deviates more than 10% from the smooth
/// zero-count prediction at t_max, the file is suspicious (truncated,
/// partial-range, or mislabeled) but still usable.
pub fn ingest_zeros(path: &Path) -> Result<(ZeroSet, Vec<String>)> {
    let text = std::fs::read_to_string(path)?;
    let mut ordinates: Vec<f64> = Vec::new();
    let mut header_t_max = None;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("t_max=") {
                header_t_max = Some(v.trim().parse::<f64>().map_err(|e| Error::Parse {
                    line: line_no,
                    message: format!("bad t_max header: {e}"),
                })?);
            }
            continue;
        }
        let g: f64 = line.parse().map_err(|e| Error::Parse {
            line: line_no,
            message: format!("bad ordinate {line:?}: {e}"),
        })?;
        if !g.is_finite() || g <= 0.0 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("ordinate must be positive and finite, got {g}"),
            });
        }
        if let Some(&last) = ordinates.last() {
            if g <= last {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("ordinates must ascend strictly: {g} after {last}"),
                });
            }
        }
        ordinates.push(g);
    }
    let last = *ordinates.last().ok_or(Error::EmptyZeroSet)?;
    let t_max = header_t_max.unwrap_or(last);
    let set = ZeroSet::new(ordinates, t_max, ZeroSource::Ingested)?;

    let mut warnings = Vec::new();
    if set.t_max() >= 2.0 {
        let predicted = rv_mangoldt_count(set.t_max())?;
        let found = set.len() as f64;
        if predicted >= 10.0 && (found / predicted - 1.0).abs() > 0.10 {
            warnings.push(format!(
                "zero density looks off: {found} ordinates up to {:.3} where ≈ {predicted:.1} are predicted",
                set.t_max()
            ));
        }
    }
    Ok((set, warnings))
}

/// Write a zero set in the ingestion format: a '# t_max=<value>' header and
/// one ordinate per line, each printed with full round-trip precision.
pub fn save_zeros(zeros: &ZeroSet, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut out = BufWriter::new(file);
    writeln!(out, "# t_max={}", zeros.t_max())?;
    for &g in zeros.ordinates() {
        writeln!(out, "{g}")?;
    }
    out.flush()?;
    Ok(())
}
