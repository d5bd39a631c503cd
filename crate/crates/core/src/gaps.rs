//! Circle-gap spectra, three-gap predictions and the small/intermediate/large
//! classification of gap lengths.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::continued_fractions::{ostrowski_expand, CfExpansion, OstrowskiDigits};
use crate::error::{Error, Result};
use crate::sequences::{generate, PointSet, SequenceSpec};

pub const DEFAULT_GROUPING_TOLERANCE: f64 = 1e-9;

/// Spectra with more distinct lengths than this are not treated as
/// finite-gap data.
pub const MAX_GAP_CLASSES: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapClass {
    /// Mean of the grouped gap values.
    pub length: f64,
    pub multiplicity: usize,
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapSpectrum {
    n: usize,
    classes: Vec<GapClass>,
    grouping_tolerance: f64,
    has_duplicates: bool,
}

impl GapSpectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[GapClass] {
        &self.classes
    }

    pub fn distinct_count(&self) -> usize {
        self.classes.len()
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.classes.iter().map(|c| c.length).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.multiplicity).collect()
    }

    pub fn largest(&self) -> f64 {
        self.classes.last().map_or(0.0, |c| c.length)
    }

    pub fn grouping_tolerance(&self) -> f64 {
        self.grouping_tolerance
    }

    /// Whether some points coincide (a zero-length class is present).
    pub fn has_duplicates(&self) -> bool {
        self.has_duplicates
    }

    /// `sum_k N_k L_k`.
    pub fn total_length(&self) -> f64 {
        self.classes
            .iter()
            .map(|c| c.length * c.multiplicity as f64)
            .sum()
    }

    fn from_sorted_gaps(n: usize, sorted_gaps: &[(f64, usize)], tol: f64) -> Self {
        let mut classes: Vec<GapClass> = Vec::new();
        let mut sum = 0.0;
        let mut prev = f64::NEG_INFINITY;
        for &(g, count) in sorted_gaps {
            match classes.last_mut() {
                Some(c) if g - prev <= tol => {
                    c.multiplicity += count;
                    c.max = g;
                    sum += g * count as f64;
                }
                _ => {
                    if let Some(c) = classes.last_mut() {
                        c.length = sum / c.multiplicity as f64;
                    }
                    classes.push(GapClass {
                        length: g,
                        multiplicity: count,
                        min: g,
                        max: g,
                    });
                    sum = g * count as f64;
                }
            }
            prev = g;
        }
        if let Some(c) = classes.last_mut() {
            c.length = sum / c.multiplicity as f64;
        }
        let has_duplicates = classes.first().is_some_and(|c| c.min <= tol);
        GapSpectrum {
            n,
            classes,
            grouping_tolerance: tol,
            has_duplicates,
        }
    }
}

#[inline]
fn circle_gap(from: f64, to: f64) -> f64 {
    if to > from {
        to - from
    } else {
        to + 1.0 - from
    }
}

/// Circle gaps of sorted points: `gaps[j]` follows `sorted[j]`, the last one
/// wraps around to `sorted[0] + 1`.
pub fn circle_gaps(sorted: &[f64]) -> Vec<f64> {
    let n = sorted.len();
    let mut gaps: Vec<f64> = sorted.windows(2).map(|w| w[1] - w[0]).collect();
    if n > 0 {
        gaps.push(circle_gap(sorted[n - 1], sorted[0]));
    }
    gaps
}

fn check_tolerance(tol: f64) -> Result<()> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "grouping tolerance must be finite and non-negative, got {tol}"
        )))
    }
}

pub fn gap_spectrum(ps: &PointSet, grouping_tolerance: f64) -> Result<GapSpectrum> {
    check_tolerance(grouping_tolerance)?;
    let sorted = ps.sorted_values()?;
    if sorted.is_empty() {
        return Err(Error::InvalidArgument("gap spectrum of an empty set".into()));
    }
    Ok(labeled_spectrum(&sorted, grouping_tolerance).0)
}

/// Spectrum of sorted points together with the class index of every gap in
/// [`circle_gaps`] order.
pub fn labeled_spectrum(sorted: &[f64], tol: f64) -> (GapSpectrum, Vec<usize>) {
    let gaps = circle_gaps(sorted);
    let mut order: Vec<usize> = (0..gaps.len()).collect();
    order.sort_unstable_by(|&a, &b| gaps[a].total_cmp(&gaps[b]));
    let sorted_gaps: Vec<(f64, usize)> = order.iter().map(|&i| (gaps[i], 1)).collect();
    let spectrum = GapSpectrum::from_sorted_gaps(sorted.len(), &sorted_gaps, tol);
    let mut labels = vec![0; gaps.len()];
    let mut class = 0;
    let mut seen = 0;
    for &i in &order {
        if seen == spectrum.classes[class].multiplicity {
            class += 1;
            seen = 0;
        }
        labels[i] = class;
        seen += 1;
    }
    (spectrum, labels)
}

fn key(x: f64) -> u64 {
    // non-negative floats order like their bit patterns
    (x + 0.0).to_bits()
}

/// Gap spectrum maintained under point insertion, for scans over every
/// prefix length of a sequence.
#[derive(Clone, Debug, Default)]
pub struct IncrementalGaps {
    points: BTreeMap<u64, usize>,
    gaps: BTreeMap<u64, usize>,
    n: usize,
}

impl IncrementalGaps {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn add_gap(&mut self, g: f64) {
        *self.gaps.entry(key(g)).or_insert(0) += 1;
    }

    fn remove_gap(&mut self, g: f64) {
        let k = key(g);
        let c = self.gaps.get_mut(&k).expect("gap present");
        *c -= 1;
        if *c == 0 {
            self.gaps.remove(&k);
        }
    }

    pub fn insert(&mut self, x: f64) {
        assert!((0.0..1.0).contains(&x), "point {x} outside [0,1)");
        let k = key(x);
        self.n += 1;
        if let Some(c) = self.points.get_mut(&k) {
            *c += 1;
            self.add_gap(0.0);
            return;
        }
        if self.points.is_empty() {
            self.points.insert(k, 1);
            // x + 1 - x, not 1.0, so the later removal finds the same key
            self.add_gap(circle_gap(x, x));
            return;
        }
        let pred = self
            .points
            .range(..k)
            .next_back()
            .or_else(|| self.points.iter().next_back())
            .map(|(&b, _)| f64::from_bits(b))
            .unwrap();
        let succ = self
            .points
            .range(k..)
            .next()
            .or_else(|| self.points.iter().next())
            .map(|(&b, _)| f64::from_bits(b))
            .unwrap();
        self.remove_gap(circle_gap(pred, succ));
        self.add_gap(circle_gap(pred, x));
        self.add_gap(circle_gap(x, succ));
        self.points.insert(k, 1);
    }

    /// Number of distinct lengths after grouping, without building the
    /// spectrum.
    pub fn distinct_count(&self, tol: f64) -> usize {
        let mut count = 0;
        let mut prev = f64::NEG_INFINITY;
        for &k in self.gaps.keys() {
            let g = f64::from_bits(k);
            if g - prev > tol {
                count += 1;
            }
            prev = g;
        }
        count
    }

    pub fn spectrum(&self, tol: f64) -> GapSpectrum {
        let sorted: Vec<(f64, usize)> = self
            .gaps
            .iter()
            .map(|(&k, &c)| (f64::from_bits(k), c))
            .collect();
        GapSpectrum::from_sorted_gaps(self.n, &sorted, tol)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeGapPrediction {
    pub n: u64,
    /// Index `m` of the largest denominator `q_m <= N`.
    pub top_index: usize,
    /// `L1, L2, L3` with `L3 = L1 + L2`.
    pub lengths: [f64; 3],
    pub multiplicities: [u64; 3],
    /// Multiplicities from the uncorrected closed form
    /// `N2 = (b_{m-1} - 1) q_{m-1} + sum_{k<m-1} b_k q_k`, kept for comparison.
    pub as_printed: [i64; 3],
    pub ostrowski: OstrowskiDigits,
}

impl ThreeGapPrediction {
    /// Lengths with non-zero multiplicity, sorted ascending; lengths closer
    /// than `tol` are merged.
    pub fn predicted_classes(&self, tol: f64) -> Vec<(f64, u64)> {
        let mut v: Vec<(f64, u64)> = self
            .lengths
            .iter()
            .zip(self.multiplicities)
            .filter(|(_, m)| *m > 0)
            .map(|(&l, m)| (l, m))
            .collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, u64)> = Vec::new();
        for (l, m) in v {
            match out.last_mut() {
                Some(last) if l - last.0 <= tol => last.1 += m,
                _ => out.push((l, m)),
            }
        }
        out
    }

    /// Compares against a measured spectrum; lengths must agree to `tol`
    /// and multiplicities exactly.
    pub fn check_against(&self, spectrum: &GapSpectrum, tol: f64) -> Result<()> {
        let predicted = self.predicted_classes(tol);
        let observed: Vec<(f64, usize)> = spectrum
            .classes()
            .iter()
            .map(|c| (c.length, c.multiplicity))
            .collect();
        let agree = predicted.len() == observed.len()
            && predicted
                .iter()
                .zip(&observed)
                .all(|(p, o)| (p.0 - o.0).abs() <= tol && p.1 == o.1 as u64);
        if agree {
            Ok(())
        } else {
            Err(Error::PredictionMismatch {
                predicted,
                as_printed: self.as_printed,
                observed,
            })
        }
    }
}

/// Gap lengths and multiplicities of `{n z}`, `n = 1..N`, from the
/// continued fraction of `z`.
pub fn three_gap_predict(cf: &CfExpansion, n: u64) -> Result<ThreeGapPrediction> {
    let ost = ostrowski_expand(n, cf)?;
    let m = ost.top_index();
    let mi = m as isize;
    let b_m = ost.digit(mi);
    let b_prev = ost.digit(mi - 1);
    let q = |k: isize| -> i128 {
        if k < 0 {
            0
        } else {
            cf.q(k as usize).unwrap() as i128
        }
    };

    let l1 = cf.delta(mi);
    let l2 = cf.delta(mi - 1) - (b_m as f64 - 1.0) * l1 - b_prev.min(1) as f64 * l1;
    let l3 = l1 + l2;

    let big_n = n as i128;
    let n1 = big_n - q(mi);
    let n3 = (b_m as i128 + b_prev.min(1) as i128) * q(mi) + q(mi - 1) - big_n;
    let n2 = big_n - n1 - n3;
    debug_assert!(n1 >= 0 && n2 >= 0 && n3 >= 0, "N={n}: {n1} {n2} {n3}");

    let mut lit2 = (b_prev as i128 - 1) * q(mi - 1);
    for k in 1..=(mi - 2) {
        lit2 += ost.digit(k) as i128 * q(k);
    }
    let lit3 = big_n - n1 - lit2;

    Ok(ThreeGapPrediction {
        n,
        top_index: m,
        lengths: [l1, l2, l3],
        multiplicities: [n1 as u64, n2 as u64, n3 as u64],
        as_printed: [n1 as i64, lit2 as i64, lit3 as i64],
        ostrowski: ost,
    })
}

/// Prediction checked against the measured spectrum of `{n z}`, `n = 1..N`.
pub fn three_gap_verified(cf: &CfExpansion, n: u64, tol: f64) -> Result<ThreeGapPrediction> {
    let pred = three_gap_predict(cf, n)?;
    let z = cf.value().value();
    let mut pts: Vec<f64> = (1..=n).map(|k| z.mul_f64(k as f64).fract_f64()).collect();
    pts.sort_unstable_by(f64::total_cmp);
    let spectrum = labeled_spectrum(&pts, tol.max(DEFAULT_GROUPING_TOLERANCE)).0;
    pred.check_against(&spectrum, tol)?;
    Ok(pred)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapLabel {
    AlphaSmall,
    AlphaIntermediate,
    AlphaLarge,
    Undetermined,
}

impl GapLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            GapLabel::AlphaSmall => "alpha_small",
            GapLabel::AlphaIntermediate => "alpha_intermediate",
            GapLabel::AlphaLarge => "alpha_large",
            GapLabel::Undetermined => "undetermined",
        }
    }
}

/// Largest `max/min` ratio accepted as a bounded trajectory.
pub const INTERMEDIATE_BAND: f64 = 8.0;

/// Labels a finite trajectory `N_i^alpha * L^{(i)}`.
pub fn label_trajectory(t: &[f64]) -> GapLabel {
    if t.len() < 2 || t.iter().any(|v| !v.is_finite()) {
        return GapLabel::Undetermined;
    }
    let first = t[0];
    let last = t[t.len() - 1];
    let min = t.iter().copied().fold(f64::INFINITY, f64::min);
    let max = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if last <= first / 2.0 && last < 0.1 {
        GapLabel::AlphaSmall
    } else if last >= 2.0 * first && last > 10.0 {
        GapLabel::AlphaLarge
    } else if min > 0.0 && max / min <= INTERMEDIATE_BAND {
        GapLabel::AlphaIntermediate
    } else {
        GapLabel::Undetermined
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapFamily {
    /// Length of the family at each `N_i`, `None` where it was not matched.
    pub lengths: Vec<Option<f64>>,
    pub trajectory: Vec<Option<f64>>,
    pub label: GapLabel,
    /// Observed minimum and maximum of the trajectory.
    pub k1: f64,
    pub k2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapClassification {
    pub alpha: f64,
    pub n_list: Vec<usize>,
    pub class_counts: Vec<usize>,
    /// False when some spectrum exceeds [`MAX_GAP_CLASSES`].
    pub finite_gap: bool,
    /// Sorted by final length.
    pub families: Vec<GapFamily>,
}

impl GapClassification {
    pub fn any(&self, label: GapLabel) -> bool {
        self.families.iter().any(|f| f.label == label)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("alpha must lie in (0, 1], got {alpha}")))
    }
}

fn check_n_list(n_list: &[usize]) -> Result<()> {
    if n_list.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "classification needs at least 4 values of N, got {}",
            n_list.len()
        )));
    }
    if n_list[0] < 1 || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "N list must be positive and strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Classifies the gap families of a list of spectra taken at increasing N.
pub fn classify_spectra(alpha: f64, spectra: &[GapSpectrum]) -> Result<GapClassification> {
    check_alpha(alpha)?;
    let n_list: Vec<usize> = spectra.iter().map(|s| s.n()).collect();
    check_n_list(&n_list)?;
    let class_counts: Vec<usize> = spectra.iter().map(|s| s.distinct_count()).collect();
    let finite_gap = class_counts.iter().all(|&k| k <= MAX_GAP_CLASSES);
    if !finite_gap {
        return Ok(GapClassification {
            alpha,
            n_list,
            class_counts,
            finite_gap,
            families: Vec::new(),
        });
    }

    let steps = spectra.len();
    let traj = |i: usize, l: f64| (n_list[i] as f64).powf(alpha) * l;
    let mut lengths: Vec<Vec<Option<f64>>> = spectra[0]
        .lengths()
        .into_iter()
        .map(|l| {
            let mut v = vec![None; steps];
            v[0] = Some(l);
            v
        })
        .collect();
    for i in 1..steps {
        let current = spectra[i].lengths();
        let alive: Vec<usize> = (0..lengths.len())
            .filter(|&f| lengths[f][i - 1].is_some())
            .collect();
        if current.len() == alive.len() && class_counts[i] == class_counts[i - 1] {
            for (rank, &f) in alive.iter().enumerate() {
                lengths[f][i] = Some(current[rank]);
            }
            continue;
        }
        // nearest continuation in log space, one-to-one
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (c, &l) in current.iter().enumerate() {
            for &f in &alive {
                let prev = lengths[f][i - 1].unwrap();
                let d = (traj(i, l).ln() - traj(i - 1, prev).ln()).abs();
                pairs.push((d, c, f));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut class_used = vec![false; current.len()];
        let mut family_used = vec![false; lengths.len()];
        for (_, c, f) in pairs {
            if !class_used[c] && !family_used[f] {
                class_used[c] = true;
                family_used[f] = true;
                lengths[f][i] = Some(current[c]);
            }
        }
        for (c, used) in class_used.into_iter().enumerate() {
            if !used {
                let mut v = vec![None; steps];
                v[i] = Some(current[c]);
                lengths.push(v);
            }
        }
    }

    let mut families: Vec<GapFamily> = lengths
        .into_iter()
        .map(|ls| {
            let trajectory: Vec<Option<f64>> = ls
                .iter()
                .enumerate()
                .map(|(i, l)| l.map(|l| traj(i, l)))
                .collect();
            let known: Vec<f64> = trajectory.iter().flatten().copied().collect();
            let label = if known.len() == steps {
                label_trajectory(&known)
            } else {
                GapLabel::Undetermined
            };
            GapFamily {
                k1: known.iter().copied().fold(f64::INFINITY, f64::min),
                k2: known.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                lengths: ls,
                trajectory,
                label,
            }
        })
        .collect();
    families.sort_by(|a, b| last_known(&a.lengths).total_cmp(&last_known(&b.lengths)));
    Ok(GapClassification {
        alpha,
        n_list,
        class_counts,
        finite_gap,
        families,
    })
}

fn last_known(v: &[Option<f64>]) -> f64 {
    v.iter().rev().flatten().next().copied().unwrap_or(0.0)
}

/// Spectra of the first `N_i` points of `spec` for every `N_i`.
pub fn spectra_for(spec: &SequenceSpec, n_list: &[usize], tol: f64) -> Result<Vec<GapSpectrum>> {
    if spec.dimension() != 1 {
        return Err(Error::DimensionMismatch(spec.dimension()));
    }
    check_n_list(n_list)?;
    let ps = generate(spec, *n_list.last().unwrap())?;
    let values = ps.values()?;
    Ok(n_list
        .par_iter()
        .map(|&n| {
            let mut v = values[..n].to_vec();
            v.sort_unstable_by(f64::total_cmp);
            labeled_spectrum(&v, tol).0
        })
        .collect())
}

pub fn classify_gaps(spec: &SequenceSpec, alpha: f64, n_list: &[usize]) -> Result<GapClassification> {
    check_alpha(alpha)?;
    let spectra = spectra_for(spec, n_list, DEFAULT_GROUPING_TOLERANCE)?;
    classify_spectra(alpha, &spectra)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Indication {
    Indicated,
    NotIndicated,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    /// Some family is alpha-intermediate.
    pub obstruction_1: Indication,
    /// The largest alpha-small family also has `N_i L -> 0`.
    pub obstruction_2: Indication,
    pub classification: GapClassification,
}

pub fn obstructions_from(classification: GapClassification) -> ObstructionReport {
    let c = &classification;
    let undetermined = c.any(GapLabel::Undetermined);
    let (o1, o2) = if !c.finite_gap {
        (Indication::Inconclusive, Indication::Inconclusive)
    } else {
        let o1 = if c.any(GapLabel::AlphaIntermediate) {
            Indication::Indicated
        } else if undetermined {
            Indication::Inconclusive
        } else {
            Indication::NotIndicated
        };
        let largest_small = c.families.iter().rev().find(|f| f.label == GapLabel::AlphaSmall);
        let o2 = match largest_small {
            None if undetermined => Indication::Inconclusive,
            None => Indication::NotIndicated,
            Some(f) => {
                let t1: Vec<f64> = f
                    .lengths
                    .iter()
                    .zip(&c.n_list)
                    .map(|(l, &n)| n as f64 * l.unwrap())
                    .collect();
                match label_trajectory(&t1) {
                    GapLabel::AlphaSmall => Indication::Indicated,
                    GapLabel::Undetermined => Indication::Inconclusive,
                    _ => Indication::NotIndicated,
                }
            }
        };
        (o1, o2)
    };
    ObstructionReport {
        obstruction_1: o1,
        obstruction_2: o2,
        classification,
    }
}

pub fn check_obstructions(spec: &SequenceSpec, alpha: f64, n_list: &[usize]) -> Result<ObstructionReport> {
    Ok(obstructions_from(classify_gaps(spec, alpha, n_list)?))
}

/// Fibonacci numbers `F_k` with `lo <= F_k <= hi`, without repeats.
pub fn fibonacci_up_to(lo: u64, hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let (mut a, mut b) = (1u64, 2u64);
    while a <= hi {
        if a >= lo {
            out.push(a);
        }
        (a, b) = (b, a + b);
    }
    out
}
