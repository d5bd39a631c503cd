//! Star and extreme discrepancy, plus the gap-based and pair-correlation
//! based upper bounds for the star discrepancy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaps::{labeled_spectrum, GapSpectrum, DEFAULT_GROUPING_TOLERANCE, MAX_GAP_CLASSES};
use crate::pair_correlation::{deviation_from_counter, SortedCounter};
use crate::sequences::PointSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact1d,
    GridMd,
}

/// An anchored box `[0, upper)` or `[0, upper]` attaining the supremum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub upper: Vec<f64>,
    pub closed: bool,
    pub count: usize,
    pub volume: f64,
}

impl Witness {
    pub fn describe(&self) -> String {
        let coords: Vec<String> = self.upper.iter().map(|&x| crate::report::fmt_float(x)).collect();
        let close = if self.closed { ']' } else { ')' };
        if coords.len() == 1 {
            format!("[0,{}{close}", coords[0])
        } else {
            format!("[0,({}){close}", coords.join(";"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub n: usize,
    pub dimension: usize,
    pub star: f64,
    /// Only computed for `d = 1`.
    pub extreme: Option<f64>,
    pub method: Method,
    pub witness: Witness,
}

/// `D* = 1/(2N) + max_n |x*_n - (2n-1)/(2N)|`.
pub fn star_discrepancy_1d(ps: &PointSet) -> Result<DiscrepancyReport> {
    let x = ps.sorted_values()?;
    if x.is_empty() {
        return Err(Error::InvalidArgument("discrepancy of an empty set".into()));
    }
    let (star, witness) = star_from_sorted(&x);
    Ok(DiscrepancyReport {
        n: x.len(),
        dimension: 1,
        star,
        extreme: Some(extreme_from_sorted(&x)),
        method: Method::Exact1d,
        witness,
    })
}

fn star_from_sorted(x: &[f64]) -> (f64, Witness) {
    let n = x.len();
    let nf = n as f64;
    let mut best = (f64::NEG_INFINITY, 0usize);
    for (k, &v) in x.iter().enumerate() {
        let dev = (v - (2 * k + 1) as f64 / (2.0 * nf)).abs();
        if dev > best.0 {
            best = (dev, k);
        }
    }
    let k = best.1;
    let open = x[k] > (2 * k + 1) as f64 / (2.0 * nf);
    let witness = Witness {
        upper: vec![x[k]],
        closed: !open,
        count: if open { k } else { k + 1 },
        volume: x[k],
    };
    (1.0 / (2.0 * nf) + best.0, witness)
}

fn extreme_from_sorted(x: &[f64]) -> f64 {
    let nf = x.len() as f64;
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for (k, &v) in x.iter().enumerate() {
        let t = (k + 1) as f64 / nf - v;
        hi = hi.max(t);
        lo = lo.min(t);
    }
    1.0 / nf + hi - lo
}

/// `D_N = 1/N + max_n (n/N - x*_n) - min_n (n/N - x*_n)`.
pub fn extreme_discrepancy_1d(ps: &PointSet) -> Result<f64> {
    let x = ps.sorted_values()?;
    if x.is_empty() {
        return Err(Error::InvalidArgument("discrepancy of an empty set".into()));
    }
    Ok(extreme_from_sorted(&x))
}

/// `D*_n` of every prefix `x_1..x_n`, `n = 1..N`.
pub fn star_discrepancy_prefixes(ps: &PointSet) -> Result<Vec<f64>> {
    let values = ps.values()?;
    let mut sorted: Vec<f64> = Vec::with_capacity(values.len());
    let mut out = Vec::with_capacity(values.len());
    for &v in values {
        let pos = sorted.partition_point(|&y| y <= v);
        sorted.insert(pos, v);
        out.push(star_value_sorted(&sorted));
    }
    Ok(out)
}

/// `max_k |x_k - (2k+1)/(2n)|` plus `1/(2n)`, unrolled for throughput.
fn star_value_sorted(x: &[f64]) -> f64 {
    let inv = 1.0 / (2.0 * x.len() as f64);
    let step = 2.0 * inv;
    let mut acc = [0.0f64; 4];
    let chunks = x.chunks_exact(4);
    let tail = chunks.remainder();
    let mut c = inv;
    for ch in chunks {
        for j in 0..4 {
            acc[j] = acc[j].max((ch[j] - (c + j as f64 * step)).abs());
        }
        c += 4.0 * step;
    }
    let base = x.len() - tail.len();
    for (j, &v) in tail.iter().enumerate() {
        let centre = (2 * (base + j) + 1) as f64 * inv;
        acc[0] = acc[0].max((v - centre).abs());
    }
    inv + acc[0].max(acc[1]).max(acc[2].max(acc[3]))
}

/// Grid cells the multi-dimensional sweep may visit.
pub const MD_CELL_BUDGET: f64 = 1.1e9;

/// Exact star discrepancy for `d <= 3` over anchored boxes whose corners lie
/// on the grid of point coordinates and 1.
pub fn star_discrepancy_md(ps: &PointSet) -> Result<DiscrepancyReport> {
    star_discrepancy_md_with_budget(ps, MD_CELL_BUDGET)
}

pub fn star_discrepancy_md_with_budget(ps: &PointSet, budget: f64) -> Result<DiscrepancyReport> {
    let d = ps.dimension();
    let n = ps.len();
    if n == 0 {
        return Err(Error::InvalidArgument("discrepancy of an empty set".into()));
    }
    if d == 1 {
        return star_discrepancy_1d(ps);
    }
    if d > 3 {
        return Err(Error::InvalidArgument(format!(
            "exact star discrepancy is limited to d <= 3, got d = {d}"
        )));
    }

    // per-axis grid: distinct coordinates plus 1
    let grids: Vec<Vec<f64>> = (0..d)
        .map(|k| {
            let mut g: Vec<f64> = ps.points().map(|p| p[k]).collect();
            g.sort_unstable_by(f64::total_cmp);
            g.dedup();
            g.push(1.0);
            g
        })
        .collect();
    let cells: f64 = grids.iter().map(|g| g.len() as f64).product();
    // layers are also rebuilt once per point
    let work = cells + n as f64 * grids[1..].iter().map(|g| g.len() as f64).product::<f64>();
    if work > budget {
        let suggested_n = ((budget / 2.0).powf(1.0 / d as f64) - 1.0).floor().max(1.0) as usize;
        return Err(Error::BudgetExceeded {
            cells: work,
            budget,
            suggested_n,
        });
    }
    let rank = |k: usize, x: f64| grids[k].partition_point(|&g| g < x);

    let g1 = grids[1].len();
    let g2 = if d == 3 { grids[2].len() } else { 1 };
    let plane = g1 * g2;
    let mut layers: Vec<Vec<(usize, usize)>> = vec![Vec::new(); grids[0].len()];
    for p in ps.points() {
        let r1 = rank(1, p[1]);
        let r2 = if d == 3 { rank(2, p[2]) } else { 0 };
        layers[rank(0, p[0])].push((r1, r2));
    }

    let nf = n as f64;
    let mut closed = vec![0u32; plane];
    let mut best = (f64::NEG_INFINITY, Witness { upper: vec![], closed: false, count: 0, volume: 0.0 });
    for (l, pts) in layers.iter().enumerate() {
        let open = closed.clone();
        for &(r1, r2) in pts {
            for i in r1..g1 {
                for j in r2..g2 {
                    closed[i * g2 + j] += 1;
                }
            }
        }
        let b0 = grids[0][l];
        let (val, idx, is_closed) = (0..g1)
            .into_par_iter()
            .map(|i| {
                let mut row_best = (f64::NEG_INFINITY, 0usize, false);
                for j in 0..g2 {
                    let b2 = if d == 3 { grids[2][j] } else { 1.0 };
                    let vol = b0 * grids[1][i] * b2;
                    let c_closed = closed[i * g2 + j] as f64;
                    let c_open = if i > 0 && (d == 2 || j > 0) {
                        open[(i - 1) * g2 + if d == 3 { j - 1 } else { 0 }] as f64
                    } else {
                        0.0
                    };
                    let over = c_closed / nf - vol;
                    let under = vol - c_open / nf;
                    if over > row_best.0 {
                        row_best = (over, i * g2 + j, true);
                    }
                    if under > row_best.0 {
                        row_best = (under, i * g2 + j, false);
                    }
                }
                row_best
            })
            .reduce(
                || (f64::NEG_INFINITY, usize::MAX, false),
                |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
            );
        if val > best.0 {
            let (i, j) = (idx / g2, idx % g2);
            let mut upper = vec![b0, grids[1][i]];
            if d == 3 {
                upper.push(grids[2][j]);
            }
            let volume = upper.iter().product();
            let count = if is_closed {
                closed[idx] as usize
            } else if i > 0 && (d == 2 || j > 0) {
                open[(i - 1) * g2 + if d == 3 { j - 1 } else { 0 }] as usize
            } else {
                0
            };
            best = (val, Witness { upper, closed: is_closed, count, volume });
        }
    }
    Ok(DiscrepancyReport {
        n,
        dimension: d,
        star: best.0,
        extreme: None,
        method: Method::GridMd,
        witness: best.1,
    })
}

/// Lower bound on the star discrepancy from random anchored boxes; corner
/// coordinates are drawn uniformly or snapped to point coordinates.
pub fn star_discrepancy_probe(ps: &PointSet, samples: usize, seed: u64) -> f64 {
    let d = ps.dimension();
    let n = ps.len();
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    let mut b = vec![0.0; d];
    for _ in 0..samples {
        for (k, bk) in b.iter_mut().enumerate() {
            *bk = if rng.gen_bool(0.5) {
                ps.point(rng.gen_range(0..n))[k]
            } else {
                rng.gen::<f64>()
            };
        }
        let vol: f64 = b.iter().product();
        let mut open = 0usize;
        let mut closed = 0usize;
        for p in ps.points() {
            if p.iter().zip(&b).all(|(x, y)| x <= y) {
                closed += 1;
                if p.iter().zip(&b).all(|(x, y)| x < y) {
                    open += 1;
                }
            }
        }
        best = best.max(vol - open as f64 / nf).max(closed as f64 / nf - vol);
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapBoundReport {
    pub n: usize,
    pub k: usize,
    pub lengths: Vec<f64>,
    pub multiplicities: Vec<usize>,
    /// `N L_K - 2`.
    pub r: f64,
    /// `max_{j,k} |n_k(j) - (N_k/N) j|`.
    pub epsilon: f64,
    /// `(R + 3)/N + epsilon * sum_k L_k`.
    pub bound: f64,
    pub measured_star: f64,
    pub satisfied: bool,
}

impl GapBoundReport {
    /// `epsilon / ln N`, the constant implied by a logarithmic epsilon.
    pub fn epsilon_per_log_n(&self) -> f64 {
        self.epsilon / (self.n as f64).ln()
    }
}

/// Star discrepancy bound from the gap structure. `n_k(j)` counts the gaps
/// of class `k` among the `j - 1` gaps between `x*_1` and `x*_j`.
pub fn gap_based_bound(ps: &PointSet) -> Result<GapBoundReport> {
    let x = ps.sorted_values()?;
    let n = x.len();
    if n == 0 {
        return Err(Error::InvalidArgument("gap bound of an empty set".into()));
    }
    let (spectrum, labels): (GapSpectrum, Vec<usize>) = labeled_spectrum(&x, DEFAULT_GROUPING_TOLERANCE);
    let k = spectrum.distinct_count();
    if k > MAX_GAP_CLASSES {
        return Err(Error::TooManyGapLengths {
            classes: k,
            limit: MAX_GAP_CLASSES,
        });
    }
    let nf = n as f64;
    let ratios: Vec<f64> = spectrum.multiplicities().iter().map(|&m| m as f64 / nf).collect();
    let mut counts = vec![0usize; k];
    let mut epsilon: f64 = 0.0;
    for j in 1..=n {
        if j >= 2 {
            counts[labels[j - 2]] += 1;
        }
        for c in 0..k {
            epsilon = epsilon.max((counts[c] as f64 - ratios[c] * j as f64).abs());
        }
    }
    let lengths = spectrum.lengths();
    let r = nf * spectrum.largest() - 2.0;
    let bound = (r + 3.0) / nf + epsilon * lengths.iter().sum::<f64>();
    let measured_star = star_from_sorted(&x).0;
    Ok(GapBoundReport {
        n,
        k,
        multiplicities: spectrum.multiplicities(),
        lengths,
        r,
        epsilon,
        bound,
        measured_star,
        satisfied: measured_star <= bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcBoundReport {
    pub n: usize,
    pub alpha: f64,
    pub k: u64,
    pub k_squared: u64,
    /// `F(K^2, N)`.
    pub f_value: f64,
    /// `5 max(N^(1 - alpha/5), sqrt(N^alpha F))`.
    pub bound: f64,
    /// `N^alpha D*_N`.
    pub measured: f64,
    pub satisfied: bool,
    /// A violation, which the bound only excludes beyond an unknown `N_0`.
    pub below_n0_candidate: bool,
}

/// `floor(N^(2 alpha/5))`, the top of the admissible window for `K`.
pub fn default_pc_k(n: usize, alpha: f64) -> u64 {
    ((n as f64).powf(0.4 * alpha) + 1e-9).floor() as u64
}

fn pc_window(n: usize, alpha: f64) -> (f64, f64) {
    let top = (n as f64).powf(0.4 * alpha);
    (top / 2.0, top)
}

fn min_n_for_window(n: usize, alpha: f64) -> usize {
    let mut m = n.max(1);
    while m < 1 << 40 {
        let k = default_pc_k(m, alpha);
        if 2 * k * k <= m as u64 {
            return m;
        }
        m += 1 + m / 1000;
    }
    m
}

pub fn pc_based_bound(ps: &PointSet, alpha: f64) -> Result<PcBoundReport> {
    pc_based_bound_with_k(ps, alpha, None)
}

/// As [`pc_based_bound`], optionally with an explicit `K` in the window
/// `[N^(2 alpha/5)/2, N^(2 alpha/5)]`.
pub fn pc_based_bound_with_k(ps: &PointSet, alpha: f64, k: Option<u64>) -> Result<PcBoundReport> {
    let values = ps.values()?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let n = values.len();
    if n == 0 {
        return Err(Error::InvalidArgument("bound of an empty set".into()));
    }
    let k = match k {
        Some(k) => {
            let (lo, hi) = pc_window(n, alpha);
            if (k as f64) < lo - 1e-9 || (k as f64) > hi + 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "K = {k} lies outside the window [{lo}, {hi}]"
                )));
            }
            k
        }
        None => default_pc_k(n, alpha),
    };
    let k_squared = k * k;
    if k == 0 || 2 * k_squared > n as u64 {
        return Err(Error::WindowTooSmall {
            n,
            alpha,
            k_squared,
            min_n: min_n_for_window(n, alpha),
        });
    }
    let counter = SortedCounter::new(values);
    let f_value = deviation_from_counter(&counter, k_squared as usize, alpha).value;
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let nf = n as f64;
    let measured = nf.powf(alpha) * star_from_sorted(&sorted).0;
    let bound = 5.0 * nf.powf(1.0 - alpha / 5.0).max((nf.powf(alpha) * f_value).sqrt());
    let satisfied = measured <= bound;
    Ok(PcBoundReport {
        n,
        alpha,
        k,
        k_squared,
        f_value,
        bound,
        measured,
        satisfied,
        below_n0_candidate: !satisfied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Constant;
    use crate::sequences::{generate, SequenceSpec};
    use proptest::prelude::*;

    fn pts(v: &[f64]) -> PointSet {
        PointSet::from_values(v.to_vec()).unwrap()
    }

    /// Sup over anchored intervals `[0,b)` and `[0,b]` with `b` at the points
    /// and 1.
    fn star_oracle(v: &[f64]) -> f64 {
        let n = v.len() as f64;
        let mut best: f64 = 0.0;
        for &b in v.iter().chain(std::iter::once(&1.0)) {
            let open = v.iter().filter(|&&x| x < b).count() as f64;
            let closed = v.iter().filter(|&&x| x <= b).count() as f64;
            best = best.max(b - open / n).max(closed / n - b);
        }
        best
    }

    /// Sup over all intervals with endpoints in {0, points, 1} and every
    /// open/closed combination.
    fn extreme_oracle(v: &[f64]) -> f64 {
        let n = v.len() as f64;
        let mut ends: Vec<f64> = v.to_vec();
        ends.push(0.0);
        ends.push(1.0);
        let mut best: f64 = 0.0;
        for &a in &ends {
            for &b in &ends {
                if b < a {
                    continue;
                }
                let len = b - a;
                let cc = v.iter().filter(|&&x| a <= x && x <= b).count() as f64;
                let oo = v.iter().filter(|&&x| a < x && x < b).count() as f64;
                best = best.max(cc / n - len).max(len - oo / n);
            }
        }
        best
    }

    #[test]
    fn star_examples() {
        assert_eq!(star_discrepancy_1d(&pts(&[0.5])).unwrap().star, 0.5);
        assert_eq!(star_discrepancy_1d(&pts(&[0.25, 0.75])).unwrap().star, 0.25);
        let ps = generate(&SequenceSpec::kronecker(Constant::GoldenMean), 5).unwrap();
        let r = star_discrepancy_1d(&ps).unwrap();
        assert!((r.star - star_oracle(ps.coords())).abs() < 1e-15);
    }

    #[test]
    fn extreme_examples() {
        assert_eq!(extreme_discrepancy_1d(&pts(&[0.5])).unwrap(), 1.0);
        assert_eq!(extreme_oracle(&[0.5]), 1.0);
        let e = extreme_discrepancy_1d(&PointSet::equispaced(8, 1.0 / 16.0)).unwrap();
        assert!((e - 1.0 / 8.0).abs() < 1e-15);
        assert_eq!(extreme_discrepancy_1d(&pts(&[0.25, 0.75])).unwrap(), 0.5);
        assert_eq!(extreme_oracle(&[0.25, 0.75]), 0.5);
    }

    #[test]
    fn witness_attains_the_value() {
        let ps = generate(&SequenceSpec::kronecker(Constant::Sqrt2), 37).unwrap();
        let r = star_discrepancy_1d(&ps).unwrap();
        let w = &r.witness;
        let local = (w.count as f64 / 37.0 - w.volume).abs();
        assert!((local - r.star).abs() < 1e-15);
    }

    #[test]
    fn prefixes_match_direct_computation() {
        let ps = generate(&SequenceSpec::van_der_corput(3), 300).unwrap();
        let pre = star_discrepancy_prefixes(&ps).unwrap();
        for n in [1, 2, 7, 64, 299, 300] {
            let direct = star_discrepancy_1d(&ps.prefix(n)).unwrap().star;
            assert!((pre[n - 1] - direct).abs() < 1e-15, "n={n}");
        }
    }

    #[test]
    fn md_single_point() {
        let ps = PointSet::from_coords(2, vec![0.5, 0.5]).unwrap();
        let r = star_discrepancy_md(&ps).unwrap();
        assert!((r.star - 0.75).abs() < 1e-15);
        let tiny = PointSet::from_coords(2, vec![1e-9, 1e-9]).unwrap();
        assert!(star_discrepancy_md(&tiny).unwrap().star > 1.0 - 1e-8);
    }

    #[test]
    fn md_probe_is_lower_bound() {
        let spec: SequenceSpec = "kronecker:z=sqrt2,sqrt3".parse().unwrap();
        let ps = generate(&spec, 500).unwrap();
        let exact = star_discrepancy_md(&ps).unwrap();
        let probe = star_discrepancy_probe(&ps, 4000, 1);
        assert!(probe <= exact.star + 1e-15);
        assert!(probe > 0.5 * exact.star);
    }

    #[test]
    fn md_budget_refusal() {
        let ps = generate(&"random:seed=2,d=3".parse().unwrap(), 400).unwrap();
        match star_discrepancy_md_with_budget(&ps, 1e6) {
            Err(Error::BudgetExceeded { suggested_n, .. }) => assert!(suggested_n < 400),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gap_bound_equispaced() {
        let n = 16;
        let r = gap_based_bound(&PointSet::equispaced(n, 0.0)).unwrap();
        assert_eq!(r.k, 1);
        assert!((r.epsilon - 1.0).abs() < 1e-12);
        assert!((r.r + 1.0).abs() < 1e-12);
        assert!((r.bound - 3.0 / n as f64).abs() < 1e-12);
        assert!(r.satisfied);
    }

    #[test]
    fn gap_bound_van_der_corput_and_golden_mean() {
        let ps = generate(&SequenceSpec::van_der_corput(2), 1024).unwrap();
        let r = gap_based_bound(&ps).unwrap();
        assert!(r.satisfied);
        assert!(r.bound * 1024.0 / (1024f64).ln() < 10.0, "{r:?}");
        let ps = generate(&SequenceSpec::kronecker(Constant::GoldenMean), 10_000).unwrap();
        assert!(gap_based_bound(&ps).unwrap().satisfied);
        let ps = generate(&SequenceSpec::random(1), 1000).unwrap();
        assert!(matches!(gap_based_bound(&ps), Err(Error::TooManyGapLengths { .. })));
    }

    #[test]
    fn pc_bound_examples() {
        let ps = generate(&SequenceSpec::kronecker(Constant::GoldenMean), 10_000).unwrap();
        let r = pc_based_bound(&ps, 0.8).unwrap();
        assert!(r.satisfied, "{r:?}");
        assert_eq!(r.k, default_pc_k(10_000, 0.8));
        let r = pc_based_bound(&PointSet::equispaced(1000, 0.0), 1.0).unwrap();
        assert!(r.satisfied);
        assert!(r.f_value > 100.0);
        // K = floor(6^0.4) = 2 and 2 K^2 > 6
        match pc_based_bound(&PointSet::equispaced(6, 0.0), 1.0) {
            Err(Error::WindowTooSmall { min_n, .. }) => {
                let k = default_pc_k(min_n, 1.0);
                assert!(2 * k * k <= min_n as u64);
            }
            other => panic!("{other:?}"),
        }
        assert!(pc_based_bound_with_k(&ps, 0.8, Some(1)).is_err());
    }

    proptest! {
        #[test]
        fn star_matches_oracle(v in prop::collection::vec(0.0f64..1.0, 1..120)) {
            let r = star_discrepancy_1d(&pts(&v)).unwrap();
            prop_assert!((r.star - star_oracle(&v)).abs() < 1e-14);
            let e = r.extreme.unwrap();
            prop_assert!((e - extreme_oracle(&v)).abs() < 1e-14);
            prop_assert!(r.star <= e + 1e-15 && e <= 2.0 * r.star + 1e-15);
            prop_assert!(r.star >= 0.5 / v.len() as f64 - 1e-15 && r.star <= 1.0);
        }

        #[test]
        fn star_is_reflection_and_permutation_invariant(v in prop::collection::vec(0.001f64..0.999, 1..200)) {
            let a = star_discrepancy_1d(&pts(&v)).unwrap().star;
            let refl: Vec<f64> = v.iter().map(|x| 1.0 - x).collect();
            let b = star_discrepancy_1d(&pts(&refl)).unwrap().star;
            prop_assert!((a - b).abs() < 1e-14);
            let mut rev = v.clone();
            rev.reverse();
            prop_assert_eq!(star_discrepancy_1d(&pts(&rev)).unwrap().star, a);
        }

        #[test]
        fn md_matches_brute_force(d in 2usize..4, v in prop::collection::vec(0.0f64..1.0, 2..60)) {
            let m = v.len() / d * d;
            prop_assume!(m >= d);
            let ps = PointSet::from_coords(d, v[..m].to_vec()).unwrap();
            let exact = star_discrepancy_md(&ps).unwrap().star;
            // every grid corner, open and closed
            let n = ps.len();
            let axes: Vec<Vec<f64>> = (0..d).map(|k| {
                let mut g: Vec<f64> = ps.points().map(|p| p[k]).collect();
                g.push(1.0);
                g
            }).collect();
            let mut best: f64 = 0.0;
            let total: usize = axes.iter().map(|a| a.len()).product();
            for idx in 0..total {
                let mut rest = idx;
                let b: Vec<f64> = axes.iter().map(|a| { let v = a[rest % a.len()]; rest /= a.len(); v }).collect();
                let vol: f64 = b.iter().product();
                let open = ps.points().filter(|p| p.iter().zip(&b).all(|(x, y)| x < y)).count();
                let closed = ps.points().filter(|p| p.iter().zip(&b).all(|(x, y)| x <= y)).count();
                best = best.max(vol - open as f64 / n as f64).max(closed as f64 / n as f64 - vol);
            }
            prop_assert!((exact - best).abs() < 1e-14, "{} vs {}", exact, best);
        }
    }
}
