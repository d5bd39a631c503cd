//! Torus pair counts under the max norm and the statistics built on them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::{generate, PointSet, SequenceSpec};

/// How a pair distance is compared with the radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    LessEqual,
    Less,
}

impl Comparison {
    pub fn from_strict(strict: bool) -> Self {
        if strict {
            Comparison::Less
        } else {
            Comparison::LessEqual
        }
    }

    #[inline(always)]
    pub fn holds(self, d: f64, r: f64) -> bool {
        match self {
            Comparison::LessEqual => d <= r,
            Comparison::Less => d < r,
        }
    }
}

/// One-dimensional torus distance, in the form every counter uses.
#[inline(always)]
pub fn torus_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

/// Max-norm torus distance between two points.
#[inline]
pub fn torus_distance_max(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| torus_distance(x, y))
        .fold(0.0, f64::max)
}

fn check_radius(radius: f64) -> Result<()> {
    if radius.is_finite() && radius >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "radius must be finite and non-negative, got {radius}"
        )))
    }
}

/// Number of ordered pairs `(l, m)`, `l != m`, at max-norm torus distance
/// within `radius`.
pub fn pair_count(ps: &PointSet, radius: f64, cmp: Comparison) -> Result<u64> {
    check_radius(radius)?;
    if ps.dimension() == 1 {
        Ok(SortedCounter::new(ps.values()?).count(radius, cmp))
    } else {
        Ok(grid_count(ps, radius, cmp))
    }
}

/// Sorted one-dimensional points, reused across radii.
#[derive(Clone, Debug)]
pub struct SortedCounter {
    x: Vec<f64>,
}

impl SortedCounter {
    pub fn new(values: &[f64]) -> Self {
        let mut x = values.to_vec();
        x.sort_unstable_by(f64::total_cmp);
        Self { x }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Ordered pair count. For `j < i` in sorted order the torus distance is
    /// `min(d, 1 - d)` with `d = x_i - x_j`; the `j` with `d` within range
    /// form a suffix of `0..i` and those with `1 - d` within range a prefix,
    /// and both boundaries only move forward as `i` grows.
    pub fn count(&self, r: f64, cmp: Comparison) -> u64 {
        match cmp {
            Comparison::LessEqual => self.count_with(r, |d, r| d <= r),
            Comparison::Less => self.count_with(r, |d, r| d < r),
        }
    }

    #[inline(always)]
    fn count_with(&self, r: f64, within: impl Fn(f64, f64) -> bool) -> u64 {
        let x = &self.x;
        let mut lo = 0usize;
        let mut wrap = 0usize;
        let mut total = 0u64;
        for i in 0..x.len() {
            let xi = x[i];
            while lo < i && !within(xi - x[lo], r) {
                lo += 1;
            }
            while wrap < i && within(1.0 - (xi - x[wrap]), r) {
                wrap += 1;
            }
            // the prefix may have been advanced past i by an earlier point
            let t = wrap.min(i);
            let near = i - lo;
            let overlap = t.saturating_sub(lo);
            total += (near + t - overlap) as u64;
        }
        2 * total
    }

    fn few_distinct_gaps(&self) -> bool {
        let mut g: Vec<f64> = self.x.windows(2).map(|w| w[1] - w[0]).collect();
        g.sort_unstable_by(f64::total_cmp);
        let mut distinct = 0;
        let mut last = f64::NEG_INFINITY;
        for d in g {
            if d - last > 1e-9 * d.abs().max(1e-300) {
                distinct += 1;
                if distinct > 16 {
                    return false;
                }
                last = d;
            }
        }
        true
    }

    /// Strict counts at the radii `s / scale`, `s = 1..=k`. Agrees exactly
    /// with calling `count` at each radius.
    pub fn strict_counts_at_multiples(&self, scale: f64, k: usize) -> Vec<u64> {
        let radii: Vec<f64> = (0..=k + 1).map(|s| s as f64 / scale).collect();
        let r_max = radii[k];
        // one pass per radius costs about k N steps, binning the close pairs
        // about N^2 r_max; passes only lose on irregular data, where the
        // pointer moves are hard to predict
        let n = self.x.len() as f64;
        if !(r_max < 0.5) || n * r_max > 2.0 * k as f64 || self.few_distinct_gaps() {
            return (1..=k).map(|s| self.count(radii[s], Comparison::Less)).collect();
        }
        let x = &self.x;
        let len = x.len();
        let mut hist = vec![0u64; k + 3];
        // smallest s with d < radii[s]; d * scale is below k + 1 with a
        // relative error of 2^-53, so it is within one of the true bin
        let mut bin = |d: f64| {
            let s0 = ((d * scale) as usize).min(k);
            // SAFETY: s0 <= k, radii has k + 2 entries and hist k + 3
            unsafe {
                let s = s0 + 1 - (d < *radii.get_unchecked(s0)) as usize
                    + !(d < *radii.get_unchecked(s0 + 1)) as usize;
                *hist.get_unchecked_mut(s) += 1;
            }
        };
        let mut end = 0usize;
        for (i, &xi) in x.iter().enumerate() {
            end = end.max(i + 1);
            while end < len && x[end] - xi < r_max {
                end += 1;
            }
            for &xj in &x[i + 1..end] {
                bin(xj - xi);
            }
        }
        // pairs closer the other way round (never both ways below 1/2): the
        // partners of x_i form a suffix that shrinks as i grows
        let mut start = 0usize;
        for (i, &xi) in x.iter().enumerate() {
            start = start.max(i + 1);
            while start < len && !(1.0 - (x[start] - xi) < r_max) {
                start += 1;
            }
            if start == len {
                break;
            }
            for &xj in &x[start..] {
                bin(1.0 - (xj - xi));
            }
        }
        let mut acc = 0u64;
        (1..=k)
            .map(|s| {
                acc += hist[s];
                2 * acc
            })
            .collect()
    }
}

/// Naive O(N^2) count with the same comparison.
pub fn pair_count_naive(ps: &PointSet, radius: f64, cmp: Comparison) -> u64 {
    let n = ps.len();
    let mut total = 0u64;
    for i in 0..n {
        for j in 0..i {
            if cmp.holds(torus_distance_max(ps.point(i), ps.point(j)), radius) {
                total += 1;
            }
        }
    }
    2 * total
}

fn grid_count(ps: &PointSet, radius: f64, cmp: Comparison) -> u64 {
    let n = ps.len();
    let d = ps.dimension();
    if n < 2 {
        return 0;
    }
    let by_radius = if radius > 0.0 {
        ((1.0 / radius).floor() - 1.0).max(1.0)
    } else {
        f64::INFINITY
    };
    let by_size = ((4 * n) as f64).powf(1.0 / d as f64).floor().max(1.0);
    let g = by_radius.min(by_size) as usize;
    let cells = g.pow(d as u32);

    let cell_of = |p: &[f64]| -> usize {
        p.iter().fold(0, |acc, &x| acc * g + ((x * g as f64) as usize).min(g - 1))
    };
    let mut start = vec![0usize; cells + 1];
    let ids: Vec<usize> = ps.points().map(cell_of).collect();
    for &c in &ids {
        start[c + 1] += 1;
    }
    for c in 0..cells {
        start[c + 1] += start[c];
    }
    let mut fill = start.clone();
    let mut order = vec![0usize; n];
    for (i, &c) in ids.iter().enumerate() {
        order[fill[c]] = i;
        fill[c] += 1;
    }

    // distinct neighbour offsets per axis (fewer than three when g < 3)
    let steps: Vec<usize> = {
        let mut s = vec![0, 1 % g, (g - 1) % g];
        s.sort_unstable();
        s.dedup();
        s
    };

    let count_cell = |c: usize| -> u64 {
        let mut coords = vec![0usize; d];
        let mut rest = c;
        for k in (0..d).rev() {
            coords[k] = rest % g;
            rest /= g;
        }
        let mut neighbours = Vec::with_capacity(steps.len().pow(d as u32));
        let mut idx = vec![0usize; d];
        loop {
            let nb = (0..d).fold(0, |acc, k| acc * g + (coords[k] + steps[idx[k]]) % g);
            neighbours.push(nb);
            let mut k = 0;
            while k < d {
                idx[k] += 1;
                if idx[k] < steps.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == d {
                break;
            }
        }
        neighbours.sort_unstable();
        neighbours.dedup();
        let mut total = 0u64;
        for &i in &order[start[c]..start[c + 1]] {
            let p = ps.point(i);
            for &nb in &neighbours {
                for &j in &order[start[nb]..start[nb + 1]] {
                    if j != i && cmp.holds(torus_distance_max(p, ps.point(j)), radius) {
                        total += 1;
                    }
                }
            }
        }
        total
    };
    (0..cells).into_par_iter().map(count_cell).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCorrelationPoint {
    pub n: usize,
    pub s: f64,
    pub alpha: f64,
    pub dimension: usize,
    pub radius: f64,
    pub raw_count: u64,
    pub ball_volume: f64,
    pub value: f64,
    /// The radius reached 1/2, so the clipped volume saturates.
    pub saturated: bool,
}

fn check_alpha(alpha: f64, d: usize) -> Result<()> {
    let max = 1.0 / d as f64;
    if alpha > 0.0 && alpha <= max * (1.0 + 1e-12) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "alpha must lie in (0, 1/d] = (0, {max}], got {alpha}"
        )))
    }
}

fn check_s(s: f64) -> Result<()> {
    if s.is_finite() && s > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("s must be positive, got {s}")))
    }
}

/// `#{pairs within s N^-alpha} / (N^2 vol B(0, s N^-alpha))` with the `<=`
/// comparison.
pub fn pair_correlation(ps: &PointSet, s: f64, alpha: f64) -> Result<PairCorrelationPoint> {
    pair_correlation_with(ps, s, alpha, Comparison::LessEqual)
}

pub fn pair_correlation_with(
    ps: &PointSet,
    s: f64,
    alpha: f64,
    cmp: Comparison,
) -> Result<PairCorrelationPoint> {
    check_s(s)?;
    check_alpha(alpha, ps.dimension())?;
    let radius = s * (ps.len() as f64).powf(-alpha);
    let raw_count = pair_count(ps, radius, cmp)?;
    Ok(correlation_point(ps.len(), ps.dimension(), s, alpha, radius, raw_count))
}

fn correlation_point(
    n: usize,
    d: usize,
    s: f64,
    alpha: f64,
    radius: f64,
    raw_count: u64,
) -> PairCorrelationPoint {
    let ball_volume = (2.0 * radius).min(1.0).powi(d as i32);
    let nf = n as f64;
    PairCorrelationPoint {
        n,
        s,
        alpha,
        dimension: d,
        radius,
        raw_count,
        ball_volume,
        value: raw_count as f64 / (nf * nf * ball_volume),
        saturated: radius >= 0.5,
    }
}

/// Least-squares fit of `log|value - 1|` against `log N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceFit {
    pub s: f64,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub r_squared: Option<f64>,
    pub first_deviation: f64,
    pub last_deviation: f64,
    /// Points with `value == 1` exactly carry no logarithm and are skipped.
    pub points_used: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumberVarianceCurve {
    pub alpha: f64,
    pub points: Vec<PairCorrelationPoint>,
    pub fits: Vec<ConvergenceFit>,
}

/// Ordinary least squares `y = a + b x`; returns `(b, a, r^2)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64, f64)> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some((slope, my - slope * mx, r2))
}

pub fn fit_deviation(s: f64, points: &[&PairCorrelationPoint]) -> ConvergenceFit {
    let dev: Vec<f64> = points.iter().map(|p| (p.value - 1.0).abs()).collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .zip(&dev)
        .filter(|(_, &d)| d > 0.0)
        .map(|(p, &d)| ((p.n as f64).ln(), d.ln()))
        .unzip();
    let fit = linear_fit(&xs, &ys);
    ConvergenceFit {
        s,
        slope: fit.map(|f| f.0),
        intercept: fit.map(|f| f.1),
        r_squared: fit.map(|f| f.2),
        first_deviation: dev.first().copied().unwrap_or(f64::NAN),
        last_deviation: dev.last().copied().unwrap_or(f64::NAN),
        points_used: xs.len(),
    }
}

/// Pair correlations of the first `N` points for every `(N, s)`, with a
/// convergence fit per `s`.
pub fn number_variance_curve(
    spec: &SequenceSpec,
    alpha: f64,
    s_values: &[f64],
    n_list: &[usize],
) -> Result<NumberVarianceCurve> {
    number_variance_curve_with(spec, alpha, s_values, n_list, Comparison::LessEqual)
}

pub fn number_variance_curve_with(
    spec: &SequenceSpec,
    alpha: f64,
    s_values: &[f64],
    n_list: &[usize],
    cmp: Comparison,
) -> Result<NumberVarianceCurve> {
    check_alpha(alpha, spec.dimension())?;
    if s_values.is_empty() || n_list.is_empty() {
        return Err(Error::InvalidArgument("s grid and N list must be non-empty".into()));
    }
    for &s in s_values {
        check_s(s)?;
    }
    if n_list[0] == 0 || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "N list must be positive and strictly increasing".into(),
        ));
    }
    let full = generate(spec, *n_list.last().unwrap())?;
    let cells: Vec<(usize, f64)> = n_list
        .iter()
        .flat_map(|&n| s_values.iter().map(move |&s| (n, s)))
        .collect();
    let points = cells
        .par_iter()
        .map(|&(n, s)| pair_correlation_with(&full.prefix(n), s, alpha, cmp))
        .collect::<Result<Vec<_>>>()?;
    let fits = s_values
        .iter()
        .map(|&s| {
            let row: Vec<&PairCorrelationPoint> = points.iter().filter(|p| p.s == s).collect();
            fit_deviation(s, &row)
        })
        .collect();
    Ok(NumberVarianceCurve {
        alpha,
        points,
        fits,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationStatistic {
    pub k: usize,
    pub n: usize,
    pub alpha: f64,
    /// `max_s |count(< s/N^alpha) / (2s) - N^(2-alpha)|`.
    pub value: f64,
    /// The maximizing `s`.
    pub argmax: usize,
    /// The term for each `s = 1..K`.
    pub terms: Vec<f64>,
}

/// `F(K, N)` with the strict comparison.
pub fn deviation_statistic(ps: &PointSet, k: usize, alpha: f64) -> Result<DeviationStatistic> {
    let values = ps.values()?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let n = values.len();
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument("need K >= 1 and N >= 1".into()));
    }
    // a single point has no pairs and every K gives the same value
    if n > 1 && 2 * k > n {
        return Err(Error::InvalidArgument(format!(
            "K = {k} exceeds N/2 = {}",
            n as f64 / 2.0
        )));
    }
    let counter = SortedCounter::new(values);
    Ok(deviation_from_counter(&counter, k, alpha))
}

pub(crate) fn deviation_from_counter(counter: &SortedCounter, k: usize, alpha: f64) -> DeviationStatistic {
    let n = counter.len();
    let nf = n as f64;
    let scale = nf.powf(alpha);
    let target = nf.powf(2.0 - alpha);
    let terms: Vec<f64> = counter
        .strict_counts_at_multiples(scale, k)
        .into_iter()
        .enumerate()
        .map(|(i, c)| (c as f64 / (2.0 * (i + 1) as f64) - target).abs())
        .collect();
    let (argmax, value) = terms
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &t)| if t > best.1 { (i, t) } else { best });
    DeviationStatistic {
        k,
        n,
        alpha,
        value,
        argmax: argmax + 1,
        terms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Constant;
    use proptest::prelude::*;

    fn pts(v: &[f64]) -> PointSet {
        PointSet::from_values(v.to_vec()).unwrap()
    }

    #[test]
    fn two_antipodal_points() {
        let ps = pts(&[0.0, 0.5]);
        assert_eq!(pair_count(&ps, 0.5, Comparison::LessEqual).unwrap(), 2);
        assert_eq!(pair_count(&ps, 0.5, Comparison::Less).unwrap(), 0);
    }

    #[test]
    fn golden_mean_fast_equals_naive() {
        let ps = generate(&SequenceSpec::kronecker(Constant::GoldenMean), 100).unwrap();
        for cmp in [Comparison::LessEqual, Comparison::Less] {
            assert_eq!(pair_count(&ps, 0.003, cmp).unwrap(), pair_count_naive(&ps, 0.003, cmp));
        }
    }

    #[test]
    fn correlation_examples() {
        let p = pair_correlation(&pts(&[0.0, 0.5]), 1.0, 1.0).unwrap();
        assert_eq!((p.radius, p.ball_volume, p.raw_count, p.value), (0.5, 1.0, 2, 0.5));
        assert!(p.saturated);

        // equispaced points: both neighbours lie within 1.5/N
        let n = 50;
        let p = pair_correlation(&PointSet::equispaced(n, 0.0), 1.5, 1.0).unwrap();
        assert_eq!(p.raw_count, 2 * n as u64);
        assert!((p.value - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        let ps = pts(&[0.1, 0.2]);
        assert!(pair_correlation(&ps, 0.0, 1.0).is_err());
        assert!(pair_correlation(&ps, 1.0, 1.5).is_err());
        let ps2 = generate(&"random:seed=1,d=2".parse().unwrap(), 10).unwrap();
        assert!(pair_correlation(&ps2, 1.0, 0.6).is_err());
        assert!(pair_correlation(&ps2, 1.0, 0.5).is_ok());
        assert!(pair_count(&ps, -1.0, Comparison::Less).is_err());
    }

    #[test]
    fn one_dimensional_consistency_with_raw_statistic() {
        let ps = generate(&SequenceSpec::random(5), 1000).unwrap();
        let n = 1000.0;
        for s in [0.5, 1.0, 3.0] {
            let p = pair_correlation(&ps, s, 1.0).unwrap();
            let f_n = p.raw_count as f64 / n;
            assert!((p.value - f_n / (2.0 * s)).abs() < 1e-12);
        }
    }

    #[test]
    fn deviation_examples() {
        // radius 10^-0.9 covers both neighbours at spacing 1/10: 20 ordered pairs
        let d = deviation_statistic(&PointSet::equispaced(10, 0.0), 1, 0.9).unwrap();
        assert!((d.value - (10f64.powf(1.1) - 10.0)).abs() < 1e-12, "{d:?}");
        let d = deviation_statistic(&pts(&[0.4]), 3, 0.7).unwrap();
        assert_eq!(d.value, 1.0);
        assert!(deviation_statistic(&PointSet::equispaced(10, 0.0), 6, 1.0).is_err());
    }

    #[test]
    fn deviation_matches_brute_force() {
        let ps = generate(&SequenceSpec::kronecker(Constant::GoldenMean), 1000).unwrap();
        let d = deviation_statistic(&ps, 10, 0.8).unwrap();
        let n = 1000f64;
        let brute = (1..=10)
            .map(|s| {
                let c = pair_count_naive(&ps, s as f64 / n.powf(0.8), Comparison::Less);
                (c as f64 / (2.0 * s as f64) - n.powf(1.2)).abs()
            })
            .fold(0.0, f64::max);
        assert_eq!(d.value, brute);
    }

    #[test]
    fn curve_has_one_row_per_cell() {
        let c = number_variance_curve(
            &SequenceSpec::kronecker(Constant::GoldenMean),
            0.8,
            &[1.0, 2.0],
            &[100, 1000, 10000],
        )
        .unwrap();
        assert_eq!(c.points.len(), 6);
        assert_eq!(c.fits.len(), 2);
        assert!(c.fits.iter().all(|f| f.slope.is_some()));
    }

    #[test]
    fn linear_fit_recovers_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [3.0, 5.0, 7.0, 9.0];
        let (b, a, r2) = linear_fit(&x, &y).unwrap();
        assert!((b - 2.0).abs() < 1e-12 && (a - 1.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn fast_count_equals_naive(
            d in 1usize..4,
            v in prop::collection::vec(0.0f64..1.0, 2..240),
            r in 0.0f64..0.7,
            strict in any::<bool>(),
        ) {
            let m = v.len() / d * d;
            prop_assume!(m >= d);
            let ps = PointSet::from_coords(d, v[..m].to_vec()).unwrap();
            let cmp = Comparison::from_strict(strict);
            prop_assert_eq!(pair_count(&ps, r, cmp).unwrap(), pair_count_naive(&ps, r, cmp));
        }

        #[test]
        fn count_is_symmetric_and_monotone(v in prop::collection::vec(0.0f64..1.0, 2..200), r in 0.0f64..0.5, c in 0.0f64..1.0) {
            let ps = pts(&v);
            let base = pair_count(&ps, r, Comparison::LessEqual).unwrap();
            prop_assert_eq!(base % 2, 0);
            let mut rev = v.clone();
            rev.reverse();
            prop_assert_eq!(pair_count(&pts(&rev), r, Comparison::LessEqual).unwrap(), base);
            prop_assert!(pair_count(&ps, r * 1.1 + 1e-6, Comparison::LessEqual).unwrap() >= base);
            // rotation changes distances by rounding only, so compare away from the boundary
            let rot: Vec<f64> = v.iter().map(|x| crate::real::fold_unit((x + c) % 1.0)).collect();
            let a = pair_count(&ps, r, Comparison::LessEqual).unwrap();
            let lo = pair_count(&pts(&rot), r - 1e-12, Comparison::LessEqual).unwrap();
            let hi = pair_count(&pts(&rot), r + 1e-12, Comparison::LessEqual).unwrap();
            prop_assert!(lo <= a && a <= hi);
        }

        #[test]
        fn multiples_match_single_radius_counts(
            v in prop::collection::vec(0.0f64..1.0, 1..300),
            dup in 0usize..4,
            scale in 1.0f64..400.0,
            k in 1usize..60,
        ) {
            let mut v = v;
            for i in 0..dup.min(v.len()) {
                let x = v[i];
                v.push(x);
            }
            let c = SortedCounter::new(&v);
            let fast = c.strict_counts_at_multiples(scale, k);
            let slow: Vec<u64> = (1..=k).map(|s| c.count(s as f64 / scale, Comparison::Less)).collect();
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn deviation_is_monotone_in_k(seed in any::<u64>(), k in 1usize..20) {
            let ps = generate(&SequenceSpec::random(seed), 100).unwrap();
            let a = deviation_statistic(&ps, k, 0.9).unwrap();
            let b = deviation_statistic(&ps, k + 1, 0.9).unwrap();
            prop_assert!(b.value >= a.value);
        }
    }
}
