//! Verification suites that check the quantitative statements linking gaps,
//! pair correlations and discrepancy on concrete sequences.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::continued_fractions::{cf_expand, ostrowski_expand, CfExpansion};
use crate::discrepancy::{gap_based_bound, pc_based_bound, star_discrepancy_prefixes};
use crate::error::{Error, Result};
use crate::gaps::{
    check_obstructions, fibonacci_up_to, three_gap_predict, GapLabel, Indication, IncrementalGaps,
};
use crate::pair_correlation::{number_variance_curve, pair_correlation, pair_count, Comparison};
use crate::real::{Constant, Real};
use crate::sequences::{generate, Component, SequenceSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteId {
    ThreeGap,
    Ostrowski,
    NumberVariance,
    PpcFailure,
    GapBound,
    PcBound,
    VdcLowDiscrepancy,
    KroneckerLowDiscrepancy,
    Obstruction,
}

impl SuiteId {
    pub const ALL: [SuiteId; 9] = [
        SuiteId::ThreeGap,
        SuiteId::Ostrowski,
        SuiteId::NumberVariance,
        SuiteId::PpcFailure,
        SuiteId::GapBound,
        SuiteId::PcBound,
        SuiteId::VdcLowDiscrepancy,
        SuiteId::KroneckerLowDiscrepancy,
        SuiteId::Obstruction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::ThreeGap => "three_gap",
            SuiteId::Ostrowski => "ostrowski",
            SuiteId::NumberVariance => "number_variance",
            SuiteId::PpcFailure => "ppc_failure",
            SuiteId::GapBound => "gap_bound",
            SuiteId::PcBound => "pc_bound",
            SuiteId::VdcLowDiscrepancy => "vdc_low_discrepancy",
            SuiteId::KroneckerLowDiscrepancy => "kronecker_low_discrepancy",
            SuiteId::Obstruction => "obstruction",
        }
    }

    /// Largest N used when no `--max-n` is given.
    pub fn default_max_n(self) -> usize {
        match self {
            SuiteId::ThreeGap => 2000,
            SuiteId::Ostrowski => 100_000,
            SuiteId::NumberVariance => 100_000,
            SuiteId::PpcFailure => 100_000,
            SuiteId::GapBound => 1 << 14,
            SuiteId::PcBound => 100_000,
            SuiteId::VdcLowDiscrepancy => 100_000,
            SuiteId::KroneckerLowDiscrepancy => 100_000,
            SuiteId::Obstruction => 1_000_000,
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = SuiteId::ALL.iter().map(|i| i.name()).collect();
                Error::parse("suite", s, format!("expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub name: String,
    pub status: CaseStatus,
    /// Distance to the threshold; positive means satisfied.
    pub margin: Option<f64>,
    pub detail: String,
}

impl CaseResult {
    fn new(name: impl Into<String>, status: CaseStatus, margin: Option<f64>, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status,
            margin,
            detail: detail.into(),
        }
    }

    fn check(name: impl Into<String>, ok: bool, margin: f64, detail: impl Into<String>) -> Self {
        let status = if ok { CaseStatus::Pass } else { CaseStatus::Fail };
        Self::new(name, status, Some(margin), detail)
    }

    /// For asymptotic statements, where a miss is not a violation.
    fn trend(name: impl Into<String>, ok: bool, margin: f64, detail: impl Into<String>) -> Self {
        let status = if ok { CaseStatus::Pass } else { CaseStatus::Inconclusive };
        Self::new(name, status, Some(margin), detail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationSuiteResult {
    pub suite: SuiteId,
    pub cases: Vec<CaseResult>,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_ms: Option<u64>,
}

impl VerificationSuiteResult {
    pub fn new(suite: SuiteId, cases: Vec<CaseResult>) -> Self {
        let count = |s| cases.iter().filter(|c| c.status == s).count();
        Self {
            suite,
            passed: count(CaseStatus::Pass),
            failed: count(CaseStatus::Fail),
            inconclusive: count(CaseStatus::Inconclusive),
            cases,
            runtime_ms: None,
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub trials: usize,
    pub max_n: Option<usize>,
    pub seed: u64,
    pub timings: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            trials: 20,
            max_n: None,
            seed: 20240601,
            timings: false,
        }
    }
}

pub fn run_suite(id: SuiteId, opts: &SuiteOptions) -> Result<VerificationSuiteResult> {
    if opts.trials == 0 {
        return Err(Error::InvalidArgument("--trials must be at least 1".into()));
    }
    let max_n = opts.max_n.unwrap_or_else(|| id.default_max_n());
    if max_n < 2 {
        return Err(Error::InvalidArgument("--max-n must be at least 2".into()));
    }
    let start = Instant::now();
    let cases = match id {
        SuiteId::ThreeGap => three_gap_suite(opts, max_n)?,
        SuiteId::Ostrowski => ostrowski_suite(opts, max_n)?,
        SuiteId::NumberVariance => number_variance_suite(opts, max_n)?,
        SuiteId::PpcFailure => ppc_failure_suite(max_n)?,
        SuiteId::GapBound => gap_bound_suite(max_n)?,
        SuiteId::PcBound => pc_bound_suite(opts, max_n)?,
        SuiteId::VdcLowDiscrepancy => vdc_low_discrepancy_suite(max_n)?,
        SuiteId::KroneckerLowDiscrepancy => kronecker_low_discrepancy_suite(max_n)?,
        SuiteId::Obstruction => obstruction_suite(max_n)?,
    };
    let mut result = VerificationSuiteResult::new(id, cases);
    if opts.timings {
        result.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(result)
}

/// Uniform draws in `(0, 1)`, away from the ends.
pub fn random_rotations(seed: u64, count: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(0.001..0.999)).collect()
}

/// Worst violation of the three-gap law over prefixes `2..=max_n` of
/// `{n z}`: `(max distinct lengths, max |L3 - L1 - L2|)`.
pub fn three_gap_scan(z: &Component, max_n: usize) -> Result<(usize, f64)> {
    let spec = SequenceSpec::Kronecker { z: vec![*z] };
    let ps = generate(&spec, max_n)?;
    let mut inc = IncrementalGaps::new();
    let mut worst_k = 0;
    let mut worst_sum: f64 = 0.0;
    for (i, &x) in ps.coords().iter().enumerate() {
        inc.insert(x);
        if i == 0 {
            continue;
        }
        let k = inc.distinct_count(crate::gaps::DEFAULT_GROUPING_TOLERANCE);
        worst_k = worst_k.max(k);
        if k == 3 {
            let l = inc.spectrum(crate::gaps::DEFAULT_GROUPING_TOLERANCE).lengths();
            worst_sum = worst_sum.max((l[2] - l[0] - l[1]).abs());
        }
    }
    Ok((worst_k, worst_sum))
}

fn three_gap_suite(opts: &SuiteOptions, max_n: usize) -> Result<Vec<CaseResult>> {
    let zs = random_rotations(opts.seed, opts.trials);
    let mut cases: Vec<CaseResult> = zs
        .par_iter()
        .map(|&z| -> Result<CaseResult> {
            let (k, sum_err) = three_gap_scan(&Component::Decimal(z), max_n)?;
            Ok(CaseResult::check(
                format!("z={z:?}"),
                k <= 3 && sum_err <= 1e-12,
                1e-12 - sum_err,
                format!("max distinct lengths {k}, max |L3-L1-L2| {sum_err:.3e} for N=2..{max_n}"),
            ))
        })
        .collect::<Result<_>>()?;
    for c in [Constant::GoldenMean, Constant::Sqrt2] {
        let cf = cf_expand(c.real(), 60, 0.0)?;
        let limit = max_n.min(10_000);
        let ps = generate(&SequenceSpec::kronecker(c), limit)?;
        let mut inc = IncrementalGaps::new();
        let mut mismatches = 0;
        let mut first = String::new();
        for (i, &x) in ps.coords().iter().enumerate() {
            inc.insert(x);
            let n = i as u64 + 1;
            if n < 2 {
                continue;
            }
            let pred = three_gap_predict(&cf, n)?;
            if let Err(e) = pred.check_against(&inc.spectrum(crate::gaps::DEFAULT_GROUPING_TOLERANCE), 1e-12) {
                if mismatches == 0 {
                    first = format!("N={n}: {e}");
                }
                mismatches += 1;
            }
        }
        cases.push(CaseResult::check(
            format!("prediction {c}"),
            mismatches == 0,
            0.0 - mismatches as f64,
            if mismatches == 0 {
                format!("predicted lengths and multiplicities match for N=2..{limit}")
            } else {
                format!("{mismatches} mismatches, first {first}")
            },
        ));
    }
    Ok(cases)
}

/// A continued fraction of a random rotation with denominators beyond
/// `max_n`, redrawing when the binary value terminates too early.
pub fn random_expansion(rng: &mut ChaCha8Rng, max_n: usize) -> Result<CfExpansion> {
    loop {
        let z: f64 = rng.gen_range(0.001..0.999);
        let cf = cf_expand(Real::exact(z), 200, 0.0)?;
        if cf.last_convergent().q > max_n as u64 {
            return Ok(cf);
        }
    }
}

/// Number of `N` in `1..=max_n` whose Ostrowski digits fail to reconstruct
/// `N` or violate the digit constraints.
pub fn ostrowski_failures(cf: &CfExpansion, max_n: usize) -> Result<usize> {
    let mut failures = 0;
    for n in 1..=max_n as u64 {
        let o = ostrowski_expand(n, cf)?;
        if o.validate(cf).is_err() {
            failures += 1;
        }
    }
    Ok(failures)
}

fn ostrowski_suite(opts: &SuiteOptions, max_n: usize) -> Result<Vec<CaseResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut inputs: Vec<(String, CfExpansion)> = Vec::new();
    for c in [Constant::GoldenMean, Constant::Sqrt2] {
        inputs.push((c.to_string(), cf_expand(c.real(), 80, 0.0)?));
    }
    for _ in 0..opts.trials {
        let cf = random_expansion(&mut rng, max_n)?;
        inputs.push((format!("z={:?}", cf.value().to_f64()), cf));
    }
    inputs
        .par_iter()
        .map(|(name, cf)| {
            let f = ostrowski_failures(cf, max_n)?;
            Ok(CaseResult::check(
                name.clone(),
                f == 0,
                -(f as f64),
                format!("{f} failures for N=1..{max_n}"),
            ))
        })
        .collect()
}

/// `(first |F-1|, last |F-1|, fitted slope)` of a number-variance curve.
pub fn variance_trend(spec: &SequenceSpec, alpha: f64, s: f64, n_list: &[usize]) -> Result<(f64, f64, Option<f64>)> {
    let curve = number_variance_curve(spec, alpha, &[s], n_list)?;
    let fit = &curve.fits[0];
    Ok((fit.first_deviation, fit.last_deviation, fit.slope))
}

/// Mean and standard error of the pair correlation over seeds.
pub fn random_baseline(seed: u64, seeds: usize, n: usize, s: f64) -> Result<(f64, f64)> {
    let values = (0..seeds as u64)
        .into_par_iter()
        .map(|i| {
            let ps = generate(&SequenceSpec::random(seed.wrapping_add(i)), n)?;
            Ok(pair_correlation(&ps, s, 1.0)?.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0).max(1.0);
    Ok((mean, (var / m).sqrt()))
}

fn number_variance_suite(opts: &SuiteOptions, max_n: usize) -> Result<Vec<CaseResult>> {
    let mut cases = Vec::new();
    let from = (max_n / 100).max(10);
    let grid: Vec<usize> = crate::config::NGrid::Geometric { from, to: max_n, steps: 5 }.values();
    for spec in [SequenceSpec::kronecker(Constant::GoldenMean), SequenceSpec::van_der_corput(2)] {
        let (first, last, slope) = variance_trend(&spec, 0.8, 1.0, &grid)?;
        let slope_v = slope.unwrap_or(f64::NAN);
        cases.push(CaseResult::trend(
            format!("{spec} alpha=0.8 s=1"),
            last <= first / 2.0 && slope_v < 0.0,
            first / 2.0 - last,
            format!("|F-1| {first:.4e} at N={from} to {last:.4e} at N={max_n}, slope {slope_v:.4}"),
        ));
    }
    let n = (max_n / 10).max(100);
    for s in [0.5, 1.0, 2.0] {
        let (mean, se) = random_baseline(opts.seed, opts.trials.max(2), n, s)?;
        let z = (mean - 1.0).abs() / se;
        cases.push(CaseResult::trend(
            format!("random N={n} alpha=1 s={s}"),
            z <= 3.0,
            3.0 - z,
            format!("mean {mean:.5} standard error {se:.2e} over {} seeds", opts.trials.max(2)),
        ));
    }
    let spec: SequenceSpec = "kronecker:z=sqrt2,sqrt3".parse()?;
    let grid: Vec<usize> = [max_n / 100, max_n / 10, max_n].into_iter().map(|n| n.max(10)).collect();
    let curve = number_variance_curve(&spec, 0.4, &[1.0], &grid)?;
    let dev: Vec<f64> = curve.points.iter().map(|p| (p.value - 1.0).abs()).collect();
    let decreasing = dev.windows(2).all(|w| w[1] < w[0]);
    cases.push(CaseResult::trend(
        format!("{spec} alpha=0.4 s=1"),
        decreasing,
        dev[0] - dev[dev.len() - 1],
        format!(
            "|F-1| over N={grid:?}: {}",
            dev.iter().map(|d| format!("{d:.4e}")).collect::<Vec<_>>().join(", ")
        ),
    ));
    Ok(cases)
}

fn ppc_failure_suite(max_n: usize) -> Result<Vec<CaseResult>> {
    let spec = SequenceSpec::kronecker(Constant::GoldenMean);
    let fib: Vec<usize> = fibonacci_up_to(2, max_n as u64).into_iter().map(|n| n as usize).collect();
    let full = generate(&spec, *fib.last().unwrap())?;
    let nonzero: Vec<(usize, u64)> = fib
        .iter()
        .map(|&n| {
            let ps = full.prefix(n);
            let radius = 0.5 / n as f64;
            Ok((n, pair_count(&ps, radius, Comparison::LessEqual)?))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|&(_, c)| c != 0)
        .collect();
    Ok(vec![CaseResult::check(
        "phi alpha=1 s=0.5 Fibonacci N",
        nonzero.is_empty(),
        -(nonzero.len() as f64),
        format!("{} of {} Fibonacci N up to {max_n} have a pair within 0.5/N: {nonzero:?}", nonzero.len(), fib.len()),
    )])
}

/// `(1/2)(e+1)(b-1) + 2` with `e` minimal such that `N <= b^e - 1`.
pub fn vdc_epsilon_ceiling(n: usize, b: u32) -> f64 {
    let mut e = 0u32;
    while (b as u128).pow(e) - 1 < n as u128 {
        e += 1;
    }
    0.5 * (e as f64 + 1.0) * (b as f64 - 1.0) + 2.0
}

fn gap_bound_suite(max_n: usize) -> Result<Vec<CaseResult>> {
    let top = (max_n as f64).log2().floor() as u32;
    let ns: Vec<usize> = (6..=top.max(6)).map(|e| 1usize << e).collect();
    let specs = [
        SequenceSpec::van_der_corput(2),
        SequenceSpec::van_der_corput(3),
        SequenceSpec::kronecker(Constant::GoldenMean),
    ];
    let mut cases = Vec::new();
    for spec in &specs {
        let full = generate(spec, *ns.last().unwrap())?;
        for &n in &ns {
            let r = gap_based_bound(&full.prefix(n))?;
            cases.push(CaseResult::check(
                format!("{spec} N={n}"),
                r.satisfied,
                r.bound - r.measured_star,
                format!(
                    "D* {:.4e} <= ({:.3}+3)/N + {:.3} * {:.4e} = {:.4e}",
                    r.measured_star, r.r, r.epsilon, r.lengths.iter().sum::<f64>(), r.bound
                ),
            ));
            if let SequenceSpec::VanDerCorput { base, .. } = spec {
                let ceiling = vdc_epsilon_ceiling(n, *base);
                let c = r.epsilon * (*base as f64).ln() / (n as f64).ln();
                cases.push(CaseResult::trend(
                    format!("{spec} N={n} epsilon growth"),
                    r.epsilon <= ceiling,
                    ceiling - r.epsilon,
                    format!("epsilon {:.3}, implied c = epsilon ln b / ln N = {c:.3}, ceiling {ceiling:.3}", r.epsilon),
                ));
            }
        }
    }
    Ok(cases)
}

fn pc_bound_suite(opts: &SuiteOptions, max_n: usize) -> Result<Vec<CaseResult>> {
    let ns: Vec<usize> = [max_n / 100, max_n / 10, max_n].into_iter().filter(|&n| n >= 100).collect();
    let mut specs = vec![SequenceSpec::kronecker(Constant::GoldenMean), SequenceSpec::van_der_corput(2)];
    specs.extend((0..opts.trials as u64).map(|i| SequenceSpec::random(opts.seed.wrapping_add(i))));
    let jobs: Vec<(SequenceSpec, f64)> = specs
        .iter()
        .flat_map(|s| [0.6, 0.8, 1.0].map(|a| (s.clone(), a)))
        .collect();
    let mut cases = Vec::new();
    for (spec, alpha) in jobs {
        let full = generate(&spec, *ns.last().unwrap())?;
        for &n in &ns {
            let name = format!("{spec} alpha={alpha} N={n}");
            match pc_based_bound(&full.prefix(n), alpha) {
                Ok(r) => {
                    let status = if r.satisfied {
                        CaseStatus::Pass
                    } else if n < 10_000 {
                        CaseStatus::Inconclusive
                    } else {
                        CaseStatus::Fail
                    };
                    let note = if r.below_n0_candidate { " (below N0 candidate)" } else { "" };
                    cases.push(CaseResult::new(
                        name,
                        status,
                        Some(r.bound - r.measured),
                        format!(
                            "N^alpha D* {:.4e} vs bound {:.4e}, K={} F(K^2,N)={:.4e}{note}",
                            r.measured, r.bound, r.k, r.f_value
                        ),
                    ));
                }
                Err(e @ Error::WindowTooSmall { .. }) => {
                    cases.push(CaseResult::new(name, CaseStatus::Inconclusive, None, e.to_string()))
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(cases)
}

/// Largest `N D*_N - (log2 N + 2)` over all prefixes of van der Corput base 2.
pub fn vdc_discrepancy_excess(max_n: usize) -> Result<(f64, usize)> {
    let ps = generate(&SequenceSpec::van_der_corput(2), max_n)?;
    let d = star_discrepancy_prefixes(&ps)?;
    Ok(worst(&d, 1, |n| (n as f64).log2() + 2.0))
}

/// Largest `N D*_N - 3 ln N` for `10 <= N <= max_n` of the golden-mean
/// Kronecker sequence.
pub fn kronecker_discrepancy_excess(max_n: usize) -> Result<(f64, usize)> {
    let ps = generate(&SequenceSpec::kronecker(Constant::GoldenMean), max_n)?;
    let d = star_discrepancy_prefixes(&ps)?;
    Ok(worst(&d, 10, |n| 3.0 * (n as f64).ln()))
}

fn worst(d: &[f64], from: usize, threshold: impl Fn(usize) -> f64) -> (f64, usize) {
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, &v) in d.iter().enumerate().skip(from - 1) {
        let n = i + 1;
        let excess = n as f64 * v - threshold(n);
        if excess > best.0 {
            best = (excess, n);
        }
    }
    best
}

fn vdc_low_discrepancy_suite(max_n: usize) -> Result<Vec<CaseResult>> {
    let (excess, at) = vdc_discrepancy_excess(max_n)?;
    let mut cases = vec![CaseResult::check(
        "vdc:b=2 N D* <= log2 N + 2",
        excess <= 0.0,
        -excess,
        format!("largest N D* - (log2 N + 2) = {excess:.4} at N={at}, N=1..{max_n}"),
    )];
    // counting bound |N x_k - N(k)| <= e(b-1)/2 + 1 with N <= b^e - 1
    for b in [2u32, 3, 5] {
        let n = max_n.min(20_000);
        let ps = generate(&SequenceSpec::van_der_corput(b), n)?;
        let mut sorted = ps.coords().to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        let ceiling = vdc_epsilon_ceiling(n, b) - 2.0 - 0.5 * (b as f64 - 1.0) + 1.0;
        let mut worst_dev: f64 = 0.0;
        for &x in ps.coords() {
            let count = sorted.partition_point(|&y| y <= x);
            worst_dev = worst_dev.max((n as f64 * x - count as f64).abs());
        }
        cases.push(CaseResult::check(
            format!("vdc:b={b} N={n} counting bound"),
            worst_dev <= ceiling,
            ceiling - worst_dev,
            format!("max |N x_k - N(k)| = {worst_dev:.4} against e(b-1)/2 + 1 = {ceiling:.4}"),
        ));
    }
    Ok(cases)
}

fn kronecker_low_discrepancy_suite(max_n: usize) -> Result<Vec<CaseResult>> {
    let (excess, at) = kronecker_discrepancy_excess(max_n)?;
    Ok(vec![CaseResult::check(
        "kronecker:phi N D* <= 3 ln N",
        excess <= 0.0,
        -excess,
        format!("largest N D* - 3 ln N = {excess:.4} at N={at}, N=10..{max_n}"),
    )])
}

/// `q_{n+1} (||q_n phi|| + ||q_{n-1} phi||)` for every Fibonacci
/// `q_{n+1} <= max_q`.
pub fn golden_intermediate_products(max_q: u64) -> Result<Vec<(u64, f64)>> {
    let cf = cf_expand(Real::golden_mean(), 90, 0.0)?;
    let q: Vec<u64> = cf.convergents().iter().map(|c| c.q).collect();
    let mut out = Vec::new();
    for n in 1..q.len() - 1 {
        if q[n + 1] > max_q {
            break;
        }
        let v = q[n + 1] as f64 * (cf.torus_norm_of_multiple(q[n]) + cf.torus_norm_of_multiple(q[n - 1]));
        out.push((q[n + 1], v));
    }
    Ok(out)
}

fn obstruction_suite(max_n: usize) -> Result<Vec<CaseResult>> {
    let mut cases = Vec::new();
    let products = golden_intermediate_products(max_n as u64)?;
    let bad: Vec<&(u64, f64)> = products.iter().filter(|(_, v)| !(*v > 0.5 && *v < 2.0)).collect();
    let lo = products.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hi = products.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    cases.push(CaseResult::check(
        "phi 1/2 < q_{n+1}(||q_n phi|| + ||q_{n-1} phi||) < 2",
        bad.is_empty(),
        (lo - 0.5).min(2.0 - hi),
        format!("{} Fibonacci denominators up to {max_n}, range [{lo:.6}, {hi:.6}]", products.len()),
    ));

    let n_list: Vec<usize> = fibonacci_up_to(5, max_n as u64).into_iter().map(|n| n as usize).collect();
    let phi = SequenceSpec::kronecker(Constant::GoldenMean);
    if n_list.len() < 4 {
        return Err(Error::InvalidArgument("obstruction suite needs --max-n >= 21".into()));
    }
    let r = check_obstructions(&phi, 1.0, &n_list)?;
    let largest = r.classification.families.last();
    let in_band = largest.is_some_and(|f| f.label == GapLabel::AlphaIntermediate && f.k1 > 0.5 && f.k2 < 2.0);
    cases.push(CaseResult::trend(
        "phi alpha=1 obstruction 1",
        r.obstruction_1 == Indication::Indicated && in_band,
        0.0,
        format!(
            "obstruction 1 {:?}, largest family range [{:.4}, {:.4}]",
            r.obstruction_1,
            largest.map_or(f64::NAN, |f| f.k1),
            largest.map_or(f64::NAN, |f| f.k2)
        ),
    ));
    let r = check_obstructions(&phi, 0.8, &n_list)?;
    cases.push(CaseResult::trend(
        "phi alpha=0.8 no obstruction",
        r.obstruction_1 == Indication::NotIndicated && r.obstruction_2 == Indication::NotIndicated,
        0.0,
        format!("obstruction 1 {:?}, obstruction 2 {:?}", r.obstruction_1, r.obstruction_2),
    ));
    let grid: Vec<usize> = crate::config::NGrid::Geometric { from: 100, to: max_n.min(100_000).max(1000), steps: 4 }.values();
    let r = check_obstructions(&SequenceSpec::random(1), 0.8, &grid)?;
    cases.push(CaseResult::new(
        "random alpha=0.8 inconclusive",
        if r.obstruction_1 == Indication::Inconclusive { CaseStatus::Pass } else { CaseStatus::Inconclusive },
        None,
        format!("finite gap {}, distinct lengths {:?}", r.classification.finite_gap, r.classification.class_counts),
    ));
    Ok(cases)
}
