//! Low-discrepancy sequences on the circle and the torus: generation,
//! circle-gap structure, pair-correlation statistics and discrepancy bounds.
//!
//! ```
//! use lowdisc::{generate, gap_spectrum, SequenceSpec};
//!
//! let spec: SequenceSpec = "kronecker:phi".parse().unwrap();
//! let ps = generate(&spec, 4).unwrap();
//! let spectrum = gap_spectrum(&ps, 1e-9).unwrap();
//! assert_eq!(spectrum.distinct_count(), 3);
//! ```

pub mod cli;
pub mod config;
pub mod continued_fractions;
pub mod discrepancy;
pub mod error;
pub mod gaps;
pub mod pair_correlation;
pub mod real;
pub mod report;
pub mod sequences;
pub mod verify;

pub use continued_fractions::{
    cf_expand, convergents, ostrowski_expand, torus_norm, CfExpansion, Convergent,
    OstrowskiDigits, Termination,
};
pub use discrepancy::{
    extreme_discrepancy_1d, gap_based_bound, pc_based_bound, star_discrepancy_1d,
    star_discrepancy_md, star_discrepancy_prefixes, DiscrepancyReport, GapBoundReport,
    PcBoundReport,
};
pub use error::{Error, Result};
pub use gaps::{
    check_obstructions, classify_gaps, gap_spectrum, three_gap_predict, GapClassification,
    GapSpectrum, ThreeGapPrediction,
};
pub use pair_correlation::{
    deviation_statistic, number_variance_curve, pair_correlation, pair_count, Comparison,
    DeviationStatistic, PairCorrelationPoint,
};
pub use real::{Constant, DoubleDouble, Real};
pub use sequences::{generate, generate_with, sort_ascending, PointSet, SequenceSpec};
