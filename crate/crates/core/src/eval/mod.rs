//! Frame similarity metrics and the experiments built on them.

mod experiments;
mod metrics;

pub use experiments::{
    contribution_sweep, contribution_sweep_csv, contribution_sweep_stream, polarity_flip_report,
    scaled_windows, signed_edge_mean, speed_invariance_report, window_sweep, window_sweep_csv,
    window_sweep_stream, ContributionSweepRow, PairScore, ReversalPair, ReversalReport,
    ReversalSetup, SimilarityReport, SpeedReport, SpeedRun, SpeedSetup, WindowSweepRow,
    CONTRIBUTION_SWEEP_WINDOW, SWEEP_CONTRIBUTIONS,
};
pub use metrics::{
    distinct_levels, fill_ratio, ncc, ncc_slices, saturation_fraction, side_by_side,
};
