//! Index sets, count and moment matrices, and scalar click criteria.

pub mod index_sets;
pub mod matrices;
pub mod scalars;

pub use index_sets::{
    enumerate_index_sets, format_element, single_index_sets, Element, IndexClass, IndexSet,
    MatrixKind, DEFAULT_PHOTO_ORDER, MAX_PNR_LEVELS,
};
pub use matrices::{
    count_matrix, matrix_from_counts, moment_matrix, witness_matrix, ReportSource, Verdict,
    WitnessReport, NEGATIVITY_REL_TOL,
};
pub use scalars::{
    click_stats, g_functions, g_matrix, klyshko_ratio, qb_parameter, skewness_witness, ClickStats,
    KlyshkoResult, KlyshkoVariant, QbResult, SkewnessWitness,
};
