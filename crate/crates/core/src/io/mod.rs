//! Ingestion, report serialization, and plotting.

pub mod dataset;
pub mod report;
pub mod svg;
pub mod table;

pub use dataset::{
    generate_synthetic, normalize, resolve_dataset_list, DatasetListOptions, DatasetSource, DatasetSpec,
    Normalization, SyntheticKind,
};
pub use report::{
    agreement_to_csv, rank_tables_to_csv, read_report, tallies_to_csv, write_report, write_text, MetricRecord, Provenance, ReportDocument, ReportFormat, TallyRecord,
};
pub use svg::{plot_shepard, plot_stress_scale_curve};
pub use table::{load_csv_matrix, load_embedding_csv, write_embedding_csv, LoadedData};
