//! Birth/death percolation on random graphs, observed through Type I/II
//! edge noise, and the Monte-Carlo machinery for telling classical
//! (Erdős–Rényi) growth from the Achlioptas product rule.
//!
//! * [`dyngraph`]: dynamic graph with exact component sizes.
//! * [`process`]: indicator chain, ER and product-rule steps, simulation.
//! * [`noise`]: confusion-matrix observation layer.
//! * [`stats`]: giant-component curve, quantiles, detection statistics.
//! * [`closedform`]: single-edge transition tables for the ER process.
//! * [`infer`]: statistic sampling, kernel smoothing, ROC/AUC, p-values.
//! * [`ingest`]: parsing of externally observed trajectories.

pub mod closedform;
pub mod dsu;
pub mod dyngraph;
pub mod error;
pub mod infer;
pub mod ingest;
pub mod noise;
pub mod process;
pub mod stats;

pub use dyngraph::{ComponentSummary, DynamicGraph, Edge, VertexId};
pub use error::{Error, Result};
pub use noise::NoiseParams;
pub use process::{Model, ProcessConfig, StepSummary, TrajectoryRecord};
pub use stats::{DetectionStatistic, Normalization, StatisticKind};
