//! Tropical (max-plus) geometry and classifiers on the tropical projective
//! torus `R^d / R·1`: metric, hyperplanes and hulls, a dense simplex solver,
//! hard-margin and heuristic tropical SVMs, a linear SVM comparator, VC-type
//! bounds, extreme-value experiments and the function-space extension.

pub mod baseline;
pub mod error;
pub mod experiments;
pub mod extremes;
pub mod functional;
pub mod generalization;
pub mod hyperplane;
pub mod io;
pub mod lp;
pub mod plot;
pub mod svm;
pub mod torus;

pub use baseline::{predict_l2, train_l2, EuclideanModel};
pub use error::{Error, Result};
pub use experiments::ExperimentConfig;
pub use functional::{FunctionalHyperplane, GaussianMixture, GridFunction, Interval, RealFunction};
pub use hyperplane::{SectorResult, TropicalHyperplane};
pub use lp::{LinearProgram, LpSolution};
pub use svm::{HardFit, LabeledDataset, SectorAssignment, TiePolicy, TrainedModel};
pub use torus::{trop_combine, trop_distance, trop_segment, TorusPoint, TropicalPolytope};
