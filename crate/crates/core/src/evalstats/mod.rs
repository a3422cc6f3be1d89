//! Evaluation metrics and the bootstrap one-tailed z-test used to analyse
//! binary preference surveys.

mod metrics;
mod normal;
mod ztest;

pub use metrics::{classification_scores, mse, rouge2, rouge2_f1, ClassificationScores, MetricError, RougeScore};
pub use normal::{normal_cdf, normal_pdf, normal_sf};
pub use ztest::{
    bootstrap_ztest, ztest_closed_form, Question, StatsError, SurveySample, ZTestResult, RNG_ALGORITHM,
};
