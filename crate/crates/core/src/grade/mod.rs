//! Probabilistic relocation design by gradient descent on expected counts.

mod force;
mod forecast;
mod objective;
mod run;
mod weights;

pub use force::{force, force_within};
pub use forecast::{forecast, Forecast};
pub use objective::{concat_probability, concat_probability_4d, grad_n6, grad_n8, grad_n_concat, n6, n8, n_concat, p6};
pub use run::{kkt_residual, run_md_grade, GradeConfig, GradeResult, GradeTarget, Objective, StopReason};
pub use weights::{binom, cycle6_candidates, lambda_coeffs, w_coeffs, ConcatWeights};
