// Copyright 2026 The grover-bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Closed-form Grover probabilities.
//!
//! With θ = arcsin(√(M/N)), after k iterations the marked subspace holds
//! amplitude sin((2k+1)θ). Each marked state gets sin²((2k+1)θ)/M and each
//! unmarked state cos²((2k+1)θ)/(N−M). The result is kept in two-value form,
//! so the cost is O(M) regardless of register size.

use serde::{Deserialize, Serialize};

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::grover::{optimal_iterations, GroverInstance};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticParams {
    pub theta: f64,
    pub iterations: usize,
    pub marked_prob_each: f64,
    pub unmarked_prob_each: f64,
}

pub fn grover_angle(instance: &GroverInstance) -> f64 {
    (instance.marked_count() as f64 / instance.dim() as f64).sqrt().asin()
}

pub fn analytic_params(instance: &GroverInstance, iterations: Option<usize>) -> Result<AnalyticParams> {
    let iterations = match iterations {
        Some(k) => k,
        None => optimal_iterations(instance.n_qubits(), instance.marked_count())?,
    };
    let theta = grover_angle(instance);
    let angle = (2 * iterations + 1) as f64 * theta;
    let m = instance.marked_count() as f64;
    let unmarked = (instance.dim() - instance.marked_count() as u64) as f64;
    Ok(AnalyticParams {
        theta,
        iterations,
        marked_prob_each: angle.sin().powi(2) / m,
        unmarked_prob_each: angle.cos().powi(2) / unmarked,
    })
}

/// Exact output distribution of the Grover circuit for `instance`, in two-value form.
///
/// `iterations = Some(0)` yields the uniform distribution.
pub fn analytic_distribution(instance: &GroverInstance, iterations: Option<usize>) -> Result<Distribution> {
    let params = analytic_params(instance, iterations)?;
    let marked = instance
        .marked()
        .iter()
        .map(|&k| (k, params.marked_prob_each))
        .collect();
    Distribution::two_value(instance.n_qubits(), marked, params.unmarked_prob_each)
}

/// Marked-subspace amplitude sin((2k+1)θ) for k = 0..=max_iterations.
pub fn amplitude_trajectory(instance: &GroverInstance, max_iterations: usize) -> Vec<(usize, f64)> {
    let theta = grover_angle(instance);
    (0..=max_iterations)
        .map(|k| (k, ((2 * k + 1) as f64 * theta).sin()))
        .collect()
}

/// Validates that `params` describe a normalized distribution for `instance`.
pub fn check_normalization(instance: &GroverInstance, params: &AnalyticParams, tol: f64) -> Result<()> {
    let m = instance.marked_count() as f64;
    let rest = (instance.dim() - instance.marked_count() as u64) as f64;
    let total = m * params.marked_prob_each + rest * params.unmarked_prob_each;
    if (total - 1.0).abs() > tol {
        return Err(Error::InvalidArgument(format!("analytic distribution sums to {total}")));
    }
    Ok(())
}
