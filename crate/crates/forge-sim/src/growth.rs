//! Preferential attachment with aging: which project a joining-minded minor
//! agent looks at.
//!
//! Selection weight is fitness times member count. Fitness decays
//! exponentially with project age down to a floor, so old giants slowly lose
//! their pull and young projects get a window to grow.

use crate::model::{ProjectId, ProjectState};
use crate::rng::SimRng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitnessParams {
    /// Exponential decay rate per step of age.
    pub decay_rate: f64,
    /// Lower bound the decayed fitness never drops below.
    pub floor: f64,
}

impl Default for FitnessParams {
    fn default() -> Self {
        Self {
            decay_rate: 0.005,
            floor: 0.01,
        }
    }
}

impl FitnessParams {
    pub fn validate(&self) -> Result<(), GrowthError> {
        if !(self.decay_rate >= 0.0) || !self.decay_rate.is_finite() {
            return Err(GrowthError::InvalidParameter {
                name: "decay_rate",
                value: self.decay_rate,
            });
        }
        if !(self.floor > 0.0 && self.floor <= 1.0) {
            return Err(GrowthError::InvalidParameter {
                name: "fitness_floor",
                value: self.floor,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum GrowthError {
    #[error("step {now} precedes creation step {created_at} of project {project}")]
    TimeTravel {
        project: ProjectId,
        created_at: u32,
        now: u32,
    },
    #[error("no project is eligible for selection")]
    NoEligibleProjects,
    #[error("{name} = {value} is not a valid fitness parameter")]
    InvalidParameter { name: &'static str, value: f64 },
}

/// Fitness of a project of the given age: `max(floor, exp(-decay_rate * age))`.
pub fn decayed_fitness(age: u32, params: &FitnessParams) -> f64 {
    let eta = (-params.decay_rate * age as f64).exp();
    eta.max(params.floor)
}

/// Fitness of `project` as of step `now`; the project must not postdate it.
pub fn fitness(project: &ProjectState, now: u32, params: &FitnessParams) -> Result<f64, GrowthError> {
    if now < project.created_at {
        return Err(GrowthError::TimeTravel {
            project: project.id,
            created_at: project.created_at,
            now,
        });
    }
    Ok(decayed_fitness(now - project.created_at, params))
}

/// Normalized selection weights over the whole project table: fitness times
/// member count for eligible projects, zero for completed or empty ones.
pub fn selection_weights(
    projects: &[ProjectState],
    now: u32,
    params: &FitnessParams,
) -> Result<Vec<f64>, GrowthError> {
    let mut weights = vec![0.0; projects.len()];
    let total = fill_raw_weights(projects, now, params, &mut weights)?;
    if total == 0.0 {
        return Err(GrowthError::NoEligibleProjects);
    }
    for w in &mut weights {
        *w /= total;
    }
    Ok(weights)
}

/// Fills `weights` with unnormalized selection weights and returns their
/// left-to-right sum. Ineligible projects contribute exactly 0.0, which
/// keeps the running sum bit-identical to one taken over eligible projects
/// only.
pub(crate) fn fill_raw_weights(
    projects: &[ProjectState],
    now: u32,
    params: &FitnessParams,
    weights: &mut [f64],
) -> Result<f64, GrowthError> {
    debug_assert_eq!(projects.len(), weights.len());
    let mut total = 0.0;
    for (slot, project) in weights.iter_mut().zip(projects) {
        let w = if project.is_eligible() {
            fitness(project, now, params)? * project.members.len() as f64
        } else {
            0.0
        };
        *slot = w;
        total += w;
    }
    Ok(total)
}

/// Roulette pick over unnormalized weights: the threshold `u * total` is
/// matched against the left-to-right cumulative sum with half-open
/// intervals, so entry `i` wins when the threshold falls in
/// `[cum_before_i, cum_before_i + w_i)`. Rounding can push the threshold to
/// or past the final cumulative value; the last positive-weight entry
/// absorbs that sliver. Returns `None` only when every weight is zero.
pub(crate) fn roulette_pick(weights: &[f64], total: f64, u: f64) -> Option<usize> {
    let threshold = u * total;
    let mut cum = 0.0;
    let mut last_positive = None;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            cum += w;
            last_positive = Some(i);
            if cum > threshold {
                return Some(i);
            }
        }
    }
    last_positive
}

/// Draws one variate and picks a project in proportion to the selection
/// weights. Errors when nothing is eligible (callers should test for that
/// case first if they want to avoid consuming a draw).
pub fn select_project(
    projects: &[ProjectState],
    now: u32,
    params: &FitnessParams,
    rng: &mut SimRng,
) -> Result<ProjectId, GrowthError> {
    let mut weights = vec![0.0; projects.len()];
    let total = fill_raw_weights(projects, now, params, &mut weights)?;
    if total == 0.0 {
        return Err(GrowthError::NoEligibleProjects);
    }
    let u = rng.next_unit();
    let idx = roulette_pick(&weights, total, u).expect("positive total implies a pick");
    Ok(projects[idx].id)
}
