use crate::polysys::StateVector;

/// Where the samples of a [`Trajectory`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    ClosedForm,
    Integrated,
}

/// Step statistics of an integration run; all zero for closed-form samples.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evaluations: usize,
    /// Smallest accepted step; infinite when no step was taken.
    pub min_step: f64,
}

/// Sampled times with complex states.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub source: Source,
    pub stats: StepStats,
}

impl Trajectory {
    pub fn closed_form(times: Vec<f64>, states: Vec<StateVector>) -> Self {
        Trajectory {
            times,
            states,
            source: Source::ClosedForm,
            stats: StepStats {
                min_step: f64::INFINITY,
                ..StepStats::default()
            },
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, |s| s.len())
    }

    pub fn last(&self) -> Option<(f64, &StateVector)> {
        self.times.last().copied().zip(self.states.last())
    }

    /// Max over samples and components of `|a - b| / (1 + |b|)`, with `other` as reference.
    pub fn max_relative_deviation(&self, other: &Trajectory) -> f64 {
        self.states
            .iter()
            .zip(&other.states)
            .flat_map(|(a, b)| {
                a.iter()
                    .zip(b.iter())
                    .map(|(x, y)| (x - y).norm() / (1.0 + y.norm()))
            })
            .fold(0.0, f64::max)
    }
}

/// `samples` uniformly spaced times covering `[0, t_end]`, endpoints included.
pub fn uniform_grid(t_end: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => {
            let last = (samples - 1) as f64;
            (0..samples)
                .map(|i| {
                    if i + 1 == samples {
                        t_end
                    } else {
                        t_end * i as f64 / last
                    }
                })
                .collect()
        }
    }
}
