use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::axis::{resolve, sgn, Method, TcaAxis};
use super::matrix::ResidualMatrix;
use crate::exec::Execution;

pub const DEFAULT_RESTART_SEED: u64 = 0x7ca_5eed;

/// Starting configurations for the alternating sign iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestartPolicy {
    /// Start from the sign pattern of every column.
    pub columns: bool,
    /// Number of rows sampled (without replacement) as starts; all rows are
    /// used when this is at least the row count.
    pub rows: usize,
    pub seed: u64,
}

impl Default for RestartPolicy {
    fn default() -> Self {
        Self { columns: true, rows: 64, seed: DEFAULT_RESTART_SEED }
    }
}

impl RestartPolicy {
    pub fn all_rows() -> Self {
        Self { columns: false, rows: usize::MAX, seed: DEFAULT_RESTART_SEED }
    }

    /// Initial `u` vectors, columns first, then sampled rows in row order.
    pub fn starts(&self, rm: &ResidualMatrix) -> Vec<Vec<i8>> {
        let mut starts = Vec::new();
        if self.columns {
            for j in 0..rm.cols() {
                let v: Vec<i8> = (0..rm.rows()).map(|i| sgn(rm.scaled(i, j))).collect();
                starts.push(rm.transpose_times_signs(&v).into_iter().map(sgn).collect());
            }
        }
        let rows = rm.rows();
        let picked: Vec<usize> = if self.rows >= rows {
            (0..rows).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            let mut idx = sample(&mut rng, rows, self.rows).into_vec();
            idx.sort_unstable();
            idx
        };
        for i in picked {
            starts.push(rm.scaled_row(i).iter().map(|&c| sgn(c)).collect());
        }
        starts
    }
}

/// One run of the sign iteration from a single start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AscentRun {
    pub u: Vec<i8>,
    pub objective: i128,
    /// Scaled objective after each iteration, starting with the initial `u`.
    pub trace: Vec<i128>,
}

/// Iterates `v <- sgn(S u)`, `u <- sgn(S' v)` until the objective stops increasing.
pub fn ascend(rm: &ResidualMatrix, start: &[i8]) -> AscentRun {
    let mut u = start.to_vec();
    let mut objective = rm.objective(&u);
    let mut trace = vec![objective];
    loop {
        let v: Vec<i8> = rm.times_signs(&u).into_iter().map(sgn).collect();
        let next: Vec<i8> = rm.transpose_times_signs(&v).into_iter().map(sgn).collect();
        let value = rm.objective(&next);
        trace.push(value);
        if value <= objective {
            break;
        }
        u = next;
        objective = value;
    }
    AscentRun { u, objective, trace }
}

pub fn ascent_runs(rm: &ResidualMatrix, policy: &RestartPolicy, exec: Execution) -> Vec<AscentRun> {
    let starts = policy.starts(rm);
    exec.map(starts.len(), |k| ascend(rm, &starts[k]))
}

/// First principal axis by the ascent algorithm, best over all restarts.
pub fn first_axis_ascent(rm: &ResidualMatrix, policy: &RestartPolicy) -> TcaAxis {
    first_axis_ascent_with(rm, policy, Execution::default())
}

pub fn first_axis_ascent_with(
    rm: &ResidualMatrix,
    policy: &RestartPolicy,
    exec: Execution,
) -> TcaAxis {
    let runs = ascent_runs(rm, policy, exec);
    let restarts = runs.len();
    let best = runs.iter().map(|r| r.objective).max().unwrap_or(0);
    let mut candidates: Vec<Vec<i8>> =
        runs.into_iter().filter(|r| r.objective == best).map(|r| r.u).collect();
    if candidates.is_empty() {
        candidates.push(vec![1; rm.cols()]);
    }
    let mut axis = resolve(rm, &candidates, Method::Ascent);
    axis.restarts_used = restarts;
    axis
}
