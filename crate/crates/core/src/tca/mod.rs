//! Taxicab correspondence analysis of nega-coded Borda tables.
//!
//! Each axis maximizes `||P_α u||_1` over sign vectors `u`. Two engines are
//! provided: exhaustive enumeration of the `2^(d-1)` sign patterns, and the
//! alternating sign iteration (an ascent method that may stop at a local
//! maximum, hence the restarts). All quantities are exact: the first
//! residual matrix scaled by `2t` is integral, and later residuals keep an
//! integer numerator matrix over a tracked denominator.

mod ascent;
mod axis;
mod deflate;
mod enumerate;
mod matrix;

pub use ascent::{
    ascend, ascent_runs, first_axis_ascent, first_axis_ascent_with, AscentRun, RestartPolicy,
    DEFAULT_RESTART_SEED,
};
pub use axis::{factor_scores, sgn, Method, TcaAxis};
pub use deflate::{deflate, reconstitute, Reconstitution};
pub use enumerate::{first_axis_enumerate, first_axis_enumerate_with, DEFAULT_ENUMERATION_LIMIT};
pub use matrix::{build_correspondence, residual, CorrespondenceMatrix, ResidualMatrix};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::rank::{reverse_and_nega, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Enumerate,
    Ascent,
    /// Enumerate when `d` is within the enumeration limit, otherwise ascend.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TcaOptions {
    pub engine: Engine,
    pub enumeration_limit: usize,
    pub restarts: RestartPolicy,
    pub execution: Execution,
}

impl Default for TcaOptions {
    fn default() -> Self {
        Self {
            engine: Engine::Auto,
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
            restarts: RestartPolicy::default(),
            execution: Execution::default(),
        }
    }
}

impl TcaOptions {
    pub fn sequential() -> Self {
        Self { execution: Execution::Sequential, ..Self::default() }
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }
}

/// Principal axis of `rm` with the configured engine.
pub fn first_axis(rm: &ResidualMatrix, opts: &TcaOptions) -> Result<TcaAxis> {
    let enumerate = match opts.engine {
        Engine::Enumerate => true,
        Engine::Ascent => false,
        Engine::Auto => rm.cols() <= opts.enumeration_limit,
    };
    if enumerate {
        first_axis_enumerate_with(rm, opts.enumeration_limit, opts.execution)
    } else {
        Ok(first_axis_ascent_with(rm, &opts.restarts, opts.execution))
    }
}

/// Up to `count` successive axes, stopping early once the residual vanishes.
pub fn axes(rm: &ResidualMatrix, count: usize, opts: &TcaOptions) -> Result<Vec<TcaAxis>> {
    let mut out = Vec::with_capacity(count);
    let mut current = rm.clone();
    while out.len() < count {
        if current.is_zero() {
            break;
        }
        let axis = first_axis(&current, opts)?;
        if axis.delta_numerator() == 0 {
            break;
        }
        if out.len() + 1 < count {
            current = deflate(&current, &axis)?;
        }
        out.push(axis);
    }
    Ok(out)
}

/// Residual matrix of a profile's nega-coded table.
pub fn profile_residual(p: &Profile) -> ResidualMatrix {
    residual(&build_correspondence(&reverse_and_nega(p)))
}

/// First axis of a profile's nega-coded table.
pub fn profile_first_axis(p: &Profile, opts: &TcaOptions) -> Result<TcaAxis> {
    first_axis(&profile_residual(p), opts)
}

/// First two axes of a profile, as used for maps.
pub fn profile_map_axes(p: &Profile, opts: &TcaOptions) -> Result<Vec<TcaAxis>> {
    let axes = axes(&profile_residual(p), 2, opts)?;
    if axes.is_empty() {
        return Err(Error::MissingAxis(1));
    }
    Ok(axes)
}
