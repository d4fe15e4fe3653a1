// SPDX-License-Identifier: Apache-2.0

//! Technology-independent AIG optimizations.
//!
//! Every transform returns a functionally equivalent, cleaned-up graph.
//! The local-replacement passes (rewrite, refactor, resubstitution) visit
//! the original nodes in index order and commit a replacement as soon as it
//! is accepted, so later decisions see the updated graph.

mod balance;
mod cuts;
pub(crate) mod network;
pub mod npn;
mod refactor;
mod resub;
mod rewrite;
pub mod truth;

pub use balance::balance;
pub use cuts::Cut;
pub use npn::{NpnClasses, NpnLibrary, NpnTransform, Template};
pub use refactor::{refactor, DEFAULT_MAX_CONE_INPUTS};
pub use resub::{resubstitute, DEFAULT_MAX_WINDOW_INPUTS};
pub use rewrite::{enumerate_cuts, rewrite, CUT_SIZE, MAX_CUTS_PER_NODE};

use thiserror::Error;

use crate::aig::Aig;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("{what} must be within {min}..={max}, got {value}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformOutcome {
    pub result: Aig,
    pub nodes_before: usize,
    pub nodes_after: usize,
    pub depth_before: usize,
    pub depth_after: usize,
    /// Number of accepted local replacements.
    pub applied_count: usize,
}

impl TransformOutcome {
    pub(crate) fn new(input: &Aig, result: Aig, applied_count: usize) -> Self {
        TransformOutcome {
            nodes_before: input.and_count(),
            nodes_after: result.and_count(),
            depth_before: input.depth(),
            depth_after: result.depth(),
            result,
            applied_count,
        }
    }
}

fn check_range(what: &'static str, value: usize, min: usize, max: usize) -> Result<(), TransformError> {
    if (min..=max).contains(&value) {
        Ok(())
    } else {
        Err(TransformError::OutOfRange { what, value, min, max })
    }
}

/// Replacement acceptance: strictly positive gain, or zero gain for the
/// zero-cost variants. Negative gain is never accepted.
pub(crate) fn accept(gain: isize, zero_cost: bool) -> bool {
    gain > 0 || (zero_cost && gain == 0)
}
