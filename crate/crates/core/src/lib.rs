// SPDX-License-Identifier: Apache-2.0

//! And-inverter graph synthesis: BENCH/GraphML I/O, equivalence checking,
//! the balance/rewrite/refactor/resubstitution transforms and a dataset
//! generator that replays synthesis recipes.

pub mod aig;
pub mod bench;
pub mod equiv;
pub mod gen;
pub mod graphml;
pub mod pipeline;
pub mod recipe;
pub mod transforms;
