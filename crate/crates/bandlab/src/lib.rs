//! bandlab: a toolkit around the graph bandwidth problem.
//!
//! The crate bundles several solvers that deliberately overlap so they can
//! cross-check each other:
//!
//! * [`exact`] — exhaustive search and a window dynamic program, the ground
//!   truth oracles;
//! * [`fpt`] — a structured pipeline that exploits a small cluster vertex
//!   deletion set: it enumerates placements of an extended deletion set and
//!   solves a bounded-integer feasibility system per placement;
//! * [`ilp`] — the self-contained integer feasibility engine backing
//!   [`fpt`], with an LP-style text export;
//! * [`reduction`] — a gadget construction that maps unary bin packing
//!   instances to bandwidth instances, with structural checkers for
//!   orderings of the produced graphs;
//! * [`cluster`] — cluster deletion sets, cluster types, and the extended
//!   deletion set machinery shared by the above;
//! * [`gen`] / [`crosscheck`] — seeded instance generators and agreement
//!   harnesses used by the test suite and the CLI.

pub mod cluster;
pub mod crosscheck;
pub mod error;
pub mod exact;
pub mod fpt;
pub mod gen;
pub mod graph;
pub mod ilp;
pub mod io;
pub mod reduction;

pub use error::{Error, Result};
pub use graph::{Graph, Ordering};
