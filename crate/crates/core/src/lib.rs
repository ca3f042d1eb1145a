//! Controllability of conjunctive Boolean networks.
//!
//! A conjunctive Boolean network updates every variable to the AND of a fixed
//! non-empty set of variables. Replacing the updates of a chosen set `I` by
//! free Boolean inputs gives a conjunctive Boolean control network; it is
//! controllable when some input sequence steers it between any two states.
//!
//! The crate provides:
//!
//! - [`model`]: network types, dependency graphs, node classification, and
//!   the text formats (`.cbn` networks, edge-list graphs, DOT export).
//! - [`analysis`]: the fast controllability test (acyclicity plus property P)
//!   and the decomposition of controllable graphs into disjoint controlled
//!   paths.
//! - [`synthesis`]: simulation plus explicit start-independent control
//!   schedules built from the path decomposition.
//! - [`oracle`]: brute-force ground truth on small instances via the full
//!   `2^n`-state transition graph, and an exhaustive dominating-set solver.
//! - [`minctrl`]: exact and greedy search for a minimum controlled set.
//! - [`reduction`]: the dominating-set reduction, mapping graph domination
//!   questions onto minimal controllability and back.
//!
//! ```
//! use cbn_control::analysis::check_controllability;
//! use cbn_control::model::parse_cbn;
//!
//! let net = parse_cbn("X1 = ?\nX2 = ?\nX3 = X1 & X2").unwrap();
//! assert!(check_controllability(&net).is_controllable());
//! ```

pub mod analysis;
pub mod minctrl;
pub mod model;
pub mod oracle;
pub mod reduction;
pub mod synthesis;

pub use analysis::{check_controllability, Verdict};
pub use model::{Cbcn, Cbn, NetworkState};
