//! Agent-based discrete-event simulation of a retail department floor.
//!
//! Customers browse, ask for help, queue at tills and sometimes give up;
//! cashiers, sellers of two skill levels and section managers serve them.
//! Each customer's experience is scored with configurable satisfaction
//! weights, and the experiment harness sweeps staffing mixes to see how
//! those scores respond.
//!
//! ```no_run
//! use floorsim::scenario::{preset, run_replication, Department};
//!
//! let config = preset(Department::AudioTv);
//! let report = run_replication(&config, 0).unwrap();
//! println!("index {:.3}, {} sales", report.service_level_index, report.transactions);
//! ```

pub mod agents;
pub mod error;
pub mod exec;
pub mod kernel;
pub mod metrics;
pub mod queuing;
pub mod results;
pub mod scenario;

pub use error::{ConfigError, ModelError, SimError};
pub use exec::Execution;
