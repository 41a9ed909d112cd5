use thiserror::Error;

use crate::agents::{CustomerState, StaffRole};
use crate::kernel::{CustomerId, StaffId};
use crate::queuing::RequestKind;

/// Contract violations inside a replication. Any of these means the model
/// itself is wrong, not the input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("event scheduled at {requested} before clock {clock}")]
    ScheduledInPast { clock: f64, requested: f64 },
    #[error("customer {customer}: trigger {trigger} is not legal in state {state:?}")]
    IllegalTransition {
        customer: CustomerId,
        state: CustomerState,
        trigger: &'static str,
    },
    #[error("staff {staff} is already serving")]
    StaffBusy { staff: StaffId },
    #[error("staff {staff} ({role:?}) is not qualified for {kind:?}")]
    Unqualified { staff: StaffId, role: StaffRole, kind: RequestKind },
    #[error("staff {staff} released while available")]
    ReleaseIdle { staff: StaffId },
    #[error("customer {customer} already holds an open request")]
    DuplicateRequest { customer: CustomerId },
}

/// Rejected scenario input; carries every violation found, not just the first.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid scenario: {}", .violations.join("; "))]
pub struct ConfigError {
    pub violations: Vec<String>,
}

impl ConfigError {
    pub fn single(msg: impl Into<String>) -> Self {
        Self { violations: vec![msg.into()] }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}
