use alloc::string::String;
use core::fmt;

/// A scenario failed validation. `field` names the offending entry using the
/// scenario file's field names, e.g. `obstacles[2].max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioError {
    pub field: String,
    pub message: String,
}

impl ScenarioError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid `{}`: {}", self.field, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanError {
    /// The rejection sampler hit its budget of consecutive rejections; the
    /// free space is empty or nearly so.
    SamplingBudgetExhausted { rejections: usize },
}

impl fmt::Display for PlanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanError::SamplingBudgetExhausted { rejections } => write!(
                f,
                "sampling budget exhausted after {rejections} consecutive rejections"
            ),
        }
    }
}

/// An internal invariant of the planner was found broken.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantViolation {
    pub message: String,
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invariant violation: {}", self.message)
    }
}

impl core::error::Error for ScenarioError {}
impl core::error::Error for PlanError {}
impl core::error::Error for InvariantViolation {}
