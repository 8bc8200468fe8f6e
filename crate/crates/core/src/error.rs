use thiserror::Error;

/// A parameter record failed validation.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("parameter `{name}` must be {requirement}, got {value}")]
pub struct ParamError {
    pub name: &'static str,
    pub requirement: &'static str,
    pub value: f64,
}

impl ParamError {
    pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<(), ParamError> {
        if value.is_finite() && value > 0.0 {
            Ok(())
        } else {
            Err(ParamError {
                name,
                requirement: "finite and positive",
                value,
            })
        }
    }

    pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<(), ParamError> {
        if value.is_finite() {
            Ok(())
        } else {
            Err(ParamError {
                name,
                requirement: "finite",
                value,
            })
        }
    }

    pub(crate) fn check_nonzero(name: &'static str, value: f64) -> Result<(), ParamError> {
        if value.is_finite() && value != 0.0 {
            Ok(())
        } else {
            Err(ParamError {
                name,
                requirement: "finite and nonzero (use inf for a flat phase front)",
                value,
            })
        }
    }
}
