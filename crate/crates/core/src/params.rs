use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which laminar base flow is perturbed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowKind {
    /// Magnetic Couette flow, walls moving at `U(±1) = ±1`.
    Couette,
    /// Hartmann (magnetic Poiseuille) flow, `U(±1) = 0`, `U(0) = 1`.
    Hartmann,
}

impl FlowKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FlowKind::Couette => "couette",
            FlowKind::Hartmann => "hartmann",
        }
    }
}

impl fmt::Display for FlowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FlowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "couette" => Ok(FlowKind::Couette),
            "hartmann" => Ok(FlowKind::Hartmann),
            other => Err(Error::Domain(format!("unknown flow kind `{other}`"))),
        }
    }
}

/// Non-dimensional control parameters.
///
/// The coupling parameter `A = Ha^2 Pm` is derived on demand so it can never
/// drift from its definition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub flow: FlowKind,
    /// Hartmann number.
    pub ha: f64,
    /// Magnetic Prandtl number.
    pub pm: f64,
}

impl Params {
    pub fn new(flow: FlowKind, ha: f64, pm: f64) -> Result<Self> {
        if !(ha.is_finite() && ha >= 0.0) {
            return Err(Error::Domain(format!("Ha = {ha} must be finite and >= 0")));
        }
        if !(pm.is_finite() && pm > 0.0) {
            return Err(Error::Domain(format!("Pm = {pm} must be finite and > 0")));
        }
        Ok(Self { flow, ha, pm })
    }

    /// Coupling parameter `A = Ha^2 Pm`, the weight of magnetic energy.
    pub fn coupling(&self) -> f64 {
        self.ha * self.ha * self.pm
    }

    pub fn ha2(&self) -> f64 {
        self.ha * self.ha
    }
}
