//! Model parameters: geometry, masses, gravity.

use thiserror::Error;

/// Physical parameters of the planar four-bar mechanism.
///
/// Two legs of length `l` connect the base rod (length `d`, mass `m_b`) to
/// two flat feet resting on the ground. Each leg is a point mass `m_l` at its
/// midpoint; the feet are massless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Leg length [m].
    pub l: f64,
    /// Base rod length = foot spacing [m].
    pub d: f64,
    /// Mass of one leg [kg].
    pub m_l: f64,
    /// Mass of the base rod [kg].
    pub m_b: f64,
    /// Gravitational acceleration [m/s^2].
    pub g: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("model parameter {name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
}

impl ModelParams {
    pub fn new(l: f64, d: f64, m_l: f64, m_b: f64, g: f64) -> Result<Self, ParamError> {
        let p = ModelParams { l, d, m_l, m_b, g };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        for (name, value) in [
            ("l", self.l),
            ("d", self.d),
            ("m_l", self.m_l),
            ("m_b", self.m_b),
            ("g", self.g),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ParamError::NonPositive { name, value });
            }
        }
        Ok(())
    }

    /// Total mass m = m_b + 2 m_l.
    pub fn total_mass(&self) -> f64 {
        self.m_b + 2.0 * self.m_l
    }

    /// Total weight m g.
    pub fn weight(&self) -> f64 {
        self.total_mass() * self.g
    }

    /// Mass ratio alpha = (m_l + m_b) / m, the lever fraction of the CoM
    /// height: the mechanism CoM sits at alpha * l * sin(xi) above the
    /// ground for every standing configuration.
    pub fn alpha(&self) -> f64 {
        (self.m_l + self.m_b) / self.total_mass()
    }

    /// Whether the balanced-mass assumption m_b = 2 m_l holds (alpha = 3/4).
    /// The compact closed forms for the wrench criteria are stated under it.
    pub fn holds_hyp3(&self) -> bool {
        (self.m_b - 2.0 * self.m_l).abs() <= 1e-12 * self.total_mass()
    }
}

impl Default for ModelParams {
    /// Reference parameters: l = 1 m, d = 0.2 m, m_l = 1 kg, m_b = 2 kg,
    /// g = 9.81 m/s^2.
    fn default() -> Self {
        ModelParams {
            l: 1.0,
            d: 0.2,
            m_l: 1.0,
            m_b: 2.0,
            g: 9.81,
        }
    }
}
