//! Coordinate conventions: light-cone times `t± = t ± z`, transverse complex
//! combinations `x± = x ± iy`, and cylindrical coordinates.
//!
//! Natural units `ħ = c = 1` are hard-coded; there is no unit conversion
//! layer. The azimuth is normalized to `[0, 2π)` and defined as `0` on the
//! axis `ρ = 0` so that outputs are deterministic.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::Error;

/// A real spacetime event `(t, x, y, z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpacetimePoint {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Squared transverse radius `x² + y²`.
    pub fn rho_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Transverse radius `ρ = √(x² + y²)`.
    pub fn rho(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// The light-cone image of a real event: `t± = t ± z`, `x± = x ± iy`,
/// plus the cylindrical pair `(ρ, φ)`.
///
/// Built from a real point, `x₋` is always the complex conjugate of `x₊`
/// and `|x₊| = ρ`.
#[derive(Clone, Copy, Debug)]
pub struct LightConeCoords {
    pub t_plus: f64,
    pub t_minus: f64,
    pub x_plus: Complex64,
    pub x_minus: Complex64,
    pub rho: f64,
    pub phi: f64,
}

/// Independent transverse complex coordinates.
///
/// Unlike [`LightConeCoords`], `x₊` and `x₋` are not constrained to be
/// conjugates; this is the off-slice extension on which `∂/∂x₊` and `∂/∂x₋`
/// act as derivatives in independent complex variables.
#[derive(Clone, Copy, Debug)]
pub struct OffSliceTransverse {
    pub x_plus: Complex64,
    pub x_minus: Complex64,
}

impl OffSliceTransverse {
    pub fn new(x_plus: Complex64, x_minus: Complex64) -> Self {
        Self { x_plus, x_minus }
    }

    /// The on-slice restriction `x₋ = conj(x₊)` of a real point.
    pub fn on_slice(p: SpacetimePoint) -> Self {
        Self {
            x_plus: Complex64::new(p.x, p.y),
            x_minus: Complex64::new(p.x, -p.y),
        }
    }
}

/// Map a real event to its light-cone coordinates.
pub fn to_lightcone(p: SpacetimePoint) -> LightConeCoords {
    let rho = p.rho();
    let phi = if rho == 0.0 {
        0.0
    } else {
        let a = p.y.atan2(p.x);
        if a < 0.0 {
            a + TAU
        } else {
            a
        }
    };
    LightConeCoords {
        t_plus: p.t + p.z,
        t_minus: p.t - p.z,
        x_plus: Complex64::new(p.x, p.y),
        x_minus: Complex64::new(p.x, -p.y),
        rho,
        phi,
    }
}

/// Build a real event from cylindrical coordinates. Rejects `ρ < 0`.
pub fn from_cylindrical(rho: f64, phi: f64, z: f64, t: f64) -> Result<SpacetimePoint, Error> {
    if rho < 0.0 {
        return Err(Error::NegativeRadius(rho));
    }
    Ok(SpacetimePoint {
        t,
        x: rho * phi.cos(),
        y: rho * phi.sin(),
        z,
    })
}
