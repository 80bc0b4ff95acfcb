use crate::{FvError, Result};

/// Physical constants of a run: `hbar`, `mass`, `c` and the cyclotron
/// frequency `omega_c = eB/m` (the charge and field strength never appear
/// separately).
///
/// The dimensionless field strength `b = hbar*omega_c/(m c^2)` is the single
/// knob controlling relativistic deformation; `b = 1` is the critical field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScales {
    pub hbar: f64,
    pub mass: f64,
    pub c: f64,
    pub omega_c: f64,
}

impl PhysicalScales {
    pub fn new(hbar: f64, mass: f64, c: f64, omega_c: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(FvError::InvalidScales(format!("hbar must be > 0, got {hbar}")));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(FvError::InvalidScales(format!("mass must be > 0, got {mass}")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(FvError::InvalidScales(format!("c must be > 0, got {c}")));
        }
        if !(omega_c >= 0.0 && omega_c.is_finite()) {
            return Err(FvError::InvalidScales(format!("omega_c must be >= 0, got {omega_c}")));
        }
        let s = Self { hbar, mass, c, omega_c };
        if !s.b().is_finite() {
            return Err(FvError::InvalidScales("derived b = hbar*omega_c/(m c^2) not finite".into()));
        }
        Ok(s)
    }

    /// Canonical units `hbar = mass = c = 1` with the given cyclotron frequency
    /// (numerically equal to `b` in this mode).
    pub fn canonical(omega_c: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, omega_c)
    }

    /// Dimensionless field strength `b = hbar*omega_c/(m c^2)`.
    pub fn b(&self) -> f64 {
        self.hbar * self.omega_c / (self.mass * self.c * self.c)
    }

    /// Rest energy `m c^2`.
    pub fn rest_energy(&self) -> f64 {
        self.mass * self.c * self.c
    }

    /// Oscillator length `a = sqrt(hbar/(m omega_c))`. Requires `omega_c > 0`.
    pub fn osc_length(&self) -> Result<f64> {
        if self.omega_c <= 0.0 {
            return Err(FvError::InvalidScales(
                "oscillator length needs omega_c > 0".into(),
            ));
        }
        Ok((self.hbar / (self.mass * self.omega_c)).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_and_lengths() {
        let s = PhysicalScales::canonical(0.1).unwrap();
        assert!((s.b() - 0.1).abs() < 1e-15);
        assert!((s.osc_length().unwrap() - (1.0f64 / 0.1).sqrt()).abs() < 1e-12);
        let s2 = PhysicalScales::new(2.0, 3.0, 4.0, 5.0).unwrap();
        assert!((s2.b() - 2.0 * 5.0 / (3.0 * 16.0)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_scales() {
        assert!(PhysicalScales::new(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(PhysicalScales::new(1.0, -1.0, 1.0, 0.0).is_err());
        assert!(PhysicalScales::new(1.0, 1.0, 1.0, -0.5).is_err());
        assert!(PhysicalScales::canonical(0.0).is_ok());
    }
}
