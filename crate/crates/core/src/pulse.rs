// SPDX-License-Identifier: Apache-2.0

//! Control envelopes, the pulse schedule of one node, and the resonance
//! conditions that fix the chirp and the sideband frequency.

use serde::{Deserialize, Serialize};

use crate::bessel::J1_MAX;
use crate::error::{Error, Result};
use crate::node::NodeParams;
use crate::Real;

fn check_width<T: Real>(width: T) -> Result<()> {
    if width > T::zero() {
        Ok(())
    } else {
        Err(Error::config(format!("pulse width must be positive, got {width}")))
    }
}

/// `amplitude * exp(-(t - center)^2 / (2 width^2))`.
pub fn gaussian_pulse<T: Real>(t: T, amplitude: T, center: T, width: T) -> Result<T> {
    check_width(width)?;
    let x = (t - center) / width;
    Ok(amplitude * (-x * x * T::lit(0.5)).exp())
}

/// `amplitude / cosh((t - center) / width)`.
pub fn sech_pulse<T: Real>(t: T, amplitude: T, center: T, width: T) -> Result<T> {
    check_width(width)?;
    Ok(amplitude / ((t - center) / width).cosh())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum Envelope<T> {
    Zero,
    Constant { amplitude: T },
    Gaussian { amplitude: T, center: T, width: T },
    Sech { amplitude: T, center: T, width: T },
}

impl<T: Real> Envelope<T> {
    pub fn gaussian(amplitude: T, center: T, width: T) -> Result<Self> {
        check_width(width)?;
        Ok(Envelope::Gaussian { amplitude, center, width })
    }

    pub fn sech(amplitude: T, center: T, width: T) -> Result<Self> {
        check_width(width)?;
        Ok(Envelope::Sech { amplitude, center, width })
    }

    pub fn value(&self, t: T) -> T {
        match *self {
            Envelope::Zero => T::zero(),
            Envelope::Constant { amplitude } => amplitude,
            Envelope::Gaussian { amplitude, center, width } => {
                let x = (t - center) / width;
                amplitude * (-x * x * T::lit(0.5)).exp()
            }
            Envelope::Sech { amplitude, center, width } => amplitude / ((t - center) / width).cosh(),
        }
    }

    /// Signed value at the envelope maximum.
    pub fn peak(&self) -> T {
        match *self {
            Envelope::Zero => T::zero(),
            Envelope::Constant { amplitude }
            | Envelope::Gaussian { amplitude, .. }
            | Envelope::Sech { amplitude, .. } => amplitude,
        }
    }

    pub fn center(&self) -> Option<T> {
        match *self {
            Envelope::Gaussian { center, .. } | Envelope::Sech { center, .. } => Some(center),
            _ => None,
        }
    }

    pub fn width(&self) -> Option<T> {
        match *self {
            Envelope::Gaussian { width, .. } | Envelope::Sech { width, .. } => Some(width),
            _ => None,
        }
    }

    pub fn scaled(&self, factor: T) -> Self {
        match *self {
            Envelope::Zero => Envelope::Zero,
            Envelope::Constant { amplitude } => Envelope::Constant { amplitude: amplitude * factor },
            Envelope::Gaussian { amplitude, center, width } => {
                Envelope::Gaussian { amplitude: amplitude * factor, center, width }
            }
            Envelope::Sech { amplitude, center, width } => Envelope::Sech { amplitude: amplitude * factor, center, width },
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Envelope::Gaussian { width, .. } | Envelope::Sech { width, .. } => check_width(width),
            _ => Ok(()),
        }
    }
}

/// How the frame chirp `phi_dot` (and the sideband frequency) follow the
/// optical drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ChirpMode {
    /// Re-evaluated with the instantaneous `Omega_c(t)`.
    #[default]
    Tracking,
    /// Fixed at the value for the peak optical drive.
    Constant,
    Zero,
}

/// Controls of one node: the qubit leg in `J1` value space and the optical
/// Rabi frequency `Omega_c(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSchedule<T> {
    qubit_leg: Envelope<T>,
    optical: Envelope<T>,
    chirp: ChirpMode,
}

impl<T: Real> PulseSchedule<T> {
    pub fn new(qubit_leg: Envelope<T>, optical: Envelope<T>, chirp: ChirpMode) -> Result<Self> {
        qubit_leg.validate()?;
        optical.validate()?;
        if !(qubit_leg.peak().abs() <= T::lit(J1_MAX)) {
            return Err(Error::config(format!(
                "qubit-leg amplitude {} exceeds the J1 range {J1_MAX}",
                qubit_leg.peak()
            )));
        }
        if !(optical.peak() >= T::zero()) {
            return Err(Error::config(format!("optical drive amplitude {} is negative", optical.peak())));
        }
        Ok(Self { qubit_leg, optical, chirp })
    }

    /// No drive at all.
    pub fn idle() -> Self {
        Self { qubit_leg: Envelope::Zero, optical: Envelope::Zero, chirp: ChirpMode::Zero }
    }

    /// Gaussian STIRAP pair: the optical pulse centered at `optical_center`,
    /// the qubit-leg pulse `delay * tau_f` later.
    pub fn stirap(
        j1_peak: T,
        omega_c0: T,
        tau_f: T,
        tau_c: T,
        optical_center: T,
        delay: T,
        chirp: ChirpMode,
    ) -> Result<Self> {
        let optical = Envelope::gaussian(omega_c0, optical_center, tau_c)?;
        let qubit = Envelope::gaussian(j1_peak, optical_center + delay * tau_f, tau_f)?;
        Self::new(qubit, optical, chirp)
    }

    /// Sech optical drive with the qubit leg off.
    pub fn raman_sech(omega_c0: T, center: T, width: T, chirp: ChirpMode) -> Result<Self> {
        Self::new(Envelope::Zero, Envelope::sech(omega_c0, center, width)?, chirp)
    }

    /// `J1(Omega_mu(t) / omega_mu)` at `t`.
    pub fn qubit_leg(&self, t: T) -> T {
        self.qubit_leg.value(t)
    }

    /// `Omega_c(t)`.
    pub fn optical(&self, t: T) -> T {
        self.optical.value(t)
    }

    pub fn qubit_leg_envelope(&self) -> &Envelope<T> {
        &self.qubit_leg
    }

    pub fn optical_envelope(&self) -> &Envelope<T> {
        &self.optical
    }

    pub fn chirp_mode(&self) -> ChirpMode {
        self.chirp
    }

    pub fn with_chirp(mut self, chirp: ChirpMode) -> Self {
        self.chirp = chirp;
        self
    }

    /// Optical drive at which the chirp is evaluated at time `t`, or `None`
    /// when the chirp is off.
    pub fn chirp_drive(&self, t: T) -> Option<T> {
        match self.chirp {
            ChirpMode::Tracking => Some(self.optical(t)),
            ChirpMode::Constant => Some(self.optical.peak()),
            ChirpMode::Zero => None,
        }
    }
}

/// Chirp rate and sideband frequency that put qubit, spins and cavity on a
/// common resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance<T> {
    pub chirp: T,
    pub sideband: T,
}

/// `phi_dot = D1 - D0 + Oc^2/D1 - delta_en` and
/// `omega_mu = Dq + (D1 - D0) + Oc^2/D1`.
pub fn resonance_conditions<T: Real>(params: &NodeParams<T>, delta_en: T, omega_c: T) -> Result<Resonance<T>> {
    if params.delta1 == T::zero() {
        return Err(Error::SingularDetuning("Delta_1".into()));
    }
    let stark = omega_c * omega_c / params.delta1;
    let d = params.delta1 - params.delta0;
    Ok(Resonance { chirp: d + stark - delta_en, sideband: params.delta_q + d + stark })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_shape() {
        assert_eq!(gaussian_pulse(2.0, 3.0, 2.0, 0.5).unwrap(), 3.0);
        let a: f64 = gaussian_pulse(2.0 - 0.7, 3.0, 2.0, 0.5).unwrap();
        let b = gaussian_pulse(2.0 + 0.7, 3.0, 2.0, 0.5).unwrap();
        assert!((a - b).abs() < 1e-15);
        assert!((gaussian_pulse(2.5, 1.0, 2.0, 0.5).unwrap() - (-0.5f64).exp()).abs() < 1e-15);
        assert!(gaussian_pulse(0.0, 1.0, 0.0, 0.0).is_err());
        assert!(gaussian_pulse(0.0, 1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn sech_shape() {
        assert_eq!(sech_pulse(1.0, 200.0, 1.0, 2.0).unwrap(), 200.0);
        let half = 2.0 * 2.0f64.acosh();
        assert!((sech_pulse(1.0 + half, 200.0, 1.0, 2.0).unwrap() - 100.0).abs() < 1e-12);
        assert!((sech_pulse(1.0 - half, 200.0, 1.0, 2.0).unwrap() - 100.0).abs() < 1e-12);
        assert!(sech_pulse(0.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn stirap_ordering() {
        let s = PulseSchedule::<f64>::stirap(0.58, 3000.0, 0.008, 0.008, 0.02, 1.25, ChirpMode::Tracking).unwrap();
        assert_eq!(s.optical_envelope().center(), Some(0.02));
        assert!((s.qubit_leg_envelope().center().unwrap() - (0.02 + 0.01)).abs() < 1e-15);
        assert_eq!(s.qubit_leg(0.03), 0.58);
        assert_eq!(s.chirp_drive(0.5), Some(s.optical(0.5)));
        assert_eq!(s.with_chirp(ChirpMode::Constant).chirp_drive(0.5), Some(3000.0));
    }

    #[test]
    fn schedule_rejects_out_of_range_amplitudes() {
        let g = |a| Envelope::gaussian(a, 0.0, 1.0).unwrap();
        assert!(PulseSchedule::new(g(0.59), g(1.0), ChirpMode::Zero).is_err());
        assert!(PulseSchedule::new(g(-0.59), g(1.0), ChirpMode::Zero).is_err());
        assert!(PulseSchedule::new(g(0.58), g(-1.0), ChirpMode::Zero).is_err());
        assert!(PulseSchedule::new(g(0.58), g(1.0), ChirpMode::Zero).is_ok());
    }

    #[test]
    fn envelope_serde_round_trip() {
        let e = Envelope::sech(200.0, 5.0, 2.0).unwrap();
        let s = serde_json::to_string(&e).unwrap();
        assert!(s.contains("\"shape\":\"sech\""));
        let back: Envelope<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }
}
