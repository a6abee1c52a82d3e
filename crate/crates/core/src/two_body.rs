//! Renormalized two-magnon T-matrices on the negative energy axis.
//!
//! For z ∈ (1, 2) a single contact coupling suffices and the T-matrix is
//! parameterized by G. At z = 1 (α = 2) the loop has an extra logarithmic
//! divergence and a dynamical dimer is needed, giving the scattering length
//! a and effective range R.

use crate::error::{Error, Result};
use crate::roots::bisect;
use crate::special::gamma;
use serde::Serialize;
use std::f64::consts::{E, LN_2, PI};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Channel {
    /// Contact interaction; `inv_g` is 1/G, zero on resonance.
    SingleChannel { inv_g: f64 },
    /// Dynamical dimer; `inv_a` is 1/a (zero on resonance), `range_r` is R.
    TwoChannel { inv_a: f64, range_r: f64 },
}

impl Channel {
    pub fn name(&self) -> &'static str {
        match self {
            Channel::SingleChannel { .. } => "single-channel",
            Channel::TwoChannel { .. } => "two-channel",
        }
    }

    pub fn is_resonant(&self) -> bool {
        match *self {
            Channel::SingleChannel { inv_g } => inv_g == 0.0,
            Channel::TwoChannel { inv_a, .. } => inv_a == 0.0,
        }
    }
}

/// Continuum parameters of the effective theory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EftParams {
    pub z: f64,
    pub u: f64,
    /// Momentum cutoff Λ.
    pub lambda: f64,
    pub channel: Channel,
}

fn check_scale(u: f64, lambda: f64) -> Result<()> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::domain(format!("dispersion coefficient u must be positive, got {u}")));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!("cutoff Lambda must be positive, got {lambda}")));
    }
    Ok(())
}

fn check_single_z(z: f64) -> Result<()> {
    if !(z > 1.0 && z < 2.0) {
        return Err(Error::domain(format!("single-channel theory needs z in (1, 2), got {z}")));
    }
    Ok(())
}

impl EftParams {
    pub fn single_channel(z: f64, u: f64, lambda: f64, inv_g: f64) -> Result<Self> {
        check_single_z(z)?;
        check_scale(u, lambda)?;
        if !inv_g.is_finite() {
            return Err(Error::domain(format!("1/G must be finite, got {inv_g}")));
        }
        Ok(Self { z, u, lambda, channel: Channel::SingleChannel { inv_g } })
    }

    /// Single channel on the two-body resonance G = ∞.
    pub fn resonant_single(z: f64, u: f64, lambda: f64) -> Result<Self> {
        Self::single_channel(z, u, lambda, 0.0)
    }

    pub fn two_channel(u: f64, lambda: f64, inv_a: f64, range_r: f64) -> Result<Self> {
        check_scale(u, lambda)?;
        if !inv_a.is_finite() {
            return Err(Error::domain(format!("1/a must be finite, got {inv_a}")));
        }
        if !(range_r > 0.0) {
            return Err(Error::domain(format!("effective range R must be positive, got {range_r}")));
        }
        if !(lambda * range_r < 1.0) {
            return Err(Error::guard(format!(
                "two-channel theory needs Lambda*R < 1, got {}",
                lambda * range_r
            )));
        }
        Ok(Self { z: 1.0, u, lambda, channel: Channel::TwoChannel { inv_a, range_r } })
    }

    /// Two channel on the resonance a = ∞ with the given Λ·R.
    pub fn resonant_two_channel(u: f64, lambda: f64, lambda_r: f64) -> Result<Self> {
        Self::two_channel(u, lambda, 0.0, lambda_r / lambda)
    }

    /// Magnon energy ε_q = u|q|^z measured from the band bottom.
    pub fn energy(&self, q: f64) -> f64 {
        self.u * q.abs().powf(self.z)
    }
}

/// B(z) = −2^{−(z+2)/z} csc(π/z) Γ(1/2 − 1/z) Γ(1/z) / (π^{3/2} z²), the
/// coefficient of the finite part of the resonant single-channel loop.
pub fn b_coefficient(z: f64) -> Result<f64> {
    check_single_z(z)?;
    let csc = 1.0 / (PI / z).sin();
    Ok(-(2f64).powf(-(z + 2.0) / z) * csc * gamma(0.5 - 1.0 / z) * gamma(1.0 / z)
        / (PI.powf(1.5) * z * z))
}

fn check_negative(energy: f64, what: &str) -> Result<()> {
    if !(energy < 0.0) {
        return Err(Error::domain(format!(
            "{what} is only defined for negative energy, got {energy}"
        )));
    }
    Ok(())
}

/// One-magnon loop ∫dq/(2π) 1/(A − u|q|^z) at A < 0.
///
/// z ∈ (1, 2): infinite limits, −csc(π/z)|A|^{(1−z)/z}/(z u^{1/z}).
/// z = 1: limits ±Λ, −ln(1 + uΛ/|A|)/(πu).
pub fn loop_integral(a: f64, eft: &EftParams) -> Result<f64> {
    check_negative(a, "loop integral")?;
    let (z, u) = (eft.z, eft.u);
    if z == 1.0 {
        return Ok(-(u * eft.lambda / -a).ln_1p() / (PI * u));
    }
    check_single_z(z)?;
    let csc = 1.0 / (PI / z).sin();
    Ok(-csc * (-a).powf((1.0 - z) / z) / (z * u.powf(1.0 / z)))
}

/// z = 1 loop with the large-cutoff logarithm, −ln(uΛ/|A|)/(πu). Differs
/// from [`loop_integral`] by O(|A|/uΛ); this is the form whose cutoff
/// dependence the two-channel renormalization absorbs.
pub fn loop_integral_large_cutoff(a: f64, eft: &EftParams) -> Result<f64> {
    check_negative(a, "loop integral")?;
    if eft.z != 1.0 {
        return Err(Error::domain(format!("large-cutoff loop form is for z = 1, got {}", eft.z)));
    }
    Ok(-(eft.u * eft.lambda / -a).ln() / (PI * eft.u))
}

/// Inverse T-matrix on the negative real axis.
///
/// Single channel: 1/G − B(z) u^{−2/z} (−E)^{(2−z)/z}.
/// Two channel: 1/a − E ln(−E R/u) / (2π²u²).
pub fn t_inverse(energy: f64, eft: &EftParams) -> Result<f64> {
    check_negative(energy, "T-matrix")?;
    match eft.channel {
        Channel::SingleChannel { inv_g } => {
            let z = eft.z;
            let b = b_coefficient(z)?;
            Ok(inv_g - b * eft.u.powf(-2.0 / z) * (-energy).powf((2.0 - z) / z))
        }
        Channel::TwoChannel { inv_a, range_r } => {
            let u = eft.u;
            Ok(inv_a - energy * (-energy * range_r / u).ln() / (2.0 * PI * PI * u * u))
        }
    }
}

/// Cutoff-dependent counterterm csc(π/z) Λ^{2−z} / (2π u z (2−z)).
fn single_counterterm(eft: &EftParams) -> Result<f64> {
    let z = eft.z;
    check_single_z(z)?;
    let csc = 1.0 / (PI / z).sin();
    Ok(csc * eft.lambda.powf(2.0 - z) / (2.0 * PI * eft.u * z * (2.0 - z)))
}

/// 1/G from the bare coupling g: 1/G = 1/(2g) + csc(π/z)Λ^{2−z}/(2πuz(2−z)).
pub fn renormalize_single(g: f64, eft: &EftParams) -> Result<f64> {
    if g == 0.0 || !g.is_finite() {
        return Err(Error::domain(format!("bare coupling g must be finite and nonzero, got {g}")));
    }
    Ok(0.5 / g + single_counterterm(eft)?)
}

/// Bare coupling g producing the given 1/G at the cutoff of `eft`.
pub fn bare_coupling_single(inv_g: f64, eft: &EftParams) -> Result<f64> {
    let half_inv_g = inv_g - single_counterterm(eft)?;
    if half_inv_g == 0.0 {
        return Err(Error::domain("1/G equal to the counterterm needs an infinite bare coupling"));
    }
    Ok(0.5 / half_inv_g)
}

/// (1/a, R) from the bare detuning ν₀ and coupling g₀:
/// 1/a = −ν₀/g₀² + ln2·Λ/(π²u), R = (2/(Λe)) exp(−2π²u²/g₀²).
pub fn renormalize_two_channel(nu0: f64, g0: f64, eft: &EftParams) -> Result<(f64, f64)> {
    if eft.z != 1.0 {
        return Err(Error::domain(format!("two-channel renormalization needs z = 1, got {}", eft.z)));
    }
    if g0 == 0.0 || !g0.is_finite() {
        return Err(Error::domain(format!("bare coupling g0 must be finite and nonzero, got {g0}")));
    }
    let (u, lambda) = (eft.u, eft.lambda);
    let g2 = g0 * g0;
    let inv_a = -nu0 / g2 + LN_2 * lambda / (PI * PI * u);
    let r = 2.0 / (lambda * E) * (-2.0 * PI * PI * u * u / g2).exp();
    Ok((inv_a, r))
}

/// Bare (ν₀, g₀ > 0) reproducing (1/a, R); needs R·Λ·e/2 < 1.
pub fn bare_two_channel(inv_a: f64, range_r: f64, eft: &EftParams) -> Result<(f64, f64)> {
    if eft.z != 1.0 {
        return Err(Error::domain(format!("two-channel renormalization needs z = 1, got {}", eft.z)));
    }
    let (u, lambda) = (eft.u, eft.lambda);
    let log = (range_r * lambda * E / 2.0).ln();
    if !(log < 0.0) {
        return Err(Error::domain(format!(
            "R*Lambda*e/2 must be below 1 for a real bare coupling, got {}",
            range_r * lambda * E / 2.0
        )));
    }
    let g2 = -2.0 * PI * PI * u * u / log;
    let nu0 = g2 * (LN_2 * lambda / (PI * PI * u) - inv_a);
    Ok((nu0, g2.sqrt()))
}

/// Shallow two-magnon bound state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum DimerBinding {
    /// Binding energy |E₂| > 0.
    Bound(f64),
    NoShallowDimer,
}

impl DimerBinding {
    pub fn energy(&self) -> Option<f64> {
        match *self {
            DimerBinding::Bound(e) => Some(e),
            DimerBinding::NoShallowDimer => None,
        }
    }
}

/// Lowest representable ln|E| for the pole search.
const LN_E_FLOOR: f64 = -740.0;

/// Pole of T on the negative axis, by bisection in ln|E|. The two-channel
/// search stops at |E| = u/(eR), below the regulator pole at |E| = u/R.
pub fn two_body_binding(eft: &EftParams) -> Result<DimerBinding> {
    let f = |x: f64| t_inverse(-x.exp(), eft).unwrap_or(f64::NAN);
    let top = match eft.channel {
        Channel::SingleChannel { inv_g } => {
            if !(inv_g > 0.0) {
                return Ok(DimerBinding::NoShallowDimer);
            }
            700.0
        }
        Channel::TwoChannel { inv_a, range_r } => {
            if !(inv_a > 0.0) {
                return Ok(DimerBinding::NoShallowDimer);
            }
            (eft.u / (E * range_r)).ln()
        }
    };
    if f(top) >= 0.0 {
        return match eft.channel {
            Channel::TwoChannel { .. } => Ok(DimerBinding::NoShallowDimer),
            Channel::SingleChannel { .. } => Err(Error::NoConvergence(
                "dimer binding energy exceeds the floating-point range".into(),
            )),
        };
    }
    if f(LN_E_FLOOR) <= 0.0 {
        return Err(Error::NoConvergence(
            "dimer binding energy is below the floating-point range".into(),
        ));
    }
    let x = bisect(f, LN_E_FLOOR, top, 0.0)?;
    Ok(DimerBinding::Bound(x.exp()))
}
