//! Closed-form superconductor relations: the BCS gap, the Ambegaokar-Baratoff
//! critical current, and the polarization-controlled critical temperature.
//!
//! Everything here is SI. Conversions to µA / mV / K live at the CLI boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CODATA 2018 exact values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Boltzmann constant (J/K).
    pub k_b: f64,
    /// Elementary charge (C).
    pub q_e: f64,
    /// Reduced Planck constant (J s).
    pub hbar: f64,
}

pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    k_b: 1.380_649e-23,
    q_e: 1.602_176_634e-19,
    hbar: 1.054_571_817e-34,
};

/// Superconductor parameters of the SQUID electrodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperconductorParams {
    /// Critical temperature at neutral polarization (K).
    pub t_c_base: f64,
    /// Normal-state resistance (Ω).
    pub r_n: f64,
    /// Half-span of the polarization-induced T_C modulation (K).
    pub delta_tc: f64,
}

impl Default for SuperconductorParams {
    fn default() -> Self {
        Self {
            t_c_base: 9.2,
            r_n: 700.0,
            delta_tc: 2.4,
        }
    }
}

impl SuperconductorParams {
    /// Collects every violated constraint, including the requirement that the
    /// lowest reachable T_C stays above `t_op`.
    pub fn violations(&self, t_op: f64) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.t_c_base > 0.0) {
            out.push(format!("t_c_base must be > 0 K (got {})", self.t_c_base));
        }
        if !(self.r_n > 0.0) {
            out.push(format!("r_n must be > 0 Ω (got {})", self.r_n));
        }
        if !(self.delta_tc >= 0.0) {
            out.push(format!("delta_tc must be >= 0 K (got {})", self.delta_tc));
        }
        if !(t_op > 0.0) {
            out.push(format!("operating temperature must be > 0 K (got {t_op})"));
        } else if self.t_c_base - self.delta_tc <= t_op {
            out.push(format!(
                "lowest T_C ({} K) must stay above the operating temperature ({t_op} K)",
                self.t_c_base - self.delta_tc
            ));
        }
        out
    }
}

/// BCS energy gap Δ(T) = 1.763 k_B T_C tanh(2.2 sqrt(T_C/T - 1)), in joules.
pub fn bcs_gap(t: f64, t_c: f64) -> Result<f64> {
    if !(t > 0.0) || !(t <= t_c) {
        return Err(Error::Domain(format!(
            "BCS gap needs 0 < T <= T_C (T = {t} K, T_C = {t_c} K)"
        )));
    }
    if t == t_c {
        return Ok(0.0);
    }
    Ok(1.763 * CONSTANTS.k_b * t_c * (2.2 * (t_c / t - 1.0).sqrt()).tanh())
}

/// Ambegaokar-Baratoff critical current I_C = πΔ / (2 q_e R_N) · tanh(Δ / 2k_B T).
pub fn ab_critical_current(delta: f64, t: f64, r_n: f64) -> Result<f64> {
    if !(r_n > 0.0) {
        return Err(Error::Domain(format!("R_N must be > 0 Ω (got {r_n})")));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("T must be > 0 K (got {t})")));
    }
    if !(delta >= 0.0) {
        return Err(Error::Domain(format!("gap must be >= 0 J (got {delta})")));
    }
    let c = CONSTANTS;
    Ok(std::f64::consts::PI * delta / (2.0 * c.q_e * r_n) * (delta / (2.0 * c.k_b * t)).tanh())
}

/// Critical temperature for a polarization fraction `p` of P_s.
///
/// Negative remnant polarization raises T_C: p = -1 gives the high-I_C state.
pub fn tc_from_polarization(p: f64, params: &SuperconductorParams) -> Result<f64> {
    if !(p.abs() <= 1.0) {
        return Err(Error::Domain(format!(
            "polarization fraction must lie in [-1, 1] (got {p})"
        )));
    }
    Ok(params.t_c_base - p * params.delta_tc)
}

/// Critical current of a junction at temperature `t` whose ferroelectric sits
/// at polarization fraction `p`.
pub fn critical_current_at(p: f64, t: f64, params: &SuperconductorParams) -> Result<f64> {
    let t_c = tc_from_polarization(p, params)?;
    if t >= t_c {
        return Err(Error::NormalState { t_op: t, t_c });
    }
    ab_critical_current(bcs_gap(t, t_c)?, t, params.r_n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gap_vanishes_at_tc() {
        assert_eq!(bcs_gap(9.2, 9.2).unwrap(), 0.0);
    }

    #[test]
    fn gap_at_half_tc() {
        // 1.763 k_B 9.2 tanh(2.2), evaluated at 30 digits.
        assert!(rel(bcs_gap(4.6, 9.2).unwrap(), 2.185_037_649_512_765_7e-22) < 1e-12);
    }

    #[test]
    fn gap_saturates_at_low_t() {
        let zero_t = 1.763 * CONSTANTS.k_b * 9.2;
        assert!(rel(zero_t, 2.239_357_452_04e-22) < 1e-12);
        assert!(rel(bcs_gap(1e-3, 9.2).unwrap(), zero_t) < 1e-12);
    }

    #[test]
    fn gap_rejects_out_of_domain() {
        assert!(matches!(bcs_gap(0.0, 9.2), Err(Error::Domain(_))));
        assert!(matches!(bcs_gap(-1.0, 9.2), Err(Error::Domain(_))));
        assert!(matches!(bcs_gap(9.3, 9.2), Err(Error::Domain(_))));
    }

    #[test]
    fn ab_zero_gap() {
        assert_eq!(ab_critical_current(0.0, 4.0, 1e3).unwrap(), 0.0);
    }

    #[test]
    fn ab_low_temperature_limit() {
        let ic = ab_critical_current(2.24e-22, 0.1, 1e3).unwrap();
        assert!(rel(ic, 2.196_127_254_231_676e-6) < 1e-12);
    }

    #[test]
    fn ab_scales_inverse_with_rn() {
        let a = ab_critical_current(2.0e-22, 4.0, 1000.0).unwrap();
        let b = ab_critical_current(2.0e-22, 4.0, 500.0).unwrap();
        assert!(rel(b, 2.0 * a) < 1e-12);
    }

    #[test]
    fn ab_rejects_bad_inputs() {
        assert!(ab_critical_current(1e-22, 4.0, 0.0).is_err());
        assert!(ab_critical_current(1e-22, 0.0, 1e3).is_err());
        assert!(ab_critical_current(1e-22, 4.0, -5.0).is_err());
    }

    #[test]
    fn tc_map() {
        let p = SuperconductorParams {
            t_c_base: 9.2,
            r_n: 1e3,
            delta_tc: 0.4,
        };
        assert_eq!(tc_from_polarization(0.0, &p).unwrap(), 9.2);
        assert!((tc_from_polarization(-1.0, &p).unwrap() - 9.6).abs() < 1e-12);
        assert!(tc_from_polarization(-1.0, &p).unwrap() > tc_from_polarization(1.0, &p).unwrap());
        assert!(tc_from_polarization(1.01, &p).is_err());
    }

    #[test]
    fn two_level_critical_currents() {
        // Hand-evaluated through the two closed forms (mpmath, 30 digits).
        let narrow = SuperconductorParams {
            t_c_base: 9.2,
            r_n: 1e3,
            delta_tc: 0.4,
        };
        let hi = critical_current_at(-1.0, 4.0, &narrow).unwrap();
        let lo = critical_current_at(1.0, 4.0, &narrow).unwrap();
        assert!(rel(hi, 2.198_021_280_791_682e-6) < 1e-10);
        assert!(rel(lo, 1.977_447_242_482_310_4e-6) < 1e-10);

        let d = SuperconductorParams::default();
        let hi = critical_current_at(-1.0, 4.0, &d).unwrap();
        let lo = critical_current_at(1.0, 4.0, &d).unwrap();
        assert!(rel(hi, 3.888_062_841_343_659e-6) < 1e-10);
        assert!(rel(lo, 1.963_193_424_360_535_4e-6) < 1e-10);
    }

    #[test]
    fn normal_state_is_reported() {
        let p = SuperconductorParams::default();
        assert!(matches!(
            critical_current_at(1.0, 7.0, &p),
            Err(Error::NormalState { .. })
        ));
    }

    #[test]
    fn default_params_are_valid() {
        assert!(SuperconductorParams::default().violations(4.0).is_empty());
        let bad = SuperconductorParams {
            t_c_base: 5.0,
            r_n: -1.0,
            delta_tc: 2.0,
        };
        assert_eq!(bad.violations(4.0).len(), 2);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn gap_monotone_in_t(t_c in 1.0f64..20.0, a in 0.01f64..1.0, b in 0.01f64..1.0) {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                let g_lo = bcs_gap(lo * t_c, t_c).unwrap();
                let g_hi = bcs_gap(hi * t_c, t_c).unwrap();
                prop_assert!(g_hi <= g_lo);
                prop_assert!(g_hi >= 0.0);
            }

            #[test]
            fn remnant_ordering(delta_tc in 0.01f64..4.0, t_c_base in 8.5f64..12.0) {
                let p = SuperconductorParams { t_c_base, r_n: 800.0, delta_tc };
                let hi = critical_current_at(-1.0, 4.0, &p).unwrap();
                let lo = critical_current_at(1.0, 4.0, &p).unwrap();
                prop_assert!(hi > lo);
            }
        }
    }
}
