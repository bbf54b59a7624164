//! Closed-form match-line voltage, search energy and exact-mode bias calibration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Resistive hTron branch (Ω).
pub const R_HTRON_OFF: f64 = 50e3;
/// FeSQUID resistance of a matching cell at the HD bias (Ω).
pub const R_MATCH: f64 = 1.8e3;
/// FeSQUID resistance of a mismatching cell at the HD bias (Ω).
pub const R_MISMATCH: f64 = 0.9e3;
/// hTron switching time, the only delay in a search (s).
pub const T_SEARCH: f64 = 0.3e-9;
/// Per-bit RWL current in HD mode (A).
pub const I_RWL_HD: f64 = 5e-6;

/// Match-line voltage of an `n_bits` HD-mode row with `n_match` matching bits.
pub fn ml_voltage_closed_form(n_bits: usize, n_match: usize, i_rwl_per_bit: f64) -> Result<f64> {
    if n_bits == 0 {
        return Err(Error::Domain("n_bits must be >= 1".into()));
    }
    if n_match > n_bits {
        return Err(Error::Domain(format!(
            "n_match ({n_match}) exceeds n_bits ({n_bits})"
        )));
    }
    let n = n_bits as f64;
    let m = n_match as f64;
    let g = n / R_HTRON_OFF + m / R_MATCH + (n - m) / R_MISMATCH;
    Ok(n * i_rwl_per_bit / g)
}

/// Inverts [`ml_voltage_closed_form`] to the nearest feasible match count.
pub fn decode_n_match(n_bits: usize, v_ml: f64, i_rwl_per_bit: f64) -> Result<usize> {
    if n_bits == 0 || !(v_ml > 0.0) || !(i_rwl_per_bit > 0.0) {
        return Err(Error::Domain(format!(
            "cannot decode v_ml = {v_ml} V for {n_bits} bits at {i_rwl_per_bit} A"
        )));
    }
    let n = n_bits as f64;
    let g = n * i_rwl_per_bit / v_ml;
    let m = (n / R_HTRON_OFF + n / R_MISMATCH - g) / (1.0 / R_MISMATCH - 1.0 / R_MATCH);
    Ok(m.round().clamp(0.0, n) as usize)
}

/// E = n_bits · I_RWL · V_ML · t_search.
pub fn search_energy(v_ml: f64, n_bits: usize, i_rwl_per_bit: f64, t_search: f64) -> f64 {
    n_bits as f64 * i_rwl_per_bit * v_ml * t_search
}

/// Exact-mode bias recovered from measured average energies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactCalibration {
    /// RWL current (A).
    pub i_rwl: f64,
    /// Resistance of a switched FeSQUID at that bias (Ω).
    pub r_fs: f64,
}

/// Solves for (I_RWL, r_fs) given the 1-bit binary-search and ternary-search
/// average energies (J).
///
/// Over {00, 01, 10, 11} only the two matches dissipate, so the binary
/// average is E_match / 2. The six ternary cases add two don't-care searches
/// with both hTrons resistive, so the ternary average is
/// (2 E_match + 2 E_dontcare) / 6. With E_match = I² (r_fs ∥ R_off) t and
/// E_dontcare = I² (R_off / 2) t the pair has a single positive solution.
pub fn calibrate_exact_bias(
    binary_avg: f64,
    ternary_avg: f64,
    t_search: f64,
    r_off: f64,
) -> Result<ExactCalibration> {
    if !(binary_avg > 0.0) || !(ternary_avg > 0.0) {
        return Err(Error::Calibration(format!(
            "targets must be positive (binary {binary_avg} J, ternary {ternary_avg} J)"
        )));
    }
    let e_match = 2.0 * binary_avg;
    let e_dontcare = 3.0 * ternary_avg - e_match;
    if !(e_dontcare > 0.0) {
        return Err(Error::Calibration(format!(
            "ternary average {ternary_avg} J too small for binary average {binary_avg} J"
        )));
    }
    let i2 = e_dontcare / (0.5 * r_off * t_search);
    let r_par = e_match / (i2 * t_search);
    if !(r_par < r_off) {
        return Err(Error::Calibration(format!(
            "matched-cell resistance {r_par} Ω would exceed the hTron off resistance {r_off} Ω"
        )));
    }
    Ok(ExactCalibration {
        i_rwl: i2.sqrt(),
        r_fs: 1.0 / (1.0 / r_par - 1.0 / r_off),
    })
}

/// Average exact-mode energies (binary, ternary) from the closed forms.
pub fn exact_mode_averages(cal: ExactCalibration, t_search: f64, r_off: f64) -> (f64, f64) {
    let i2 = cal.i_rwl * cal.i_rwl;
    let r_par = 1.0 / (1.0 / cal.r_fs + 1.0 / r_off);
    let e_match = i2 * r_par * t_search;
    let e_dc = i2 * 0.5 * r_off * t_search;
    (e_match / 2.0, (2.0 * e_match + 2.0 * e_dc) / 6.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_reference_points() {
        // 20 µA / (4/50k + 4/1.8k)
        let v = ml_voltage_closed_form(4, 4, 5e-6).unwrap();
        assert!((v - 20e-6 / (4.0 / 50e3 + 4.0 / 1.8e3)).abs() < 1e-15);
        assert!((v - 8.687e-3).abs() < 1e-5);
        let v = ml_voltage_closed_form(4, 0, 5e-6).unwrap();
        assert!((v - 4.42e-3).abs() < 5e-6);
        let v = ml_voltage_closed_form(10_000, 5_000, 5e-6).unwrap();
        assert!((v - 5.86e-3).abs() < 5e-6);
        let v = ml_voltage_closed_form(1, 1, 5e-6).unwrap();
        assert!((v - 8.69e-3).abs() < 5e-6);
        assert_eq!(ml_voltage_closed_form(4, 2, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_domain() {
        assert!(ml_voltage_closed_form(4, 5, 5e-6).is_err());
        assert!(ml_voltage_closed_form(0, 0, 5e-6).is_err());
    }

    #[test]
    fn ratio_invariance() {
        for (n, m) in [(1, 0), (3, 2), (10, 5), (37, 11)] {
            let a = ml_voltage_closed_form(n, m, 5e-6).unwrap();
            let b = ml_voltage_closed_form(2 * n, 2 * m, 5e-6).unwrap();
            assert!(((a - b) / a).abs() < 1e-14);
        }
    }

    #[test]
    fn energy_per_comparison() {
        let v = ml_voltage_closed_form(10_000, 5_000, I_RWL_HD).unwrap();
        let e = search_energy(v, 10_000, I_RWL_HD, T_SEARCH);
        assert!((e - 87.89e-15).abs() < 0.05e-15);
        assert!(((e - 89.4e-15) / 89.4e-15).abs() < 0.03);
        let v = ml_voltage_closed_form(5_000, 2_500, I_RWL_HD).unwrap();
        let e = search_energy(v, 5_000, I_RWL_HD, T_SEARCH);
        assert!(((e - 44.7e-15) / 44.7e-15).abs() < 0.03);
        assert_eq!(search_energy(0.0, 10, 5e-6, T_SEARCH), 0.0);
    }

    #[test]
    fn decode_round_trip() {
        for n in 1..=64 {
            for m in 0..=n {
                let v = ml_voltage_closed_form(n, m, I_RWL_HD).unwrap();
                assert_eq!(decode_n_match(n, v, I_RWL_HD).unwrap(), m);
            }
        }
    }

    #[test]
    fn calibration_recovers_bias() {
        // Hand inversion: E_match = 2.72 aJ, E_dc = 3·26.5 − 2.72 = 76.78 aJ,
        // I² = E_dc / (25 kΩ · 0.3 ns) → I = 3.19958 µA; r∥ = 885.65 Ω → r_fs = 901.62 Ω.
        let c = calibrate_exact_bias(1.36e-18, 26.5e-18, T_SEARCH, R_HTRON_OFF).unwrap();
        assert!((c.i_rwl - 3.199_583_306e-6).abs() < 1e-14, "{}", c.i_rwl);
        assert!((c.r_fs - 901.617_608).abs() < 1e-5, "{}", c.r_fs);
        let (b, t) = exact_mode_averages(c, T_SEARCH, R_HTRON_OFF);
        assert!(((b - 1.36e-18) / 1.36e-18).abs() < 1e-12);
        assert!(((t - 26.5e-18) / 26.5e-18).abs() < 1e-12);
    }

    #[test]
    fn calibration_scales_with_sqrt_energy() {
        let a = calibrate_exact_bias(1.36e-18, 26.5e-18, T_SEARCH, R_HTRON_OFF).unwrap();
        let b = calibrate_exact_bias(2.72e-18, 53.0e-18, T_SEARCH, R_HTRON_OFF).unwrap();
        assert!((b.i_rwl / a.i_rwl - 2f64.sqrt()).abs() < 1e-12);
        assert!(((b.r_fs - a.r_fs) / a.r_fs).abs() < 1e-12);
    }

    #[test]
    fn calibration_rejects_infeasible_targets() {
        assert!(calibrate_exact_bias(0.0, 26.5e-18, T_SEARCH, R_HTRON_OFF).is_err());
        assert!(calibrate_exact_bias(10e-18, 5e-18, T_SEARCH, R_HTRON_OFF).is_err());
        // binary average so large that r∥ would exceed 50 kΩ
        assert!(calibrate_exact_bias(10e-18, 7.0e-18, T_SEARCH, R_HTRON_OFF).is_err());
    }
}
