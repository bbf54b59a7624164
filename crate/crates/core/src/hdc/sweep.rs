use serde::Serialize;

use crate::error::{Error, Result};
use crate::tcam::formula::{ml_voltage_closed_form, search_energy};

use super::model::BlockPlan;

/// Fixed SRAM-TCAM reference energy for one D = 10,000 comparison in blocks of 10 bits (J).
pub const SRAM_REF_D10000_BLOCK10: f64 = 1.29e-12;

/// SRAM reference energy, available only for the single published configuration.
pub fn sram_reference(d_bits: usize, block_size: usize) -> Option<f64> {
    (d_bits == 10_000 && block_size == 10).then_some(SRAM_REF_D10000_BLOCK10)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub d_bits: usize,
    pub block_size: usize,
    /// FeSQUID TCAM energy for one D-bit comparison (J).
    pub energy_fesquid: f64,
    pub energy_sram_ref: Option<f64>,
    pub accuracy: Option<f64>,
}

/// Energy of comparing one D-bit class vector, split into rows of `block_size`
/// bits with `round(match_fraction · block_size)` matching bits per row.
pub fn comparison_energy(d_bits: usize, block_size: usize, match_fraction: f64, plan: &BlockPlan) -> Result<f64> {
    if block_size == 0 || !d_bits.is_multiple_of(block_size) {
        return Err(Error::Usage(format!(
            "block size {block_size} does not divide D = {d_bits}"
        )));
    }
    if !(0.0..=1.0).contains(&match_fraction) {
        return Err(Error::Domain(format!(
            "match fraction must lie in [0, 1] (got {match_fraction})"
        )));
    }
    let n_match = (match_fraction * block_size as f64).round() as usize;
    let v = ml_voltage_closed_form(block_size, n_match, plan.i_rwl_per_bit)?;
    let per_block = search_energy(v, block_size, plan.i_rwl_per_bit, plan.t_search);
    Ok(per_block * (d_bits / block_size) as f64)
}

/// Per-comparison energy for every (D, block size) pair.
pub fn energy_sweep(
    dims: &[usize],
    block_sizes: &[usize],
    match_fraction: f64,
    plan: &BlockPlan,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(dims.len() * block_sizes.len());
    for &d in dims {
        for &bs in block_sizes {
            rows.push(SweepRow {
                d_bits: d,
                block_size: bs,
                energy_fesquid: comparison_energy(d, bs, match_fraction, plan)?,
                energy_sram_ref: sram_reference(d, bs),
                accuracy: None,
            });
        }
    }
    Ok(rows)
}
