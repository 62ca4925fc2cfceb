//! Limiting-regime table for a rectangular barrier in lab or natural units.

use larmor::analytic::{table1_regime, RectangularBarrier, Regime};
use larmor::units::{Dimension, ParticleSpec, Scales, UnitSystem};

use crate::error::Result;
use crate::table::{Cell, Table};

#[derive(Debug, Clone, PartialEq)]
pub struct LimitsSpec {
    pub v0_nk: f64,
    pub width_um: f64,
    pub e_over_v0: f64,
    pub particle: ParticleSpec,
    pub natural_units: bool,
}

/// One row per requested regime (all four when `regime` is `None`).
pub fn limits_table(spec: &LimitsSpec, regime: Option<Regime>) -> Result<Table> {
    let units = UnitSystem::CODATA;
    let v0 = units.energy_from_temperature(spec.v0_nk * 1e-9)?;
    let scales = Scales::new(&units, &spec.particle, v0)?;
    let width = scales.to_dimensionless(Dimension::Length, spec.width_um * 1e-6);
    let barrier = RectangularBarrier::new(1.0, width)?;
    let unit = if spec.natural_units { 1.0 } else { scales.time_scale * 1e3 };
    let suffix = if spec.natural_units { "nat" } else { "ms" };

    let mut columns = vec!["regime".to_owned()];
    columns.extend(["tau_y", "tau_z", "att_b", "att_s", "att_f"].map(|c| format!("{c}_{suffix}")));
    let mut table = Table::new(columns);
    let regimes = regime.map_or(Regime::ALL.to_vec(), |r| vec![r]);
    for r in regimes {
        let row = table1_regime(r, &barrier, spec.e_over_v0)?;
        let cell = |v: larmor::Extended| Cell::from(v.map(|t| t * unit));
        table.push(vec![
            Cell::from(r.name()),
            cell(row.tau_y),
            cell(row.tau_z),
            cell(row.att_b),
            cell(row.att_s),
            cell(row.att_f),
        ]);
    }
    Ok(table)
}
