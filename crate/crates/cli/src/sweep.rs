//! Parameter sweeps in lab or natural units.

use rayon::prelude::*;

use larmor::analytic::RectangularBarrier;
use larmor::att::AttTriple;
use larmor::scattering::{larmor_times_numeric, PotentialProfile, WeakFieldConfig, DEFAULT_SEGMENTS, DEFAULT_SUPPORT};
use larmor::units::{traversal_time, Dimension, ParticleSpec, Scales, UnitSystem};
use larmor::Extended;

use crate::error::{PipelineError, Result};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, PartialEq)]
pub enum BarrierKind {
    Rectangular,
    Gaussian,
    /// Piecewise-linear profile sampled at `y` (μm) with heights `v` (nK).
    /// The width parameter is ignored; the sweep axis must be `E/V0`.
    Tabulated { y_um: Vec<f64>, v_nk: Vec<f64> },
}

/// How the `--width-um` value of a Gaussian barrier is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WidthConvention {
    #[default]
    Sigma,
    Fwhm,
    /// `1/e²` intensity radius of a laser beam, `w = 2σ`.
    Waist,
}

impl WidthConvention {
    pub fn sigma(&self, width: f64) -> f64 {
        match self {
            WidthConvention::Sigma => width,
            WidthConvention::Fwhm => width / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt()),
            WidthConvention::Waist => width / 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Energy in units of `V0`, width fixed.
    EnergyRatio,
    /// Width in units of the nominal width, energy fixed.
    WidthRatio,
}

impl Axis {
    pub fn column(&self) -> &'static str {
        match self {
            Axis::EnergyRatio => "e_over_v0",
            Axis::WidthRatio => "l_over_l0",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub barrier: BarrierKind,
    pub v0_nk: f64,
    pub width_um: f64,
    pub width_convention: WidthConvention,
    pub particle: ParticleSpec,
    pub axis: Axis,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub engine: Engine,
    pub natural_units: bool,
    /// `E/V0` held fixed on a width sweep.
    pub energy_ratio: f64,
    pub segments: usize,
    pub support: f64,
    pub weak_field: WeakFieldConfig,
}

impl SweepSpec {
    /// Rectangular energy sweep with the lab defaults (⁸⁷Rb, analytic engine).
    pub fn new(v0_nk: f64, width_um: f64) -> Self {
        Self {
            barrier: BarrierKind::Rectangular,
            v0_nk,
            width_um,
            width_convention: WidthConvention::Sigma,
            particle: ParticleSpec::rb87(),
            axis: Axis::EnergyRatio,
            from: 0.05,
            to: 0.95,
            points: 19,
            engine: Engine::Analytic,
            natural_units: false,
            energy_ratio: 0.5,
            segments: DEFAULT_SEGMENTS,
            support: DEFAULT_SUPPORT,
            weak_field: WeakFieldConfig::default(),
        }
    }

    pub fn with_axis(mut self, axis: Axis, from: f64, to: f64, points: usize) -> Self {
        self.axis = axis;
        self.from = from;
        self.to = to;
        self.points = points;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(PipelineError::Config(m));
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(self.v0_nk) {
            return cfg(format!("V0 must be positive, got {} nK", self.v0_nk));
        }
        if !matches!(self.barrier, BarrierKind::Tabulated { .. }) && !positive(self.width_um) {
            return cfg(format!("width must be positive, got {} um", self.width_um));
        }
        if self.points == 0 {
            return cfg("a sweep needs at least one point".into());
        }
        if !(positive(self.from) && positive(self.to)) {
            return cfg(format!("sweep range must be positive, got [{}, {}]", self.from, self.to));
        }
        if self.points == 1 && self.from != self.to {
            return cfg("a single-point sweep needs --from equal to --to".into());
        }
        if self.axis == Axis::WidthRatio && !positive(self.energy_ratio) {
            return cfg(format!("fixed E/V0 must be positive, got {}", self.energy_ratio));
        }
        if self.engine == Engine::Analytic && self.barrier != BarrierKind::Rectangular {
            return cfg("the analytic engine handles rectangular barriers only".into());
        }
        if matches!(self.barrier, BarrierKind::Tabulated { .. }) && self.axis == Axis::WidthRatio {
            return cfg("tabulated profiles cannot be swept in width".into());
        }
        Ok(())
    }

    pub fn axis_values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.from];
        }
        let step = (self.to - self.from) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.to } else { self.from + i as f64 * step })
            .collect()
    }

    fn scales(&self) -> Result<Scales> {
        let units = UnitSystem::CODATA;
        let v0 = units.energy_from_temperature(self.v0_nk * 1e-9)?;
        Ok(Scales::new(&units, &self.particle, v0)?)
    }

    /// Dimensionless profile for a width multiplier `stretch`.
    fn profile(&self, scales: &Scales, stretch: f64) -> Result<PotentialProfile> {
        let length = |um: f64| scales.to_dimensionless(Dimension::Length, um * 1e-6);
        let profile = match &self.barrier {
            BarrierKind::Rectangular => PotentialProfile::rectangular(1.0, stretch * length(self.width_um))?,
            BarrierKind::Gaussian => {
                let sigma = stretch * length(self.width_convention.sigma(self.width_um));
                PotentialProfile::gaussian(1.0, sigma, self.support, self.segments)?
            }
            BarrierKind::Tabulated { y_um, v_nk } => PotentialProfile::tabulated(
                y_um.iter().map(|&y| length(y)).collect(),
                v_nk.iter().map(|&v| v / self.v0_nk).collect(),
            )?,
        };
        Ok(profile)
    }

    /// Length used for the classical time: the rectangle width, the FWHM of
    /// a Gaussian, or the support of a tabulated profile.
    fn classical_length(profile: &PotentialProfile) -> f64 {
        use larmor::scattering::Shape;
        match &profile.shape {
            Shape::Rectangular { width, .. } => *width,
            Shape::Gaussian { sigma, .. } => 2.0 * (2.0 * std::f64::consts::LN_2).sqrt() * sigma,
            Shape::Tabulated { .. } => profile.window.1 - profile.window.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub tau_y: f64,
    pub tau_z: f64,
    pub att_b: Extended,
    pub att_s: Extended,
    pub att_f: Extended,
    /// Classical time above/below the barrier; `None` at `E = V0`.
    pub tau_c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub axis: Axis,
    pub natural_units: bool,
    pub rows: Vec<SweepRow>,
}

/// Evaluates every point of the sweep in parallel; rows come back ordered
/// by axis value.
pub fn sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let scales = spec.scales()?;
    let unit = if spec.natural_units { 1.0 } else { scales.time_scale * 1e3 };
    let base = if spec.axis == Axis::EnergyRatio { Some(spec.profile(&scales, 1.0)?) } else { None };

    let mut rows = spec
        .axis_values()
        .into_par_iter()
        .map(|x| {
            let (energy, profile) = match (&base, spec.axis) {
                (Some(p), _) => (x, p.clone()),
                (None, _) => (spec.energy_ratio, spec.profile(&scales, x)?),
            };
            let times = match spec.engine {
                Engine::Analytic => {
                    let width = SweepSpec::classical_length(&profile);
                    RectangularBarrier::new(1.0, width)?.larmor_times(energy)?
                }
                Engine::Numeric => larmor_times_numeric(&profile, energy, &spec.weak_field)?,
            };
            let att = AttTriple::from_times(&times)?;
            let tau_c = traversal_time(1.0, SweepSpec::classical_length(&profile), 1.0, energy).ok();
            let scale = |v: Extended| v.map(|t| t * unit);
            Ok(SweepRow {
                axis_value: x,
                tau_y: times.tau_y * unit,
                tau_z: times.tau_z * unit,
                att_b: scale(att.att_b),
                att_s: scale(att.att_s),
                att_f: scale(att.att_f),
                tau_c: tau_c.map(|t| t * unit),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.axis_value.total_cmp(&b.axis_value));
    Ok(SweepTable {
        axis: spec.axis,
        natural_units: spec.natural_units,
        rows,
    })
}

impl SweepTable {
    pub fn to_table(&self) -> Table {
        let suffix = if self.natural_units { "nat" } else { "ms" };
        let mut columns = vec![self.axis.column().to_owned()];
        columns.extend(["tau_y", "tau_z", "att_b", "att_s", "att_f", "tau_c"].map(|c| format!("{c}_{suffix}")));
        let mut table = Table::new(columns);
        for r in &self.rows {
            table.push(vec![
                Cell::from(r.axis_value),
                Cell::from(r.tau_y),
                Cell::from(r.tau_z),
                Cell::from(r.att_b),
                Cell::from(r.att_s),
                Cell::from(r.att_f),
                Cell::from(r.tau_c),
            ]);
        }
        table
    }
}

/// Reads a two-column `y_um,v_nK` profile file.
pub fn read_profile_csv(text: &str) -> Result<BarrierKind> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| PipelineError::parse(e.position().map_or(1, |p| p.line()), e.to_string()))?;
    if headers.iter().collect::<Vec<_>>() != ["y_um", "v_nK"] {
        let line = headers.position().map_or(1, |p| p.line());
        return Err(PipelineError::parse(line, "profile header must be 'y_um,v_nK'"));
    }
    let (mut y_um, mut v_nk) = (Vec::new(), Vec::new());
    for record in reader.records() {
        let record = record.map_err(|e| PipelineError::parse(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let num = |i: usize| {
            record
                .get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .ok_or_else(|| PipelineError::parse(line, format!("non-numeric cell in column {}", i + 1)))
        };
        let y = num(0)?;
        if y_um.last().is_some_and(|&prev| y <= prev) {
            return Err(PipelineError::parse(line, "y_um must be strictly increasing"));
        }
        y_um.push(y);
        v_nk.push(num(1)?);
    }
    if y_um.len() < 2 {
        return Err(PipelineError::parse(0, "profile needs at least two samples"));
    }
    Ok(BarrierKind::Tabulated { y_um, v_nk })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab() -> SweepSpec {
        SweepSpec::new(135.0, 1.3)
    }

    #[test]
    fn widths_conventions() {
        let fwhm = 2.0 * (2.0 * std::f64::consts::LN_2).sqrt();
        assert!((WidthConvention::Fwhm.sigma(fwhm) - 1.0).abs() < 1e-15);
        assert_eq!(WidthConvention::Waist.sigma(2.0), 1.0);
        assert_eq!(WidthConvention::Sigma.sigma(2.0), 2.0);
    }

    #[test]
    fn axis_grid_hits_endpoints() {
        let s = lab().with_axis(Axis::EnergyRatio, 0.1, 0.9, 5);
        let v = s.axis_values();
        assert_eq!(v.first(), Some(&0.1));
        assert_eq!(v.last(), Some(&0.9));
        assert!((v[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn engine_kind_mismatch_is_config_error() {
        let mut s = lab();
        s.barrier = BarrierKind::Gaussian;
        assert!(matches!(sweep(&s), Err(PipelineError::Config(_))));
        s.engine = Engine::Numeric;
        s.points = 1;
        s.from = 0.5;
        s.to = 0.5;
        assert!(sweep(&s).is_ok());
    }

    #[test]
    fn bad_ranges_rejected() {
        assert!(lab().with_axis(Axis::EnergyRatio, 0.0, 0.5, 3).validate().is_err());
        assert!(lab().with_axis(Axis::EnergyRatio, 0.1, 0.5, 0).validate().is_err());
        assert!(lab().with_axis(Axis::EnergyRatio, 0.1, 0.5, 1).validate().is_err());
        let mut s = lab();
        s.v0_nk = -1.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn gap_row_at_barrier_top() {
        let t = sweep(&lab().with_axis(Axis::EnergyRatio, 0.5, 1.5, 3)).unwrap();
        assert!(t.rows[0].tau_c.is_some());
        assert_eq!(t.rows[1].tau_c, None);
        assert!(t.rows[1].tau_y.is_finite());
        let table = t.to_table();
        assert_eq!(table.rows[1][6], Cell::Empty);
    }

    #[test]
    fn rows_sorted_even_for_reversed_range() {
        let t = sweep(&lab().with_axis(Axis::EnergyRatio, 0.9, 0.1, 9)).unwrap();
        assert!(t.rows.windows(2).all(|w| w[0].axis_value < w[1].axis_value));
    }

    #[test]
    fn natural_units_match_barrier() {
        let mut s = lab().with_axis(Axis::EnergyRatio, 0.5, 0.5, 1);
        s.natural_units = true;
        let row = sweep(&s).unwrap().rows[0];
        let scales = s.scales().unwrap();
        let l = scales.to_dimensionless(Dimension::Length, 1.3e-6);
        let tau = RectangularBarrier::new(1.0, l).unwrap().larmor_times(0.5).unwrap();
        assert!((row.tau_y - tau.tau_y).abs() < 1e-14 * tau.tau_y);
        assert!((row.tau_z - tau.tau_z).abs() < 1e-14 * tau.tau_z);
    }

    #[test]
    fn tabulated_profile_reads_and_runs() {
        let kind = read_profile_csv("y_um,v_nK\n0,0\n0.65,135\n1.3,0\n").unwrap();
        let mut s = lab().with_axis(Axis::EnergyRatio, 0.5, 0.5, 1);
        s.barrier = kind;
        s.engine = Engine::Numeric;
        let row = sweep(&s).unwrap().rows[0];
        assert!(row.tau_y > 0.0 && row.tau_z > 0.0);
        assert!(read_profile_csv("y_um,v_nK\n0,0\n0,1\n").is_err());
        assert!(read_profile_csv("y,v\n0,0\n1,1\n").is_err());
    }
}
