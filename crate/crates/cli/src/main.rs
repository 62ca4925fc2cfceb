use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use larmor::analytic::Regime;
use larmor::scattering::{WeakFieldConfig, DEFAULT_SEGMENTS};
use larmor::units::{ParticleSpec, CONSTANTS_VERSION};
use larmor_pipeline::limits::{limits_table, LimitsSpec};
use larmor_pipeline::measurement::{att_rows_table, parse_measurements, reduce_measurements};
use larmor_pipeline::sweep::{read_profile_csv, sweep, Axis, BarrierKind, Engine, SweepSpec, WidthConvention};
use larmor_pipeline::table::{emit, Format};
use larmor_pipeline::{PipelineError, Result};

/// Larmor-clock precession times and tunneling-time candidates.
#[derive(Parser)]
#[command(name = "larmor", disable_version_flag = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form times at a single energy on a rectangular barrier.
    Analytic {
        #[command(flatten)]
        lab: Lab,
        #[arg(long, default_value_t = 0.5)]
        e_over_v0: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Tabulate times along an energy or width axis.
    Sweep(SweepArgs),
    /// Reduce measured precession times to tunneling-time candidates.
    Reduce {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Limiting values in the four classic regimes.
    Limits {
        #[arg(long)]
        regime: Option<String>,
        #[command(flatten)]
        lab: Lab,
        #[arg(long, default_value_t = 0.5)]
        e_over_v0: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Print version and constants tag.
    Version,
}

#[derive(Args)]
struct Lab {
    /// Barrier height in nK.
    #[arg(long = "v0-nK", default_value_t = 135.0)]
    v0_nk: f64,
    /// Barrier width in μm.
    #[arg(long = "width-um", default_value_t = 1.3)]
    width_um: f64,
    #[arg(long, default_value = "rb87")]
    particle: String,
    /// Report times in units of ħ/V0 instead of ms.
    #[arg(long)]
    natural_units: bool,
}

impl Lab {
    fn particle(&self) -> Result<ParticleSpec> {
        ParticleSpec::preset(&self.particle)
            .ok_or_else(|| PipelineError::Config(format!("unknown particle '{}'", self.particle)))
    }
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BarrierArg {
    Rect,
    Gauss,
    /// Tabulated profile given by --profile.
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    E,
    #[value(name = "L")]
    L,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Analytic,
    Numeric,
}

#[derive(Clone, Copy, ValueEnum)]
enum WidthArg {
    Sigma,
    Fwhm,
    Waist,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum, default_value_t = BarrierArg::Rect)]
    barrier: BarrierArg,
    /// Two-column `y_um,v_nK` file for `--barrier table`.
    #[arg(long)]
    profile: Option<PathBuf>,
    #[command(flatten)]
    lab: Lab,
    #[arg(long, value_enum, default_value_t = WidthArg::Sigma)]
    width_convention: WidthArg,
    #[arg(long, value_enum, default_value_t = AxisArg::E)]
    axis: AxisArg,
    #[arg(long, default_value_t = 0.05)]
    from: f64,
    #[arg(long, default_value_t = 0.95)]
    to: f64,
    #[arg(long, default_value_t = 19)]
    points: usize,
    /// Fixed E/V0 on a width sweep.
    #[arg(long, default_value_t = 0.5)]
    e_over_v0: f64,
    #[arg(long, value_enum, default_value_t = EngineArg::Analytic)]
    engine: EngineArg,
    /// Grid size for smooth profiles.
    #[arg(long, default_value_t = DEFAULT_SEGMENTS)]
    segments: usize,
    /// Number of field strengths in the weak-field extrapolation.
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// Strongest field as a fraction of the energy, ħω/E.
    #[arg(long, default_value_t = 1e-4)]
    feebleness: f64,
    #[command(flatten)]
    output: Output,
}

impl SweepArgs {
    fn spec(&self) -> Result<SweepSpec> {
        let barrier = match (self.barrier, &self.profile) {
            (BarrierArg::Rect, None) => BarrierKind::Rectangular,
            (BarrierArg::Gauss, None) => BarrierKind::Gaussian,
            (BarrierArg::Table, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| PipelineError::Parse {
                    line: 0,
                    message: format!("cannot read {}: {e}", path.display()),
                })?;
                read_profile_csv(&text)?
            }
            (BarrierArg::Table, None) => return Err(PipelineError::Config("--barrier table needs --profile".into())),
            (_, Some(_)) => return Err(PipelineError::Config("--profile requires --barrier table".into())),
        };
        let mut spec = SweepSpec::new(self.lab.v0_nk, self.lab.width_um).with_axis(
            match self.axis {
                AxisArg::E => Axis::EnergyRatio,
                AxisArg::L => Axis::WidthRatio,
            },
            self.from,
            self.to,
            self.points,
        );
        spec.barrier = barrier;
        spec.particle = self.lab.particle()?;
        spec.natural_units = self.lab.natural_units;
        spec.width_convention = match self.width_convention {
            WidthArg::Sigma => WidthConvention::Sigma,
            WidthArg::Fwhm => WidthConvention::Fwhm,
            WidthArg::Waist => WidthConvention::Waist,
        };
        spec.engine = match self.engine {
            EngineArg::Analytic => Engine::Analytic,
            EngineArg::Numeric => Engine::Numeric,
        };
        spec.energy_ratio = self.e_over_v0;
        spec.segments = self.segments;
        if self.levels == 0 {
            return Err(PipelineError::Config("--levels must be at least 1".into()));
        }
        spec.weak_field = WeakFieldConfig {
            feebleness_ratio: self.feebleness,
            ..WeakFieldConfig::default().with_levels(self.levels)
        };
        Ok(spec)
    }
}

impl Output {
    fn emit(&self, table: &larmor_pipeline::table::Table) -> Result<()> {
        let format = match self.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
        emit(table, self.out.as_deref(), format)
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analytic { lab, e_over_v0, output } => {
            let mut spec = SweepSpec::new(lab.v0_nk, lab.width_um).with_axis(Axis::EnergyRatio, e_over_v0, e_over_v0, 1);
            spec.particle = lab.particle()?;
            spec.natural_units = lab.natural_units;
            output.emit(&sweep(&spec)?.to_table())
        }
        Command::Sweep(args) => args.output.emit(&sweep(&args.spec()?)?.to_table()),
        Command::Reduce { input, output } => {
            let rows = parse_measurements(&input)?;
            output.emit(&att_rows_table(&reduce_measurements(&rows)))
        }
        Command::Limits {
            regime,
            lab,
            e_over_v0,
            output,
        } => {
            let regime = regime.map(|r| r.parse::<Regime>()).transpose()?;
            let spec = LimitsSpec {
                v0_nk: lab.v0_nk,
                width_um: lab.width_um,
                e_over_v0,
                particle: lab.particle()?,
                natural_units: lab.natural_units,
            };
            output.emit(&limits_table(&spec, regime)?)
        }
        Command::Version => {
            println!("larmor {} (constants {CONSTANTS_VERSION})", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("larmor: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
