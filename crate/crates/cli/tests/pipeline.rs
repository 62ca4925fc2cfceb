use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

use larmor::units::{classical_time, energy_from_temperature, ParticleSpec};
use larmor_pipeline::measurement::{measurements_table, parse_measurements, parse_measurements_str, reduce_measurements, MeasurementRow, RowFlag};
use larmor_pipeline::sweep::{sweep, Axis, BarrierKind, Engine, SweepSpec, WidthConvention};
use larmor_pipeline::table::Format;

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/synthetic_rb87_larmor.csv");

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn monte_carlo_sigma_f(row: &MeasurementRow, samples: usize, seed: u64) -> f64 {
    let mut rng = StdRng::seed_from_u64(seed);
    let ny = Normal::new(row.tau_y, row.sigma_y).unwrap();
    let nz = Normal::new(row.tau_z, row.sigma_z).unwrap();
    let (mut sum, mut sum2, mut n) = (0.0, 0.0, 0);
    while n < samples {
        let y = ny.sample(&mut rng);
        if y <= 0.0 {
            continue;
        }
        let z = nz.sample(&mut rng);
        let f = y + z * z / y;
        sum += f;
        sum2 += f * f;
        n += 1;
    }
    let mean = sum / n as f64;
    (sum2 / n as f64 - mean * mean).sqrt()
}

#[test]
fn fixture_is_labelled_and_complete() {
    let text = std::fs::read_to_string(FIXTURE).unwrap();
    assert!(text.starts_with("# SYNTHETIC"));
    let rows = parse_measurements(std::path::Path::new(FIXTURE)).unwrap();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().any(|r| r.tau_y == r.tau_z));
    for r in &rows {
        for (s, t) in [(r.sigma_y, r.tau_y), (r.sigma_z, r.tau_z)] {
            let f = s / t.abs();
            assert!(rel(f, 0.01) < 1e-6 || rel(f, 0.05) < 1e-6, "sigma/tau = {f}");
        }
    }
}

#[test]
fn equal_times_row_matches_monte_carlo() {
    let row = MeasurementRow::new(0.5, 1.0, 0.01, 1.0, 0.01);
    let reduced = &reduce_measurements(std::slice::from_ref(&row))[0];
    assert!((reduced.sigma_f.unwrap() - 0.02).abs() < 1e-15);
    assert!(rel(reduced.sigma_f.unwrap(), monte_carlo_sigma_f(&row, 1_000_000, 1)) < 0.05);
}

#[test]
fn divergent_rows_are_kept() {
    let text = "e_over_v0,tau_y_ms,tau_y_err_ms,tau_z_ms,tau_z_err_ms\n0.01,0,0.001,0.3,0.003\n0.5,0.05,0.001,0.3,0.003\n";
    let reduced = reduce_measurements(&parse_measurements_str(text).unwrap());
    assert_eq!(reduced.len(), 2);
    assert_eq!(reduced[0].flags, vec![RowFlag::DivergentRegime]);
    assert!(reduced[0].att_f.is_infinite() && reduced[0].sigma_f.is_none());
    assert!(reduced[1].flags.is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn first_order_error_matches_monte_carlo(
        y in 0.05f64..1.0,
        ratio in 0.0f64..3.0,
        fy in prop::sample::select(vec![0.01, 0.05]),
        fz in prop::sample::select(vec![0.01, 0.05]),
        seed in any::<u64>(),
    ) {
        let z = ratio * y;
        let row = MeasurementRow::new(0.5, y, fy * y, z, fz * z.max(1e-3));
        let sigma = reduce_measurements(std::slice::from_ref(&row))[0].sigma_f.unwrap();
        prop_assert!(rel(sigma, monte_carlo_sigma_f(&row, 1_000_000, seed)) < 0.05);
    }
}

fn nine_digits(v: f64) -> f64 {
    format!("{v:.8e}").parse().unwrap()
}

proptest! {
    #[test]
    fn emit_then_parse_is_identity(
        raw in prop::collection::vec(
            (0.01f64..10.0, -1.0f64..1.0, 0.0f64..0.1, -1.0f64..1.0, 0.0f64..0.1, prop::option::of(-1.0f64..1.0)),
            1..12,
        ),
        json_too in any::<bool>(),
    ) {
        let any_cov = raw.iter().any(|r| r.5.is_some());
        let rows: Vec<MeasurementRow> = raw
            .iter()
            .map(|&(e, y, sy, z, sz, c)| MeasurementRow {
                e_over_v0: nine_digits(e),
                tau_y: nine_digits(y),
                sigma_y: nine_digits(sy),
                tau_z: nine_digits(z),
                sigma_z: nine_digits(sz),
                cov_yz: c.map(|c| nine_digits(c * nine_digits(sy) * nine_digits(sz) * 0.99)),
            })
            .collect();
        let table = measurements_table(&rows);
        prop_assert_eq!(table.columns.len(), if any_cov { 6 } else { 5 });
        let csv = table.render(Format::Csv).unwrap();
        prop_assert_eq!(&parse_measurements_str(&csv).unwrap(), &rows);
        if json_too {
            let json: serde_json::Value = serde_json::from_str(&table.render(Format::Json).unwrap()).unwrap();
            for (obj, row) in json.as_array().unwrap().iter().zip(&rows) {
                prop_assert_eq!(obj["tau_y_ms"].as_f64().unwrap(), row.tau_y);
            }
        }
    }
}

#[test]
fn energy_sweep_shape() {
    let t = sweep(&SweepSpec::new(135.0, 1.3).with_axis(Axis::EnergyRatio, 1e-6, 0.9, 40)).unwrap();
    let first = &t.rows[0];
    let last = t.rows.last().unwrap();
    assert!(first.tau_y < 1e-2 * last.tau_y);
    assert!(first.tau_z.is_finite() && first.tau_z > 0.0);
    assert!(first.att_f.value() > 1e2 * last.att_f.value());
}

#[test]
fn low_barrier_point_matches_free_flight() {
    let t = sweep(&SweepSpec::new(135.0, 1.3).with_axis(Axis::EnergyRatio, 1e3, 1e3, 1)).unwrap();
    let v0 = energy_from_temperature(135e-9).unwrap();
    let free = classical_time(&ParticleSpec::rb87(), 1.3e-6, 0.0, 1e3 * v0).unwrap() * 1e3;
    let r = t.rows[0];
    for v in [r.att_b, r.att_s, r.att_f] {
        assert!(rel(v.value(), free) < 1e-2);
    }
}

#[test]
fn width_sweep_grows_quadratically() {
    let t = sweep(&SweepSpec::new(135.0, 1.3).with_axis(Axis::WidthRatio, 5.0, 50.0, 12)).unwrap();
    let (a, b) = (&t.rows[0], t.rows.last().unwrap());
    let slope = (b.att_f.value() / a.att_f.value()).ln() / (b.axis_value / a.axis_value).ln();
    assert!((slope - 2.0).abs() < 0.02, "slope {slope}");
    // τ_y saturates once the barrier is opaque
    assert!(rel(b.tau_y, a.tau_y) < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn width_sweep_att_f_nondecreasing(e in 0.05f64..0.95) {
        // λ(L0) ≥ 1 for every E/V0 below 0.97 on the lab barrier
        let mut spec = SweepSpec::new(135.0, 1.3).with_axis(Axis::WidthRatio, 1.0, 20.0, 40);
        spec.energy_ratio = e;
        let t = sweep(&spec).unwrap();
        for w in t.rows.windows(2) {
            prop_assert!(w[1].att_f.value() >= w[0].att_f.value());
        }
    }
}

#[test]
fn engines_agree_on_rectangles() {
    for (axis, from, to) in [(Axis::EnergyRatio, 0.05, 1.5), (Axis::WidthRatio, 0.2, 5.0)] {
        let mut spec = SweepSpec::new(135.0, 1.3).with_axis(axis, from, to, 15);
        let analytic = sweep(&spec).unwrap();
        spec.engine = Engine::Numeric;
        let numeric = sweep(&spec).unwrap();
        for (a, n) in analytic.rows.iter().zip(&numeric.rows) {
            assert_eq!(a.axis_value, n.axis_value);
            assert!(rel(n.tau_y, a.tau_y) < 1e-4, "{axis:?} {}", a.axis_value);
            assert!((n.tau_z - a.tau_z).abs() < 1e-4 * a.tau_y.hypot(a.tau_z));
        }
    }
}

#[test]
fn gaussian_width_conventions_are_consistent() {
    let run = |width: f64, conv: WidthConvention| {
        let mut spec = SweepSpec::new(135.0, width).with_axis(Axis::EnergyRatio, 0.5, 0.5, 1);
        spec.barrier = BarrierKind::Gaussian;
        spec.engine = Engine::Numeric;
        spec.width_convention = conv;
        sweep(&spec).unwrap().rows[0]
    };
    let sigma = run(0.5, WidthConvention::Sigma);
    let waist = run(1.0, WidthConvention::Waist);
    let fwhm = run(0.5 * 2.0 * (2.0 * std::f64::consts::LN_2).sqrt(), WidthConvention::Fwhm);
    assert!(rel(waist.tau_y, sigma.tau_y) < 1e-12);
    assert!(rel(fwhm.tau_y, sigma.tau_y) < 1e-12);
    assert!(sigma.tau_y > 0.0 && sigma.tau_z > 0.0);
}
