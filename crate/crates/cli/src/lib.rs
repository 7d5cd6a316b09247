//! Command implementations behind the `casimir` binary.

// `!(x > 0.0)` is used on purpose: it rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod output;
pub mod units;

use std::io::Write;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use casimir_core::asymptotics::{find_max_correction, g_large_a, g_small_a, MaxCorrection};
use casimir_core::config::resolve_material;
use casimir_core::integrals::{constants_p, constants_q};
use casimir_core::materials::applicability;
use casimir_core::reflection::Prescription;
use casimir_core::thermo::{
    compute_g, delta_free_energy, full_correction, separation_for_a, temperature_for_a,
};
use casimir_core::{
    ApplicabilityReport, CasimirSetup, CorrectionResult, GeometrySetup, MaterialParams,
    QuadratureConfig, Reflection,
};

use args::*;
use output::{num, open_sink, opt_num, Header};

/// Printed reference values of the expansion constants.
pub const REFERENCE_CONSTANTS: [(&str, f64); 4] =
    [("q1", 0.0137), ("q2", 0.0191), ("p1", 0.0133), ("p2", 0.0262)];

/// Runs a command. `Ok(false)` means output was written but some rows failed.
pub fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Compute(a) => compute(a).map(|_| true),
        Command::Sweep(a) => sweep(a),
        Command::Figure1(a) => figure1(a),
        Command::Figure2(a) => figure2(a),
        Command::Constants(a) => constants(a).map(|_| true),
        Command::Applicability(a) => applicability_cmd(a).map(|_| true),
        Command::Peak(a) => peak(a),
    }
}

fn material(spec: &str) -> Result<MaterialParams> {
    resolve_material(spec).with_context(|| format!("loading material `{spec}`"))
}

fn setup(p: &PhysicsArgs, prescription: PrescriptionArg) -> Result<CasimirSetup> {
    let mut s = CasimirSetup::new(material(&p.material)?)
        .with_model(p.model.into())
        .with_prescription(Prescription::from(prescription))
        .with_abs_tol(p.abs_tol);
    s.relaxation = p.relaxation.into();
    s.method = p.method.into();
    s.ase_threshold = p.ase_threshold;
    s.quad.validate()?;
    Ok(s)
}

fn physics_header(h: &mut Header, p: &PhysicsArgs, m: &MaterialParams) {
    h.push("material", format!("{} ({})", m.name, p.material))
        .push("model", p.model.to_possible_value_name())
        .push("relaxation", p.relaxation.to_possible_value_name())
        .push("abs_tol", num(p.abs_tol))
        .push("method", p.method.to_possible_value_name())
        .push("ase_threshold", num(p.ase_threshold));
}

trait ValueName {
    fn to_possible_value_name(&self) -> String;
}

impl<T: clap::ValueEnum> ValueName for T {
    fn to_possible_value_name(&self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }
}

#[derive(Serialize)]
struct ComputeRecord<'a> {
    version: &'static str,
    inputs: ComputeInputs<'a>,
    result: &'a CorrectionResult,
}

#[derive(Serialize)]
struct ComputeInputs<'a> {
    material: &'a str,
    a: f64,
    #[serde(rename = "T")]
    t: f64,
    prescription: String,
    model: String,
    relaxation: String,
    abs_tol: f64,
    method: String,
    ase_threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    sphere_radius: Option<f64>,
}

pub fn compute(args: ComputeArgs) -> Result<CorrectionResult> {
    let s = setup(&args.physics, args.prescription)?;
    let geom = GeometrySetup {
        a: args.a,
        t: args.t,
        sphere_radius: args.sphere_radius,
    };
    let r = full_correction(&s, &geom)?;
    for note in &r.notes {
        log::warn!("{note}");
    }
    let p = &args.physics;
    let record = ComputeRecord {
        version: env!("CARGO_PKG_VERSION"),
        inputs: ComputeInputs {
            material: &s.material.name,
            a: args.a,
            t: args.t,
            prescription: args.prescription.to_possible_value_name(),
            model: p.model.to_possible_value_name(),
            relaxation: p.relaxation.to_possible_value_name(),
            abs_tol: p.abs_tol,
            method: p.method.to_possible_value_name(),
            ase_threshold: p.ase_threshold,
            sphere_radius: args.sphere_radius,
        },
        result: &r,
    };
    let text = toml::to_string(&record).context("serialising result")?;
    let mut w = open_sink(args.out.as_deref())?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(r)
}

/// `count` points from `min` to `max`, end points exact.
pub fn grid(min: f64, max: f64, count: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if !(min < max) || count < 2 {
        bail!("need min < max and count >= 2, got [{min}, {max}] with {count} points");
    }
    if spacing == Spacing::Log && min <= 0.0 {
        bail!("log spacing needs a positive range, got min = {min}");
    }
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|i| match (i, spacing) {
            (0, _) => min,
            (i, _) if i == count - 1 => max,
            (i, Spacing::Linear) => min + (max - min) * i as f64 / last,
            (i, Spacing::Log) => min * (max / min).powf(i as f64 / last),
        })
        .collect())
}

const ROW_COLUMNS: [&str; 21] = [
    "axis_value", "a", "T", "prescription", "model", "method", "delta_F", "G", "F0", "alpha", "A",
    "B", "tau", "omega_tau", "S", "F_pp", "abs_tol_achieved", "l_over_delta", "ase_valid",
    "impedance_form_valid", "below_debye",
];

fn flag(v: Option<bool>) -> String {
    v.map(|b| b.to_string()).unwrap_or_default()
}

fn result_row(x: f64, a: f64, t: f64, prescription: &str, model: &str, r: &Result<CorrectionResult>) -> Vec<String> {
    let mut row = vec![num(x), num(a), num(t), prescription.to_string(), model.to_string()];
    match r {
        Ok(r) => {
            let app: Option<&ApplicabilityReport> = r.applicability.as_ref();
            row.extend([
                r.method.to_string(),
                num(r.delta_f),
                num(r.g),
                num(r.f0),
                num(r.alpha),
                num(r.a_param),
                num(r.b_param),
                num(r.tau),
                num(r.omega_tau),
                opt_num(r.entropy.map(|s| s.numeric)),
                opt_num(r.pressure.map(|p| p.numeric)),
                opt_num(r.abs_tol_achieved),
                opt_num(app.map(|a| a.l_over_delta)),
                flag(app.map(|a| a.ase_valid)),
                flag(app.map(|a| a.impedance_form_valid)),
                flag(app.map(|a| a.below_debye)),
                String::new(),
            ]);
        }
        Err(e) => {
            row.extend(std::iter::repeat_n(String::new(), ROW_COLUMNS.len() - row.len()));
            row.push(format!("{e:#}"));
        }
    }
    row
}

fn write_csv(
    w: &mut dyn Write,
    header: &Header,
    columns: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<()> {
    header.write(w)?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(columns)?;
    for row in rows {
        csv.write_record(&row)?;
    }
    csv.flush()?;
    Ok(())
}

fn parse_axis_bound(axis: Axis, s: &str) -> Result<f64> {
    match axis {
        Axis::A => units::parse_length(s).map_err(anyhow::Error::msg),
        Axis::T | Axis::BigA => s
            .trim()
            .parse::<f64>()
            .with_context(|| format!("`{s}` is not a number")),
    }
}

pub fn sweep(args: SweepArgs) -> Result<bool> {
    let lo = parse_axis_bound(args.axis, &args.min)?;
    let hi = parse_axis_bound(args.axis, &args.max)?;
    let xs = grid(lo, hi, args.count, args.spacing)?;
    if args.prescriptions.is_empty() {
        bail!("at least one prescription is required");
    }
    let base = setup(&args.physics, args.prescriptions[0])?;
    let m = base.material.clone();

    let points: Vec<(f64, Result<(f64, f64)>)> = match args.axis {
        Axis::T => {
            let a = args.a.context("--a is required for a temperature sweep")?;
            xs.iter().map(|&t| (t, Ok((a, t)))).collect()
        }
        Axis::A => {
            let t = args.t.context("--T is required for a separation sweep")?;
            xs.iter().map(|&a| (a, Ok((a, t)))).collect()
        }
        Axis::BigA => match (args.a, args.t) {
            (Some(a), None) => xs
                .iter()
                .map(|&x| (x, temperature_for_a(x, a, &m).map(|t| (a, t)).map_err(Into::into)))
                .collect(),
            (None, Some(t)) => xs
                .iter()
                .map(|&x| (x, separation_for_a(x, t, &m).map(|a| (a, t)).map_err(Into::into)))
                .collect(),
            _ => bail!("an A sweep needs exactly one of --a (solve for T) or --T (solve for a)"),
        },
    };

    let model = args.physics.model.to_possible_value_name();
    let jobs: Vec<(PrescriptionArg, usize)> = args
        .prescriptions
        .iter()
        .flat_map(|&p| (0..points.len()).map(move |i| (p, i)))
        .collect();
    let setups: Vec<(PrescriptionArg, CasimirSetup)> = args
        .prescriptions
        .iter()
        .map(|&p| (p, base.clone().with_prescription(Prescription::from(p))))
        .collect();

    // rayon's indexed collect keeps rows in grid order
    let rows: Vec<(bool, Vec<String>)> = jobs
        .par_iter()
        .map(|&(p, i)| {
            let s = &setups.iter().find(|(q, _)| *q == p).expect("setup per prescription").1;
            let (x, ref ag) = points[i];
            let (a, t, r) = match ag {
                Ok((a, t)) => {
                    let geom = GeometrySetup::new(*a, *t);
                    let r = if args.full { full_correction(s, &geom) } else { delta_free_energy(s, &geom) };
                    (*a, *t, r.map_err(anyhow::Error::from))
                }
                Err(e) => (f64::NAN, f64::NAN, Err(anyhow::anyhow!("{e:#}"))),
            };
            (r.is_ok(), result_row(x, a, t, &p.to_possible_value_name(), &model, &r))
        })
        .collect();

    let mut header = Header::new("sweep");
    physics_header(&mut header, &args.physics, &m);
    header
        .push("axis", args.axis.to_possible_value_name())
        .push("range", format!("[{}, {}]", num(lo), num(hi)))
        .push("count", args.count)
        .push("spacing", args.spacing.to_possible_value_name())
        .push("fixed_a", opt_num(args.a))
        .push("fixed_T", opt_num(args.t))
        .push(
            "prescriptions",
            args.prescriptions.iter().map(|p| p.to_possible_value_name()).collect::<Vec<_>>().join(","),
        )
        .push("full", args.full);

    let ok = rows.iter().all(|(ok, _)| *ok);
    let mut columns = ROW_COLUMNS.to_vec();
    columns.push("error");
    let mut w = open_sink(args.out.as_deref())?;
    write_csv(&mut *w, &header, &columns, rows.into_iter().map(|(_, r)| r))?;
    if !ok {
        log::error!("some sweep rows failed; see the error column");
    }
    Ok(ok)
}

/// One row of the G(A) figure.
#[derive(Debug, Clone, Copy)]
pub struct Figure1Row {
    pub a_param: f64,
    pub g_numeric: f64,
    pub g_small_a: f64,
    pub g_large_a: f64,
    pub abs_tol_achieved: f64,
    pub max_w: f64,
}

pub fn figure1_rows(tau: f64, a_min: f64, a_max: f64, points: usize, abs_tol: f64) -> Result<Vec<Figure1Row>> {
    let cfg = QuadratureConfig::with_abs_tol(abs_tol);
    cfg.validate()?;
    grid(a_min, a_max, points, Spacing::Log)?
        .into_par_iter()
        .map(|a| {
            let refl = Reflection::impedance_reduced(a, tau);
            let (g, set) = compute_g(&refl, tau, &cfg)?;
            Ok(Figure1Row {
                a_param: a,
                g_numeric: g,
                g_small_a: g_small_a(a),
                g_large_a: g_large_a(a),
                abs_tol_achieved: set.abs_tol_achieved,
                max_w: set.max_w,
            })
        })
        .collect()
}

pub fn figure1(args: Figure1Args) -> Result<bool> {
    let rows = figure1_rows(args.tau, args.a_min, args.a_max, args.points, args.abs_tol)?;
    let mut header = Header::new("figure1");
    header
        .push("model", "impedance")
        .push("tau", num(args.tau))
        .push("A_range", format!("[{}, {}]", num(args.a_min), num(args.a_max)))
        .push("points", args.points)
        .push("abs_tol", num(args.abs_tol));
    let mut w = open_sink(args.out.as_deref())?;
    write_csv(
        &mut *w,
        &header,
        &["A", "G_numeric", "G_smallA", "G_largeA", "model", "abs_tol_achieved", "max_w"],
        rows.iter().map(|r| {
            vec![
                num(r.a_param),
                num(r.g_numeric),
                num(r.g_small_a),
                num(r.g_large_a),
                "impedance".into(),
                num(r.abs_tol_achieved),
                num(r.max_w),
            ]
        }),
    )?;
    Ok(true)
}

pub fn figure2(args: Figure2Args) -> Result<bool> {
    let s = setup(&args.physics, args.prescription)?;
    let ts = grid(args.t_min, args.t_max, args.points, args.spacing)?;
    let jobs: Vec<(f64, f64)> = args
        .separations
        .iter()
        .flat_map(|&a| ts.iter().map(move |&t| (a, t)))
        .collect();
    let model = args.physics.model.to_possible_value_name();
    let prescription = args.prescription.to_possible_value_name();
    let rows: Vec<(bool, Vec<String>)> = jobs
        .par_iter()
        .map(|&(a, t)| {
            let r = delta_free_energy(&s, &GeometrySetup::new(a, t)).map_err(anyhow::Error::from);
            (r.is_ok(), result_row(a, a, t, &prescription, &model, &r))
        })
        .collect();

    let mut header = Header::new("figure2");
    physics_header(&mut header, &args.physics, &s.material);
    header
        .push("prescription", &prescription)
        .push("separations", args.separations.iter().map(|&a| num(a)).collect::<Vec<_>>().join(","))
        .push("T_range", format!("[{}, {}]", num(args.t_min), num(args.t_max)))
        .push("points", args.points)
        .push("spacing", args.spacing.to_possible_value_name());
    let ok = rows.iter().all(|(ok, _)| *ok);
    let mut columns = ROW_COLUMNS.to_vec();
    columns[0] = "curve_a";
    columns.push("error");
    let mut w = open_sink(args.out.as_deref())?;
    write_csv(&mut *w, &header, &columns, rows.into_iter().map(|(_, r)| r))?;
    Ok(ok)
}

/// `(name, computed, reference)` for q1, q2, p1, p2.
pub fn constants_table(abs_tol: f64) -> Result<Vec<(&'static str, f64, f64)>> {
    let cfg = QuadratureConfig::with_abs_tol(abs_tol);
    cfg.validate()?;
    let (q1, q2) = constants_q(&cfg)?;
    let (p1, p2) = constants_p(&cfg)?;
    Ok(REFERENCE_CONSTANTS
        .iter()
        .zip([q1, q2, p1, p2])
        .map(|(&(name, reference), v)| (name, v, reference))
        .collect())
}

pub fn constants(args: ConstantsArgs) -> Result<()> {
    let table = constants_table(args.abs_tol)?;
    let mut header = Header::new("constants");
    header.push("abs_tol", num(args.abs_tol));
    let mut w = open_sink(args.out.as_deref())?;
    write_csv(
        &mut *w,
        &header,
        &["name", "computed", "reference", "abs_diff"],
        table
            .iter()
            .map(|&(n, v, r)| vec![n.to_string(), num(v), num(r), num((v - r).abs())]),
    )
}

#[derive(Serialize)]
struct ApplicabilityRecord<'a> {
    version: &'static str,
    material: &'a str,
    a: f64,
    relaxation: String,
    all_valid: bool,
    violations: Vec<&'static str>,
    report: ApplicabilityReport,
}

pub fn applicability_cmd(args: ApplicabilityArgs) -> Result<ApplicabilityReport> {
    let m = material(&args.material)?;
    let report = applicability(args.t, args.a, &m, args.relaxation.into(), args.ase_threshold)?;
    let record = ApplicabilityRecord {
        version: env!("CARGO_PKG_VERSION"),
        material: &m.name,
        a: args.a,
        relaxation: args.relaxation.to_possible_value_name(),
        all_valid: report.all_valid(),
        violations: report.violations(),
        report,
    };
    let mut w = open_sink(args.out.as_deref())?;
    w.write_all(toml::to_string(&record)?.as_bytes())?;
    w.flush()?;
    Ok(report)
}

pub fn peak(args: PeakArgs) -> Result<bool> {
    let s = setup(&args.physics, PrescriptionArg::IdealStatic)?;
    let results: Vec<Result<MaxCorrection>> = args
        .separations
        .iter()
        .map(|&a| find_max_correction(a, &s, args.t_min, args.t_max).map_err(Into::into))
        .collect();
    let mut header = Header::new("peak");
    physics_header(&mut header, &args.physics, &s.material);
    header
        .push("T_min", opt_num(args.t_min))
        .push("T_max", opt_num(args.t_max));
    let ok = results.iter().all(|r| r.is_ok());
    let mut w = open_sink(args.out.as_deref())?;
    write_csv(
        &mut *w,
        &header,
        &["a", "T_m", "G_max", "T_m_estimate", "T_m_ratio", "A_m", "model", "error"],
        args.separations.iter().zip(&results).map(|(&a, r)| match r {
            Ok(m) => vec![
                num(a),
                num(m.t_m),
                num(m.g_max),
                num(m.t_m_estimate),
                num(m.t_m / m.t_m_estimate),
                num(m.a_m),
                args.physics.model.to_possible_value_name(),
                String::new(),
            ],
            Err(e) => {
                let mut row = vec![num(a)];
                row.extend(std::iter::repeat_n(String::new(), 5));
                row.push(args.physics.model.to_possible_value_name());
                row.push(format!("{e:#}"));
                row
            }
        }),
    )?;
    Ok(ok)
}
