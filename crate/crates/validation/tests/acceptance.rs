//! Acceptance report: one PASS/FAIL line per criterion, details indented
//! beneath. Exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use casimir_cli::{constants_table, figure1_rows};
use casimir_core::asymptotics::{find_max_correction, g_ideal};
use casimir_core::constants::{K_B, PI, ZETA3};
use casimir_core::integrals::{free_energy_t0, ideal_casimir_energy, integral_i1, integral_i2, integral_i3, integral_set};
use casimir_core::materials::{applicability, impedance_form_limit};
use casimir_core::reflection::Prescription;
use casimir_core::thermo::{entropy, force_plate_plate, pressure_closed_form, separation_for_a, temperature_for_a};
use casimir_core::{CasimirSetup, MaterialParams, Polarization, QuadratureConfig, Reflection, RelaxationModel};
use casimir_validation::oracle::{i1_oracle, i2_oracle, i3_oracle, sample_points};

struct Report {
    pass: bool,
    lines: Vec<String>,
}

impl Report {
    fn new() -> Self {
        Report { pass: true, lines: Vec::new() }
    }

    /// Record a sub-check; any failure fails the criterion.
    fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.lines.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    fn info(&mut self, line: String) {
        self.lines.push(format!("info {line}"));
    }
}

fn rel(x: f64, reference: f64) -> f64 {
    (x / reference - 1.0).abs()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn constants() -> Report {
    let mut r = Report::new();
    let (table, dt) = timed(|| constants_table(1e-12).expect("constants"));
    for (name, v, reference) in table {
        let d = (v - reference).abs();
        r.check(d <= 5e-4, format!("{name} = {v:.7} vs reference {reference} (|diff| {d:.1e} <= 5e-4)"));
    }
    r.check(dt < Duration::from_secs(1), format!("runtime {dt:.2?} < 1 s"));
    r
}

/// Sign changes of the second divided difference of `G(A)` in linear `A`.
fn curvature_sign_changes(a: &[f64], g: &[f64]) -> usize {
    let dd: Vec<f64> = (1..a.len() - 1)
        .map(|i| {
            let left = (g[i] - g[i - 1]) / (a[i] - a[i - 1]);
            let right = (g[i + 1] - g[i]) / (a[i + 1] - a[i]);
            (right - left) / (a[i + 1] - a[i - 1])
        })
        .collect();
    dd.windows(2).filter(|w| w[0].signum() != w[1].signum()).count()
}

fn figure1() -> Report {
    let mut r = Report::new();
    let (rows, dt) = timed(|| figure1_rows(1e-4, 1e-3, 1e3, 61, 1e-6).expect("figure 1"));
    for row in rows.iter().filter(|x| x.a_param <= 0.01 * (1.0 + 1e-12)) {
        let d = rel(row.g_small_a, row.g_numeric);
        r.check(d < 0.10, format!("A = {:.3e}: small-A {:.6} vs numeric {:.6} ({:.2}% < 10%)", row.a_param, row.g_small_a, row.g_numeric, 100.0 * d));
    }
    for row in rows.iter().filter(|x| x.a_param >= 100.0 * (1.0 - 1e-12)) {
        let d = rel(row.g_large_a, row.g_numeric);
        r.check(d < 0.02, format!("A = {:.3e}: large-A {:.6} vs numeric {:.6} ({:.2}% < 2%)", row.a_param, row.g_large_a, row.g_numeric, 100.0 * d));
    }
    let a: Vec<f64> = rows.iter().map(|x| x.a_param).collect();
    let g: Vec<f64> = rows.iter().map(|x| x.g_numeric).collect();
    let changes = curvature_sign_changes(&a, &g);
    r.check(changes <= 1, format!("second-difference sign changes: {changes} <= 1"));
    let (a_peak, g_peak) = rows
        .iter()
        .map(|x| (x.a_param, x.g_numeric))
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap();
    r.check((g_peak - 0.53).abs() <= 0.03, format!("peak G = {g_peak:.4} at A = {a_peak:.3} (reference 0.53)"));
    r.check(dt < Duration::from_secs(120), format!("runtime {dt:.2?} < 2 min"));

    // the small-tau proxy: tau = 1e-3 must move G by less than 1%
    let cfg = QuadratureConfig::default();
    let worst = [1e-2, 1.0, 100.0]
        .iter()
        .map(|&a| {
            let g = |tau: f64| integral_set(&Reflection::impedance_reduced(a, tau), tau, &cfg).unwrap().g();
            rel(g(1e-3), g(1e-4))
        })
        .fold(0.0, f64::max);
    r.info(format!("tau sensitivity 1e-4 -> 1e-3: largest change {:.3}%", 100.0 * worst));
    r
}

fn maximal_correction() -> Report {
    let mut r = Report::new();
    let setup = CasimirSetup::gold();
    for a in [1e-7, 3e-7, 5e-7] {
        match find_max_correction(a, &setup, None, None) {
            Ok(m) => {
                let ratio = m.t_m / m.t_m_estimate;
                r.check(
                    (m.g_max - 0.53).abs() <= 0.03,
                    format!("a = {:.0} nm: G_max = {:.4} (0.53 +- 0.03) at T_m = {:.4} K, A = {:.3}", a * 1e9, m.g_max, m.t_m, m.a_m),
                );
                r.check(
                    (1.0 / 1.3..=1.3).contains(&ratio),
                    format!("a = {:.0} nm: T_m / estimate = {:.3} (estimate {:.4} K, within factor 1.3)", a * 1e9, ratio, m.t_m_estimate),
                );
            }
            Err(e) => r.check(false, format!("a = {:.0} nm: {e}", a * 1e9)),
        }
    }
    r
}

fn nernst() -> Report {
    let mut r = Report::new();
    let m = MaterialParams::gold();
    let a = 1e-6;
    let unit = K_B / (8.0 * PI * a * a);
    let with = |p: Prescription| {
        let mut s = CasimirSetup::gold().with_prescription(p);
        s.fd.abs_tol = Some(1e-10);
        s
    };
    let s_at = |setup: &CasimirSetup, a_param: f64| {
        let t = temperature_for_a(a_param, a, &m).unwrap();
        (t, entropy(setup, a, t).unwrap().numeric)
    };

    let half = with(Prescription::Unmodified);
    let target = -ZETA3 / 2.0;
    for a_param in [1e-4, 1e-3, 1e-2] {
        let (t, s) = s_at(&half, a_param);
        let d = rel(s / unit, target);
        r.check(d < 0.05, format!("alpha = 1/2, A = {a_param:.0e} (T = {t:.3e} K): S = {:.6} k/8pi a^2 vs {target:.6} ({:.2}% < 5%)", s / unit, 100.0 * d));
    }

    let plasma = with(Prescription::PlasmaLike);
    for a_param in [1e-4, 1e-3, 1e-2] {
        let (_, s) = s_at(&plasma, a_param);
        r.check(s.is_finite() && s < 0.0, format!("plasma-like, A = {a_param:.0e}: S = {:.6} k/8pi a^2 < 0", s / unit));
    }

    let ideal = with(Prescription::IdealStatic);
    let grid = [1e-4, 1e-3, 1e-2];
    let values: Vec<f64> = grid.iter().map(|&x| s_at(&ideal, x).1 / unit).collect();
    for (x, s) in grid.iter().zip(&values) {
        r.info(format!("alpha = 1, A = {x:.0e}: S = {s:.4e} k/8pi a^2"));
    }
    r.check(
        values.windows(2).all(|w| w[0].abs() < w[1].abs()),
        "alpha = 1: |S| decreases as A decreases".into(),
    );
    // a decade in T moves A by 10^(1/3); S should follow A ln A
    for a1 in [1e-4, 1e-3] {
        let t1 = temperature_for_a(a1, a, &m).unwrap();
        let (s1, s2) = (entropy(&ideal, a, t1).unwrap().numeric, entropy(&ideal, a, 10.0 * t1).unwrap().numeric);
        let a2 = a1 * 10f64.powf(1.0 / 3.0);
        let expected = a2 * a2.ln() / (a1 * a1.ln());
        let d = rel(s2 / s1, expected);
        r.check(d < 0.15, format!("alpha = 1, T -> 10 T from A = {a1:.0e}: S ratio {:.4} vs A ln A ratio {expected:.4} ({:.1}% < 15%)", s2 / s1, 100.0 * d));
    }
    r
}

fn ideal_limits() -> Report {
    let mut r = Report::new();
    let cfg = QuadratureConfig::default();
    for tau in [0.05, 0.1, 0.2, 0.3] {
        let g = integral_set(&Reflection::Ideal, tau, &cfg).unwrap().g();
        let expect = g_ideal(tau).unwrap();
        let d = rel(g, expect);
        r.check(d < 0.05, format!("tau = {tau}: numeric G {g:.6e} vs closed form {expect:.6e} ({:.3}% < 5%)", 100.0 * d));
    }
    let a = 1e-6;
    let f = free_energy_t0(a, &Reflection::Ideal, &cfg).unwrap();
    let exact = ideal_casimir_energy(a);
    let d = rel(f, exact);
    r.check(d < 1e-3, format!("F(a, 0) = {f:.6e} J/m^2 vs -pi^2 hbar c / 720 a^3 = {exact:.6e} ({:.2e} < 1e-3)", d));
    r
}

/// Temperature where gold's Bloch-Gruneisen `l / delta` equals `ratio`.
fn ase_boundary(ratio: f64, m: &MaterialParams) -> f64 {
    let l = |t: f64| applicability(t, 1e-7, m, RelaxationModel::BlochGruneisen, ratio).unwrap().l_over_delta;
    let (mut lo, mut hi) = (1.0, 1000.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if l(mid) > ratio {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn thresholds() -> Report {
    let mut r = Report::new();
    let m = MaterialParams::gold();
    let t_imp = impedance_form_limit(&m);
    r.check((t_imp - 77.5).abs() <= 0.5, format!("impedance-form boundary {t_imp:.2} K (77.5 +- 0.5)"));
    for (ratio, expect) in [(5.0, 113.0), (10.0, 67.0)] {
        let t = ase_boundary(ratio, &m);
        r.check((t - expect).abs() <= 3.0, format!("l/delta = {ratio}: {t:.2} K ({expect} +- 3)"));
    }
    r
}

fn oracle_and_force() -> Report {
    let mut r = Report::new();
    let cfg = QuadratureConfig::default();
    let bound = 3.0 * cfg.abs_tol;
    let mut worst: f64 = 0.0;
    for (a, tau) in sample_points(10) {
        let refl = Reflection::impedance_reduced(a, tau);
        for pol in Polarization::BOTH {
            let diffs = [
                integral_i1(&refl, pol, tau, &cfg).unwrap().value - i1_oracle(&refl, pol, tau),
                integral_i2(&refl, pol, tau, &cfg).unwrap().value - i2_oracle(&refl, pol, tau),
                integral_i3(&refl, pol, tau, &cfg).unwrap().value - i3_oracle(&refl, pol, tau),
            ];
            worst = diffs.iter().fold(worst, |w, d| w.max(d.abs()));
        }
    }
    r.check(worst <= bound, format!("I1, I2, I3 on 10 random points: largest |adaptive - oracle| {worst:.2e} <= {bound:.0e}"));

    let m = MaterialParams::gold();
    let t = 10.0;
    let force_gap = |setup: &CasimirSetup, a_param: f64| {
        let a = separation_for_a(a_param, t, &m).unwrap();
        let numeric = force_plate_plate(setup, a, t).unwrap().numeric;
        let closed = pressure_closed_form(setup, a, t).unwrap();
        (a, numeric, closed, rel(closed, numeric))
    };
    let ideal = CasimirSetup::gold();
    for a_param in [50.0, 100.0, 200.0, 500.0] {
        let (a, num, closed, d) = force_gap(&ideal, a_param);
        r.check(d < 0.05, format!("alpha = 1, A = {a_param} (a = {:.3} um, T = {t} K): closed form {closed:.4e} vs -dF/da {num:.4e} N/m^2 ({:.1}% < 5%)", a * 1e6, 100.0 * d));
    }
    let half = CasimirSetup::gold().with_prescription(Prescription::Unmodified);
    for a_param in [50.0, 100.0] {
        let (_, _, _, d) = force_gap(&half, a_param);
        r.info(format!("alpha = 1/2, A = {a_param}: closed form off by {:.1}%", 100.0 * d));
    }
    r
}

type Criterion = (&'static str, fn() -> Report);

fn main() {
    let criteria: [Criterion; 7] = [
        ("constants q1 q2 p1 p2", constants),
        ("G(A) curve against both expansions", figure1),
        ("maximal correction for gold", maximal_correction),
        ("Nernst diagnostics", nernst),
        ("ideal-metal limits", ideal_limits),
        ("applicability thresholds for gold", thresholds),
        ("oracle equivalence and large-A force", oracle_and_force),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let report = run();
        println!("{} criterion {}: {name}", if report.pass { "PASS" } else { "FAIL" }, i + 1);
        for line in &report.lines {
            println!("    {line}");
        }
        failed += usize::from(!report.pass);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
