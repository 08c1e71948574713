//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `catalog::KNOWN_DISAGREEMENTS` are printed as they come
//! out but do not fail the process; every other FAIL exits non-zero.

use std::process::Command;
use std::time::{Duration, Instant};

use flatcheck::algebra::rational::int;
use flatcheck::catalog::{self, CHART_NAMES, KNOWN_DISAGREEMENTS, PAIR_NAMES};
use flatcheck::checks::{all_passed, filtration_descends, groupoid_suite, spencer_suite, trace_suite, Tally};
use flatcheck::forms::identities::{
    chern_simons_report, identity_report, secondary_class, AnyGeometry, Backend, Geometry, ReportConfig,
};
use flatcheck::frames::{exact_component, ChartSpec};
use flatcheck::io;
use flatcheck::liepair::{order_of, Order};

struct Outcome {
    pass: bool,
    detail: String,
    /// Failure already explained and tolerated.
    tolerated: bool,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into(), tolerated: false }
    }
}

fn tallies(ts: &[Tally]) -> String {
    ts.iter().map(|t| format!("{} {}/{}", t.name, t.cases - t.failures, t.cases)).collect::<Vec<_>>().join(", ")
}

fn time_limit(elapsed: Duration, limit: f64) -> (bool, String) {
    let s = elapsed.as_secs_f64();
    (s < limit, format!("{s:.2}s (limit {limit}s)"))
}

fn config() -> ReportConfig {
    ReportConfig::default()
}

/// Four-dimensional unipotent chart where `T∧T∧T∧T` is not trivially zero.
fn unipotent4() -> ChartSpec {
    io::chart_from_str(
        r#"{"name":"unipotent4","n":4,"domain":[["-1","1"],["-1","1"],["-1","1"],["-1","1"]],
            "frame":[["1","0","0","0"],["x1","1","0","0"],["x2","x1","1","0"],["x3 + x1^2","x2","x1","1"]]}"#,
    )
    .expect("valid chart")
}

fn c1_oracle() -> Outcome {
    let t = Instant::now();
    let ts = groupoid_suite(0, 200, 0);
    let (fast, time) = time_limit(t.elapsed(), 1.0);
    Outcome::new(ts[0].passed() && ts[0].cases == 200 && fast, format!("{}; {time}", tallies(&ts[..1])))
}

fn c2_splitting() -> Outcome {
    let ts = groupoid_suite(1, 200, 20);
    Outcome::new(all_passed(&ts[1..]), tallies(&ts[1..]))
}

fn c3_rtilde() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["abelian2", "deformed2", "heisenberg3", "hyperbolic2", "affine-exp2", "su2-euler"] {
        let r = identity_report(&catalog::chart(name).unwrap(), &config()).unwrap();
        let good = match r.backend {
            Backend::Exact => r.residuals.rtilde == 0.0,
            Backend::Numeric => r.residuals.rtilde < 1e-7,
        };
        ok &= good;
        parts.push(format!("{name} {}={:.1e}", r.backend.as_str(), r.residuals.rtilde));
    }
    let (fast, time) = time_limit(t.elapsed(), 5.0);
    Outcome::new(ok && fast, format!("{}; {time}", parts.join(", ")))
}

fn c4_identities() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    let mut signs = Vec::new();
    let mut parts = Vec::new();
    for name in CHART_NAMES {
        match identity_report(&catalog::chart(name).unwrap(), &config()) {
            Ok(r) => {
                ok &= r.identities_hold();
                signs.push(r.sign);
                parts.push(format!("{name} max={:.1e}", r.residuals.max()));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    let one_sign = signs.windows(2).all(|w| w[0] == w[1]);
    let (fast, time) = time_limit(t.elapsed(), 30.0);
    Outcome::new(ok && one_sign && fast, format!("s={:?}; {}; {time}", signs.first(), parts.join(", ")))
}

fn c5_verdicts() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["heisenberg3", "hyperbolic2", "abelian2", "affine-exp2"] {
        let r = identity_report(&catalog::chart(name).unwrap(), &config()).unwrap();
        ok &= r.locally_homogeneous && r.max_r < 1e-6;
        parts.push(format!("{name} R={:.1e}", r.max_r));
    }
    let spec = catalog::chart("deformed2").unwrap();
    let r = identity_report(&spec, &config()).unwrap();
    ok &= r.max_r >= 1.0 && !r.locally_homogeneous;
    let g = Geometry::new(spec.exact_frame(5).unwrap(), 5);
    let exact: Vec<f64> = [0, 1, 2]
        .iter()
        .map(|&y| {
            let w = exact_component(&g.r, &[0, 1], 1, 0, &[int(0), flatcheck::algebra::rational::rat(y, 3)]).unwrap();
            flatcheck::algebra::rational::to_f64(&w).abs()
        })
        .collect();
    ok &= exact.iter().all(|w| (w - 2.0).abs() < 1e-6);
    // the same component from finite differences
    let numeric = match AnyGeometry::build(&spec, &ReportConfig { backend: flatcheck::forms::identities::BackendChoice::Numeric, ..config() }).unwrap() {
        AnyGeometry::Numeric(g) => g.r.entry(g.ctx(), &[0, 1], 1, 0).value(&[0.0, 0.5]).abs(),
        AnyGeometry::Exact(_) => f64::NAN,
    };
    ok &= (numeric - 2.0).abs() < 1e-6;
    parts.push(format!("deformed2 max|R|={:.3} |witness|={:?} fd={numeric:.9}", r.max_r, exact));
    Outcome::new(ok, parts.join(", "))
}

fn c6_even_traces() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut charts: Vec<ChartSpec> = CHART_NAMES.iter().map(|n| catalog::chart(n).unwrap()).collect();
    charts.push(catalog::chart("abelian4").unwrap());
    charts.push(unipotent4());
    for spec in &charts {
        let max_i = if spec.n() >= 4 { 2 } else { 1 };
        let cfg = config();
        let (worst, exact) = match AnyGeometry::build(spec, &cfg).unwrap() {
            AnyGeometry::Exact(g) => (even_trace_max(&g, max_i), true),
            AnyGeometry::Numeric(g) => (even_trace_max(&g, max_i), false),
        };
        ok &= if exact { worst == 0.0 } else { worst < cfg.tol2 };
        parts.push(format!("{} i<={max_i} {worst:.1e}", spec.name));
    }
    Outcome::new(ok, parts.join(", "))
}

fn even_trace_max<F: flatcheck::field::Field>(g: &Geometry<F>, max_i: usize) -> f64 {
    let powers = g.trace_powers(-1, 2 * max_i);
    (1..=max_i).map(|i| g.scalar_max(&powers.t_powers[2 * i - 1])).fold(0.0, f64::max)
}

fn c7_secondary() -> Outcome {
    let spec = catalog::chart("heisenberg3").unwrap();
    let g = Geometry::new(spec.exact_frame(5).unwrap(), 5);
    let c = secondary_class(&g, 1, true, 0.0);
    // informational: on a 2-step nilpotent algebra T∧T is already zero
    let t3_heis = g.scalar_max(&c.form);
    let su2 = match AnyGeometry::build(&catalog::chart("su2-euler").unwrap(), &config()).unwrap() {
        AnyGeometry::Numeric(g) => secondary_class(&g, 1, true, config().tol2),
        AnyGeometry::Exact(_) => unreachable!("su2-euler is not rational"),
    };
    let cs = chern_simons_report(&catalog::chart("su2-euler").unwrap(), &config()).unwrap();
    let (_, _, su2_res, closed) = cs.secondary[0];
    Outcome::new(
        c.d_residual == 0.0 && su2_res < 1e-4 && closed == Some(true),
        format!(
            "heisenberg3 dTr(T^3)={:.1e} (max|Tr(T^3)|={t3_heis:.1e}), su2-euler dTr(T^3)={su2_res:.1e} (max|Tr(T^3)|={:.3})",
            c.d_residual,
            su2.form.entries().map(|e| e.value(&[1.0, 1.0, 1.0]).abs()).fold(0.0, f64::max)
        ),
    )
}

fn c8_orders() -> Outcome {
    let t = Instant::now();
    let expected = [
        ("so3/so2", 1),
        ("e2/so2", 1),
        ("so21/so2", 1),
        ("sl2/borel", 2),
        ("p-subdiag2/b2", 2),
        ("p-subdiag3/b3", 3),
        ("p-subdiag4/b4", 4),
        ("so2xR2/so2", 1),
    ];
    let mut hard_ok = true;
    let mut all_ok = true;
    let mut parts = Vec::new();
    for (name, k) in expected {
        let (g, h) = catalog::lie_pair(name).unwrap();
        let got = order_of(&g, &h);
        let good = got == Order::Finite(k);
        all_ok &= good;
        if !KNOWN_DISAGREEMENTS.contains(&name) {
            hard_ok &= good;
        }
        let shown = match got {
            Order::Finite(m) => m.to_string(),
            Order::Ineffective(_) => "ineffective".into(),
        };
        let miss = if good { String::new() } else { format!(" (expected {k})") };
        parts.push(format!("{name}={shown}{miss}"));
    }
    let (fast, time) = time_limit(t.elapsed(), 1.0);
    Outcome { pass: all_ok && fast, detail: format!("{}; {time}", parts.join(", ")), tolerated: hard_ok && fast }
}

fn c9_filtration() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in PAIR_NAMES {
        let (g, h) = catalog::lie_pair(name).unwrap();
        match filtration_descends(&g, &h) {
            Some(good) => {
                ok &= good;
                parts.push(format!("{name}:{}", if good { "ok" } else { "bad" }));
            }
            None => parts.push(format!("{name}:ineffective")),
        }
    }
    Outcome::new(ok, parts.join(", "))
}

fn c10_spencer() -> Outcome {
    let t = Instant::now();
    let ts = spencer_suite(0, 50);
    let (fast, time) = time_limit(t.elapsed(), 10.0);
    Outcome::new(all_passed(&ts) && fast, format!("{}; {time}", tallies(&ts)))
}

fn c11_trace() -> Outcome {
    let ts = trace_suite(0, 50, 3);
    Outcome::new(all_passed(&ts) && ts.len() == 4, tallies(&ts))
}

fn cli_suite(seed: &str) -> Vec<u8> {
    let bin = env!("CARGO_BIN_EXE_flatcheck");
    let mut runs: Vec<Vec<String>> = Vec::new();
    for c in CHART_NAMES {
        runs.push(vec!["geom".into(), "report".into(), "--builtin".into(), c.into()]);
        runs.push(vec!["chern-simons".into(), "--builtin".into(), c.into()]);
    }
    for p in PAIR_NAMES {
        runs.push(vec!["liepair".into(), "order".into(), "--builtin".into(), p.into()]);
    }
    runs.push(vec!["spencer".into(), "check".into(), "--cases".into(), "10".into()]);
    runs.push(vec!["catalog".into(), "list".into()]);
    let mut bytes = Vec::new();
    for args in runs {
        let out = Command::new(bin).arg("--seed").arg(seed).args(&args).env_remove("FLATCHECK_BACKEND").output().unwrap();
        bytes.extend(format!("{:?} {:?}\n", args, out.status.code()).into_bytes());
        bytes.extend(out.stdout);
    }
    bytes
}

fn c12_determinism() -> Outcome {
    let a = cli_suite("42");
    let b = cli_suite("42");
    let valid = a.windows(4).any(|w| w == b"max_").then_some(()).is_some();
    Outcome::new(a == b && valid, format!("{} bytes per run, identical: {}", a.len(), a == b))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("G3 product matches truncated composition", c1_oracle),
        ("splitting homomorphism and Schwarzian defect", c2_splitting),
        ("R-tilde vanishes", c3_rtilde),
        ("identities with one calibrated sign", c4_identities),
        ("homogeneity verdicts", c5_verdicts),
        ("even torsion traces vanish", c6_even_traces),
        ("secondary classes are closed", c7_secondary),
        ("Lie pair orders", c8_orders),
        ("filtration stages have decreasing order", c9_filtration),
        ("Spencer suite", c10_spencer),
        ("trace intertwining", c11_trace),
        ("CLI determinism", c12_determinism),
    ];
    let start = Instant::now();
    let mut hard_failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && o.tolerated { " [known disagreement, see README]" } else { "" };
        println!("{tag} {:>2} {name} ({:.2}s){note}: {}", i + 1, t.elapsed().as_secs_f64(), o.detail);
        if !o.pass && !o.tolerated {
            hard_failures += 1;
        }
    }
    println!("acceptance finished in {:.2}s", start.elapsed().as_secs_f64());
    if hard_failures > 0 {
        eprintln!("{hard_failures} criteria failed");
        std::process::exit(1);
    }
}
