//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any fails.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use revolve_core::expr::{Bindings, Curve};
use revolve_core::kepler::KeplerCurve;
use revolve_core::monotone::{check_lemma1, partition, validate_revolution_hypotheses, Rule};
use revolve_core::numerics::{integrate, Interval, Tolerances};
use revolve_core::volume::{
    disk_volume_x_axis, disk_volume_y_axis, piecewise_signed_sum, theorem1_x, theorem1_y,
    theorem2_y, CurveRole,
};

use common::{monotone_cubic, rel_err, trig_polynomial, CUBIC, TRIG};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn curve(src: &str, var: &str) -> Curve {
    Curve::parse(src, var, &Bindings::new()).unwrap()
}

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn within_second(t: Duration) -> bool {
    t < Duration::from_secs(1)
}

fn sine_ramp() -> Outcome {
    let tol = Tolerances::default();
    let want = 8.0 * PI.powi(3) / 3.0 + 4.0 * PI * PI;
    let start = Instant::now();
    let f = curve("x/pi + sin(x)", "x");
    let span = iv(0.0, 2.0 * PI);
    let t2 = theorem2_y(&f, span, &tol).map_err(|e| e.to_string())?;
    let p = partition(&f, span, &tol).map_err(|e| e.to_string())?;
    let pw = piecewise_signed_sum(&f, &p, &tol).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let (e2, ep) = (rel_err(t2.value, want), rel_err(pw.value, want));
    check(
        e2 <= 1e-10 && ep <= 1e-9 && within_second(elapsed),
        format!(
            "theorem2 {:.12} (rel {e2:.1e}), piecewise rel {ep:.1e}, {elapsed:?}",
            t2.value
        ),
    )
}

fn kepler_disk() -> Outcome {
    let tol = Tolerances::default();
    let mut worst: f64 = 0.0;
    for eps in [0.1, 0.5, 0.9] {
        let k = KeplerCurve::new(eps).unwrap();
        let v = disk_volume_y_axis(&k.curve(), CurveRole::XOfY, iv(0.0, 2.0 * PI), &tol)
            .map_err(|e| e.to_string())?
            .value;
        worst = worst.max(rel_err(v, k.reference_volumes().v_y));
    }
    check(
        worst <= 1e-8,
        format!("worst rel {worst:.1e} over eps 0.1, 0.5, 0.9"),
    )
}

fn kepler_inverse() -> Outcome {
    let tol = Tolerances::default();
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for eps in [0.1, 0.5, 0.9] {
        let k = KeplerCurve::new(eps).unwrap();
        let g = k.curve();
        let want = k.reference_volumes().v_x;
        let start = Instant::now();
        let disk = disk_volume_x_axis(&g, CurveRole::XOfY, iv(0.0, 2.0 * PI), &tol)
            .map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed());
        let start = Instant::now();
        let t1 = theorem1_x(&g, iv(0.0, 2.0 * PI), &tol).map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed());
        worst = worst
            .max(rel_err(disk.value, want))
            .max(rel_err(t1.value, want))
            .max(rel_err(disk.value, t1.value));
    }
    check(
        worst <= 1e-6 && within_second(slowest),
        format!("worst rel {worst:.1e}, slowest {slowest:?}"),
    )
}

fn theorem1_suite() -> Outcome {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e01);
    let (mut worst, mut up, mut down): (f64, usize, usize) = (0.0, 0, 0);
    for i in 0..200 {
        let c = monotone_cubic(&mut rng, i % 2 == 0);
        let t1 = theorem1_y(&c.curve, c.span, &tol).map_err(|e| format!("{CUBIC}: {e}"))?;
        let disk = disk_volume_y_axis(&c.curve, CurveRole::YOfX, c.span, &tol)
            .map_err(|e| e.to_string())?;
        match t1.sign_factor {
            1 => up += 1,
            -1 => down += 1,
            _ => return Err(format!("sign_factor {}", t1.sign_factor)),
        }
        worst = worst.max(rel_err(t1.value, disk.value));
    }
    check(
        worst <= 1e-8 && up > 0 && down > 0,
        format!("worst rel {worst:.1e}; {up} increasing, {down} decreasing"),
    )
}

fn lemma1_parity() -> Outcome {
    let tol = Tolerances::default();
    let span = iv(0.0, 2.0 * PI);
    let mut corpus: Vec<(String, Curve)> = [
        "x/pi + sin(x)",
        "2 - x/pi - sin(x)",
        "x",
        "x^2",
        "1 + x/pi + 0.5*sin(3*x)",
        "y - 0.5*sin(y)",
    ]
    .iter()
    .map(|s| {
        (
            s.to_string(),
            Curve::parse(s, if s.contains('y') { "y" } else { "x" }, &Bindings::new()).unwrap(),
        )
    })
    .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e44a);
    for _ in 0..300 {
        corpus.push((TRIG.to_string(), trig_polynomial(&mut rng)));
    }
    let (mut accepted, mut with_extrema) = (0, 0);
    for (name, f) in &corpus {
        let report = validate_revolution_hypotheses(f, span, &tol);
        if !report.satisfied {
            continue;
        }
        accepted += 1;
        let p = report.partition.as_ref().unwrap();
        if p.interior_count() > 0 {
            with_extrema += 1;
        }
        let verdict = check_lemma1(p, f.eval(span.lo).unwrap(), f.eval(span.hi).unwrap())
            .map_err(|e| e.to_string())?;
        if !p.interior_count().is_multiple_of(2) || !verdict {
            return Err(format!("{name}: {} interior extrema", p.interior_count()));
        }
    }
    let bad = validate_revolution_hypotheses(&curve("1 + sin(x)", "x"), iv(0.0, 1.5 * PI), &tol);
    let flagged = bad
        .violations
        .iter()
        .any(|v| v.rule == Rule::MultipleIntersection && (v.location - PI).abs() < 1e-9);
    check(
        !bad.satisfied && flagged && with_extrema > 0,
        format!(
            "{accepted}/{} accepted ({with_extrema} with extrema), all even; 1 + sin(x) rejected: {flagged}",
            corpus.len()
        ),
    )
}

fn degenerate_reduction() -> Outcome {
    let tol = Tolerances::default();
    let mut fixtures = vec![
        (curve("x", "x"), iv(1.0, 2.0)),
        (curve("3 - x", "x"), iv(1.0, 2.0)),
        (curve("x^2", "x"), iv(1.0, 2.0)),
        (curve("x", "x"), iv(0.0, 1.0)),
        (KeplerCurve::new(0.5).unwrap().curve(), iv(0.0, 2.0 * PI)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xde9);
    for i in 0..50 {
        let c = monotone_cubic(&mut rng, i % 2 == 1);
        fixtures.push((c.curve, c.span));
    }
    for (f, span) in &fixtures {
        let a = theorem2_y(f, *span, &tol).map_err(|e| e.to_string())?;
        let b = theorem1_y(f, *span, &tol).map_err(|e| e.to_string())?;
        if a.value.to_bits() != b.value.to_bits() || a.sign_factor != b.sign_factor {
            return Err(format!(
                "{} on {span:?}: {} vs {}",
                f.expr(),
                a.value,
                b.value
            ));
        }
    }
    Ok(format!(
        "{} monotone fixtures bit-identical",
        fixtures.len()
    ))
}

fn quadrature_floor() -> Outcome {
    let tol = Tolerances::default();
    let a = integrate(|x| x * x.sin(), 0.0, 2.0 * PI, &tol)
        .map_err(|e| e.to_string())?
        .value;
    let b = integrate(|x| x * x, 0.0, 1.0, &tol)
        .map_err(|e| e.to_string())?
        .value;
    let (ea, eb) = ((a + 2.0 * PI).abs(), (b - 1.0 / 3.0).abs());
    check(
        ea <= 1e-12 && eb <= 1e-14,
        format!("x sin x abs {ea:.1e}, x^2 abs {eb:.1e}"),
    )
}

fn derivative_oracle() -> Outcome {
    let cubic = Bindings::new()
        .with("s", -1.0)
        .with("k0", 0.7)
        .with("k2", 1.3)
        .with("r", 2.5)
        .with("c", 4.0);
    let trig = Bindings::new()
        .with("c", 2.0)
        .with("m", 1.5)
        .with("a1", 0.8)
        .with("b1", -0.4)
        .with("a2", 0.3)
        .with("b2", 0.2);
    let fixtures: Vec<(Curve, f64, f64)> = vec![
        (curve("x/pi + sin(x)", "x"), 0.0, 2.0 * PI),
        (curve("1/pi + cos(x)", "x"), 0.0, 2.0 * PI),
        (curve("2 - x/pi - sin(x)", "x"), 0.0, 2.0 * PI),
        (curve("y/pi + sin(y)", "y"), 0.0, 2.0 * PI),
        (curve("1 + sin(x)", "x"), 0.0, 1.5 * PI),
        (curve("y - 0.5*sin(y)", "y"), 0.0, 2.0 * PI),
        (curve("1 - 0.5*cos(y)", "y"), 0.0, 2.0 * PI),
        (curve("x^2 - 2", "x"), 1.0, 2.0),
        (curve("3 - x", "x"), 1.0, 2.0),
        (curve("x^3/3 + sqrt(x)", "x"), 0.1, 5.0),
        (curve("arccos(x/2)", "x"), -1.5, 1.5),
        (Curve::parse(CUBIC, "x", &cubic).unwrap(), 0.1, 5.0),
        (Curve::parse(TRIG, "x", &trig).unwrap(), 0.0, 2.0 * PI),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1ff);
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for (f, lo, hi) in &fixtures {
        for _ in 0..1000 {
            let x = rng.gen_range(lo + h..hi - h);
            let d = f.eval_derivative(x).map_err(|e| e.to_string())?;
            let fd = (f.eval(x + h).unwrap() - f.eval(x - h).unwrap()) / (2.0 * h);
            let err = (d - fd).abs() / (1.0 + d.abs());
            if err > 1e-5 {
                return Err(format!("{} at {x}: {d} vs {fd}", f.expr()));
            }
            worst = worst.max(err);
        }
    }
    Ok(format!(
        "{} expressions x 1000 points, worst {worst:.1e}",
        fixtures.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("sine ramp volume", sine_ramp),
        ("kepler disk volume", kepler_disk),
        ("kepler x-axis volume by inversion", kepler_inverse),
        ("by-parts against disk on random cubics", theorem1_suite),
        ("lemma 1 parity", lemma1_parity),
        ("degenerate reduction", degenerate_reduction),
        ("quadrature floor", quadrature_floor),
        ("derivative oracle", derivative_oracle),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(msg) => println!("PASS {} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
