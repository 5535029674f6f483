//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Seeds are fixed so every run sees the same inputs.

use std::process::ExitCode;
use std::time::Instant;

use conegap::contraction::diameter_upper;
use conegap::cpn::{
    classify, delta, delta_vectors, e_region, hilbert_rplus, ConePoint, Membership,
};
use conegap::gauge::{dc_pair, exp_upper_bound, figure_pair, remark_row, remark_sequences};
use conegap::general::{complexify_birkhoff, delta_general};
use conegap::geometry::Disk;
use conegap::numerics::{eigenvalues, mat_apply, Complex, ComplexMatrix, ComplexVector};
use conegap::sampling::{
    random_condition_matrix, random_interior, random_member, random_real_positive, sampled_diameter,
};
use conegap::{certify_with, diameter_bounds, power_iterate, theta_sigma, CertifyOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn real(rows: &[&[f64]]) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(rows).unwrap()
}

fn pt(v: &[f64]) -> ConePoint {
    ConePoint::new(ComplexVector::from_real(v).unwrap()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(got: f64, want: f64, tol: f64, what: &str) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || {
        format!("{what}: got {got}, want {want} (tol {tol:e})")
    })
}

/// One certified random matrix per entry, sizes cycling through 2..=8.
struct Batch {
    matrices: Vec<ComplexMatrix>,
    delta_up: Vec<f64>,
}

fn batch() -> Batch {
    let mut r = rng(4);
    let mut matrices = Vec::new();
    let mut delta_up = Vec::new();
    for i in 0..100 {
        let n = 2 + i % 7;
        let eta = r.gen_range(0.1..1.0);
        let a = random_condition_matrix(n, eta, &mut r);
        let b = diameter_bounds(&a, 64).unwrap();
        delta_up.push(diameter_upper(&b, theta_sigma(&a).as_ref()));
        matrices.push(a);
    }
    Batch { matrices, delta_up }
}

fn hilbert_extension() -> Outcome {
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let n = 2 + i % 7;
        let (x, y) = (
            random_real_positive(n, &mut r),
            random_real_positive(n, &mut r),
        );
        let d = delta_vectors(
            &ComplexVector::from_real(&x).unwrap(),
            &ComplexVector::from_real(&y).unwrap(),
        )
        .map_err(|e| e.to_string())?;
        let h = hilbert_rplus(&x, &y).map_err(|e| e.to_string())?;
        worst = worst.max((d.value() - h).abs());
    }
    ensure(worst <= 1e-10, || format!("max deviation {worst:e}"))?;
    Ok(format!("1000 pairs, max deviation {worst:.1e}"))
}

fn golden_values() -> Outcome {
    close(
        delta(&pt(&[1.0, 1.0]), &pt(&[2.0, 1.0])).unwrap().value(),
        2f64.ln(),
        1e-12,
        "delta((1,1),(2,1))",
    )?;
    close(
        delta(&pt(&[2.0, 1.0]), &pt(&[1.0, 2.0])).unwrap().value(),
        4f64.ln(),
        1e-12,
        "delta((2,1),(1,2))",
    )?;
    for (x, y, c, rad) in [
        ([1.0, 1.0], [2.0, 1.0], 1.5, 0.5),
        ([2.0, 1.0], [1.0, 2.0], 1.25, 0.75),
    ] {
        let disks = e_region(&pt(&x), &pt(&y)).unwrap().disks().unwrap();
        let pair: &Disk = &disks[0];
        close(pair.center.re, c, 1e-12, "center")?;
        close(pair.center.im, 0.0, 1e-12, "center imaginary part")?;
        close(pair.radius, rad, 1e-12, "radius")?;
    }
    Ok("log 2, log 4, disks (1.5, 0.5) and (1.25, 0.75)".into())
}

fn triangle() -> Outcome {
    let mut r = rng(3);
    let mut violations = 0;
    for n in 2..=6 {
        for _ in 0..1000 {
            let p: Vec<ConePoint> = (0..3)
                .map(|_| ConePoint::new(random_interior(n, &mut r)).unwrap())
                .collect();
            let d = |a: usize, b: usize| delta(&p[a], &p[b]).unwrap().value();
            if d(0, 2) > d(0, 1) + d(1, 2) + 1e-9 {
                violations += 1;
            }
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok("5000 triples, 0 violations".into())
}

fn contraction(b: &Batch) -> Outcome {
    let mut r = rng(5);
    let mut violations = 0;
    for (a, &up) in b.matrices.iter().zip(&b.delta_up) {
        let n = a.dim();
        let c = (up / 4.0).tanh();
        for _ in 0..100 {
            let (x, y) = (random_member(n, &mut r), random_member(n, &mut r));
            let before = delta_vectors(&x, &y).unwrap();
            let after =
                delta_vectors(&mat_apply(a, &x).unwrap(), &mat_apply(a, &y).unwrap()).unwrap();
            let rhs = if before.is_finite() {
                c * (before.value() / 4.0).tanh()
            } else {
                c
            };
            if (after.value() / 4.0).tanh() > rhs + 1e-9 {
                violations += 1;
            }
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok("100 matrices x 100 pairs, 0 violations".into())
}

fn gap_soundness(b: &Batch) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for (a, &up) in b.matrices.iter().zip(&b.delta_up) {
        let ev = eigenvalues(a).map_err(|e| e.to_string())?;
        let ratio = ev[1].norm() / ev[0].norm();
        let c = (up / 4.0).tanh();
        ensure(ratio <= c + 1e-9, || {
            format!("ratio {ratio} exceeds rate {c}")
        })?;
        worst = worst.max(ratio - c);
    }
    let a = real(&[&[2.0, 1.0], &[1.0, 2.0]]);
    let cert = certify_with(&a, &CertifyOptions::default()).map_err(|e| e.to_string())?;
    let oracle = cert.oracle.ok_or("oracle missing")?;
    close(oracle.ratio, 1.0 / 3.0, 1e-9, "oracle ratio")?;
    close(
        cert.contraction.ok_or("no contraction")?,
        7.0 / 9.0,
        1e-12,
        "contraction",
    )?;
    Ok(format!(
        "largest ratio - rate {worst:.3}; 2x2 ratio 1/3, c 7/9"
    ))
}

fn theta_sigma_bound(b: &Batch) -> Outcome {
    let ts = theta_sigma(&real(&[&[2.0, 1.0], &[1.0, 2.0]])).ok_or("theta-sigma unavailable")?;
    close(ts.theta, 0.6, 1e-12, "theta")?;
    close(ts.sigma, 2.0, 1e-12, "sigma")?;
    close(ts.bound, 18.0 * 2f64.ln(), 1e-12, "bound")?;
    let mut r = rng(6);
    let mut checked = 0;
    for a in &b.matrices {
        let Some(ts) = theta_sigma(a) else { continue };
        let sampled = sampled_diameter(a, 100, &mut r).map_err(|e| e.to_string())?;
        ensure(sampled <= ts.bound + 1e-9, || {
            format!("sampled {sampled} exceeds {}", ts.bound)
        })?;
        checked += 1;
    }
    Ok(format!(
        "theta 0.6, sigma 2, 18 log 2; {checked} random matrices bounded"
    ))
}

fn sandwich(b: &Batch) -> Outcome {
    let mut r = rng(7);
    for a in &b.matrices {
        let bounds = diameter_bounds(a, 64).map_err(|e| e.to_string())?;
        let sampled = sampled_diameter(a, 100, &mut r).map_err(|e| e.to_string())?;
        ensure(bounds.delta1 <= sampled + 1e-9, || {
            format!("delta1 {} above sample max {sampled}", bounds.delta1)
        })?;
        ensure(
            sampled <= bounds.delta1 + 2.0 * bounds.delta2.upper + 1e-9,
            || format!("sample max {sampled} above {}", bounds.upper),
        )?;
    }
    Ok("100 matrices".into())
}

fn ordering() -> Outcome {
    let mut r = rng(8);
    let mut single = 0;
    for i in 0..1000 {
        let n = 2 + i % 4;
        let x = ConePoint::new(random_interior(n, &mut r)).unwrap();
        let y = ConePoint::new(random_interior(n, &mut r)).unwrap();
        let d = delta(&x, &y).unwrap().value();
        let dc = dc_pair(&x, &y).map_err(|e| e.to_string())?;
        let (lo, hi) = (dc.lower.value(), dc.upper.value());
        ensure(
            0.5 * d <= lo + 1e-12 && lo <= hi && hi <= exp_upper_bound(d) + 1e-9,
            || format!("delta {d}, interval [{lo}, {hi}]"),
        )?;
        if n == 2 {
            close(lo, d, 1e-12, "single-disk lower")?;
            close(hi, d, 1e-12, "single-disk upper")?;
            single += 1;
        }
    }
    Ok(format!("1000 pairs, {single} single-disk pairs exact"))
}

fn finiteness() -> Outcome {
    let mut r = rng(9);
    let mut infinite = 0;
    for i in 0..1000 {
        let n = 2 + i % 4;
        let x = ConePoint::new(random_member(n, &mut r)).unwrap();
        let y = ConePoint::new(random_member(n, &mut r)).unwrap();
        let d = delta(&x, &y).unwrap();
        let dc = dc_pair(&x, &y).map_err(|e| e.to_string())?;
        ensure(d.is_finite() == dc.upper.is_finite(), || {
            format!("delta {d}, upper {}", dc.upper)
        })?;
        infinite += usize::from(!d.is_finite());
    }
    Ok(format!("1000 pairs, {infinite} infinite, 0 exceptions"))
}

fn specialization() -> Outcome {
    let mut r = rng(10);
    let mut worst = 0.0f64;
    for i in 0..500 {
        let n = 2 + i % 5;
        let gens: Vec<Vec<f64>> = (0..n)
            .map(|k| (0..n).map(|j| f64::from(u8::from(j == k))).collect())
            .collect();
        let spec = complexify_birkhoff(&gens).unwrap();
        let (x, y) = (random_interior(n, &mut r), random_interior(n, &mut r));
        let g = delta_general(&spec, &x, &y)
            .map_err(|e| e.to_string())?
            .value();
        let c = delta_vectors(&x, &y).unwrap().value();
        worst = worst.max((g - c).abs());
    }
    ensure(worst <= 1e-10, || format!("max deviation {worst:e}"))?;
    Ok(format!("500 pairs, max deviation {worst:.1e}"))
}

fn power() -> Outcome {
    let a = real(&[&[2.0, 1.0], &[1.0, 2.0]]);
    let x0 = pt(&[1.0, 0.0]);
    let p = power_iterate(&a, &x0, 1e-12, 10_000).map_err(|e| e.to_string())?;
    ensure(p.residual <= 1e-10, || format!("residual {:e}", p.residual))?;
    let v = ComplexVector::from_real(&[1.0, 1.0])
        .unwrap()
        .normalized()
        .unwrap();
    for (m, step) in p.trace.iter().enumerate() {
        let x = &step.iterate;
        let h = x.hermitian(&v).unwrap();
        let phase = if h.norm() > 0.0 {
            h / h.norm()
        } else {
            Complex::new(1.0, 0.0)
        };
        let err = x.scale(phase).sub(&v).unwrap().norm();
        ensure(step.error_bound.value() >= err, || {
            format!(
                "step {}: bound {} below error {err}",
                m + 1,
                step.error_bound
            )
        })?;
        if m >= 5 {
            let prev = p.trace[m - 1].delta.value();
            if prev > 1e-6 {
                let ratio = step.delta.value() / prev;
                ensure((ratio - 1.0 / 3.0).abs() <= 0.02, || {
                    format!("step {}: ratio {ratio}", m + 1)
                })?;
            }
        }
    }
    Ok(format!(
        "{} steps, residual {:.1e}",
        p.iterations, p.residual
    ))
}

fn not_reproducible() -> Outcome {
    for k in 1..=16 {
        let s = remark_sequences(k).map_err(|e| e.to_string())?;
        for v in [&s.x, &s.y, &s.z] {
            ensure(classify(v).unwrap() != Membership::Outside, || {
                format!("k = {k}: vector outside")
            })?;
        }
    }
    let (x, y) = figure_pair();
    for v in [&x, &y] {
        ensure(classify(v).unwrap() != Membership::Outside, || {
            "figure vector outside".into()
        })?;
    }
    let uppers: Vec<f64> = [2, 4, 8, 16]
        .iter()
        .map(|&k| remark_row(k).map(|row| row.dc_xy.upper.value()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(uppers.windows(2).all(|w| w[0] < w[1]), || {
        format!("not monotone: {uppers:?}")
    })?;
    Ok(
        "memberships hold, dc upper grows; linear growth and strict inequality not certified"
            .into(),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let b = batch();
    let criteria: Vec<Criterion> = vec![
        ("hilbert extension", Box::new(hilbert_extension)),
        ("golden values", Box::new(golden_values)),
        ("triangle inequality", Box::new(triangle)),
        ("contraction", Box::new(|| contraction(&b))),
        ("gap soundness", Box::new(|| gap_soundness(&b))),
        ("theta-sigma bound", Box::new(|| theta_sigma_bound(&b))),
        ("diameter sandwich", Box::new(|| sandwich(&b))),
        ("gauge ordering", Box::new(ordering)),
        ("finiteness equivalence", Box::new(finiteness)),
        ("specialization", Box::new(specialization)),
        ("power iteration", Box::new(power)),
        ("not reproducible", Box::new(not_reproducible)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{tag} {:>2} {name}: {detail} ({:.2}s)",
            i + 1,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
