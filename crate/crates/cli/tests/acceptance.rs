//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use ceoae_cli::args::{DenoiseArgs, SegmentArgs};
use ceoae_cli::commands::{cmd_denoise, cmd_segment, MATRIX_FILE};
use ceoae_cli::CliError;
use ceoae_core::pipeline::{
    bandpass, estimate_noise, ms_to_samples, process_recording, reject_artifacts, ResponseUnit,
};
use ceoae_core::shrinkage::observed_eigenvalue;
use ceoae_core::synth::{
    make_signal_matrix, run_benchmark, three_click_recording, white_noise_matrix, BenchScenario,
    MonteCarloTable, RecordingSpec, SynthConfig,
};
use ceoae_core::{
    cos_coefficient, debias_eigenvalue, denoise, frobenius_shrinker, wiener_coefficient, Method,
    NoiseEstimate, PipelineConfig, UnitMatrix,
};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const BETAS: [f64; 5] = [0.05, 0.25, 1.0, 2.0, 8.0];
const SIGMAS: [f64; 5] = [1.93e-6, 1e-4, 0.1, 1.0, 30.0];

type Check = Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

fn log_grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..points).map(move |k| (a + (b - a) * k as f64 / (points - 1) as f64).exp())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Suite {
    failed: usize,
}

impl Suite {
    fn run(&mut self, id: u32, name: &str, budget: Option<Duration>, f: impl FnOnce() -> Check) {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match (outcome, budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!(
                "took {:.2} s, budget {:.0} s",
                elapsed.as_secs_f64(),
                b.as_secs_f64()
            )),
            (o, _) => o,
        };
        let timing = match budget {
            Some(b) => format!("{:.2} s / {:.0} s", elapsed.as_secs_f64(), b.as_secs_f64()),
            None => format!("{:.2} s", elapsed.as_secs_f64()),
        };
        match outcome {
            Ok(detail) => println!("[PASS] {id} {name} ({timing}): {detail}"),
            Err(detail) => {
                self.failed += 1;
                println!("[FAIL] {id} {name} ({timing}): {detail}");
            }
        }
    }
}

// Shrinker oracles. Each one reaches the value by a route that does not
// share algebra with the implementation.

/// Spike position `x` maps to the bulk-normalized singular value
/// `y(x) = √((x + 1/x)(x + β/x))`; the Frobenius-optimal value is `x·c·c̃`
/// with the left and right cosines below.
fn shrinker_oracle_pair(x: f64, beta: f64) -> (f64, f64) {
    let y = ((x + 1.0 / x) * (x + beta / x)).sqrt();
    let x2 = x * x;
    let x4 = x2 * x2;
    let c = ((x4 - beta) / (x4 + beta * x2)).sqrt();
    let ct = ((x4 - beta) / (x4 + x2)).sqrt();
    (y, x * c * ct)
}

/// Bisection on the spike forward map above the detection edge.
fn debias_oracle(l: f64, sigma: f64, beta: f64) -> f64 {
    let s2 = sigma * sigma;
    let forward = |lam: f64| (lam + s2) * (1.0 + beta * s2 / lam);
    let mut lo = s2 * beta.sqrt();
    if l <= forward(lo) {
        return 0.0;
    }
    let mut hi = lo.max(l) * 2.0;
    while forward(hi) < l {
        hi *= 2.0;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if forward(mid) < l {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Gain from the squared eigenvector cosine: `K = t·c²`,
/// `c² = (1 − β/t²)/(1 + β/t)`, `h = K/(1+K)`.
fn cos_oracle(lambda: f64, sigma: f64, beta: f64) -> f64 {
    let t = lambda / (sigma * sigma);
    if t < beta.sqrt() {
        return 0.0;
    }
    let c2 = (1.0 - beta / (t * t)) / (1.0 + beta / t);
    let k = t * c2;
    k / (1.0 + k)
}

fn criterion_1() -> Check {
    let tol = 1e-10;
    let mut checks = 0usize;
    let mut worst = 0.0f64;
    let mut cmp = |what: &str, got: f64, want: f64| -> Result<(), String> {
        checks += 1;
        let e = rel(got, want);
        worst = worst.max(e);
        ensure(e <= tol, || format!("{what}: got {got:e}, oracle {want:e}, rel {e:e}"))
    };

    cmp("eta(3, 1)", frobenius_shrinker(3.0, 1.0).unwrap(), 5f64.sqrt())?;
    cmp("eta(2, 0.25)", frobenius_shrinker(2.0, 0.25).unwrap(), 6.5625f64.sqrt() / 2.0)?;
    cmp("debias(4.5, 1, 1)", debias_eigenvalue(4.5, 1.0, 1.0).unwrap(), 2.0)?;
    cmp("cos(2, 1, 1)", cos_coefficient(2.0, 1.0, 1.0).unwrap(), 0.5)?;
    cmp("wiener(3, 1)", wiener_coefficient(3.0, 1.0).unwrap(), 0.75)?;
    cmp("wiener(1, 1)", wiener_coefficient(1.0, 1.0).unwrap(), 0.5)?;
    cmp("wiener(5, 0)", wiener_coefficient(5.0, 0.0).unwrap(), 1.0)?;
    cmp("wiener(0, 0)", wiener_coefficient(0.0, 0.0).unwrap(), 0.0)?;

    for beta in BETAS {
        let edge = 1.0 + beta.sqrt();
        cmp("eta at edge", frobenius_shrinker(edge, beta).unwrap(), 0.0)?;
        for xi in [0.0, 0.5 * edge, edge * (1.0 - 1e-12)] {
            cmp("eta inside bulk", frobenius_shrinker(xi, beta).unwrap(), 0.0)?;
        }
        // Closer to the edge one ulp of ξ moves η by more than 1e-10.
        let x0 = beta.powf(0.25);
        for x in log_grid(x0 * 1.01, 1e3, 400) {
            let (y, eta) = shrinker_oracle_pair(x, beta);
            cmp("eta grid", frobenius_shrinker(y, beta).unwrap(), eta)?;
        }
        for sigma in SIGMAS {
            let s2 = sigma * sigma;
            let bulk_edge = s2 * (1.0 + beta.sqrt()).powi(2);
            cmp("debias at edge", debias_eigenvalue(bulk_edge * 0.999, sigma, beta).unwrap(), 0.0)?;
            cmp("debias of zero", debias_eigenvalue(0.0, sigma, beta).unwrap(), 0.0)?;
            cmp("cos below sqrt(beta)", cos_coefficient(0.99 * s2 * beta.sqrt(), sigma, beta).unwrap(), 0.0)?;
            for ratio in log_grid(1.0005, 1e6, 200) {
                let l = bulk_edge * ratio;
                cmp("debias grid", debias_eigenvalue(l, sigma, beta).unwrap(), debias_oracle(l, sigma, beta))?;
            }
            for t in log_grid(1.001 * beta.sqrt(), 1e6, 200) {
                let lambda = t * s2;
                cmp("cos grid", cos_coefficient(lambda, sigma, beta).unwrap(), cos_oracle(lambda, sigma, beta))?;
                let l = lambda * 3.7;
                cmp("wiener grid", wiener_coefficient(l, sigma).unwrap(), 1.0 / (1.0 + s2 / l))?;
            }
        }
    }
    Ok(format!("{checks} checks, worst relative error {worst:.1e} (tol 1e-10)"))
}

fn criterion_2() -> Check {
    let mut checks = 0usize;
    let mut worst = 0.0f64;
    for beta in BETAS {
        for sigma in SIGMAS {
            let s2 = sigma * sigma;
            for t in log_grid(1.01 * beta.sqrt(), 1e6, 500) {
                let lambda = t * s2;
                let back = debias_eigenvalue(observed_eigenvalue(lambda, sigma, beta), sigma, beta)
                    .map_err(|e| e.to_string())?;
                let e = rel(back, lambda);
                worst = worst.max(e);
                checks += 1;
                ensure(e <= 1e-10, || {
                    format!("beta {beta}, sigma {sigma}, lambda/sigma^2 {t}: rel {e:e}")
                })?;
            }
        }
    }
    Ok(format!("{checks} grid points, worst relative error {worst:.1e} (tol 1e-10)"))
}

fn criterion_3() -> Check {
    let mut parts = Vec::new();
    for (k, (p, n)) in [(200usize, 100usize), (100, 400)].into_iter().enumerate() {
        let mut good = 0;
        let mut worst = 0.0f64;
        for r in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 * (k as u64 + 1) + r);
            let y = white_noise_matrix::<f64, _>(p, n, 1.0, &mut rng).map_err(|e| e.to_string())?;
            let ratio = {
                let y = UnitMatrix::new(y, 1.0).map_err(|e| e.to_string())?;
                let out = denoise(Method::SvdShrinkage, &y, &NoiseEstimate::known(1.0).unwrap())
                    .map_err(|e| e.to_string())?;
                out.x_hat.norm() / y.data().norm()
            };
            worst = worst.max(ratio);
            if ratio <= 0.05 {
                good += 1;
            }
        }
        parts.push(format!("{p}x{n}: {good}/100 (largest ratio {worst:.3})"));
        ensure(good >= 95, || format!("{p}x{n}: only {good}/100 realizations suppressed"))?;
    }
    Ok(parts.join(", "))
}

fn criterion_4() -> Check {
    let cfg = SynthConfig {
        p: 640,
        ..SynthConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut parts = Vec::new();
    for n in [50usize, 400] {
        let x = make_signal_matrix::<f64, _>(&cfg, n, &mut rng).map_err(|e| e.to_string())?;
        let rms = (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt();
        let sigma = 1e-6 * rms;
        let z = white_noise_matrix::<f64, _>(cfg.p, n, sigma, &mut rng).map_err(|e| e.to_string())?;
        let y = UnitMatrix::new(x + z, cfg.sample_rate).map_err(|e| e.to_string())?;
        for m in [Method::CovarianceShrinkage, Method::SvdShrinkage, Method::Wiener] {
            let out = denoise(m, &y, &NoiseEstimate::known(sigma).unwrap()).map_err(|e| e.to_string())?;
            let dev = (&out.x_hat - y.data()).norm() / y.data().norm();
            parts.push(format!("{m}@{n} {dev:.1e}"));
            ensure(dev <= 1e-3, || format!("{m} at n = {n}: relative deviation {dev:e}"))?;
        }
    }
    Ok(parts.join(", "))
}

fn print_table(t: &MonteCarloTable, n_values: &[usize]) {
    print!("       method");
    for n in n_values {
        print!("  {:>14}", format!("n={n}"));
    }
    println!();
    for m in Method::ALL {
        print!("       {:<6}", m.short_name());
        for &n in n_values {
            match t.row(m, n) {
                Some(r) => print!("  {:>14}", format!("{:.2} ({:.2})", r.median_db, r.iqr_db)),
                None => print!("  {:>14}", "-"),
            }
        }
        println!();
    }
}

fn criterion_5(t: &MonteCarloTable, scenario: &BenchScenario) -> Check {
    let med = |m: Method, n: usize| {
        t.median_db(m, n)
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("no finite median for {m} at n = {n}"))
    };
    ensure(t.failures.is_empty(), || format!("{} failed realizations", t.failures.len()))?;
    let bm400 = med(Method::Baseline, 400)?;
    ensure((bm400 - 5.0).abs() <= 1.0, || format!("BM at n = 400 is {bm400:.2} dB, outside 5 ± 1"))?;
    let mut gains = Vec::new();
    for &n in &scenario.n_values {
        let (bm, wf, cos, sos) = (
            med(Method::Baseline, n)?,
            med(Method::Wiener, n)?,
            med(Method::CovarianceShrinkage, n)?,
            med(Method::SvdShrinkage, n)?,
        );
        ensure(sos >= cos && cos >= wf && wf >= bm, || {
            format!("ordering broken at n = {n}: sos {sos:.2}, cos {cos:.2}, wf {wf:.2}, bm {bm:.2}")
        })?;
        ensure(wf - bm <= 1.0, || format!("WF − BM = {:.2} dB at n = {n}", wf - bm))?;
        gains.push((n, sos - bm));
    }
    gains.sort_by_key(|g| std::cmp::Reverse(g.0));
    for w in gains.windows(2) {
        ensure(w[1].1 >= w[0].1, || {
            format!(
                "sOS − BM falls from {:.2} dB (n = {}) to {:.2} dB (n = {})",
                w[0].1, w[0].0, w[1].1, w[1].0
            )
        })?;
    }
    let at50 = gains.iter().find(|g| g.0 == 50).map(|g| g.1).ok_or("n = 50 missing")?;
    ensure(at50 >= 3.0, || format!("sOS − BM at n = 50 is {at50:.2} dB"))?;
    let list: Vec<String> = gains.iter().map(|(n, g)| format!("{n}:{g:.2}")).collect();
    Ok(format!(
        "BM@400 {bm400:.2} dB, ordering holds, sOS−BM [{}] dB, σ = {:.3e} Pa",
        list.join(" "),
        t.sigma
    ))
}

fn criterion_6(t: &MonteCarloTable, scenario: &BenchScenario) -> Check {
    let mut ns = scenario.n_values.clone();
    ns.sort_unstable_by(|a, b| b.cmp(a));
    let mut drops = Vec::new();
    for w in ns.windows(2) {
        ensure(w[0] == 2 * w[1], || format!("n values {} and {} are not a halving", w[0], w[1]))?;
        let a = t.median_db(Method::Baseline, w[0]).ok_or("missing BM row")?;
        let b = t.median_db(Method::Baseline, w[1]).ok_or("missing BM row")?;
        let d = a - b;
        drops.push(format!("{}→{}: {d:.2}", w[0], w[1]));
        ensure((d - 3.0).abs() <= 0.8, || format!("BM drop {}→{} is {d:.2} dB", w[0], w[1]))?;
    }
    Ok(format!("BM drop per halving [{}] dB (3 ± 0.8)", drops.join(", ")))
}

fn energy(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn spike_unit(len: usize, at: usize, value: f64) -> ResponseUnit<f64> {
    let mut v = vec![0.0; len];
    v[at] = value;
    ResponseUnit::new(v)
}

fn criterion_7() -> Check {
    let cfg = PipelineConfig::default();
    let fs = 44_100.0;
    let mut parts = Vec::new();

    let p = ms_to_samples(cfg.analysis_window_ms, fs);
    ensure(p == 882, || format!("20 ms at 44.1 kHz gave p = {p}"))?;

    // Linear cancellation on a noiseless recording with no nonlinear part.
    let spec = RecordingSpec {
        units: 20,
        noise_db_spl: -400.0,
        residual_db_spl: -400.0,
        ..RecordingSpec::default()
    };
    let rec = three_click_recording(&spec).map_err(|e| e.to_string())?;
    let out = process_recording(&rec.buffer, &cfg).map_err(|e| e.to_string())?;
    let y = out.matrix.ok_or("linear fixture was abandoned")?;
    ensure(y.p() == 882 && y.n() == 20, || format!("linear fixture gave {}x{}", y.p(), y.n()))?;
    let filtered = bandpass(&rec.buffer, &cfg).map_err(|e| e.to_string())?;
    let single = energy(&filtered.samples()[out.t0..out.t0 + p]);
    let worst_col = (0..y.n())
        .map(|j| energy(y.data().column(j).as_slice()))
        .fold(0.0, f64::max);
    let cancel = 10.0 * (single / worst_col.max(f64::MIN_POSITIVE)).log10();
    parts.push(format!("cancellation {cancel:.0} dB"));
    ensure(cancel >= 40.0, || format!("linear cancellation only {cancel:.1} dB"))?;

    // With the nonlinear residual and noise present the residual survives.
    let spec = RecordingSpec {
        units: 20,
        noise_db_spl: -400.0,
        ..RecordingSpec::default()
    };
    let rec = three_click_recording(&spec).map_err(|e| e.to_string())?;
    let out = process_recording(&rec.buffer, &cfg).map_err(|e| e.to_string())?;
    let y = out.matrix.ok_or("residual fixture was abandoned")?;
    let mut padded = vec![0.0; 3 * 4400];
    padded[4400..8800].copy_from_slice(&rec.residual);
    let truth = bandpass(
        &ceoae_core::SampleBuffer::new(padded, fs).map_err(|e| e.to_string())?,
        &cfg,
    )
    .map_err(|e| e.to_string())?;
    let truth = &truth.samples()[4400..4400 + p];
    let err = (0..y.n())
        .map(|j| {
            let c = y.data().column(j);
            energy(&c.iter().zip(truth).map(|(a, b)| a - b).collect::<Vec<_>>())
        })
        .fold(0.0, f64::max);
    let keep = 10.0 * (energy(truth) / err.max(f64::MIN_POSITIVE)).log10();
    parts.push(format!("residual kept to {keep:.0} dB"));
    ensure(keep >= 40.0, || format!("residual distorted, error only {keep:.1} dB below it"))?;

    // Rejection edge cases on constructed responses.
    let len = 4400;
    let guard_last = ms_to_samples(cfg.reject_guard_ms, fs);
    let limit = ceoae_core::eval::pascals_from_db_spl(cfg.reject_threshold_db_spl);
    let cases = [
        ("50 dB exactly after guard", spike_unit(len, 600, limit), false),
        ("50.01 dB after guard", spike_unit(len, 600, limit * 10f64.powf(0.01 / 20.0)), true),
        ("negative 51 dB after guard", spike_unit(len, 600, -limit * 10f64.powf(1.0 / 20.0)), true),
        ("70 dB inside guard", spike_unit(len, 100, limit * 10.0), false),
        ("70 dB at 5 ms", spike_unit(len, guard_last, limit * 10.0), false),
        ("70 dB just after 5 ms", spike_unit(len, guard_last + 1, limit * 10.0), true),
        ("51 dB in last sample", spike_unit(len, len - 1, limit * 1.2), true),
    ];
    for (what, unit, expect) in cases {
        let s = reject_artifacts(vec![unit], &cfg, fs);
        let got = s.summary.rejected == 1;
        ensure(got == expect, || format!("{what}: rejected = {got}, expected {expect}"))?;
    }
    for (bad, abandon) in [(80usize, false), (81, true)] {
        let units: Vec<_> = (0..100)
            .map(|i| spike_unit(len, 600, if i < bad { limit * 2.0 } else { limit * 0.5 }))
            .collect();
        let s = reject_artifacts(units, &cfg, fs);
        ensure(s.summary.abandoned == abandon && s.summary.rejected == bad, || {
            format!("{bad}/100 bad units: abandoned = {}", s.summary.abandoned)
        })?;
    }
    parts.push("rejection edge cases ok".into());

    // The same rules through the segment command.
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let seg = |name: &str, bad: usize| {
        let (wav, _) = common::write_fixture(dir.path(), &format!("{name}.wav"), &common::fixture_spec(100, bad));
        cmd_segment(
            &SegmentArgs {
                wav,
                config: None,
                out: None,
            },
            &dir.path().join(name),
        )
    };
    match seg("abandon", 81) {
        Err(e @ CliError::Abandoned(_)) => ensure(e.exit_code() == 3, || "wrong exit code".into())?,
        other => return Err(format!("81% artifact fixture: {other:?}")),
    }
    let kept = seg("edge", 80).map_err(|e| e.to_string())?;
    ensure(kept.p == 882 && kept.n == 20, || format!("80% fixture gave {}x{}", kept.p, kept.n))?;
    parts.push("segment: 81% abandons (exit 3), 80% keeps 882x20".into());
    Ok(parts.join(", "))
}

fn criterion_8() -> Check {
    let cfg = PipelineConfig::default();
    let fs = 44_100.0;
    let tail = ms_to_samples(cfg.noise_tail_ms, fs);
    let mut worst = 0.0f64;
    let mut count = 0;
    for (k, &sigma) in [2e-5, 3.5e-4, 0.01, 1.0].iter().enumerate() {
        for n in [200usize, 400, 1000] {
            for seed in 0..5u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(((k as u64) << 32) | ((n as u64) << 8) | seed);
                let units: Vec<ResponseUnit<f64>> = (0..n)
                    .map(|_| {
                        let mut v: Vec<f64> = (0..4400)
                            .map(|i| {
                                let z: f64 = StandardNormal.sample(&mut rng);
                                sigma * z + if i < 4400 - tail { 50.0 * sigma * (i as f64 * 0.05).sin() } else { 0.0 }
                            })
                            .collect();
                        v[0] += 1.0;
                        ResponseUnit::new(v)
                    })
                    .collect();
                let est = estimate_noise(&units, &cfg, fs).map_err(|e| e.to_string())?;
                let e = rel(est.sigma(), sigma);
                worst = worst.max(e);
                count += 1;
                ensure(e <= 0.05, || format!("σ = {sigma}, n = {n}: estimate {:.4e}, rel {e:.3}", est.sigma()))?;
            }
        }
    }
    Ok(format!("{count} cases, worst relative error {:.2}% (tol 5%)", 100.0 * worst))
}

fn criterion_9() -> Check {
    let mut checks = 0usize;
    for beta in BETAS {
        for sigma in SIGMAS {
            let s2 = sigma * sigma;
            let grid = std::iter::once(0.0).chain(log_grid(1e-8 * s2, 1e8 * s2, 400));
            for l in grid {
                let lambda = debias_eigenvalue(l, sigma, beta).map_err(|e| e.to_string())?;
                let h = cos_coefficient(lambda, sigma, beta).map_err(|e| e.to_string())?;
                let hw = wiener_coefficient(l, sigma).map_err(|e| e.to_string())?;
                checks += 1;
                ensure(h <= hw, || format!("l = {l:e}, σ = {sigma}, β = {beta}: h {h} > ĥ {hw}"))?;
            }
        }
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (wav, _) = common::write_fixture(dir.path(), "rec.wav", &common::fixture_spec(120, 0));
    cmd_segment(
        &SegmentArgs {
            wav,
            config: None,
            out: None,
        },
        &dir.path().join("seg"),
    )
    .map_err(|e| e.to_string())?;
    let synthetic: DMatrix<f64> = common::signal_plus_noise(300, 80, 1.0, 0.4, 21);
    let synthetic = common::write_matrix(dir.path(), "S.csv", &synthetic, Some(0.4));
    let mut indices = 0;
    for matrix in [dir.path().join("seg").join(MATRIX_FILE), synthetic] {
        let run = |m: Method, name: &str| {
            cmd_denoise(
                &DenoiseArgs {
                    matrix: matrix.clone(),
                    method: m,
                    sigma: None,
                    out: None,
                },
                &dir.path().join(name),
            )
            .map_err(|e| e.to_string())
        };
        let cos = run(Method::CovarianceShrinkage, "cos")?;
        let wf = run(Method::Wiener, "wf")?;
        ensure(cos.spectrum_before == wf.spectrum_before, || "eigenvalues differ".into())?;
        for (i, (h, hw)) in cos.spectrum_after.iter().zip(&wf.spectrum_after).enumerate() {
            ensure(h <= hw, || format!("{}: index {i}: h {h} > ĥ {hw}", matrix.display()))?;
        }
        indices += cos.spectrum_after.len();
    }
    Ok(format!("{checks} grid points, {indices} eigen-indices from denoise diagnostics"))
}

fn main() {
    let mut suite = Suite { failed: 0 };
    let secs = |s| Some(Duration::from_secs(s));

    suite.run(1, "shrinker oracles", secs(1), criterion_1);
    suite.run(2, "round trip", secs(1), criterion_2);
    suite.run(3, "bulk suppression", secs(30), criterion_3);
    suite.run(4, "identity limits", secs(5), criterion_4);

    let scenario = BenchScenario::default();
    let synth = SynthConfig::default();
    let start = Instant::now();
    let table = run_benchmark::<f64>(&scenario, &synth);
    let bench_time = start.elapsed();
    match &table {
        Ok(t) => {
            println!(
                "       white-noise benchmark, {} realizations, {:.1} s:",
                scenario.realizations,
                bench_time.as_secs_f64()
            );
            print_table(t, &scenario.n_values);
        }
        Err(e) => println!("       benchmark failed: {e}"),
    }
    suite.run(5, "method ordering", None, || {
        ensure(bench_time <= Duration::from_secs(600), || {
            format!("benchmark took {:.1} s", bench_time.as_secs_f64())
        })?;
        match &table {
            Ok(t) => criterion_5(t, &scenario),
            Err(e) => Err(e.to_string()),
        }
    });
    suite.run(6, "3-dB rule", None, || match &table {
        Ok(t) => criterion_6(t, &scenario),
        Err(e) => Err(e.to_string()),
    });

    suite.run(7, "pipeline correctness", None, criterion_7);
    suite.run(8, "noise estimator", None, criterion_8);
    suite.run(9, "aggressiveness", None, criterion_9);

    if suite.failed > 0 {
        println!("{} criteria failed", suite.failed);
        std::process::exit(1);
    }
    println!("all criteria passed");
}
