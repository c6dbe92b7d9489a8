//! Acceptance suite. Each criterion prints one `[PASS]` or `[FAIL]` line; the
//! process fails if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use astro_float::{BigFloat, Consts, RoundingMode};
use barron_core::barron::{
    default_validation_grid, fourier_gap_demo, max_deviation, relu_norm, relu_to_heaviside,
    synthesize_shallow, BarronFunctionSpec, DomainBox, ReluAtom, SpectralAtom,
};
use barron_core::classifier::{synthesize_classifier, BarronBoundarySet, HorizonPatch};
use barron_core::erm::{choose_width, erm_experiment, shattering_demo, ErmConfig};
use barron_core::measure::{disagreement_probability, presets, tube_mass_estimate, MeasureSpec};
use barron_core::nn::{is_quantized, quantize, Layer, NeuralNetwork};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Turns any displayable error into the `String` detail of a failed criterion.
trait Stringly<T> {
    fn s(self) -> Result<T, String>;
}

impl<T, E: std::fmt::Display> Stringly<T> for Result<T, E> {
    fn s(self) -> Result<T, String> {
        self.map_err(|e| e.to_string())
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Least-squares slope of `ln y` against `ln x`.
fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    cov / var
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn square(d: usize) -> DomainBox {
    DomainBox::cube(d, -1.0, 1.0)
}

/// Horizon set on `[-1, 1]^2` below `x_2 = amplitude cos(2 x_1)`.
fn horizon(amplitude: f64) -> BarronBoundarySet {
    let rect = square(2);
    let face = rect.drop_axis(1);
    let boundary = if amplitude == 0.0 {
        BarronFunctionSpec::constant_fn(face, vec![0.0], 0.0)
    } else {
        BarronFunctionSpec::cosine(face, vec![2.0], amplitude)
    };
    BarronBoundarySet::new(
        2,
        vec![HorizonPatch { rectangle: rect, axis: 2, sign: 1, constant_b: 1.0, boundary_fn: boundary }],
    )
    .unwrap()
}

/// `M` slabs along `x_1` tiling `[-1, 1]^d`, each with boundary
/// `0.3 cos(<omega, x'>)` along the last axis and alternating orientation.
fn slabs(d: usize, m: usize) -> BarronBoundarySet {
    let patches = (0..m)
        .map(|j| {
            let mut rect = square(d);
            rect.lower[0] = -1.0 + 2.0 * j as f64 / m as f64;
            rect.upper[0] = -1.0 + 2.0 * (j + 1) as f64 / m as f64;
            let face = rect.drop_axis(d - 1);
            let x0 = face.center();
            let omega: Vec<f64> = (0..d - 1).map(|i| if i == 0 { 1.0 } else { 0.5 }).collect();
            let neg: Vec<f64> = omega.iter().map(|v| -v).collect();
            let phase0: f64 = omega.iter().zip(&x0).map(|(a, b)| a * b).sum();
            HorizonPatch {
                boundary_fn: BarronFunctionSpec {
                    domain: face,
                    base_point: x0,
                    constant: 0.3 * phase0.cos(),
                    atoms: vec![
                        SpectralAtom { frequency: omega, modulus: 0.15, phase: 0.0 },
                        SpectralAtom { frequency: neg, modulus: 0.15, phase: 0.0 },
                    ],
                },
                rectangle: rect,
                axis: d,
                sign: if j % 2 == 0 { 1 } else { -1 },
                constant_b: 1.0,
            }
        })
        .collect();
    BarronBoundarySet::new(d, patches).unwrap()
}

fn architecture_exactness() -> Outcome {
    let mut builds = 0;
    for d in [2usize, 3, 5] {
        for m in [1usize, 2, 4] {
            let omega = slabs(d, m);
            for n in [16usize, 64, 256] {
                let (net, report) = synthesize_classifier(&omega, n, 2, 7).s()?;
                let want = vec![d, m * (n + 2 * d + 2), m * (4 * d + 2), m, 1];
                let stats = net.stats();
                ensure(net.architecture() == want, || format!("(d,M,N)=({d},{m},{n}): {:?}", net.architecture()))?;
                ensure(stats.num_neurons <= 7 * m * (n + d), || format!("({d},{m},{n}): neurons {}", stats.num_neurons))?;
                ensure(stats.num_nonzero_weights <= 54 * d * d * m * n, || {
                    format!("({d},{m},{n}): nonzero weights {}", stats.num_nonzero_weights)
                })?;
                let r = omega.radius();
                let bound = d as f64 * (4.0 + r) * 2.0 + (n as f64).sqrt() * 2.0;
                ensure(stats.max_abs_weight <= bound, || {
                    format!("({d},{m},{n}): max weight {} > {bound}", stats.max_abs_weight)
                })?;
                ensure((report.bound_magnitude - bound).abs() < 1e-9, || "report magnitude bound differs".into())?;
                builds += 1;
            }
        }
    }
    Ok(format!("{builds} builds match (d, M(N+2d+2), M(4d+2), M, 1) and all bounds"))
}

fn barron_rate() -> Outcome {
    let spec = BarronFunctionSpec::cosine(square(2), vec![3.0, 2.0], 1.0);
    let grid = default_validation_grid(&spec.domain, 0);
    let ns = [16usize, 64, 256, 1024];
    let mut medians = vec![];
    for &n in &ns {
        let mut errs = vec![];
        for seed in 0..10 {
            let s = synthesize_shallow(&spec, n, 8, seed, &grid).s()?;
            ensure(s.weight_bound_holds(), || format!("N={n} seed={seed}: weight {} > {}", s.max_abs_weight, s.weight_bound))?;
            errs.push(s.sup_error);
        }
        medians.push(median(errs));
    }
    let slope = loglog_slope(&ns.map(|n| n as f64), &medians);
    ensure(slope <= -0.35, || format!("slope {slope:.3} > -0.35 (medians {medians:?})"))?;
    Ok(format!("median sup-errors {:?}, slope {slope:.3}", medians.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>()))
}

fn classifier_rate() -> Outcome {
    let mu = MeasureSpec::uniform(square(2));
    let ns = [16usize, 64, 256, 1024];
    let mut summary = vec![];
    for (name, omega) in [("flat", horizon(0.0)), ("cosine", horizon(0.4))] {
        let mut est = vec![];
        for &n in &ns {
            let (net, _) = synthesize_classifier(&omega, n, 8, 0).s()?;
            let e = disagreement_probability(&net, &omega, &mu, 0.5, 100_000, 1).s()?;
            // C = M = B = 1, alpha = 1, d = 2
            let bound = 6.0 * 2f64.powf(1.5) / (n as f64).sqrt();
            let se = e.half_width / 1.96;
            ensure(e.estimate <= bound + 3.0 * se, || format!("{name} N={n}: {} > {bound}", e.estimate))?;
            est.push(e.estimate);
        }
        let slope = loglog_slope(&ns.map(|n| n as f64), &est);
        ensure(slope <= -0.35, || format!("{name}: slope {slope:.3} (estimates {est:?})"))?;
        summary.push(format!("{name} slope {slope:.3}"));
    }
    Ok(summary.join(", "))
}

fn tube_audit() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    for (name, mu) in presets() {
        let cert = mu.certificate().ok_or("preset without certificate")?;
        for t in 0..50 {
            let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0));
            let axis = rng.gen_range(1..=2);
            let eps = rng.gen_range(0.01..=1.0);
            let f = move |x: &[f64]| a * x[0] + b;
            let e = tube_mass_estimate(&mu, &f, axis, eps, 20_000, t).s()?;
            ensure(e.estimate <= cert.bound(eps) + 3.0 * e.half_width, || {
                format!("{name}: tube a={a} b={b} axis={axis} eps={eps}: {} > {}", e.estimate, cert.bound(eps))
            })?;
            checked += 1;
        }
    }
    let mu = MeasureSpec::uniform(square(2));
    let e = tube_mass_estimate(&mu, &|_: &[f64]| 0.0, 2, 0.1, 100_000, 0).s()?;
    ensure((e.estimate - 0.1).abs() <= e.half_width, || format!("flat tube {} +- {}", e.estimate, e.half_width))?;
    Ok(format!("{checked} random tubes within C eps^alpha; flat tube {:.4} +- {:.4}", e.estimate, e.half_width))
}

/// Ceiling of the width formula evaluated entirely in 128-bit floating point.
fn width_oracle(b: f64, c: f64, big_m: usize, d: usize, m: u64, alpha: f64) -> usize {
    let p = 128;
    let rm = RoundingMode::ToEven;
    let mut cc = Consts::new().unwrap();
    let f = |v: f64| BigFloat::from_f64(v, p);
    let bc = f(b).mul(&f(c), p, rm);
    let dm = f(d as f64).mul(&BigFloat::from_u64(m, p), p, rm);
    let log = bc.mul(&f(big_m as f64), p, rm).mul(&dm, p, rm).ln(p, rm, &mut cc);
    let lam = bc.mul(&bc, p, rm).mul(&dm, p, rm).div(&log, p, rm);
    let v = lam.pow(&f(1.0).div(&f(1.0 + alpha), p, rm), p, rm, &mut cc);
    format!("{}", v.ceil()).parse::<f64>().unwrap() as usize
}

fn width_formula() -> Outcome {
    ensure(choose_width(1.0, 1.0, 1, 2, 100, 1.0) .ok() == Some(7), || "m=100 should give 7".into())?;
    ensure(choose_width(1.0, 1.0, 1, 2, 1, 1.0) .ok() == Some(2), || "m=1 should give 2".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let (b, c) = (rng.gen_range(1.0..10.0), rng.gen_range(1.0..10.0));
        let big_m = rng.gen_range(1..10);
        let d = rng.gen_range(2..10);
        let m = rng.gen_range(1..1_000_000u64);
        let alpha = rng.gen_range(0.01..=1.0);
        let got = choose_width(b, c, big_m, d, m, alpha).s()?;
        let want = width_oracle(b, c, big_m, d, m, alpha);
        ensure(got == want, || format!("({b},{c},{big_m},{d},{m},{alpha}): {got} vs oracle {want}"))?;
    }
    Ok("1000 random tuples match the 128-bit oracle; worked values 7 and 2".into())
}

fn estimation_trend() -> Outcome {
    let omega = horizon(0.0);
    let mu = MeasureSpec::uniform(square(2));
    // lighter than the library default so the whole sweep fits a single core
    let config = ErmConfig { restarts: 4, steps: 250, ..ErmConfig::default() };
    let mut medians = vec![];
    for m in [64usize, 256, 4096] {
        let mut risks = vec![];
        for seed in 0..10 {
            let row = erm_experiment(&omega, &mu, m, seed, &config, 100_000).s()?;
            ensure(row.empirical01 <= row.warm_start01, || {
                format!("m={m} seed={seed}: ERM loss {} > warm start {}", row.empirical01, row.warm_start01)
            })?;
            risks.push(row.risk_estimate);
        }
        medians.push(median(risks));
    }
    ensure(medians[0] > medians[1] && medians[1] > medians[2], || format!("medians not decreasing: {medians:?}"))?;
    Ok(format!("median risks {:?} for m = 64, 256, 4096", medians.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>()))
}

fn random_net(rng: &mut ChaCha8Rng) -> NeuralNetwork {
    let depth = rng.gen_range(1..=4);
    let mut arch = vec![rng.gen_range(1..=4)];
    for _ in 0..depth {
        arch.push(rng.gen_range(1..=6));
    }
    let scale = [0.01, 1.0, 30.0][rng.gen_range(0..3)];
    let layers = arch
        .windows(2)
        .map(|w| {
            let weights = (0..w[0] * w[1]).map(|_| rng.gen_range(-scale..scale)).collect();
            let bias = (0..w[1]).map(|_| rng.gen_range(-scale..scale)).collect();
            Layer::new(w[1], w[0], weights, bias).unwrap()
        })
        .collect();
    NeuralNetwork::new(arch[0], layers).unwrap()
}

fn quantization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut total = 0;
    for tau in [1u32, 2] {
        for (eps, log2_inv) in [(0.25, 2), (0.125, 3)] {
            let step = 2f64.powi(-(tau as i32) * log2_inv);
            let cap = 2f64.powi(tau as i32 * log2_inv);
            for _ in 0..1000 {
                let net = random_net(&mut rng);
                let q = quantize(&net, tau, eps).s()?;
                for w in q.parameters() {
                    ensure((w / step).fract() == 0.0 && w.abs() <= cap, || format!("tau={tau} eps={eps}: {w} off grid"))?;
                }
                ensure(is_quantized(&q, tau, eps).s()?, || "is_quantized rejected a quantized net".into())?;
                ensure(quantize(&q, tau, eps).s()? == q, || "quantization is not idempotent".into())?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} random nets on grid and idempotent"))
}

fn shattering() -> Outcome {
    for d in [2usize, 3] {
        for n in 1..=8 {
            let r = shattering_demo(n, d).s()?;
            ensure(r.labelings_realized == 1 << n, || format!("n={n} d={d}: {}/{}", r.labelings_realized, 1 << n))?;
        }
    }
    Ok("all 2^n labelings for n <= 8, d in {2, 3}".into())
}

fn representation_conversion() -> Outcome {
    let mu = [ReluAtom { outer: 1.0, direction: vec![1.0], offset: 0.0 }];
    let nu = relu_to_heaviside(&mu, 1.0, 10_000).s()?;
    // offset grid so points do not sit on quadrature cell midpoints
    let grid: Vec<Vec<f64>> = (0..4000).map(|i| vec![-1.0 + 2.0 * (i as f64 + 0.37) / 4000.0]).collect();
    let dev = max_deviation(&mu, &nu, &grid);
    ensure(dev <= 2e-4, || format!("deviation {dev} at Q = 10^4"))?;
    let c_norm = 2.0 * relu_norm(&mu);
    ensure((nu.norm() - c_norm).abs() <= 4.0 * f64::EPSILON * c_norm, || format!("norm {} vs {c_norm}", nu.norm()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let fine: Vec<Vec<f64>> = (0..40_000).map(|i| vec![-1.0 + 2.0 * (i as f64 + 0.5) / 40_000.0]).collect();
    let mut ratios = vec![];
    for _ in 0..5 {
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let atom = [ReluAtom {
            outer: rng.gen_range(0.5..2.0),
            direction: vec![sign * rng.gen_range(0.5..1.5)],
            offset: rng.gen_range(-0.5..0.5),
        }];
        let mut prev = None;
        for q in [1000usize, 2000, 4000] {
            let d = max_deviation(&atom, &relu_to_heaviside(&atom, 1.0, q).s()?, &fine);
            if let Some(p) = prev {
                let ratio: f64 = d / p;
                ensure((0.5 / 1.2..=0.5 * 1.2).contains(&ratio), || format!("Q={q}: ratio {ratio}"))?;
                ratios.push(ratio);
            }
            prev = Some(d);
        }
    }
    let worst = ratios.iter().map(|r: &f64| (r / 0.5).ln().abs()).fold(0.0, f64::max).exp();
    Ok(format!("deviation {dev:.2e} at Q=10^4, norm {} = C|mu|, halving within factor {worst:.3}", nu.norm()))
}

fn gap_demo() -> Outcome {
    let rows = fourier_gap_demo(&[1, 2, 4, 8], 0.25);
    let mut worst = 0.0f64;
    for r in &rows {
        let exact = 8.0 * std::f64::consts::PI * (r.n * r.n) as f64 / 0.25;
        let rel = (r.second_derivative_l1 / exact - 1.0).abs();
        ensure(rel <= 1e-6, || format!("n={}: {} vs {exact}", r.n, r.second_derivative_l1))?;
        worst = worst.max(rel);
    }
    Ok(format!("8 pi n^2 / eps reproduced, worst relative error {worst:.1e}"))
}

fn binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_barron-lab"))
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

/// Output bytes with a trailing `#` metadata line removed.
fn payload(path: &Path) -> Vec<u8> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n").into_bytes()
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().s()?;
    let commands: Vec<(&str, Vec<String>)> = vec![
        ("net.json", vec!["synth-barron".into(), "--spec".into(), data("cosine_spec.json"), "--N".into(), "16".into(), "--K".into(), "2".into(), "--seed".into(), "3".into()]),
        ("rate.csv", vec!["rate-sweep".into(), "--omega".into(), data("cosine_horizon.json"), "--measure".into(), data("uniform_square.json"), "--N".into(), "16,64".into(), "--mc".into(), "20000".into(), "--seeds".into(), "0,1".into(), "--K".into(), "2".into()]),
        ("erm.csv", vec!["erm-sweep".into(), "--omega".into(), data("flat_horizon.json"), "--measure".into(), "tilted".into(), "--m".into(), "64,128".into(), "--seeds".into(), "4".into(), "--mc".into(), "5000".into(), "--restarts".into(), "2".into(), "--steps".into(), "20".into()]),
        ("shatter.csv", vec!["demo".into(), "shatter".into(), "--n".into(), "5".into()]),
        ("gap.csv", vec!["demo".into(), "gap".into()]),
        ("heaviside.csv", vec!["demo".into(), "heaviside".into(), "--Q".into(), "2000".into()]),
    ];
    for (file, args) in &commands {
        let mut outputs = vec![];
        for threads in ["1", "3"] {
            let out = dir.path().join(format!("{threads}-{file}"));
            let status = Command::new(binary())
                .args(args)
                .arg("--out")
                .arg(&out)
                .env("RAYON_NUM_THREADS", threads)
                .output()
                .s()?;
            ensure(status.status.success(), || {
                format!("{args:?} failed: {}", String::from_utf8_lossy(&status.stderr))
            })?;
            outputs.push(payload(&out));
        }
        ensure(outputs[0] == outputs[1], || format!("{file}: outputs differ between runs"))?;
    }
    Ok(format!("{} commands byte-identical across runs with 1 and 3 workers", commands.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("architecture exactness", architecture_exactness),
        ("Barron approximation rate", barron_rate),
        ("classifier rate and bound dominance", classifier_rate),
        ("tube-compatibility audit", tube_audit),
        ("width formula", width_formula),
        ("estimation trend", estimation_trend),
        ("quantization grid", quantization),
        ("shattering", shattering),
        ("representation conversion", representation_conversion),
        ("gap demo", gap_demo),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail} ({secs:.1} s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {detail} ({secs:.1} s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
