use std::path::Path;

use barron_core::barron::{
    barron_constant, default_validation_grid, fourier_gap_demo, relu_to_heaviside, synthesize_shallow,
    BarronFunctionSpec, ReluAtom,
};
use barron_core::classifier::{synthesize_classifier, BarronBoundarySet};
use barron_core::erm::{erm_experiment, shattering_demo, ErmConfig};
use barron_core::measure::{disagreement_probability, preset, MeasureSpec};
use barron_core::nn::write_network;
use barron_core::par::mix;
use serde_json::json;

use crate::args::{Command, Demo, ErmSweep, RateSweep, SynthBarron};
use crate::output::{seed_field, CliError, CliResult, CsvTable};

pub fn run(command: Command) -> CliResult<()> {
    match command {
        Command::SynthBarron(a) => synth_barron(&a),
        Command::RateSweep(a) => rate_sweep(&a),
        Command::ErmSweep(a) => erm_sweep(&a),
        Command::Demo(d) => demo(d),
    }
}

fn read_context<T>(path: &Path, what: &str, read: impl FnOnce(&Path) -> barron_core::Result<T>) -> CliResult<T> {
    read(path).map_err(|e| match e {
        barron_core::Error::Numerical(_) => CliError::from(e),
        other => CliError::Input(format!("{what} {}: {other}", path.display())),
    })
}

fn load_measure(arg: &str) -> CliResult<MeasureSpec> {
    let path = Path::new(arg);
    if path.exists() {
        return read_context(path, "measure", MeasureSpec::read);
    }
    preset(arg).ok_or_else(|| {
        CliError::Input(format!("measure {arg}: no such file and not a preset (uniform, product, tilted)"))
    })
}

fn nonempty<T>(list: &[T], flag: &str) -> CliResult<()> {
    if list.is_empty() {
        return Err(CliError::Input(format!("{flag} needs at least one value")));
    }
    Ok(())
}

fn synth_barron(a: &SynthBarron) -> CliResult<()> {
    let spec = read_context(&a.spec, "spec", BarronFunctionSpec::read)?;
    let grid = default_validation_grid(&spec.domain, a.seed);
    let s = synthesize_shallow(&spec, a.n, a.k, a.seed, &grid)?;
    let bound_ok = s.weight_bound_holds();
    let meta = json!({
        "N": a.n,
        "K": a.k,
        "seed": a.seed,
        "candidate": s.candidate,
        "sup_error": s.sup_error,
        "barron_constant": barron_constant(&spec),
        "weight_bound": s.weight_bound,
        "max_abs_weight": s.max_abs_weight,
        "weight_bound_ok": bound_ok,
    });
    write_network(&a.out, &s.network, meta)?;
    println!(
        "sup_error={} weight_bound={} max_abs_weight={} weight_bound_ok={} hidden_width={}",
        s.sup_error,
        s.weight_bound,
        s.max_abs_weight,
        bound_ok,
        s.network.architecture()[1]
    );
    if !bound_ok {
        return Err(CliError::Numerical("weight bound violated".into()));
    }
    Ok(())
}

fn rate_sweep(a: &RateSweep) -> CliResult<()> {
    nonempty(&a.n, "--N")?;
    nonempty(&a.seeds, "--seeds")?;
    let omega = read_context(&a.omega, "set", BarronBoundarySet::read)?;
    let mu = load_measure(&a.measure)?;
    let cert = mu
        .certificate()
        .ok_or_else(|| CliError::Input("measure has no tube certificate".into()))?;
    let (d, big_m, b) = (omega.ambient_dim as f64, omega.len() as f64, omega.max_b());
    let mut table = CsvTable::new(&["N", "seed", "disagreement", "half_width", "bound"])?;
    for &n in &a.n {
        let bound = 6.0 * cert.constant * big_m * b.powf(cert.alpha) * d.powf(1.5) * (n as f64).powf(-cert.alpha / 2.0);
        for &seed in &a.seeds {
            let (net, _) = synthesize_classifier(&omega, n, a.k, seed)?;
            let e = disagreement_probability(&net, &omega, &mu, a.threshold, a.mc, mix(seed, 1))?;
            table.row(&[n.to_string(), seed.to_string(), e.estimate.to_string(), e.half_width.to_string(), bound.to_string()])?;
        }
    }
    table.finish(&a.out, &seed_field(&a.seeds))
}

fn erm_sweep(a: &ErmSweep) -> CliResult<()> {
    nonempty(&a.m, "--m")?;
    nonempty(&a.seeds, "--seeds")?;
    let omega = read_context(&a.omega, "set", BarronBoundarySet::read)?;
    let mu = load_measure(&a.measure)?;
    let config = ErmConfig {
        restarts: a.restarts,
        steps: a.steps,
        initial_step: a.initial_step,
        decay: a.decay,
        seed: 0,
    };
    println!("note: approximate ERM (logistic-surrogate descent with restarts); exact 0-1 minimization is not attempted");
    let mut table = CsvTable::new(&["m", "N", "seed", "empirical01", "risk_estimate", "risk_half_width", "bound_rhs"])?;
    for &m in &a.m {
        for &seed in &a.seeds {
            let r = erm_experiment(&omega, &mu, m, seed, &config, a.mc)?;
            table.row(&[
                r.m.to_string(),
                r.n.to_string(),
                r.seed.to_string(),
                r.empirical01.to_string(),
                r.risk_estimate.to_string(),
                r.risk_half_width.to_string(),
                r.bound_rhs.to_string(),
            ])?;
        }
    }
    table.finish(&a.out, &seed_field(&a.seeds))
}

fn demo(d: Demo) -> CliResult<()> {
    match d {
        Demo::Shatter { n, d, out } => {
            let r = shattering_demo(n, d)?;
            println!("{}/{} labelings realized", r.labelings_realized, r.labelings_total);
            if let Some(path) = out {
                let mut t = CsvTable::new(&["n", "d", "labelings_realized", "labelings_total", "max_barron_constant"])?;
                t.row(&[
                    r.n.to_string(),
                    r.d.to_string(),
                    r.labelings_realized.to_string(),
                    r.labelings_total.to_string(),
                    r.max_barron_constant.to_string(),
                ])?;
                t.finish(&path, "none")?;
            }
        }
        Demo::Gap { n, eps, out } => {
            if !(eps > 0.0 && eps < 1.0 / 3.0) {
                return Err(CliError::Input("--eps must lie in (0, 1/3)".into()));
            }
            nonempty(&n, "--n")?;
            if n.contains(&0) {
                return Err(CliError::Input("--n values must be positive".into()));
            }
            let rows = fourier_gap_demo(&n, eps);
            let mut t = CsvTable::new(&["n", "second_derivative_l1", "fourier_norm_estimate", "l1_over_n2", "norm_over_n"])?;
            for r in &rows {
                println!("n={} second_derivative_l1={} fourier_norm_estimate={}", r.n, r.second_derivative_l1, r.fourier_norm_estimate);
                t.row(&[
                    r.n.to_string(),
                    r.second_derivative_l1.to_string(),
                    r.fourier_norm_estimate.to_string(),
                    r.second_derivative_over_n2().to_string(),
                    r.fourier_norm_over_n().to_string(),
                ])?;
            }
            if let Some(path) = out {
                t.finish(&path, "none")?;
            }
        }
        Demo::Heaviside { q, r, out } => {
            let mu = [ReluAtom { outer: 1.0, direction: vec![1.0], offset: 0.0 }];
            let nu = relu_to_heaviside(&mu, r, q)?;
            let points: Vec<Vec<f64>> = (0..=2000).map(|i| vec![-1.0 + i as f64 / 1000.0]).collect();
            let dev = barron_core::barron::max_deviation(&mu, &nu, &points);
            let c_norm = (1.0 + r) * barron_core::barron::relu_norm(&mu);
            println!("Q={q} max_grid_deviation={dev} heaviside_norm={} c_times_relu_norm={c_norm}", nu.norm());
            if let Some(path) = out {
                let mut t = CsvTable::new(&["Q", "R", "max_grid_deviation", "heaviside_norm", "c_times_relu_norm"])?;
                t.row(&[q.to_string(), r.to_string(), dev.to_string(), nu.norm().to_string(), c_norm.to_string()])?;
                t.finish(&path, "none")?;
            }
        }
    }
    Ok(())
}
