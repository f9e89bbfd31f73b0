//! `expsum`: line-delimited records from the exponential-sum, amplitude
//! estimation and zeta pipelines.
//!
//! Exit codes: 0 on success, 2 for malformed flags or input files, 3 for
//! numeric failures (poles, domain errors, non-convergence).

mod args;
mod record;

use std::io::{self, Write};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use rayon::prelude::*;
use serde_json::Value;

use expsum::amp_est::{
    hoeffding_shots, plan_amplitude_estimation, AEConfig, AeMethod, PreparedAmplitude,
    DEFAULT_DELTA,
};
use expsum::exp_sum::{
    es_classical_oracle, es_classical_oracle_truncated, es_sqrt_weighted_magnitude, plan_magnitude,
    plan_real, ExpSumProblem, ExpSumResult, MagnitudeConstruction, SharedOracle,
};
use expsum::func_rotation::Polynomial;
use expsum::rng::derive_seed;
use expsum::sim::{Circuit, Gate};
use expsum::state_prep::{ExplicitOracle, UniformOracle};
use expsum::zeta::{riemann_siegel_eval, scan_zeros, zeta_euler_maclaurin_eval, ZetaMethod};
use expsum::zeta_quantum::{HybridMode, HybridPlan, PowerWeightOracle, Recombination};

use args::{
    ae_name, parse_ae, parse_list, parse_phase, parse_weights, read_table, PhaseSpec, WeightSpec,
};
use record::{complex, num, object, opt_num, Emitter, Format, Record};

#[derive(Parser)]
#[command(
    name = "expsum",
    version,
    about = "Exponential sums and zeta values by simulated amplitude estimation"
)]
struct Cli {
    /// Output encoding, one record per line.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Report wall-clock time per record; otherwise `wall_time_ms` is null so
    /// that repeated runs are byte-identical.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Part {
    Re,
    Im,
    Mag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EsMethod {
    Phase,
    Inversion,
    Hadamard,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ZetaCmdMethod {
    Em,
    Rs,
    HybridEm,
    HybridRs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScanMethod {
    Em,
    Rs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BenchMethod {
    Cpp,
    Qft,
    Kitaev,
    Exact,
}

#[derive(Subcommand)]
enum Command {
    /// Weighted exponential sum Σ w_k e^{2πi f(k)} over 2^n indices.
    Es {
        #[arg(long)]
        n: usize,
        /// uniform, power:σ (w_k ∝ (k+1)^{−σ}) or a file of `k value` lines.
        #[arg(long, default_value = "uniform", value_parser = parse_weights)]
        weights: WeightSpec,
        /// poly:c0,c1,… (cycles) or a file of `k value` lines.
        #[arg(long = "f", value_parser = parse_phase)]
        f: PhaseSpec,
        #[arg(long, value_enum, default_value_t = Part::Re)]
        part: Part,
        #[arg(long, value_enum, default_value_t = EsMethod::Phase)]
        method: EsMethod,
        /// exact, qft:m, cpp:shots or kitaev:m[:shots_per_bit].
        #[arg(long, default_value = "exact", value_parser = parse_ae)]
        ae: AeMethod,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Records for seeds seed, seed+1, …; the simulation is shared.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        runs: u64,
        #[arg(long)]
        compare_oracle: bool,
    },
    /// ζ(σ + it).
    Zeta {
        #[arg(long, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 12)]
        digits: u32,
        #[arg(long, value_enum, default_value_t = ZetaCmdMethod::Em)]
        method: ZetaCmdMethod,
        #[arg(long, default_value = "exact", value_parser = parse_ae)]
        ae: AeMethod,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        runs: u64,
    },
    /// Error and query counts of the estimators over an ε grid.
    AeBench {
        #[arg(long)]
        a: f64,
        #[arg(long, default_value = "cpp,qft,kitaev", value_parser = parse_bench_methods)]
        methods: List<BenchMethod>,
        #[arg(long, default_value = "0.1,0.05,0.02,0.01", value_parser = parse_eps)]
        eps_grid: List<f64>,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Hardy Z samples and bisected sign changes on the critical line.
    ScanZeros {
        #[arg(long, allow_hyphen_values = true)]
        t_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        t_max: f64,
        #[arg(long)]
        step: f64,
        #[arg(long, value_enum, default_value_t = ScanMethod::Em)]
        method: ScanMethod,
    },
}

/// Comma-separated flag value.
#[derive(Debug, Clone)]
struct List<T>(Vec<T>);

fn parse_bench_methods(s: &str) -> Result<List<BenchMethod>, String> {
    s.split(',')
        .map(|m| BenchMethod::from_str(m.trim(), true))
        .collect::<Result<_, _>>()
        .map(List)
}

fn parse_eps(s: &str) -> Result<List<f64>, String> {
    let v: Vec<f64> = parse_list(s)?;
    if v.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
        return Err("every ε must lie in (0, 1)".into());
    }
    Ok(List(v))
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<expsum::Error> for Failure {
    fn from(e: expsum::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Numeric(format!("write failed: {e}"))
    }
}

type CmdResult = Result<(), Failure>;

struct Ctx<W: Write> {
    out: Emitter<W>,
    timing: bool,
    start: Instant,
}

impl<W: Write> Ctx<W> {
    fn elapsed(&self) -> Value {
        if self.timing {
            num(self.start.elapsed().as_secs_f64() * 1e3)
        } else {
            Value::Null
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("EXPSUM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    let mut ctx = Ctx {
        out: Emitter::new(cli.format, io::BufWriter::new(io::stdout().lock())),
        timing: cli.timing,
        start: Instant::now(),
    };
    let res = match cli.command {
        Command::Es {
            n,
            weights,
            f,
            part,
            method,
            ae,
            seed,
            runs,
            compare_oracle,
        } => cmd_es(
            &mut ctx,
            &EsArgs {
                n,
                weights,
                f,
                part,
                method,
                ae,
                seed,
                runs,
                compare_oracle,
            },
        ),
        Command::Zeta {
            sigma,
            t,
            digits,
            method,
            ae,
            seed,
            runs,
        } => cmd_zeta(&mut ctx, sigma, t, digits, method, ae, seed, runs),
        Command::AeBench {
            a,
            methods,
            eps_grid,
            trials,
            seed,
        } => cmd_ae_bench(&mut ctx, a, &methods.0, &eps_grid.0, trials, seed),
        Command::ScanZeros {
            t_min,
            t_max,
            step,
            method,
        } => cmd_scan_zeros(&mut ctx, t_min, t_max, step, method),
    };
    let res = res.and_then(|()| ctx.out.finish().map_err(Failure::from));
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

struct EsArgs {
    n: usize,
    weights: WeightSpec,
    f: PhaseSpec,
    part: Part,
    method: EsMethod,
    ae: AeMethod,
    seed: u64,
    runs: u64,
    compare_oracle: bool,
}

fn weight_oracle(n: usize, spec: &WeightSpec) -> Result<SharedOracle<f64>, Failure> {
    Ok(match spec {
        WeightSpec::Uniform => Arc::new(UniformOracle { n_qubits: n }),
        WeightSpec::Power(sigma) => Arc::new(PowerWeightOracle::new(n, 1u64 << n, *sigma)?),
        WeightSpec::File(path) => {
            let table = read_table(path, 1 << n).map_err(Failure::Usage)?;
            Arc::new(ExplicitOracle::new(n, &table)?)
        }
    })
}

fn spec_text(w: &WeightSpec) -> String {
    match w {
        WeightSpec::Uniform => "uniform".into(),
        WeightSpec::Power(s) => format!("power:{s}"),
        WeightSpec::File(p) => p.display().to_string(),
    }
}

fn phase_text(f: &PhaseSpec) -> String {
    match f {
        PhaseSpec::Poly(c) => format!(
            "poly:{}",
            c.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
        ),
        PhaseSpec::File(p) => p.display().to_string(),
    }
}

fn cmd_es<W: Write>(ctx: &mut Ctx<W>, a: &EsArgs) -> CmdResult {
    if a.n == 0 || a.n > expsum::exp_sum::ORACLE_MAX_QUBITS {
        return Err(Failure::Usage(format!(
            "--n must lie in 1..={}",
            expsum::exp_sum::ORACLE_MAX_QUBITS
        )));
    }
    let magnitude_method = matches!(a.method, EsMethod::Inversion | EsMethod::Hadamard);
    if magnitude_method != (a.part == Part::Mag) && a.method != EsMethod::Oracle {
        return Err(Failure::Usage(
            "--part mag goes with --method inversion|hadamard, --part re|im with --method phase"
                .into(),
        ));
    }
    let weights = weight_oracle(a.n, &a.weights)?;
    let problem = match &a.f {
        PhaseSpec::Poly(c) => {
            let poly = Polynomial::new(c.clone())?;
            ExpSumProblem::with_weights(weights, move |k| poly.eval(k as f64))?
        }
        PhaseSpec::File(path) => {
            let table = read_table(path, 1 << a.n).map_err(Failure::Usage)?;
            ExpSumProblem::with_weights(weights, move |k| table[k])?
        }
    };
    let cfg = AEConfig::new(a.ae, a.seed);
    let project = |z: Complex<f64>| match a.part {
        Part::Re => Complex::new(z.re, 0.0),
        Part::Im => Complex::new(0.0, z.im),
        Part::Mag => Complex::new(z.norm(), 0.0),
    };
    let oracle = if a.compare_oracle {
        Some(match a.part {
            Part::Mag if magnitude_method => {
                Complex::new(es_sqrt_weighted_magnitude(&problem)?, 0.0)
            }
            _ => project(es_classical_oracle_truncated(&problem)?),
        })
    } else {
        None
    };

    type Sampler = Box<dyn Fn(u64) -> expsum::Result<ExpSumResult>>;
    let sampler: Sampler = match (a.method, a.part) {
        (EsMethod::Oracle, _) => {
            let v = project(es_classical_oracle(&problem)?);
            Box::new(move |_| {
                Ok(ExpSumResult {
                    value: v,
                    method: expsum::exp_sum::ExpSumMethod::Oracle,
                    ae_error_bound: 0.0,
                    q_applications: 0,
                })
            })
        }
        (EsMethod::Phase, Part::Re) => Box::new(plan_real(&problem, &cfg)?),
        (EsMethod::Phase, _) => {
            let plan = plan_real(&problem.shifted(0.25), &cfg)?;
            Box::new(move |seed| {
                let mut r = plan(seed)?;
                r.value = Complex::new(0.0, r.value.re);
                Ok(r)
            })
        }
        (EsMethod::Inversion, _) => Box::new(plan_magnitude(
            &problem,
            &cfg,
            MagnitudeConstruction::InversionAboutMean,
        )?),
        (EsMethod::Hadamard, _) => Box::new(plan_magnitude(
            &problem,
            &cfg,
            MagnitudeConstruction::HadamardOr,
        )?),
    };

    let params = object([
        ("n", a.n.into()),
        ("weights", spec_text(&a.weights).into()),
        ("f", phase_text(&a.f).into()),
        ("part", format!("{:?}", a.part).to_lowercase().into()),
        ("method", format!("{:?}", a.method).to_lowercase().into()),
        ("ae", ae_name(a.ae).into()),
    ]);
    for i in 0..a.runs {
        let seed = a.seed.wrapping_add(i);
        let r = sampler(seed)?;
        let mut rec = Record::new("es");
        rec.set("params", params.clone())
            .set("result", complex(r.value))
            .set("error_bound", num(r.ae_error_bound));
        if let Some(o) = oracle {
            rec.set("oracle_value", complex(o))
                .set("deviation", num((r.value - o).norm()));
        }
        rec.set("q_applications", r.q_applications)
            .set("wall_time_ms", ctx.elapsed())
            .set("seed", seed);
        ctx.out.emit(rec)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_zeta<W: Write>(
    ctx: &mut Ctx<W>,
    sigma: f64,
    t: f64,
    digits: u32,
    method: ZetaCmdMethod,
    ae: AeMethod,
    seed: u64,
    runs: u64,
) -> CmdResult {
    if !sigma.is_finite() || !t.is_finite() {
        return Err(Failure::Usage("--sigma and --t must be finite".into()));
    }
    let s = Complex::new(sigma, t);
    let name = match method {
        ZetaCmdMethod::Em => "em",
        ZetaCmdMethod::Rs => "rs",
        ZetaCmdMethod::HybridEm => "hybrid-em",
        ZetaCmdMethod::HybridRs => "hybrid-rs",
    };
    let params = object([
        ("sigma", num(sigma)),
        ("t", num(t)),
        ("digits", digits.into()),
        ("method", name.into()),
        ("ae", ae_name(ae).into()),
    ]);
    let base = |seed: u64| {
        let mut rec = Record::new("zeta");
        rec.set("params", params.clone());
        (rec, seed)
    };
    match method {
        ZetaCmdMethod::Em | ZetaCmdMethod::Rs => {
            let (value, bound, n, k) = if method == ZetaCmdMethod::Em {
                let e = zeta_euler_maclaurin_eval(s, digits)?;
                (
                    e.value,
                    Some(e.remainder_bound),
                    e.params.n,
                    Some(e.params.k),
                )
            } else {
                let e = riemann_siegel_eval(s)?;
                (e.value, None, e.n, None)
            };
            for i in 0..runs {
                let (mut rec, seed) = base(seed.wrapping_add(i));
                rec.set("result", complex(value))
                    .set("error_bound", opt_num(bound))
                    .set(
                        "method_params",
                        object([("n", n.into()), ("k", k.map_or(Value::Null, Value::from))]),
                    )
                    .set(
                        "error_split",
                        object([("ae", num(0.0)), ("classical", opt_num(bound))]),
                    )
                    .set("q_applications", 0u64)
                    .set("wall_time_ms", ctx.elapsed())
                    .set("seed", seed);
                ctx.out.emit(rec)?;
            }
        }
        ZetaCmdMethod::HybridEm | ZetaCmdMethod::HybridRs => {
            let mode = if method == ZetaCmdMethod::HybridEm {
                HybridMode::EulerMaclaurin
            } else {
                HybridMode::RiemannSiegel
            };
            let cfg = AEConfig::new(ae, seed);
            let plan = HybridPlan::new(s, digits, mode, &cfg, Recombination::default())?;
            for i in 0..runs {
                let (mut rec, seed) = base(seed.wrapping_add(i));
                let r = plan.sample(seed)?;
                rec.set("result", complex(r.value))
                    .set("error_bound", num(r.total_error_bound()))
                    .set(
                        "method_params",
                        object([
                            ("n", r.n_terms.into()),
                            ("k", r.em_order.map_or(Value::Null, Value::from)),
                        ]),
                    )
                    .set(
                        "error_split",
                        object([
                            ("ae", num(r.ae_error_bound)),
                            ("classical", num(r.classical_error_bound)),
                        ]),
                    )
                    .set("q_applications", r.q_applications)
                    .set("wall_time_ms", ctx.elapsed())
                    .set("seed", seed);
                ctx.out.emit(rec)?;
            }
        }
    }
    Ok(())
}

/// Estimator settings that target additive accuracy ε.
fn bench_config(m: BenchMethod, eps: f64) -> AeMethod {
    let bits = (std::f64::consts::PI / eps).log2().ceil().max(1.0) as u32;
    match m {
        BenchMethod::Cpp => AeMethod::ClassicalPp {
            shots: hoeffding_shots(eps, DEFAULT_DELTA),
        },
        BenchMethod::Qft => AeMethod::Qft { bits },
        BenchMethod::Kitaev => AeMethod::Kitaev {
            bits,
            shots_per_bit: args::DEFAULT_SHOTS_PER_BIT,
        },
        BenchMethod::Exact => AeMethod::Exact,
    }
}

struct BenchRow {
    method: BenchMethod,
    eps: f64,
    ae: AeMethod,
    q_applications: u64,
    mean_err: f64,
    max_err: f64,
    within_eps: f64,
    within_bound: f64,
}

fn cmd_ae_bench<W: Write>(
    ctx: &mut Ctx<W>,
    a: f64,
    methods: &[BenchMethod],
    eps_grid: &[f64],
    trials: u64,
    seed: u64,
) -> CmdResult {
    if !(0.0..=1.0).contains(&a) {
        return Err(Failure::Usage("--a must lie in [0, 1]".into()));
    }
    let mut circuit = Circuit::new(1);
    circuit.gate(Gate::rot(a.acos(), 0))?;
    let prep = PreparedAmplitude::new(circuit, 0)?;
    let grid: Vec<(BenchMethod, f64)> = methods
        .iter()
        .flat_map(|&m| eps_grid.iter().map(move |&e| (m, e)))
        .collect();
    let rows = grid
        .par_iter()
        .map(|&(method, eps)| -> expsum::Result<BenchRow> {
            let ae = bench_config(method, eps);
            let plan = plan_amplitude_estimation(&prep, &AEConfig::new(ae, seed))?;
            let (mut sum, mut max, mut in_eps, mut in_bound) = (0.0f64, 0.0f64, 0u64, 0u64);
            for trial in 0..trials {
                let est = plan.sample(derive_seed(seed, trial))?;
                let err = (est.a_hat - a).abs();
                sum += err;
                max = max.max(err);
                in_eps += u64::from(
                    est.a_hat > a * (1.0 - eps) && est.a_hat < a * (1.0 + eps) || err == 0.0,
                );
                in_bound += u64::from(err <= est.a_bound());
            }
            Ok(BenchRow {
                method,
                eps,
                ae,
                q_applications: plan.q_applications(),
                mean_err: sum / trials as f64,
                max_err: max,
                within_eps: in_eps as f64 / trials as f64,
                within_bound: in_bound as f64 / trials as f64,
            })
        })
        .collect::<expsum::Result<Vec<_>>>()?;
    for r in rows {
        let mut rec = Record::new("ae-bench");
        rec.set(
            "params",
            object([
                ("a", num(a)),
                ("method", format!("{:?}", r.method).to_lowercase().into()),
                ("epsilon", num(r.eps)),
                ("ae", ae_name(r.ae).into()),
                ("trials", trials.into()),
            ]),
        )
        .set("mean_abs_error", num(r.mean_err))
        .set("max_abs_error", num(r.max_err))
        .set("within_multiplicative", num(r.within_eps))
        .set("within_bound", num(r.within_bound))
        .set("q_applications", r.q_applications)
        .set("wall_time_ms", ctx.elapsed())
        .set("seed", seed);
        ctx.out.emit(rec)?;
    }
    Ok(())
}

fn cmd_scan_zeros<W: Write>(
    ctx: &mut Ctx<W>,
    t_min: f64,
    t_max: f64,
    step: f64,
    method: ScanMethod,
) -> CmdResult {
    let m = match method {
        ScanMethod::Em => ZetaMethod::EulerMaclaurin,
        ScanMethod::Rs => ZetaMethod::RiemannSiegel,
    };
    let scan = scan_zeros(t_min, t_max, step, m)?;
    let params = object([
        ("t_min", num(t_min)),
        ("t_max", num(t_max)),
        ("step", num(step)),
        ("method", m.name().into()),
    ]);
    let row = |kind: &str, vals: [Value; 7]| {
        let mut rec = Record::new("scan-zeros");
        rec.set("params", params.clone()).set("kind", kind);
        for (k, v) in ["t", "z", "lo", "hi", "refined_lo", "refined_hi", "root"]
            .into_iter()
            .zip(vals)
        {
            rec.set(k, v);
        }
        rec
    };
    for (t, z) in scan.samples {
        let mut rec = row(
            "sample",
            [
                num(t),
                num(z),
                Value::Null,
                Value::Null,
                Value::Null,
                Value::Null,
                Value::Null,
            ],
        );
        rec.set("wall_time_ms", ctx.elapsed());
        ctx.out.emit(rec)?;
    }
    for b in scan.brackets {
        let mut rec = row(
            "zero",
            [
                Value::Null,
                Value::Null,
                num(b.lo),
                num(b.hi),
                num(b.refined_lo),
                num(b.refined_hi),
                num(b.root()),
            ],
        );
        rec.set("wall_time_ms", ctx.elapsed());
        ctx.out.emit(rec)?;
    }
    Ok(())
}
