// CSV floats use `{:?}`: shortest round-trip digits, scientific for tiny values.
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nalgebra::{DMatrix, SymmetricEigen};
use serde_json::{json, Value};

use rkhs_interp::engine::constraints_from_json;
use rkhs_interp::kernel::{BasicKernel, H2Component, H2PartParams};
use rkhs_interp::numerics::{inner_product, KernelSection, SpaceSpec, DEFAULT_JITTER_SCHEDULE};
use rkhs_interp::schemes::{dirac_convergence_study, TestFunction};
use rkhs_interp::{assemble_gram, solve_min_norm, Error, Interpolant, Kernel};

#[derive(Parser)]
#[command(name = "rkhs", version, about = "Minimum-norm kernel interpolation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate H(s, t) over grid x grid as CSV (s-major).
    KernelEval {
        #[command(flatten)]
        kernel: KernelArg,
        #[arg(long)]
        grid: Grid,
        #[command(flatten)]
        out: OutArg,
    },
    /// Solve a minimum-norm problem and write the interpolant as JSON.
    Fit {
        #[arg(long)]
        kernel: Option<String>,
        #[arg(long)]
        constraints: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Evaluate a fitted interpolant over a grid as CSV.
    Eval {
        #[arg(long)]
        interpolant: PathBuf,
        #[arg(long)]
        grid: Grid,
        #[command(flatten)]
        out: OutArg,
    },
    /// Compare f(t) with <f, H(., t)> in the space of the kernel.
    VerifyReproduce {
        #[command(flatten)]
        kernel: KernelArg,
        #[arg(long)]
        f: String,
        /// Single evaluation point; defaults to nine interior points.
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Integrate L_h(., t) f against f(t) for each step as CSV.
    DiracStudy {
        #[arg(long)]
        f: String,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        h_list: Vec<f64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Assemble and factor the Gram matrix of point evaluations on a grid.
    GramCheck {
        #[command(flatten)]
        kernel: KernelArg,
        #[arg(long)]
        grid: Grid,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args)]
struct KernelArg {
    /// Kernel as inline JSON or a path to a JSON file.
    #[arg(long)]
    kernel: String,
}

#[derive(Args)]
struct OutArg {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// `a:b:n`, n points from a to b inclusive.
#[derive(Clone, Debug)]
struct Grid(Vec<f64>);

impl std::str::FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected a:b:n, got `{s}`"));
        };
        let a: f64 = a.parse().map_err(|e| format!("grid start: {e}"))?;
        let b: f64 = b.parse().map_err(|e| format!("grid end: {e}"))?;
        let n: usize = n.parse().map_err(|e| format!("grid size: {e}"))?;
        if !(a.is_finite() && b.is_finite()) {
            return Err("grid ends must be finite".into());
        }
        match n {
            0 => Err("grid must have at least one point".into()),
            1 => Ok(Grid(vec![a])),
            _ => {
                let step = (b - a) / (n - 1) as f64;
                let mut pts: Vec<f64> = (0..n).map(|i| a + i as f64 * step).collect();
                pts[n - 1] = b;
                Ok(Grid(pts))
            }
        }
    }
}

/// Failure with the process exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parameter { .. } | Error::Capability { .. } | Error::Json(_) => 2,
            Error::Domain { .. } | Error::DomainMismatch(_) | Error::Membership(_) => 3,
            Error::RankDeficient { .. } | Error::Infeasible(_) => 4,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::KernelEval { kernel, grid, out } => {
            let k = load_kernel(&kernel.kernel)?;
            require_1d(&k)?;
            let mut csv = String::from("s,t,value\n");
            for &s in &grid.0 {
                for &t in &grid.0 {
                    let v = k.eval1(s, t)?;
                    writeln!(csv, "{s:?},{t:?},{v:?}").unwrap();
                }
            }
            emit(&out, &csv)
        }
        Command::Fit {
            kernel,
            constraints,
            out,
        } => {
            let text = read(&constraints)?;
            let value: Value = serde_json::from_str(&text).map_err(Error::from)?;
            let (kernel_value, list) = match value {
                Value::Array(_) => (None, value),
                Value::Object(mut obj) => {
                    let list = obj
                        .remove("constraints")
                        .ok_or_else(|| usage("constraints file has no `constraints` field"))?;
                    (obj.remove("kernel"), list)
                }
                _ => return Err(usage("constraints file must hold an array or an object")),
            };
            let k = match (kernel, kernel_value) {
                (Some(arg), _) => load_kernel(&arg)?,
                (None, Some(v)) => Kernel::from_json(&v)?,
                (None, None) => return Err(usage("no kernel given (use --kernel or a `kernel` field)")),
            };
            let problem = constraints_from_json(k, list)?;
            let sigma = solve_min_norm(&problem)?;
            let mut doc = serde_json::to_value(&sigma).map_err(Error::from)?;
            doc["norm_sq"] = json!(sigma.norm_sq());
            emit(&out, &(pretty(&doc) + "\n"))
        }
        Command::Eval {
            interpolant,
            grid,
            out,
        } => {
            let sigma: Interpolant = serde_json::from_str(&read(&interpolant)?).map_err(|e| {
                // constraint or kernel validation errors surface as serde messages
                usage(format!("{}: {e}", interpolant.display()))
            })?;
            let csv = match sigma.kernel().dim() {
                1 => {
                    let mut csv = String::from("t,value\n");
                    for &t in &grid.0 {
                        writeln!(csv, "{t:?},{:?}", sigma.eval1(t)?).unwrap();
                    }
                    csv
                }
                2 => {
                    let mut csv = String::from("s,t,value\n");
                    for &s in &grid.0 {
                        for &t in &grid.0 {
                            writeln!(csv, "{s:?},{t:?},{:?}", sigma.eval(&[s, t])?).unwrap();
                        }
                    }
                    csv
                }
                d => return Err(Error::DomainMismatch(format!("cannot tabulate a {d}-dimensional interpolant")).into()),
            };
            emit(&out, &csv)
        }
        Command::VerifyReproduce { kernel, f, t, out } => {
            let k = load_kernel(&kernel.kernel)?;
            let f = test_function(&f)?;
            let space = space_of(&k)?;
            let (a, b) = space.interval();
            let ts: Vec<f64> = match t {
                Some(t) => vec![t],
                None => (1..=9).map(|i| a + (b - a) * f64::from(i) / 10.0).collect(),
            };
            let mut csv = String::from("t,f,inner,abs_error\n");
            for t in ts {
                k.domain().check(&[t])?;
                let section = KernelSection { kernel: &k, t };
                let inner = inner_product(&space, &f, &section)?;
                let value = f.eval(t);
                writeln!(csv, "{t:?},{value:?},{inner:?},{:?}", (inner - value).abs()).unwrap();
            }
            emit(&out, &csv)
        }
        Command::DiracStudy { f, t, h_list, out } => {
            let f = test_function(&f)?;
            if h_list.is_empty() {
                return Err(usage("--h-list needs at least one step"));
            }
            let rows = dirac_convergence_study(|s| f.eval(s), t, &h_list)?;
            let mut csv = String::from("h,t,approx,target,abs_error\n");
            for r in rows {
                writeln!(csv, "{:?},{:?},{:?},{:?},{:?}", r.h, r.t, r.approx, r.target, r.abs_error).unwrap();
            }
            emit(&out, &csv)
        }
        Command::GramCheck { kernel, grid, out } => {
            let k = load_kernel(&kernel.kernel)?;
            require_1d(&k)?;
            let targets = vec![0.0; grid.0.len()];
            let problem = rkhs_interp::InterpolationProblem::points(k, &grid.0, &targets)?;
            let mut gram = assemble_gram(&problem)?;
            let g: DMatrix<f64> = gram.entries.clone();
            let symmetric_error = (&g - g.transpose()).abs().max();
            let min_eigenvalue = SymmetricEigen::new(g).eigenvalues.min();
            gram.factorize(&DEFAULT_JITTER_SCHEDULE)?;
            let doc = json!({
                "n": grid.0.len(),
                "min_eigenvalue": min_eigenvalue,
                "jitter_used": gram.jitter_used,
                "symmetric_error": symmetric_error,
            });
            emit(&out, &(pretty(&doc) + "\n"))
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_kernel(arg: &str) -> Result<Kernel, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_owned()
    } else {
        read(Path::new(arg))?
    };
    Ok(Kernel::from_json_str(&text)?)
}

fn require_1d(k: &Kernel) -> Result<(), Failure> {
    match k.dim() {
        1 => Ok(()),
        d => Err(Error::DomainMismatch(format!("{} has a {d}-dimensional domain; grid commands need 1", k.name())).into()),
    }
}

fn test_function(name: &str) -> Result<TestFunction, Failure> {
    TestFunction::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = TestFunction::ALL.iter().map(|f| f.name()).collect();
        usage(format!("unknown function `{name}` (known: {})", known.join(", ")))
    })
}

fn space_of(k: &Kernel) -> Result<SpaceSpec, Failure> {
    let Kernel::Basic(b) = k else {
        return Err(usage(format!("no scalar product known for {}", k.name())));
    };
    match b {
        BasicKernel::Spline01 => Ok(SpaceSpec::H1Zero0),
        BasicKernel::Fourier(_) => Ok(SpaceSpec::Fourier02),
        BasicKernel::H2Part(H2PartParams {
            part: H2Component::H,
            upper,
        }) if *upper == 1.0 => Ok(SpaceSpec::H2Mixed),
        BasicKernel::OddSpline(o) => {
            let p = o.params();
            Ok(SpaceSpec::HmTheta {
                m: p.m,
                thetas: p.thetas.clone(),
                interval: p.interval,
            })
        }
        _ => Err(usage(format!("no scalar product known for {}", k.name()))),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

fn emit(out: &OutArg, text: &str) -> Result<(), Failure> {
    match &out.out {
        Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
