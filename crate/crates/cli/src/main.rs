use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mls_core::algebra::SpherePoint;
use mls_core::flat_metric::{flatness_probe, log_sigma_factor, sigma_factor, SigmaParams};
use mls_core::gauss_map::total_curvature_numeric;
use mls_core::mesh::{build_mesh, Chart, MeshSpec, Projection, Window};
use mls_core::parser::parse_point;
use mls_core::report::{analyze, summary, verify, Options};
use mls_core::surface::build_immersion;
use mls_core::Execution;
use serde_json::json;

mod input;

use input::InputArgs;

#[derive(Parser, Debug)]
#[command(
    name = "mls",
    version,
    about = "Minimal Lagrangian surfaces from rational Weierstrass data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Seed of the rotation search.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Omit the timestamp so repeated runs are byte-identical.
    #[arg(long)]
    no_meta: bool,
    /// Run data-parallel stages sequentially.
    #[arg(long)]
    sequential: bool,
    /// Central-difference step.
    #[arg(long, default_value_t = 1e-4)]
    fd_step: f64,
}

impl RunArgs {
    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }

    fn options(&self) -> Options {
        Options {
            seed: self.seed,
            fd_step: self.fd_step,
            meta: !self.no_meta,
            exec: self.exec(),
            ..Options::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Regularity, periods, completeness and immersion identities.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Perturb the leading coefficient of the first antiderivative (negative control).
        #[arg(long, value_name = "REL")]
        corrupt_g1: Option<f64>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Full analysis report.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Quadrature tolerance (relative to the exact total curvature).
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Analyze even if verification fails.
        #[arg(long)]
        force: bool,
        /// Also run the dense sampling oracle with RADIALxANGULAR samples per chart.
        #[arg(long, value_name = "RxA")]
        oracle: Option<String>,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Print the JSON report instead of the summary.
        #[arg(long)]
        json: bool,
    },
    /// Total curvature, exact and by quadrature.
    Curvature {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        sequential: bool,
    },
    /// Sample the immersion and write a JSON mesh and an OBJ.
    Mesh {
        #[command(flatten)]
        input: InputArgs,
        /// Grid resolution, e.g. 64x64.
        #[arg(long, default_value = "64x64")]
        grid: String,
        /// `annulus:R0,R1` or `rect:X0,X1,Y0,Y1`.
        #[arg(long, default_value = "annulus:0.2,5")]
        window: String,
        /// Parameter chart: z or w = 1/z.
        #[arg(long, default_value = "z")]
        chart: String,
        /// `drop:I` (I in 1..4) or `matrix:` followed by 12 comma-separated entries.
        #[arg(long, default_value = "drop:4")]
        project: String,
        /// Distance in the chart below which vertices near singularities are cut.
        #[arg(long, default_value_t = 1e-3)]
        margin: f64,
        #[arg(long, default_value = "mesh-out")]
        out: PathBuf,
        /// File stem; defaults to the input name.
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        sequential: bool,
    },
    /// Print a built-in example as JSON, or list them.
    Examples { name: Option<String> },
    /// Evaluate the auxiliary flat metric and its Laplacian probe at a point.
    Probe {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.125)]
        eta: f64,
        /// Three finite values, repeated: `--alpha 1 --alpha -1 --alpha 2i`.
        #[arg(long, num_args = 1, allow_hyphen_values = true)]
        alpha: Vec<String>,
        /// Evaluation point.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
}

/// Failure after a well-formed request: exit code 1.
#[derive(Debug)]
struct Failed;

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("checks failed")
    }
}

impl std::error::Error for Failed {}

fn emit(value: &impl serde::Serialize, path: Option<&PathBuf>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => {
            std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| anyhow!("grid must look like 64x64"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn parse_numbers(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(Into::into))
        .collect()
}

fn parse_window(s: &str) -> Result<Window> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| anyhow!("window must be annulus:.. or rect:.."))?;
    let v = parse_numbers(rest)?;
    match (kind, v.as_slice()) {
        ("annulus", [r0, r1]) => Ok(Window::Annulus { r0: *r0, r1: *r1 }),
        ("rect", [x0, x1, y0, y1]) => Ok(Window::Rect {
            x0: *x0,
            x1: *x1,
            y0: *y0,
            y1: *y1,
        }),
        _ => bail!("bad window {s:?}"),
    }
}

fn parse_projection(s: &str) -> Result<Projection> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| anyhow!("projection must be drop:I or matrix:..."))?;
    match kind {
        "drop" => Ok(Projection::DropCoordinate(rest.trim().parse()?)),
        "matrix" => {
            let v = parse_numbers(rest)?;
            if v.len() != 12 {
                bail!("matrix projection needs 12 entries");
            }
            Ok(Projection::Matrix(std::array::from_fn(|r| {
                std::array::from_fn(|c| v[4 * r + c])
            })))
        }
        _ => bail!("bad projection {s:?}"),
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("MLS_THREADS") {
        let n: usize = v.parse().with_context(|| format!("MLS_THREADS={v}"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Verify {
            input,
            run,
            corrupt_g1,
            report,
        } => {
            let spec = input.load()?;
            let opts = Options {
                corrupt_g1,
                ..run.options()
            };
            let r = verify(&spec, &opts)?;
            emit(&r, report.as_ref())?;
            for reason in &r.verification.reasons {
                eprintln!("{}: {}", reason.code, reason.message);
            }
            if !r.verification.pass {
                return Err(Failed.into());
            }
        }
        Command::Analyze {
            input,
            run,
            tol,
            force,
            oracle,
            report,
            json,
        } => {
            let spec = input.load()?;
            let oracle = oracle.as_deref().map(parse_grid).transpose()?;
            let opts = Options {
                quad_tol: tol,
                oracle,
                ..run.options()
            };
            let r = analyze(&spec, &opts, force)?;
            if let Some(p) = &report {
                emit(&r, Some(p))?;
            }
            if json {
                emit(&r, None)?;
            } else {
                print!("{}", summary(&r));
            }
            if !r.pass() {
                return Err(Failed.into());
            }
        }
        Command::Curvature {
            input,
            tol,
            sequential,
        } => {
            let d = input.load()?.to_data()?;
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            let t = total_curvature_numeric(&d, tol, exec)?;
            emit(&t, None)?;
            if t.abs_error > tol * t.exact.abs() {
                return Err(Failed.into());
            }
        }
        Command::Mesh {
            input,
            grid,
            window,
            chart,
            project,
            margin,
            out,
            name,
            sequential,
        } => {
            let spec = input.load()?;
            let d = spec.to_data()?;
            let s = build_immersion(&d)?;
            let chart = match chart.as_str() {
                "z" => Chart::Z,
                "w" => Chart::W,
                other => bail!("chart must be z or w, got {other:?}"),
            };
            let mesh_spec = MeshSpec {
                chart,
                window: parse_window(&window)?,
                resolution: parse_grid(&grid)?,
                margin,
            };
            let projection = parse_projection(&project)?;
            projection.validate()?;
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            let mesh = build_mesh(&s, &d, &mesh_spec, exec)?;
            let stem = name.or(spec.name).unwrap_or_else(|| "mesh".into());
            let (j, o) = mesh.write(&out, &stem, &projection)?;
            emit(
                &json!({
                    "json": j.display().to_string(),
                    "obj": o.display().to_string(),
                    "vertices": mesh.vertices.len(),
                    "cut_vertices": mesh.cut_vertices,
                    "faces": mesh.faces.len(),
                }),
                None,
            )?;
        }
        Command::Examples { name } => match name {
            None => {
                for n in mls_core::fixtures::BUILTIN_NAMES {
                    println!("{n}");
                }
            }
            Some(n) => {
                let spec = mls_core::fixtures::builtin(&n)
                    .ok_or_else(|| anyhow!("unknown example {n:?}"))?;
                println!("{}", spec.to_json());
            }
        },
        Command::Probe {
            input,
            eta,
            alpha,
            at,
            step,
        } => {
            let d = input.load()?.to_data()?;
            let points: Vec<SpherePoint> = alpha
                .iter()
                .map(|a| parse_point(a))
                .collect::<Result<_, _>>()?;
            let three: [SpherePoint; 3] = points
                .try_into()
                .map_err(|_| anyhow!("exactly three --alpha values are required"))?;
            let params = SigmaParams::new(eta, three)?;
            let z = parse_point(&at)?
                .as_finite()
                .ok_or_else(|| anyhow!("--at must be finite"))?;
            let (e1, e2) = params.exponents();
            emit(
                &json!({
                    "eta": eta,
                    "lambda": params.lambda(),
                    "exponents": [e1, e2],
                    "sigma": sigma_factor(&d, &params, z)?,
                    "log_sigma": log_sigma_factor(&d, &params, z)?,
                    "laplacian_log_sigma": flatness_probe(&d, &params, z, step)?,
                    "step": step,
                }),
                None,
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Failed>() => ExitCode::from(1),
        Err(e) => {
            let code = e
                .downcast_ref::<mls_core::Error>()
                .map_or("Usage", |x| x.code());
            let body = json!({ "error": { "code": code, "message": format!("{e:#}") } });
            println!("{body}");
            eprintln!("error: {e:#}");
            // computations that ran and failed are failures, not usage errors
            let usage = e.downcast_ref::<mls_core::Error>().is_none_or(|x| {
                matches!(
                    x,
                    mls_core::Error::Parse(_)
                        | mls_core::Error::InvalidParameters(_)
                        | mls_core::Error::Io(_)
                        | mls_core::Error::Json(_)
                )
            });
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
