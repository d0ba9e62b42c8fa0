use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hardylab::decomp::{amalgam_entropy_sum, local_llogl_sum, log_moment_sum, split, write_terms_csv};
use hardylab::functionals::{eval_functional, MusielakKind, MusielakSpec};
use hardylab::grid::{read_binary, read_csv, write_csv};
use hardylab::maximal::{
    dyadic_max, hl_max, local_max_with, smooth_local_max, smooth_max, BumpKernel, KernelProfile, RadiusPreset,
    RadiusSet,
};
use hardylab::operators::{t_theta, ThetaFunction, ThetaProfile};
use hardylab::testlib::{catalog, FunctionSpec};
use hardylab::verify::{self, SuiteConfig};
use hardylab::{GridSpec, SampledFunction};

/// Maximal functions, Musielak-Orlicz functionals and verification suites on sampled grids.
#[derive(Parser)]
#[command(name = "hardylab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the value of a functional
    Eval {
        #[arg(long)]
        functional: MusielakKind,
        #[command(flatten)]
        input: Input,
    },
    /// Write a maximal function as a grid CSV
    Maximal {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = MaximalKind::Hl)]
        kind: MaximalKind,
        #[arg(long, default_value = "quarter-octave")]
        radii: RadiusPreset,
        #[arg(long, default_value = "bump")]
        kernel: KernelProfile,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the per-cube term table; the cube sums go to stderr
    Decompose {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write f - (∫f) theta as a grid CSV
    Ttheta {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "box")]
        theta: ThetaProfile,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and write its CSV report
    Verify(VerifyArgs),
    /// Write the test-function catalog as JSON
    Catalog {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Input {
    /// JSON function spec, or a grid file (.csv or .bin)
    #[arg(long)]
    function: PathBuf,
    /// overrides the grid, e.g. dim=1,R=64,m=64
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// suite name, or `all`
    suite: String,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value = "quarter-octave")]
    radii: RadiusPreset,
    #[arg(long, default_value = "box")]
    theta: ThetaProfile,
    #[arg(long, default_value = "bump")]
    kernel: KernelProfile,
    /// base grid resolution in cells per unit
    #[arg(long, default_value_t = 64)]
    m_base: u32,
    /// CSV report path (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    /// directory for two-column plot data
    #[arg(long)]
    plot_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MaximalKind {
    Hl,
    Local,
    Dyadic,
    Smooth,
    SmoothLocal,
}

fn parse_grid(s: &str) -> anyhow::Result<GridSpec> {
    let (mut dim, mut r, mut m) = (None, None, None);
    for part in s.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| anyhow!("grid: expected key=value, got `{part}`"))?;
        let v: u32 = v.trim().parse().with_context(|| format!("grid: field `{k}`"))?;
        match k.trim() {
            "dim" | "n" => dim = Some(v as usize),
            "R" | "box_radius" => r = Some(v),
            "m" | "cells_per_unit" => m = Some(v),
            other => bail!("grid: unknown field `{other}`"),
        }
    }
    Ok(GridSpec::new(dim.unwrap_or(1), r.unwrap_or(64), m.unwrap_or(64))?)
}

fn load(input: &Input) -> anyhow::Result<SampledFunction> {
    let path = &input.function;
    let override_grid = input.grid.as_deref().map(parse_grid).transpose()?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let open = || File::open(path).with_context(|| format!("function: cannot read {}", path.display()));
    let f = match ext {
        "csv" => read_csv(io::BufReader::new(open()?))?,
        "bin" => read_binary(io::BufReader::new(open()?))?,
        _ => {
            let text =
                std::fs::read_to_string(path).with_context(|| format!("function: cannot read {}", path.display()))?;
            let spec = FunctionSpec::from_json(&text)?;
            let fallback = GridSpec::new(1, 64, 64.max(spec.family.min_cells_per_unit(1)))?;
            let grid = override_grid.or(spec.grid).unwrap_or(fallback);
            return Ok(spec.family.materialize(&grid)?);
        }
    };
    if override_grid.is_some_and(|g| g != *f.spec()) {
        bail!("grid: --grid does not match the grid stored in {}", path.display());
    }
    Ok(f)
}

fn sink(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).with_context(|| format!("out: cannot create {}", p.display()))?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run_verify(a: &VerifyArgs) -> anyhow::Result<bool> {
    let cfg = SuiteConfig {
        seed: a.seed,
        count: a.count,
        theta: a.theta,
        kernel: a.kernel,
        radii: a.radii,
        m_base: a.m_base,
    };
    let reports = verify::run_suite(&a.suite, &cfg)?;
    for r in &reports {
        eprintln!("{}", r.summary());
        for n in &r.notes {
            eprintln!("  {n}");
        }
    }
    let mut w = sink(&a.out)?;
    verify::write_csv(&reports, &mut w)?;
    w.flush()?;
    if let Some(p) = &a.json {
        verify::write_json(&reports, BufWriter::new(File::create(p)?))?;
    }
    if let Some(d) = &a.plot_dir {
        verify::write_plot_data(&reports, Path::new(d))?;
    }
    Ok(reports.iter().all(|r| r.passed()))
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Eval { functional, input } => {
            let f = load(&input)?;
            println!("{}", eval_functional(&MusielakSpec::new(functional), &f)?);
        }
        Command::Maximal { input, kind, radii, kernel, out } => {
            let f = load(&input)?;
            let spec = *f.spec();
            let k = BumpKernel::new(kernel, spec.dim);
            let m = match kind {
                MaximalKind::Hl => hl_max(&f, &RadiusSet::preset(&spec, radii, false))?,
                MaximalKind::Local => local_max_with(&f, &RadiusSet::preset(&spec, radii, true))?,
                MaximalKind::Dyadic => dyadic_max(&f)?,
                MaximalKind::Smooth => {
                    smooth_max(&f, &k, &RadiusSet::preset(&spec, radii, false).at_least(spec.step())?)?
                }
                MaximalKind::SmoothLocal => smooth_local_max(&f, &k)?,
            };
            let mut w = sink(&out)?;
            write_csv(&m, &mut w)?;
            w.flush()?;
        }
        Command::Decompose { input, out } => {
            let d = split(&load(&input)?);
            eprintln!("total_mass {}", d.total_mass());
            eprintln!("local_llogl_sum {}", local_llogl_sum(&d));
            eprintln!("amalgam_entropy_sum {}", amalgam_entropy_sum(&d));
            eprintln!("log_moment_sum {}", log_moment_sum(&d));
            let mut w = sink(&out)?;
            write_terms_csv(&d, &mut w)?;
            w.flush()?;
        }
        Command::Ttheta { input, theta, out } => {
            let f = load(&input)?;
            let th = ThetaFunction::new(*f.spec(), theta)?;
            let mut w = sink(&out)?;
            write_csv(&t_theta(&f, &th)?, &mut w)?;
            w.flush()?;
        }
        Command::Verify(a) => return run_verify(&a),
        Command::Catalog { out } => {
            let mut w = sink(&out)?;
            writeln!(w, "{}", catalog().to_json()?)?;
            w.flush()?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("HARDYLAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: HARDYLAB_THREADS: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
