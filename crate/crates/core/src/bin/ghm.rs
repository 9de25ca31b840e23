use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, ValueEnum};
use ghm::map::FamilyParams;
use ghm::run::{parse_count, run_and_report, Command, MapSource, RunConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sub {
    /// Cone-hyperbolicity report
    Validate,
    /// Refined stable and unstable strips
    Strips,
    /// Stable and unstable manifold approximations
    Manifolds,
    /// Orbit-cloud snapshots and attractor cells
    Attractor,
    /// Ulam stationary density and Sobolev diagnostic
    Density,
    /// Spectral gap of the Ulam matrix
    Gap,
    /// Virtual-expansion report and coverage partition
    Vexp,
    /// Correlation decay and CLT diagnostic
    Stats,
}

#[derive(Parser, Debug)]
#[command(name = "ghm", version, about = "Numerical experiments on generalized horseshoe maps")]
struct Cli {
    #[arg(value_enum, required_unless_present = "config")]
    command: Option<Sub>,
    /// Rerun from a `config.json` echo; `--out` may redirect the outputs
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug)]
struct Opts {
    /// Affine family member, e.g. n=3,lambda=0.35[,angle_scale=..][,layout=stack|spread][,k=..]
    #[arg(long, conflicts_with = "spec")]
    family: Option<String>,
    /// Map-spec JSON document
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long, default_value_t = 6)]
    depth: usize,
    #[arg(long, default_value_t = 0.25)]
    mu: f64,
    #[arg(long, default_value_t = 4)]
    nmax: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_parser = count)]
    samples: Option<usize>,
    #[arg(long, value_parser = count, default_value = "1e5")]
    points: usize,
    /// Snapshot steps, comma separated
    #[arg(long, value_delimiter = ',', default_value = "1,15")]
    steps: Vec<usize>,
    /// Single word for `strips`, e.g. 1,2,1
    #[arg(long)]
    word: Option<String>,
    #[arg(long, default_value_t = 16)]
    x_res: usize,
    #[arg(long, default_value_t = 16)]
    angle_res: usize,
    #[arg(long, default_value_t = 6)]
    num_eigs: usize,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, value_parser = count, default_value = "1e6")]
    orbit_len: usize,
    /// coord_x, coord_y, cos2pix, const:<c> or indicator:x0,x1,y0,y1
    #[arg(long, default_value = "coord_x")]
    observable: String,
    /// Output directory [default: out]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write SVG/PNG renderings
    #[arg(long)]
    render: bool,
    /// Worker threads (outputs do not depend on this)
    #[arg(long)]
    threads: Option<usize>,
}

fn count(s: &str) -> Result<usize, String> {
    parse_count(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match (&cli.config, cli.command) {
        (Some(path), _) => match load_config(path) {
            Ok(mut c) => {
                if let Some(out) = cli.opts.out {
                    c.out = out;
                }
                c
            }
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        (None, Some(sub)) => match from_flags(sub, cli.opts) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        },
        (None, None) => unreachable!("clap requires a subcommand or --config"),
    };
    ExitCode::from(run_and_report(&config) as u8)
}

fn load_config(path: &PathBuf) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

fn from_flags(sub: Sub, o: Opts) -> Result<RunConfig, String> {
    let command = match sub {
        Sub::Validate => Command::Validate,
        Sub::Strips => Command::Strips,
        Sub::Manifolds => Command::Manifolds,
        Sub::Attractor => Command::Attractor,
        Sub::Density => Command::Density,
        Sub::Gap => Command::Gap,
        Sub::Vexp => Command::Vexp,
        Sub::Stats => Command::Stats,
    };
    let map = match (o.spec, o.family) {
        (Some(path), _) => MapSource::Spec(path),
        (None, family) => MapSource::Family(
            family
                .as_deref()
                .unwrap_or("n=3,lambda=0.35")
                .parse::<FamilyParams>()
                .map_err(|e| e.to_string())?,
        ),
    };
    let mut config = RunConfig::new(command, map, o.out.unwrap_or_else(|| PathBuf::from("out")));
    config.grid = o.grid;
    config.depth = o.depth;
    config.mu = o.mu;
    config.n_max = o.nmax;
    config.seed = o.seed;
    config.samples = o.samples;
    config.points = o.points;
    config.steps = o.steps;
    config.word = o.word;
    config.x_res = o.x_res;
    config.angle_res = o.angle_res;
    config.num_eigs = o.num_eigs;
    config.tol = o.tol;
    config.orbit_len = o.orbit_len;
    config.observable = o.observable;
    config.render = o.render;
    config.threads = o.threads;
    Ok(config)
}
