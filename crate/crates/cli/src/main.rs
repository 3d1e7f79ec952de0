use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quadtangent::tetra32::TetraParams;
use quadtangent::tracker::Radii;
use quadtangent_cli::certificate::{self, Certificate};
use quadtangent_cli::commands::{self, Global, LineSource};
use quadtangent_cli::output::{self, Format};
use quadtangent_cli::{CliError, CliResult, Scene};

#[derive(Parser)]
#[command(
    name = "quadtangent",
    version,
    about = "Real lines tangent to quadrics: counts, constructions, tracking, certificates"
)]
struct Cli {
    /// Seed for every random choice (patch, gamma, scene draws).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Residual tolerance recorded in exact-construction certificates.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Output format; defaults to text for tables and json for certificates.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension, degree and tangent count for k-flats in P^n.
    Counts {
        k: Option<usize>,
        /// A single n, or with --table a range such as 3..9.
        n: Option<String>,
        /// Print a row for every n in the range (default 3..9).
        #[arg(long)]
        table: bool,
    },
    /// The 32 closed-form tangents to the four-quadric family.
    Tetra {
        alpha_pos: Option<String>,
        beta_pos: Option<String>,
        #[arg(long, conflicts_with = "alpha_pos")]
        alpha: Option<String>,
        #[arg(long, conflicts_with = "beta_pos")]
        beta: Option<String>,
    },
    /// Homotopy continuation on a scene with four quadrics and lines.
    Track {
        scene: PathBuf,
        /// auto, tetra or linear-product (alias total-degree).
        #[arg(long, default_value = "auto")]
        start: String,
        /// Parameters of the tetra start system.
        #[arg(long)]
        start_alpha: Option<String>,
        #[arg(long)]
        start_beta: Option<String>,
        /// Write one JSON object per path to this file.
        #[arg(long)]
        paths_log: Option<PathBuf>,
    },
    /// Real tangents as lines become cylinders one at a time.
    Doubling {
        #[arg(long, conflicts_with = "radii")]
        auto: bool,
        /// Four comma-separated positive radii.
        #[arg(long)]
        radii: Option<String>,
    },
    /// Re-evaluate every residual of a certificate.
    Verify {
        certificate: PathBuf,
        /// Require the certificate to have been issued for this scene.
        #[arg(long)]
        scene: Option<PathBuf>,
    },
    /// Exact common transversals of four lines.
    Transversals {
        #[command(flatten)]
        source: TransversalSource,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TransversalSource {
    /// Four edge lines of the coordinate tetrahedron.
    #[arg(long)]
    tetrahedron: bool,
    /// Tangent lines to the moment curve at four distinct parameters.
    #[arg(long)]
    moment: Option<String>,
    /// A scene holding exactly four lines.
    #[arg(long)]
    scene: Option<PathBuf>,
}

fn emit_certificate(cert: &Certificate, format: Option<Format>, out: Option<&std::path::Path>) -> CliResult<()> {
    let body = match format.unwrap_or(Format::Json) {
        Format::Json => output::json(cert)?,
        Format::Csv => output::certificate_csv(cert)?,
        Format::Text => output::certificate_text(cert),
    };
    output::write(&body, out)
}

fn run(cli: Cli) -> CliResult<()> {
    let global = Global {
        seed: cli.seed,
        tol: cli.tol,
    };
    let out = cli.output.as_deref();
    match cli.command {
        Command::Counts { k, n, table } => {
            if table {
                let k = k.unwrap_or(1);
                let range = match n {
                    Some(n) => commands::parse_range(&n)?,
                    None => 3..=9,
                };
                let rows = commands::counts_table(k, range)?;
                let body = match cli.format.unwrap_or(Format::Text) {
                    Format::Text => output::counts_table_text(&rows),
                    Format::Json => output::json(&rows)?,
                    Format::Csv => output::counts_csv(&rows)?,
                };
                return output::write(&body, out);
            }
            let (Some(k), Some(n)) = (k, n) else {
                return Err(CliError::Input(
                    "usage: counts K N, or counts --table [K] [RANGE]".into(),
                ));
            };
            let n = n.parse().map_err(|_| CliError::Input(format!("bad n {n:?}")))?;
            let c = commands::counts(k, n)?;
            let body = match cli.format.unwrap_or(Format::Text) {
                Format::Text => output::counts_text(&c),
                Format::Json => output::json(&c)?,
                Format::Csv => output::counts_csv(std::slice::from_ref(&c))?,
            };
            output::write(&body, out)
        }
        Command::Tetra {
            alpha_pos,
            beta_pos,
            alpha,
            beta,
        } => {
            let (Some(a), Some(b)) = (alpha.or(alpha_pos), beta.or(beta_pos)) else {
                return Err(CliError::Input(
                    "usage: tetra ALPHA BETA, or tetra --alpha A --beta B".into(),
                ));
            };
            let params = TetraParams::new(commands::parse_rational_arg(&a)?, commands::parse_rational_arg(&b)?);
            let cert = commands::tetra(&params, &global)?;
            emit_certificate(&cert, cli.format, out)
        }
        Command::Track {
            scene,
            start,
            start_alpha,
            start_beta,
            paths_log,
        } => {
            let scene = Scene::read(&scene)?;
            let parse = |s: Option<String>| s.map(|t| commands::parse_rational_arg(&t)).transpose();
            let policy = commands::parse_start_policy(&start, parse(start_alpha)?, parse(start_beta)?)?;
            let (cert, log, failure) = commands::track(&scene, &policy, &global)?;
            if let Some(path) = paths_log {
                let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
                for entry in &log {
                    writeln!(f, "{entry}")?;
                }
                f.flush()?;
            }
            emit_certificate(&cert, cli.format, out)?;
            failure.map_or(Ok(()), Err)
        }
        Command::Doubling { auto, radii } => {
            let radii = match (auto, radii) {
                (_, Some(r)) => Radii::Fixed(commands::parse_rational_list(&r)?),
                (true, None) => Radii::Auto,
                (false, None) => return Err(CliError::Input("usage: doubling --auto | --radii a,b,c,d".into())),
            };
            let report = commands::doubling(&radii, &global)?;
            let body = match cli.format.unwrap_or(Format::Text) {
                Format::Text => output::doubling_text(&report),
                Format::Json => output::json(&report)?,
                Format::Csv => output::doubling_csv(&report)?,
            };
            output::write(&body, out)
        }
        Command::Verify { certificate, scene } => {
            let text = std::fs::read_to_string(&certificate)
                .map_err(|e| CliError::Input(format!("cannot read certificate {}: {e}", certificate.display())))?;
            let cert: Certificate = serde_json::from_str(&text)?;
            let scene = scene.map(|p| Scene::read(&p)).transpose()?;
            let report = certificate::verify(&cert, scene.as_ref())?;
            let body = match cli.format.unwrap_or(Format::Text) {
                Format::Text => output::verify_text(&report),
                Format::Json => output::json(&report)?,
                Format::Csv => output::verify_csv(&report)?,
            };
            output::write(&body, out)?;
            if report.pass {
                Ok(())
            } else {
                Err(CliError::VerificationFailed(report.failures.join("; ")))
            }
        }
        Command::Transversals { source } => {
            let source = if source.tetrahedron {
                LineSource::Tetrahedron
            } else if let Some(m) = source.moment {
                LineSource::Moment(commands::parse_rational_list(&m)?)
            } else if let Some(p) = source.scene {
                LineSource::Scene(Scene::read(&p)?)
            } else {
                unreachable!("clap requires one source")
            };
            let cert = commands::transversals(&source, &global)?;
            emit_certificate(&cert, cli.format, out)
        }
    }
}

fn main() -> ExitCode {
    // Usage errors share the input-error exit code.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("quadtangent: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
