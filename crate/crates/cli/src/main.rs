//! `gfactor` command-line front end.

mod commands;
mod provenance;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gfactor::surface_scan::{CloudFormat, RaySet, WhichDet};
use gfactor::{Error, Result};
use provenance::Provenance;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gfactor", version, about = "g-tensors, entanglement and det(g) = 0 surfaces from tight binding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Material parameter file (TOML).
    #[arg(long)]
    material: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for `--direction random`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RayArgs {
    /// Band-pair label from the material file.
    #[arg(long)]
    band: String,
    /// x,y,z, delta, sigma, lambda or random.
    #[arg(long, default_value = "random")]
    direction: String,
    /// Ray length in Bohr^-1 (default: distance to the zone boundary).
    #[arg(long)]
    rmax: Option<f64>,
    /// Number of radial samples, endpoints included.
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum DetArg {
    Gs,
    Gtot,
}

#[derive(Clone, Copy, ValueEnum)]
enum RaysArg {
    Icosphere,
    Wedge,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Ply,
}

#[derive(Subcommand)]
enum Command {
    /// Band energies along a path of high-symmetry points.
    Bands {
        #[command(flatten)]
        common: Common,
        /// Comma-separated point labels (G, X, L, K, W, U).
        #[arg(long, default_value = "L,G,X")]
        path: String,
        /// Samples per path segment.
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Singular values and determinants of g_S and g_tot along a ray.
    Gline {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        ray: RayArgs,
    },
    /// Pair-state entropies, lemma residuals and cardinal-state entropies along a ray.
    Entropy {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        ray: RayArgs,
    },
    /// Point cloud of the det(g) = 0 surface.
    Surface {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        band: String,
        #[arg(long, value_enum, default_value = "gs")]
        det: DetArg,
        /// Full icosphere, or the cubic wedge replicated over Oh.
        #[arg(long, value_enum, default_value = "icosphere")]
        rays: RaysArg,
        /// Subdivision level of the direction grid.
        #[arg(long, default_value_t = 4)]
        level: u32,
        /// Coarse samples per ray.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Let rays run to this multiple of the zone-boundary distance.
        #[arg(long)]
        extended: Option<f64>,
        /// Worker threads (default: available cores).
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Fit the on-site s-p dipole to the Lande value of the atomic j = 1/2 doublet.
    Atomfit {
        #[command(flatten)]
        common: Common,
        /// Restrict to one species.
        #[arg(long)]
        species: Option<String>,
        #[arg(long, default_value_t = 2.0 / 3.0)]
        target: f64,
    },
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout().write_all(bytes).map_err(|source| Error::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn start(name: &str, common: &Common) -> Provenance {
    let mut p = Provenance::new(name);
    p.push("seed", common.seed);
    p
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Bands { common, path, samples } => {
            let mut p = start("bands", &common);
            let m = commands::load(&common.material, &mut p)?;
            let text = commands::bands(&m, &path, samples, &mut p)?;
            emit(common.out.as_deref(), text.as_bytes())
        }
        Command::Gline { common, ray } => {
            let mut p = start("gline", &common);
            let m = commands::load(&common.material, &mut p)?;
            let spec = commands::ray_spec(&m, &ray.direction, common.seed, ray.rmax, ray.samples, &mut p)?;
            let text = commands::gline(&m, &ray.band, &spec, &mut p)?;
            emit(common.out.as_deref(), text.as_bytes())
        }
        Command::Entropy { common, ray } => {
            let mut p = start("entropy", &common);
            let m = commands::load(&common.material, &mut p)?;
            let spec = commands::ray_spec(&m, &ray.direction, common.seed, ray.rmax, ray.samples, &mut p)?;
            let text = commands::entropy_table(&m, &ray.band, &spec, &mut p)?;
            emit(common.out.as_deref(), text.as_bytes())
        }
        Command::Surface {
            common,
            band,
            det,
            rays,
            level,
            samples,
            extended,
            workers,
            format,
        } => {
            let mut p = start("surface", &common);
            let m = commands::load(&common.material, &mut p)?;
            let args = commands::SurfaceArgs {
                band,
                which: match det {
                    DetArg::Gs => WhichDet::Spin,
                    DetArg::Gtot => WhichDet::Total,
                },
                rays: match rays {
                    RaysArg::Icosphere => RaySet::Icosphere(level),
                    RaysArg::Wedge => RaySet::Wedge(level),
                },
                n_coarse: samples,
                extended,
                workers: workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
                format: match format {
                    FormatArg::Csv => CloudFormat::Csv,
                    FormatArg::Ply => CloudFormat::Ply,
                },
            };
            let (bytes, notes) = commands::surface(&m, &args, &mut p)?;
            for n in notes {
                eprintln!("warning: {n}");
            }
            emit(common.out.as_deref(), &bytes)
        }
        Command::Atomfit { common, species, target } => {
            let mut p = start("atomfit", &common);
            let m = commands::load(&common.material, &mut p)?;
            let text = commands::atomfit_table(&m, species.as_deref(), target, &mut p)?;
            emit(common.out.as_deref(), text.as_bytes())
        }
    }
}

/// 2 usage, 3 physics contract, 4 I/O.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => 4,
        e if e.is_physics() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
