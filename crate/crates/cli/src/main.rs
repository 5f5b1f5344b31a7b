//! Command-line surface for the simplicial network pipeline.
//!
//! Exit codes: 0 on success, 1 on validation/verification failure, 2 on
//! usage errors (clap's default).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use simplicial_nn::{
    ball, build_vertex_map, estimate_sup_distance, jsonio, BallExampleConfig, Error, NetworkFn,
    SamplerFn, SimplicialComplex, SimplicialMapFn, SynthesizedNetwork, VertexMap, VertexMapFile,
};

#[derive(Parser)]
#[command(
    name = "simplicial-nn",
    version,
    about = "Build and verify two-hidden-layer networks realizing simplicial maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simplicial complex tooling.
    #[command(subcommand)]
    Complex(ComplexCommand),
    /// Simplicial approximation tooling.
    #[command(subcommand)]
    Approx(ApproxCommand),
    /// Network synthesis and evaluation.
    #[command(subcommand)]
    Net(NetCommand),
    /// Verification suites.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Built-in end-to-end scenarios.
    #[command(subcommand)]
    Example(ExampleCommand),
}

#[derive(Subcommand)]
enum ComplexCommand {
    /// Validate a complex file (purity, affine independence, intersections).
    Validate { file: PathBuf },
    /// Barycentrically subdivide a complex t times.
    Subdivide {
        file: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the mesh of a complex.
    Mesh { file: PathBuf },
}

#[derive(Subcommand)]
enum ApproxCommand {
    /// Search for a vertex map approximating a built-in function.
    BuildMap(BuildMapArgs),
}

#[derive(Args)]
struct BuildMapArgs {
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    target: PathBuf,
    /// Built-in function: identity | ball-projection | project-xy.
    #[arg(long = "fn")]
    function: String,
    #[arg(long = "max-t")]
    max_t: usize,
    #[arg(long)]
    resolution: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum NetCommand {
    /// Synthesize the network realizing a vertex map.
    Synth {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a network at one point.
    Eval {
        #[arg(long)]
        net: PathBuf,
        /// Comma-separated coordinates, e.g. 0.25,0.25,0.25.
        #[arg(long)]
        point: String,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Check that a network equals its simplicial map on sampled points.
    Equivalence {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum ExampleCommand {
    /// The ball-projection scenario with explicit homeomorphisms.
    Ball {
        #[arg(long, default_value_t = 0)]
        t1: usize,
        #[arg(long, default_value_t = 0)]
        t2: usize,
        #[arg(long, default_value_t = 512)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to write the JSON report (also printed to stdout).
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn load_complex(path: &Path) -> Result<SimplicialComplex, Error> {
    SimplicialComplex::load(path)
}

fn load_map(
    path: &Path,
    source: &SimplicialComplex,
    target: &SimplicialComplex,
) -> Result<VertexMap, Error> {
    let file = VertexMapFile::load(path)?;
    VertexMap::new(source, target, file.assignment)
}

fn run() -> Result<bool, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Complex(cmd) => match cmd {
            ComplexCommand::Validate { file } => {
                let complex = load_complex(&file)?;
                let value = serde_json::json!({
                    "ambient_dim": complex.ambient_dim(),
                    "dim": complex.dim(),
                    "maximal_simplices": complex.maximal_count(),
                    "mesh": complex.mesh(),
                    "valid": true,
                    "vertices": complex.vertex_count(),
                });
                print!("{}", jsonio::to_string(&value));
                Ok(true)
            }
            ComplexCommand::Subdivide { file, t, out } => {
                let complex = load_complex(&file)?;
                let record = complex.barycentric_subdivide(t)?;
                record.complex.save(&out)?;
                let value = serde_json::json!({
                    "maximal_simplices": record.complex.maximal_count(),
                    "mesh": record.complex.mesh(),
                    "t": record.t,
                    "vertices": record.complex.vertex_count(),
                });
                print!("{}", jsonio::to_string(&value));
                Ok(true)
            }
            ComplexCommand::Mesh { file } => {
                let complex = load_complex(&file)?;
                let value = serde_json::json!({ "mesh": complex.mesh() });
                print!("{}", jsonio::to_string(&value));
                Ok(true)
            }
        },
        Command::Approx(ApproxCommand::BuildMap(args)) => {
            let source = load_complex(&args.source)?;
            let target = load_complex(&args.target)?;
            let target_dim = target.ambient_dim();
            let built = match args.function.as_str() {
                "identity" => {
                    let g = SamplerFn::new(target_dim, |x: &[f64]| x.to_vec());
                    build_vertex_map(&source, &target, &g, args.max_t, args.resolution)?
                }
                "ball-projection" => {
                    let g = ball::BallProjectionMap::new()?;
                    build_vertex_map(&source, &target, &g, args.max_t, args.resolution)?
                }
                "project-xy" => {
                    if target_dim > source.ambient_dim() {
                        return Err(Error::FormatError {
                            reason: format!(
                                "project-xy needs source ambient dimension >= target's \
                                 ({} < {target_dim})",
                                source.ambient_dim()
                            ),
                        });
                    }
                    let g = SamplerFn::new(target_dim, move |x: &[f64]| {
                        x[..target_dim].to_vec()
                    });
                    build_vertex_map(&source, &target, &g, args.max_t, args.resolution)?
                }
                other => {
                    return Err(Error::FormatError {
                        reason: format!(
                            "unknown builtin function '{other}' (expected identity, \
                             ball-projection, or project-xy)"
                        ),
                    })
                }
            };
            if built.t > 0 {
                // The map is defined on the subdivided source; persist it so
                // the written file's source path stays accurate.
                let subdivided = args.source.with_extension(format!("sd{}.json", built.t));
                built.source.save(&subdivided)?;
                let file = VertexMapFile {
                    source: subdivided.display().to_string(),
                    target: args.target.display().to_string(),
                    assignment: built.map.assignment().to_vec(),
                };
                file.save(&args.out)?;
                let value = serde_json::json!({
                    "map": args.out.display().to_string(),
                    "subdivided_source": subdivided.display().to_string(),
                    "t": built.t,
                });
                print!("{}", jsonio::to_string(&value));
            } else {
                let file = VertexMapFile {
                    source: args.source.display().to_string(),
                    target: args.target.display().to_string(),
                    assignment: built.map.assignment().to_vec(),
                };
                file.save(&args.out)?;
                let value = serde_json::json!({
                    "map": args.out.display().to_string(),
                    "t": 0,
                });
                print!("{}", jsonio::to_string(&value));
            }
            Ok(true)
        }
        Command::Net(cmd) => match cmd {
            NetCommand::Synth {
                source,
                target,
                map,
                out,
            } => {
                let source = load_complex(&source)?;
                let target = load_complex(&target)?;
                let map = load_map(&map, &source, &target)?;
                let net = simplicial_nn::synthesize_network(&source, &target, &map)?;
                net.save(&out)?;
                let value = serde_json::json!({
                    "first_hidden_width": net.first_hidden_width(),
                    "net": out.display().to_string(),
                    "second_hidden_width": net.second_hidden_width(),
                });
                print!("{}", jsonio::to_string(&value));
                Ok(true)
            }
            NetCommand::Eval { net, point } => {
                let net = SynthesizedNetwork::load(&net)?;
                let coords = parse_point(&point)?;
                let output = net.forward(&coords)?;
                let value = serde_json::json!({
                    "input": coords,
                    "output": output,
                });
                print!("{}", jsonio::to_string(&value));
                Ok(true)
            }
        },
        Command::Verify(VerifyCommand::Equivalence {
            net,
            source,
            target,
            map,
            samples,
            seed,
        }) => {
            let net = SynthesizedNetwork::load(&net)?;
            let source = load_complex(&source)?;
            let target = load_complex(&target)?;
            let map = load_map(&map, &source, &target)?;
            let map_fn = SimplicialMapFn::new(&source, &target, &map)?;
            let net_fn = NetworkFn::new(&net);
            let sup = estimate_sup_distance(&map_fn, &net_fn, &source, samples, seed)?;
            let pass = sup.estimate <= 1e-9;
            let value = serde_json::json!({
                "argmax_point": sup.argmax_point,
                "pass": pass,
                "points_evaluated": sup.points_evaluated,
                "samples": samples,
                "seed": seed,
                "sup_error_estimate": sup.estimate,
                "tolerance": 1e-9,
            });
            print!("{}", jsonio::to_string(&value));
            Ok(pass)
        }
        Command::Example(ExampleCommand::Ball {
            t1,
            t2,
            samples,
            seed,
            report,
        }) => {
            let cfg = BallExampleConfig {
                t1,
                t2,
                samples,
                seed,
                ..BallExampleConfig::default()
            };
            let result = simplicial_nn::run_ball_example(&cfg)?;
            let value = result.to_json_value();
            if let Some(path) = report {
                jsonio::write_file(&path, &value)?;
            }
            print!("{}", jsonio::to_string(&value));
            Ok(result.exact_realization.pass && result.star_condition.pass)
        }
    }
}

fn parse_point(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|part| {
            part.trim().parse::<f64>().map_err(|e| Error::FormatError {
                reason: format!("bad coordinate '{part}': {e}"),
            })
        })
        .collect()
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
