mod systems;

use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topodyn::chains::{build_chain_graph, build_chain_graph_indexed, chain_components, torus_grid, ChainGraph, TorusBuckets};
use topodyn::demo::{run_demo, DEMOS};
use topodyn::entourage::Point;
use topodyn::formats::{PointText, PseudoOrbitFile};
use topodyn::hyperbolic::{stability_conjugacy_h, stability_conjugacy_sft, RecodedShift};
use topodyn::report::{components_report, decomposition_report, stability_report, tracing_report, write_atomic, Report, Table};
use topodyn::shadowing::{
    perturbed_pseudo_orbit, series_constant, trace_linear_hyperbolic, trace_sft, trace_strips, LinearLift, Perturb,
    PseudoOrbit, TracingResult,
};
use topodyn::spectral::{spectral_decompose, SpectralConfig, SpectralFamily, Verdict};
use topodyn::systems::{catalog_text, DynamicalSystem, PerturbedTorus, Shift, StripPoint, TorusAutomorphism};
use topodyn::{Entourage, TraceError, Vec2};

use systems::{Named, NAME_HELP};

/// Exit status for usage and runtime errors; 0, 1 and 2 are verdicts.
const ERROR_EXIT: i32 = 3;

#[derive(Parser)]
#[command(name = "topodyn", version, about = "Entourage-based shadowing, chain recurrence and spectral decomposition")]
#[command(after_help = "Exit status: 0 pass, 1 fail, 2 resolution-limited, 3 usage or runtime error.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Chain components over an entourage ladder with per-component certificates.
    Decompose {
        #[arg(help = NAME_HELP)]
        system: String,
        /// Grid cells per unit side for torus systems.
        #[arg(long, default_value_t = 32)]
        resolution: usize,
        /// Coarsest ladder radius in grid cells; the ladder is r0, r0/2, r0/4.
        #[arg(long)]
        ladder: Option<f64>,
        /// Word length of the cylinder nodes for shifts.
        #[arg(long, default_value_t = 5)]
        word_length: usize,
        /// Sampled pairs per basic set for the transitivity certificate.
        #[arg(long, default_value_t = 50)]
        pairs: usize,
        /// Radius of the periodic density entourage.
        #[arg(long)]
        density_radius: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Trace a seeded pseudo-orbit, or one read from a file.
    Trace {
        #[arg(help = NAME_HELP)]
        system: String,
        #[arg(long, required_unless_present = "from")]
        delta: Option<f64>,
        #[arg(long, required_unless_present = "from")]
        length: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Read the pseudo-orbit from this file instead of generating it.
        #[arg(long)]
        from: Option<PathBuf>,
        /// Save the pseudo-orbit to this file.
        #[arg(long)]
        save: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Chain recurrent set and chain components on a sample grid.
    ChainRecurrent {
        #[arg(help = NAME_HELP)]
        system: String,
        /// Grid cells per side, or word length for shifts.
        #[arg(long, default_value_t = 32)]
        resolution: usize,
        /// Radius of the ball entourage.
        #[arg(long)]
        radius: f64,
        /// Ladder rungs radius, radius/2, …
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Write the adjacency list of the finest chain graph here.
        #[arg(long)]
        adjacency: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Semiconjugacy from a perturbation back to the unperturbed system.
    Stability {
        #[arg(help = "cat-map or full-2-shift")]
        system: String,
        /// Size of the perturbation.
        #[arg(long)]
        epsilon: f64,
        /// Length of the orbit window traced for each sample.
        #[arg(long, default_value_t = 60)]
        window: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Run a named demonstration.
    Demo {
        #[arg(help = "ex22, ex23, sec5 or decomposition")]
        name: String,
        #[command(flatten)]
        out: Out,
    },
    /// List the system catalog.
    Catalog,
}

#[derive(Args)]
struct Out {
    /// Write the report here (atomically) instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let code = match Cli::try_parse() {
        Ok(cli) => run(cli).unwrap_or_else(|e| {
            eprintln!("error: {e:#}");
            ERROR_EXIT
        }),
        Err(e) => {
            let code = if e.use_stderr() { ERROR_EXIT } else { 0 };
            let _ = e.print();
            code
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Decompose {
            system,
            resolution,
            ladder,
            word_length,
            pairs,
            density_radius,
            seed,
            out,
        } => {
            let mut cfg = SpectralConfig {
                resolution,
                word_length,
                pairs,
                seed,
                density_radius,
                ..SpectralConfig::default()
            };
            if let Some(r0) = ladder {
                cfg = cfg.with_ladder_start(r0);
            }
            let rep = match systems::parse(&system)? {
                Named::Torus(s) => decompose(&s, &cfg)?,
                Named::Shift(s) => decompose(&s, &cfg)?,
                Named::Finite(s) => decompose(&s, &cfg)?,
                _ => bail!("`{system}` has no chain-graph discretization; use a torus automorphism, a shift or a permutation"),
            };
            emit(&rep, &out)
        }
        Command::Trace {
            system,
            delta,
            length,
            seed,
            from,
            save,
            out,
        } => {
            let job = TraceJob {
                name: system.clone(),
                delta,
                length,
                seed,
                from,
                save,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rep = match systems::parse(&system)? {
                Named::Torus(s) => {
                    let x0 = [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)];
                    let c = series_constant(&s.lift(), s.lift_splitting());
                    job.run(&s, x0, c, |po| trace_linear_hyperbolic(&s, po))?
                }
                Named::Linear(s) => {
                    let x0 = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
                    let c = series_constant(&s.lift(), s.lift_splitting());
                    job.run(&s, x0, c, |po| trace_linear_hyperbolic(&s, po))?
                }
                Named::Shift(s) => {
                    let words = s.admissible_words(5);
                    let x0 = s.extend_word(&words[rng.random_range(0..words.len())], 2)?;
                    job.run(&s, x0, 2.0, |po| trace_sft(&s, po))?
                }
                Named::Strips(s) => {
                    let n0 = -(s.window() / 4);
                    let x0 = StripPoint::new(n0, 0.3 * s.height(n0));
                    job.run(&s, x0, 2.0, |po| trace_strips(&s, po))?
                }
                _ => bail!("no tracer for `{system}`; use a linear, torus, shift or strips system"),
            };
            emit(&rep, &out)
        }
        Command::ChainRecurrent {
            system,
            resolution,
            radius,
            steps,
            adjacency,
            out,
        } => {
            if !(radius > 0.0) || steps == 0 || resolution < 1 {
                bail!("radius and steps must be positive");
            }
            let job = ChainJob {
                resolution,
                radius,
                steps,
                adjacency,
            };
            let rep = match systems::parse(&system)? {
                Named::Torus(s) => job.run_torus(&s, resolution)?,
                Named::PerturbedTorus(s) => job.run_torus(&s, resolution)?,
                Named::Linear(s) => {
                    let m = resolution.max(2);
                    let grid: Vec<Vec2> = (0..m * m)
                        .map(|k| {
                            let (i, j) = (k / m, k % m);
                            [-1.0 + 2.0 * i as f64 / (m - 1) as f64, -1.0 + 2.0 * j as f64 / (m - 1) as f64]
                        })
                        .collect();
                    job.run(&s, grid, |d, nodes| build_chain_graph(&s, nodes, d))?
                }
                Named::Shift(s) => {
                    let c = resolution / 2;
                    let nodes = s
                        .admissible_words(resolution)
                        .iter()
                        .map(|w| s.extend_word(w, c))
                        .collect::<Result<Vec<_>, _>>()?;
                    job.run(&s, nodes, |d, nodes| build_chain_graph(&s, nodes, d))?
                }
                Named::Finite(s) => job.run(&s, s.points(), |d, nodes| build_chain_graph(&s, nodes, d))?,
                Named::Interval(s) => job.run(&s, s.grid(resolution), |d, nodes| build_chain_graph(&s, nodes, d))?,
                Named::Harmonic(s) => {
                    let points: Vec<usize> = (1..=resolution.min(s.window())).collect();
                    job.run(&s, points, |d, nodes| build_chain_graph(&s, nodes, d))?
                }
                Named::Strips(s) => job.run(&s, s.grid(resolution), |d, nodes| build_chain_graph(&s, nodes, d))?,
            };
            emit(&rep, &out)
        }
        Command::Stability {
            system,
            epsilon,
            window,
            samples,
            seed,
            out,
        } => {
            if !(epsilon > 0.0) {
                bail!("epsilon must be positive");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rep = match systems::parse(&system)? {
                Named::Torus(f) => stability_torus(&f, epsilon, window, samples, &mut rng)?,
                Named::Shift(f) => stability_shift(&f, epsilon, window, samples, &mut rng)?,
                _ => bail!("stability is implemented for torus automorphisms and full shifts"),
            };
            emit(&rep, &out)
        }
        Command::Demo { name, out } => {
            if !DEMOS.contains(&name.as_str()) {
                bail!("unknown demo `{name}`; available: {}", DEMOS.join(", "));
            }
            emit(&run_demo(&name)?, &out)
        }
        Command::Catalog => {
            print!("{}", catalog_text());
            Ok(0)
        }
    }
}

/// Prints or atomically writes the report; the exit status is its verdict.
fn emit(rep: &Report, out: &Out) -> Result<i32> {
    let text = rep.render();
    match &out.out {
        Some(path) => {
            write_atomic(path, &text).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {} (verdict: {})", path.display(), rep.verdict.label());
        }
        None => print!("{text}"),
    }
    Ok(rep.verdict.exit_code())
}

fn decompose<S: SpectralFamily>(sys: &S, cfg: &SpectralConfig) -> Result<Report> {
    Ok(decomposition_report(&spectral_decompose(sys, cfg)?))
}

struct TraceJob {
    name: String,
    delta: Option<f64>,
    length: Option<usize>,
    seed: u64,
    from: Option<PathBuf>,
    save: Option<PathBuf>,
}

impl TraceJob {
    /// Builds or reads the pseudo-orbit, traces it and checks the error
    /// against `factor · δ`.
    fn run<S, P>(
        &self,
        sys: &S,
        x0: P,
        factor: f64,
        tracer: impl Fn(&PseudoOrbit<P>) -> Result<TracingResult<P>, TraceError>,
    ) -> Result<Report>
    where
        S: Perturb<Point = P>,
        P: Point + PointText,
    {
        let (po, delta, seed) = match &self.from {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let file = PseudoOrbitFile::<P>::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
                (file.to_pseudo_orbit(sys), file.delta, file.seed)
            }
            None => {
                let (delta, length) = (self.delta.unwrap_or_default(), self.length.unwrap_or_default());
                if !(delta > 0.0) || length == 0 {
                    bail!("--delta and --length must be positive");
                }
                (perturbed_pseudo_orbit(sys, x0, length, delta, self.seed), delta, self.seed)
            }
        };
        if let Some(path) = &self.save {
            let file = PseudoOrbitFile::from_pseudo_orbit(&self.name, delta, seed, &po);
            write_atomic(path, &file.render()).with_context(|| format!("writing {}", path.display()))?;
        }
        let r = tracer(&po)?;
        Ok(tracing_report(&self.name, delta, seed, &po, &r, factor * delta))
    }
}

struct ChainJob {
    resolution: usize,
    radius: f64,
    steps: usize,
    adjacency: Option<PathBuf>,
}

impl ChainJob {
    fn run_torus<S: DynamicalSystem<Point = Vec2>>(&self, sys: &S, m: usize) -> Result<Report> {
        let grid = torus_grid(m);
        let index = TorusBuckets::new(&grid, m);
        self.run(sys, grid, |d, nodes| build_chain_graph_indexed(sys, nodes, d, &index))
    }

    /// Chain components over the balls `radius / 2^k`, `k < steps`.
    fn run<S: DynamicalSystem>(
        &self,
        sys: &S,
        samples: Vec<S::Point>,
        build: impl Fn(&Entourage<S::Point>, Arc<Vec<S::Point>>) -> ChainGraph<S::Point>,
    ) -> Result<Report> {
        let nodes = Arc::new(samples);
        let graphs: Vec<ChainGraph<S::Point>> = (0..self.steps)
            .map(|k| {
                let r = self.radius / 2f64.powi(k as i32);
                build(&Entourage::ball(sys.name(), sys.metric().clone(), r), nodes.clone())
            })
            .collect();
        let refs: Vec<&ChainGraph<S::Point>> = graphs.iter().collect();
        let set = chain_components(&refs)?;
        if let (Some(path), Some(finest)) = (&self.adjacency, graphs.last()) {
            write_atomic(path, &finest.to_adjacency_text()).with_context(|| format!("writing {}", path.display()))?;
        }
        let mut rep = components_report(sys.name(), &set, &nodes, sys.metric());
        rep.kv("resolution", self.resolution).kv("radius", self.radius).kv("steps", self.steps);
        let last = self.steps - 1;
        rep.verdict = if set.stabilization_index < last || last == 0 {
            Verdict::Pass
        } else {
            Verdict::ResolutionLimited {
                reason: "the partition still changes at the finest radius".into(),
            }
        };
        Ok(rep)
    }
}

fn stability_torus(f: &TorusAutomorphism, eps: f64, window: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<Report> {
    let g = PerturbedTorus::new(f.clone(), eps)?;
    let samples: Vec<Vec2> = (0..n).map(|_| [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)]).collect();
    // the bump moves points by at most eps·√2
    let r = stability_conjugacy_h(f, &g, 2.0 * eps, &samples, window)?;
    let target = series_constant(&f.lift(), f.lift_splitting()) * eps;
    let mut rep = stability_report(&r, target, 1e-9);
    rep.kv("epsilon", eps);
    Ok(rep)
}

fn stability_shift(f: &Shift, eps: f64, window: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<Report> {
    // swapping symbols at coordinate k moves points by at most 2^-k
    let k = (1.0 / eps).log2().ceil().max(1.0) as i64;
    let g = RecodedShift::new(f.clone(), k, (0, 1))?;
    let words = f.admissible_words(8);
    let samples = (0..n)
        .map(|_| f.extend_word(&words[rng.random_range(0..words.len())], 4))
        .collect::<Result<Vec<_>, _>>()?;
    let r = stability_conjugacy_sft(f, &g, &samples, window)?;
    let mut rep = Report::new("stability");
    rep.kv("system", f.name())
        .kv("perturbation", g.name())
        .kv("epsilon", eps)
        .kv("window", window)
        .kv("samples", samples.len())
        .kv("checked_radius", r.checked_radius)
        .kv("mismatches", r.mismatches)
        .kv("closeness", r.closeness)
        .kv("closeness_target", eps);
    let mut t = Table::new("samples", &["x", "h"]);
    for (x, h) in samples.iter().zip(&r.h) {
        t.push(vec![x.to_text(), h.to_text()]);
    }
    rep.tables.push(t);
    rep.verdict = Verdict::check(r.mismatches == 0, || format!("{} coordinate mismatches", r.mismatches))
        .and(Verdict::check(r.closeness <= eps, || format!("closeness {:e} > {eps:e}", r.closeness)));
    Ok(rep)
}

