use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use xclab::formats::{
    read_json, to_json, ApproxFile, CountFile, DiscretizedFile, ExtensionFile, FactorizationFile, MatroidFile,
    PolytopeFile, ReportFile, SlackFile, VertexSetFile,
};
use xclab::sweep::{approx_one, approx_sweep, roundtrip_sweep};
use xclab::CliError;
use xclab_core::approximator::{build_approx, objective_battery, verify_sandwich};
use xclab_core::counting::{certified_matroid_xc_lower_bound, certified_xc_lower_bound};
use xclab_core::discretizer::{discretize, reconstruct};
use xclab_core::factorization::{build_extension, nmf_heuristic, trivial_factorization, verify_extension, Side};
use xclab_core::matroid::{graphic, matroid_polytope, uniform};
use xclab_core::polytope::{hull, slack_matrix, HPolytope, VertexSet};
use xclab_core::rational::parse;
use xclab_core::Rational;

#[derive(Parser, Debug)]
#[command(name = "xclab", version, about = "Exact experiments on extension complexity of 0/1 polytopes")]
struct Cli {
    /// Write the JSON artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = default_jobs())]
    jobs: usize,
    /// Override the membership tolerance of a discretized system (p/q).
    #[arg(long, global = true, value_parser = rational_arg)]
    tol: Option<Rational>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Facet description of conv(X).
    Hull { vertices: PathBuf },
    /// Slack matrix of a polytope against its vertices.
    Slack {
        vertices: PathBuf,
        /// Inequality system; defaults to the hull of the vertices.
        #[arg(long)]
        polytope: Option<PathBuf>,
    },
    /// Trivial factorization, or a heuristic one of width `--r`.
    Factorize {
        vertices: PathBuf,
        #[arg(long)]
        polytope: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 2000)]
        iterations: usize,
    },
    /// Extended formulation from a factorization of the slack matrix.
    Extend {
        vertices: PathBuf,
        #[arg(long)]
        factorization: Option<PathBuf>,
        #[arg(long)]
        polytope: Option<PathBuf>,
    },
    /// Certify an extended formulation against its vertex set.
    VerifyExtension {
        extension: PathBuf,
        #[arg(long)]
        vertices: PathBuf,
    },
    /// Rounded system (Abar, Ubar, bbar) for a vertex set.
    Discretize {
        vertices: PathBuf,
        #[arg(long)]
        factorization: Option<PathBuf>,
    },
    /// Recover the vertex set from a discretized system.
    Reconstruct { system: PathBuf },
    /// Discretize and reconstruct every nonempty X in {0,1}^n.
    Roundtrip {
        #[arg(long)]
        n: usize,
        /// Also verify both trivial extensions of each set.
        #[arg(long)]
        extensions: bool,
    },
    /// Approximate extension with certified sandwich, for one set or all sets in dimension n.
    Approx {
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long, conflicts_with = "n")]
        vertices: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        /// Number of seeded random objectives added to the battery.
        #[arg(long, default_value_t = 8)]
        objectives: usize,
    },
    /// Certified counting lower bound on worst-case extension complexity.
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        matroid: bool,
    },
    /// Build or read a matroid and emit its independent-set vertices.
    Matroid {
        #[arg(long, value_enum)]
        family: Family,
        /// Ground-set size for `uniform`, node count for `graphic`.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Comma-separated edges `a-b` on nodes 1..=n.
        #[arg(long)]
        edges: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Also write the pruned rank-inequality polytope here.
        #[arg(long)]
        polytope: Option<PathBuf>,
        /// Also write the matroid file here.
        #[arg(long)]
        save: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Uniform,
    Graphic,
    File,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_vertices(path: &Path) -> Result<VertexSet, CliError> {
    read_json::<VertexSetFile>(path)?.to_set()
}

fn load_polytope(path: &Option<PathBuf>, x: &VertexSet) -> Result<HPolytope, CliError> {
    match path {
        Some(p) => read_json::<PolytopeFile>(p)?.to_polytope(),
        None => Ok(hull(x)?),
    }
}

fn check(report: &xclab_core::Report, what: &str) -> Result<(), CliError> {
    if report.all_passed() {
        return Ok(());
    }
    let first = report.failures().next().expect("a failure exists");
    Err(CliError::Certificate(format!("{what}: {} ({})", first.label, first.detail)))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Hull { vertices } => {
            let p = hull(&load_vertices(vertices)?)?;
            emit(&cli.out, &to_json(&PolytopeFile::from_polytope(&p)))
        }
        Command::Slack { vertices, polytope } => {
            let x = load_vertices(vertices)?;
            let p = load_polytope(polytope, &x)?;
            emit(&cli.out, &to_json(&SlackFile::from_slack(&slack_matrix(&p, &x)?)))
        }
        Command::Factorize { vertices, polytope, side, r, iterations } => {
            let x = load_vertices(vertices)?;
            let s = slack_matrix(&load_polytope(polytope, &x)?, &x)?;
            let f = match r {
                None => trivial_factorization(&s, side.into()),
                Some(r) => nmf_heuristic(&s, *r, cli.seed, *iterations).ok_or_else(|| {
                    CliError::Certificate(format!("no nonnegative factorization of width {r} found"))
                })?,
            };
            emit(&cli.out, &to_json(&FactorizationFile::from_factorization(&f)))
        }
        Command::Extend { vertices, factorization, polytope } => {
            let x = load_vertices(vertices)?;
            let p = load_polytope(polytope, &x)?;
            let f = match factorization {
                Some(path) => read_json::<FactorizationFile>(path)?.to_factorization()?,
                None => trivial_factorization(&slack_matrix(&p, &x)?, Side::Left),
            };
            let ef = build_extension(&p, &x, &f)?;
            emit(&cli.out, &to_json(&ExtensionFile::from_extension(&ef)))
        }
        Command::VerifyExtension { extension, vertices } => {
            let ef = read_json::<ExtensionFile>(extension)?.to_extension()?;
            let report = verify_extension(&ef, &load_vertices(vertices)?)?;
            emit(&cli.out, &to_json(&ReportFile::from_report(&report)))?;
            check(&report, "extension")
        }
        Command::Discretize { vertices, factorization } => {
            let x = load_vertices(vertices)?;
            let f = match factorization {
                Some(path) => Some(read_json::<FactorizationFile>(path)?.to_factorization()?),
                None => None,
            };
            let mut d = discretize(&x, f.as_ref())?;
            if let Some(tol) = &cli.tol {
                d = d.with_tolerance(tol.clone());
            }
            emit(&cli.out, &to_json(&DiscretizedFile::from_system(&d)))
        }
        Command::Reconstruct { system } => {
            let mut d = read_json::<DiscretizedFile>(system)?.to_system()?;
            if let Some(tol) = &cli.tol {
                if !tol.is_positive() {
                    return Err(CliError::Usage("tolerance must be positive".into()));
                }
                d = d.with_tolerance(tol.clone());
            }
            emit(&cli.out, &to_json(&VertexSetFile::from_set(&reconstruct(&d)?)))
        }
        Command::Roundtrip { n, extensions } => {
            let summary = roundtrip_sweep(*n, cli.jobs, *extensions)?;
            let text: String = summary.lines().iter().map(|l| format!("{l}\n")).collect();
            emit(&cli.out, &text)?;
            if summary.passed() {
                Ok(())
            } else {
                Err(CliError::Certificate(format!("round trip failed for n = {n}")))
            }
        }
        Command::Approx { eps, vertices, n, objectives } => {
            if !eps.is_positive() {
                return Err(CliError::Usage("--eps must be positive".into()));
            }
            match (vertices, n) {
                (Some(path), _) => {
                    let x = load_vertices(path)?;
                    let q = build_approx(&x, None, eps)?;
                    let report = verify_sandwich(&q, &x, &objective_battery(&q.polytope, cli.seed, *objectives))?;
                    let body = serde_json::json!({
                        "extension": ApproxFile::from_approx(&q),
                        "report": ReportFile::from_report(&report),
                    });
                    emit(&cli.out, &to_json(&body))?;
                    check(&report, "sandwich")
                }
                (None, Some(n)) => {
                    let results = approx_sweep(*n, eps, *objectives, cli.seed, cli.jobs)?;
                    let failed: Vec<u64> = results.iter().filter(|(_, r)| !r.all_passed()).map(|(m, _)| *m).collect();
                    let text = format!(
                        "n = {n}, ε = {eps}: {}/{} sets certified\n",
                        results.len() - failed.len(),
                        results.len()
                    );
                    emit(&cli.out, &text)?;
                    match failed.first() {
                        None => Ok(()),
                        Some(mask) => {
                            let x = VertexSet::from_mask(*n, *mask)?;
                            check(&approx_one(&x, eps, *objectives, cli.seed)?, &format!("set {:?}", x.vertices()))
                        }
                    }
                }
                (None, None) => Err(CliError::Usage("approx needs --vertices or --n".into())),
            }
        }
        Command::Bound { n, matroid } => {
            let report = if *matroid {
                certified_matroid_xc_lower_bound(*n)?
            } else {
                certified_xc_lower_bound(*n)?
            };
            for line in &report.transcript {
                eprintln!("{line}");
            }
            let file = CountFile::from_report(&report);
            emit(&cli.out, &to_json(&file))?;
            if file.bracket_holds {
                Ok(())
            } else {
                Err(CliError::Certificate("bracket does not hold".into()))
            }
        }
        Command::Matroid { family, n, k, edges, input, polytope, save } => {
            let m = match family {
                Family::Uniform => {
                    let (n, k) = n.zip(*k).ok_or_else(|| CliError::Usage("uniform needs --n and --k".into()))?;
                    uniform(n, k)?
                }
                Family::Graphic => {
                    let nodes = n.ok_or_else(|| CliError::Usage("graphic needs --n (nodes)".into()))?;
                    let list = parse_edges(edges.as_deref().unwrap_or(""))?;
                    graphic(nodes, &list)?
                }
                Family::File => {
                    let path = input.as_ref().ok_or_else(|| CliError::Usage("file family needs --input".into()))?;
                    read_json::<MatroidFile>(path)?.to_matroid()?
                }
            };
            let (x, p) = matroid_polytope(&m)?;
            eprintln!(
                "{} independent sets, rank {}, {} rank-system rows",
                m.independent_sets().len(),
                m.rank((1u64 << m.n()) - 1),
                p.num_rows()
            );
            if let Some(path) = polytope {
                emit(&Some(path.clone()), &to_json(&PolytopeFile::from_polytope(&p)))?;
            }
            if let Some(path) = save {
                emit(&Some(path.clone()), &to_json(&MatroidFile::from_matroid(&m)))?;
            }
            emit(&cli.out, &to_json(&VertexSetFile::from_set(&x)))
        }
    }
}

impl From<&SideArg> for Side {
    fn from(s: &SideArg) -> Self {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

/// `"1-2,2-3"` with 1-based nodes into 0-based pairs.
fn parse_edges(text: &str) -> Result<Vec<(usize, usize)>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|e| {
            let (a, b) = e.split_once('-').ok_or_else(|| CliError::Usage(format!("bad edge {e:?}")))?;
            let node = |s: &str| match s.trim().parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(CliError::Usage(format!("bad node in edge {e:?}"))),
            };
            Ok((node(a)?, node(b)?))
        })
        .collect()
}
