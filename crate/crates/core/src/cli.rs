//! Command-line front end. [`run`] parses arguments and returns the exit code
//! and output instead of touching the process, so it can be tested directly.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::checker::{case242_report, seed_run, verify, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::exactpoly::MatrixPoint;
use crate::invgen::{GeneratorSet, SliceSolver};
use crate::orbitlab::{max_orbit_dim, verify_unique_intersection};
use crate::rootcomb::{
    admissible_pairs, compute_base, dims, render_diagram, AdmissiblePair, DiagramFormat, Dims,
    MarkedSet, ParabolicType, Root,
};

/// Directory that receives output documents when `--output` is absent.
pub const OUT_DIR_ENV: &str = "NILORBIT_OUT_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "nilorbit",
    version,
    about = "Invariants of unitriangular adjoint orbits in parabolic nilradicals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Json => "json",
            Format::Latex => "tex",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Marks {
    Phi,
    Psi,
}

impl From<Marks> for MarkedSet {
    fn from(m: Marks) -> Self {
        match m {
            Marks::Phi => MarkedSet::Phi,
            Marks::Psi => MarkedSet::Psi,
        }
    }
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Block sizes, e.g. 2,4,2
    #[arg(long = "type", value_name = "SIZES")]
    ty: ParabolicType,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw the base and the marked roots.
    Diagram {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, value_enum, default_value = "phi")]
        marks: Marks,
    },
    /// List S, Q, Phi, Psi and dimension counts.
    Base {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, value_enum, default_value = "phi")]
        marks: Marks,
    },
    /// Print the generator polynomials.
    Invariants {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check invariance, independence, restriction forms and coranks.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Number of consecutive seeds for the rank check.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        seed_count: u64,
    },
    /// Sampled maximal orbit dimension against the prediction.
    OrbitDim {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Reduce a point to the slice and cross-check it.
    Reduce {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// JSON file {"n": .., "entries": [[i, j, "p/q"], ..]}
        #[arg(long)]
        point: PathBuf,
    },
    /// The (2,4,2) case study.
    Case242 {
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: String) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: msg,
        }
    }
}

struct Document {
    name: &'static str,
    ty: String,
    format: Format,
    body: String,
    pass: bool,
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn unsupported(format: Format, cmd: &str) -> Error {
    Error::InvalidArgument(format!("format {format:?} not available for {cmd}").to_lowercase())
}

fn slug(ty: &ParabolicType) -> String {
    ty.sizes()
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join("-")
}

#[derive(Serialize)]
struct BaseDoc {
    #[serde(rename = "type")]
    parabolic_type: Vec<usize>,
    n: usize,
    base: Vec<Root>,
    pairs: Vec<AdmissiblePair>,
    phi: Vec<Root>,
    psi: Vec<Root>,
    marks: MarkedSet,
    dims: Dims,
}

fn base_doc(ty: &ParabolicType, marks: MarkedSet) -> BaseDoc {
    let base = compute_base(ty);
    let pairs = admissible_pairs(ty, &base);
    let mut phi: Vec<Root> = pairs.iter().map(|q| q.phi).collect();
    let mut psi: Vec<Root> = pairs.iter().map(|q| q.psi).collect();
    phi.sort();
    psi.sort();
    BaseDoc {
        parabolic_type: ty.sizes().to_vec(),
        n: ty.n(),
        base: base.roots().to_vec(),
        pairs,
        phi,
        psi,
        marks,
        dims: dims(ty),
    }
}

fn roots_text(roots: &[Root]) -> String {
    roots
        .iter()
        .map(Root::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn base_text(d: &BaseDoc) -> String {
    let mut out = String::new();
    let marked = match d.marks {
        MarkedSet::Phi => ("Phi", &d.phi),
        MarkedSet::Psi => ("Psi", &d.psi),
    };
    writeln!(
        out,
        "type: {}",
        ParabolicType::new(d.parabolic_type.clone()).expect("valid")
    )
    .unwrap();
    writeln!(out, "S: {}", roots_text(&d.base)).unwrap();
    writeln!(out, "Q:").unwrap();
    for q in &d.pairs {
        writeln!(
            out,
            "  {} {}  alpha {}  phi {}  psi {}",
            q.xi, q.xi_prime, q.alpha, q.phi, q.psi
        )
        .unwrap();
    }
    writeln!(out, "{}: {}", marked.0, roots_text(marked.1)).unwrap();
    let m = &d.dims;
    writeln!(
        out,
        "dim m = {}, |S| = {}, |Q| = {}, |Phi| = {}, orbit dim = {}, dim Y = {}",
        m.dim_m, m.base_size, m.pair_count, m.phi_size, m.predicted_regular_orbit_dim, m.y_dim
    )
    .unwrap();
    out
}

fn mark(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

fn execute(cmd: Command) -> Result<(Document, Option<PathBuf>)> {
    Ok(match cmd {
        Command::Diagram {
            common,
            format,
            marks,
        } => {
            let f = match format {
                Format::Text => DiagramFormat::Text,
                Format::Json => DiagramFormat::Json,
                Format::Latex => DiagramFormat::Latex,
            };
            let body = render_diagram(&common.ty, f, marks.into());
            (
                Document {
                    name: "diagram",
                    ty: slug(&common.ty),
                    format,
                    body,
                    pass: true,
                },
                common.output,
            )
        }
        Command::Base {
            common,
            format,
            marks,
        } => {
            let d = base_doc(&common.ty, marks.into());
            let body = match format {
                Format::Json => json(&d),
                Format::Text => base_text(&d),
                Format::Latex => return Err(unsupported(format, "base")),
            };
            (
                Document {
                    name: "base",
                    ty: slug(&common.ty),
                    format,
                    body,
                    pass: true,
                },
                common.output,
            )
        }
        Command::Invariants { common, format } => {
            let set = GeneratorSet::build(&common.ty);
            let body = match format {
                Format::Json => json(&set.to_doc()),
                Format::Latex => set.to_latex(),
                Format::Text => set
                    .all()
                    .into_iter()
                    .map(|(id, p)| format!("{id} = {p}\n"))
                    .collect(),
            };
            (
                Document {
                    name: "invariants",
                    ty: slug(&common.ty),
                    format,
                    body,
                    pass: true,
                },
                common.output,
            )
        }
        Command::Verify {
            common,
            format,
            seed,
            seed_count,
        } => {
            let r = verify(&common.ty, &seed_run(seed, seed_count as usize));
            let body = match format {
                Format::Json => json(&r),
                Format::Text => {
                    let mut s = format!("type: {}\n", common.ty);
                    for g in &r.invariance {
                        writeln!(s, "invariant {}: {}", g.id, mark(g.invariant)).unwrap();
                    }
                    for k in &r.independence {
                        writeln!(
                            s,
                            "rank at seed {}: {} of {}",
                            k.seed, k.rank, r.expected_rank
                        )
                        .unwrap();
                    }
                    writeln!(s, "restriction forms: {}", mark(r.checks.restriction)).unwrap();
                    writeln!(
                        s,
                        "corank: pairs {}, slice {}: {}",
                        r.corank.pairs,
                        r.corank.slice,
                        mark(r.corank.equal)
                    )
                    .unwrap();
                    writeln!(s, "pass: {}", r.pass).unwrap();
                    s
                }
                Format::Latex => return Err(unsupported(format, "verify")),
            };
            (
                Document {
                    name: "verify",
                    ty: slug(&common.ty),
                    format,
                    body,
                    pass: r.pass,
                },
                common.output,
            )
        }
        Command::OrbitDim {
            common,
            format,
            trials,
            seed,
        } => {
            let r = max_orbit_dim(&common.ty, trials as usize, seed)?;
            let body = match format {
                Format::Json => json(&r),
                Format::Text => format!(
                    "type: {}\nseed: {}\ntrials: {}\nmax orbit dim: {}\npredicted: {}\ncovered: {}\nflagged: {}\npass: {}\n",
                    common.ty, r.seed, r.trials, r.max_rank, r.predicted, r.covered, r.flagged, r.pass
                ),
                Format::Latex => return Err(unsupported(format, "orbit-dim")),
            };
            (
                Document {
                    name: "orbit-dim",
                    ty: slug(&common.ty),
                    format,
                    body,
                    pass: r.pass,
                },
                common.output,
            )
        }
        Command::Reduce {
            common,
            format,
            point,
        } => {
            let text = std::fs::read_to_string(&point).map_err(|e| {
                Error::InvalidArgument(format!("cannot read {}: {e}", point.display()))
            })?;
            let a = MatrixPoint::from_json(&common.ty, &text)?;
            let set = GeneratorSet::build(&common.ty);
            let solver = SliceSolver::new(&set)?;
            let r = verify_unique_intersection(&set, &solver, &a)?;
            let body = match format {
                Format::Json => json(&r),
                Format::Text => {
                    let mut s = format!("type: {}\ny:", common.ty);
                    for (i, j, v) in &r.y.entries {
                        write!(s, " ({i},{j})={v}").unwrap();
                    }
                    write!(
                        s,
                        "\non slice: {}\ninvariants preserved: {}\nmatches slice coordinates: {}\nidempotent: {}\npass: {}\n",
                        r.on_slice, r.invariants_preserved, r.matches_slice_coordinates, r.idempotent, r.pass
                    )
                    .unwrap();
                    s
                }
                Format::Latex => return Err(unsupported(format, "reduce")),
            };
            (
                Document {
                    name: "reduce",
                    ty: slug(&common.ty),
                    format,
                    body,
                    pass: r.pass,
                },
                common.output,
            )
        }
        Command::Case242 {
            format,
            seed,
            output,
        } => {
            let r = case242_report(seed);
            let body = match format {
                Format::Json => json(&r),
                Format::Text => {
                    let mut s = format!(
                        "L12*L21 - L11*L22 = {}*M1*N1*D: {}\nD invariant: {}\n",
                        r.identity.sign,
                        mark(r.identity.holds),
                        mark(r.d_invariant)
                    );
                    let shifts = r.shifts.iter().all(|c| c.row && c.column);
                    writeln!(s, "shift identities: {}", mark(shifts)).unwrap();
                    for row in &r.table {
                        writeln!(
                            s,
                            "{}(Y) = {}  [sign {}] {}",
                            row.name,
                            row.computed,
                            row.sign,
                            mark(row.pass)
                        )
                        .unwrap();
                    }
                    writeln!(
                        s,
                        "jacobian rank: {} of {} generators\npass: {}",
                        r.jacobian_rank, r.jacobian_generators, r.pass
                    )
                    .unwrap();
                    s
                }
                Format::Latex => return Err(unsupported(format, "case242")),
            };
            (
                Document {
                    name: "case242",
                    ty: "2-4-2".into(),
                    format,
                    body,
                    pass: r.pass,
                },
                output,
            )
        }
    })
}

/// Parses `args` (program name first) and runs the subcommand. Exit code 0
/// when every check passes, 1 when a check fails (the report is still
/// produced), 2 on usage or input errors.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome::usage(text)
            };
        }
    };
    let (doc, output) = match execute(cli.command) {
        Ok(d) => d,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    let code = if doc.pass { 0 } else { 1 };
    let target = output.map(|p| (p, false)).or_else(|| {
        std::env::var_os(OUT_DIR_ENV).map(|dir| {
            let file = format!("{}-{}.{}", doc.name, doc.ty, doc.format.ext());
            (PathBuf::from(dir).join(file), true)
        })
    });
    match target {
        None => Outcome {
            code,
            stdout: doc.body,
            stderr: String::new(),
        },
        Some((path, echo)) => match std::fs::write(&path, &doc.body) {
            Ok(()) => Outcome {
                code,
                stdout: if echo { doc.body } else { String::new() },
                stderr: String::new(),
            },
            Err(e) => Outcome::usage(format!("error: cannot write {}: {e}\n", path.display())),
        },
    }
}
