//! topocert: build simplicial complexes, run certified checks, replay
//! certificates.

mod cert;
mod io;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use topocert::checkers::{
    collapses_onto, is_collapsible, is_endocollapsible, is_nonevasive, is_shellable, pl_links_check, shells_to,
    LinkAggregate,
};
use topocert::constructions::{
    cone_fresh, derived_neighborhood, join, join_offset, product_cube_with_provenance, sd_with_provenance, suspension,
    tubing_collapse,
};
use topocert::{betti_z2, zoo, CheckOutcome, SearchBudget, Simplex, SimplicialComplex, Strategy, TopologyError};

use cert::{CertificateFile, Kind, PlLinksPayload};
use io::{load, ComplexFile, Format};

/// Exit codes beyond the verdicts, following sysexits.h.
const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;
const EX_NOINPUT: u8 = 66;
const EX_IOERR: u8 = 74;

#[derive(Debug)]
pub struct Fail {
    code: u8,
    msg: String,
}

impl Fail {
    pub fn usage(msg: impl Into<String>) -> Self {
        Fail { code: EX_USAGE, msg: msg.into() }
    }
    pub fn data(msg: impl Into<String>) -> Self {
        Fail { code: EX_DATAERR, msg: msg.into() }
    }
    pub fn no_input(msg: impl Into<String>) -> Self {
        Fail { code: EX_NOINPUT, msg: msg.into() }
    }
    pub fn io(msg: impl Into<String>) -> Self {
        Fail { code: EX_IOERR, msg: msg.into() }
    }
}

impl From<TopologyError> for Fail {
    fn from(e: TopologyError) -> Self {
        match e {
            TopologyError::InvalidArgument(_) | TopologyError::UnknownName(_) => Fail::usage(e.to_string()),
            _ => Fail::data(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "topocert",
    version,
    about = "Simplicial complexes with certified collapsibility, shellability and non-evasiveness checks",
    after_help = "Complex files are JSON ({\"facets\": [[0,1,2], ...]}) or text (one facet per line, `#` comments).\n\
                  Input is auto-detected; every command reads stdin when FILE is omitted or `-`.\n\n\
                  EXIT CODES:\n  0 positive / success\n  1 negative / certificate refused\n  2 unknown (budget spent)\n  \
                  64 usage error\n  65 malformed input\n  66 missing input\n\n\
                  EXAMPLES:\n  topocert zoo get rudin_ball | topocert check shellable --strategy exhaustive\n  \
                  topocert zoo get rudin_ball | topocert sd --m 1 | topocert check shellable --strategy greedy_restarts --seed 7\n  \
                  topocert check collapsible --certificate c.json ball.txt && topocert verify c.json ball.txt"
)]
struct Cli {
    /// Output format for complexes and reports
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print f-vector, dimension, purity, free faces and Z2 Betti numbers
    Info {
        #[arg(default_value = "-")]
        file: PathBuf,
    },
    /// Iterated barycentric subdivision
    Sd {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        m: i64,
        #[arg(default_value = "-")]
        file: PathBuf,
    },
    /// Product with the n-cube
    Product {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        n: i64,
        #[arg(default_value = "-")]
        file: PathBuf,
    },
    /// Join of two complexes; vertices of B are shifted past those of A
    Join { a: PathBuf, b: PathBuf },
    /// Cone over a fresh apex
    Cone {
        #[arg(default_value = "-")]
        file: PathBuf,
    },
    /// Suspension over two fresh points
    Suspend {
        #[arg(default_value = "-")]
        file: PathBuf,
    },
    /// Derived neighborhood of a subcomplex in sd^m of the input
    Neighborhood {
        /// Subcomplex file
        #[arg(long)]
        sub: PathBuf,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        m: i64,
        #[arg(default_value = "-")]
        file: PathBuf,
    },
    /// Tubing of a face: the subcomplex of C x I that C x I collapses onto
    Tube {
        /// Face to tube, e.g. "0 1"
        #[arg(long)]
        tau: String,
        /// Write the collapse of C x I onto the tubing here
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(default_value = "-")]
        file: PathBuf,
    },
    /// Run a checker and print the outcome as JSON
    Check(CheckArgs),
    /// Replay a certificate against a complex
    Verify {
        /// Certificate file, or an outcome document with an embedded certificate
        cert: PathBuf,
        #[arg(default_value = "-")]
        file: PathBuf,
    },
    /// Built-in catalog of named complexes
    #[command(subcommand)]
    Zoo(ZooCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Property {
    Collapsible,
    Shellable,
    Nonevasive,
    Endocollapsible,
    ShellsTo,
    CollapsesOnto,
    PlLinks,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(value_enum)]
    prop: Property,
    #[arg(default_value = "-")]
    file: PathBuf,
    /// Target subcomplex for shells-to and collapses-onto
    #[arg(long)]
    target: Option<PathBuf>,
    /// Subdivision rounds for pl-links
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    m: i64,
    /// Write the certificate here instead of embedding it in the outcome
    #[arg(long)]
    certificate: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct BudgetArgs {
    /// Default budget as key=value pairs, e.g. "max_seconds=60,seed=3"
    #[arg(long, env = "TOPOCERT_BUDGET")]
    budget: Option<String>,
    #[arg(long)]
    max_nodes: Option<u64>,
    #[arg(long)]
    max_seconds: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// exhaustive, greedy_restarts or hybrid
    #[arg(long)]
    strategy: Option<Strategy>,
    /// Greedy restarts
    #[arg(long)]
    restarts: Option<u32>,
    /// Worker threads
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum ZooCommand {
    /// List catalog families and sample names
    List,
    /// Export an entry's complex
    Get { name: String },
    /// Print an entry with its expected properties
    Show { name: String },
}

impl BudgetArgs {
    fn resolve(&self) -> Result<SearchBudget, Fail> {
        let mut b = SearchBudget::default();
        if let Some(pairs) = &self.budget {
            for pair in pairs.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                let (k, v) = pair
                    .split_once('=')
                    .ok_or_else(|| Fail::usage(format!("budget entry `{pair}` is not key=value")))?;
                let bad = |_| Fail::usage(format!("bad value for budget key `{k}`: `{v}`"));
                match k.trim() {
                    "max_nodes" => b.max_nodes = v.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
                    "max_seconds" => {
                        b.max_seconds = v.parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?
                    }
                    "seed" => b.seed = v.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
                    "strategy" => b.strategy = v.parse().map_err(bad)?,
                    "restarts" => b.restarts = v.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
                    "jobs" => b.jobs = v.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
                    other => return Err(Fail::usage(format!("unknown budget key `{other}`"))),
                }
            }
        }
        if let Some(n) = self.max_nodes {
            b.max_nodes = n;
        }
        if let Some(s) = self.max_seconds {
            b.max_seconds = s;
        }
        if let Some(s) = self.seed {
            b.seed = s;
        }
        if let Some(s) = self.strategy {
            b.strategy = s;
        }
        if let Some(r) = self.restarts {
            b.restarts = r;
        }
        if let Some(j) = self.jobs {
            b.jobs = j.max(1);
        }
        Ok(b)
    }
}

fn emit_complex(format: Format, file: &ComplexFile) -> Result<u8, Fail> {
    print!("{}", file.canonical().render(format));
    Ok(0)
}

fn parse_face(s: &str) -> Result<Simplex, Fail> {
    let verts = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Fail::usage(format!("bad vertex `{t}` in face `{s}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    if verts.is_empty() {
        return Err(Fail::usage("face must have at least one vertex"));
    }
    Ok(Simplex::new(verts))
}

fn info(format: Format, file: &ComplexFile) -> Result<u8, Fail> {
    let c = file.complex();
    let f = c.f_vector();
    let report = json!({
        "dim": c.dim(),
        "vertices": c.vertex_count(),
        "facets": c.num_facets(),
        "f_vector": f.0,
        "euler_characteristic": f.euler_characteristic(),
        "pure": c.is_pure()?,
        "connected": c.is_connected(),
        "pseudomanifold": c.is_pseudomanifold(),
        "free_faces": c.free_faces().len(),
        "betti_z2": if c.is_empty() { Vec::new() } else { betti_z2(&c)? },
    });
    match format {
        Format::Json => println!("{report}"),
        Format::Text => {
            for (k, v) in report.as_object().expect("object") {
                println!("{k}: {v}");
            }
        }
    }
    Ok(0)
}

fn subdivide(file: &ComplexFile, m: i64) -> Result<ComplexFile, Fail> {
    if m < 0 {
        return Err(Fail::usage(format!("--m must be >= 0, got {m}")));
    }
    let mut cur = file.canonical();
    for _ in 0..m {
        let sub = sd_with_provenance(&cur.complex())?;
        let labels = sub
            .vertices
            .iter()
            .map(|cv| {
                let names: Vec<String> = cv.chain_of.vertices().iter().map(|&v| cur.label(v)).collect();
                (cv.fresh_id, format!("b[{}]", names.join(" ")))
            })
            .collect();
        cur = ComplexFile::with_labels(&sub.complex, labels);
    }
    Ok(cur)
}

fn product(file: &ComplexFile, n: i64) -> Result<ComplexFile, Fail> {
    let p = product_cube_with_provenance(&file.complex(), n)?;
    let labels = p
        .vertices
        .iter()
        .enumerate()
        .map(|(i, pv)| {
            let hs: Vec<String> = pv.heights.iter().map(|h| h.to_string()).collect();
            (i as u32, format!("({},{})", file.label(pv.base), hs.join(",")))
        })
        .collect();
    Ok(ComplexFile::with_labels(&p.complex, labels))
}

fn outcome_json<C: serde::Serialize>(property: Property, outcome: &CheckOutcome<C>) -> Value {
    let name = property.to_possible_value().expect("named").get_name().to_string();
    json!({ "property": name, "verdict": outcome.verdict_name(), "stats": outcome.stats })
}

fn exit_for(verdict: &str) -> u8 {
    match verdict {
        "positive" => 0,
        "negative" => 1,
        _ => 2,
    }
}

fn finish<C: serde::Serialize>(
    args: &CheckArgs,
    source: &SimplicialComplex,
    kind: Kind,
    outcome: CheckOutcome<C>,
) -> Result<u8, Fail> {
    let mut doc = outcome_json(args.prop, &outcome);
    if let Some(cert) = outcome.certificate() {
        attach(args, &mut doc, CertificateFile::new(kind, source, cert))?;
    }
    println!("{doc}");
    Ok(exit_for(outcome.verdict_name()))
}

fn attach(args: &CheckArgs, doc: &mut Value, cert: CertificateFile) -> Result<(), Fail> {
    match &args.certificate {
        Some(path) => {
            io::write_file(path, &(serde_json::to_string(&cert).expect("serializable") + "\n"))?;
            doc["certificate_file"] = json!(path.display().to_string());
        }
        None => doc["certificate"] = serde_json::to_value(&cert).expect("serializable"),
    }
    Ok(())
}

fn check(args: &CheckArgs) -> Result<u8, Fail> {
    let budget = args.budget.resolve()?;
    let c = load(&args.file)?.complex();
    let target = || -> Result<SimplicialComplex, Fail> {
        let path = args.target.as_ref().ok_or_else(|| Fail::usage("this property needs --target FILE"))?;
        Ok(load(path)?.complex())
    };
    match args.prop {
        Property::Collapsible => finish(args, &c, Kind::Collapse, is_collapsible(&c, &budget)?),
        Property::CollapsesOnto => finish(args, &c, Kind::Collapse, collapses_onto(&c, &target()?, &budget)?),
        Property::Shellable => finish(args, &c, Kind::Shelling, is_shellable(&c, &budget)?),
        Property::ShellsTo => finish(args, &c, Kind::Shelling, shells_to(&c, &target()?, &budget)?),
        Property::Nonevasive => finish(args, &c, Kind::NonevasiveTree, is_nonevasive(&c, &budget)?),
        Property::Endocollapsible => finish(args, &c, Kind::Endocollapse, is_endocollapsible(&c, &budget)?),
        Property::PlLinks => {
            let report = pl_links_check(&c, args.m, &budget)?;
            let verdict = match report.aggregate {
                LinkAggregate::AllPositive => "positive",
                LinkAggregate::AnyNegative => "negative",
                LinkAggregate::AnyUnknown => "unknown",
            };
            let mut stats = topocert::SearchStats::default();
            for l in &report.per_vertex {
                stats.nodes += l.outcome.stats.nodes;
                stats.memo_hits += l.outcome.stats.memo_hits;
                stats.restarts += l.outcome.stats.restarts;
                stats.seconds += l.outcome.stats.seconds;
            }
            let per_vertex: Vec<Value> = report
                .per_vertex
                .iter()
                .map(|l| json!({ "vertex": l.vertex, "verdict": l.outcome.verdict_name() }))
                .collect();
            let mut doc = json!({
                "property": "pl-links",
                "verdict": verdict,
                "stats": stats,
                "rounds": args.m,
                "aggregate": report.aggregate,
                "per_vertex": per_vertex,
            });
            if report.aggregate == LinkAggregate::AllPositive {
                let payload = PlLinksPayload { rounds: args.m, report };
                attach(args, &mut doc, CertificateFile::new(Kind::PlLinks, &c, &payload))?;
            }
            println!("{doc}");
            Ok(exit_for(verdict))
        }
    }
}

fn verify(cert_path: &Path, file: &Path) -> Result<u8, Fail> {
    let (name, text) = io::read_source(cert_path)?;
    let cert = CertificateFile::parse(&name, &text)?;
    let c = load(file)?.complex();
    let kind = serde_json::to_value(cert.kind).expect("serializable");
    match cert.verify(&c) {
        Ok(()) => {
            println!("{}", json!({ "kind": kind, "valid": true }));
            Ok(0)
        }
        Err(reason) => {
            println!("{}", json!({ "kind": kind, "valid": false, "reason": reason }));
            Ok(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Fail> {
    let format = cli.format;
    match cli.command {
        Command::Info { file } => info(format, &load(&file)?),
        Command::Sd { m, file } => emit_complex(format, &subdivide(&load(&file)?, m)?),
        Command::Product { n, file } => emit_complex(format, &product(&load(&file)?, n)?),
        Command::Join { a, b } => {
            let (fa, fb) = (load(&a)?.canonical(), load(&b)?.canonical());
            let (ca, cb) = (fa.complex(), fb.complex());
            let shift = join_offset(&ca);
            let mut labels = fa.labels.clone();
            labels.extend(fb.labels.iter().map(|(&v, l)| (v + shift, l.clone())));
            emit_complex(format, &ComplexFile::with_labels(&join(&ca, &cb), labels))
        }
        Command::Cone { file } => {
            let f = load(&file)?.canonical();
            emit_complex(format, &ComplexFile::with_labels(&cone_fresh(&f.complex()), f.labels.clone()))
        }
        Command::Suspend { file } => {
            let f = load(&file)?.canonical();
            emit_complex(format, &ComplexFile::with_labels(&suspension(&f.complex()), f.labels.clone()))
        }
        Command::Neighborhood { sub, m, file } => {
            let c = load(&file)?.complex();
            let d = load(&sub)?.complex();
            emit_complex(format, &ComplexFile::new(&derived_neighborhood(&d, &c, m)?))
        }
        Command::Tube { tau, certificate, file } => {
            let f = load(&file)?.canonical();
            let t = tubing_collapse(&f.complex(), &parse_face(&tau)?)?;
            if let Some(path) = certificate {
                let cert = CertificateFile::new(Kind::Collapse, &t.product.complex, &t.certificate);
                io::write_file(&path, &(serde_json::to_string(&cert).expect("serializable") + "\n"))?;
            }
            let labels: BTreeMap<u32, String> = t
                .complex
                .vertices()
                .into_iter()
                .map(|v| {
                    let pv = &t.product.vertices[v as usize];
                    (v, format!("({},{})", f.label(pv.base), pv.heights[0]))
                })
                .collect();
            emit_complex(format, &ComplexFile::with_labels(&t.complex, labels))
        }
        Command::Check(args) => check(&args),
        Command::Verify { cert, file } => verify(&cert, &file),
        Command::Zoo(ZooCommand::List) => {
            match format {
                Format::Json => println!("{}", json!({ "families": zoo::CATALOG, "samples": zoo::list() })),
                Format::Text => zoo::list().iter().for_each(|n| println!("{n}")),
            }
            Ok(0)
        }
        Command::Zoo(ZooCommand::Get { name }) => emit_complex(format, &ComplexFile::new(&zoo::get(&name)?.complex)),
        Command::Zoo(ZooCommand::Show { name }) => {
            let entry = zoo::get(&name)?;
            println!("{}", serde_json::to_string(&entry).expect("serializable"));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EX_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("topocert: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
