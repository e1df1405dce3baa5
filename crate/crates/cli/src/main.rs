use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use steiner_dom::audit::{verify, VerifyConfig, VerifyMode};
use steiner_dom::bench::{bench, write_csv};
use steiner_dom::steiner_domination::SolveReport;
use steiner_dom::tree_corpus::{gen, Family, GeneratorSpec};
use steiner_dom::tree_model::{
    parse_edge_list, parse_parent_file, relabel_bfs, validate, Mode, RootPolicy,
};
use steiner_dom::{forest_domination, steiner_domination, Error, VertexSet};

#[derive(Parser)]
#[command(
    name = "stdom",
    version,
    about = "Domination and Steiner domination of trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steiner dominating set of a tree
    Solve(SolveArgs),
    /// Minimum dominating set of a rooted forest (.par)
    GammaForest {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Write a generated tree as a .par file
    Gen(GenArgs),
    /// Audit the construction against the exact oracles
    Verify(VerifyArgs),
    /// Time both algorithms on Prüfer trees and write a CSV
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Par,
    Edg,
}

#[derive(Args)]
struct SolveArgs {
    input: PathBuf,
    /// Defaults to the file extension, then to par
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Prufer,
    #[value(name = "random_parent", alias = "random-parent")]
    RandomParent,
    Path,
    Star,
    Spider,
    Caterpillar,
    Binary,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Vertex count; implied for spider and caterpillar
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    legs: Option<usize>,
    #[arg(long)]
    leglen: Option<usize>,
    #[arg(long)]
    spine: Option<usize>,
    /// Pendant counts cycled along the spine, e.g. "2,0,1"
    #[arg(long, value_delimiter = ',')]
    leg_pattern: Vec<usize>,
    /// Output file; standard output when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long)]
    max_n: usize,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Search only supersets of the leaf set in the exact oracle
    #[arg(long)]
    prune: bool,
    #[arg(long)]
    report: PathBuf,
    /// Defaults to `<report stem>-certs` next to the report
    #[arg(long)]
    cert_dir: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [10_000usize, 100_000, 1_000_000])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_report(report: &SolveReport, json: bool) {
    if json {
        println!(
            "{}",
            serde_json::to_string(report).expect("report serializes")
        );
    } else {
        println!("n: {}", report.n);
        println!("leaves: {}", report.leaves);
        println!("h vertices: {}", report.h_vertices);
        println!("gamma(H): {}", report.gamma_h);
        println!("steiner dominating set: {}", report.steiner_dominating_set);
        println!("size: {}", report.size);
        println!("formula value: {}", report.formula_value);
    }
}

fn solve(args: &SolveArgs) -> Result<(), Error> {
    let text = read(&args.input)?;
    let format = args.format.unwrap_or_else(|| match args.input.extension() {
        Some(ext) if ext == "edg" => InputFormat::Edg,
        _ => InputFormat::Par,
    });
    let report = match format {
        InputFormat::Par => {
            let parents = parse_parent_file(&text)?;
            steiner_domination(&parents)?.report(parents.len())
        }
        InputFormat::Edg => {
            let edges = parse_edge_list(&text)?;
            let (parents, label_map) = relabel_bfs(&edges, RootPolicy::MaxDegree)?;
            let mut original = vec![0; label_map.len() + 1];
            for (old, &new) in label_map.iter().enumerate() {
                original[new] = old + 1;
            }
            let back = |s: &VertexSet| -> VertexSet { s.iter().map(|v| original[v]).collect() };
            let r = steiner_domination(&parents)?.report(parents.len());
            SolveReport {
                leaves: back(&r.leaves),
                h_vertices: back(&r.h_vertices),
                steiner_dominating_set: back(&r.steiner_dominating_set),
                ..r
            }
        }
    };
    print_report(&report, args.json);
    Ok(())
}

fn gamma_forest(input: &Path, json: bool) -> Result<(), Error> {
    let parents = parse_parent_file(&read(input)?)?;
    validate(&parents, Mode::Forest)?;
    let d = forest_domination(&parents);
    if json {
        let value = serde_json::json!({ "n": parents.len(), "dominating_set": d, "size": d.len() });
        println!("{value}");
    } else {
        println!("dominating set: {d}");
        println!("size: {}", d.len());
    }
    Ok(())
}

fn generate(args: &GenArgs) -> Result<(), Error> {
    let missing =
        |flag: &str| Error::InvalidParams(format!("--{flag} is required for this family"));
    let family = match args.family {
        FamilyArg::Prufer => Family::Prufer,
        FamilyArg::RandomParent => Family::RandomParent,
        FamilyArg::Path => Family::Path,
        FamilyArg::Star => Family::Star,
        FamilyArg::Binary => Family::Binary,
        FamilyArg::Spider => Family::Spider {
            legs: args.legs.ok_or_else(|| missing("legs"))?,
            leg_len: args.leglen.ok_or_else(|| missing("leglen"))?,
        },
        FamilyArg::Caterpillar => Family::Caterpillar {
            spine: args.spine.ok_or_else(|| missing("spine"))?,
            legs: if args.leg_pattern.is_empty() {
                vec![1]
            } else {
                args.leg_pattern.clone()
            },
        },
    };
    let n = match (args.n, family.implied_size()) {
        (Some(n), _) => n,
        (None, Some(n)) => n,
        (None, None) => return Err(missing("n")),
    };
    let parents = gen(&GeneratorSpec::new(family, n, args.seed))?;
    write_or_print(args.out.as_deref(), &parents.to_par_string())
}

fn run_verify(args: &VerifyArgs) -> Result<i32, Error> {
    let cert_dir = args.cert_dir.clone().unwrap_or_else(|| {
        let stem = args
            .report
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "report".into());
        args.report.with_file_name(format!("{stem}-certs"))
    });
    let config = VerifyConfig {
        mode: match args.mode {
            ModeArg::Exhaustive => VerifyMode::Exhaustive,
            ModeArg::Random => VerifyMode::Random,
        },
        max_n: args.max_n,
        count: args.count,
        seed: args.seed,
        prune: args.prune,
        cert_dir: Some(cert_dir.clone()),
    };
    let summary = verify(&config)?;
    let body = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    write_or_print(Some(&args.report), &body)?;
    println!(
        "{} instances: {} match, {} discrepancies, {} validity failures",
        summary.instances, summary.matches, summary.discrepancies, summary.validity_failures
    );
    for f in &summary.fixtures {
        println!("fixture {}: {:?}", f.name, f.outcome);
    }
    if !summary.certificates.is_empty() || summary.fixtures.iter().any(|f| f.certificate.is_some())
    {
        println!("certificates in {}", cert_dir.display());
    }
    Ok(summary.exit_code())
}

fn run_bench(args: &BenchArgs) -> Result<(), Error> {
    let records = bench(&args.sizes, args.reps, args.seed)?;
    write_csv(&records, &args.out)?;
    for r in &records {
        println!(
            "{:>9} {:<12} {:>8.2} ns/vertex",
            r.n,
            r.algorithm.to_string(),
            r.nanoseconds_per_vertex
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, Error> {
    match &cli.command {
        Command::Solve(args) => solve(args).map(|_| 0),
        Command::GammaForest { input, json } => gamma_forest(input, *json).map(|_| 0),
        Command::Gen(args) => generate(args).map(|_| 0),
        Command::Verify(args) => run_verify(args),
        Command::Bench(args) => run_bench(args).map(|_| 0),
    }
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
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
