use std::path::PathBuf;
use std::process::ExitCode;
use std::thread;

use clap::{Parser, Subcommand};
use srgeom::catalog::{standard_entries, Entry};
use srgeom::coordfield::KillingMode;
use srgeom_cli::analyze::{
    analyze, render_json, render_text, AnalysisReport, AnalyzeError, AnalyzeOptions,
};
use srgeom_cli::manifest::{catalog_manifest, emit_manifest, parse_manifest, GeometryManifest};

#[derive(Parser)]
#[command(
    name = "srgeom",
    version,
    about = "Exact invariants, isometry bounds and Killing fields of sub-Riemannian geometries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a manifest file or a catalog geometry.
    Analyze(AnalyzeArgs),
    /// Print the manifest of a catalog geometry.
    Catalog {
        /// heisenberg(n), engel, so(n), sl(n), rototranslation or carnot(k).
        name: String,
    },
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    /// Path to a JSON manifest.
    #[arg(conflicts_with_all = ["catalog", "all_catalog"], required_unless_present_any = ["catalog", "all_catalog"])]
    manifest: Option<PathBuf>,
    /// A catalog geometry such as heisenberg(2) or so(4).
    #[arg(long, conflicts_with = "all_catalog")]
    catalog: Option<String>,
    /// Analyze every standard catalog geometry.
    #[arg(long)]
    all_catalog: bool,
    /// Solve the Killing equations even without a solver degree in the manifest.
    #[arg(long)]
    solve_killing: bool,
    /// Polynomial degree of the Killing ansatz.
    #[arg(long)]
    degree: Option<u32>,
    /// weak, strong or regular.
    #[arg(long, default_value = "strong", value_parser = parse_mode)]
    mode: KillingMode,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Check the pointwise Killing-field identities and metric-extension independence.
    #[arg(long)]
    check_identities: bool,
    /// Seed for sample points and random vertical metrics.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_mode(s: &str) -> Result<KillingMode, String> {
    KillingMode::parse(s)
        .ok_or_else(|| format!("unknown mode {s:?}; expected weak, strong or regular"))
}

const VALIDATION: u8 = 1;
const PARSE: u8 = 2;
const INTERNAL: u8 = 3;

fn failure(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn analysis_failure(e: AnalyzeError) -> ExitCode {
    match e {
        AnalyzeError::Validation(_) => failure(VALIDATION, e),
        AnalyzeError::Internal(_) => failure(INTERNAL, e),
    }
}

fn load(args: &AnalyzeArgs) -> Result<GeometryManifest, ExitCode> {
    if let Some(name) = &args.catalog {
        let entry = Entry::parse(name).map_err(|e| failure(PARSE, e))?;
        return Ok(catalog_manifest(&entry));
    }
    let path = args.manifest.as_ref().expect("clap requires a manifest");
    let text = std::fs::read_to_string(path)
        .map_err(|e| failure(PARSE, format!("{}: {e}", path.display())))?;
    parse_manifest(&text).map_err(|e| failure(PARSE, format!("{}: {e}", path.display())))
}

fn print(reports: &[AnalysisReport], json: bool) {
    if json {
        if let [one] = reports {
            print!("{}", render_json(one));
        } else {
            let mut s = serde_json::to_string_pretty(reports).expect("report serializes");
            s.push('\n');
            print!("{s}");
        }
    } else {
        let texts: Vec<String> = reports.iter().map(render_text).collect();
        print!("{}", texts.join("\n"));
    }
}

fn run_analyze(args: AnalyzeArgs) -> ExitCode {
    let options = AnalyzeOptions {
        solve_degree: args.degree,
        solve: args.solve_killing,
        mode: args.mode,
        check_identities: args.check_identities,
        seed: args.seed,
    };
    if args.all_catalog {
        let manifests: Vec<GeometryManifest> =
            standard_entries().iter().map(catalog_manifest).collect();
        let results: Vec<Result<AnalysisReport, AnalyzeError>> = thread::scope(|s| {
            let handles: Vec<_> = manifests
                .iter()
                .map(|m| s.spawn(|| analyze(m, &options)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("analysis thread panicked"))
                .collect()
        });
        let mut reports = Vec::new();
        for r in results {
            match r {
                Ok(report) => reports.push(report),
                Err(e) => return analysis_failure(e),
            }
        }
        print(&reports, args.json);
        return ExitCode::SUCCESS;
    }
    let manifest = match load(&args) {
        Ok(m) => m,
        Err(code) => return code,
    };
    match analyze(&manifest, &options) {
        Ok(report) => {
            print(&[report], args.json);
            ExitCode::SUCCESS
        }
        Err(e) => analysis_failure(e),
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Analyze(args) => run_analyze(args),
        Command::Catalog { name } => match Entry::parse(&name) {
            Ok(entry) => {
                print!("{}", emit_manifest(&catalog_manifest(&entry)));
                ExitCode::SUCCESS
            }
            Err(e) => failure(PARSE, e),
        },
    }
}
