//! Command-line front end: tree analysis and theorem verification,
//! ensemble studies, exact characteristic polynomials, and DOT export.
//!
//! Exit codes: 0 success, 1 input error, 2 theorem-verification failure
//! (the report is still emitted).

use treelap_cli::{document, dot};

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num::traits::ToPrimitive;
use rayon::prelude::*;

use treelap::charpoly::{matching_polynomial, one_eigenspace_exact};
use treelap::spectral::Tolerances;
use treelap::tree::{parse_edge_list, random_ensemble, Tree};
use treelap::verify::{relative_zero_tol, verify_all, Analysis, VerificationReport};

#[derive(Parser)]
#[command(name = "treelap", version, about = "Minimum vertex covers and the normalized Laplacian spectrum on trees")]
struct Cli {
    /// Width of an eigenvalue cluster around a target value.
    #[arg(long, global = true, default_value_t = 1e-8)]
    cluster_tol: f64,

    /// Sign-graph zero threshold, relative to the sup norm of the vector.
    #[arg(long, global = true, default_value_t = 1e-7)]
    zero_tol: f64,

    /// Eigenpair residual bound.
    #[arg(long, global = true, default_value_t = 1e-9)]
    residual_tol: f64,

    /// Suppress the version banner line on text outputs.
    #[arg(long, global = true)]
    no_banner: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on one edge-list file; JSON document on stdout.
    Analyze {
        /// Edge-list file: one `u v` pair per line, `#` comments.
        input: PathBuf,
        /// Include the eigenvector matrix in the document.
        #[arg(long)]
        with_vectors: bool,
    },
    /// Generate seeded random trees and verify every theorem on each.
    Verify {
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        min_n: usize,
        #[arg(long, default_value_t = 24)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Separation-bound study over seeded random trees, as CSV.
    Bounds {
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        min_n: usize,
        #[arg(long, default_value_t = 24)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Export an eigenvector as DOT with size/color encoding.
    ExportDot {
        input: PathBuf,
        /// Eigenvector selector: an index, `one` (a 1-eigenspace basis
        /// vector), or `pre-one` (the largest eigenvalue below 1).
        #[arg(long)]
        vector: String,
    },
    /// Print the exact matching-expansion coefficients of one tree.
    Charpoly { input: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = Tolerances {
        cluster_tol: cli.cluster_tol,
        zero_tol_rel: cli.zero_tol,
        residual_tol: cli.residual_tol,
        ..Tolerances::default()
    };
    match run(cli.command, &tol, cli.no_banner) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn load_tree(path: &PathBuf) -> Result<Tree, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_edge_list(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn banner(no_banner: bool, prefix: &str) {
    if !no_banner {
        println!("{prefix} treelap {}", env!("CARGO_PKG_VERSION"));
    }
}

fn run(command: Command, tol: &Tolerances, no_banner: bool) -> Result<ExitCode, String> {
    match command {
        Command::Analyze { input, with_vectors } => {
            let tree = load_tree(&input)?;
            let analysis = Analysis::new(tree, tol).map_err(|e| e.to_string())?;
            let doc = document::build_document(&analysis, tol, with_vectors);
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("document serializes")
            );
            let passed = doc.verification["passed"].as_bool().unwrap_or(false);
            Ok(if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Verify {
            count,
            min_n,
            max_n,
            seed,
        } => {
            let trees = random_ensemble(count, min_n, max_n, seed)
                .map_err(|e| format!("invalid range: {e}"))?;
            let reports: Vec<(u64, Tree, VerificationReport)> = trees
                .into_par_iter()
                .map(|(tree_seed, t)| {
                    let report = Analysis::new(t.clone(), tol)
                        .map(|a| verify_all(&a, tol))
                        .expect("eigensolver converges on valid trees");
                    (tree_seed, t, report)
                })
                .collect();
            banner(no_banner, "#");
            let passed = reports.iter().filter(|(_, _, r)| r.passed).count();
            let failed = reports.len() - passed;
            let ambiguous = reports.iter().filter(|(_, _, r)| r.ambiguous).count();
            println!(
                "trees: {}  passed: {}  failed: {}  ambiguous: {}",
                reports.len(),
                passed,
                failed,
                ambiguous
            );
            if let Some((index, (tree_seed, t, report))) = reports
                .iter()
                .enumerate()
                .find(|(_, (_, _, r))| !r.passed)
            {
                let mut records = Vec::new();
                if !report.multiplicity.passed {
                    records.push("multiplicity");
                }
                if !report.vanishing.passed {
                    records.push("vanishing");
                }
                if !report.separation_bounds.passed {
                    records.push("separation_bounds");
                }
                if !report.interlacing.passed {
                    records.push("interlacing");
                }
                if !report.sign_transversal.passed {
                    records.push("sign_transversal");
                }
                if !report.cover_properties.passed() {
                    records.push("cover_properties");
                }
                println!("first failure: index {index}, seed {tree_seed}, n = {}", t.n());
                println!("  edges: {:?}", t.edges());
                println!("  failed records: {}", records.join(", "));
                println!("  notes: {:?}", report.sign_transversal.notes);
            }
            Ok(if failed > 0 {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Bounds {
            count,
            min_n,
            max_n,
            seed,
        } => {
            let trees = random_ensemble(count, min_n, max_n, seed)
                .map_err(|e| format!("invalid range: {e}"))?;
            let rows: Vec<String> = trees
                .into_par_iter()
                .map(|(_, t)| {
                    let a = Analysis::new(t, tol).expect("eigensolver converges on valid trees");
                    let s = &a.separation;
                    format!(
                        "{},{},{:.12},{:.12},{:.12},{},{}",
                        a.tree.n(),
                        a.cover.cover_size,
                        s.lambda_bar,
                        s.bound_volume,
                        s.bound_quotient,
                        u8::from((s.bound_volume - s.lambda_bar).abs() <= tol.tight_tol),
                        u8::from((s.bound_quotient - s.lambda_bar).abs() <= tol.tight_tol),
                    )
                })
                .collect();
            banner(no_banner, "#");
            println!("n,cover_size,lambda_bar,bound_volume,bound_quotient,tight_volume,tight_quotient");
            for row in rows {
                println!("{row}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportDot { input, vector } => {
            let tree = load_tree(&input)?;
            let analysis = Analysis::new(tree, tol).map_err(|e| e.to_string())?;
            let f: Vec<f64> = match vector.as_str() {
                "one" => {
                    let kernel =
                        one_eigenspace_exact(&analysis.tree, &analysis.cover.witness_cover)
                            .map_err(|e| e.to_string())?;
                    if kernel.dimension == 0 {
                        return Err("eigenvalue 1 has multiplicity 0 on this tree".into());
                    }
                    kernel.basis[0]
                        .iter()
                        .map(|x| x.to_f64().expect("kernel entry fits in f64"))
                        .collect()
                }
                "pre-one" => analysis
                    .spectrum
                    .vector(analysis.separation.lambda_p_index)
                    .to_vec(),
                index => {
                    let i: usize = index
                        .parse()
                        .map_err(|_| format!("invalid selector `{index}`"))?;
                    if i >= analysis.tree.n() {
                        return Err(format!(
                            "eigenvector index {i} out of range for n = {}",
                            analysis.tree.n()
                        ));
                    }
                    analysis.spectrum.vector(i).to_vec()
                }
            };
            banner(no_banner, "//");
            print!(
                "{}",
                dot::render(&analysis.tree, &f, relative_zero_tol(&f, tol.zero_tol_rel))
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Charpoly { input } => {
            let tree = load_tree(&input)?;
            let poly = matching_polynomial(&tree);
            banner(no_banner, "#");
            println!("n = {}", tree.n());
            for (k, c) in poly.coeffs().iter().enumerate() {
                println!("c_{k} = {c}");
            }
            println!("P = {}   (y = x - 1)", poly_in_y(&poly));
            println!(
                "P = (x-1)^{} * R(x);  mult(1) = {}",
                poly.multiplicity_of_one(),
                poly.multiplicity_of_one()
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Renders `sum_k (-1)^k c_k y^(n-2k)` as a readable polynomial in `y`.
fn poly_in_y(poly: &treelap::charpoly::MatchingPolynomial) -> String {
    let mut out = String::new();
    for (k, c) in poly.coeffs().iter().enumerate() {
        let exp = poly.n() - 2 * k;
        let negative = k % 2 == 1;
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let one = c == &num::BigRational::from_integer(1.into());
        let power = match exp {
            0 => String::new(),
            1 => "y".into(),
            e => format!("y^{e}"),
        };
        match (one, power.is_empty()) {
            (true, true) => out.push('1'),
            (true, false) => out.push_str(&power),
            (false, true) => out.push_str(&c.to_string()),
            (false, false) => out.push_str(&format!("{c}*{power}")),
        }
    }
    out
}
