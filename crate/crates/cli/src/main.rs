use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use affine_hecke::calibration::{build_graph, tableaux};
use affine_hecke::error::Error;
use affine_hecke::hecke::{principal_series, principal_series_analysis, HeckeAlgebra};
use affine_hecke::io::{
    parse_rational_list, parse_root_set, serialize, GraphExport, PrincipalExport, RootsExport, Schema,
};
use affine_hecke::linalg::Matrix;
use affine_hecke::relations::verify_defining_relations;
use affine_hecke::roots::{CartanKind, Family, RootSystem};
use affine_hecke::scalar::FieldElem;
use affine_hecke::skew::{build_skew_module, classify_calibrated, g2_block, skew_check, SkewModule};
use affine_hecke::suite::{run_sweep, SweepConfig};
use affine_hecke::torus::{j_label, real_weight, Weight};
use affine_hecke::weyl::{default_cap, word_label};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(name = "hecke", version, about = "Calibrated representations of affine Hecke algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cartan matrix and positive roots.
    Roots(TypeArgs),
    /// The calibration graph and its components.
    Graph {
        #[command(flatten)]
        weight: WeightArgs,
        /// Also write the graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Placed shapes, each marked skew or not.
    Shapes(WeightArgs),
    /// Standard tableaux of one shape, or of every shape.
    Tableaux {
        #[command(flatten)]
        weight: WeightArgs,
        /// Root set such as `a1,a1+a2`; empty string for the empty set.
        #[arg(long = "J")]
        j: Option<String>,
    },
    /// Build and verify a module.
    Module(ModuleArgs),
    /// Run a sweep and report every failure.
    Verify {
        /// TOML sweep configuration; defaults to the rank-2 sweep.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Corrupt one module in every N-th case.
        #[arg(long, value_name = "N")]
        corrupt: Option<usize>,
        /// Write the run report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct TypeArgs {
    #[arg(long = "type", value_name = "A|B|C|D|G")]
    family: char,
    #[arg(long)]
    rank: usize,
}

#[derive(Args)]
struct WeightArgs {
    #[command(flatten)]
    kind: TypeArgs,
    /// Exponents `c` with `t(X^{ω_i}) = q^{2c_i}`, e.g. `2/3,1/3`.
    #[arg(long, allow_hyphen_values = true)]
    gamma: String,
}

#[derive(Args)]
struct ModuleArgs {
    #[arg(long = "type", value_name = "A|B|C|D|G")]
    family: Option<char>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// Root set of the placed shape.
    #[arg(long = "J")]
    j: Option<String>,
    /// Build the principal series instead.
    #[arg(long, conflicts_with_all = ["j", "case_g2_demo"])]
    principal: bool,
    /// The two-dimensional G2 block with its closed forms.
    #[arg(long)]
    case_g2_demo: bool,
    /// Build a non-skew shape anyway and report which relations fail.
    #[arg(long)]
    force_check: bool,
    /// Write the module JSON here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure kinds mapped onto exit codes.
enum Failure {
    Check(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotSkew(_) | Error::RelationFailure(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Roots(a) => cmd_roots(&a),
        Command::Graph { weight, dot } => cmd_graph(&weight, dot),
        Command::Shapes(w) => cmd_shapes(&w),
        Command::Tableaux { weight, j } => cmd_tableaux(&weight, j.as_deref()),
        Command::Module(m) => cmd_module(&m),
        Command::Verify { config, corrupt, out } => cmd_verify(config, corrupt, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn root_system(a: &TypeArgs) -> Result<RootSystem, Failure> {
    let family = Family::from_char(a.family.to_ascii_uppercase())
        .ok_or_else(|| Failure::Usage(format!("unknown type {}", a.family)))?;
    Ok(RootSystem::new(CartanKind::new(family, a.rank)?)?)
}

fn weight(w: &WeightArgs) -> Result<(RootSystem, Weight), Failure> {
    let rs = root_system(&w.kind)?;
    let t = real_weight(&rs, &parse_rational_list(&w.gamma)?)?;
    Ok((rs, t))
}

fn emit<T: Schema>(x: &T, out: Option<&PathBuf>) -> CmdResult {
    let s = serialize(x)?;
    match out {
        Some(p) => std::fs::write(p, s + "\n").map_err(|e| Failure::Usage(e.to_string())),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{s}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Usage(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn cmd_roots(a: &TypeArgs) -> CmdResult {
    let rs = root_system(a)?;
    eprintln!("{}: {} positive roots", rs.kind(), rs.num_positive());
    emit(&RootsExport::new(&rs), None)
}

fn cmd_graph(w: &WeightArgs, dot: Option<PathBuf>) -> CmdResult {
    let (rs, t) = weight(w)?;
    let g = build_graph(&rs, &t, default_cap())?;
    let e = GraphExport::new(&rs, &g);
    eprintln!(
        "{} vertices, {} edges, {} components",
        e.vertices.len(),
        e.edges.len(),
        e.components.len()
    );
    if let Some(p) = dot {
        std::fs::write(&p, g.to_dot(&rs)).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    emit(&e, None)
}

#[derive(Clone, Serialize, Deserialize)]
struct ShapeEntry {
    #[serde(rename = "J")]
    j: Vec<String>,
    skew: bool,
    dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    failures: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    tableaux: Vec<Vec<usize>>,
}

#[derive(Clone, Serialize, Deserialize)]
struct ShapeList(Vec<ShapeEntry>);

impl Schema for ShapeList {
    const KIND: &'static str = "shapes";
    type Repr = Vec<ShapeEntry>;

    fn to_repr(&self) -> Vec<ShapeEntry> {
        self.0.clone()
    }

    fn from_repr(r: Vec<ShapeEntry>) -> affine_hecke::Result<Self> {
        Ok(ShapeList(r))
    }
}

fn labels(rs: &RootSystem, j: &BTreeSet<usize>) -> Vec<String> {
    j.iter().map(|&k| rs.root_label(k)).collect()
}

fn cmd_shapes(w: &WeightArgs) -> CmdResult {
    let (rs, t) = weight(w)?;
    let shapes = classify_calibrated(&rs, &t, default_cap())?;
    let skew = shapes.iter().filter(|s| s.skew).count();
    eprintln!("{} shapes, {} marked skew", shapes.len(), skew);
    for s in &shapes {
        eprintln!(
            "  {} dim {} {}",
            j_label(&rs, &s.shape.j),
            s.dim,
            if s.skew { "skew" } else { "not skew" }
        );
    }
    let list = shapes
        .iter()
        .map(|s| ShapeEntry {
            j: labels(&rs, &s.shape.j),
            skew: s.skew,
            dim: s.dim,
            failures: s.failures.clone(),
            tableaux: Vec::new(),
        })
        .collect();
    emit(&ShapeList(list), None)
}

fn one_based(w: &[usize]) -> Vec<usize> {
    w.iter().map(|i| i + 1).collect()
}

fn cmd_tableaux(w: &WeightArgs, j: Option<&str>) -> CmdResult {
    let (rs, t) = weight(w)?;
    let cap = default_cap();
    let js: Vec<BTreeSet<usize>> = match j {
        Some(s) => vec![parse_root_set(&rs, s)?],
        None => classify_calibrated(&rs, &t, cap)?.into_iter().map(|s| s.shape.j).collect(),
    };
    let mut list = Vec::new();
    for j in js {
        let check = skew_check(&rs, &t, &j, cap)?;
        let tab = tableaux(&rs, &t, &j, cap)?;
        let words: Vec<Vec<usize>> = tab.elements.iter().map(|e| e.reduced_word(&rs)).collect();
        eprintln!(
            "{}: {}",
            j_label(&rs, &j),
            words.iter().map(|w| word_label(w)).collect::<Vec<_>>().join(" ")
        );
        list.push(ShapeEntry {
            j: labels(&rs, &j),
            skew: check.is_skew(),
            dim: words.len(),
            failures: check.failures,
            tableaux: words.iter().map(|w| one_based(w)).collect(),
        });
    }
    emit(&ShapeList(list), None)
}

fn show_matrix(name: &str, m: &Matrix<FieldElem>) -> String {
    let mut s = format!("{name} =\n");
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "  [ {} ]", row.join(", "));
    }
    s
}

fn eigenvalue_lines(m: &SkewModule) -> String {
    let mut s = String::new();
    for (i, t) in m.rep.t.iter().enumerate() {
        if t.is_upper_triangular() {
            let mut seen: Vec<FieldElem> = Vec::new();
            for x in t.diag() {
                if !seen.contains(&x) {
                    seen.push(x);
                }
            }
            let vals: Vec<String> = seen.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "T{} eigenvalues: {}", i + 1, vals.join(", "));
        }
    }
    s
}

/// Prints to standard output when the JSON goes to a file, otherwise to
/// standard error.
fn say(to_file: bool, text: &str) {
    if to_file {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
}

fn cmd_module(a: &ModuleArgs) -> CmdResult {
    let to_file = a.out.is_some();
    let cap = default_cap();
    if a.case_g2_demo {
        if a.family.is_some_and(|f| f.to_ascii_uppercase() != 'G') || a.rank.is_some_and(|r| r != 2) {
            return Err(Failure::Usage("--case-g2-demo needs --type G --rank 2".into()));
        }
        let b = g2_block(cap)?;
        let mut text = String::from("G2, c = (0, 1), J = {}: block on v_1, v_s2 (index 2 is long)\n");
        text += &show_matrix("T_long", &b.t_long);
        text += &show_matrix("T_short", &b.t_short);
        text += &show_matrix("X^alpha_long", &b.x_long);
        text += &show_matrix("X^alpha_short", &b.x_short);
        let cmp = b.compare();
        let _ = writeln!(text, "closed forms match: {}", cmp.all_passed());
        text += &cmp.failures().iter().map(|c| format!("{c}\n")).collect::<String>();
        text += &b.module.report.to_string();
        say(to_file, &text);
        emit(&b.module, a.out.as_ref())?;
        return report_status(b.module.report.all_passed() && cmp.all_passed());
    }
    let kind = TypeArgs {
        family: a.family.ok_or_else(|| Failure::Usage("--type is required".into()))?,
        rank: a.rank.ok_or_else(|| Failure::Usage("--rank is required".into()))?,
    };
    let w = WeightArgs {
        kind,
        gamma: a.gamma.clone().ok_or_else(|| Failure::Usage("--gamma is required".into()))?,
    };
    let (rs, t) = weight(&w)?;
    if a.principal {
        let h = HeckeAlgebra::new(&rs, cap)?;
        let m = principal_series(&h, &t)?;
        let analysis = principal_series_analysis(&h, &m)?;
        let report = verify_defining_relations(&rs, &m);
        let text = format!(
            "principal series at {}: dim {}, calibrated {}, {} weight spaces\n{}",
            t.label(),
            m.dim(),
            analysis.calibrated,
            analysis.spaces.len(),
            report
        );
        say(to_file, &text);
        emit(&PrincipalExport::new(&rs, &t, &m, &analysis, &report), a.out.as_ref())?;
        return report_status(report.all_passed());
    }
    let j = parse_root_set(&rs, a.j.as_deref().unwrap_or(""))?;
    let m = build_skew_module(&rs, &t, &j, cap, a.force_check)?;
    let mut text = format!("shape {} at {}: dim {}\n", j_label(&rs, &j), t.label(), m.dim());
    if !m.is_skew() {
        let _ = writeln!(text, "not a placed skew shape: {}", m.skew_failures.join("; "));
    }
    text += &eigenvalue_lines(&m);
    text += &m.report.to_string();
    say(to_file, &text);
    emit(&m, a.out.as_ref())?;
    report_status(m.report.all_passed())
}

fn report_status(ok: bool) -> CmdResult {
    if ok {
        Ok(())
    } else {
        Err(Failure::Check("relation checks failed".into()))
    }
}

fn cmd_verify(config: Option<PathBuf>, corrupt: Option<usize>, out: Option<PathBuf>) -> CmdResult {
    let mut cfg = match config {
        Some(p) => {
            let s = std::fs::read_to_string(&p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            SweepConfig::from_toml(&s)?
        }
        None => SweepConfig::default(),
    };
    if corrupt.is_some() {
        cfg.corrupt_every = corrupt;
    }
    cfg.validate()?;
    let report = run_sweep(&cfg)?;
    for f in report.failures() {
        let input = f.input.as_ref().map(|i| serde_json::to_string(i).unwrap_or_default());
        println!(
            "FAIL case {} {} c=({}) {}",
            f.id,
            f.kind,
            f.gamma.join(","),
            input.unwrap_or_default()
        );
        if let Some(e) = &f.error {
            println!("  error: {e}");
        }
        if !f.partition_agrees {
            println!("  component partition differs from grouping by J");
        }
        for s in f.shapes.iter().filter(|s| !s.passed) {
            println!(
                "  shape {}: dim {:?} of {}, failed checks [{}], irreducible {:?}{}",
                s.j,
                s.dim,
                s.tableaux,
                s.failed_checks.join(", "),
                s.irreducible,
                if s.corrupted { ", corrupted" } else { "" }
            );
        }
    }
    let sm = &report.summary;
    println!(
        "{} cases, {} shapes, {} skew, {} modules built, {} failed, {} ms",
        sm.cases, sm.shapes, sm.skew_shapes, sm.modules_built, sm.failed_cases, report.millis
    );
    if !sm.injected.is_empty() {
        println!(
            "injected {}, detected {}, exact match {}",
            sm.injected.len(),
            sm.failed_cases,
            report.failures_match_injected()
        );
    }
    if let Some(p) = out {
        emit(&report, Some(&p))?;
    }
    report_status(report.passed())
}
