use clap::{Parser, Subcommand};
use ditalg::bigraph::Ditalgebra;
use ditalg::ditmod::{endolength, enumerate_indecomposables, Module};
use ditalg::fdalg::{FdAlgebra, FdModule};
use ditalg::format::{ditalgebra_to_string, fdmodule_to_string, module_to_string, parse_ditalgebra, parse_fdalgebra, parse_fdmodules, parse_modules};
use ditalg::generic::{generic_census, spectrum_points};
use ditalg::qhbridge::{check_quasi_hereditary, delta_filtration, right_algebra, standard_modules};
use ditalg::reduction::driver::coverage;
use ditalg::reduction::reduce_to_minimal;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const ENUM_BUDGET: u128 = 1 << 24;

#[derive(Parser)]
#[command(name = "ditalg", version, about = "Ditalgebra reductions, quasi-hereditary checks and generic modules over Q and F_p")]
struct Cli {
    /// override the field of the input: q or fp:<p>
    #[arg(long, global = true)]
    field: Option<String>,
    #[arg(long, global = true, default_value_t = 3)]
    max_dim: usize,
    /// maximum number of reduction steps
    #[arg(long, global = true, default_value_t = 64)]
    budget: usize,
    /// run exhaustive cross-checks
    #[arg(long, global = true)]
    oracle: bool,
    #[arg(long, global = true)]
    trace_out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// structural predicates of a ditalgebra
    Check { path: PathBuf },
    /// reduce to a minimal ditalgebra
    Reduce { path: PathBuf },
    /// quasi-heredity of a finite-dimensional algebra
    Qh {
        algebra: PathBuf,
        /// standard modules; computed from the primitive idempotents when absent
        delta: Option<PathBuf>,
    },
    /// Δ'-filtrations of induced modules over the right algebra
    Filtration {
        path: PathBuf,
        #[arg(long)]
        module: Option<PathBuf>,
    },
    /// census of generic modules up to --max-dim
    Generics { path: PathBuf },
    /// indecomposables up to --max-dim
    Enumerate { path: PathBuf },
}

enum Fail {
    Parse(String),
    Run(String),
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail::Parse(format!("{}: {e}", path.display())))
}

fn load(cli: &Cli, path: &Path) -> Result<Ditalgebra, Fail> {
    let mut src = read(path)?;
    if let Some(f) = &cli.field {
        let body: Vec<&str> = src.lines().filter(|l| !l.trim_start().starts_with("field")).collect();
        src = format!("field {f}\n{}", body.join("\n"));
    }
    parse_ditalgebra(&src).map_err(|e| Fail::Parse(format!("{}: {e}", path.display())))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn one_based(v: &[usize]) -> String {
    format!("[{}]", v.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(", "))
}

fn cmd_check(cli: &Cli, path: &Path) -> Result<String, Fail> {
    let d = load(cli, path)?;
    let mut out = String::new();
    writeln!(out, "directed: {}", yes(d.check_directed())).unwrap();
    let tri = match &d.filtration {
        Some(f) if d.check_filtration(f) => "ok",
        Some(_) => "fails",
        None => "none given",
    };
    writeln!(out, "triangular witness: {tri}").unwrap();
    writeln!(out, "sources: {}", one_based(&d.sources())).unwrap();
    match d.check_stellar() {
        Some(c) => writeln!(out, "stellar: center {}", c + 1).unwrap(),
        None => writeln!(out, "stellar: no").unwrap(),
    }
    let dead: Vec<usize> = (0..d.points()).filter(|&p| d.ideal_membership(&d.idempotent(p)).unwrap_or(false)).collect();
    if dead.is_empty() {
        writeln!(out, "ideal: {} generators, no idempotent inside", d.ideal.len()).unwrap();
    } else {
        writeln!(out, "ideal: contains the idempotents of {}", one_based(&dead)).unwrap();
    }
    Ok(out)
}

fn cmd_reduce(cli: &Cli, path: &Path) -> Result<String, Fail> {
    let d = load(cli, path)?;
    let trace = reduce_to_minimal(&d, cli.max_dim, cli.budget).map_err(|e| Fail::Run(e.to_string()))?;
    let mut out = String::new();
    writeln!(out, "steps: {}", trace.steps.len()).unwrap();
    for (i, s) in trace.steps.iter().enumerate() {
        writeln!(out, "step {}: {} (points {} -> {}, factor {})", i + 1, serde_json::to_value(s.kind).unwrap().as_str().unwrap_or("?"), s.source.points(), s.target.points(), s.factor).unwrap();
    }
    writeln!(out, "endolength factor: {}", trace.factor()).unwrap();
    writeln!(out, "weights: {:?}", trace.weights).unwrap();
    writeln!(out, "terminal:").unwrap();
    out.push_str(&ditalgebra_to_string(trace.terminal()));
    if let Some(p) = &cli.trace_out {
        std::fs::write(p, trace.to_json()).map_err(|e| Fail::Run(format!("{}: {e}", p.display())))?;
        writeln!(out, "trace written to {}", p.display()).unwrap();
    }
    if cli.oracle {
        let c = coverage(&trace, cli.max_dim, cli.max_dim, ENUM_BUDGET).map_err(|e| Fail::Run(e.to_string()))?;
        writeln!(out, "coverage: {}/{}", c.covered, c.total).unwrap();
    }
    Ok(out)
}

fn cmd_qh(cli: &Cli, algebra: &Path, delta: Option<&Path>) -> Result<String, Fail> {
    let lam: FdAlgebra = parse_fdalgebra(&read(algebra)?).map_err(|e| Fail::Parse(format!("{}: {e}", algebra.display())))?;
    let fam: Vec<FdModule> = match delta {
        Some(p) => parse_fdmodules(&lam, &read(p)?).map_err(|e| Fail::Parse(format!("{}: {e}", p.display())))?,
        None => standard_modules(&lam, &lam.decompose().idempotents),
    };
    if fam.is_empty() {
        return Err(Fail::Parse("the Δ family is empty".into()));
    }
    let cert = check_quasi_hereditary(&lam, &fam).map_err(|e| Fail::Run(e.to_string()))?;
    let verdict = |b: bool| if b { "pass" } else { "FAIL" };
    let mut out = String::new();
    writeln!(out, "algebra dim {}, {} standard modules of dims {:?}", lam.dim, fam.len(), fam.iter().map(|m| m.dim).collect::<Vec<_>>()).unwrap();
    writeln!(out, "1 End(Δ_i) = k: {} (dims {:?})", verdict(cert.conditions[0]), cert.end_dims).unwrap();
    writeln!(out, "2 Hom(Δ_i, Δ_j) = 0 for i > j: {}", verdict(cert.conditions[1])).unwrap();
    writeln!(out, "3 Ext¹(Δ_i, Δ_j) = 0 for i ≥ j: {}", verdict(cert.conditions[2])).unwrap();
    writeln!(out, "4 regular module Δ-filtered: {}", verdict(cert.conditions[3])).unwrap();
    if let Some(w) = &cert.filtration {
        writeln!(out, "  layers: {}", one_based(&w.layers)).unwrap();
    }
    writeln!(out, "quasi-hereditary: {}", yes(cert.passed())).unwrap();
    if cli.oracle {
        for (i, m) in fam.iter().enumerate() {
            write!(out, "# Δ_{}\n{}", i + 1, fdmodule_to_string(m)).unwrap();
        }
    }
    Ok(out)
}

fn modules_for(cli: &Cli, d: &Ditalgebra, file: Option<&Path>) -> Result<Vec<Module>, Fail> {
    match file {
        Some(p) => parse_modules(d, &read(p)?).map_err(|e| Fail::Parse(format!("{}: {e}", p.display()))),
        None => enumerate_indecomposables(d, cli.max_dim, ENUM_BUDGET).map_err(|e| Fail::Run(e.to_string())),
    }
}

fn cmd_filtration(cli: &Cli, path: &Path, module: Option<&Path>) -> Result<String, Fail> {
    let d = load(cli, path)?;
    let ra = right_algebra(&d).map_err(|e| Fail::Run(e.to_string()))?;
    let dp = ra.standard_like();
    let mut out = String::new();
    writeln!(out, "dim Γ = {} (Ā: {}, equal: {})", ra.gamma.dim, ra.abar.alg.dim, yes(ra.equals_abar())).unwrap();
    writeln!(out, "Δ' dims: {:?}", dp.iter().map(|m| m.dim).collect::<Vec<_>>()).unwrap();
    for (k, m) in modules_for(cli, &d, module)?.iter().enumerate() {
        let ind = ra.induce(m);
        let w = delta_filtration(&dp, &ind).map_err(|e| Fail::Run(e.to_string()))?;
        let layers = match &w {
            Some(w) => one_based(&w.layers),
            None => "not filtered".into(),
        };
        write!(out, "module {} dims {:?}: induced dim {}, Δ' layers {}", k + 1, m.dims, ind.dim, layers).unwrap();
        if cli.oracle {
            let h = ra.functor_h(m);
            write!(out, ", Γ⊗M ≅ H(M): {}", yes(ind.is_isomorphic(&h).is_some())).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

fn cmd_generics(cli: &Cli, path: &Path) -> Result<String, Fail> {
    let d = load(cli, path)?;
    let census = generic_census(&d, cli.max_dim, cli.budget).map_err(|e| Fail::Run(e.to_string()))?;
    let mut out = String::new();
    writeln!(out, "rational points of the terminal algebra: {}", census.rational_points).unwrap();
    writeln!(out, "generic modules with endolength ≤ {}: {}", cli.max_dim, census.entries.len()).unwrap();
    for e in &census.entries {
        let r = &e.realization;
        writeln!(out, "point {}: rank {}, endolength {}, g = {}", r.point + 1, r.rank, e.endolength.length, r.g).unwrap();
        for l in spectrum_points(d.field, &r.g, 3) {
            let m = r.specialize(&l).map_err(|e| Fail::Run(e.to_string()))?;
            write!(out, "# λ = {l}\n{}", module_to_string(&d, &m)).unwrap();
        }
    }
    Ok(out)
}

fn cmd_enumerate(cli: &Cli, path: &Path) -> Result<String, Fail> {
    let d = load(cli, path)?;
    let mods = enumerate_indecomposables(&d, cli.max_dim, ENUM_BUDGET).map_err(|e| Fail::Run(e.to_string()))?;
    let mut out = String::new();
    writeln!(out, "# {} indecomposables of dimension ≤ {}", mods.len(), cli.max_dim).unwrap();
    for m in &mods {
        write!(out, "# endolength {}\n{}", endolength(&d, m), module_to_string(&d, m)).unwrap();
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Check { path } => cmd_check(&cli, path),
        Cmd::Reduce { path } => cmd_reduce(&cli, path),
        Cmd::Qh { algebra, delta } => cmd_qh(&cli, algebra, delta.as_deref()),
        Cmd::Filtration { path, module } => cmd_filtration(&cli, path, module.as_deref()),
        Cmd::Generics { path } => cmd_generics(&cli, path),
        Cmd::Enumerate { path } => cmd_enumerate(&cli, path),
    };
    match res {
        Ok(s) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Err(Fail::Parse(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Fail::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
