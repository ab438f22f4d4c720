use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use diluted_spectra::generating::{fm_model, hat_coefficients, named_series, DSource, FactorialMomentModel, ModelParams};
use diluted_spectra::graphs::{
    self, compare_report, empirical_moments, CompareConfig, Figure, GraphModel, DEFAULT_DENSE_LIMIT,
};
use diluted_spectra::measures::{
    density_eval, dilate, form_moment_exact, quadrature_moment, recover_density, stieltjes_eval, DensityForm, Sign,
    Transform,
};
use diluted_spectra::verify::{run_all, VerifyConfig, DEFAULT_SEED};
use diluted_spectra::walks::{
    self, census, loop_expectation_series, moment_polynomial, oracle_for, recursion_eval, recursion_series,
    OneOneSite, Transcription, DEFAULT_K_MAX,
};
use diluted_spectra::{Error, Exec, Rational, Result};
use num_complex::Complex64;
use serde_json::{json, Value};

mod svg;

#[derive(Parser)]
#[command(name = "diluted-spectra", version, about = "Spectral expansions of diluted random graphs")]
struct Cli {
    /// Largest walk half-length the enumerator accepts.
    #[arg(long, global = true, default_value_t = DEFAULT_K_MAX)]
    k_max: usize,
    /// Run replicates and enumeration on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of a named generating function, or a coefficient table.
    Series(SeriesArgs),
    /// Walk census for one half-length.
    Oracle(OracleArgs),
    /// Evaluate a loop-count recursion next to its enumeration.
    Recursion(RecursionArgs),
    /// Evaluate a density, its exact moment or a quadrature moment.
    Density(DensityArgs),
    /// Evaluate a Stieltjes transform off the cut, or invert it on the cut.
    Stieltjes(StieltjesArgs),
    /// Spectra of random graphs and their empirical moments.
    Simulate(SimulateArgs),
    /// Histogram of simulated spectra against a limiting density.
    Compare(CompareArgs),
    /// Run the acceptance suite and write a JSON report.
    Report(ReportArgs),
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long)]
    name: Option<String>,
    /// Print `k,value` rows for b_hat, d_hat or d instead of a series.
    #[arg(long, conflicts_with = "name")]
    table: Option<String>,
    #[arg(long, default_value_t = 32)]
    order: usize,
    #[arg(long, default_value = "paper")]
    d_source: DSource,
    /// Model supplying F for B0 and B0_tilde.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "poisson")]
    model: String,
    /// Also evaluate the exact moment at this mean degree.
    #[arg(long)]
    c: Option<Rational>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RecursionArgs {
    #[arg(long)]
    eq: u32,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "poisson")]
    model: String,
    /// Without `c`, the recursion is expanded in powers of 1/c.
    #[arg(long)]
    c: Option<Rational>,
    #[arg(long, default_value = "printed", value_parser = ["printed", "consistent"])]
    transcription: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DensityArgs {
    #[arg(long)]
    name: String,
    #[arg(long, allow_hyphen_values = true)]
    at: Option<f64>,
    /// Exact moment of order 2k.
    #[arg(long)]
    moment: Option<usize>,
    /// Quadrature moment of order 2k.
    #[arg(long)]
    quadrature: Option<usize>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Degree for kesten_mckay.
    #[arg(long)]
    c: Option<Rational>,
    /// Dilation factor.
    #[arg(long)]
    dilate: Option<Rational>,
    #[arg(long, default_value = "positive", value_parser = ["positive", "printed"])]
    sign: String,
}

#[derive(Args)]
struct StieltjesArgs {
    #[arg(long)]
    name: Transform,
    /// Complex point `re,im` off the cut.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Real point on the cut, recovered with offset `eps`.
    #[arg(long, allow_hyphen_values = true)]
    at: Option<f64>,
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long, default_value = "erdos_renyi")]
    model: GraphModel,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    c: Rational,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_DENSE_LIMIT)]
    dense_limit: usize,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value_t = 8)]
    kmax: usize,
    /// Write all eigenvalues as CSV (`replicate,index,eigenvalue`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    figure: Figure,
    #[command(flatten)]
    graph: GraphArgs,
    /// Number of bins on [-3.5, 3.5]; the default gives width 0.05.
    #[arg(long)]
    bins: Option<usize>,
    /// Write `<out>.csv` and `<out>.json` instead of printing.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write an SVG overlay of the two columns.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Shrink the Monte Carlo criteria to seconds.
    #[arg(long)]
    quick: bool,
    #[arg(long, default_value_t = 5000)]
    dense_limit: usize,
    /// Report path; figure CSVs go next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Resource(format!("writing {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(v: &Value, out: Option<&Path>) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    emit(&s, out)
}

fn model(name: &str) -> Result<FactorialMomentModel> {
    fm_model(name, ModelParams::default())
}

fn run(cli: Cli) -> Result<()> {
    walks::set_k_max(cli.k_max);
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match cli.command {
        Command::Series(a) => series(a),
        Command::Oracle(a) => oracle(a),
        Command::Recursion(a) => recursion(a),
        Command::Density(a) => density(a),
        Command::Stieltjes(a) => stieltjes(a),
        Command::Simulate(a) => simulate(a, exec),
        Command::Compare(a) => compare(a, exec),
        Command::Report(a) => report(a, exec),
    }
}

fn series(a: SeriesArgs) -> Result<()> {
    if let Some(table) = a.table {
        let (bh, dh) = hat_coefficients(a.order, a.d_source)?;
        let t = match table.as_str() {
            "b_hat" => bh,
            "d_hat" => dh,
            "d" => diluted_spectra::generating::CoefficientTable {
                kind: diluted_spectra::generating::TableKind::D,
                values: diluted_spectra::generating::d_coefficients(a.order, a.d_source)?,
            },
            other => return Err(Error::Usage(format!("unknown table {other:?}; known: b_hat, d_hat, d"))),
        };
        return emit(&t.to_csv(), a.out.as_deref());
    }
    let name = a.name.ok_or_else(|| Error::Usage("series needs --name or --table".into()))?;
    let f = match a.model.as_deref() {
        Some(m) => model(m)?.f_series(a.order),
        None => None,
    };
    let s = named_series(&name, a.order, f.as_ref())?;
    emit(&format!("{}\n", s.to_csv_row()), a.out.as_deref())
}

fn oracle(a: OracleArgs) -> Result<()> {
    let poly = moment_polynomial(a.k)?;
    let cen = census(a.k)?;
    let counts: serde_json::Map<String, Value> =
        cen.alpha_counts().iter().rev().map(|(al, n)| (format!("alpha={al}"), json!(n))).collect();
    let types: serde_json::Map<String, Value> = walks::LoopType::ALL
        .iter()
        .map(|t| (format!("{t:?}"), json!(cen.type_counts()[t.index()])))
        .collect();
    let sites: serde_json::Map<String, Value> = OneOneSite::ALL
        .iter()
        .map(|s| (format!("{s:?}"), json!(cen.one_one_site_counts()[s.index()])))
        .collect();
    let mut v = json!({
        "k": a.k,
        "histories": cen.histories,
        "counts": counts,
        "moment_polynomial_in_inverse_c": poly.coefficients().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "loop_types": types,
        "one_one_sites": sites,
    });
    if let Some(c) = a.c {
        let m = model(&a.model)?;
        let exact = walks::exact_moment(a.k, &m, &c)?;
        v["model"] = json!(m.name());
        v["c"] = json!(c.to_string());
        v["exact_moment"] = json!(exact.to_string());
    }
    emit_json(&v, a.out.as_deref())
}

fn recursion(a: RecursionArgs) -> Result<()> {
    let mode = match a.transcription.as_str() {
        "consistent" => Transcription::Consistent,
        _ => Transcription::Printed,
    };
    let m = model(&a.model)?;
    let (sel, law) = oracle_for(a.eq)?;
    let mut v = json!({"eq": a.eq, "k": a.k, "model": m.name(), "transcription": a.transcription});
    match a.c {
        Some(c) => {
            let rec = recursion_eval(a.eq, a.k, &m, &c, mode)?;
            let ora = walks::loop_expectation(a.k, sel, law, &m, &c)?;
            v["c"] = json!(c.to_string());
            v["recursion"] = json!(rec.to_string());
            v["enumeration"] = json!(ora.to_string());
            v["agree"] = json!(rec == ora);
        }
        None => {
            let order = a.k + 1;
            let rec = recursion_series(a.eq, a.k, &m, order, mode)?;
            let ora = loop_expectation_series(a.k, sel, law, &m, order)?;
            let coeffs = |s: &diluted_spectra::Series| s.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>();
            v["recursion_in_inverse_c"] = json!(coeffs(&rec));
            v["enumeration_in_inverse_c"] = json!(coeffs(&ora));
            v["agree"] = json!(rec == ora);
            if a.eq == 14 {
                let terms = walks::one_one_terms_series(a.k, &m, order, mode)?;
                v["terms_in_inverse_c"] = json!(terms.iter().map(coeffs).collect::<Vec<_>>());
            }
        }
    }
    emit_json(&v, a.out.as_deref())
}

fn density(a: DensityArgs) -> Result<()> {
    let mut form = match a.name.as_str() {
        "sigma_hat1" | "sigma_hat2" if a.sign == "printed" => {
            if a.name == "sigma_hat1" {
                DensityForm::sigma_hat1(Sign::Printed)
            } else {
                DensityForm::sigma_hat2(Sign::Printed)
            }
        }
        "kesten_mckay_normalized" => {
            DensityForm::kesten_mckay(a.c.clone().ok_or_else(|| Error::Usage("kesten_mckay needs --c".into()))?, true)?
        }
        name => DensityForm::by_name(name, a.c.as_ref())?,
    };
    if let Some(l) = &a.dilate {
        form = dilate(&form, l)?;
    }
    match (a.at, a.moment, a.quadrature) {
        (Some(x), None, None) => println!("{}", density_eval(&form, x)?),
        (None, Some(k), None) => println!("{}", form_moment_exact(&form, k)?),
        (None, None, Some(k)) => println!("{}", quadrature_moment(&form, k, a.tol)?),
        _ => return Err(Error::Usage("density needs exactly one of --at, --moment, --quadrature".into())),
    }
    Ok(())
}

fn stieltjes(a: StieltjesArgs) -> Result<()> {
    match (a.z, a.at) {
        (Some(z), None) => {
            let (re, im) = z
                .split_once(',')
                .and_then(|(r, i)| Some((f64::from_str(r.trim()).ok()?, f64::from_str(i.trim()).ok()?)))
                .ok_or_else(|| Error::Usage(format!("--z expects re,im; got {z:?}")))?;
            let g = stieltjes_eval(a.name, Complex64::new(re, im))?;
            println!("{},{}", g.re, g.im);
        }
        (None, Some(x)) => println!("{}", recover_density(a.name, x, a.eps)?),
        _ => return Err(Error::Usage("stieltjes needs exactly one of --z, --at".into())),
    }
    Ok(())
}

fn simulate(a: SimulateArgs, exec: Exec) -> Result<()> {
    let g = &a.graph;
    let start = std::time::Instant::now();
    let spectra = graphs::simulate(g.model, g.n, &g.c, g.reps, g.seed, g.dense_limit, exec)?;
    let per: Vec<Vec<f64>> = spectra.iter().map(|s| empirical_moments(s, a.kmax)).collect::<Result<_>>()?;
    if let Some(path) = &a.out {
        let mut csv = String::from("replicate,index,eigenvalue\n");
        for (r, s) in spectra.iter().enumerate() {
            for (i, x) in s.iter().enumerate() {
                csv.push_str(&format!("{r},{i},{x:.15e}\n"));
            }
        }
        emit(&csv, Some(path))?;
    }
    let v = json!({
        "model": g.model.to_string(), "n": g.n, "c": g.c.to_string(), "reps": g.reps, "seed": g.seed,
        "moments": graphs::mean_moments(&spectra, a.kmax)?,
        "replicate_moments": per,
        "runtime_ms": start.elapsed().as_millis(),
    });
    emit_json(&v, None)
}

fn compare(a: CompareArgs, exec: Exec) -> Result<()> {
    let g = &a.graph;
    let cfg = CompareConfig {
        figure: a.figure,
        model: g.model,
        n: g.n,
        c: g.c.clone(),
        reps: g.reps,
        seed: g.seed,
        bins: a.bins,
        dense_limit: g.dense_limit,
        exec,
    };
    let rep = compare_report(&cfg)?;
    if let Some(path) = &a.svg {
        emit(&svg::overlay(&rep), Some(path))?;
    }
    let summary = serde_json::to_value(&rep.summary).expect("serializable");
    match &a.out {
        Some(prefix) => {
            emit(&rep.to_csv(), Some(&prefix.with_extension("csv")))?;
            emit_json(&summary, Some(&prefix.with_extension("json")))
        }
        None => {
            print!("{}", rep.to_csv());
            eprintln!("{}", serde_json::to_string(&summary).expect("serializable"));
            Ok(())
        }
    }
}

fn report(a: ReportArgs, exec: Exec) -> Result<()> {
    let cfg = VerifyConfig { seed: a.seed, quick: a.quick, dense_limit: a.dense_limit, exec };
    let rep = run_all(&cfg)?;
    for c in &rep.criteria {
        eprintln!("{}", c.line());
    }
    let mut v = serde_json::to_value(&rep).expect("serializable");
    v["config"]["k_max"] = json!(walks::k_max());
    v["config"]["exec"] = json!(if exec.is_parallel() { "parallel" } else { "sequential" });
    v["all_pass"] = json!(rep.all_pass());
    if let Some(path) = &a.out {
        for f in &rep.figures {
            let stem = path.with_file_name(format!("figure_{}.csv", f.summary.figure));
            emit(&f.csv, Some(&stem))?;
        }
    }
    emit_json(&v, a.out.as_deref())
}
