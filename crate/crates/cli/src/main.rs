//! `plucker-lab`: command-line front end. Every subcommand prints key-sorted
//! JSON (or a flat text listing) and exits 0 on success, 1 when a violation
//! is found, 2 on usage errors and 3 when a search budget runs out.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use plucker_lab::combinatorics::{is_weakly_separated, layout, IndexTuple};
use plucker_lab::inequality::{
    all_systems, build_system, certify_all, generalized_laplace_system, search_counterexample,
    verify_pair, Certificate, InequalitySystem, QuadraticForm,
};
use plucker_lab::linalg::{embed, format_rational, parse_rational, RationalMatrix};
use plucker_lab::render::{render_compatible, render_svg};
use plucker_lab::tl::{decompose_product, KauffmanDiagram};
use plucker_lab::tnn::{is_tnn, random_tnn, GeneratorConfig};
use plucker_lab::Error;

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "plucker-lab", version, about = "Exact checks of quadratic Plücker inequalities on nonnegative Grassmannians")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout (a directory for batch renders).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
    Text,
}

#[derive(Args, Clone)]
struct Pair {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// First tuple, e.g. `1,3,5`.
    #[arg(long = "I", allow_hyphen_values = true)]
    i: String,
    /// Second tuple.
    #[arg(long = "J", allow_hyphen_values = true)]
    j: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Weak separation test with the exchange layout.
    Ws(Pair),
    /// Exchange layout of the symmetric difference.
    Layout(Pair),
    /// Exchange terms for one `r`, optionally one partial sum.
    System {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        l: Option<usize>,
    },
    /// Immanant decomposition of `Δ_I Δ_J` on a matrix.
    Decompose {
        #[command(flatten)]
        pair: Pair,
        /// JSON file holding an `n x m` matrix.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Seed for a random nonnegative matrix when no file is given.
        #[arg(long, alias = "random", default_value_t = 0)]
        seed: u64,
    },
    /// Diagram certificates of the partial sums.
    Certify {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
    },
    /// Certificates plus exact sampling; exit 1 on any violation.
    Verify {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Counterexample search; exit 1 with a witness, 3 when the budget runs out.
    Search {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generalized Laplace rows for `n` and `d`.
    Laplace {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Seeded random totally nonnegative matrix.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "3")]
        bound: String,
        #[arg(long, default_value = "1/2")]
        density: String,
    },
    /// SVG of one diagram, or of every compatible diagram of a pair.
    Render {
        /// Diagram JSON, inline or a file path.
        #[arg(long)]
        diagram: Option<String>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "I", allow_hyphen_values = true)]
        i: Option<String>,
        #[arg(long = "J", allow_hyphen_values = true)]
        j: Option<String>,
    },
}

/// A failure mapped to an exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let err = e.into();
        let code = match err.downcast_ref::<Error>() {
            Some(Error::BudgetExhausted { .. }) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure { code, err }
    }
}

/// What a command produced: a JSON report or raw SVG, plus exit code.
enum Output {
    Report(Value, u8),
    Svg(String),
    Files(Vec<(String, String)>),
}

fn parse_tuple(s: &str, m: usize, n: usize) -> anyhow::Result<IndexTuple> {
    let cleaned = s.trim().trim_start_matches(['(', '[', '{']).trim_end_matches([')', ']', '}']);
    let entries = cleaned
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<usize>().with_context(|| format!("bad tuple entry {p:?} in {s:?}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(IndexTuple::from_slice(m, n, &entries)?)
}

impl Pair {
    fn tuples(&self) -> anyhow::Result<(IndexTuple, IndexTuple)> {
        Ok((parse_tuple(&self.i, self.m, self.n)?, parse_tuple(&self.j, self.m, self.n)?))
    }
}

fn tuple_json(t: &IndexTuple) -> Value {
    json!(t.entries())
}

fn pair_json(i: &IndexTuple, j: &IndexTuple) -> Value {
    json!({"I": tuple_json(i), "J": tuple_json(j), "m": i.shape().m(), "n": i.shape().n()})
}

fn diagram_json(k: &KauffmanDiagram) -> Value {
    json!({"label": k.to_string(), "edges": k.edges()})
}

fn form_json(f: &QuadraticForm) -> Value {
    Value::Array(
        f.terms
            .iter()
            .map(|(c, i, j)| json!({"coefficient": c, "I": tuple_json(i), "J": tuple_json(j)}))
            .collect(),
    )
}

fn certificate_json(c: &Certificate) -> Value {
    json!({
        "l": c.l,
        "r": c.r,
        "coefficients": c.coefficients_by_label(),
        "nonnegative": c.is_nonnegative(),
        "zero": c.is_zero(),
    })
}

fn system_json(sys: &InequalitySystem) -> Value {
    let terms: Vec<Value> = sys
        .terms
        .iter()
        .zip(&sys.signs)
        .map(|(t, s)| {
            json!({"k": t.k, "I": tuple_json(&t.i), "J": tuple_json(&t.j), "subtract_base": t.subtract_base, "sign": s})
        })
        .collect();
    json!({"r": sys.r, "base_index": sys.base_index(), "terms": terms})
}

fn read_json_arg(arg: &str) -> anyhow::Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.cmd {
        Cmd::Ws(p) => {
            let (i, j) = p.tuples()?;
            let ws = is_weakly_separated(&i, &j)?;
            let lay = match layout(&i, &j) {
                Ok(l) => serde_json::to_value(l)?,
                Err(Error::EmptySymmetricDifference) => Value::Null,
                Err(e) => return Err(e.into()),
            };
            Ok(Output::Report(json!({"pair": pair_json(&i, &j), "ws": ws, "layout": lay}), 0))
        }
        Cmd::Layout(p) => {
            let (i, j) = p.tuples()?;
            let lay = layout(&i, &j)?;
            let ambient = i.shape().ambient();
            Ok(Output::Report(
                json!({
                    "pair": pair_json(&i, &j),
                    "layout": serde_json::to_value(&lay)?,
                    "two_arcs": lay.is_two_arcs(ambient),
                }),
                0,
            ))
        }
        Cmd::System { pair, r, l } => {
            let (i, j) = pair.tuples()?;
            let sys = build_system(&i, &j, *r)?;
            let mut v = json!({"pair": pair_json(&i, &j), "layout": serde_json::to_value(&sys.layout)?, "system": system_json(&sys)});
            if let Some(l) = l {
                v["partial_sum"] = json!({"l": l, "terms": form_json(&sys.partial_sum(*l)?)});
            }
            Ok(Output::Report(v, 0))
        }
        Cmd::Decompose { pair, matrix, seed } => {
            let (i, j) = pair.tuples()?;
            let (x, source) = match matrix {
                Some(path) => {
                    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    let x: RationalMatrix = serde_json::from_str(&text)?;
                    (x, json!({"file": path.display().to_string()}))
                }
                None => {
                    let cfg = GeneratorConfig::standard(*seed, pair.n, pair.m)?;
                    (random_tnn(&cfg), json!({"seed": seed}))
                }
            };
            let d = decompose_product(&i, &j, &x)?;
            let terms: Vec<Value> = d
                .terms
                .iter()
                .map(|(k, v)| {
                    let mut e = diagram_json(k);
                    e["immanant"] = json!(format_rational(v));
                    e
                })
                .collect();
            Ok(Output::Report(
                json!({
                    "pair": pair_json(&i, &j),
                    "source": source,
                    "matrix": serde_json::to_value(&x)?,
                    "value": format_rational(&d.value),
                    "term_sum": format_rational(&d.term_sum()),
                    "diagrams": terms.len(),
                    "terms": terms,
                }),
                0,
            ))
        }
        Cmd::Certify { pair, r, l } => {
            let (i, j) = pair.tuples()?;
            let systems = match r {
                Some(r) => vec![build_system(&i, &j, *r)?],
                None => all_systems(&i, &j)?,
            };
            let mut certs = Vec::new();
            for sys in &systems {
                for c in certify_all(sys)? {
                    if l.is_none_or(|l| l == c.l) {
                        certs.push(c);
                    }
                }
            }
            if let Some(l) = l {
                if certs.is_empty() {
                    return Err(anyhow!("l = {l} is out of range").into());
                }
            }
            let all_nonneg = certs.iter().all(Certificate::is_nonnegative);
            Ok(Output::Report(
                json!({
                    "pair": pair_json(&i, &j),
                    "ws": is_weakly_separated(&i, &j)?,
                    "all_nonnegative": all_nonneg,
                    "certificates": certs.iter().map(certificate_json).collect::<Vec<_>>(),
                }),
                0,
            ))
        }
        Cmd::Verify { pair, samples, seed } => {
            let (i, j) = pair.tuples()?;
            let cfg = GeneratorConfig::standard(*seed, pair.n, pair.m)?;
            let report = verify_pair(&i, &j, *samples, &cfg)?;
            let code = if report.holds { 0 } else { EXIT_VIOLATION };
            Ok(Output::Report(serde_json::to_value(&report)?, code))
        }
        Cmd::Search { pair, budget, seed } => {
            let (i, j) = pair.tuples()?;
            let cfg = GeneratorConfig::standard(*seed, pair.n, pair.m)?;
            let ws = is_weakly_separated(&i, &j)?;
            match search_counterexample(&i, &j, *budget, &cfg) {
                Ok(w) => {
                    let code = if w.is_some() { EXIT_VIOLATION } else { 0 };
                    let matrix_form = w
                        .as_ref()
                        .and_then(|w| w.matrix_form(i.shape()))
                        .map(serde_json::to_value)
                        .transpose()?;
                    Ok(Output::Report(
                        json!({
                            "pair": pair_json(&i, &j),
                            "ws": ws,
                            "budget": budget,
                            "witness": serde_json::to_value(&w)?,
                            "matrix_form": matrix_form,
                        }),
                        code,
                    ))
                }
                Err(e @ Error::BudgetExhausted { .. }) => {
                    Ok(Output::Report(
                        json!({"pair": pair_json(&i, &j), "ws": ws, "budget": budget, "witness": null, "error": e.to_string()}),
                        EXIT_BUDGET,
                    ))
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::Laplace { n, d, samples, seed } => {
            let lap = generalized_laplace_system(*n, *d)?;
            let certs = lap.certificates()?;
            let rows: Vec<Value> = (0..=*n)
                .map(|l| -> anyhow::Result<Value> {
                    let c = &certs[l];
                    Ok(json!({
                        "l": l,
                        "terms": form_json(&lap.row(l)?),
                        "coefficients": c.iter().map(|(k, v)| (k.to_string(), *v)).collect::<std::collections::BTreeMap<_, _>>(),
                        "nonnegative": c.values().all(|&v| v >= 0),
                        "identically_zero": c.is_empty(),
                    }))
                })
                .collect::<anyhow::Result<_>>()?;
            let mut holds = true;
            let mut evals = Vec::new();
            for t in 0..*samples as u64 {
                let cfg = GeneratorConfig::standard(seed.wrapping_add(t), *n, *n)?;
                let x = embed(&random_tnn(&cfg))?;
                let vals = lap.evaluate_point(&x)?;
                holds &= vals.iter().all(|v| *v >= num_zero());
                evals.push(json!({"seed": seed.wrapping_add(t), "values": vals.iter().map(format_rational).collect::<Vec<_>>()}));
            }
            let code = if holds { 0 } else { EXIT_VIOLATION };
            Ok(Output::Report(
                json!({"n": n, "d": d, "rows": rows, "evaluations": evals, "holds": holds}),
                code,
            ))
        }
        Cmd::Gen { n, m, seed, bound, density } => {
            let cfg = GeneratorConfig::new(*seed, *n, *m, parse_rational(bound)?, parse_rational(density)?)?;
            let x = random_tnn(&cfg);
            Ok(Output::Report(
                json!({"config": serde_json::to_value(&cfg)?, "matrix": serde_json::to_value(&x)?, "tnn": is_tnn(&x)}),
                0,
            ))
        }
        Cmd::Render { diagram, m, n, i, j } => match (diagram, m, n, i, j) {
            (Some(d), None, None, None, None) => {
                let k: KauffmanDiagram = serde_json::from_str(&read_json_arg(d)?)?;
                Ok(Output::Svg(render_svg(&k, None)))
            }
            (None, Some(m), Some(n), Some(i), Some(j)) => {
                let (ti, tj) = (parse_tuple(i, *m, *n)?, parse_tuple(j, *m, *n)?);
                Ok(Output::Files(render_compatible(&ti, &tj)?))
            }
            _ => Err(anyhow!("render takes either --diagram or all of --m --n --I --J").into()),
        },
    }
}

fn num_zero() -> plucker_lab::linalg::Rational {
    plucker_lab::linalg::int(0)
}

/// `path = value` lines for every leaf of a JSON value.
fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (idx, x) in xs.iter().enumerate() {
                flatten(&format!("{prefix}[{idx}]"), x, out);
            }
        }
        _ => {
            out.push_str(prefix);
            out.push_str(" = ");
            out.push_str(&v.to_string());
            out.push('\n');
        }
    }
}

fn emit(cli: &Cli, output: Output) -> anyhow::Result<u8> {
    let write = |text: &str| -> anyhow::Result<()> {
        match &cli.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    };
    match output {
        Output::Report(v, code) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&v)? + "\n",
                Format::Text => {
                    let mut s = String::new();
                    flatten("", &v, &mut s);
                    s
                }
                Format::Svg => bail!("--format svg is only available for render"),
            };
            write(&text)?;
            Ok(code)
        }
        Output::Svg(svg) => {
            if cli.format == Format::Text {
                bail!("render produces svg or json");
            }
            write(&svg)?;
            Ok(0)
        }
        Output::Files(files) => {
            let dir = cli
                .out
                .as_ref()
                .ok_or_else(|| anyhow!("batch render needs --out <directory>"))?;
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for (name, svg) in &files {
                fs::write(dir.join(name), svg).with_context(|| format!("writing {name}"))?;
            }
            let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
            println!("{}", serde_json::to_string_pretty(&json!({"files": names, "count": names.len()}))?);
            Ok(0)
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("PLUCKER_LAB_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .with_context(|| format!("PLUCKER_LAB_THREADS must be a non-negative integer, got {v:?}"))?;
        if n > 0 {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_USAGE);
    }
    let result = run(&cli).and_then(|o| emit(&cli, o).map_err(Failure::from));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
