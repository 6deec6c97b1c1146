//! Batch command-line frontend.
//!
//! Every subcommand produces a text rendering and a JSON value; `--format`
//! picks one. Enumeration-heavy subcommands (`dims`, `basis`, `qx-gens`) are
//! memoised on disk when a cache directory is configured.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::coeff::CoeffPresentation;
use crate::error::Error;
use crate::hopf::{self, TensorLinComb};
use crate::kadl;
use crate::skyline::{Algebra, Element};
use crate::stable::{self, Flavor, LimitElement};
use crate::verify;

#[derive(Parser, Debug)]
#[command(name = "hopfring", version, about = "Exact mod-p computations in the Hopf ring of extended powers")]
struct Cli {
    /// The prime (defaults to the presentation's prime, or 2).
    #[arg(long, global = true)]
    p: Option<u32>,
    /// JSON presentation of H*(X; F_p); the point when omitted.
    #[arg(long, global = true)]
    presentation: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Directory for memoised enumeration tables (HOPFRING_CACHE overrides it).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FlavorArg {
    Dinf,
    Cx,
    Q0x,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::Dinf => Flavor::Dinf,
            FlavorArg::Cx => Flavor::CX,
            FlavorArg::Q0x => Flavor::Q0X,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Hopf,
    Dp,
    Dims,
    Stable,
}

/// Operands are diagrams in the text grammar, or `@path` to read one from a file.
#[derive(Subcommand, Debug)]
enum Command {
    /// Skyline and Nakaoka dimensions of one component, degree by degree.
    Dims {
        #[arg(long)]
        component: u64,
        #[arg(long)]
        max_degree: u64,
        #[arg(long, default_value_t = 0)]
        sign: u8,
    },
    /// The skyline basis of one tri-grade.
    Basis {
        #[arg(long)]
        component: u64,
        #[arg(long)]
        degree: u64,
        #[arg(long, default_value_t = 0)]
        sign: u8,
    },
    /// Cup product.
    Mul { a: String, b: String },
    /// Transfer product.
    Transfer { a: String, b: String },
    Coproduct { a: String },
    /// Divided power `a^[r]`.
    Divpow { a: String, r: u64 },
    /// Pairing of `iota(x_e)^[n]` with a Nakaoka monomial such as `x*x` or `Q(0,1)x`.
    Pair { x: String, e: u8, n: u64, m: String },
    /// Minimal sequence of a parity class.
    Minseq {
        #[arg(long = "S", value_delimiter = ',', num_args = 0..)]
        set: Vec<u32>,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        primed: bool,
    },
    /// Restriction from the operand's component down to component `n`.
    Restrict { a: String, n: u64 },
    /// Cup product of limit classes `y|1^[*]` (unit columns of the operands are dropped).
    LimitMul {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t = FlavorArg::Dinf)]
        flavor: FlavorArg,
    },
    /// Generators and nilpotence heights of a stable ring.
    QxGens {
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        #[arg(long)]
        max_degree: u64,
    },
    /// Run a randomised property suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_component: u64,
        #[arg(long, default_value_t = 8)]
        max_degree: u64,
    },
}

/// Rendered result of one subcommand.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
struct Outcome {
    text: String,
    json: Value,
    /// Property suites report failures through the exit code.
    failed: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Outcome {
        Outcome { text, json, failed: false }
    }
}

enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse { .. }
            | Error::Presentation(_)
            | Error::NotPrime(_)
            | Error::MixedPrimes
            | Error::Io(_)
            | Error::BadRestriction { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

fn usage<T>(r: crate::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Usage(e.to_string()))
}

/// Run the CLI on `argv` (program name first), printing to stdout/stderr.
/// Returns the process exit code: 0 success, 1 mathematical error, 2 usage error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => println!("{}", out.text),
                Format::Json => println!("{}", out.json),
            }
            i32::from(out.failed)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Math(m)) => {
            eprintln!("error: {m}");
            1
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn algebra(cli: &Cli) -> Result<Algebra, Failure> {
    if let Some(p) = cli.p.filter(|&p| !crate::scalars::is_prime(p)) {
        return Err(Failure::Usage(Error::NotPrime(p).to_string()));
    }
    let pres = match &cli.presentation {
        Some(path) => usage(CoeffPresentation::load(&read_text(path)?))?,
        None => CoeffPresentation::point(cli.p.unwrap_or(2)),
    };
    if let Some(p) = cli.p {
        if p != pres.p {
            return Err(Failure::Usage(format!("--p {p} disagrees with the presentation's prime {}", pres.p)));
        }
    }
    Ok(Algebra::new(pres))
}

fn operand(alg: &Algebra, arg: &str) -> Result<Element, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(path) => read_text(Path::new(path))?,
        None => arg.to_string(),
    };
    usage(alg.parse(text.trim()))
}

fn cache_dir(cli: &Cli) -> Option<PathBuf> {
    std::env::var_os("HOPFRING_CACHE").map(PathBuf::from).or_else(|| cli.cache_dir.clone())
}

fn cache_key(alg: &Algebra, query: &str) -> String {
    let mut h = Sha256::new();
    for part in [crate::VERSION, &alg.p.to_string(), &alg.pres.render(), query] {
        h.update(part.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

fn cached(cli: &Cli, alg: &Algebra, compute: impl FnOnce() -> Result<Outcome, Failure>) -> Result<Outcome, Failure> {
    let Some(dir) = cache_dir(cli) else {
        return compute();
    };
    let path = dir.join(format!("{}.json", cache_key(alg, &format!("{:?}", cli.cmd))));
    if let Some(hit) = fs::read_to_string(&path).ok().and_then(|s| serde_json::from_str::<Outcome>(&s).ok()) {
        return Ok(hit);
    }
    let out = compute()?;
    if fs::create_dir_all(&dir).is_ok() {
        let _ = fs::write(&path, serde_json::to_string(&out).expect("outcome serializes"));
    }
    Ok(out)
}

fn element_json(alg: &Algebra, x: &Element) -> Value {
    let terms: Vec<Value> = x.iter().map(|(m, c)| json!([c, alg.render_monomial(m)])).collect();
    let grade = x.keys().next().map(|m| {
        let g = alg.grade(m);
        json!({"n": g.n, "d": g.d, "e": g.e})
    });
    json!({"terms": terms, "grade": grade})
}

fn element_outcome(alg: &Algebra, x: &Element) -> Outcome {
    Outcome::ok(alg.render(x), element_json(alg, x))
}

fn tensor_outcome(alg: &Algebra, x: &TensorLinComb) -> Outcome {
    let text = if x.is_zero() {
        "0".to_string()
    } else {
        let parts: Vec<String> = x
            .iter()
            .map(|((l, r), c)| {
                let body = format!("{} (x) {}", alg.render_monomial(l), alg.render_monomial(r));
                if c == 1 {
                    body
                } else {
                    format!("{c}*{body}")
                }
            })
            .collect();
        parts.join(" + ")
    };
    let terms: Vec<Value> =
        x.iter().map(|((l, r), c)| json!([c, alg.render_monomial(l), alg.render_monomial(r)])).collect();
    Outcome::ok(text, json!({ "terms": terms }))
}

fn limit_outcome(alg: &Algebra, x: &LimitElement, flavor: Flavor) -> Outcome {
    let terms: Vec<Value> = x.iter().map(|(k, c)| json!([c, alg.render_monomial(&k.pure)])).collect();
    Outcome::ok(stable::render_limit(alg, x), json!({"terms": terms, "flavor": flavor.to_string()}))
}

fn component_of(alg: &Algebra, x: &Element) -> Result<u64, Failure> {
    let mut comps = x.keys().map(|m| alg.grade(m).n);
    let Some(n) = comps.next() else {
        return Ok(0);
    };
    if comps.any(|m| m != n) {
        return Err(Failure::Usage(Error::NotInComponent(n).to_string()));
    }
    Ok(n)
}

fn suite_outcome(reports: &[verify::SuiteReport]) -> Outcome {
    let mut lines = Vec::new();
    for r in reports {
        lines.push(format!("{}: {} cases, {} failures", r.name, r.cases, r.failures.len()));
        lines.extend(r.failures.iter().map(|f| format!("  {f}")));
    }
    Outcome {
        text: lines.join("\n"),
        json: serde_json::to_value(reports).expect("reports serialize"),
        failed: reports.iter().any(|r| !r.passed()),
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let alg = algebra(cli)?;
    let p = alg.p;
    match &cli.cmd {
        Command::Dims { component, max_degree, sign } => cached(cli, &alg, || {
            let mut rows = Vec::new();
            for d in 0..=*max_degree {
                rows.push(kadl::DimRow {
                    n: *component,
                    d,
                    e: *sign,
                    skyline: alg.count_skyline(*component, d, *sign),
                    nakaoka: kadl::enumerate_nakaoka(&alg.pres, *component, d, *sign).len(),
                });
            }
            let mut text = vec!["d\tskyline\tnakaoka".to_string()];
            text.extend(rows.iter().map(|r| format!("{}\t{}\t{}", r.d, r.skyline, r.nakaoka)));
            let failed = rows.iter().any(|r| !r.agrees());
            Ok(Outcome { text: text.join("\n"), json: json!({ "rows": rows }), failed })
        }),
        Command::Basis { component, degree, sign } => cached(cli, &alg, || {
            let basis = alg.enumerate_skyline(*component, *degree, *sign);
            let names: Vec<String> = basis.iter().map(|m| alg.render_monomial(m)).collect();
            Ok(Outcome::ok(names.join("\n"), json!({ "basis": names })))
        }),
        Command::Mul { a, b } => {
            let (a, b) = (operand(&alg, a)?, operand(&alg, b)?);
            Ok(element_outcome(&alg, &hopf::cup_product(&alg, &a, &b)?))
        }
        Command::Transfer { a, b } => {
            let (a, b) = (operand(&alg, a)?, operand(&alg, b)?);
            Ok(element_outcome(&alg, &hopf::transfer_product(&alg, &a, &b)))
        }
        Command::Coproduct { a } => Ok(tensor_outcome(&alg, &hopf::coproduct(&alg, &operand(&alg, a)?))),
        Command::Divpow { a, r } => Ok(element_outcome(&alg, &hopf::divided_power(&alg, &operand(&alg, a)?, *r)?)),
        Command::Pair { x, e, n, m } => {
            let class =
                alg.pres.index_of(x).ok_or_else(|| Failure::Usage(format!("unknown class {x:?} in the presentation")))?;
            if *e > 1 || (p == 2 && *e == 1) {
                return Err(Failure::Usage(format!("sign index {e} is not available at p = {p}")));
            }
            let mono = usage(kadl::parse_nakaoka(&alg.pres, m))?;
            let v = kadl::pair_divided_power(&alg.pres, class, *e, *n, &mono)?;
            Ok(Outcome::ok(v.to_string(), json!({ "value": v })))
        }
        Command::Minseq { set, k, primed } => {
            let s = kadl::minimal_sequence(set, *k, *primed, p)?;
            Ok(Outcome::ok(s.to_string(), json!({ "sequence": s.flat() })))
        }
        Command::Restrict { a, n } => {
            let a = operand(&alg, a)?;
            let m = component_of(&alg, &a)?;
            Ok(element_outcome(&alg, &stable::restrict(&alg, &a, *n, m)?))
        }
        Command::LimitMul { a, b, flavor } => {
            let flavor = Flavor::from(*flavor);
            let a = usage(stable::limit_of(&alg, &operand(&alg, a)?, flavor))?;
            let b = usage(stable::limit_of(&alg, &operand(&alg, b)?, flavor))?;
            Ok(limit_outcome(&alg, &stable::limit_cup(&alg, &a, &b)?, flavor))
        }
        Command::QxGens { flavor, max_degree } => cached(cli, &alg, || {
            let gens = stable::stable_generators(&alg.pres, *max_degree, Flavor::from(*flavor))?;
            let height = |h: Option<u32>| h.map_or("inf".to_string(), |h| h.to_string());
            let text: Vec<String> = gens
                .iter()
                .map(|g| format!("{}\tdegree {}\th={}", alg.render_column(&g.block), g.degree, height(g.height)))
                .collect();
            let rows: Vec<Value> = gens
                .iter()
                .map(|g| {
                    json!({
                        "block": alg.render_column(&g.block),
                        "degree": g.degree,
                        "height": g.height,
                        "conditions": g.conditions,
                    })
                })
                .collect();
            Ok(Outcome::ok(text.join("\n"), json!({ "generators": rows })))
        }),
        Command::Verify { suite, samples, seed, max_component, max_degree } => {
            let reports = match suite {
                Suite::Hopf => {
                    let pool = verify::Pool::new(&alg, *max_component, *max_degree);
                    vec![verify::hopf_suite(&alg, &pool, *samples, *seed)]
                }
                Suite::Dp => {
                    let pool = verify::Pool::new(&alg, *max_component, *max_degree);
                    vec![verify::divided_power_suite(&alg, &pool, *samples, *seed)]
                }
                Suite::Dims => {
                    let rows = kadl::dimension_report(&alg, *max_component, *max_degree);
                    let failures = rows
                        .iter()
                        .filter(|r| !r.agrees())
                        .map(|r| format!("(n={}, d={}, e={}): skyline {} vs nakaoka {}", r.n, r.d, r.e, r.skyline, r.nakaoka))
                        .collect();
                    vec![verify::SuiteReport { name: "dims".into(), cases: rows.len(), failures }]
                }
                Suite::Stable => {
                    if !alg.pres.connected {
                        return Err(Error::NotConnected.into());
                    }
                    vec![verify::stable_suite(&alg, *max_component, *max_degree, 6, 50, *samples, *seed)]
                }
            };
            Ok(suite_outcome(&reports))
        }
    }
}
