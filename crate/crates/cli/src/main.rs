//! `klmult`: affine Kazhdan–Lusztig and ∇-multiplicity calculations from the
//! command line.
//!
//! Data goes to stdout, advisories and errors to stderr. Exit codes: 0 on
//! success, 2 for usage or configuration errors, 3 when a weight is
//! `p`-singular, 4 when an internal invariant fails.

use std::fmt::Display;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use klmult::ext_multiplicity::{Advisory, WeightSpaceCheck};
use klmult::root_system::is_prime;
use klmult::{CharacterMap, Error, ExtEngine, MultiplicityQuery, RootSystem, Series, Variant, Weight};
use serde_json::{json, Map, Value};

#[derive(Parser, Debug)]
#[command(name = "klmult", version, about = "Affine Kazhdan-Lusztig and nabla-multiplicity calculations")]
struct Cli {
    /// Root system series (A-G).
    #[arg(long, global = true, default_value = "A")]
    series: String,
    #[arg(long, global = true, default_value_t = 1)]
    rank: usize,
    /// The prime p.
    #[arg(long, global = true)]
    p: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// KL table cache (JSON lines); loaded if present and rewritten afterwards.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Treat advisories as failures.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Roots, rho, Coxeter number, highest short root and the Jantzen bound.
    Rootsystem,
    /// Alcove location `λ = x·λ⁻` of a weight.
    Locate {
        #[arg(allow_hyphen_values = true)]
        weight: String,
    },
    /// KL polynomial `P_{x,y}` of two reduced words (`e` for the empty word).
    Kl {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// ∇-multiplicities of a tensor product of ∇-modules.
    Tensor {
        #[arg(required = true, num_args = 1..)]
        weights: Vec<String>,
    },
    /// ∇-multiplicities of an Ext group over the Frobenius kernel.
    Extmult {
        /// red_red, delta_red or red_nabla.
        variant: String,
        lambda: String,
        mu: String,
        n: u32,
        /// Report a single ω only.
        #[arg(long)]
        omega: Option<String>,
    },
    /// Checks the weight-space identity for every decomposable μ with
    /// coordinates at most `bound`.
    CheckWeightSpace {
        #[arg(long, default_value_t = 8)]
        bound: i64,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
    /// Printed to stdout before exiting (the `regular: false` report of `locate`).
    output: Option<String>,
}

impl Failure {
    fn usage(message: impl Display) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
            output: None,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Singular { .. } => 3,
            Error::Invariant(_) | Error::Overflow(_) => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
            output: None,
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn parse_weight(rs: &RootSystem, s: &str) -> CliResult<Weight> {
    let w: Weight = s.parse()?;
    rs.check_rank(&w)?;
    Ok(w)
}

fn parse_word(s: &str, generators: usize) -> CliResult<Vec<u8>> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.is_empty() || s == "e" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u8>()
                .ok()
                .filter(|&i| (i as usize) < generators)
                .ok_or_else(|| Failure::usage(format!("bad generator {t:?} in word {s:?}")))
        })
        .collect()
}

fn weight_json(w: &Weight) -> Value {
    json!(w.coords())
}

/// Integers of any size as JSON numbers.
fn big_json(n: &impl Display) -> Value {
    serde_json::from_str(&n.to_string()).expect("integer literal")
}

fn map_json<'a, V: Display + 'a>(entries: impl Iterator<Item = (&'a Weight, V)>) -> Value {
    let mut m = Map::new();
    for (w, v) in entries {
        m.insert(w.to_string(), big_json(&v));
    }
    Value::Object(m)
}

fn tsv_map<'a, V: Display + 'a>(entries: impl Iterator<Item = (&'a Weight, V)>) -> String {
    let mut out = String::from("omega\tmultiplicity\n");
    for (w, v) in entries {
        out.push_str(&format!("{w}\t{v}\n"));
    }
    out
}

fn tsv_pairs(rows: &[(&str, String)]) -> String {
    let mut out = String::from("key\tvalue\n");
    for (k, v) in rows {
        out.push_str(&format!("{k}\t{v}\n"));
    }
    out
}

fn join<T: Display>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

struct App {
    cli: Cli,
    engine: ExtEngine,
}

impl App {
    fn new(cli: Cli) -> CliResult<Self> {
        let series: Series = cli.series.parse()?;
        let rs = Arc::new(RootSystem::new(series, cli.rank)?);
        if let Some(p) = cli.p {
            if !is_prime(p) {
                return Err(Error::NotPrime(p).into());
            }
        }
        let engine = ExtEngine::from_root_system(rs);
        let app = App { cli, engine };
        if let Some(path) = &app.cli.cache {
            if path.exists() {
                let f = File::open(path).map_err(Error::from)?;
                app.engine.kl_table().load(BufReader::new(f))?;
            }
        }
        Ok(app)
    }

    fn rs(&self) -> &RootSystem {
        self.engine.root_system()
    }

    fn p(&self) -> CliResult<i64> {
        self.cli.p.ok_or_else(|| Failure::usage("this command needs --p"))
    }

    fn advise(&self, advisories: &[Advisory]) -> CliResult<()> {
        let mut warned = false;
        for a in advisories {
            eprintln!("advisory: {a}");
            warned |= a.is_warning();
        }
        if warned && self.cli.strict {
            return Err(Failure::usage("advisories present and --strict is set"));
        }
        Ok(())
    }

    fn save_cache(&self) -> CliResult<()> {
        let Some(path) = &self.cli.cache else { return Ok(()) };
        let tmp = path.with_extension("tmp");
        {
            let f = File::create(&tmp).map_err(Error::from)?;
            let mut w = BufWriter::new(f);
            self.engine.kl_table().save(&mut w)?;
            w.flush().map_err(Error::from)?;
        }
        std::fs::rename(&tmp, path).map_err(Error::from)?;
        Ok(())
    }

    fn render(&self, json: Value, tsv: impl FnOnce() -> String) -> String {
        match self.cli.format {
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&json).expect("serialisable")),
            Format::Tsv => tsv(),
        }
    }

    fn run(&self) -> CliResult<String> {
        let out = match &self.cli.command {
            Command::Rootsystem => self.rootsystem()?,
            Command::Locate { weight } => self.locate(weight)?,
            Command::Kl { x, y } => self.kl(x, y)?,
            Command::Tensor { weights } => self.tensor(weights)?,
            Command::Extmult {
                variant,
                lambda,
                mu,
                n,
                omega,
            } => self.extmult(variant, lambda, mu, *n, omega.as_deref())?,
            Command::CheckWeightSpace { bound } => self.check_weight_space(*bound)?,
        };
        self.save_cache()?;
        Ok(out)
    }

    fn rootsystem(&self) -> CliResult<String> {
        let rs = self.rs();
        let roots: Vec<Value> = rs
            .positive_roots()
            .iter()
            .map(|r| json!({"simple": r.simple, "weight": r.weight.coords(), "coroot": r.coroot}))
            .collect();
        let mut j = json!({
            "type": rs.name(),
            "series": rs.series().to_string(),
            "rank": rs.rank(),
            "positive_root_count": rs.positive_roots().len(),
            "positive_roots": roots,
            "rho": weight_json(rs.rho()),
            "coxeter_number": rs.coxeter_number(),
            "highest_short_root": weight_json(&rs.highest_short_root().weight),
        });
        let mut rows = vec![
            ("type", rs.name()),
            ("rank", rs.rank().to_string()),
            ("positive_root_count", rs.positive_roots().len().to_string()),
            ("rho", rs.rho().to_string()),
            ("coxeter_number", rs.coxeter_number().to_string()),
            ("highest_short_root", rs.highest_short_root().weight.to_string()),
        ];
        if let Some(p) = self.cli.p {
            let report = rs.validate_p(p);
            j["p"] = json!(p);
            j["jantzen_bound"] = json!(rs.jantzen_bound(p));
            j["p_odd"] = json!(report.p_odd);
            j["p_ge_2h_minus_2"] = json!(report.p_ge_2h_minus_2);
            rows.push(("p", p.to_string()));
            rows.push(("jantzen_bound", rs.jantzen_bound(p).to_string()));
            if !report.is_ok() {
                self.advise(&[Advisory::PrimeRange(report)])?;
            }
        }
        Ok(self.render(j, || tsv_pairs(&rows)))
    }

    fn locate(&self, weight: &str) -> CliResult<String> {
        let p = self.p()?;
        let w = parse_weight(self.rs(), weight)?;
        match self.engine.group().locate(&w, p) {
            Ok(loc) => {
                let j = json!({
                    "weight": weight_json(&w),
                    "regular": true,
                    "length": loc.length,
                    "word": loc.word,
                    "antidominant": weight_json(&loc.antidominant_rep),
                });
                Ok(self.render(j, || {
                    tsv_pairs(&[
                        ("weight", w.to_string()),
                        ("regular", "true".into()),
                        ("length", loc.length.to_string()),
                        ("word", join(&loc.word)),
                        ("antidominant", loc.antidominant_rep.to_string()),
                    ])
                }))
            }
            Err(e @ Error::Singular { .. }) => {
                let j = json!({"weight": weight_json(&w), "regular": false});
                let output = self.render(j, || tsv_pairs(&[("weight", w.to_string()), ("regular", "false".into())]));
                Err(Failure {
                    output: Some(output),
                    ..Failure::from(e)
                })
            }
            Err(e) => Err(e.into()),
        }
    }

    fn kl(&self, x: &str, y: &str) -> CliResult<String> {
        let gens = self.engine.group().generator_count();
        let (xw, yw) = (parse_word(x, gens)?, parse_word(y, gens)?);
        let poly = self.engine.kl_table().kl_polynomial_by_words(&xw, &yw)?;
        let coeffs: Vec<Value> = poly.coeffs().iter().map(big_json).collect();
        let j = json!({"x": xw, "y": yw, "p_of_q": coeffs, "display": poly.to_string()});
        Ok(self.render(j, || {
            let mut out = String::from("degree\tcoefficient\n");
            for (k, c) in poly.coeffs().iter().enumerate() {
                out.push_str(&format!("{k}\t{c}\n"));
            }
            out
        }))
    }

    fn tensor(&self, weights: &[String]) -> CliResult<String> {
        let ws = weights
            .iter()
            .map(|s| parse_weight(self.rs(), s))
            .collect::<CliResult<Vec<_>>>()?;
        let ch = self.engine.characters();
        let mut acc = CharacterMap::from_iter([(self.rs().zero(), 1)]);
        for w in &ws {
            acc = ch.tensor_with(&acc, w)?;
        }
        let j = json!({
            "factors": ws.iter().map(weight_json).collect::<Vec<_>>(),
            "multiplicities": map_json(acc.iter()),
        });
        Ok(self.render(j, || tsv_map(acc.iter())))
    }

    fn extmult(&self, variant: &str, lambda: &str, mu: &str, n: u32, omega: Option<&str>) -> CliResult<String> {
        let q = MultiplicityQuery {
            variant: variant.parse::<Variant>()?,
            lambda: parse_weight(self.rs(), lambda)?,
            mu: parse_weight(self.rs(), mu)?,
            n,
            p: self.p()?,
            omega: omega.map(|o| parse_weight(self.rs(), o)).transpose()?,
        };
        let t = self.engine.multiplicity_table(&q)?;
        self.advise(&t.advisories)?;
        let j = json!({
            "variant": q.variant.name(),
            "lambda": weight_json(&q.lambda),
            "mu": weight_json(&q.mu),
            "n": q.n,
            "p": q.p,
            "omega": q.omega.as_ref().map(weight_json),
            "multiplicities": map_json(t.entries.iter()),
        });
        Ok(self.render(j, || tsv_map(t.entries.iter())))
    }

    fn check_weight_space(&self, bound: i64) -> CliResult<String> {
        let p = self.p()?;
        let mus = self.rs().dominant_box(bound);
        let checks = self.engine.weight_space_sweep(&mus, p)?;
        self.advise(&self.engine.advisories(&[], p)?)?;
        let failures: Vec<&WeightSpaceCheck> = checks.iter().filter(|c| !c.holds()).collect();
        let row = |c: &WeightSpaceCheck| {
            json!({"mu": weight_json(&c.mu), "tau": weight_json(&c.tau), "xi": weight_json(&c.xi),
                   "lhs": big_json(&c.lhs), "rhs": big_json(&c.rhs)})
        };
        let j = json!({
            "p": p,
            "bound": bound,
            "cases": checks.len(),
            "failures": failures.iter().map(|c| row(c)).collect::<Vec<_>>(),
            "pass": failures.is_empty(),
        });
        let out = self.render(j, || {
            let mut s = String::from("mu\ttau\txi\tlhs\trhs\n");
            for c in &checks {
                s.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", c.mu, c.tau, c.xi, c.lhs, c.rhs));
            }
            s
        });
        if failures.is_empty() {
            eprintln!("all {} cases pass", checks.len());
            Ok(out)
        } else {
            Err(Failure {
                code: 4,
                message: format!("{} of {} cases fail", failures.len(), checks.len()),
                output: Some(out),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    std::panic::set_hook(Box::new(|info| eprintln!("internal error: {info}")));
    let result = std::panic::catch_unwind(|| App::new(cli).and_then(|app| app.run()));
    match result {
        Ok(Ok(out)) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Ok(Err(f)) => {
            if let Some(out) = f.output {
                print!("{out}");
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
        Err(_) => ExitCode::from(4),
    }
}
