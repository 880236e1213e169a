use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use stratify::eisenstein::{
    boundary_betti, discriminant_form, enumerate_roots, parse_boundary_spec, weyl_group, AnyLattice,
};
use stratify::invariants::{close_group, molien, parse_rational_generators, CACHE_ENV, DEFAULT_GROUP_CAP};
use stratify::rational::fmt_q;
use stratify::scenario::{self, Report};
use stratify::series::TruncatedSeries;
use stratify::strata::{instability_index_set, min_nonzero_codim, Weyl};
use stratify::weights::hypersurface_weights;
use stratify::{BettiTable, Error, Result};

#[derive(Parser)]
#[command(name = "stratify", version, about = "Exact Betti numbers of GIT quotients, Kirwan blowups and ball-quotient compactifications")]
struct Cli {
    /// Drop series coefficients above this degree.
    #[arg(long, global = true)]
    truncate: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest finite group any closure may produce before giving up.
    #[arg(long, global = true, default_value_t = DEFAULT_GROUP_CAP)]
    group_cap: usize,
    /// Directory for cached group closures.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Latex,
}

#[derive(Subcommand)]
enum Command {
    /// Run a pipeline scenario.
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
    /// Instability strata of degree-d hypersurfaces in P^n.
    Strata {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = GroupArg::Sl)]
        group: GroupArg,
    },
    /// Molien series of the group generated by the matrices in a JSON file.
    Molien {
        #[arg(long)]
        gens: PathBuf,
        /// Degree of the coordinate functions, an even number.
        #[arg(long)]
        degree: usize,
    },
    /// Lattice computations on an expression such as `E1+2E4` or a lattice file.
    Lattice {
        #[arg(value_enum)]
        query: LatticeQuery,
        lattice: String,
    },
    /// Betti table of a toroidal boundary divisor from a spec file.
    Boundary { spec: PathBuf },
    /// Correction to intersection cohomology from blowing up a point.
    Blowup {
        /// Comma-separated Betti numbers of the exceptional divisor, all degrees.
        #[arg(long)]
        exceptional: String,
        #[arg(long)]
        dim: usize,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    /// A built-in name (cubic3fold, cubicsurf, cubiccurve, binary12) or a scenario file.
    Run { scenario: String },
    /// List the built-in scenarios.
    List,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupArg {
    Sl,
    Torus,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LatticeQuery {
    Roots,
    WeylOrder,
    Discriminant,
    ZForm,
}

/// What a command produced; `failed` carries check failures that still yield output.
struct Output {
    text: String,
    failed: Option<Error>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, failed: None }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if !out.text.ends_with('\n') {
                println!();
            }
            match out.failed {
                None => ExitCode::SUCCESS,
                Some(e) => report_error(&e),
            }
        }
        Err(e) => report_error(&e),
    }
}

fn report_error(e: &Error) -> ExitCode {
    let msg = json!({ "error": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() });
    eprintln!("{msg}");
    ExitCode::from(e.exit_code() as u8)
}

fn run(cli: &Cli) -> Result<Output> {
    if let Some(dir) = &cli.cache_dir {
        // group closures read the cache location from the environment; nothing else runs yet
        std::env::set_var(CACHE_ENV, dir);
    }
    match &cli.command {
        Command::Scenario { action: ScenarioAction::List } => {
            let names: Vec<&str> = scenario::BUILTIN.iter().map(|(n, _)| *n).collect();
            Ok(Output::ok(match cli.format {
                Format::Json => json!(names).to_string(),
                _ => names.join("\n"),
            }))
        }
        Command::Scenario { action: ScenarioAction::Run { scenario } } => {
            let mut report = scenario::run_named(scenario)?;
            if let Some(k) = cli.truncate {
                report.truncate_series(k);
            }
            let failed = (!report.passed).then(|| {
                let names: Vec<String> = report.failures().iter().map(|o| format!("{}: {}", o.name, o.detail)).collect();
                Error::Check(names.join("; "))
            });
            Ok(Output { text: render_report(&report, cli.format), failed })
        }
        Command::Strata { n, d, group } => {
            let ws = hypersurface_weights(*n, *d)?;
            let weyl = match group {
                GroupArg::Sl => Weyl::FullSymmetric,
                GroupArg::Torus => Weyl::Trivial,
            };
            let strata = instability_index_set(&ws, weyl)?;
            let min = min_nonzero_codim(&strata);
            Ok(Output::ok(match cli.format {
                Format::Json => pretty(&json!({ "n": n, "d": d, "count": strata.len(), "min_nonzero_codim": min, "strata": strata })),
                Format::Csv => {
                    let mut s = String::from("beta,norm2,n_beta,dim_g_mod_p,codim_expected\n");
                    for b in &strata {
                        let beta: Vec<String> = b.beta.iter().map(fmt_q).collect();
                        let _ = writeln!(s, "\"{}\",{},{},{},{}", beta.join(" "), fmt_q(&b.norm2), b.n_beta, b.dim_g_mod_p, b.codim_expected);
                    }
                    s
                }
                _ => {
                    let mut s = format!("{} strata; minimal nonzero codimension {}\n", strata.len(), min.map_or("none".into(), |m| m.to_string()));
                    for b in &strata {
                        let beta: Vec<String> = b.beta.iter().map(fmt_q).collect();
                        let _ = writeln!(s, "({})  |beta|^2 = {}  codim {}", beta.join(", "), fmt_q(&b.norm2), b.codim_expected);
                    }
                    s
                }
            }))
        }
        Command::Molien { gens, degree } => {
            let text = read(gens)?;
            let group = close_group(&parse_rational_generators(&text)?, cli.group_cap)?;
            let order = cli.truncate.unwrap_or(20);
            let s = molien(&group, *degree, order)?;
            Ok(Output::ok(render_series(&s, cli.format, &[("group_order", json!(group.order()))])))
        }
        Command::Lattice { query, lattice } => lattice_command(*query, lattice, cli.format, cli.group_cap),
        Command::Boundary { spec } => {
            let spec = parse_boundary_spec(&read(spec)?)?;
            let report = boundary_betti(&spec, cli.group_cap)?;
            Ok(Output::ok(match cli.format {
                Format::Json => pretty(&report),
                _ => render_table(&report.table, cli.format, "boundary"),
            }))
        }
        Command::Blowup { exceptional, dim } => {
            let betti: Vec<i64> = exceptional
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad Betti number {x:?}"))))
                .collect::<Result<_>>()?;
            if betti.len() % 2 == 0 {
                return Err(Error::Parse("a Betti table has an odd number of entries".into()));
            }
            let table = BettiTable::new(betti.len() / 2, betti)?;
            let mut s = stratify::assembly::blowup_correction(&table, *dim)?;
            if let Some(k) = cli.truncate {
                s = s.truncate_at_most(k);
            }
            Ok(Output::ok(render_series(&s, cli.format, &[])))
        }
    }
}

fn lattice_command(query: LatticeQuery, arg: &str, format: Format, cap: usize) -> Result<Output> {
    let path = std::path::Path::new(arg);
    let lat = if path.is_file() { AnyLattice::parse_expression_or_file(&read(path)?)? } else { AnyLattice::parse_expression_or_file(arg)? };
    let value = match query {
        LatticeQuery::Roots => {
            let roots = enumerate_roots(&lat.z()?)?;
            json!({ "count": roots.len(), "roots": roots })
        }
        LatticeQuery::WeylOrder => {
            let AnyLattice::Eisenstein(l) = &lat else {
                return Err(Error::Invalid("weyl-order needs an Eisenstein lattice".into()));
            };
            json!({ "order": weyl_group(l, cap)?.order() })
        }
        LatticeQuery::Discriminant => serde_json::to_value(discriminant_form(&lat.z()?)?).expect("serializes"),
        LatticeQuery::ZForm => json!({ "gram": lat.z()?.gram }),
    };
    Ok(Output::ok(match format {
        Format::Json => pretty(&value),
        _ => match query {
            LatticeQuery::Roots => value["count"].to_string(),
            LatticeQuery::WeylOrder => value["order"].to_string(),
            LatticeQuery::Discriminant => {
                let factors: Vec<String> = value["invariant_factors"].as_array().into_iter().flatten().map(|f| format!("Z/{}", f.as_str().unwrap_or("?"))).collect();
                let qs: Vec<String> = value["q_values"].as_array().into_iter().flatten().map(|q| q.as_str().unwrap_or("?").to_string()).collect();
                if factors.is_empty() {
                    "trivial".to_string()
                } else {
                    format!("{}  q = ({})", factors.join(" + "), qs.join(", "))
                }
            }
            LatticeQuery::ZForm => {
                let rows: Vec<String> = value["gram"]
                    .as_array()
                    .into_iter()
                    .flatten()
                    .map(|r| r.as_array().into_iter().flatten().map(|x| x.to_string()).collect::<Vec<_>>().join(if format == Format::Csv { "," } else { " " }))
                    .collect();
                rows.join("\n")
            }
        },
    }))
}

fn read(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serializes")
}

fn render_series(s: &TruncatedSeries, format: Format, extra: &[(&str, serde_json::Value)]) -> String {
    match format {
        Format::Json => {
            let mut v = json!({ "series": s, "display": s.to_string() });
            for (k, x) in extra {
                v[*k] = x.clone();
            }
            pretty(&v)
        }
        Format::Csv => {
            let mut out = String::from("degree,coefficient\n");
            for (d, c) in s.coeffs().iter().enumerate() {
                let _ = writeln!(out, "{d},{}", fmt_q(c));
            }
            out
        }
        Format::Latex => format!("${}$", s.to_string().replace('*', "")),
        Format::Text => s.to_string(),
    }
}

fn render_table(t: &BettiTable, format: Format, label: &str) -> String {
    match format {
        Format::Json => pretty(t),
        Format::Csv => {
            let cells: Vec<String> = t.betti().iter().map(i64::to_string).collect();
            format!("label,{}\n{label},{}\n", (0..t.betti().len()).map(|j| format!("b{j}")).collect::<Vec<_>>().join(","), cells.join(","))
        }
        Format::Latex => {
            let cells: Vec<String> = t.betti().iter().map(i64::to_string).collect();
            format!("\\begin{{array}}{{{}}}\n{}\\\\\n\\end{{array}}\n", "c".repeat(cells.len()), cells.join("&"))
        }
        Format::Text => t.to_string(),
    }
}

fn render_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => r.to_json(),
        Format::Latex => r.to_latex(),
        Format::Csv => {
            let dim = r.rows.iter().map(|x| x.table.complex_dim()).max().unwrap_or(0);
            let mut out = format!("label,{}\n", (0..=2 * dim).map(|j| format!("b{j}")).collect::<Vec<_>>().join(","));
            for row in &r.rows {
                let cells: Vec<String> = (0..=2 * dim).map(|j| row.table.betti().get(j).map_or(String::new(), i64::to_string)).collect();
                let _ = writeln!(out, "{},{}", row.label, cells.join(","));
            }
            out
        }
        Format::Text => {
            let mut out = format!("{}\n", r.title);
            let width = r.rows.iter().map(|x| x.label.len()).max().unwrap_or(0);
            for row in &r.rows {
                let even: Vec<String> = row.table.even().iter().map(i64::to_string).collect();
                let odd = if row.table.odd_vanishes() { "" } else { "  (odd cohomology present)" };
                let _ = writeln!(out, "  {:width$}  {}{odd}", row.label, even.join(" "));
            }
            for c in &r.checks {
                let _ = writeln!(out, "  check {}: {}", c.name, if c.passed { "ok" } else { "FAILED" });
            }
            for f in r.failures() {
                let _ = writeln!(out, "  failure {}: {}", f.name, f.detail);
            }
            let _ = writeln!(out, "{}", if r.passed { "all checks passed" } else { "CHECKS FAILED" });
            out
        }
    }
}
