//! `quasibetti` command line.
//!
//! Exit status: 0 on success, 1 on a domain error (JSON report on stderr),
//! 2 on a usage error.

mod selftest;

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use quasibetti::asymptotics::{certify_ci_bridge, detect_regions, predict, weight_system_of, RegionOptions};
use quasibetti::betti::{betti_family, graded_betti, multigraded_betti, taylor_betti_oracle, BettiTable};
use quasibetti::exactlinalg::{hnf, IntegerMatrix};
use quasibetti::genfun::{brion_check, IntBox};
use quasibetti::monomial::{
    good_filtration_check, integral_closure_power, is_reduction, ratliff_rush, Filtration, FiltrationKind,
    MonomialIdeal, RATLIFF_RUSH_HORIZON,
};
use quasibetti::partition::{
    chamber_complex, default_fit_window, default_validate_window, fit_quasi_polynomial, ChamberFit, Window,
    WeightSystem,
};
use quasibetti::polyhedra::{count_lattice_points, fiber_polytope, pick_count, reduce_to_full_dim};
use quasibetti::serde_util::big_to_string;
use quasibetti::Error;

#[derive(Parser, Debug)]
#[command(name = "quasibetti", version, about = "Vector partition functions, chamber quasi-polynomials and Betti tables of monomial filtrations")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Run the built-in examples of this subcommand and report.
    #[arg(long)]
    selftest: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hermite normal form A U = H of an integer matrix.
    Hnf {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Full-dimensional reduction of the fiber polytope {x >= 0 : A x = b}.
    Reduce {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Right-hand side, comma separated.
        #[arg(long)]
        rhs: Option<String>,
    },
    /// Number of lattice points of the fiber polytope.
    Count {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        rhs: Option<String>,
    },
    /// Vector partition function of the weight matrix [[d_1..d_r],[1..1]].
    Vpf {
        #[command(flatten)]
        common: Common,
        /// Degrees, comma separated.
        #[arg(long)]
        degrees: Option<String>,
        /// Single point "mu,t".
        #[arg(long)]
        point: Option<String>,
        /// List all nonzero values for t <= t_max instead of one point.
        #[arg(long)]
        t_max: Option<i64>,
    },
    /// Chambers of the weight cone with their period lattices.
    Chambers {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        degrees: Option<String>,
    },
    /// Fit and certify chamber quasi-polynomials.
    Fit {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        degrees: Option<String>,
        /// Fitting window in t, "a..b".
        #[arg(long)]
        fit: Option<String>,
        /// Validation window in t, "a..b".
        #[arg(long)]
        validate: Option<String>,
        /// Only this chamber (index from 0).
        #[arg(long)]
        chamber: Option<usize>,
    },
    /// Operations on a monomial ideal.
    Ideal {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ideal: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = IdealOp::Show)]
        op: IdealOp,
        /// Exponent for power and closure.
        #[arg(long, default_value_t = 1)]
        t: u32,
        /// Second ideal for product and colon; for reduction, the ideal that
        /// --ideal is tested against.
        #[arg(long)]
        with: Option<PathBuf>,
        #[arg(long, default_value_t = RATLIFF_RUSH_HORIZON)]
        horizon: u32,
    },
    /// Materialize a filtration and check whether it is I-good.
    Filtration {
        #[command(flatten)]
        common: Common,
        /// powers | integral-closure | ratliff-rush | explicit (explicit reads
        /// the filtration JSON from --ideal).
        #[arg(long)]
        filtration: Option<String>,
        #[arg(long)]
        ideal: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        horizon: u32,
    },
    /// Graded Betti table of an ideal, or of every term of a filtration.
    Betti {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ideal: Option<PathBuf>,
        /// Compute the family over a filtration of this kind.
        #[arg(long)]
        filtration: Option<String>,
        #[arg(long, default_value_t = 4)]
        horizon: u32,
        /// Report multidegrees instead of total degrees.
        #[arg(long)]
        multigraded: bool,
        /// Use the Taylor-complex oracle.
        #[arg(long)]
        taylor: bool,
    },
    /// Detect and certify the region description of a Betti family.
    Regions {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "powers")]
        filtration: String,
        #[arg(long)]
        ideal: Option<PathBuf>,
        /// Homological degree.
        #[arg(long, default_value_t = 0)]
        i: usize,
        #[arg(long)]
        fit: Option<String>,
        #[arg(long)]
        validate: Option<String>,
        /// Total degree bound for region polynomials.
        #[arg(long)]
        degree_cap: Option<u32>,
        /// Also evaluate the description at "mu,t".
        #[arg(long)]
        predict: Option<String>,
    },
    /// Brion identity on a lattice point, segment or convex polygon.
    Brion {
        #[command(flatten)]
        common: Common,
        /// Vertices "x,y;x,y;..." (or "a;b" for a segment).
        #[arg(long)]
        polygon: Option<String>,
        /// Comparison box "lo..hi" applied to every coordinate.
        #[arg(long = "box", allow_hyphen_values = true)]
        bounds: Option<String>,
    },
    /// Check beta_0 of powers of (x_1^d_1, ..., x_r^d_r) against the partition function.
    CertifyCi {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        degrees: Option<String>,
        #[arg(long, default_value_t = 4)]
        t_max: u32,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Hnf { .. } => "hnf",
            Command::Reduce { .. } => "reduce",
            Command::Count { .. } => "count",
            Command::Vpf { .. } => "vpf",
            Command::Chambers { .. } => "chambers",
            Command::Fit { .. } => "fit",
            Command::Ideal { .. } => "ideal",
            Command::Filtration { .. } => "filtration",
            Command::Betti { .. } => "betti",
            Command::Regions { .. } => "regions",
            Command::Brion { .. } => "brion",
            Command::CertifyCi { .. } => "certify-ci",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Hnf { common, .. }
            | Command::Reduce { common, .. }
            | Command::Count { common, .. }
            | Command::Vpf { common, .. }
            | Command::Chambers { common, .. }
            | Command::Fit { common, .. }
            | Command::Ideal { common, .. }
            | Command::Filtration { common, .. }
            | Command::Betti { common, .. }
            | Command::Regions { common, .. }
            | Command::Brion { common, .. }
            | Command::CertifyCi { common, .. } => common,
        }
    }
}

/// Reasons a run stops early.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(Error),
    Malformed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// Rendered result in all formats.
struct Output {
    json: Value,
    table: String,
    csv: String,
}

impl Output {
    fn new(json: Value, table: impl Into<String>, csv: impl Into<String>) -> Self {
        Output {
            json,
            table: table.into(),
            csv: csv.into(),
        }
    }

    fn render(&self, format: Format) -> String {
        let mut s = match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable"),
            Format::Table => self.table.clone(),
            Format::Csv => self.csv.clone(),
        };
        if !s.ends_with('\n') {
            s.push('\n');
        }
        s
    }
}

fn required<T: Clone>(v: &Option<T>, flag: &str) -> Run<T> {
    v.clone().ok_or_else(|| Failure::Usage(format!("missing required argument --{flag}")))
}

fn read_file(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Run<T> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

/// Accepts the matrix JSON object or a bare list of rows.
fn read_matrix(path: &Path) -> Run<IntegerMatrix> {
    let text = read_file(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    let value = match value {
        Value::Array(rows) => {
            let r = rows.len();
            let c = rows.first().and_then(Value::as_array).map_or(0, Vec::len);
            json!({"rows": r, "cols": c, "entries": rows})
        }
        v => v,
    };
    serde_json::from_value(value).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Run<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| Failure::Usage(format!("invalid {what} {s:?}"))))
        .collect()
}

fn parse_range(s: &str, what: &str) -> Run<RangeInclusive<i64>> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Failure::Usage(format!("--{what} expects a..b, got {s:?}")))?;
    let a: i64 = a.trim().parse().map_err(|_| Failure::Usage(format!("invalid --{what} {s:?}")))?;
    let b: i64 = b.trim().trim_start_matches('=').parse().map_err(|_| Failure::Usage(format!("invalid --{what} {s:?}")))?;
    if a < 0 || b < a {
        return Err(Failure::Usage(format!("--{what} must satisfy 0 <= a <= b, got {s:?}")));
    }
    Ok(a..=b)
}

fn parse_signed_range(s: &str, what: &str) -> Run<RangeInclusive<i64>> {
    let bad = || Failure::Usage(format!("--{what} expects lo..hi, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if b < a {
        return Err(bad());
    }
    Ok(a..=b)
}

fn weights(degrees: &Option<String>) -> Run<WeightSystem> {
    let ds = parse_list::<i64>(&required(degrees, "degrees")?, "degrees")?;
    WeightSystem::new(ds).map_err(Failure::from)
}

fn filtration_of(kind: &str, ideal: &Path, horizon: u32) -> Run<Filtration> {
    let kind: FiltrationKind = kind.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    if kind == FiltrationKind::Explicit {
        return parse_json(ideal);
    }
    let base: MonomialIdeal = parse_json(ideal)?;
    Ok(Filtration::new(kind, base, horizon)?)
}

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(big_to_string).collect()
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn betti_csv_rows(t: Option<u32>, table: &BettiTable) -> String {
    table
        .entries
        .iter()
        .map(|(&(i, mu), b)| match t {
            Some(t) => format!("{t},{i},{mu},{b}\n"),
            None => format!("{i},{mu},{b}\n"),
        })
        .collect()
}

fn run_command(cmd: &Command) -> Run<Output> {
    match cmd {
        Command::Hnf { matrix, .. } => {
            let a = read_matrix(&required(matrix, "matrix")?)?;
            let res = hnf(&a);
            let table = format!("H =\n{}\nU =\n{}", res.h, res.u);
            let csv = res
                .h
                .to_rows()
                .iter()
                .map(|r| strings(r).join(","))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Output::new(to_json(&res), table, csv))
        }
        Command::Reduce { matrix, rhs, .. } => {
            let a = read_matrix(&required(matrix, "matrix")?)?;
            let b = parse_list::<BigInt>(&required(rhs, "rhs")?, "right-hand side")?;
            if b.len() != a.rows() {
                return Err(Failure::Domain(Error::DimensionMismatch(format!(
                    "right-hand side of length {} for {} rows",
                    b.len(),
                    a.rows()
                ))));
            }
            match reduce_to_full_dim(&a, &b)? {
                None => Ok(Output::new(
                    json!({"feasible": false}),
                    "no integer solution of A x = b",
                    "feasible\nfalse",
                )),
                Some(r) => {
                    let table = format!(
                        "x0 = [{}]\ngenerators =\n{}\nQ: M l <= c with M =\n{}\nc = [{}]",
                        strings(&r.x0).join(", "),
                        r.generators,
                        r.q.ineq.a,
                        strings(&r.q.ineq.b).join(", ")
                    );
                    let csv = r
                        .q
                        .ineq
                        .a
                        .to_rows()
                        .iter()
                        .zip(&r.q.ineq.b)
                        .map(|(row, c)| format!("{},{}", strings(row).join(","), c))
                        .collect::<Vec<_>>()
                        .join("\n");
                    let mut v = to_json(&r);
                    v["feasible"] = json!(true);
                    Ok(Output::new(v, table, csv))
                }
            }
        }
        Command::Count { matrix, rhs, .. } => {
            let a = read_matrix(&required(matrix, "matrix")?)?;
            let b = parse_list::<BigInt>(&required(rhs, "rhs")?, "right-hand side")?;
            let n = count_lattice_points(&fiber_polytope(&a, &b)?)?;
            Ok(Output::new(
                json!({"rhs": strings(&b), "count": big_to_string(&n)}),
                n.to_string(),
                format!("count\n{n}"),
            ))
        }
        Command::Vpf { degrees, point, t_max, .. } => {
            let w = weights(degrees)?;
            if let Some(p) = point {
                let p = parse_list::<i64>(p, "point")?;
                let [mu, t] = p[..] else {
                    return Err(Failure::Usage("--point expects mu,t".into()));
                };
                let v = w.evaluate(mu, t);
                return Ok(Output::new(
                    json!({"degrees": w.degrees(), "mu": mu, "t": t, "value": big_to_string(&v)}),
                    v.to_string(),
                    format!("mu,t,value\n{mu},{t},{v}"),
                ));
            }
            let t_max = t_max.ok_or_else(|| Failure::Usage("vpf needs --point or --t-max".into()))?;
            let top = *w.degrees().last().expect("nonempty");
            let mut rows = Vec::new();
            for t in 0..=t_max {
                for mu in 0..=top * t {
                    let v = w.evaluate(mu, t);
                    if v != BigInt::from(0) {
                        rows.push((mu, t, v));
                    }
                }
            }
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|(mu, t, v)| json!({"mu": mu, "t": t, "value": big_to_string(v)}))
                .collect();
            let table = rows.iter().map(|(mu, t, v)| format!("{t:>4} {mu:>6} {v:>10}")).collect::<Vec<_>>();
            let csv = rows.iter().map(|(mu, t, v)| format!("{mu},{t},{v}")).collect::<Vec<_>>();
            Ok(Output::new(
                json!({"degrees": w.degrees(), "values": json_rows}),
                format!("{:>4} {:>6} {:>10}\n{}", "t", "mu", "phi", table.join("\n")),
                format!("mu,t,value\n{}", csv.join("\n")),
            ))
        }
        Command::Chambers { degrees, .. } => {
            let w = weights(degrees)?;
            let cs = chamber_complex(&w);
            let table = cs
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    format!(
                        "{k}: rays ({},{})-({},{})  det {}  global det {}",
                        c.low_ray[0],
                        c.low_ray[1],
                        c.high_ray[0],
                        c.high_ray[1],
                        c.lattice.determinant(),
                        c.global_lattice.determinant()
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            let csv = cs
                .iter()
                .enumerate()
                .map(|(k, c)| format!("{k},{},{},{}", c.low_ray[0], c.high_ray[0], c.lattice.determinant()))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Output::new(
                json!({"chambers": to_json(&cs)}),
                table,
                format!("chamber,low,high,det\n{csv}"),
            ))
        }
        Command::Fit { degrees, fit, validate, chamber, .. } => {
            let w = weights(degrees)?;
            let fit_w = match fit {
                Some(s) => Window::new(parse_range(s, "fit")?),
                None => default_fit_window(&w),
            };
            let val_w = match validate {
                Some(s) => Window::new(parse_range(s, "validate")?),
                None => default_validate_window(&fit_w),
            };
            let cs = chamber_complex(&w);
            let selected: Vec<_> = match chamber {
                Some(k) => vec![cs
                    .get(*k)
                    .ok_or_else(|| Failure::Usage(format!("chamber {k} out of range ({} chambers)", cs.len())))?
                    .clone()],
                None => cs,
            };
            let mut fits = Vec::new();
            for c in &selected {
                fits.push(ChamberFit::new(c, fit_quasi_polynomial(&w, c, &fit_w, &val_w)?));
            }
            let mut table = String::new();
            let mut csv = String::from("chamber,rep_mu,rep_t,poly\n");
            for (k, f) in fits.iter().enumerate() {
                table.push_str(&format!(
                    "chamber {k}: rays {:?}, lattice det {}\n",
                    f.rays.iter().map(|r| strings(r)).collect::<Vec<_>>(),
                    f.lattice.determinant()
                ));
                for c in &f.cosets {
                    table.push_str(&format!("  [{}]  {}\n", strings(&c.rep).join(","), c.poly));
                    csv.push_str(&format!("{k},{},{},\"{}\"\n", c.rep[0], c.rep[1], c.poly));
                }
            }
            Ok(Output::new(json!({"chambers": to_json(&fits)}), table, csv))
        }
        Command::Ideal { ideal, op, t, with, horizon, .. } => {
            let i: MonomialIdeal = parse_json(&required(ideal, "ideal")?)?;
            let other = || -> Run<MonomialIdeal> { parse_json(&required(with, "with")?) };
            let (result, extra): (Option<MonomialIdeal>, Value) = match op {
                IdealOp::Show => (Some(i.clone()), Value::Null),
                IdealOp::Power => (Some(i.power(*t)), Value::Null),
                IdealOp::Closure => (Some(integral_closure_power(&i, *t)), Value::Null),
                IdealOp::RatliffRush => {
                    let r = ratliff_rush(&i, *horizon);
                    let status = if r.stabilized { "stabilized" } else { "horizon-truncated" };
                    (Some(r.ideal), json!({"status": status, "steps": r.steps}))
                }
                IdealOp::Product => (Some(i.multiply(&other()?)?), Value::Null),
                IdealOp::Colon => (Some(i.colon(&other()?)?), Value::Null),
                IdealOp::Reduction => {
                    let r = is_reduction(&i, &other()?, *horizon)?;
                    (None, json!({"reduction_number": r}))
                }
            };
            match result {
                Some(res) => {
                    let mut v = to_json(&res);
                    if !extra.is_null() {
                        v["closure"] = extra;
                    }
                    let csv = res
                        .generators()
                        .iter()
                        .map(|g| g.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
                        .collect::<Vec<_>>()
                        .join("\n");
                    Ok(Output::new(v, res.to_string(), csv))
                }
                None => {
                    let r = &extra["reduction_number"];
                    let text = if r.is_null() {
                        format!("not a reduction within horizon {horizon}")
                    } else {
                        format!("reduction number {r}")
                    };
                    Ok(Output::new(extra.clone(), text, format!("reduction_number\n{r}")))
                }
            }
        }
        Command::Filtration { filtration, ideal, horizon, .. } => {
            let f = filtration_of(&required(filtration, "filtration")?, &required(ideal, "ideal")?, *horizon)?;
            let report = good_filtration_check(&f, &f.base)?;
            let mut table = String::new();
            for (t, j) in f.terms().iter().enumerate() {
                table.push_str(&format!("J_{t} = {j}\n"));
            }
            table.push_str(&match report.n0 {
                Some(n0) => format!("I-good: containment holds, J_(n+1) = I J_n for {n0} <= n < {}\n", f.horizon),
                None => format!("containment holds; not yet stable at horizon {}\n", f.horizon),
            });
            let csv = f
                .terms()
                .iter()
                .enumerate()
                .flat_map(|(t, j)| {
                    j.generators()
                        .iter()
                        .map(move |g| format!("{t},{}", g.iter().map(u32::to_string).collect::<Vec<_>>().join(",")))
                })
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Output::new(
                json!({"filtration": to_json(&f), "report": to_json(&report), "truncated": f.truncated}),
                table,
                csv,
            ))
        }
        Command::Betti { ideal, filtration, horizon, multigraded, taylor, .. } => {
            let path = required(ideal, "ideal")?;
            if let Some(kind) = filtration {
                let f = filtration_of(kind, &path, *horizon)?;
                let fam = betti_family(&f)?;
                let mut table = String::new();
                let mut csv = String::from("t,i,mu,beta\n");
                for (t, tab) in &fam.tables {
                    table.push_str(&format!("t = {t}\n{tab}\n"));
                    csv.push_str(&betti_csv_rows(Some(*t), tab));
                }
                return Ok(Output::new(to_json(&fam), table, csv));
            }
            let i: MonomialIdeal = parse_json(&path)?;
            if *multigraded || *taylor {
                let m = if *taylor { taylor_betti_oracle(&i)? } else { multigraded_betti(&i)? };
                let rows: Vec<Value> = m
                    .iter()
                    .map(|((k, alpha), b)| json!({"i": k, "alpha": alpha, "beta": b.to_string()}))
                    .collect();
                let text = m
                    .iter()
                    .map(|((k, alpha), b)| format!("{k} {alpha:?} {b}"))
                    .collect::<Vec<_>>()
                    .join("\n");
                let csv = m
                    .iter()
                    .map(|((k, alpha), b)| {
                        format!("{k},{},{b}", alpha.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
                    })
                    .collect::<Vec<_>>()
                    .join("\n");
                return Ok(Output::new(json!({"entries": rows}), text, csv));
            }
            let t = graded_betti(&i)?;
            Ok(Output::new(to_json(&t), t.to_string(), t.to_csv()))
        }
        Command::Regions { filtration, ideal, i, fit, validate, degree_cap, predict: at, .. } => {
            let fit = parse_range(&required(fit, "fit")?, "fit")?;
            let validate = parse_range(&required(validate, "validate")?, "validate")?;
            let horizon = (*fit.end()).max(*validate.end()) as u32;
            let f = filtration_of(filtration, &required(ideal, "ideal")?, horizon)?;
            let fam = betti_family(&f)?;
            let w = weight_system_of(&f.base)?;
            let opts = RegionOptions {
                degree_cap: *degree_cap,
                ..RegionOptions::default()
            };
            let r = detect_regions(&fam, *i, &w, fit, validate, &opts)?;
            let mut v = to_json(&r);
            let mut table = format!("i = {}, t0 = {}, D = {}\nlines:\n", r.i, r.t0, r.d);
            for (k, l) in r.lines.iter().enumerate() {
                table.push_str(&format!("  L_{k}(t) = {}t + {}\n", l.a, l.b));
            }
            table.push_str("polynomials:\n");
            let mut csv = String::from("region,j,poly\n");
            for p in &r.polys {
                table.push_str(&format!("  region {} j {}: {}\n", p.region, p.j, p.poly));
                csv.push_str(&format!("{},{},\"{}\"\n", p.region, p.j, p.poly));
            }
            if let Some(s) = at {
                let p = parse_list::<i64>(s, "point")?;
                let [mu, t] = p[..] else {
                    return Err(Failure::Usage("--predict expects mu,t".into()));
                };
                let value = predict(&r, mu, t)?;
                v["prediction"] = json!({"mu": mu, "t": t, "value": big_to_string(&value)});
                table.push_str(&format!("prediction at ({mu}, {t}): {value}\n"));
            }
            Ok(Output::new(v, table, csv))
        }
        Command::Brion { polygon, bounds, .. } => {
            let text = required(polygon, "polygon")?;
            let verts: Vec<Vec<BigInt>> = text
                .split(';')
                .map(|p| parse_list::<BigInt>(p, "vertex"))
                .collect::<Run<_>>()?;
            let dim = verts.first().map_or(0, Vec::len);
            if dim == 0 || verts.iter().any(|v| v.len() != dim) {
                return Err(Failure::Usage("vertices must share one dimension".into()));
            }
            let bx = parse_signed_range(&required(bounds, "box")?, "box")?;
            let bounds = IntBox::new(vec![*bx.start(); dim], vec![*bx.end(); dim]);
            let rep = brion_check(&verts, &bounds)?;
            let points: Vec<Value> = rep
                .cone_sum
                .coefficients
                .iter()
                .filter(|(_, c)| **c != BigInt::from(0))
                .map(|(p, c)| json!({"point": strings(p), "coefficient": big_to_string(c)}))
                .collect();
            let mut v = json!({
                "holds": rep.holds,
                "genfun": to_json(&rep.genfun),
                "series": points,
            });
            let mut table = format!(
                "Brion identity {} on box {}..{} ({} vertex-cone terms, {} lattice points)\n",
                if rep.holds { "holds" } else { "FAILS" },
                bx.start(),
                bx.end(),
                rep.genfun.terms.len(),
                points.len()
            );
            if dim == 2 && verts.len() >= 3 {
                let vs: Vec<(i64, i64)> = verts
                    .iter()
                    .map(|p| (i64::try_from(&p[0]).unwrap_or(0), i64::try_from(&p[1]).unwrap_or(0)))
                    .collect();
                if let Ok(n) = pick_count(&vs) {
                    v["pick_count"] = json!(big_to_string(&n));
                    table.push_str(&format!("Pick count {n}\n"));
                }
            }
            let csv = rep
                .cone_sum
                .coefficients
                .iter()
                .map(|(p, c)| format!("{},{}", strings(p).join(","), c))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Output::new(v, table, csv))
        }
        Command::CertifyCi { degrees, t_max, .. } => {
            let ds = parse_list::<u32>(&required(degrees, "degrees")?, "degrees")?;
            if ds.contains(&0) {
                return Err(Failure::Domain(Error::InvalidInput("degrees must be positive".into())));
            }
            let rep = certify_ci_bridge(&ds, *t_max)?;
            let table = match &rep.first_discrepancy {
                None => format!("holds for degrees {:?}, t <= {} ({} values compared)", rep.degrees, rep.t_max, rep.checked),
                Some(d) => format!("fails at (mu, t) = ({}, {}): beta_0 = {}, phi = {}", d.mu, d.t, d.betti, d.phi),
            };
            Ok(Output::new(
                to_json(&rep),
                table,
                format!("holds,checked\n{},{}", rep.holds, rep.checked),
            ))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum IdealOp {
    Show,
    Power,
    Closure,
    RatliffRush,
    Product,
    Colon,
    Reduction,
}

fn report_failure(f: &Failure) -> ExitCode {
    match f {
        Failure::Usage(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Failure::Domain(e) => {
            let mut v = json!({"code": e.code(), "message": e.to_string()});
            if let Some(w) = e.witness() {
                v["witness"] = json!(w);
            }
            eprintln!("{v}");
            ExitCode::from(1)
        }
        Failure::Malformed(msg) => {
            eprintln!("{}", json!({"code": "malformed_input", "message": msg}));
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = if cli.command.common().selftest {
        let rep = selftest::run(cli.command.name());
        let failed = rep.failed();
        let out = Output::new(to_json(&rep), rep.to_string(), rep.to_csv());
        if failed {
            Err((out, ExitCode::from(1)))
        } else {
            Ok(out)
        }
    } else {
        match run_command(&cli.command) {
            Ok(out) => Ok(out),
            Err(f) => return report_failure(&f),
        }
    };
    let (out, code) = match result {
        Ok(out) => (out, ExitCode::SUCCESS),
        Err((out, code)) => (out, code),
    };
    let text = out.render(cli.format);
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                return report_failure(&Failure::Malformed(format!("cannot write {}: {e}", path.display())));
            }
        }
        None => print!("{text}"),
    }
    code
}
