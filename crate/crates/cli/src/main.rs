use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use icx::checker::{
    hull_report, is_global_minimizer, is_integrally_convex_function, is_integrally_convex_set, local_descent, Violation,
};
use icx::conjugacy::{
    conjugate_argmax, conjugate_table, integral_subdifferential_exact, BiconjugateCertificate, Biconjugator,
    SubdifferentialDecision,
};
use icx::dc::toland_singer;
use icx::fm_subgradient::fm_integer_subgradient;
use icx::instances::{corpus, gen_cube_subset, gen_lnat_random, gen_random_ic, gen_separable_random, verify_property};
use icx::zfunction::{indicator, parse_instance, serialize_instance, Instance, ZFunction, ZPoint};
use icx::{Error, Result};

#[derive(Parser)]
#[command(name = "icx", version, about = "Exact tools for integrally convex functions on Z^n")]
struct Cli {
    /// Worker threads for parallel library routines.
    #[arg(long, global = true, env = "ICX_THREADS")]
    threads: Option<usize>,
    /// Print a JSON object instead of `key: value` lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Set,
    Fn,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Separable,
    Lnat,
    RandomIc,
    CubeSubset,
}

#[derive(Subcommand)]
enum Command {
    /// Decide integral convexity and print a witness when it fails.
    Check {
        file: PathBuf,
        /// Read the file as a set (its domain) or as a function (sets become indicators).
        #[arg(long, value_enum)]
        kind: Option<Kind>,
    },
    /// Integer subgradient by Fourier-Motzkin back-substitution.
    Subgrad {
        file: PathBuf,
        #[arg(long, num_args = 1.., allow_negative_numbers = true, required = true)]
        at: Vec<i64>,
        /// Print per-variable bounds and choices.
        #[arg(long)]
        trace: bool,
        /// Elimination order as a permutation of 1..n.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
    /// Integral conjugate at a point, or tabulated on a box.
    Conj {
        file: PathBuf,
        #[arg(long, num_args = 1.., allow_negative_numbers = true, required_unless_present = "lo")]
        at: Option<Vec<i64>>,
        #[arg(long, num_args = 1.., allow_negative_numbers = true, requires = "hi")]
        lo: Option<Vec<i64>>,
        #[arg(long, num_args = 1.., allow_negative_numbers = true, requires = "lo")]
        hi: Option<Vec<i64>>,
    },
    /// Integral biconjugate at a point with its certificate.
    Biconj {
        file: PathBuf,
        #[arg(long, num_args = 1.., allow_negative_numbers = true, required = true)]
        at: Vec<i64>,
    },
    /// Both sides of inf (g - h) = inf (h• - g•).
    Dc {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        h: PathBuf,
    },
    /// Vertices and edge directions of the hull of a set or domain.
    Hull { file: PathBuf },
    /// Local descent over {-1,0,1} moves, certified for integrally convex input.
    Minimize {
        file: PathBuf,
        /// Start point; defaults to the smallest domain point.
        #[arg(long, num_args = 1.., allow_negative_numbers = true)]
        from: Option<Vec<i64>>,
    },
    /// Write a generated instance in the instance format.
    Gen {
        #[arg(value_enum)]
        family: Family,
        #[arg(long, num_args = 1.., allow_negative_numbers = true, required = true)]
        lo: Vec<i64>,
        #[arg(long, num_args = 1.., allow_negative_numbers = true, required = true)]
        hi: Vec<i64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        attempts: usize,
    },
    /// Recompute every expected property of the built-in corpus.
    CorpusVerify {
        /// Only this entry.
        name: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Violation => "violation",
            Status::Error => "error",
        }
    }

    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::Error => 2,
        }
    }
}

struct Report {
    status: Status,
    fields: Vec<(String, Value)>,
}

impl Report {
    fn new() -> Self {
        Report { status: Status::Ok, fields: Vec::new() }
    }

    fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.push((key.to_string(), value.into()));
    }

    fn show(&mut self, key: &str, value: impl ToString) {
        self.put(key, value.to_string());
    }

    fn print(&self, json: bool) {
        if json {
            let mut map = Map::new();
            map.insert("status".into(), self.status.as_str().into());
            for (k, v) in &self.fields {
                map.insert(k.clone(), v.clone());
            }
            println!("{}", Value::Object(map));
        } else {
            println!("status: {}", self.status.as_str());
            for (k, v) in &self.fields {
                match v {
                    Value::String(s) if s.contains('\n') => {
                        println!("{k}:");
                        for line in s.lines() {
                            println!("  {line}");
                        }
                    }
                    Value::String(s) => println!("{k}: {s}"),
                    other => println!("{k}: {other}"),
                }
            }
        }
    }
}

fn read_instance(path: &PathBuf) -> Result<Instance> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?
    };
    parse_instance(&text)
}

fn read_function(path: &PathBuf) -> Result<ZFunction> {
    read_instance(path).map(Instance::into_function)
}

fn point(f: &ZFunction, coords: &[i64]) -> Result<ZPoint> {
    if coords.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: coords.len() });
    }
    Ok(ZPoint::from_ints(coords))
}

fn put_witness(r: &mut Report, w: &Violation) {
    match w {
        Violation::SetPoint { point } => {
            r.show("witness", "set point");
            r.show("witness_point", point);
        }
        Violation::Domain { point } => {
            r.show("witness", "domain point");
            r.show("witness_point", point);
        }
        Violation::Pair { x, y, midpoint, extension, average } => {
            r.show("witness", "pair");
            r.show("witness_x", x);
            r.show("witness_y", y);
            r.show("witness_midpoint", midpoint);
            r.show("witness_extension", extension);
            r.show("witness_average", average);
        }
    }
}

fn cmd_check(file: &PathBuf, kind: Option<Kind>) -> Result<Report> {
    let instance = read_instance(file)?;
    let instance = match (kind, instance) {
        (Some(Kind::Set), Instance::Function(f)) => Instance::Set(f.domain()),
        (Some(Kind::Fn), Instance::Set(s)) => Instance::Function(indicator(&s)),
        (_, i) => i,
    };
    let mut r = Report::new();
    let verdict = match &instance {
        Instance::Set(s) => {
            r.show("kind", "set");
            r.put("points", s.len());
            is_integrally_convex_set(s)
        }
        Instance::Function(f) => {
            r.show("kind", "fn");
            r.put("points", f.len());
            is_integrally_convex_function(f)
        }
    };
    r.put("dim", instance.dim());
    r.put("integrally_convex", verdict.is_ic);
    if let Some(w) = &verdict.witness {
        r.status = Status::Violation;
        put_witness(&mut r, w);
    }
    Ok(r)
}

fn cmd_subgrad(file: &PathBuf, at: &[i64], trace: bool, order: Option<&[usize]>) -> Result<Report> {
    let f = read_function(file)?;
    let x = point(&f, at)?;
    let order: Option<Vec<usize>> = match order {
        Some(o) if o.contains(&0) => return Err(Error::InvalidArgument("order is 1-based".into())),
        Some(o) => Some(o.iter().map(|v| v - 1).collect()),
        None => None,
    };
    let mut r = Report::new();
    r.show("x", &x);
    match fm_integer_subgradient(&f, &x, order.as_deref()) {
        Ok((cert, steps)) => {
            r.show("method", "fourier-motzkin");
            r.show("p", &cert.p);
            r.put("verified_rows", cert.verified_rows);
            if trace {
                r.show("trace", &steps);
            }
        }
        Err(Error::NotIntegrallyConvex(reason)) => match integral_subdifferential_exact(&f, &x)? {
            SubdifferentialDecision::Nonempty(cert) => {
                r.show("fm_failure", reason);
                r.show("method", "exact");
                r.show("p", &cert.p);
                r.put("verified_rows", cert.verified_rows);
            }
            SubdifferentialDecision::Empty(proof) => {
                r.status = Status::Error;
                r.show("error", "integral subdifferential is empty");
                r.show("fm_failure", reason);
                r.show("proof", proof);
                if let Some(w) = is_integrally_convex_function(&f).witness {
                    put_witness(&mut r, &w);
                }
            }
        },
        Err(e) => return Err(e),
    }
    Ok(r)
}

fn cmd_conj(file: &PathBuf, at: Option<&[i64]>, lo: Option<&[i64]>, hi: Option<&[i64]>) -> Result<Report> {
    let f = read_function(file)?;
    let mut r = Report::new();
    if let (Some(lo), Some(hi)) = (lo, hi) {
        if lo.len() != f.dim() || hi.len() != f.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), found: lo.len().min(hi.len()) });
        }
        let table = conjugate_table(&f, lo, hi)?;
        r.show("table", serialize_instance(&Instance::Function(table)).trim_end());
        return Ok(r);
    }
    let p = point(&f, at.unwrap_or_default())?;
    let (value, argmax) = conjugate_argmax(&f, &p);
    r.show("p", &p);
    r.show("value", value);
    r.show("argmax", argmax.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
    Ok(r)
}

fn cmd_biconj(file: &PathBuf, at: &[i64]) -> Result<Report> {
    let f = read_function(file)?;
    let x = point(&f, at)?;
    let result = Biconjugator::new(&f).evaluate(&x);
    let fx = f.value(&x);
    let mut r = Report::new();
    r.show("x", &x);
    r.show("value", &result.value);
    r.show("f", &fx);
    r.put("gap", result.value != fx);
    match &result.certificate {
        BiconjugateCertificate::Subgradient(cert) => {
            r.show("certificate", "subgradient");
            r.show("p", &cert.p);
        }
        BiconjugateCertificate::Separation { direction } => {
            r.show("certificate", "separation");
            r.show("direction", direction);
        }
        BiconjugateCertificate::Search { argmax, bound, stable } => {
            r.show("certificate", "search");
            r.show("argmax", argmax);
            r.put("bound", *bound);
            r.put("stable", *stable);
        }
    }
    Ok(r)
}

fn cmd_dc(g: &PathBuf, h: &PathBuf) -> Result<Report> {
    let g = read_function(g)?;
    let h = read_function(h)?;
    let d = toland_singer(&g, &h)?;
    let mut r = Report::new();
    r.show("primal", &d.primal);
    r.show("dual", &d.dual);
    r.put("equal", d.equal);
    r.show("primal_argmin", &d.primal_argmin);
    if let Some(p) = &d.dual_argmin {
        r.show("dual_argmin", p);
    }
    r.put("stable", d.stable);
    if let Some(q) = &d.argmin_subgradient {
        r.show("argmin_subgradient", q);
        r.put("subgradient_attains_dual", d.subgradient_attains_dual);
    }
    if let Some(c) = &d.separation {
        r.show("separation", c);
    }
    if !d.equal {
        r.status = Status::Violation;
        r.show("witness", format!("primal {} differs from dual {}", d.primal, d.dual));
    }
    Ok(r)
}

fn cmd_hull(file: &PathBuf) -> Result<Report> {
    let s = read_function(file)?.domain();
    let h = hull_report(&s);
    let join = |v: Vec<String>| v.join(" ");
    let mut r = Report::new();
    r.put("vertex_count", h.vertices.len());
    r.show("vertices", join(h.vertices.iter().map(ToString::to_string).collect()));
    r.put("vertices_integral", h.all_vertices_integral);
    r.show("edge_directions", join(h.edge_primitive_directions.iter().map(ToString::to_string).collect()));
    r.put("directions_in_pm1", h.directions_in_pm1);
    r.put("hole_free", h.hole_free);
    let verdict = is_integrally_convex_set(&s);
    r.put("integrally_convex", verdict.is_ic);
    if let Some(w) = &verdict.witness {
        r.status = Status::Violation;
        put_witness(&mut r, w);
    }
    Ok(r)
}

fn cmd_minimize(file: &PathBuf, from: Option<&[i64]>) -> Result<Report> {
    let f = read_function(file)?;
    let start = match from {
        Some(c) => point(&f, c)?,
        None => f.domain_points().next().expect("nonempty domain").clone(),
    };
    let (x, moves) = local_descent(&f, &start)?;
    let verdict = is_integrally_convex_function(&f);
    let mut r = Report::new();
    r.show("start", &start);
    r.show("point", &x);
    r.show("value", f.get(&x).expect("descent stays in the domain"));
    r.put("moves", moves);
    r.put("local_minimum", is_global_minimizer(&f, &x, false)?);
    r.put("certified_global", verdict.is_ic);
    if let Some(w) = &verdict.witness {
        r.status = Status::Violation;
        put_witness(&mut r, w);
    }
    Ok(r)
}

fn cmd_gen(family: Family, lo: &[i64], hi: &[i64], seed: u64, attempts: usize) -> Result<Report> {
    if lo.len() != hi.len() {
        return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
    }
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return Err(Error::InvalidArgument("empty box".into()));
    }
    let f = match family {
        Family::Separable => gen_separable_random(lo, hi, seed),
        Family::Lnat => gen_lnat_random(lo, hi, seed),
        Family::RandomIc => gen_random_ic(lo, hi, seed, attempts)?,
        Family::CubeSubset => gen_cube_subset(lo.len(), seed),
    };
    let mut r = Report::new();
    r.show("instance", serialize_instance(&Instance::Function(f)));
    Ok(r)
}

fn cmd_corpus_verify(name: Option<&str>) -> Result<Report> {
    let entries: Vec<_> = corpus().into_iter().filter(|e| name.is_none_or(|n| n == e.name)).collect();
    if entries.is_empty() {
        return Err(Error::InvalidArgument(format!("no corpus entry named {}", name.unwrap_or_default())));
    }
    let mut r = Report::new();
    let mut failures = 0;
    for e in &entries {
        for prop in &e.expected {
            let c = verify_property(&e.instance, prop);
            let line = if c.ok { "ok".to_string() } else { format!("FAIL expected {} got {}", c.expected, c.actual) };
            failures += usize::from(!c.ok);
            r.put(&format!("{} {}", e.name, c.property), line);
        }
    }
    r.put("failures", failures);
    if failures > 0 {
        r.status = Status::Violation;
        r.show("witness", format!("{failures} expectation(s) not reproduced"));
    }
    Ok(r)
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Check { file, kind } => cmd_check(file, *kind),
        Command::Subgrad { file, at, trace, order } => cmd_subgrad(file, at, *trace, order.as_deref()),
        Command::Conj { file, at, lo, hi } => cmd_conj(file, at.as_deref(), lo.as_deref(), hi.as_deref()),
        Command::Biconj { file, at } => cmd_biconj(file, at),
        Command::Dc { g, h } => cmd_dc(g, h),
        Command::Hull { file } => cmd_hull(file),
        Command::Minimize { file, from } => cmd_minimize(file, from.as_deref()),
        Command::Gen { family, lo, hi, seed, attempts } => cmd_gen(*family, lo, hi, *seed, *attempts),
        Command::CorpusVerify { name } => cmd_corpus_verify(name.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: {e}");
        }
    }
    let report = run(&cli).unwrap_or_else(|e| {
        let mut r = Report::new();
        r.status = Status::Error;
        r.show("error", e);
        r
    });
    if !cli.json {
        if let (Command::Gen { .. }, Status::Ok) = (&cli.command, report.status) {
            // Raw instance text so the output can be fed back in.
            if let Some((_, Value::String(text))) = report.fields.first() {
                print!("{text}");
                return ExitCode::SUCCESS;
            }
        }
    }
    report.print(cli.json);
    ExitCode::from(report.status.code())
}
