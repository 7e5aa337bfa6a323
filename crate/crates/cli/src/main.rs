//! `adlv`: command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 computation error, 3 a budget
//! truncated the result and `--strict` was given.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use adlv_core::folding::fold_all;
use adlv_core::gallery::{ConjugacyRep, GalleryType};
use adlv_core::render::{render_ascii, render_svg, RenderSpec};
use adlv_core::serialize::{
    chamber_set_document, extended_document, from_json, parse_chamber_set, parse_verdict_map,
    to_json, verdict_document,
};
use adlv_core::solver::{
    compare, extended_decorate, gl2_variants, sl2_table, solve, Gl2Variant, Group,
};
use adlv_core::subset::certified_subset;
use adlv_core::superset::{superset, Method};
use adlv_core::{root_system, Budgets, ChamberSet, Kind, SetKind, Window};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "adlv", version, about = "Non-emptiness of affine Deligne-Lusztig sets in rank 1 and 2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verdict for every chamber in the window.
    Solve,
    /// Chambers that may be nonempty.
    Superset,
    /// Chambers certified nonempty.
    Subset,
    /// Compare two chamber-set documents, or the subset with the superset.
    Compare {
        #[arg(long)]
        left: Option<PathBuf>,
        #[arg(long)]
        right: Option<PathBuf>,
    },
    /// Fold one gallery type, given as cotype labels ("0 0", "0,2,1" or "021").
    Fold {
        labels: String,
        /// Start chamber, e.g. "t[0,0,0]·w0" (default C_M).
        #[arg(long)]
        start: Option<String>,
    },
    /// Draw a solve result, or a saved document given with --input.
    Render {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// The rank-one inverse tables: for each chamber index, the values of s.
    Sl2Table {
        #[arg(long, default_value_t = 9)]
        max: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
    Ascii,
}

#[derive(Args, Debug, Default, Clone)]
struct Opts {
    #[arg(long, global = true)]
    group: Option<String>,
    /// Exponents of b, comma separated.
    #[arg(long, global = true, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, global = true)]
    radius: Option<usize>,
    #[arg(long, global = true)]
    pmax: Option<usize>,
    #[arg(long, global = true)]
    qmax: Option<usize>,
    #[arg(long, global = true)]
    depbudget: Option<usize>,
    #[arg(long, global = true)]
    method: Option<String>,
    #[arg(long, global = true)]
    format: Option<Format>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    seed_only: bool,
    /// key=value file; command-line flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Exit with 3 when a budget truncated the result.
    #[arg(long, global = true)]
    strict: bool,
}

enum Failure {
    Usage(String),
    Compute(String),
}

type Res<T> = std::result::Result<T, Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn compute<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Compute(e.to_string())
}

/// Options after merging the config file, with defaults filled in.
struct Resolved {
    group: Group,
    b: Option<Vec<i64>>,
    radius: usize,
    budgets: Budgets,
    method: Method,
    format: Option<Format>,
    out: Option<PathBuf>,
    threads: Option<usize>,
    seed_only: bool,
    strict: bool,
}

fn parse_config(path: &PathBuf) -> Res<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("{}:{}: expected key=value", path.display(), n + 1)))?;
        map.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

fn resolve(o: &Opts) -> Res<Resolved> {
    let cfg = match &o.config {
        Some(p) => parse_config(p)?,
        None => BTreeMap::new(),
    };
    const KEYS: [&str; 12] = [
        "group", "b", "radius", "pmax", "qmax", "depbudget", "method", "format", "out", "threads",
        "seed-only", "strict",
    ];
    if let Some(k) = cfg.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(usage(format!("unknown config key {k:?}")));
    }
    let pick = |flag: &Option<String>, key: &str| flag.clone().or_else(|| cfg.get(key).cloned());
    let num = |flag: Option<usize>, key: &str| -> Res<Option<usize>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => cfg
                .get(key)
                .map(|v| v.parse().map_err(|_| usage(format!("{key}: not a number: {v}"))))
                .transpose(),
        }
    };
    let truthy = |flag: bool, key: &str| flag || cfg.get(key).is_some_and(|v| v == "true" || v == "1");

    let group: Group = pick(&o.group, "group")
        .unwrap_or_else(|| "sl3".into())
        .parse()
        .map_err(usage)?;
    let b = pick(&o.b, "b")
        .map(|s| {
            s.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| usage(format!("bad exponent {x:?} in --b"))))
                .collect::<Res<Vec<i64>>>()
        })
        .transpose()?;
    let d = Budgets::default();
    let budgets = Budgets {
        p_max: num(o.pmax, "pmax")?.unwrap_or(d.p_max),
        q_max: num(o.qmax, "qmax")?.unwrap_or(d.q_max),
        dep_budget: num(o.depbudget, "depbudget")?.unwrap_or(d.dep_budget),
        stability_window: d.stability_window,
    };
    if budgets.q_max == 0 || budgets.p_max == 0 {
        return Err(usage("--pmax and --qmax must be at least 1"));
    }
    let method: Method = pick(&o.method, "method")
        .unwrap_or_else(|| "classes".into())
        .parse()
        .map_err(usage)?;
    let format = match o.format {
        Some(f) => Some(f),
        None => cfg
            .get("format")
            .map(|v| Format::from_str(v, true).map_err(usage))
            .transpose()?,
    };
    Ok(Resolved {
        group,
        b,
        radius: num(o.radius, "radius")?.unwrap_or(8),
        budgets,
        method,
        format,
        out: o.out.clone().or_else(|| cfg.get("out").map(PathBuf::from)),
        threads: num(o.threads, "threads")?,
        seed_only: truthy(o.seed_only, "seed-only"),
        strict: truthy(o.strict, "strict"),
    })
}

impl Resolved {
    fn kind(&self) -> Kind {
        self.group.kind()
    }

    /// The representative for the simply-connected form; `--b` defaults to 1.
    fn rep(&self) -> Res<ConjugacyRep> {
        let rs = root_system(self.kind());
        match &self.b {
            None => Ok(ConjugacyRep::identity(self.kind())),
            Some(e) => ConjugacyRep::new(rs, e).map_err(usage),
        }
    }

    fn emit(&self, text: &str) -> Res<()> {
        match &self.out {
            Some(p) => fs::write(p, text).map_err(|e| compute(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn draw(kind: Kind, spec: &RenderSpec, f: Format) -> Res<String> {
    let rs = root_system(kind);
    match f {
        Format::Svg => render_svg(rs, spec).map_err(compute),
        Format::Ascii => render_ascii(rs, spec).map_err(compute),
        Format::Json => unreachable!("json is handled by the caller"),
    }
}

fn set_output(r: &Resolved, set: &ChamberSet) -> Res<String> {
    let rs = root_system(set.group);
    match r.format.unwrap_or(Format::Json) {
        Format::Json => Ok(to_json(&chamber_set_document(rs, set))),
        f => draw(set.group, &RenderSpec::for_set(rs, set), f),
    }
}

/// Returns whether the result was cut by a budget.
fn run_solve(r: &Resolved, default_format: Format) -> Res<bool> {
    if matches!(r.group, Group::Gl2 | Group::Pgl2) {
        let b = r.b.clone().unwrap_or_else(|| vec![0, 0]);
        let variant = match b.as_slice() {
            [a, c] => Gl2Variant::Diagonal { alpha: *a, beta: *c },
            [a] => Gl2Variant::Antidiagonal { alpha: *a },
            _ => return Err(usage("gl2 takes --b α,β (diagonal) or --b α (antidiagonal, α odd)")),
        };
        let ev = gl2_variants(variant, r.radius, r.group == Group::Pgl2).map_err(usage)?;
        let text = match r.format.unwrap_or(default_format) {
            Format::Json => to_json(&extended_document(&ev)),
            f => {
                let rs = root_system(Kind::A1);
                let spec = RenderSpec {
                    radius: r.radius,
                    width: 640,
                    columns: 96,
                    shades: ev
                        .nonempty
                        .iter()
                        .map(|g| (*g, adlv_core::render::Shade::Nonempty))
                        .collect(),
                };
                let mut s = draw(rs.kind(), &spec, f)?;
                if f == Format::Ascii {
                    s.push_str(&format!("det component: {}\n", ev.det_component));
                }
                s
            }
        };
        r.emit(&text)?;
        return Ok(false);
    }
    let rs = root_system(r.kind());
    let b = r.rep()?;
    let vm = solve(rs, &b, r.radius, r.budgets, r.method, r.seed_only).map_err(compute)?;
    let text = match r.format.unwrap_or(default_format) {
        Format::Json if r.group.is_extended() => {
            to_json(&extended_document(&extended_decorate(r.group, &vm).map_err(compute)?))
        }
        Format::Json => to_json(&verdict_document(rs, &vm)),
        f => {
            let mut s = draw(rs.kind(), &RenderSpec::for_verdicts(rs, &vm), f)?;
            if f == Format::Ascii {
                s.push_str(&format!(
                    "nonempty {}  unknown {}  {} {}{}\n",
                    vm.nonempty().len(),
                    vm.unknown().len(),
                    vm.label(adlv_core::solver::Verdict::Empty),
                    vm.empty().len(),
                    if vm.is_exact() { "  (exact)" } else { "" }
                ));
            }
            s
        }
    };
    r.emit(&text)?;
    Ok(vm.window.truncated)
}

fn run(cli: Cli) -> Res<ExitCode> {
    let r = resolve(&cli.opts)?;
    if let Some(n) = r.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(compute)?;
    }
    let needs_sc = matches!(cli.command, Command::Superset | Command::Subset | Command::Compare { .. });
    if needs_sc && matches!(r.group, Group::Gl2 | Group::Pgl2) {
        return Err(usage("gl2/pgl2 only support solve; use sl2 for chamber sets"));
    }
    let truncated = match cli.command {
        Command::Solve => run_solve(&r, Format::Json),
        Command::Render { input: None } => run_solve(&r, Format::Svg),
        Command::Render { input: Some(path) } => {
            let text = fs::read_to_string(&path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let doc = from_json(&text).map_err(usage)?;
            let rs = root_system(doc.header.group);
            let spec = match parse_verdict_map(&doc) {
                Ok(vm) => RenderSpec::for_verdicts(rs, &vm),
                Err(_) => RenderSpec::for_set(rs, &parse_chamber_set(&doc).map_err(usage)?),
            };
            let f = match r.format {
                Some(Format::Json) | None => Format::Svg,
                Some(f) => f,
            };
            r.emit(&draw(rs.kind(), &spec, f)?)?;
            Ok(doc.header.window.truncated)
        }
        Command::Superset => {
            let rs = root_system(r.kind());
            let set = superset(rs, &r.rep()?, r.radius, r.budgets, r.method).map_err(compute)?;
            r.emit(&set_output(&r, &set)?)?;
            Ok(set.window.truncated)
        }
        Command::Subset => {
            let rs = root_system(r.kind());
            let cs = certified_subset(rs, &r.rep()?, r.radius, r.budgets, r.seed_only).map_err(compute)?;
            r.emit(&set_output(&r, &cs.set)?)?;
            Ok(false)
        }
        Command::Compare { left, right } => {
            let (a, b) = match (left, right) {
                (Some(l), Some(rp)) => {
                    let load = |p: &PathBuf| -> Res<ChamberSet> {
                        let text = fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
                        parse_chamber_set(&from_json(&text).map_err(usage)?).map_err(usage)
                    };
                    (load(&l)?, load(&rp)?)
                }
                (None, None) => {
                    let rs = root_system(r.kind());
                    let b = r.rep()?;
                    let sub = certified_subset(rs, &b, r.radius, r.budgets, r.seed_only).map_err(compute)?;
                    let sup = superset(rs, &b, r.radius, r.budgets, r.method).map_err(compute)?;
                    (sub.set, sup)
                }
                _ => return Err(usage("give both --left and --right, or neither")),
            };
            let rs = root_system(a.group);
            let report = compare(rs, &a, &b).map_err(usage)?;
            let text = match r.format.unwrap_or(Format::Ascii) {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report).map_err(compute)?;
                    s.push('\n');
                    s
                }
                _ => {
                    let mut s = format!(
                        "{:?} vs {:?}: common {}, only left {}, only right {}\n",
                        report.left_kind,
                        report.right_kind,
                        report.common,
                        report.only_left.len(),
                        report.only_right.len()
                    );
                    for g in &report.only_left {
                        s.push_str(&format!("< {g}\n"));
                    }
                    for g in &report.only_right {
                        s.push_str(&format!("> {g}\n"));
                    }
                    s.push_str(if report.exact { "exact\n" } else { "not exact\n" });
                    s
                }
            };
            r.emit(&text)?;
            Ok(a.window.truncated || b.window.truncated)
        }
        Command::Fold { labels, start } => {
            let rs = root_system(r.kind());
            let start = match start {
                Some(s) => rs.parse_element(&s).map_err(usage)?,
                None => rs.identity(),
            };
            let labels: Vec<u8> = labels
                .chars()
                .filter(|c| !c.is_whitespace() && *c != ',')
                .map(|c| {
                    c.to_digit(10)
                        .filter(|&d| d as usize <= rs.rank())
                        .map(|d| d as u8)
                        .ok_or_else(|| usage(format!("bad label {c:?} for {}", rs.kind())))
                })
                .collect::<Res<_>>()?;
            let t = GalleryType::new(start, labels);
            let mut set = ChamberSet::new(
                rs,
                ConjugacyRep::identity(rs.kind()),
                SetKind::Exact,
                Window::new(r.radius.max(t.len() + rs.length(&start)), r.budgets),
            );
            set.chambers = fold_all(rs, &t);
            let text = match r.format.unwrap_or(Format::Ascii) {
                Format::Ascii => {
                    let mut s = String::new();
                    for g in &set.chambers {
                        s.push_str(&format!("{}\n", rs.format_element(g)));
                    }
                    s.push_str(&format!("{} results\n", set.len()));
                    s
                }
                _ => set_output(&r, &set)?,
            };
            r.emit(&text)?;
            Ok(false)
        }
        Command::Sl2Table { max } => {
            let text = match r.format.unwrap_or(Format::Ascii) {
                Format::Json => {
                    let rows: Vec<serde_json::Value> = sl2_table(max)
                        .into_iter()
                        .map(|(i, s)| serde_json::json!({ "i": i, "s": s }))
                        .collect();
                    let mut s = serde_json::to_string_pretty(&rows).map_err(compute)?;
                    s.push('\n');
                    s
                }
                _ => {
                    let mut s = String::from("i | s\n");
                    for (i, set) in sl2_table(max) {
                        let vals: Vec<String> = set.iter().map(|x| x.to_string()).collect();
                        s.push_str(&format!("{i} | {}\n", vals.join(",")));
                    }
                    s
                }
            };
            r.emit(&text)?;
            Ok(false)
        }
    }?;
    if truncated && r.strict {
        eprintln!("result truncated by a budget");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
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
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
