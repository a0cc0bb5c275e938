//! Command-line driver. Exit codes: 0 success or true, 1 false with a
//! witness, 2 usage, input or refusal errors.

use std::ffi::OsString;
use std::fs;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::flats::Flat;
use crate::hall::{self, HallBounds, HallElement};
use crate::io::{self, format_set, ParseError};
use crate::matroid::{verify_gp_with, FMatroid};
use crate::morphism::{complete_cospan, complete_span, AdmissibleKind, Mode, SubmonomialMap};
use crate::par::Exec;
use crate::selftest;
use crate::subset::{self, Mask};
use crate::trs::{NotBundle, Trs};

#[derive(Parser, Debug)]
#[command(name = "fmat", version, about = "Matroids over idylls, Hall products and tropical toric sheaves")]
struct Cli {
    /// Witness discipline for admissible morphisms.
    #[arg(long, value_enum, default_value_t = ModeArg::General, global = true)]
    mode: ModeArg,
    /// Element bound for enumerations (Hall products, iso search).
    #[arg(long, env = "FMAT_BOUND", global = true)]
    bound: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for randomized suites.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads; 1 runs every loop sequentially, 0 picks a default.
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    General,
    Simple,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check the Grassmann-Plücker relations.
    Verify { file: String },
    Dual { file: String },
    /// Contract, then delete or restrict; label lists are comma separated.
    Minor {
        file: String,
        #[arg(long, default_value = "")]
        contract: String,
        #[arg(long, default_value = "", conflicts_with = "restrict")]
        delete: String,
        #[arg(long)]
        restrict: Option<String>,
    },
    Sum { left: String, right: String },
    #[command(subcommand)]
    Morphism(MorphismCmd),
    /// List the flats by rank.
    Flats { file: String },
    /// Decide modularity of the lattice of flats.
    Modular { file: String },
    #[command(subcommand)]
    Trs(TrsCmd),
    #[command(subcommand)]
    Hall(HallCmd),
    /// Class in the Grothendieck group: (rank, nullity).
    K0 { file: String },
    /// Run the embedded acceptance suites.
    Selftest {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
        criterion: Option<u8>,
    },
}

#[derive(Subcommand, Debug)]
enum MorphismCmd {
    Check { source: String, target: String, map: String },
    Kernel { source: String, target: String, map: String },
    Cokernel { source: String, target: String, map: String },
    /// Factor as an admissible mono or epi.
    Factor { source: String, target: String, map: String },
    /// Complete `M <<- P >-> N` to a square.
    Pushout { corner: String, mono_target: String, mono: String, epi_target: String, epi: String },
    /// Complete `M >-> R <<- N` to a square.
    Pullback { mono_source: String, target: String, mono: String, epi_source: String, epi: String },
}

#[derive(Subcommand, Debug)]
enum TrsCmd {
    Validate { file: String },
    Restrict {
        file: String,
        #[arg(long)]
        flat: String,
    },
    Contract {
        file: String,
        #[arg(long)]
        flat: String,
    },
    Degree { file: String },
    Slope { file: String },
    Semistable { file: String },
    Hn { file: String },
    Vb { file: String },
}

#[derive(Subcommand, Debug)]
enum HallCmd {
    Product { left: String, right: String },
    /// Number of subobjects `N ≤ R` with `N ≅ sub` and `R/N ≅ quotient`.
    G { whole: String, quotient: String, sub: String },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input { path: String, msg: String },
}

impl Failure {
    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => format!("error: {m}"),
            Failure::Input { path, msg } => format!("error: {path}: {msg}"),
        }
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

/// Report lines in both renderings.
#[derive(Default)]
struct Report {
    text: Vec<String>,
    json: Vec<Value>,
    ok: bool,
}

impl Report {
    fn new() -> Self {
        Report { ok: true, ..Default::default() }
    }

    fn line(&mut self, text: impl Into<String>, json: Value) {
        self.text.push(text.into());
        self.json.push(json);
    }

    fn matroid(&mut self, kind: &str, m: &FMatroid) {
        let text = io::serialize_matroid(m);
        self.json.push(json!({ kind: text }));
        self.text.extend(text.lines().map(String::from));
    }

    fn fail(&mut self, text: impl Into<String>, json: Value) {
        self.ok = false;
        self.line(text, json);
    }

    fn render(&self, format: Format) -> String {
        let lines: Vec<String> = match format {
            Format::Text => self.text.clone(),
            Format::JsonLines => self.json.iter().map(|v| v.to_string()).collect(),
        };
        lines.iter().map(|l| format!("{l}\n")).collect()
    }
}

struct Ctx {
    mode: Mode,
    exec: Exec,
    bounds: HallBounds,
    seed: u64,
}

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input { path: path.into(), msg: e.to_string() })
}

fn parsed<T>(path: &str, r: Result<T, ParseError>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Input { path: path.into(), msg: e.to_string() })
}

fn load_matroid(path: &str) -> Result<Arc<FMatroid>, Failure> {
    Ok(Arc::new(parsed(path, io::parse_matroid(&read(path)?))?))
}

fn load_sheaf(path: &str) -> Result<Trs, Failure> {
    parsed(path, io::parse_sheaf(&read(path)?))
}

fn load_map(path: &str, source: &Arc<FMatroid>, target: &Arc<FMatroid>) -> Result<SubmonomialMap, Failure> {
    Ok(parsed(path, io::parse_morphism(&read(path)?, source, target))?.0)
}

fn names(m: &FMatroid, mask: Mask) -> Vec<String> {
    m.ground().names(mask)
}

fn set(m: &FMatroid, mask: Mask) -> String {
    format_set(&names(m, mask))
}

fn labels(m: &FMatroid, list: &str) -> Result<Mask, Failure> {
    let parts: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    m.ground().mask_of(&parts).map_err(usage)
}

/// Runs the driver on `args` (including the program name) and returns the
/// exit code, standard output and standard error.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (0, text, String::new()) } else { (2, String::new(), text) };
        }
    };
    let exec = if cli.threads == 1 { Exec::Sequential } else { Exec::default() };
    let ctx = Ctx {
        mode: match cli.mode {
            ModeArg::General => Mode::General,
            ModeArg::Simple => Mode::Simple,
        },
        exec,
        bounds: cli.bound.map(HallBounds::uniform).unwrap_or_default(),
        seed: cli.seed,
    };
    let result = with_threads(cli.threads, || dispatch(&cli.cmd, &ctx));
    match result {
        Ok(report) => (if report.ok { 0 } else { 1 }, report.render(cli.format), String::new()),
        Err(f) => (2, String::new(), format!("{}\n", f.message())),
    }
}

#[cfg(feature = "parallel")]
fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    if threads <= 1 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<R: Send>(_threads: usize, f: impl FnOnce() -> R + Send) -> R {
    f()
}

fn dispatch(cmd: &Cmd, ctx: &Ctx) -> Result<Report, Failure> {
    let mut r = Report::new();
    match cmd {
        Cmd::Verify { file } => {
            let c = parsed(file, io::parse_candidate(&read(file)?))?;
            match verify_gp_with(&c, ctx.exec) {
                Ok(()) => r.line(
                    format!("verified: rank {} on {} elements over {}", c.rank, c.ground.len(), c.idyll.name()),
                    json!({"verified": true, "rank": c.rank, "elements": c.ground.len(), "idyll": c.idyll.name()}),
                ),
                Err(v) => r.fail(format!("not a matroid: {v}"), json!({"verified": false, "violation": v.to_string()})),
            }
        }
        Cmd::Dual { file } => r.matroid("matroid", &load_matroid(file)?.dual()),
        Cmd::Minor { file, contract, delete, restrict } => {
            let m = load_matroid(file)?;
            let c = labels(&m, contract)?;
            let keep = match restrict {
                Some(list) => labels(&m, list)?,
                None => m.ground().all() & !labels(&m, delete)?,
            };
            if c & !keep != 0 && restrict.is_some() {
                return Err(usage("contracted labels must lie in the restriction"));
            }
            if c & !keep != 0 {
                return Err(usage("a label cannot be both contracted and deleted"));
            }
            let minor = m.restrict_mask(keep).contract(&names(&m, c)).map_err(usage)?;
            r.matroid("matroid", &minor);
        }
        Cmd::Sum { left, right } => {
            let s = load_matroid(left)?.direct_sum(&*load_matroid(right)?).map_err(usage)?;
            r.matroid("matroid", &s);
        }
        Cmd::Flats { file } => {
            let m = load_matroid(file)?;
            let lattice = m.flats();
            let mut flats: Vec<(usize, Flat)> = lattice.flats().into_iter().map(|f| (lattice.rank_of(f), f)).collect();
            flats.sort_by(|a, b| a.0.cmp(&b.0).then(subset::lex_cmp(a.1.mask, b.1.mask)));
            for (rank, f) in flats {
                r.line(format!("rank {rank}: {}", set(&m, f.mask)), json!({"rank": rank, "flat": names(&m, f.mask)}));
            }
        }
        Cmd::Modular { file } => {
            let m = load_matroid(file)?;
            let lattice = m.flats();
            let flats = lattice.flats();
            let bad = flats
                .iter()
                .flat_map(|&f| flats.iter().map(move |&g| (f, g)))
                .find(|&(f, g)| !lattice.is_modular_pair(f, g).unwrap_or(false));
            match bad {
                None => r.line(format!("modular: {} flats", flats.len()), json!({"modular": true, "flats": flats.len()})),
                Some((f, g)) => r.fail(
                    format!("not modular: {} and {} are not a modular pair", set(&m, f.mask), set(&m, g.mask)),
                    json!({"modular": false, "pair": [names(&m, f.mask), names(&m, g.mask)]}),
                ),
            }
        }
        Cmd::Morphism(sub) => morphism(sub, ctx, &mut r)?,
        Cmd::Trs(sub) => sheaf(sub, &mut r)?,
        Cmd::Hall(HallCmd::Product { left, right }) => {
            let p = hall::hall_product_with(&*load_matroid(left)?, &*load_matroid(right)?, ctx.bounds, ctx.exec).map_err(usage)?;
            hall_report(&p, &mut r);
        }
        Cmd::Hall(HallCmd::G { whole, quotient, sub }) => {
            let g = hall::g_constant(&*load_matroid(whole)?, &*load_matroid(quotient)?, &*load_matroid(sub)?).map_err(usage)?;
            r.line(g.to_string(), json!({"g": g}));
        }
        Cmd::K0 { file } => {
            let (rank, nullity) = hall::k0_class(&*load_matroid(file)?);
            r.line(format!("({rank},{nullity})"), json!({"rank": rank, "nullity": nullity}));
        }
        Cmd::Selftest { criterion } => {
            let cfg = selftest::Config { exec: ctx.exec, seed: ctx.seed, bounds: ctx.bounds };
            let ids: Vec<u8> = match criterion {
                Some(c) => vec![*c],
                None => (1..=9).collect(),
            };
            for id in ids {
                let o = selftest::run(id, &cfg);
                let v = json!({"criterion": o.id, "passed": o.passed, "title": o.title, "detail": o.detail});
                let text = selftest::format_outcome(&o);
                if o.passed {
                    r.line(text, v);
                } else {
                    r.fail(text, v);
                }
            }
        }
    }
    Ok(r)
}

fn hall_report(p: &HallElement, r: &mut Report) {
    if p.terms().is_empty() {
        r.line("0", json!({"terms": []}));
    }
    for (class, q) in p.terms() {
        r.line(format!("{q} * [{}]", class.name()), json!({"class": class.name(), "coefficient": q.to_string()}));
    }
}

fn morphism(cmd: &MorphismCmd, ctx: &Ctx, r: &mut Report) -> Result<(), Failure> {
    let load = |s: &str, t: &str, f: &str| -> Result<SubmonomialMap, Failure> {
        let (s, t) = (load_matroid(s)?, load_matroid(t)?);
        load_map(f, &s, &t)
    };
    match cmd {
        MorphismCmd::Check { source, target, map } => {
            let f = load(source, target, map)?;
            match f.check_with(ctx.exec) {
                Ok(()) => r.line("morphism", json!({"morphism": true})),
                Err(v) => {
                    let (x, y) = (names(f.source(), v.x), names(f.target(), v.y));
                    let what = if v.undecidable { "undecidable" } else { "fails" };
                    r.fail(
                        format!("not a morphism: criterion {what} at x={} y={}", format_set(&x), format_set(&y)),
                        json!({"morphism": false, "x": x, "y": y, "undecidable": v.undecidable}),
                    );
                }
            }
        }
        MorphismCmd::Kernel { source, target, map } => {
            let f = load(source, target, map)?;
            match f.kernel(ctx.mode) {
                Ok(k) => {
                    let a = k.image_mask();
                    r.line(format!("kernel: restriction to {}", set(f.source(), a)), json!({"restriction": names(f.source(), a)}));
                    r.matroid("matroid", k.source());
                }
                Err(e) => r.fail(format!("no kernel: {e}"), json!({"kernel": null, "reason": e.to_string()})),
            }
        }
        MorphismCmd::Cokernel { source, target, map } => {
            let f = load(source, target, map)?;
            let c = f.cokernel(ctx.mode);
            let b = c.kernel_mask();
            r.line(format!("cokernel: contraction of {}", set(f.target(), b)), json!({"contraction": names(f.target(), b)}));
            r.matroid("matroid", c.target());
        }
        MorphismCmd::Factor { source, target, map } => {
            let f = load(source, target, map)?;
            match f.factor_admissible(ctx.mode) {
                Ok(a) => {
                    let (kind, m, role) = match a.kind {
                        AdmissibleKind::Mono => ("mono", f.target(), "image"),
                        AdmissibleKind::Epi => ("epi", f.source(), "kernel"),
                    };
                    r.line(
                        format!("admissible {kind}: {role} {}", set(m, a.witness)),
                        json!({"admissible": kind, role: names(m, a.witness)}),
                    );
                }
                Err(e) => r.fail(format!("not admissible: {e}"), json!({"admissible": false, "reason": e.to_string()})),
            }
        }
        MorphismCmd::Pushout { corner, mono_target, mono, epi_target, epi } => {
            let p = load_matroid(corner)?;
            let (n, m) = (load_matroid(mono_target)?, load_matroid(epi_target)?);
            let (top, left) = (load_map(mono, &p, &n)?, load_map(epi, &p, &m)?);
            match complete_span(&top, &left, ctx.mode) {
                Ok(sq) => square(&sq, true, r),
                Err(e) => r.fail(format!("not an admissible span: {e}"), json!({"square": null, "reason": e.to_string()})),
            }
        }
        MorphismCmd::Pullback { mono_source, target, mono, epi_source, epi } => {
            let rt = load_matroid(target)?;
            let (m, n) = (load_matroid(mono_source)?, load_matroid(epi_source)?);
            let (bottom, right) = (load_map(mono, &m, &rt)?, load_map(epi, &n, &rt)?);
            match complete_cospan(&bottom, &right, ctx.mode) {
                Ok(sq) => square(&sq, false, r),
                Err(e) => r.fail(format!("not an admissible cospan: {e}"), json!({"square": null, "reason": e.to_string()})),
            }
        }
    }
    Ok(())
}

/// Prints the completed object and the two arrows that reach it.
fn square(sq: &crate::morphism::Square, pushout: bool, r: &mut Report) {
    let (object, arrows) = if pushout {
        (sq.opposite(), [("right", &sq.right), ("bottom", &sq.bottom)])
    } else {
        (sq.corner(), [("top", &sq.top), ("left", &sq.left)])
    };
    r.line("# completed object", json!({"completed": io::serialize_matroid(object)}));
    r.text.extend(io::serialize_matroid(object).lines().map(String::from));
    for (role, f) in arrows {
        let text = io::serialize_morphism(f, None);
        r.line(format!("# {role}"), json!({ role: text }));
        r.text.extend(text.lines().map(String::from));
    }
}

fn sheaf(cmd: &TrsCmd, r: &mut Report) -> Result<(), Failure> {
    let q = |x: crate::idyll::Q| x.to_string();
    match cmd {
        TrsCmd::Validate { file } => {
            let e = load_sheaf(file)?;
            r.line(
                format!("valid: rank {} on a fan of dimension {} with {} rays", e.rank(), e.fan().dim(), e.fan().rays().len()),
                json!({"valid": true, "rank": e.rank(), "dim": e.fan().dim(), "rays": e.fan().rays().len()}),
            );
        }
        TrsCmd::Restrict { file, flat } | TrsCmd::Contract { file, flat } => {
            let e = load_sheaf(file)?;
            let f = labels(e.matroid(), flat)?;
            let out = if matches!(cmd, TrsCmd::Restrict { .. }) { e.restrict(f) } else { e.contract(f) }.map_err(usage)?;
            let text = io::serialize_sheaf(&out);
            r.json.push(json!({"sheaf": text}));
            r.text.extend(text.lines().map(String::from));
        }
        TrsCmd::Degree { file } => {
            let d = load_sheaf(file)?.degree();
            r.line(q(d), json!({"degree": q(d)}));
        }
        TrsCmd::Slope { file } => {
            let s = load_sheaf(file)?.slope().map_err(usage)?;
            r.line(q(s), json!({"slope": q(s)}));
        }
        TrsCmd::Semistable { file } => {
            let e = load_sheaf(file)?;
            match e.destabilizing_flat().map_err(usage)? {
                None => r.line("semistable", json!({"semistable": true})),
                Some(f) => {
                    let mu = e.restrict(f).and_then(|s| s.slope()).map_err(usage)?;
                    r.fail(
                        format!("not semistable: {} has slope {}", set(e.matroid(), f), q(mu)),
                        json!({"semistable": false, "flat": names(e.matroid(), f), "slope": q(mu)}),
                    );
                }
            }
        }
        TrsCmd::Hn { file } => {
            let e = load_sheaf(file)?;
            for (i, step) in e.hn_filtration().map_err(usage)?.iter().enumerate() {
                r.line(
                    format!("step {}: {} slope {}", i + 1, set(e.matroid(), step.flat), q(step.slope)),
                    json!({"step": i + 1, "flat": names(e.matroid(), step.flat), "slope": q(step.slope)}),
                );
            }
        }
        TrsCmd::Vb { file } => {
            let e = load_sheaf(file)?;
            let fan = e.fan();
            match e.vector_bundle_witness() {
                Ok(ws) => {
                    for w in ws {
                        let chars: Vec<String> = w
                            .characters
                            .iter()
                            .map(|(el, u)| format!("{}:{}", e.matroid().ground().label(*el), crate::io::format_vector(u)))
                            .collect();
                        r.line(
                            format!("cone {}: basis {} characters {}", w.cone, set(e.matroid(), w.basis), chars.join(" ")),
                            json!({"cone": w.cone, "basis": names(e.matroid(), w.basis), "characters": chars}),
                        );
                    }
                }
                Err(NotBundle::NoAdaptedBasis { cone, ray, j }) => {
                    let name = &fan.rays()[ray].name;
                    r.fail(
                        format!("not a vector bundle: cone {cone}, ray {name}, j={j}"),
                        json!({"bundle": false, "cone": cone, "ray": name, "j": j}),
                    );
                }
                Err(other) => r.fail(format!("not a vector bundle: {other}"), json!({"bundle": false, "reason": other.to_string()})),
            }
        }
    }
    Ok(())
}
