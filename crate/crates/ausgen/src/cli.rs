//! Command line front end.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use ausgen_core::ar::almost_split_starting_at;
use ausgen_core::decompose::{decompose, Settings, DEFAULT_SEED};
use ausgen_core::mutation::{
    canonical_l0, canonical_m0, dual_set, enumerate_family, mutate_via_shift, Catalog, Family,
    FamilyEdge, GeneratorSet, MutateOptions, Strategy, Verdict,
};
use ausgen_core::relative::window_verify;
use ausgen_core::rep::tau_power;
use ausgen_core::Algebra;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::expr::parse_module;
use crate::fixtures::{fixture, FIXTURES};
use crate::flows;
use crate::format::{load, DEFAULT_PRIME};
use crate::report::{
    AlmostSplitJson, CertificateJson, DecompositionJson, FamilyJson, HypothesesJson, ModuleJson,
    SetJson, WindowJson,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const GRAMMAR: &str = "\
ALGEBRA FILES
  One statement per line; `#` starts a comment.
    prime P                 field size, default 2 (overridden by --field)
    bound L                 every path of length >= L is zero
    vertices V1 V2 ...      vertex labels
    arrow NAME: V -> W      an arrow
    relation TERM +- TERM   a linear combination of paths
  A term is `[COEFF*]x*y*z`; paths compose left to right, so `a*b` is a
  followed by b. The two-vertex example:

    bound 3
    vertices 1 2
    arrow c: 1 -> 1
    arrow a: 1 -> 2
    arrow b: 2 -> 1
    arrow d: 2 -> 2
    relation c*c - a*b
    relation c*a
    relation a*d
    relation b*c
    relation d*b
    relation d*d - b*a

MODULE EXPRESSIONS
  Summands joined by `+`, each `[MULT] [OPS...] BASE`. Bases: S<v>, P<v>,
  I<v>, P<v>/soc, P<v>/soc2. Operators, applied right to left: tau,
  tau^k, omega, omega^k, nu, rad, rad2, soc, top. Example: `tau^-1 P1/soc`.

--algebra takes a path or a shipped name: example1, example2, example3,
truncated3, a2.

EXIT STATUS
  0 success, 1 mathematical rejection, 2 usage or input error.";

#[derive(Debug, Parser)]
#[command(
    name = "ausgen",
    version,
    about = "Mutation of Auslander generators over radical cube zero selfinjective algebras",
    after_long_help = GRAMMAR
)]
pub struct Cli {
    /// Algebra file or shipped fixture name.
    #[arg(long, global = true)]
    pub algebra: Option<String>,
    /// Prime field size, overriding the file.
    #[arg(long = "field", global = true)]
    pub field: Option<u32>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write a JSON report to this path; `-` writes it to stdout instead of text.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    All,
    SimplesFirst,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Side {
    #[value(name = "M")]
    M,
    #[value(name = "L")]
    L,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hypotheses and canonical generators of the algebra.
    Info,
    /// Exchanges summands of the canonical generator one after another.
    Mutate {
        /// Summand to exchange, as a module expression. Repeat for a sequence.
        #[arg(long = "at", required = true)]
        at: Vec<String>,
        /// Translate by tau^-i before exchanging and translate back after.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i32,
    },
    /// Explores generators reachable by exchanges.
    Explore {
        #[arg(long, default_value_t = 6)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::All)]
        strategy: StrategyArg,
        #[arg(long, value_enum, default_value_t = Side::M)]
        side: Side,
        /// Write the mutation graph in DOT format to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Runs one of the worked examples (1, 2 or 3).
    Example { number: u8 },
    /// Splits a module into indecomposables.
    Decompose {
        #[arg(long)]
        module: String,
    },
    /// Applies a power of the Auslander-Reiten translate.
    Tau {
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        power: i32,
    },
    /// The almost split sequence starting at a module.
    Ar {
        #[arg(long)]
        module: String,
    },
    /// Checks relative projective dimension at most one on a window around a generator.
    VerifyWindow {
        #[arg(long, default_value_t = 1)]
        radius: usize,
        /// Exchanges to perform on the canonical generator first.
        #[arg(long = "at")]
        at: Vec<String>,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        shift: i32,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] crate::format::ParseError),
    #[error(transparent)]
    Expr(#[from] crate::expr::ExprError),
    #[error(transparent)]
    Core(#[from] ausgen_core::Error),
    #[error(transparent)]
    Flow(#[from] flows::FlowError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

struct Ctx<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn text_enabled(&self) -> bool {
        self.cli.json.as_deref() != Some(std::path::Path::new("-"))
    }

    fn say(&mut self, line: impl AsRef<str>) -> Result<(), CliError> {
        if self.text_enabled() {
            writeln!(self.out, "{}", line.as_ref())?;
        }
        Ok(())
    }

    fn emit<T: Serialize>(&mut self, value: &T) -> Result<(), CliError> {
        let Some(path) = &self.cli.json else {
            return Ok(());
        };
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        if path.as_os_str() == "-" {
            self.out.write_all(text.as_bytes())?;
        } else {
            fs::write(path, text)?;
        }
        Ok(())
    }

    fn settings(&self) -> Settings {
        Settings::with_seed(self.cli.seed)
    }

    fn algebra(&self) -> Result<Algebra, CliError> {
        let Some(name) = &self.cli.algebra else {
            return Err(CliError::Usage(
                "--algebra is required (a path or one of the shipped fixtures)".into(),
            ));
        };
        let text = match fixture(name) {
            Some(t) => t.to_string(),
            None => fs::read_to_string(name).map_err(|e| {
                let names: Vec<&str> = FIXTURES.iter().map(|(n, _)| *n).collect();
                CliError::Usage(format!(
                    "cannot read `{name}`: {e} (shipped fixtures: {})",
                    names.join(", ")
                ))
            })?,
        };
        let alg = load(&text, self.cli.field).map_err(|e| match name.as_str() {
            n if fixture(n).is_some() => CliError::Parse(e),
            _ => CliError::Usage(format!("{name}: {e}")),
        })?;
        Ok(alg)
    }

    fn catalog(&self) -> Result<Catalog, CliError> {
        Ok(Catalog::new(&self.algebra()?, self.settings()))
    }
}

/// Interns the canonical generators so that familiar modules get their names.
fn named_catalog(cat: &mut Catalog) -> Option<GeneratorSet> {
    let m0 = canonical_m0(cat).ok();
    let _ = canonical_l0(cat);
    m0
}

fn join(labels: &[String]) -> String {
    labels.join(" + ")
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    if let Some(p) = cli.field {
        if ausgen_core::PrimeField::new(p).is_err() {
            let _ = writeln!(err, "error: --field {p} is not a prime");
            return EXIT_USAGE;
        }
    }
    let mut ctx = Ctx { cli: &cli, out };
    match dispatch(&mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                CliError::Core(_) | CliError::Flow(flows::FlowError::Core(_)) => EXIT_REJECT,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn dispatch(ctx: &mut Ctx) -> Result<i32, CliError> {
    match &ctx.cli.command {
        Command::Info => info(ctx),
        Command::Mutate { at, shift } => mutate(ctx, at, *shift),
        Command::Explore {
            budget,
            strategy,
            side,
            dot,
        } => explore(ctx, *budget, *strategy, *side, dot.as_ref()),
        Command::Example { number } => example(ctx, *number),
        Command::Decompose { module } => decompose_cmd(ctx, module),
        Command::Tau { module, power } => tau_cmd(ctx, module, *power),
        Command::Ar { module } => ar_cmd(ctx, module),
        Command::VerifyWindow { radius, at, shift } => verify_window(ctx, *radius, at, *shift),
    }
}

#[derive(Serialize)]
struct InfoJson {
    prime: u32,
    dim: usize,
    vertices: Vec<String>,
    hypotheses: HypothesesJson,
    m0: Option<SetJson>,
    l0: Option<SetJson>,
}

fn info(ctx: &mut Ctx) -> Result<i32, CliError> {
    let mut cat = ctx.catalog()?;
    let alg = cat.algebra().clone();
    let h = cat.hypotheses().clone();
    let m0 = canonical_m0(&mut cat).ok();
    let l0 = canonical_l0(&mut cat).ok();
    ctx.say(format!(
        "algebra of dimension {} over F_{} on {} vertices",
        alg.dim(),
        alg.field().p(),
        alg.vertex_count()
    ))?;
    ctx.say(format!("loewy length {}", h.loewy_length))?;
    ctx.say(format!("radical cube zero: {}", h.radical_cube_zero))?;
    ctx.say(format!("selfinjective: {}", h.selfinjective))?;
    if let Some(perm) = &h.nakayama_permutation {
        let labels = alg.quiver().vertex_labels();
        let images: Vec<String> = perm.iter().map(|&j| labels[j].clone()).collect();
        ctx.say(format!("nakayama permutation: {}", images.join(" ")))?;
        ctx.say(format!("weakly symmetric: {}", h.weakly_symmetric))?;
    }
    ctx.say("representation-infinite type is assumed, not checked")?;
    if let Some(m) = &m0 {
        ctx.say(format!("M0 = {}", join(&m.labels(&cat))))?;
    }
    if let Some(l) = &l0 {
        ctx.say(format!("L0 = {}", join(&l.labels(&cat))))?;
    }
    ctx.emit(&InfoJson {
        prime: alg.field().p(),
        dim: alg.dim(),
        vertices: alg.quiver().vertex_labels().to_vec(),
        hypotheses: HypothesesJson::from(&h),
        m0: m0.as_ref().map(|s| SetJson::new(&cat, s)),
        l0: l0.as_ref().map(|s| SetJson::new(&cat, s)),
    })?;
    Ok(EXIT_OK)
}

/// Resolves a module expression to a summand of `set`.
fn summand_of(cat: &mut Catalog, set: &GeneratorSet, text: &str) -> Result<usize, CliError> {
    let x = parse_module(cat.algebra(), text)?;
    match cat.find(&x) {
        Some(id) if set.contains(id) => Ok(id),
        _ => Err(CliError::Usage(format!(
            "`{text}` is not a summand of {}",
            join(&set.labels(cat))
        ))),
    }
}

/// Runs the exchanges; returns the final set, the certificates and whether
/// all were accepted.
fn exchanges(
    cat: &mut Catalog,
    start: GeneratorSet,
    at: &[String],
    i: i32,
) -> Result<(GeneratorSet, Vec<CertificateJson>, bool), CliError> {
    let mut set = start;
    let mut certs = Vec::new();
    for text in at {
        let n = summand_of(cat, &set, text)?;
        let m = mutate_via_shift(cat, &set, n, i, MutateOptions::default())?;
        certs.push(CertificateJson::new(cat, &m.certificate));
        if m.certificate.verdict != Verdict::Accept {
            return Ok((set, certs, false));
        }
        set = m.result;
    }
    Ok((set, certs, true))
}

fn describe(ctx: &mut Ctx, c: &CertificateJson) -> Result<(), CliError> {
    let mut line = format!("exchange at {}: {}", c.position, c.verdict);
    if let Some(b) = &c.branch {
        line.push_str(&format!(" via {b}"));
    }
    if let Some(d) = c.stable_hom_dim {
        line.push_str(&format!(", stable hom dim {d}"));
    }
    if let Some(r) = &c.reason {
        line.push_str(&format!(" ({r})"));
    }
    ctx.say(line)?;
    if !c.middle.is_empty() {
        ctx.say(format!("  middle term {}", join(&c.middle)))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct MutateJson {
    start: SetJson,
    certificates: Vec<CertificateJson>,
    result: SetJson,
    accepted: bool,
}

fn mutate(ctx: &mut Ctx, at: &[String], i: i32) -> Result<i32, CliError> {
    let mut cat = ctx.catalog()?;
    let m0 = canonical_m0(&mut cat)?;
    let (set, certs, accepted) = exchanges(&mut cat, m0.clone(), at, i)?;
    for c in &certs {
        describe(ctx, c)?;
    }
    ctx.say(format!("result {}", join(&set.labels(&cat))))?;
    ctx.emit(&MutateJson {
        start: SetJson::new(&cat, &m0),
        certificates: certs,
        result: SetJson::new(&cat, &set),
        accepted,
    })?;
    Ok(if accepted { EXIT_OK } else { EXIT_REJECT })
}

fn explore(
    ctx: &mut Ctx,
    budget: usize,
    strategy: StrategyArg,
    side: Side,
    dot: Option<&PathBuf>,
) -> Result<i32, CliError> {
    let strategy = match strategy {
        StrategyArg::All => Strategy::All,
        StrategyArg::SimplesFirst => Strategy::SimplesFirst,
    };
    let opts = MutateOptions::default();
    let mut cat = ctx.catalog()?;
    let (fam, certs) = match side {
        Side::M => {
            let m0 = canonical_m0(&mut cat)?;
            (
                enumerate_family(&mut cat, &m0, budget, strategy, opts)?,
                None,
            )
        }
        Side::L => {
            named_catalog(&mut cat);
            let mut op = Catalog::new(&cat.algebra().opposite(), cat.settings().clone());
            let start = canonical_m0(&mut op)?;
            let fam = enumerate_family(&mut op, &start, budget, strategy, opts)?;
            let mapped = Family {
                sets: fam
                    .sets
                    .iter()
                    .map(|s| dual_set(&op, s, &mut cat))
                    .collect(),
                edges: fam
                    .edges
                    .iter()
                    .map(|e| FamilyEdge {
                        from: e.from,
                        to: e.to,
                        position: cat.intern_dual(&op, e.position),
                        certificate: e.certificate.clone(),
                    })
                    .collect(),
                budget_exhausted: fam.budget_exhausted,
            };
            (mapped, Some(op))
        }
    };
    for (i, s) in fam.sets.iter().enumerate() {
        ctx.say(format!("G{i} = {}", join(&s.labels(&cat))))?;
    }
    let rejected = fam.edges.iter().filter(|e| e.to.is_none()).count();
    ctx.say(format!(
        "{} sets, {} edges, {} rejected exchanges{}",
        fam.sets.len(),
        fam.edges.len(),
        rejected,
        if fam.budget_exhausted {
            ", budget exhausted"
        } else {
            ""
        }
    ))?;
    if let Some(path) = dot {
        fs::write(path, fam.to_dot(&cat))?;
    }
    let report = FamilyJson::new(&cat, &fam, certs.as_ref().unwrap_or(&cat));
    ctx.emit(&report)?;
    Ok(EXIT_OK)
}

fn example(ctx: &mut Ctx, number: u8) -> Result<i32, CliError> {
    let prime = ctx.cli.field.unwrap_or(DEFAULT_PRIME);
    let run = flows::run(number, prime, ctx.settings())?;
    let golden = run.golden();
    for line in golden.lines() {
        ctx.say(line)?;
    }
    ctx.emit(&run.json())?;
    Ok(if !run.all_checks_pass() || run.rejected {
        EXIT_REJECT
    } else {
        EXIT_OK
    })
}

/// Names indecomposable summands of a module expression after their text.
fn intern_parts(cat: &mut Catalog, text: &str) {
    for part in text.split('+') {
        let words: Vec<&str> = part.split_whitespace().collect();
        let words = match words.split_first() {
            Some((m, rest)) if m.parse::<usize>().is_ok() => rest,
            _ => &words[..],
        };
        let name = words.join(" ");
        if let Ok(x) = parse_module(cat.algebra(), &name) {
            let d = decompose(&x, cat.settings());
            if d.multiplicities == [1] {
                cat.intern(&x, &name);
            }
        }
    }
}

fn labelled(cat: &mut Catalog, x: &ausgen_core::rep::Rep, text: &str) -> Vec<String> {
    let d = decompose(x, cat.settings());
    let single = d.multiplicities == [1];
    let mut out = Vec::new();
    for (k, (class, &m)) in d.classes.iter().zip(&d.multiplicities).enumerate() {
        let id = match cat.find(class) {
            Some(id) => id,
            None if single => cat.intern(class, text),
            None => cat.intern(class, &format!("({text})#{k}")),
        };
        let label = cat.label(id);
        out.push(if m > 1 { format!("{m} {label}") } else { label });
    }
    out
}

#[derive(Serialize)]
struct DecomposeJson {
    module: ModuleJson,
    decomposition: DecompositionJson,
    summands: Vec<String>,
}

fn decompose_cmd(ctx: &mut Ctx, text: &str) -> Result<i32, CliError> {
    let mut cat = ctx.catalog()?;
    named_catalog(&mut cat);
    let x = parse_module(cat.algebra(), text)?;
    intern_parts(&mut cat, text);
    let d = decompose(&x, cat.settings());
    let summands = labelled(&mut cat, &x, text);
    ctx.say(format!("{text}: dims {:?}", x.dims()))?;
    for (c, m) in d.classes.iter().zip(&d.multiplicities) {
        ctx.say(format!("  {m} x {:?}", c.dims()))?;
    }
    ctx.say(format!("  = {}", join(&summands)))?;
    if d.unconfirmed {
        ctx.say("  some summands could not be certified indecomposable")?;
    }
    ctx.emit(&DecomposeJson {
        module: ModuleJson::new(text, &x),
        decomposition: DecompositionJson::new(&x, &d),
        summands,
    })?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct TauJson {
    module: ModuleJson,
    power: i32,
    result: ModuleJson,
    summands: Vec<String>,
}

fn tau_cmd(ctx: &mut Ctx, text: &str, power: i32) -> Result<i32, CliError> {
    let mut cat = ctx.catalog()?;
    named_catalog(&mut cat);
    let x = parse_module(cat.algebra(), text)?;
    let y = tau_power(&x, power)?;
    let name = format!("tau^{power} {text}");
    let summands = labelled(&mut cat, &y, &name);
    ctx.say(format!("{name}: dims {:?} = {}", y.dims(), join(&summands)))?;
    ctx.emit(&TauJson {
        module: ModuleJson::new(text, &x),
        power,
        result: ModuleJson::new(&name, &y),
        summands,
    })?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ArJson {
    sequence: AlmostSplitJson,
    middle_labels: Vec<String>,
    right_label: Vec<String>,
}

fn ar_cmd(ctx: &mut Ctx, text: &str) -> Result<i32, CliError> {
    let mut cat = ctx.catalog()?;
    named_catalog(&mut cat);
    let x = parse_module(cat.algebra(), text)?;
    let ar = almost_split_starting_at(&x, cat.settings())?;
    let d = decompose(ar.middle(), cat.settings());
    let mut summands = d.dimension_vectors();
    summands.sort();
    let middle_labels = labelled(&mut cat, ar.middle(), &format!("E({text})"));
    let right_label = labelled(&mut cat, ar.right(), &format!("tau^-1 {text}"));
    let json = AlmostSplitJson::new(&ar, summands);
    ctx.say(format!(
        "0 -> {:?} -> {:?} -> {:?} -> 0",
        json.left, json.middle, json.right
    ))?;
    ctx.say(format!("middle term {}", join(&middle_labels)))?;
    ctx.say(format!("right end {}", join(&right_label)))?;
    ctx.say(format!(
        "Ext dimension {}, socle dimension {}, non-split {}, annihilated by the radical {}",
        json.ext_dim, json.socle_dim, json.non_split, json.rad_annihilation
    ))?;
    ctx.emit(&ArJson {
        sequence: json,
        middle_labels,
        right_label,
    })?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VerifyJson {
    generators: SetJson,
    certificates: Vec<CertificateJson>,
    window: WindowJson,
}

fn verify_window(ctx: &mut Ctx, radius: usize, at: &[String], i: i32) -> Result<i32, CliError> {
    let mut cat = ctx.catalog()?;
    let m0 = canonical_m0(&mut cat)?;
    let (set, certs, accepted) = exchanges(&mut cat, m0, at, i)?;
    for c in &certs {
        describe(ctx, c)?;
    }
    if !accepted {
        return Ok(EXIT_REJECT);
    }
    let report = window_verify(
        &set.modules(&cat),
        &set.labels(&cat),
        radius,
        cat.homs(),
        cat.settings(),
    )?;
    ctx.say(format!("generators {}", join(&set.labels(&cat))))?;
    for e in &report.entries {
        ctx.say(format!(
            "  {} {:?}: relative syzygy {:?} {}",
            e.label,
            e.dims,
            e.syzygy,
            if e.pd_at_most_one { "ok" } else { "FAIL" }
        ))?;
    }
    ctx.say(format!(
        "radius {radius}: {} modules, {}",
        report.entries.len(),
        if report.all_pass() {
            "all have relative projective dimension at most one (window evidence only)"
        } else {
            "some module fails"
        }
    ))?;
    ctx.emit(&VerifyJson {
        generators: SetJson::new(&cat, &set),
        certificates: certs,
        window: WindowJson::from(&report),
    })?;
    Ok(if report.all_pass() {
        EXIT_OK
    } else {
        EXIT_REJECT
    })
}
