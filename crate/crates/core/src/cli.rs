//! The `keikit` command line.
//!
//! Exit codes: `0` success, `1` domain error (invalid kei, module or
//! labeling, refused search), `2` I/O or parse error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::diagram::{
    load_knot_table, parse_braid, parse_braid_spec, parse_pd, DiagramError, KnotRecord, LinkDiagram,
};
use crate::invariant::{digest, enhanced_invariant, InvariantError, InvariantRecord};
use crate::kei::{alexander_kei, takasaki_kei, FiniteKei, KeiError};
use crate::keialg::{
    enumerate_module_structures, verify_module, ModuleError, ModuleStructure, SearchLimit, Variant,
};
use crate::labeling::counting_invariant;
use crate::modarith::{ModArithError, Modulus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment variable overriding the fixture directory.
pub const FIXTURES_ENV: &str = "KEIKIT_FIXTURES";

#[derive(Debug, Parser)]
#[command(
    name = "keikit",
    version,
    about = "Kei counting invariants and kei-module enhancements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Orientation {
    #[value(alias = "up")]
    Forward,
    #[value(alias = "down")]
    Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Kei,
    Quandle,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Kei => Variant::Kei,
            VariantArg::Quandle => Variant::Quandle,
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct DiagramSource {
    /// PD code, `file:<path>`, or `fixture:<name>` for a bundled table entry.
    #[arg(long)]
    pub pd: Option<String>,
    /// Braid closure `<strands>:<g1>,<g2>,...` (`-i` inverse, `vi` virtual).
    #[arg(long)]
    pub braid: Option<String>,
    /// Knot-table JSON file (`[{"name": .., "pd": ..}, ...]`); runs in batch.
    #[arg(long)]
    pub table: Option<String>,
}

#[derive(Debug, Args)]
pub struct ModuleSource {
    /// Module file (JSON or `[T|S]` block text), `fixture:<name>`, or `trivial:<m>`.
    #[arg(long)]
    pub module: String,
    /// Modulus for block-text module files.
    #[arg(long = "mod")]
    pub modulus: Option<u64>,
    /// Overrides the variant stored in the module file.
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a kei operation table against the kei axioms.
    CheckKei {
        /// `takasaki:<n>`, `alexander:<n>:<t>`, `file:<path>`, `fixture:<name>` or a path.
        #[arg(long)]
        kei: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Integral kei counting invariant of a diagram.
    Count {
        #[arg(long)]
        kei: String,
        #[command(flatten)]
        diagram: DiagramSource,
        #[arg(long, value_enum, default_value = "forward")]
        orientation: Orientation,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Enumerate module structures on Z_m.
    EnumModules {
        #[arg(long)]
        kei: String,
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long, value_enum, default_value = "kei")]
        variant: VariantArg,
        /// Largest allowed kei order times modulus.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        limit: Option<u64>,
        /// Write the structures as a JSON array to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check a module structure against the kei or quandle relations.
    VerifyModule {
        #[arg(long)]
        kei: String,
        #[command(flatten)]
        module: ModuleSource,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Kei-module enhanced invariant of a diagram or of every table entry.
    Enhanced {
        #[arg(long)]
        kei: String,
        #[command(flatten)]
        module: ModuleSource,
        #[command(flatten)]
        diagram: DiagramSource,
        #[arg(long, value_enum, default_value = "forward")]
        orientation: Orientation,
        /// Name reported for a single diagram.
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Batch enhanced invariants over a knot-table file.
    Table {
        #[arg(long)]
        kei: String,
        #[command(flatten)]
        module: ModuleSource,
        #[arg(long)]
        table: String,
        #[arg(long, value_enum, default_value = "forward")]
        orientation: Orientation,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn domain(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_DOMAIN,
            message: message.into(),
        }
    }
}

impl From<KeiError> for CliError {
    fn from(e: KeiError) -> Self {
        match e {
            KeiError::Axioms(_) | KeiError::NotInvolutory { .. } | KeiError::ZeroOrder => {
                Self::domain(e.to_string())
            }
            _ => Self::input(e.to_string()),
        }
    }
}

impl From<ModuleError> for CliError {
    fn from(e: ModuleError) -> Self {
        match e {
            ModuleError::OrderMismatch { .. } | ModuleError::LimitExceeded { .. } => {
                Self::domain(e.to_string())
            }
            _ => Self::input(e.to_string()),
        }
    }
}

impl From<ModArithError> for CliError {
    fn from(e: ModArithError) -> Self {
        Self::input(e.to_string())
    }
}

impl From<DiagramError> for CliError {
    fn from(e: DiagramError) -> Self {
        Self::input(e.to_string())
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        Self::domain(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::input(e.to_string())
    }
}

pub fn fixture_dir() -> PathBuf {
    std::env::var_os(FIXTURES_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(crate::bundled_fixture_dir)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn fixture_path(name: &str) -> PathBuf {
    let mut p = fixture_dir().join(name);
    if p.extension().is_none() {
        p.set_extension("json");
    }
    p
}

/// `file:<path>`, `fixture:<name>` or a bare path, read to a string.
fn read_source(spec: &str) -> Result<String, CliError> {
    if let Some(p) = spec.strip_prefix("file:") {
        read(Path::new(p))
    } else if let Some(name) = spec.strip_prefix("fixture:") {
        read(&fixture_path(name))
    } else {
        read(Path::new(spec))
    }
}

pub fn resolve_kei(spec: &str) -> Result<FiniteKei, CliError> {
    Ok(resolve_kei_raw(spec)??)
}

// Outer error: the argument itself is unreadable. Inner: the kei it names is bad.
fn resolve_kei_raw(spec: &str) -> Result<Result<FiniteKei, KeiError>, CliError> {
    let parse_n = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| CliError::input(format!("bad kei order `{s}`")))
    };
    if let Some(n) = spec.strip_prefix("takasaki:") {
        return Ok(takasaki_kei(parse_n(n)?));
    }
    if let Some(rest) = spec.strip_prefix("alexander:") {
        let (n, t) = rest
            .split_once(':')
            .ok_or_else(|| CliError::input("expected alexander:<n>:<t>"))?;
        let t = t
            .parse::<i64>()
            .map_err(|_| CliError::input(format!("bad parameter `{t}`")))?;
        return Ok(alexander_kei(parse_n(n)?, t));
    }
    Ok(FiniteKei::parse(&read_source(spec)?))
}

pub fn resolve_module(src: &ModuleSource, kei: &FiniteKei) -> Result<ModuleStructure, CliError> {
    let module = if let Some(m) = src.module.strip_prefix("trivial:") {
        let m = m
            .parse::<u64>()
            .map_err(|_| CliError::input(format!("bad modulus `{m}`")))?;
        ModuleStructure::trivial(kei.order(), Modulus::new(m)?)
    } else {
        let text = read_source(&src.module)?;
        if text.trim_start().starts_with('{') {
            ModuleStructure::from_json(&text)?
        } else {
            let m = src
                .modulus
                .ok_or_else(|| CliError::input("block-text modules need --mod"))?;
            let variant = src.variant.map(Variant::from).unwrap_or(Variant::Kei);
            ModuleStructure::from_block_text(&text, Modulus::new(m)?, variant)?
        }
    };
    Ok(match src.variant {
        Some(v) => module.with_variant(v.into()),
        None => module,
    })
}

/// Looks `name` up in every bundled table under `tables/`.
fn fixture_record(name: &str) -> Result<KnotRecord, CliError> {
    let dir = fixture_dir().join("tables");
    let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
        .map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    for p in paths {
        let table = load_knot_table(&read(&p)?)?;
        if let Some(r) = table.into_iter().find(|r| r.name == name) {
            return Ok(r);
        }
    }
    Err(CliError::input(format!(
        "no fixture diagram named `{name}`"
    )))
}

type NamedDiagrams = Vec<(String, Result<LinkDiagram, CliError>)>;

/// Named diagrams for one run, in input order. Per-entry parse failures are
/// kept so batch output can report them inline.
fn resolve_diagrams(src: &DiagramSource, name: Option<&str>) -> Result<NamedDiagrams, CliError> {
    if let Some(pd) = &src.pd {
        let (label, diagram) = if let Some(n) = pd.strip_prefix("fixture:") {
            let r = fixture_record(n)?;
            (r.name.clone(), r.diagram()?)
        } else if let Some(p) = pd.strip_prefix("file:") {
            (p.to_string(), parse_pd(&read(Path::new(p))?)?)
        } else {
            ("input".to_string(), parse_pd(pd)?)
        };
        return Ok(vec![(name.map_or(label, str::to_string), Ok(diagram))]);
    }
    if let Some(b) = &src.braid {
        let (n, w) = parse_braid_spec(b)?;
        let d = parse_braid(n, &w)?;
        return Ok(vec![(name.unwrap_or(b).to_string(), Ok(d))]);
    }
    let table = src
        .table
        .as_deref()
        .expect("clap enforces one diagram source");
    let records = load_knot_table(&read_source(table)?)?;
    Ok(records
        .into_iter()
        .map(|r| {
            let d = r.diagram().map_err(CliError::from);
            (r.name, d)
        })
        .collect())
}

fn oriented(d: LinkDiagram, o: Orientation) -> LinkDiagram {
    match o {
        Orientation::Forward => d,
        Orientation::Reversed => d.reverse_orientation(),
    }
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    writeln!(
        out,
        "{}",
        serde_json::to_string(v).expect("json values serialize")
    )?;
    Ok(())
}

fn check_kei(spec: &str, format: Format, out: &mut dyn Write) -> Result<i32, CliError> {
    let violations = match resolve_kei_raw(spec)? {
        Ok(k) => {
            match format {
                Format::Text => writeln!(out, "valid kei, order {}", k.order())?,
                Format::Json => emit_json(
                    out,
                    &json!({"valid": true, "order": k.order(), "violations": []}),
                )?,
            }
            return Ok(EXIT_OK);
        }
        Err(KeiError::Axioms(v)) => v,
        Err(e) => return Err(e.into()),
    };
    match format {
        Format::Text => {
            writeln!(out, "invalid kei: {} axiom violation(s)", violations.len())?;
            for v in &violations {
                writeln!(out, "  {v}")?;
            }
        }
        Format::Json => {
            let vs: Vec<Value> = violations
                .iter()
                .map(|v| json!({"axiom": v.axiom.label(), "witness": v.witness}))
                .collect();
            emit_json(out, &json!({"valid": false, "violations": vs}))?;
        }
    }
    Ok(EXIT_DOMAIN)
}

fn count(
    kei: &str,
    src: &DiagramSource,
    orientation: Orientation,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let x = resolve_kei(kei)?;
    let diagrams = resolve_diagrams(src, None)?;
    let batch = src.table.is_some();
    let mut worst = EXIT_OK;
    let mut records = Vec::new();
    for (name, d) in diagrams {
        match d {
            Ok(d) => {
                let n = counting_invariant(&oriented(d, orientation), &x);
                match format {
                    Format::Text if batch => writeln!(out, "{name}\t{n}")?,
                    Format::Text => writeln!(out, "{n}")?,
                    Format::Json => records.push(
                        json!({"link": name, "kei": digest(&x.to_json()), "countingInvariant": n}),
                    ),
                }
            }
            Err(e) => {
                worst = worst.max(e.code);
                match format {
                    Format::Text => writeln!(out, "{name}\terror: {}", e.message)?,
                    Format::Json => records.push(json!({"link": name, "error": e.message})),
                }
            }
        }
    }
    if format == Format::Json {
        if batch {
            emit_json(out, &Value::Array(records))?;
        } else if let Some(r) = records.pop() {
            emit_json(out, &r)?;
        }
    }
    Ok(worst)
}

#[allow(clippy::too_many_arguments)]
fn enum_modules(
    kei: &str,
    modulus: u64,
    variant: Variant,
    limit: Option<u64>,
    out_path: Option<&Path>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let x = resolve_kei(kei)?;
    let m = Modulus::new(modulus)?;
    let limit = limit.map(SearchLimit).unwrap_or_default();
    let found = enumerate_module_structures(&x, m, variant, limit)?;
    let kei_valid = found
        .iter()
        .filter(|s| {
            verify_module(&x, &s.with_variant(Variant::Kei))
                .map(|v| v.is_empty())
                .unwrap_or(false)
        })
        .count();

    let as_json = || {
        let items: Vec<Value> = found
            .iter()
            .map(|s| serde_json::from_str(&s.to_json()).expect("module json parses"))
            .collect();
        Value::Array(items)
    };
    if let Some(p) = out_path {
        fs::write(
            p,
            format!(
                "{}\n",
                serde_json::to_string(&as_json()).expect("serializes")
            ),
        )
        .map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
    }
    let summary = match variant {
        Variant::Kei => format!("{} kei-variant structures on Z_{m}", found.len()),
        Variant::Quandle => format!(
            "{} quandle-variant structures on Z_{m} ({kei_valid} kei-valid, {} not kei-valid)",
            found.len(),
            found.len() - kei_valid
        ),
    };
    match format {
        Format::Text => {
            if out_path.is_none() {
                for s in &found {
                    writeln!(out, "{}", s.to_block_text())?;
                }
            }
            writeln!(out, "{summary}")?;
        }
        Format::Json => {
            if out_path.is_some() {
                emit_json(out, &json!({"count": found.len(), "keiValid": kei_valid}))?;
            } else {
                emit_json(out, &as_json())?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn verify(
    kei: &str,
    src: &ModuleSource,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let x = resolve_kei(kei)?;
    let m = resolve_module(src, &x)?;
    let violations = verify_module(&x, &m)?;
    match format {
        Format::Text => {
            if violations.is_empty() {
                writeln!(
                    out,
                    "valid {}-variant module over Z_{}",
                    m.variant(),
                    m.modulus()
                )?;
            } else {
                writeln!(
                    out,
                    "invalid {}-variant module: {} violation(s)",
                    m.variant(),
                    violations.len()
                )?;
                for v in &violations {
                    writeln!(out, "  {v}")?;
                }
            }
        }
        Format::Json => {
            let vs: Vec<Value> = violations
                .iter()
                .map(|v| json!({"relation": v.relation.name(), "witness": v.witness}))
                .collect();
            emit_json(
                out,
                &json!({"valid": violations.is_empty(), "variant": m.variant().to_string(), "violations": vs}),
            )?;
        }
    }
    Ok(if violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_DOMAIN
    })
}

#[allow(clippy::too_many_arguments)]
fn enhanced(
    kei: &str,
    msrc: &ModuleSource,
    dsrc: &DiagramSource,
    orientation: Orientation,
    name: Option<&str>,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let x = resolve_kei(kei)?;
    let module = resolve_module(msrc, &x)?;
    let violations = verify_module(&x, &module)?;
    if !violations.is_empty() {
        return Err(CliError::domain(format!(
            "module is not a valid {}-variant module ({} violation(s), first: {})",
            module.variant(),
            violations.len(),
            violations[0]
        )));
    }
    if module.variant() == Variant::Quandle {
        writeln!(
            err,
            "note: quandle-variant module; results are invariants of oriented links only"
        )?;
    }
    let batch = dsrc.table.is_some();
    let diagrams = resolve_diagrams(dsrc, name)?;
    let mut worst = EXIT_OK;
    let mut records = Vec::new();
    for (label, d) in diagrams {
        let result =
            d.and_then(|d| Ok(enhanced_invariant(&oriented(d, orientation), &x, &module)?));
        match result {
            Ok(inv) => match format {
                Format::Text if batch => writeln!(out, "{label}\t{}", inv.polynomial)?,
                Format::Text => writeln!(out, "{}", inv.polynomial)?,
                Format::Json => records.push(
                    serde_json::to_value(InvariantRecord::new(&label, &x, &module, &inv))
                        .expect("serializes"),
                ),
            },
            Err(e) => {
                worst = worst.max(e.code);
                match format {
                    Format::Text => writeln!(out, "{label}\terror: {}", e.message)?,
                    Format::Json => records.push(json!({"link": label, "error": e.message})),
                }
            }
        }
    }
    if format == Format::Json {
        if batch {
            emit_json(out, &Value::Array(records))?;
        } else if let Some(r) = records.pop() {
            emit_json(out, &r)?;
        }
    }
    Ok(worst)
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::CheckKei { kei, format } => check_kei(&kei, format, out),
        Command::Count {
            kei,
            diagram,
            orientation,
            format,
        } => count(&kei, &diagram, orientation, format, out),
        Command::EnumModules {
            kei,
            modulus,
            variant,
            limit,
            out: path,
            format,
        } => enum_modules(
            &kei,
            modulus,
            variant.into(),
            limit,
            path.as_deref(),
            format,
            out,
        ),
        Command::VerifyModule {
            kei,
            module,
            format,
        } => verify(&kei, &module, format, out),
        Command::Enhanced {
            kei,
            module,
            diagram,
            orientation,
            name,
            format,
        } => enhanced(
            &kei,
            &module,
            &diagram,
            orientation,
            name.as_deref(),
            format,
            out,
            err,
        ),
        Command::Table {
            kei,
            module,
            table,
            orientation,
            format,
        } => {
            let diagram = DiagramSource {
                pd: None,
                braid: None,
                table: Some(table),
            };
            enhanced(&kei, &module, &diagram, orientation, None, format, out, err)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_INPUT,
            };
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}
