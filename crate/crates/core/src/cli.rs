//! Command-line front end.
//!
//! ```text
//! locrr chi         --wps 1,2 --range 0..3
//! locrr sectors     --wps 1,2 --twist 1
//! locrr poly        --pqs 2,3 --group S3
//! locrr todd-coarse --wps 1,1,2
//! locrr check       [--wps ... | --pqs ... --group ...] [--range A..B]
//! ```
//!
//! Text output prints rationals as `p/q` and non-rational cyclotomic numbers
//! as `[N; c0, c1, ...]`. Machine output is one JSON record per line.

use std::fmt::Write as _;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{int, Rational};
use crate::oracle::{
    burnside_invariant_dimension, compare, standard_battery, weighted_monomial_count, BatteryCase,
};
use crate::rr_engine::{
    chi_polynomial_pqs, class_aggregation_pqs, class_polynomials_pqs, coarse_todd_wps,
    cycle_type_label, euler_characteristic_pqs, euler_characteristic_wps, sector_contributions_pqs,
    sector_contributions_wps,
};
use crate::stacks::{
    parse_permutation, PermutationGroup, PermutationQuotientStack, Sector, WeightedProjectiveStack,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "locrr", version, about = "Exact localized Riemann-Roch on weighted projective stacks and permutation quotients")]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand, Debug)]
enum CliCommand {
    /// Euler characteristics for one twist or a range of twists
    Chi(CommonArgs),
    /// Per-sector breakdown of the localization sum
    Sectors(CommonArgs),
    /// Euler characteristic as a polynomial in m (permutation quotients)
    Poly(CommonArgs),
    /// Todd class of the coarse space (weighted projective stacks)
    #[command(name = "todd-coarse")]
    ToddCoarse(CommonArgs),
    /// Compare the engine against brute-force counts
    Check(CommonArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Weighted projective stack, e.g. 1,2
    #[arg(long, value_name = "W0,W1,...", conflicts_with = "pqs")]
    wps: Option<String>,
    /// Permutation quotient [(P^n)^k/G], given as n,k
    #[arg(long, value_name = "N,K")]
    pqs: Option<String>,
    /// Z2..Z5, S2..S5, or an explicit comma-separated element list in cycle notation
    #[arg(long, value_name = "GROUP", requires = "pqs")]
    group: Option<String>,
    /// A single twist
    #[arg(long, allow_hyphen_values = true, conflicts_with = "range")]
    twist: Option<i64>,
    /// Inclusive twist range A..B
    #[arg(long, value_name = "A..B", allow_hyphen_values = true)]
    range: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Chi,
    Sectors,
    Poly,
    ToddCoarse,
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Chi => "chi",
            Command::Sectors => "sectors",
            Command::Poly => "poly",
            Command::ToddCoarse => "todd-coarse",
            Command::Check => "check",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        [Command::Chi, Command::Sectors, Command::Poly, Command::ToddCoarse, Command::Check]
            .into_iter()
            .find(|c| c.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StackSpec {
    Wps(WeightedProjectiveStack),
    Pqs(PermutationQuotientStack),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistSpec {
    None,
    Single(i64),
    Range(i64, i64),
    Polynomial,
}

impl TwistSpec {
    fn values(self) -> Vec<i64> {
        match self {
            TwistSpec::Single(l) => vec![l],
            TwistSpec::Range(a, b) => (a..=b).collect(),
            TwistSpec::None | TwistSpec::Polynomial => vec![],
        }
    }
}

/// A fully validated invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    /// `None` only for `check`, which then runs the standard battery.
    pub stack: Option<StackSpec>,
    pub twist: TwistSpec,
    pub format: Format,
}

/// Twist range used by `check` when none is given.
pub const DEFAULT_CHECK_RANGE: (i64, i64) = (-10, 10);

#[derive(Debug)]
pub enum ArgsError {
    /// `--help` / `--version`: print and exit 0.
    Info(String),
    Invalid(Error),
}

impl From<Error> for ArgsError {
    fn from(e: Error) -> Self {
        ArgsError::Invalid(e)
    }
}

fn parse_list<T: std::str::FromStr>(flag: &str, text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| Error::Usage(format!("--{flag}: cannot parse '{s}' in '{text}'")))
        })
        .collect()
}

fn parse_range(text: &str) -> Result<(i64, i64)> {
    let bad = || Error::Usage(format!("--range: expected A..B, got '{text}'"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(Error::Usage(format!("--range: empty range '{text}'")));
    }
    Ok((a, b))
}

/// Named groups `Zj`, `Sj` (2 <= j <= 5) or an explicit list like `(1),(123),(132)`.
pub fn parse_group(text: &str, degree: usize) -> Result<PermutationGroup> {
    let t = text.trim();
    let named = |prefix: char| -> Option<usize> {
        t.strip_prefix(prefix).and_then(|d| d.parse::<usize>().ok()).filter(|j| (2..=5).contains(j))
    };
    if let Some(j) = named('Z') {
        return PermutationGroup::cyclic(j, degree);
    }
    if let Some(j) = named('S') {
        return PermutationGroup::symmetric(j, degree);
    }
    if t == "1" {
        return Ok(PermutationGroup::trivial(degree));
    }
    let elements = split_top_level(t)
        .into_iter()
        .map(|p| parse_permutation(degree, p))
        .collect::<Result<Vec<_>>>()?;
    PermutationGroup::new(degree, elements)
}

/// Split on commas that sit outside parentheses.
fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(text[start..].trim());
    out.into_iter().filter(|s| !s.is_empty()).collect()
}

fn build_stack(args: &CommonArgs) -> Result<Option<StackSpec>> {
    if let Some(w) = &args.wps {
        let weights = parse_list::<u64>("wps", w)?;
        let stack = WeightedProjectiveStack::new(weights).map_err(|e| Error::Usage(format!("--wps: {e}")))?;
        return Ok(Some(StackSpec::Wps(stack)));
    }
    if let Some(p) = &args.pqs {
        let nk = parse_list::<u64>("pqs", p)?;
        let [n, k] = nk[..] else {
            return Err(Error::Usage(format!("--pqs: expected n,k, got '{p}'")));
        };
        if n == 0 || k == 0 || k > 9 {
            return Err(Error::Usage(format!("--pqs: need n >= 1 and 1 <= k <= 9, got '{p}'")));
        }
        let group = match &args.group {
            Some(g) => parse_group(g, k as usize)?,
            None => PermutationGroup::trivial(k as usize),
        };
        let stack = PermutationQuotientStack::new(n as u32, k as usize, group)?;
        return Ok(Some(StackSpec::Pqs(stack)));
    }
    Ok(None)
}

fn build_job(command: Command, args: CommonArgs) -> Result<JobSpec> {
    let stack = build_stack(&args)?;
    let twist = match (args.twist, &args.range) {
        (Some(l), _) => TwistSpec::Single(l),
        (None, Some(r)) => {
            let (a, b) = parse_range(r)?;
            TwistSpec::Range(a, b)
        }
        (None, None) => TwistSpec::None,
    };
    let needs_stack = || Error::Usage(format!("{}: one of --wps or --pqs is required", command.name()));
    let twist = match command {
        Command::Chi | Command::Sectors => {
            stack.as_ref().ok_or_else(needs_stack)?;
            if twist == TwistSpec::None {
                return Err(Error::Usage(format!("{}: --twist or --range is required", command.name())));
            }
            twist
        }
        Command::Poly => {
            match &stack {
                Some(StackSpec::Pqs(_)) => {}
                Some(StackSpec::Wps(_)) => {
                    return Err(Error::Usage("poly: --wps is not supported; use --pqs".into()))
                }
                None => return Err(needs_stack()),
            }
            if twist != TwistSpec::None {
                return Err(Error::Usage("poly: --twist/--range are not accepted".into()));
            }
            TwistSpec::Polynomial
        }
        Command::ToddCoarse => {
            match &stack {
                Some(StackSpec::Wps(_)) => {}
                Some(StackSpec::Pqs(_)) => {
                    return Err(Error::Usage("todd-coarse: --pqs is not supported; use --wps".into()))
                }
                None => return Err(needs_stack()),
            }
            if twist != TwistSpec::None {
                return Err(Error::Usage("todd-coarse: --twist/--range are not accepted".into()));
            }
            TwistSpec::None
        }
        Command::Check => match twist {
            TwistSpec::None => TwistSpec::Range(DEFAULT_CHECK_RANGE.0, DEFAULT_CHECK_RANGE.1),
            t => t,
        },
    };
    Ok(JobSpec { command, stack, twist, format: args.format })
}

/// Parse an argument vector (including the program name).
pub fn parse_args<I, T>(args: I) -> std::result::Result<JobSpec, ArgsError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp
        | clap::error::ErrorKind::DisplayVersion
        | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => ArgsError::Info(e.to_string()),
        _ => ArgsError::Invalid(Error::Usage(e.render().to_string().trim_end().to_string())),
    })?;
    let (command, args) = match cli.command {
        CliCommand::Chi(a) => (Command::Chi, a),
        CliCommand::Sectors(a) => (Command::Sectors, a),
        CliCommand::Poly(a) => (Command::Poly, a),
        CliCommand::ToddCoarse(a) => (Command::ToddCoarse, a),
        CliCommand::Check(a) => (Command::Check, a),
    };
    Ok(build_job(command, args)?)
}

// ---------------------------------------------------------------------------
// machine records

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StackRecord {
    Wps { weights: Vec<u64> },
    Pqs { n: u32, k: usize, group: Vec<String>, #[serde(default, skip_serializing_if = "Option::is_none")] name: Option<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorRecord {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycles: Option<usize>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub cycle_type: Vec<usize>,
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<String>>,
}

/// One line of machine output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub command: String,
    pub stack: StackRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<(i64, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sectors: Option<Vec<SectorRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<ClassRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agree: Option<bool>,
}

impl StackRecord {
    fn of(stack: &StackSpec) -> Self {
        match stack {
            StackSpec::Wps(s) => StackRecord::Wps { weights: s.weights().to_vec() },
            StackSpec::Pqs(s) => StackRecord::Pqs {
                n: s.n(),
                k: s.k(),
                group: s.group().elements().iter().map(ToString::to_string).collect(),
                name: s.group().name().map(str::to_string),
            },
        }
    }

    fn to_stack(&self) -> Result<StackSpec> {
        match self {
            StackRecord::Wps { weights } => Ok(StackSpec::Wps(WeightedProjectiveStack::new(weights.clone())?)),
            StackRecord::Pqs { n, k, group, name } => {
                let g = match name {
                    Some(name) => parse_group(name, *k)?,
                    None => parse_group(&group.join(","), *k)?,
                };
                Ok(StackSpec::Pqs(PermutationQuotientStack::new(*n, *k, g)?))
            }
        }
    }
}

impl Record {
    fn new(command: Command, stack: &StackSpec, job: &JobSpec) -> Self {
        Record {
            command: command.name().to_string(),
            stack: StackRecord::of(stack),
            twist: None,
            range: match job.twist {
                TwistSpec::Range(a, b) => Some((a, b)),
                _ => None,
            },
            value: None,
            coefficients: None,
            basis: None,
            sectors: None,
            classes: None,
            oracle: None,
            agree: None,
        }
    }
}

impl JobSpec {
    /// Rebuild the job that produced a stream of machine records.
    pub fn from_records(records: &[Record]) -> Result<JobSpec> {
        let first = records.first().ok_or_else(|| Error::Usage("no records".into()))?;
        let command = Command::from_name(&first.command)
            .ok_or_else(|| Error::Usage(format!("unknown command '{}'", first.command)))?;
        let stack = first.stack.to_stack()?;
        let twist = match (command, first.range, first.twist) {
            (Command::Poly, _, _) => TwistSpec::Polynomial,
            (_, Some((a, b)), _) => TwistSpec::Range(a, b),
            (_, None, Some(l)) => TwistSpec::Single(l),
            (_, None, None) => TwistSpec::None,
        };
        let battery = command == Command::Check && records.iter().any(|r| r.stack != first.stack);
        Ok(JobSpec {
            command,
            stack: if battery { None } else { Some(stack) },
            twist,
            format: Format::Machine,
        })
    }
}

/// Parse machine output back into records.
pub fn parse_machine_output(text: &str) -> Result<Vec<Record>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| Error::Usage(format!("bad record: {e}"))))
        .collect()
}

// ---------------------------------------------------------------------------
// execution

fn stack_title(stack: &StackSpec) -> String {
    match stack {
        StackSpec::Wps(s) => s.to_string(),
        StackSpec::Pqs(s) => s.to_string(),
    }
}

fn bundle_label(stack: &StackSpec, l: i64) -> String {
    match stack {
        StackSpec::Wps(_) => format!("O({l})"),
        StackSpec::Pqs(s) => {
            let parts = vec![l.to_string(); s.k()];
            format!("O({})", parts.join(","))
        }
    }
}

fn chi_of(stack: &StackSpec, l: i64) -> Result<Rational> {
    match stack {
        StackSpec::Wps(s) => euler_characteristic_wps(s, l),
        StackSpec::Pqs(s) => euler_characteristic_pqs(s, l),
    }
}

fn oracle_of(stack: &StackSpec, l: i64) -> Result<Rational> {
    match stack {
        StackSpec::Wps(s) => Ok(int(weighted_monomial_count(s.weights(), l)? as i64)),
        StackSpec::Pqs(s) => Ok(Rational::from_integer(burnside_invariant_dimension(s, l)?)),
    }
}

struct Emitter<'a, W: Write> {
    out: &'a mut W,
    format: Format,
}

impl<W: Write> Emitter<'_, W> {
    fn text(&mut self, line: &str) -> io::Result<()> {
        if self.format == Format::Text {
            writeln!(self.out, "{line}")?;
        }
        Ok(())
    }

    fn record(&mut self, r: &Record) -> io::Result<()> {
        if self.format == Format::Machine {
            let line = serde_json::to_string(r).map_err(io::Error::other)?;
            writeln!(self.out, "{line}")?;
        }
        Ok(())
    }
}

fn io_err(e: io::Error) -> Error {
    Error::Usage(format!("write failed: {e}"))
}

fn run_chi<W: Write>(em: &mut Emitter<W>, job: &JobSpec, stack: &StackSpec) -> Result<i32> {
    em.text(&stack_title(stack)).map_err(io_err)?;
    for l in job.twist.values() {
        let v = chi_of(stack, l)?;
        em.text(&format!("chi({}) = {v}", bundle_label(stack, l))).map_err(io_err)?;
        let mut r = Record::new(Command::Chi, stack, job);
        r.twist = Some(l);
        r.value = Some(v.to_string());
        em.record(&r).map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn run_sectors<W: Write>(em: &mut Emitter<W>, job: &JobSpec, stack: &StackSpec) -> Result<i32> {
    em.text(&stack_title(stack)).map_err(io_err)?;
    for l in job.twist.values() {
        em.text(&format!("twist {l}")).map_err(io_err)?;
        let mut r = Record::new(Command::Sectors, stack, job);
        r.twist = Some(l);
        let mut sectors = Vec::new();
        let total = match stack {
            StackSpec::Wps(s) => {
                for c in sector_contributions_wps(s, l)? {
                    let Sector::Wps(sec) = &c.sector else { unreachable!() };
                    let fixed: Vec<String> = sec.fixed.iter().map(ToString::to_string).collect();
                    em.text(&format!("sector {}  fixed {{{}}}  value {}", sec.root, fixed.join(","), c.value))
                        .map_err(io_err)?;
                    sectors.push(SectorRecord {
                        label: sec.root.to_string(),
                        fixed: Some(sec.fixed.clone()),
                        cycles: None,
                        value: c.value.to_string(),
                    });
                }
                euler_characteristic_wps(s, l)?
            }
            StackSpec::Pqs(s) => {
                for c in sector_contributions_pqs(s, l)? {
                    let Sector::Pqs(sec) = &c.sector else { unreachable!() };
                    em.text(&format!("sector {}  cycles {}  value {}", sec.element, sec.cycles.len(), c.value))
                        .map_err(io_err)?;
                    sectors.push(SectorRecord {
                        label: sec.element.to_string(),
                        fixed: None,
                        cycles: Some(sec.cycles.len()),
                        value: c.value.to_string(),
                    });
                }
                em.text(&format!("weight 1/{}", s.group().order())).map_err(io_err)?;
                let classes = class_aggregation_pqs(s, l)?;
                let mut class_records = Vec::new();
                for cv in &classes {
                    em.text(&format!(
                        "class {}  ({} element{})  value {}",
                        cv.label(),
                        cv.elements.len(),
                        if cv.elements.len() == 1 { "" } else { "s" },
                        cv.value
                    ))
                    .map_err(io_err)?;
                    class_records.push(ClassRecord {
                        cycle_type: cv.cycle_type.clone(),
                        elements: cv.elements.iter().map(ToString::to_string).collect(),
                        value: Some(cv.value.to_string()),
                        coefficients: None,
                    });
                }
                r.classes = Some(class_records);
                euler_characteristic_pqs(s, l)?
            }
        };
        em.text(&format!("total {total}")).map_err(io_err)?;
        r.sectors = Some(sectors);
        r.value = Some(total.to_string());
        em.record(&r).map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn run_poly<W: Write>(em: &mut Emitter<W>, job: &JobSpec, stack: &StackSpec) -> Result<i32> {
    let StackSpec::Pqs(s) = stack else {
        return Err(Error::Usage("poly requires --pqs".into()));
    };
    em.text(&stack_title(stack)).map_err(io_err)?;
    let classes = class_polynomials_pqs(s)?;
    let class_sizes = class_aggregation_pqs(s, 0)?;
    let mut class_records = Vec::new();
    for ((cycle_type, p), cv) in classes.iter().zip(&class_sizes) {
        let count = cv.elements.len();
        em.text(&format!(
            "class {} ({} element{}): {p}",
            cycle_type_label(cycle_type),
            count,
            if count == 1 { "" } else { "s" }
        ))
        .map_err(io_err)?;
        class_records.push(ClassRecord {
            cycle_type: cycle_type.clone(),
            elements: cv.elements.iter().map(ToString::to_string).collect(),
            value: None,
            coefficients: Some(p.coeffs().iter().map(ToString::to_string).collect()),
        });
    }
    let poly = chi_polynomial_pqs(s)?;
    em.text(&format!("chi(m) = {poly}")).map_err(io_err)?;
    let mut r = Record::new(Command::Poly, stack, job);
    r.value = Some(poly.to_string());
    r.coefficients = Some(poly.coeffs().iter().map(ToString::to_string).collect());
    r.classes = Some(class_records);
    em.record(&r).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn run_todd<W: Write>(em: &mut Emitter<W>, job: &JobSpec, stack: &StackSpec) -> Result<i32> {
    let StackSpec::Wps(s) = stack else {
        return Err(Error::Usage("todd-coarse requires --wps".into()));
    };
    let td = coarse_todd_wps(s)?;
    let labels = td.basis_labels();
    em.text(&stack_title(stack)).map_err(io_err)?;
    let basis: Vec<String> = labels
        .iter()
        .zip(td.basis_descriptions())
        .map(|(l, d)| format!("{l} = {d}"))
        .collect();
    em.text(&format!("basis {}", basis.join(", "))).map_err(io_err)?;
    let mut sectors = Vec::new();
    for (sec, coeffs) in &td.sectors {
        let cs: Vec<String> = coeffs.iter().map(ToString::to_string).collect();
        em.text(&format!("sector {}: {}", sec.root, cs.join(", "))).map_err(io_err)?;
        sectors.push(SectorRecord {
            label: sec.root.to_string(),
            fixed: Some(sec.fixed.clone()),
            cycles: None,
            value: format!("[{}]", cs.join(", ")),
        });
    }
    let mut line = String::from("td =");
    for (i, (c, l)) in td.coefficients.iter().zip(&labels).enumerate() {
        let sep = if i == 0 { " " } else { " + " };
        let _ = write!(line, "{sep}{c} [{l}]");
    }
    em.text(&line).map_err(io_err)?;
    let mut r = Record::new(Command::ToddCoarse, stack, job);
    r.coefficients = Some(td.coefficients.iter().map(ToString::to_string).collect());
    r.basis = Some(basis);
    r.sectors = Some(sectors);
    em.record(&r).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn run_check<W: Write>(
    em: &mut Emitter<W>,
    job: &JobSpec,
    oracle: &dyn Fn(&StackSpec, i64) -> Result<Rational>,
) -> Result<i32> {
    let stacks: Vec<StackSpec> = match &job.stack {
        Some(s) => vec![s.clone()],
        None => standard_battery()
            .into_iter()
            .map(|c| match c {
                BatteryCase::Wps(s) => StackSpec::Wps(s),
                BatteryCase::Pqs(s) => StackSpec::Pqs(s),
            })
            .collect(),
    };
    let (mut compared, mut mismatches, mut integral_only) = (0usize, 0usize, 0usize);
    for stack in &stacks {
        for l in job.twist.values() {
            let engine = chi_of(stack, l)?;
            let mut r = Record::new(Command::Check, stack, job);
            r.twist = Some(l);
            r.value = Some(engine.to_string());
            if l >= 0 {
                let report = compare(engine.clone(), oracle(stack, l)?);
                compared += 1;
                if !report.agree {
                    mismatches += 1;
                }
                em.text(&format!(
                    "{}  twist {l}  engine {}  oracle {}  {}",
                    stack_title(stack),
                    report.engine,
                    report.oracle,
                    if report.agree { "ok" } else { "MISMATCH" }
                ))
                .map_err(io_err)?;
                r.oracle = Some(report.oracle.to_string());
                r.agree = Some(report.agree);
            } else {
                integral_only += 1;
                em.text(&format!("{}  twist {l}  engine {engine}  integral", stack_title(stack)))
                    .map_err(io_err)?;
            }
            em.record(&r).map_err(io_err)?;
        }
    }
    em.text(&format!(
        "summary: {compared} oracle comparisons, {mismatches} mismatches, {integral_only} integrality-only twists"
    ))
    .map_err(io_err)?;
    Ok(if mismatches == 0 { EXIT_OK } else { EXIT_MISMATCH })
}

/// Execute a job, writing results to `out`; returns the process exit status.
pub fn run<W: Write>(job: &JobSpec, out: &mut W) -> Result<i32> {
    let mut em = Emitter { out, format: job.format };
    match (job.command, &job.stack) {
        (Command::Check, _) => run_check(&mut em, job, &oracle_of),
        (_, None) => Err(Error::Usage(format!("{}: a stack is required", job.command.name()))),
        (Command::Chi, Some(s)) => run_chi(&mut em, job, s),
        (Command::Sectors, Some(s)) => run_sectors(&mut em, job, s),
        (Command::Poly, Some(s)) => run_poly(&mut em, job, s),
        (Command::ToddCoarse, Some(s)) => run_todd(&mut em, job, s),
    }
}

/// `check` against a caller-supplied oracle in place of the brute-force counts.
pub fn run_check_with<W: Write>(
    job: &JobSpec,
    out: &mut W,
    oracle: &dyn Fn(&StackSpec, i64) -> Result<Rational>,
) -> Result<i32> {
    if job.command != Command::Check {
        return Err(Error::Usage(format!("{}: not a check job", job.command.name())));
    }
    run_check(&mut Emitter { out, format: job.format }, job, oracle)
}

/// Map an error to its documented exit status.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_internal() {
        EXIT_INTERNAL
    } else {
        EXIT_USAGE
    }
}

/// Full command-line entry point: parse, run, report. Returns the exit status.
pub fn main_with_args<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
    E: Write,
{
    let job = match parse_args(args) {
        Ok(job) => job,
        Err(ArgsError::Info(msg)) => {
            let _ = write!(out, "{msg}");
            return EXIT_OK;
        }
        Err(ArgsError::Invalid(e)) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match run(&job, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> std::result::Result<JobSpec, ArgsError> {
        parse_args(std::iter::once("locrr").chain(args.iter().copied()))
    }

    fn run_text(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with_args(std::iter::once("locrr").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn parse_chi_wps() {
        let job = parse(&["chi", "--wps", "1,2", "--twist", "2"]).unwrap();
        assert_eq!(job.command, Command::Chi);
        assert_eq!(job.stack, Some(StackSpec::Wps(WeightedProjectiveStack::new(vec![1, 2]).unwrap())));
        assert_eq!(job.twist, TwistSpec::Single(2));
        assert_eq!(job.format, Format::Text);
    }

    #[test]
    fn parse_poly_pqs() {
        let job = parse(&["poly", "--pqs", "2,3", "--group", "S3"]).unwrap();
        assert_eq!(job.command, Command::Poly);
        assert_eq!(job.twist, TwistSpec::Polynomial);
        let Some(StackSpec::Pqs(s)) = job.stack else { panic!("expected pqs") };
        assert_eq!((s.n(), s.k(), s.group().order()), (2, 3, 6));
    }

    #[test]
    fn non_closed_group_rejected() {
        match parse(&["chi", "--pqs", "2,3", "--group", "(123),(12)", "--twist", "1"]) {
            Err(ArgsError::Invalid(Error::NotAGroup(_))) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn explicit_group_accepted() {
        let job = parse(&["chi", "--pqs", "2,3", "--group", "(1),(123),(132)", "--range", "-2..2"]).unwrap();
        assert_eq!(job.twist, TwistSpec::Range(-2, 2));
        let Some(StackSpec::Pqs(s)) = job.stack else { panic!("expected pqs") };
        assert_eq!(s.group().order(), 3);
    }

    #[test]
    fn usage_errors_name_the_flag() {
        let (code, _, err) = run_text(&["chi", "--wps", "1,x", "--twist", "1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--wps"), "{err}");
        let (code, _, err) = run_text(&["chi", "--wps", "1,2", "--range", "3..1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--range"), "{err}");
        let (code, _, err) = run_text(&["chi", "--wps", "1,2", "--bogus"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--bogus"), "{err}");
        let (code, _, _) = run_text(&["poly", "--wps", "1,2"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_text(&["chi", "--wps", "1,2"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_text(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("todd-coarse"));
    }

    #[test]
    fn check_default_range() {
        let job = parse(&["check"]).unwrap();
        assert_eq!(job.stack, None);
        assert_eq!(job.twist, TwistSpec::Range(-10, 10));
    }

    #[test]
    fn internal_errors_map_to_three() {
        assert_eq!(exit_code(&Error::NotInteger("1/2".into())), EXIT_INTERNAL);
        assert_eq!(exit_code(&Error::Usage("x".into())), EXIT_USAGE);
    }

    #[test]
    fn machine_output_round_trips() {
        for args in [
            vec!["chi", "--wps", "1,2", "--twist", "2", "--format", "machine"],
            vec!["chi", "--wps", "4,6", "--range", "0..12", "--format", "machine"],
            vec!["sectors", "--pqs", "2,3", "--group", "S3", "--twist", "1", "--format", "machine"],
            vec!["sectors", "--pqs", "1,3", "--group", "(1),(123),(132)", "--twist", "0", "--format", "machine"],
            vec!["poly", "--pqs", "2,3", "--group", "Z3", "--format", "machine"],
            vec!["todd-coarse", "--wps", "1,1,2", "--format", "machine"],
            vec!["check", "--wps", "1,2", "--range", "-2..2", "--format", "machine"],
        ] {
            let job = parse(&args).unwrap();
            let mut out = Vec::new();
            assert_eq!(run(&job, &mut out).unwrap(), EXIT_OK);
            let records = parse_machine_output(std::str::from_utf8(&out).unwrap()).unwrap();
            assert_eq!(JobSpec::from_records(&records).unwrap(), job, "{args:?}");
        }
    }

    #[test]
    fn check_mismatch_exits_four() {
        let job = parse(&["check", "--wps", "1,2", "--range", "-1..3"]).unwrap();
        let mut out = Vec::new();
        let off_by_one = |s: &StackSpec, l: i64| oracle_of(s, l).map(|v| v + int(i64::from(l == 2)));
        assert_eq!(run_check_with(&job, &mut out, &off_by_one).unwrap(), EXIT_MISMATCH);
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("twist 2  engine 2  oracle 3  MISMATCH"), "{text}");
        assert!(text.contains("4 oracle comparisons, 1 mismatches"), "{text}");
    }

    #[test]
    fn machine_values_match_library() {
        let job = parse(&["chi", "--wps", "1,2", "--range", "-5..5", "--format", "machine"]).unwrap();
        let mut out = Vec::new();
        run(&job, &mut out).unwrap();
        let records = parse_machine_output(std::str::from_utf8(&out).unwrap()).unwrap();
        let stack = WeightedProjectiveStack::new(vec![1, 2]).unwrap();
        for r in records {
            let l = r.twist.unwrap();
            assert_eq!(r.value.unwrap(), euler_characteristic_wps(&stack, l).unwrap().to_string());
        }
    }
}
