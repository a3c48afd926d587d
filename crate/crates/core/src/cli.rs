//! The `quotfib` command line: each subcommand reads JSON, runs one part of
//! the library and writes a [`Report`].
//!
//! Exit codes: 0 when every entry passes, 1 when some entry fails or errors,
//! 2 when the input cannot be read or parsed.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::canon::{
    canonical_commuting_pair, canonical_cyclic_pgl2, canonical_involutions_pgl3, canonical_klein_pgl2,
};
use crate::classify::{
    classify, standard_generators, standard_pgl2_generators, verify_class, DeltaSubgroup, FibrationClass,
    PairSpec,
};
use crate::error::{Error, Result};
use crate::fiber::{check_universal_property, FiniteModel, ModelSpec};
use crate::proj::{proj_eq, ProjMap};
use crate::report::{Entry, Report, RunConfig, FORMAT_VERSION};
use crate::suite::{run_suite, DEFAULT_SAMPLES};
use crate::torsion::{
    brute_force_fix_divisors, fix_divisors, is_full_cycle, translation_permutation, TorsionPoint,
    BRUTE_FORCE_MAX_N,
};

#[derive(Debug, Parser)]
#[command(name = "quotfib", version, about = "Exact checks for quotients of abelian varieties fibred in projective spaces")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Seed for every random stream of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random samples per randomized check.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    /// Input JSON file.
    #[arg(long = "in", visible_alias = "factors", global = true)]
    pub input: Option<PathBuf>,
    /// Where to write the report; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Torsion level `N` of the base model.
    #[arg(long, global = true)]
    pub level: Option<u32>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Normal form of a commuting pair, a cyclic or Klein subgroup of PGL_2, or involutions of PGL_3.
    Canonicalize,
    /// Normal form of the gluing group for a pair and a subgroup Δ.
    Classify,
    /// Classify, then re-verify the identities behind the class.
    VerifyCase,
    /// Divisors of |(n+1)[0]| fixed by translation, with their checks.
    FixDivisors,
    /// Universal property of the fibered product on a finite model.
    FiberProductCheck,
    /// All acceptance checks.
    Suite,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Canonicalize => "canonicalize",
            Command::Classify => "classify",
            Command::VerifyCase => "verify-case",
            Command::FixDivisors => "fix-divisors",
            Command::FiberProductCheck => "fiber-product-check",
            Command::Suite => "suite",
        }
    }
}

/// Input of `canonicalize`.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CanonInput {
    CommutingPair { phi: ProjMap, psi: ProjMap },
    CyclicPgl2 { map: ProjMap },
    KleinPgl2 { maps: [ProjMap; 2] },
    InvolutionsPgl3 { maps: Vec<ProjMap> },
}

/// Input of `classify` and `verify-case`; `verify-case` skips classifying
/// when `class` is given.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyInput {
    pub pair: PairSpec,
    #[serde(default)]
    pub delta: DeltaSubgroup,
    #[serde(default)]
    pub class: Option<FibrationClass>,
}

/// Input of `fix-divisors`: `x` and `y` generate `E[n+1]`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorInput {
    pub n: u32,
    pub x: TorsionPoint,
    pub y: TorsionPoint,
}

fn read_input<T: DeserializeOwned>(path: Option<&PathBuf>) -> Result<T> {
    let path = path.ok_or_else(|| Error::ParseError("--in is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(x: &T) -> serde_json::Value {
    serde_json::to_value(x).expect("serializable")
}

#[derive(Serialize)]
struct Conjugated {
    xi: ProjMap,
    canonical: Vec<ProjMap>,
}

fn conjugate_all(xi: &ProjMap, maps: &[ProjMap]) -> Result<Vec<ProjMap>> {
    maps.iter().map(|m| xi.conjugate(&m.embed(xi.conductor())?)).collect()
}

/// Conjugates `maps` by the output of `normal_form` and checks the results
/// with `target`.
fn conjugator_entries(
    maps: &[ProjMap],
    normal_form: impl FnOnce() -> Result<ProjMap>,
    target: impl FnOnce(&[ProjMap]) -> Result<bool>,
    detail: &str,
) -> (Vec<Entry>, Option<serde_json::Value>) {
    let r = normal_form().and_then(|xi| {
        let canonical = conjugate_all(&xi, maps)?;
        Ok((target(&canonical)?, Conjugated { xi, canonical }))
    });
    match r {
        Ok((ok, c)) => (vec![Entry::check("canonicalize.certificate", ok, detail)], Some(to_value(&c))),
        Err(e) => (vec![Entry::from_result("canonicalize.certificate", Err(e), detail)], None),
    }
}

fn all_proj_eq(got: &[ProjMap], want: &[ProjMap]) -> Result<bool> {
    if got.len() != want.len() {
        return Ok(false);
    }
    for (g, w) in got.iter().zip(want) {
        if !proj_eq(g, &w.embed(g.conductor())?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn canonicalize(input: CanonInput) -> (Vec<Entry>, Option<serde_json::Value>) {
    match input {
        CanonInput::CommutingPair { phi, psi } => match canonical_commuting_pair(&phi, &psi) {
            Ok(r) => {
                let check = (|| {
                    Ok(proj_eq(&r.xi.conjugate(&phi)?, &r.phi_canon)? && proj_eq(&r.xi.conjugate(&psi)?, &r.psi_canon)?)
                })();
                let primitive = r.lambda.as_root_of_unity().map(|(k, _)| k as usize) == Some(phi.dim());
                let entries = vec![
                    Entry::from_result("canonicalize.certificate", check, "ξφξ⁻¹ and ξψξ⁻¹ equal the canonical pair"),
                    Entry::check(
                        "canonicalize.lambda",
                        primitive,
                        format!("λ = {} has order {}", r.lambda, phi.dim()),
                    ),
                ];
                (entries, Some(to_value(&r)))
            }
            Err(e) => (vec![Entry::from_result("canonicalize.certificate", Err(e), "")], None),
        },
        CanonInput::CyclicPgl2 { map } => conjugator_entries(
            std::slice::from_ref(&map),
            || canonical_cyclic_pgl2(&map),
            |c| Ok(c[0].lift().is_diagonal()),
            "ξMξ⁻¹ is diagonal",
        ),
        CanonInput::KleinPgl2 { maps } => conjugator_entries(
            &maps,
            || canonical_klein_pgl2(&maps[0], &maps[1]),
            |c| all_proj_eq(c, &standard_pgl2_generators(4)?),
            "images are diag(-1,1) and the swap",
        ),
        CanonInput::InvolutionsPgl3 { maps } => conjugator_entries(
            &maps,
            || canonical_involutions_pgl3(&maps),
            |c| {
                let want = standard_generators(if c.len() == 1 { 2 } else { 4 }, 2)?;
                all_proj_eq(c, &want)
            },
            "images are diag(1,-1,1) and the reversal",
        ),
    }
}

fn classify_entries(input: &ClassifyInput) -> (Vec<Entry>, Option<FibrationClass>) {
    match classify(&input.pair, &input.delta) {
        Ok(cls) => {
            let order = cls.group_order();
            let detail = format!("case {}, |Δ| = {}", cls.case, order.as_ref().map_or(0, |k| *k));
            (vec![Entry::from_result("classify", order.map(|_| true), detail)], Some(cls))
        }
        Err(e) => (vec![Entry::from_result("classify", Err(e), "")], None),
    }
}

fn divisor_entries(input: &DivisorInput) -> (Vec<Entry>, Option<serde_json::Value>) {
    let DivisorInput { n, x, y } = input;
    let (n, x, y) = (*n, x, y);
    let fix = match fix_divisors(n, x, y) {
        Ok(f) => f,
        Err(e) => return (vec![Entry::from_result("fix_divisors", Err(e), "")], None),
    };
    let mut entries = vec![
        Entry::check("fix_divisors.count", fix.len() == n as usize + 1, format!("{} divisors", fix.len())),
        Entry::check(
            "fix_divisors.linear_system",
            fix.iter().all(|d| d.degree() == n as usize + 1 && d.sum().is_zero()),
            "degree n+1 and point-sum 0",
        ),
        Entry::from_result(
            "fix_divisors.disjoint",
            fix_divisors(n, y, x).map(|other| other.iter().all(|d| !fix.contains(d))),
            "Fix(t) ∩ Fix(u) = ∅",
        ),
        Entry::from_result(
            "fix_divisors.cycle",
            translation_permutation(n, x, y).map(|p| is_full_cycle(&p)),
            "translation by y is an (n+1)-cycle",
        ),
    ];
    if n <= BRUTE_FORCE_MAX_N {
        let mut sorted = fix.clone();
        sorted.sort();
        entries.push(Entry::from_result(
            "fix_divisors.oracle",
            brute_force_fix_divisors(n, x).map(|b| b == sorted),
            "formula agrees with exhaustive search",
        ));
    }
    (entries, Some(to_value(&fix)))
}

/// Runs one subcommand; `Err` only for unreadable or malformed input.
pub fn execute(cli: &Cli) -> Result<Report> {
    let c = &cli.common;
    let samples = c.samples as usize;
    let input = c.input.as_ref();
    let (entries, result) = match cli.command {
        Command::Canonicalize => canonicalize(read_input(input)?),
        Command::Classify => {
            let (e, cls) = classify_entries(&read_input(input)?);
            (e, cls.map(|c| to_value(&c)))
        }
        Command::VerifyCase => {
            let inp: ClassifyInput = read_input(input)?;
            let (mut e, cls) = match inp.class.clone() {
                Some(cls) => (vec![], Some(cls)),
                None => classify_entries(&inp),
            };
            if let Some(cls) = &cls {
                e.extend(verify_class(&inp.pair, cls, samples, c.seed));
            }
            (e, cls.map(|c| to_value(&c)))
        }
        Command::FixDivisors => divisor_entries(&read_input(input)?),
        Command::FiberProductCheck => {
            let mut spec: ModelSpec = read_input(input)?;
            if let Some(level) = c.level {
                spec.level = level;
            }
            match FiniteModel::build(spec) {
                Ok(model) => {
                    let rep = check_universal_property(&model);
                    let value = serde_json::json!({
                        "delta_order": rep.delta_order,
                        "combined_classes": rep.combined_classes,
                        "compatible_tuples": rep.compatible_tuples,
                    });
                    (rep.entries, Some(value))
                }
                Err(e) => (vec![Entry::from_result("fiber.build", Err(e), "")], None),
            }
        }
        Command::Suite => (run_suite(c.seed, samples), None),
    };
    let config = RunConfig {
        command: cli.command.name().into(),
        seed: c.seed,
        samples,
        input: c.input.as_ref().map(|p| p.display().to_string()),
        output: c.out.as_ref().map(|p| p.display().to_string()),
        level: c.level,
        format_version: FORMAT_VERSION,
    };
    Ok(Report::new(config, entries, result))
}

/// Parses `args`, runs, writes the report and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let json = report.to_json();
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{json}"),
    }
    if report.all_passed() {
        0
    } else {
        1
    }
}
