//! Command-line front end and JSON document formats.
//!
//! Every document carries a `format_version`. Canonical output is compact
//! JSON with sorted keys; forms are lists of `[coordinate, coefficient]`
//! pairs and exact rationals are `"num/den"` strings.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{
    gen_example1, gen_example2, gen_example3, gen_example4, gen_span_family, gen_tightness, ClaimStatus,
    ConstructionReport,
};
use crate::density::{format_rational, mc_density, satisfying_density, to_f64, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::forms::{Condition, ConditionSystem, LinearForm};
use crate::fp::{compute_l, Alphabet, Modulus, TargetSet};
use crate::structure::{
    certify_density_bound, verify_certificate, Case, Certificate, EquidistributionCertificate, Parameters,
    SunflowerCertificate,
};
use crate::DEFAULT_ENUMERATION_CAP;

pub const FORMAT_VERSION: u32 = 1;

/// Environment variable overriding the exact-engine budget.
pub const BUDGET_ENV: &str = "CUBEFORMS_BUDGET";

fn check_version(v: u32) -> Result<()> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(Error::Parse(format!("unsupported format_version {v}, expected {FORMAT_VERSION}")))
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let (n, d) = s.split_once('/').ok_or_else(bad)?;
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::Parse(format!("bad decimal {s:?}")))
}

/// `[[coordinate, coefficient], ...]` in coordinate order.
pub type FormDocument = Vec<(usize, i64)>;

pub fn form_to_document(form: &LinearForm) -> FormDocument {
    form.terms().map(|(z, c)| (z, c as i64)).collect()
}

pub fn form_from_document(p: Modulus, doc: &FormDocument) -> Result<LinearForm> {
    let mut form = LinearForm::zero(p);
    for &(z, c) in doc {
        if form.coeff(z) != 0 {
            return Err(Error::invalid(format!("coordinate {z} appears twice")));
        }
        let c = p.reduce(c);
        if c == 0 {
            return Err(Error::invalid(format!("coefficient of x{z} is 0 mod {}", p.get())));
        }
        form.add_term(z, c);
    }
    Ok(form)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionDocument {
    pub form: FormDocument,
    #[serde(rename = "E")]
    pub e: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDocument {
    pub format_version: u32,
    pub p: u32,
    #[serde(rename = "S")]
    pub s: Vec<i64>,
    pub conditions: Vec<ConditionDocument>,
}

fn residues(p: Modulus, values: &[i64]) -> Vec<u32> {
    values.iter().map(|&v| p.reduce(v)).collect()
}

impl SystemDocument {
    pub fn from_system(system: &ConditionSystem) -> Self {
        SystemDocument {
            format_version: FORMAT_VERSION,
            p: system.modulus().get(),
            s: system.alphabet().members().into_iter().map(i64::from).collect(),
            conditions: system
                .conditions()
                .iter()
                .map(|c| ConditionDocument {
                    form: form_to_document(&c.form),
                    e: c.target.members().into_iter().map(i64::from).collect(),
                })
                .collect(),
        }
    }

    pub fn to_system(&self) -> Result<ConditionSystem> {
        check_version(self.format_version)?;
        let p = Modulus::new(self.p)?;
        let alphabet = Alphabet::new(p, residues(p, &self.s))?;
        let conditions = self
            .conditions
            .iter()
            .map(|c| Condition::new(form_from_document(p, &c.form)?, TargetSet::new(p, residues(p, &c.e))?))
            .collect::<Result<Vec<_>>>()?;
        ConditionSystem::new(alphabet, conditions)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub format_version: u32,
    /// `equidistribution`, `sunflower` or `trivial`.
    pub kind: String,
    /// Shortest round-trip decimal of the bound.
    pub bound: String,
    pub bound_exact: String,
    #[serde(default)]
    pub member_indices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_tuple_bound: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<FormDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub petals: Option<Vec<FormDocument>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_petal_support: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub petal_count: Option<usize>,
}

impl CertificateDocument {
    pub fn from_certificate(cert: &Certificate) -> Self {
        let mut doc = CertificateDocument {
            format_version: FORMAT_VERSION,
            kind: cert.kind().to_string(),
            bound: cert.bound().to_string(),
            bound_exact: format_rational(&cert.bound_exact()),
            member_indices: Vec::new(),
            r: None,
            per_tuple_bound: None,
            center: None,
            petals: None,
            min_petal_support: None,
            petal_count: None,
        };
        match cert {
            Certificate::Trivial => {}
            Certificate::Equidistribution(c) => {
                doc.member_indices = c.member_indices.clone();
                doc.r = Some(c.r);
                doc.per_tuple_bound = Some(c.per_tuple_bound.to_string());
            }
            Certificate::Sunflower { certificate, petal_count, .. } => {
                doc.member_indices = certificate.member_indices.clone();
                doc.center = Some(form_to_document(&certificate.center));
                doc.petals = Some(certificate.petals.iter().map(form_to_document).collect());
                doc.min_petal_support = Some(certificate.min_petal_support);
                doc.petal_count = Some(*petal_count);
            }
        }
        doc
    }

    pub fn to_certificate(&self, p: Modulus) -> Result<Certificate> {
        check_version(self.format_version)?;
        let missing = |field: &str| Error::Parse(format!("{} certificate lacks {field}", self.kind));
        let bound = parse_f64(&self.bound)?;
        let bound_exact = parse_rational(&self.bound_exact)?;
        match self.kind.as_str() {
            "trivial" => Ok(Certificate::Trivial),
            "equidistribution" => Ok(Certificate::Equidistribution(EquidistributionCertificate {
                member_indices: self.member_indices.clone(),
                r: self.r.ok_or_else(|| missing("r"))?,
                per_tuple_bound: parse_f64(self.per_tuple_bound.as_deref().ok_or_else(|| missing("per_tuple_bound"))?)?,
                density_bound: bound,
                density_bound_exact: bound_exact,
            })),
            "sunflower" => {
                // petals are kept as written (zero coefficients dropped) so a
                // tampered petal is reported by the verifier, not the parser
                let lenient = |doc: &FormDocument| LinearForm::from_terms(p, doc.iter().copied());
                Ok(Certificate::Sunflower {
                    certificate: SunflowerCertificate {
                        center: lenient(self.center.as_ref().ok_or_else(|| missing("center"))?),
                        member_indices: self.member_indices.clone(),
                        petals: self.petals.as_ref().ok_or_else(|| missing("petals"))?.iter().map(lenient).collect(),
                        min_petal_support: self.min_petal_support.ok_or_else(|| missing("min_petal_support"))?,
                    },
                    petal_count: self.petal_count.ok_or_else(|| missing("petal_count"))?,
                    bound,
                    bound_exact,
                })
            }
            other => Err(Error::Parse(format!("unknown certificate kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimDocument {
    pub name: String,
    pub status: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub format_version: u32,
    pub name: String,
    pub parameters: BTreeMap<String, String>,
    pub claims: Vec<ClaimDocument>,
    pub system: SystemDocument,
}

impl ReportDocument {
    pub fn from_report(report: &ConstructionReport) -> Self {
        ReportDocument {
            format_version: FORMAT_VERSION,
            name: report.name.clone(),
            parameters: report.parameters.clone(),
            claims: report
                .claims
                .iter()
                .map(|c| ClaimDocument {
                    name: c.name.clone(),
                    status: c.status.as_str().to_string(),
                    detail: c.detail.clone(),
                })
                .collect(),
            system: SystemDocument::from_system(&report.system),
        }
    }
}

/// Compact JSON with sorted keys.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("documents serialize");
    serde_json::to_string(&value).expect("values serialize")
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    from_json(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = to_canonical_json(value);
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))
}

/// `--budget`, else `CUBEFORMS_BUDGET`, else the default.
pub fn resolve_budget(flag: Option<u128>) -> Result<u128> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("{BUDGET_ENV} must be a nonnegative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

#[derive(Parser, Debug)]
#[command(name = "cubeforms", version, about = "Exact analysis of mod-p linear forms on alphabet cubes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Escape length L(S, E) with a witness tuple and its upper bound.
    Lse {
        #[arg(short = 'p')]
        p: u32,
        #[arg(short = 'S', long = "alphabet", value_delimiter = ',', required = true)]
        s: Vec<i64>,
        #[arg(short = 'E', long = "target", value_delimiter = ',', num_args = 0..)]
        e: Vec<i64>,
    },
    /// Satisfying density of a system, exact or Monte Carlo.
    Density {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Certify an upper bound on the satisfying density.
    Bound {
        input: PathBuf,
        #[arg(short = 'u', requires = "r", conflicts_with = "epsilon")]
        u: Option<usize>,
        #[arg(short = 'r', requires = "u")]
        r: Option<usize>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Where to write the certificate document.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u128,
    },
    /// Re-check a certificate against a system.
    Verify {
        system: PathBuf,
        certificate: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u128,
    },
    /// Generate an example system and its verified report.
    Gen {
        /// example1, example2, example3, example4, span or tightness.
        name: String,
        #[command(flatten)]
        params: GenParams,
        /// System document path; the report goes next to it unless --report is given.
        #[arg(short = 'o', long)]
        output: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run every fixture in a directory and print a pass/fail table.
    Suite {
        dir: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Mc,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    #[arg(short = 'p', default_value_t = 3)]
    #[serde(default = "default_p")]
    pub p: u32,
    #[arg(short = 'r')]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[arg(short = 'k')]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[arg(short = 'u')]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<u32>,
    #[arg(short = 't')]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[arg(short = 'S', long = "alphabet", value_delimiter = ',')]
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<i64>>,
    #[arg(short = 'E', long = "target", value_delimiter = ',')]
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<i64>>,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
}

fn default_p() -> u32 {
    3
}

fn need<T: Copy>(v: Option<T>, flag: &str, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::invalid(format!("{name} needs -{flag}")))
}

/// Runs the named generator.
pub fn generate(name: &str, params: &GenParams) -> Result<ConstructionReport> {
    let p = Modulus::new(params.p)?;
    match name {
        "example1" => gen_example1(p, need(params.k, "k", name)?),
        "example2" => gen_example2(p, need(params.r, "r", name)?),
        "example3" => gen_example3(p, need(params.r, "r", name)?, need(params.k, "k", name)?, params.u.unwrap_or(0)),
        "example4" => gen_example4(p, need(params.r, "r", name)?, need(params.k, "k", name)?, params.seed),
        "span" => gen_span_family(p, need(params.r, "r", name)?, need(params.t, "t", name)?),
        "tightness" => {
            let s = params.s.as_ref().ok_or_else(|| Error::invalid("tightness needs -S"))?;
            let e = params.e.as_ref().ok_or_else(|| Error::invalid("tightness needs -E"))?;
            let alphabet = Alphabet::new(p, residues(p, s))?;
            let target = TargetSet::new(p, residues(p, e))?;
            gen_tightness(&alphabet, &target, need(params.k, "k", name)?)
        }
        other => Err(Error::invalid(format!(
            "unknown generator {other:?} (expected example1, example2, example3, example4, span or tightness)"
        ))),
    }
}

/// Outcome of a command: exit code plus text for stdout.
struct Outcome {
    code: i32,
    out: String,
}

impl Outcome {
    fn ok(out: String) -> Self {
        Outcome { code: 0, out }
    }
}

fn cmd_lse(p: u32, s: &[i64], e: &[i64]) -> Result<Outcome> {
    let p = Modulus::new(p)?;
    let alphabet = Alphabet::new(p, residues(p, s))?;
    let target = TargetSet::new(p, residues(p, e))?;
    let w = compute_l(&alphabet, &target);
    let witness: Vec<String> = w.tuple.iter().map(u32::to_string).collect();
    Ok(Outcome::ok(format!("L={} witness={} bound={}\n", w.l, witness.join(","), w.bound)))
}

fn cmd_density(input: &Path, mode: Mode, samples: u64, seed: u64, budget: Option<u128>) -> Result<Outcome> {
    let system = read_json::<SystemDocument>(input)?.to_system()?;
    match mode {
        Mode::Exact => {
            let budget = resolve_budget(budget)?;
            let d = satisfying_density(&system, budget)?;
            Ok(Outcome::ok(format!("{} = {}\n", format_rational(&d), to_f64(&d))))
        }
        Mode::Mc => {
            let est = mc_density(&system, samples, seed)?;
            Ok(Outcome::ok(format!(
                "{} ± {} (99% Hoeffding, hits={}, samples={}, seed={})\n",
                est.estimate, est.hoeffding_99, est.hits, est.samples, est.seed
            )))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_bound(
    input: &Path,
    u: Option<usize>,
    r: Option<usize>,
    epsilon: Option<f64>,
    output: Option<&Path>,
    budget: Option<u128>,
    cap: u128,
) -> Result<Outcome> {
    let system = read_json::<SystemDocument>(input)?.to_system()?;
    let params = match (u, r, epsilon) {
        (Some(u), Some(r), None) => Parameters { u, r },
        (None, None, Some(eps)) => Parameters::from_epsilon(system.modulus(), eps)?,
        _ => return Err(Error::invalid("give either -u and -r, or --epsilon")),
    };
    let budget = resolve_budget(budget)?;
    let report = certify_density_bound(&system, params, budget, cap)?;
    let mut out = String::new();
    let case = match report.case {
        Case::Separated => "separated subfamily",
        Case::Ball => "ball",
    };
    out.push_str(&format!("parameters: u={} r={}\n", params.u, params.r));
    out.push_str(&format!("case: {case}\n"));
    out.push_str(&format!("certificate: {}\n", report.certificate.kind()));
    if let Certificate::Sunflower { petal_count, .. } = &report.certificate {
        out.push_str(&format!("petals: {petal_count}\n"));
    }
    if !report.dropped.is_empty() {
        out.push_str(&format!("dropped: {:?}\n", report.dropped));
    }
    out.push_str(&format!("bound: {} = {}\n", format_rational(&report.bound_exact), report.bound));
    let a = &report.assumption;
    out.push_str(&format!(
        "assumption: {} (threshold {}, min distance {})\n",
        if a.holds { "holds" } else { "fails" },
        a.threshold,
        a.min_distance.map_or("n/a".to_string(), |d| d.to_string())
    ));
    let mut code = 0;
    match &report.exact_density {
        Some(d) => {
            out.push_str(&format!("exact density: {} = {}\n", format_rational(d), to_f64(d)));
            let dominates = *d <= report.bound_exact;
            out.push_str(&format!("bound >= exact: {}\n", if dominates { "yes" } else { "NO" }));
            if !dominates {
                code = 1;
            }
        }
        None => out.push_str("exact density: over budget\n"),
    }
    if let Some(path) = output {
        write_json(path, &CertificateDocument::from_certificate(&report.certificate))?;
        out.push_str(&format!("certificate written to {}\n", path.display()));
    }
    Ok(Outcome { code, out })
}

fn cmd_verify(system: &Path, cert: &Path, cap: u128) -> Result<Outcome> {
    let system = read_json::<SystemDocument>(system)?.to_system()?;
    let cert = read_json::<CertificateDocument>(cert)?.to_certificate(system.modulus())?;
    let v = verify_certificate(&cert, &system, cap);
    if v.valid {
        Ok(Outcome::ok("valid\n".into()))
    } else {
        let mut out = String::from("invalid\n");
        for r in &v.reasons {
            out.push_str(&format!("  {r}\n"));
        }
        Ok(Outcome { code: 1, out })
    }
}

fn report_path(output: &Path) -> PathBuf {
    let stem = output.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    output.with_file_name(format!("{stem}.report.json"))
}

fn cmd_gen(name: &str, params: &GenParams, output: &Path, report_out: Option<&Path>) -> Result<Outcome> {
    let report = generate(name, params)?;
    write_json(output, &SystemDocument::from_system(&report.system))?;
    let report_out = report_out.map(Path::to_path_buf).unwrap_or_else(|| report_path(output));
    write_json(&report_out, &ReportDocument::from_report(&report))?;
    let mut out = String::new();
    for (k, v) in &report.parameters {
        out.push_str(&format!("{k} = {v}\n"));
    }
    for c in &report.claims {
        out.push_str(&format!("[{}] {}: {}\n", c.status.as_str(), c.name, c.detail));
    }
    out.push_str(&format!("system written to {}\nreport written to {}\n", output.display(), report_out.display()));
    Ok(Outcome { code: if report.no_failures() { 0 } else { 1 }, out })
}

/// One fixture: a named check with its expected outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureDocument {
    pub format_version: u32,
    pub name: String,
    pub check: FixtureCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FixtureCheck {
    /// `compute_l` returns `l`.
    Lse {
        p: u32,
        #[serde(rename = "S")]
        s: Vec<i64>,
        #[serde(rename = "E")]
        e: Vec<i64>,
        l: usize,
    },
    /// Exact density equals `expected`.
    Density { system: SystemDocument, expected: String },
    /// The certified bound dominates the exact density and re-verifies.
    Bound { system: SystemDocument, u: usize, r: usize },
    /// `verify_certificate` returns `valid`.
    Verify { system: SystemDocument, certificate: CertificateDocument, valid: bool },
    /// Every claim of the generated report holds, and the listed
    /// parameters have the given values.
    Construction {
        generator: String,
        params: GenParams,
        #[serde(default)]
        expected: BTreeMap<String, String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn run_check(check: &FixtureCheck) -> Result<(bool, String)> {
    Ok(match check {
        FixtureCheck::Lse { p, s, e, l } => {
            let p = Modulus::new(*p)?;
            let got = compute_l(&Alphabet::new(p, residues(p, s))?, &TargetSet::new(p, residues(p, e))?).l;
            (got == *l, format!("L = {got}, expected {l}"))
        }
        FixtureCheck::Density { system, expected } => {
            let d = satisfying_density(&system.to_system()?, resolve_budget(None)?)?;
            let want = parse_rational(expected)?;
            (d == want, format!("density {}, expected {}", format_rational(&d), format_rational(&want)))
        }
        FixtureCheck::Bound { system, u, r } => {
            let system = system.to_system()?;
            let rep = certify_density_bound(&system, Parameters { u: *u, r: *r }, resolve_budget(None)?, DEFAULT_ENUMERATION_CAP)?;
            let v = verify_certificate(&rep.certificate, &system, DEFAULT_ENUMERATION_CAP);
            let dominates = rep.dominates();
            (
                v.valid && dominates != Some(false),
                format!(
                    "{} bound {}, exact {}, certificate {}",
                    rep.certificate.kind(),
                    format_rational(&rep.bound_exact),
                    rep.exact_density.as_ref().map_or("n/a".into(), format_rational),
                    if v.valid { "valid".to_string() } else { v.reasons.join("; ") }
                ),
            )
        }
        FixtureCheck::Verify { system, certificate, valid } => {
            let system = system.to_system()?;
            let cert = certificate.to_certificate(system.modulus())?;
            let v = verify_certificate(&cert, &system, DEFAULT_ENUMERATION_CAP);
            (v.valid == *valid, format!("valid = {}, expected {valid} {:?}", v.valid, v.reasons))
        }
        FixtureCheck::Construction { generator, params, expected } => {
            let rep = generate(generator, params)?;
            let mut problems: Vec<String> = rep
                .claims
                .iter()
                .filter(|c| c.status != ClaimStatus::Holds)
                .map(|c| format!("{} {}", c.name, c.status.as_str()))
                .collect();
            for (k, v) in expected {
                match rep.parameters.get(k) {
                    Some(got) if got == v => {}
                    got => problems.push(format!("{k} = {got:?}, expected {v}")),
                }
            }
            let ok = problems.is_empty();
            (ok, if ok { format!("{} claims hold", rep.claims.len()) } else { problems.join("; ") })
        }
    })
}

/// Runs every `*.json` fixture in `dir`, in file-name order.
pub fn run_suite(dir: &Path) -> Result<Vec<SuiteResult>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    Ok(paths
        .par_iter()
        .map(|path| {
            let file = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let fixture = read_json::<FixtureDocument>(path)
                .and_then(|f| check_version(f.format_version).map(|_| f));
            match fixture {
                Err(e) => SuiteResult { name: file, passed: false, detail: e.to_string() },
                Ok(f) => match run_check(&f.check) {
                    Ok((passed, detail)) => SuiteResult { name: f.name, passed, detail },
                    Err(e) => SuiteResult { name: f.name, passed: false, detail: e.to_string() },
                },
            }
        })
        .collect())
}

#[derive(Serialize)]
struct SuiteDocument<'a> {
    format_version: u32,
    results: &'a [SuiteResult],
    passed: usize,
    failed: usize,
}

fn cmd_suite(dir: &Path, json: bool) -> Result<Outcome> {
    let results = run_suite(dir)?;
    let passed = results.iter().filter(|r| r.passed).count();
    let failed = results.len() - passed;
    let out = if json {
        let doc = SuiteDocument { format_version: FORMAT_VERSION, results: &results, passed, failed };
        format!("{}\n", to_canonical_json(&doc))
    } else {
        let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for r in &results {
            let mark = if r.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{mark}  {:width$}  {}\n", r.name, r.detail));
        }
        out.push_str(&format!("{passed} passed, {failed} failed\n"));
        out
    };
    Ok(Outcome { code: if failed == 0 { 0 } else { 1 }, out })
}

fn dispatch(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Lse { p, s, e } => cmd_lse(p, &s, &e),
        Command::Density { input, mode, samples, seed, budget } => cmd_density(&input, mode, samples, seed, budget),
        Command::Bound { input, u, r, epsilon, output, budget, cap } => {
            cmd_bound(&input, u, r, epsilon, output.as_deref(), budget, cap)
        }
        Command::Verify { system, certificate, cap } => cmd_verify(&system, &certificate, cap),
        Command::Gen { name, params, output, report } => cmd_gen(&name, &params, &output, report.as_deref()),
        Command::Suite { dir, json } => cmd_suite(&dir, json),
    }
}

/// Parses `args`, runs the command, writes to the given streams and returns
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli) {
        Ok(outcome) => {
            let _ = stdout.write_all(outcome.out.as_bytes());
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
