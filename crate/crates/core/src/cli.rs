//! Command-line front end: `analyze`, `verify` and `module`, all reading a JSON
//! config and writing a deterministic JSON report.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails, 2 on invalid
//! input or configuration.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::cover::{
    cover_weight_space, identity_3_3_sweep, lemma_3_1_check, lemma_3_2_check, lemma_3_3_check, minimal_annihilating_l,
    LemmaReport,
};
use crate::degree::Degree;
use crate::derivation::generic_u;
use crate::error::{Error, Result};
use crate::lattice::{normalize_q, radical_basis};
use crate::quantum_torus::{QMatrix, Torus};
use crate::suites::{self, SuiteReport};
use crate::weight_modules::{probe_reducibility, verify_rep, DescriptorSpec, ModuleDescriptor};

pub const SCHEMA: u32 = 1;

pub const SUITES: [&str; 7] = ["cyclotomic", "cocycle", "radical", "loop-hom", "jacobi", "rep", "cover"];

const CYCLOTOMIC_ORDERS: [u64; 6] = [1, 2, 3, 4, 8, 12];

#[derive(Parser, Debug)]
#[command(name = "qtorus", version, about = "Exact verification of rational quantum tori and their weight modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Radical, Γ and normal form of a q-matrix
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run verification suites
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// comma-separated suite names; overrides the config
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        #[arg(long)]
        window: Option<i64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Weight table, probes, minimal l and cover dimensions of a module
    Module {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        window: Option<i64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Negative-control hooks for testing the suites themselves.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fault {
    /// multiply σ(n, ·) by ζ_L at this degree
    pub sigma_at: Option<Degree>,
    /// flip the sign of the gl_d part of the module action
    #[serde(default)]
    pub module_action: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema: Option<u32>,
    pub q: QMatrix,
    pub module: Option<DescriptorSpec>,
    pub window: Option<i64>,
    pub suites: Option<Vec<String>>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub fault: Option<Fault>,
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {path:?}: {e}")))?;
        Config::from_json(&text)
    }

    /// Accepts a full config object or a bare q-matrix.
    pub fn from_json(text: &str) -> Result<Config> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed JSON: {e}")))?;
        let config = if value.is_array() {
            let q = serde_json::from_value(value).map_err(|e| Error::InvalidQ(e.to_string()))?;
            Config { schema: None, q, module: None, window: None, suites: None, seed: None, output: None, fault: None }
        } else {
            serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?
        };
        if let Some(s) = config.schema {
            if s != SCHEMA {
                return Err(Error::Config(format!("unsupported schema {s}")));
            }
        }
        if config.window.is_some_and(|w| w < 1) {
            return Err(Error::Config("window must be at least 1".into()));
        }
        Ok(config)
    }

    /// The torus on the normal form q_std of q, with P.
    fn torus(&self) -> Result<(Torus, crate::lattice::IntMatrix)> {
        let (q_std, p) = normalize_q(&self.q)?;
        let mut torus = Torus::new(q_std)?;
        if let Some(at) = self.fault.as_ref().and_then(|f| f.sigma_at) {
            torus.check_degree(&at)?;
            torus = torus.with_sigma_fault(at);
        }
        Ok((torus, p))
    }

    fn descriptor(&self, torus: &Torus) -> Result<ModuleDescriptor> {
        let spec = self.module.as_ref().ok_or_else(|| Error::Config("this command needs a module".into()))?;
        let desc = spec.build(torus)?;
        Ok(if self.fault.as_ref().is_some_and(|f| f.module_action) { desc.with_corrupted_action() } else { desc })
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (result, output) = match cli.command {
        Command::Analyze { input, output } => (cmd_analyze(&input), output),
        Command::Verify { input, suite, window, seed, output } => (cmd_verify(&input, &suite, window, seed), output),
        Command::Module { input, window, seed, output } => (cmd_module(&input, window, seed), output),
    };
    match result {
        Ok((report, config_output, code)) => {
            let text = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
            print!("{text}");
            if let Some(path) = output.or(config_output) {
                if let Err(e) = std::fs::write(&path, &text) {
                    eprintln!("error: cannot write {path:?}: {e}");
                    return 2;
                }
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

type Outcome = Result<(Value, Option<PathBuf>, i32)>;

fn cmd_analyze(input: &Path) -> Outcome {
    let config = Config::from_file(input)?;
    let report = analyze(&config.q)?;
    Ok((report, config.output, 0))
}

/// Radical data of q together with its normal form q_std and the change of basis P.
pub fn analyze(q: &QMatrix) -> Result<Value> {
    let rad = radical_basis(q)?;
    let (q_std, p) = normalize_q(q)?;
    Ok(json!({
        "schema": SCHEMA,
        "command": "analyze",
        "d": q.dim(),
        "L": q.order(),
        "normal_form": q.is_normal_form(),
        "xi_basis": rad.xi_basis(),
        "invariants_k": rad.invariants_k(),
        "z": rad.z(),
        "N": rad.n(),
        "gamma_order": rad.gamma_order(),
        "delta": rad.delta(),
        "q_std": q_std,
        "P": p,
    }))
}

fn cmd_verify(input: &Path, suite_arg: &[String], window: Option<i64>, seed: Option<u64>) -> Outcome {
    let config = Config::from_file(input)?;
    let names: Vec<String> = if suite_arg.is_empty() { config.suites.clone().unwrap_or_default() } else { suite_arg.to_vec() };
    if names.is_empty() {
        return Err(Error::Config("no suites requested".into()));
    }
    if let Some(bad) = names.iter().find(|s| !SUITES.contains(&s.as_str())) {
        return Err(Error::Config(format!("unknown suite {bad:?}; expected one of {SUITES:?}")));
    }
    let window = window.or(config.window).unwrap_or(2);
    if window < 1 {
        return Err(Error::Config("window must be at least 1".into()));
    }
    let seed = seed.or(config.seed).unwrap_or(0);
    let (torus, p) = config.torus()?;
    let desc = if names.iter().any(|s| s == "rep" || s == "cover") { Some(config.descriptor(&torus)?) } else { None };
    let mut reports = vec![];
    for name in &names {
        let report = match name.as_str() {
            "cyclotomic" => suites::cyclotomic_suite(&CYCLOTOMIC_ORDERS, 1000, seed),
            "cocycle" => suites::cocycle_suite(&torus, window, 200, seed),
            "radical" => suites::radical_suite(&torus, window),
            "loop-hom" => suites::loop_hom_suite(&torus, window),
            "jacobi" => suites::jacobi_suite(&torus, window),
            "rep" => rep_suite(desc.as_ref().expect("built above"), window),
            "cover" => cover_suite(desc.as_ref().expect("built above"), window, seed)?,
            _ => unreachable!("suite names are validated"),
        };
        reports.push(report);
    }
    let passed = reports.iter().all(|r| r.passed);
    let report = json!({
        "schema": SCHEMA,
        "command": "verify",
        "q_std": torus.q(),
        "P": p,
        "window": window,
        "seed": seed,
        "rng": "ChaCha8",
        "passed": passed,
        "suites": reports,
    });
    Ok((report, config.output, if passed { 0 } else { 1 }))
}

fn rep_suite(desc: &ModuleDescriptor, window: i64) -> SuiteReport {
    let r = verify_rep(desc, window);
    SuiteReport {
        suite: "rep".into(),
        passed: r.passed,
        checks: r.checks,
        details: json!({ "window": window, "generators": r.generators, "module": desc.summary() }),
        counterexample: r.counterexample.map(|c| serde_json::to_value(c).expect("counterexamples serialize")),
    }
}

/// A window-generic u for the differentiator checks.
fn differentiator_u(desc: &ModuleDescriptor, window: i64) -> Vec<crate::cyclotomic::CycScalar> {
    generic_u(desc.dim(), 4 * window.max(1))
}

/// The admissible l: from the measured minimal l up to 3.
fn admissible_ls(min_l: Option<usize>) -> Vec<usize> {
    min_l.map_or(vec![], |l| (l..=3.max(l)).collect())
}

/// Lemma checks (50 random inputs each), the rewriting identity over the
/// window and the cover weight space at one degree.
pub fn cover_suite(desc: &ModuleDescriptor, window: i64, seed: u64) -> Result<SuiteReport> {
    let d = desc.dim();
    let lemmas: Vec<LemmaReport> = vec![
        lemma_3_1_check(desc, window, seed, 50),
        lemma_3_2_check(desc, window, seed, 50),
        lemma_3_3_check(desc, window, 2, seed, 50),
    ];
    let u = differentiator_u(desc, window);
    let minimal = minimal_annihilating_l(desc, &u, window, 4);
    let ls = admissible_ls(minimal.l);
    let w_degrees = Degree::window(d, 1);
    let identity = identity_3_3_sweep(desc, &u, window, &ls, &w_degrees, 1);
    let cover = cover_dimensions(desc, minimal.l.unwrap_or(3))?;
    let passed = lemmas.iter().all(|l| l.passed)
        && minimal.l.is_some()
        && identity.passed
        && cover.iter().all(|c| c.vacuous || (c.stable && c.within_bound && c.spans));
    let checks = lemmas.iter().map(|l| l.inputs as u64).sum::<u64>() + identity.checked as u64 + cover.len() as u64;
    let counterexample = lemmas
        .iter()
        .find_map(|l| l.counterexample.clone().map(|c| json!({ "lemma": l.lemma, "counterexample": c })))
        .or_else(|| identity.failure.clone().map(|f| json!({ "identity": f })))
        .or_else(|| minimal.l.is_none().then(|| json!({ "minimal_l": minimal.counterexamples })))
        .or_else(|| {
            cover
                .iter()
                .find(|c| !(c.vacuous || (c.stable && c.within_bound && c.spans)))
                .map(|c| json!({ "cover": c }))
        });
    Ok(SuiteReport {
        suite: "cover".into(),
        passed,
        checks,
        details: json!({
            "window": window,
            "lemmas": lemmas,
            "minimal_l": minimal,
            "identity": identity,
            "cover": cover,
        }),
        counterexample,
    })
}

/// Cover weight spaces at a few degrees at the smallest admissible window.
fn cover_dimensions(desc: &ModuleDescriptor, l: usize) -> Result<Vec<crate::cover::CoverWeightReport>> {
    let d = desc.dim();
    let window = 2 * desc.torus().order() as i64 * d as i64;
    let degrees = [Degree::zero(d), Degree::unit(d, 0), Degree::new(&(1..=d as i64).collect::<Vec<_>>())];
    degrees.iter().map(|mu| cover_weight_space(mu, desc, window, 1, l)).collect()
}

fn cmd_module(input: &Path, window: Option<i64>, seed: Option<u64>) -> Outcome {
    let config = Config::from_file(input)?;
    let window = window.or(config.window).unwrap_or(4);
    if window < 1 {
        return Err(Error::Config("window must be at least 1".into()));
    }
    let seed = seed.or(config.seed).unwrap_or(0);
    let (torus, p) = config.torus()?;
    let desc = config.descriptor(&torus)?;
    let report = module_report(&desc, window, seed)?;
    let mut report = report;
    report["q_std"] = serde_json::to_value(torus.q()).expect("q serializes");
    report["P"] = serde_json::to_value(&p).expect("P serializes");
    Ok((report, config.output, 0))
}

/// Weight-space dimensions over the window, probe profiles, the minimal
/// annihilating l and cover weight-space dimensions.
pub fn module_report(desc: &ModuleDescriptor, window: i64, seed: u64) -> Result<Value> {
    let table: Vec<Value> =
        desc.weight_table(window).into_iter().map(|(n, dim)| json!({ "degree": n, "dim": dim })).collect();
    let dims: Vec<usize> = desc.weight_table(window).iter().map(|(_, k)| *k).collect();
    let probe = probe_reducibility(desc, window, seed, 3);
    let lw = window.min(2);
    let minimal = minimal_annihilating_l(desc, &differentiator_u(desc, lw), lw, 4);
    let cover = cover_dimensions(desc, minimal.l.unwrap_or(3))?;
    Ok(json!({
        "schema": SCHEMA,
        "command": "module",
        "window": window,
        "seed": seed,
        "rng": "ChaCha8",
        "module": desc.summary(),
        "weight_table": table,
        "uniform_dim": dims.iter().all(|&k| Some(&k) == dims.first()),
        "max_weight_dim": dims.iter().max(),
        "probe": probe,
        "minimal_l": minimal,
        "cover": cover,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_q_and_full_config_parse() {
        let c = Config::from_json("[[[0,1],[1,2]],[[1,2],[0,1]]]").unwrap();
        assert_eq!(c.q.order(), 2);
        let c = Config::from_json(r#"{"schema": 1, "q": [[1, [1,2]], [[1,2], 1]], "suites": ["jacobi"], "window": 2}"#)
            .unwrap();
        assert_eq!(c.suites.unwrap(), vec!["jacobi"]);
        assert!(Config::from_json(r#"{"schema": 2, "q": [[1]]}"#).is_err());
        assert!(Config::from_json(r#"{"q": [[1]], "window": 0}"#).is_err());
        assert!(Config::from_json(r#"{"q": [[1]], "colour": 0}"#).is_err());
    }

    #[test]
    fn analyze_examples() {
        let c = Config::from_json("[[1, [1,2]], [[1,2], 1]]").unwrap();
        let r = analyze(&c.q).unwrap();
        assert_eq!(r["invariants_k"], json!([2]));
        assert_eq!(r["z"], json!(1));
        assert_eq!(r["N"], json!(2));
        assert_eq!(r["gamma_order"], json!(4));
        let c = Config::from_json("[[1, 1, 1], [1, 1, 1], [1, 1, 1]]").unwrap();
        let r = analyze(&c.q).unwrap();
        assert_eq!((r["z"].clone(), r["N"].clone(), r["gamma_order"].clone()), (json!(0), json!(1), json!(1)));
        assert!(Config::from_json("[[1, [1,4]], [[1,4], 1]]").is_err());
    }

    #[test]
    fn admissible_l_range() {
        assert_eq!(admissible_ls(Some(2)), vec![2, 3]);
        assert_eq!(admissible_ls(Some(3)), vec![3]);
        assert_eq!(admissible_ls(Some(4)), vec![4]);
        assert!(admissible_ls(None).is_empty());
    }
}
