//! The subcommands, independent of the process they run in.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use crforge_core::geometry::{
    essential_finiteness_nf, finite_type_test, segre_map, verify_segre_identity, FiniteType, GenericSubmanifoldNF,
};
use crforge_core::mapping::{
    check_sends, hypersurface_dichotomy, kernel_vector_field, segre_injectivity_test, total_degeneracy_test,
    FormalMapNF, SegreHomReport,
};
use crforge_core::reflection::{
    chain_agreement, convergence_ledger, reflection_identities, verify_reflection, Conclusion, ReflectionOptions,
};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::format::{parse_manifold, parse_map};
use crate::json::to_canonical;
use crate::{report, Failure, EXIT_INCONCLUSIVE, EXIT_NEGATIVE, EXIT_OK};

#[derive(Parser, Debug)]
#[command(name = "crforge", version, about = "Exact formal computations on generic submanifolds and their maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for sampled rank tests.
    #[arg(long, global = true, env = "CRFORGE_SEED", default_value_t = 17)]
    pub seed: u64,
    /// Working truncation order; defaults to the truncation stored in the inputs.
    #[arg(long, global = true, env = "CRFORGE_DEGREE")]
    pub degree: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Finite type, essential finiteness and Segre identity checks.
    Analyze {
        manifold: String,
        /// Largest Segre level examined; default d + 1.
        #[arg(long)]
        max_k: Option<usize>,
        #[arg(long, default_value_t = 5)]
        alpha_bound: u32,
    },
    /// Whether a map sends one manifold into another, with its Segre homomorphism.
    CheckMap {
        source: String,
        target: String,
        map: String,
        #[arg(long, default_value_t = 4)]
        relation_degree: u32,
    },
    /// The Segre mapping v^k.
    Segre {
        manifold: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        verify: bool,
    },
    /// Monic reflection identities for a map.
    Reflect {
        source: String,
        target: String,
        map: String,
        #[arg(long, default_value_t = 3)]
        r_bound: u32,
    },
    /// Compares two maps rung by rung along the Segre chains.
    Determine {
        source: String,
        target: String,
        h1: String,
        h2: String,
        /// Jet order through which the maps are assumed to agree.
        #[arg(long = "K")]
        k_jets: u32,
        /// Default 2(d + 1).
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, default_value_t = 2)]
        alpha_max: u32,
    },
    /// The polynomial identities satisfied by a map along the Segre chains.
    Ledger {
        source: String,
        target: String,
        map: String,
        /// Default 2(d + 1).
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, default_value_t = 2)]
        alpha_max: u32,
    },
    /// A formal curve on which the essential ideal vanishes.
    Curve {
        manifold: String,
        #[arg(long, default_value_t = 5)]
        alpha_bound: u32,
    },
    /// Bundled fixtures and their golden reports.
    Fixtures {
        action: FixtureAction,
        #[arg(default_value = "all")]
        name: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureAction {
    List,
    Run,
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub seed: u64,
    pub degree: Option<u32>,
}

impl Default for Config {
    fn default() -> Self {
        Config { seed: 17, degree: None }
    }
}

/// Named file contents.
#[derive(Clone, Debug)]
pub struct Input {
    pub name: String,
    pub text: String,
}

impl Input {
    fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.text.as_bytes()))
    }
}

/// A finished command: the canonical report text, a human summary and the exit code.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: String,
    pub summary: String,
    pub code: u8,
}

/// Parses `argv` (without the program name) and runs it.
///
/// `load` resolves input names to contents.
pub fn run_command(argv: &[String], load: &dyn Fn(&str) -> Result<Input, Failure>) -> Result<(Cli, Outcome), Failure> {
    let cli = Cli::try_parse_from(std::iter::once("crforge".to_string()).chain(argv.iter().cloned()))
        .map_err(|e| Failure::input(e.to_string()))?;
    let config = Config { seed: cli.seed, degree: cli.degree };
    let outcome = run(&cli.command, &config, load)?;
    Ok((cli, outcome))
}

struct Builder {
    command: &'static str,
    inputs: Vec<Value>,
    seed: u64,
    bounds: Map<String, Value>,
}

impl Builder {
    fn new(command: &'static str, config: &Config) -> Self {
        Builder { command, inputs: Vec::new(), seed: config.seed, bounds: Map::new() }
    }

    fn input(&mut self, role: &str, inp: &Input) {
        let name = std::path::Path::new(&inp.name).file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        self.inputs.push(json!({"role": role, "name": name, "sha256": inp.digest()}));
    }

    fn bound(&mut self, key: &str, v: impl Into<Value>) {
        self.bounds.insert(key.into(), v.into());
    }

    fn finish(self, result: Value, code: u8, summary: String) -> Outcome {
        let v = json!({
            "command": self.command,
            "inputs": self.inputs,
            "seed": self.seed,
            "bounds": Value::Object(self.bounds),
            "result": result,
            "exit_code": code,
        });
        Outcome { report: to_canonical(&v), summary, code }
    }
}

fn working_degree(config: &Config, stored: u32) -> u32 {
    config.degree.map_or(stored, |d| d.min(stored))
}

fn load_manifold(
    b: &mut Builder,
    role: &str,
    name: &str,
    config: &Config,
    load: &dyn Fn(&str) -> Result<Input, Failure>,
) -> Result<(GenericSubmanifoldNF, u32), Failure> {
    let inp = load(name)?;
    b.input(role, &inp);
    let file = parse_manifold(&inp.text).map_err(|e| Failure::input(format!("{name}: {e}")))?;
    let m = file.normal_form().map_err(|e| Failure { code: e.code, message: format!("{name}: {e}") })?;
    let d = working_degree(config, m.prec());
    let m = if d < m.prec() { GenericSubmanifoldNF::new(m.n(), m.d(), m.q().truncate(d))? } else { m };
    Ok((m, d))
}

fn load_map(
    b: &mut Builder,
    role: &str,
    name: &str,
    config: &Config,
    load: &dyn Fn(&str) -> Result<Input, Failure>,
) -> Result<FormalMapNF, Failure> {
    let inp = load(name)?;
    b.input(role, &inp);
    let file = parse_map(&inp.text).map_err(|e| Failure::input(format!("{name}: {e}")))?;
    Ok(file.map.truncate(working_degree(config, file.truncation)))
}

fn options(r_bound: u32, degree: u32, seed: u64) -> ReflectionOptions {
    ReflectionOptions { r_bound, degree_bound: degree, cofactor_degree: degree, seed }
}

pub fn run(cmd: &Command, config: &Config, load: &dyn Fn(&str) -> Result<Input, Failure>) -> Result<Outcome, Failure> {
    match cmd {
        Command::Analyze { manifold, max_k, alpha_bound } => {
            let mut b = Builder::new("analyze", config);
            let (m, d) = load_manifold(&mut b, "manifold", manifold, config, load)?;
            let k_max = max_k.unwrap_or(m.d() + 1);
            b.bound("degree", d);
            b.bound("max_k", k_max);
            b.bound("alpha_bound", *alpha_bound);
            let ft = finite_type_test(&m, k_max, config.seed)?;
            let ess = essential_finiteness_nf(&m, *alpha_bound, d);
            let mut segre = Vec::new();
            let mut all = true;
            for k in 0..=k_max {
                let ok = verify_segre_identity(&m, k)?;
                all &= ok;
                segre.push(json!({"k": k, "holds": ok}));
            }
            let code = if !all {
                EXIT_NEGATIVE
            } else if ft.verdict == FiniteType::Inconclusive {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            };
            let summary = format!(
                "n={} d={} through order {}: finite type {}, essentially finite {}, Segre identity {}",
                m.n(),
                m.d(),
                d,
                match ft.verdict {
                    FiniteType::Yes { k1 } => format!("yes (k1={k1})"),
                    FiniteType::NoUpTo { k } => format!("no (certified up to k={k})"),
                    FiniteType::Inconclusive => "inconclusive".into(),
                },
                match ess.staircase.codim() {
                    Some(c) => format!("yes (codim {c})"),
                    None if ess.curve.is_some() => "undetermined (curve witness found)".into(),
                    None => "undetermined".into(),
                },
                if all { "holds" } else { "FAILS" }
            );
            let result = json!({
                "n": m.n(),
                "d": m.d(),
                "through_order": d,
                "finite_type": report::finite_type(&ft),
                "essential_finiteness": report::essential(&ess),
                "segre_identity": segre,
            });
            Ok(b.finish(result, code, summary))
        }
        Command::CheckMap { source, target, map, relation_degree } => {
            let mut b = Builder::new("check-map", config);
            let (m, d) = load_manifold(&mut b, "source", source, config, load)?;
            let (t, _) = load_manifold(&mut b, "target", target, config, load)?;
            let h = load_map(&mut b, "map", map, config, load)?;
            b.bound("degree", d);
            b.bound("relation_degree", *relation_degree);
            b.bound("kernel_degree", d / 2);
            let sends = check_sends(&m, &t, &h)?;
            let mut result = Map::new();
            result.insert("check".into(), report::map_check(&sends));
            if !sends.sends {
                let summary = format!("map does not send M into M′ (residual nonzero through order {})", sends.order);
                return Ok(b.finish(Value::Object(result), EXIT_NEGATIVE, summary));
            }
            let hom = segre_injectivity_test(&m, &t, &h, *relation_degree, config.seed)?;
            result.insert("segre_homomorphism".into(), report::segre_hom(&hom));
            if m.n() == t.n() && h.source_dims().0 == m.n() {
                let deg = total_degeneracy_test(&m, &t, &h)?;
                let kernel = if deg.degenerate {
                    kernel_vector_field(&h.f_on_segre(), d / 2)
                        .map(|f| Value::Array(f.coeffs.iter().map(report::series).collect()))
                        .unwrap_or(Value::Null)
                } else {
                    Value::Null
                };
                result.insert(
                    "total_degeneracy".into(),
                    json!({"degenerate": deg.degenerate, "determinant": report::series(&deg.determinant), "kernel_field": kernel}),
                );
            }
            if m.d() == 1 && t.d() == 1 {
                let v = match hypersurface_dichotomy(&m, &t, &h) {
                    Ok(dch) => report::dichotomy(&dch),
                    Err(e) => json!({"verdict": "not_applicable", "reason": e.to_string()}),
                };
                result.insert("hypersurface_dichotomy".into(), v);
            }
            let summary = format!(
                "map sends M into M′ through order {}; Segre homomorphism {}",
                sends.order,
                match hom {
                    SegreHomReport::Injective(_) => "injective".to_string(),
                    SegreHomReport::NotInjective { .. } => "not injective".to_string(),
                    SegreHomReport::Inconclusive { .. } => "inconclusive".to_string(),
                }
            );
            Ok(b.finish(Value::Object(result), EXIT_OK, summary))
        }
        Command::Segre { manifold, k, verify } => {
            let mut b = Builder::new("segre", config);
            let (m, d) = load_manifold(&mut b, "manifold", manifold, config, load)?;
            b.bound("degree", d);
            b.bound("k", *k);
            let v = segre_map(&m, *k)?;
            let mut result = json!({"k": k, "through_order": d, "components": report::tuple(&v)});
            let mut code = EXIT_OK;
            let mut summary = format!("v^{} computed: {} components in {} variables", k, v.len(), v.nvars());
            if *verify {
                let ok = verify_segre_identity(&m, *k)?;
                result.as_object_mut().unwrap().insert("identity_holds".into(), json!(ok));
                if !ok {
                    code = EXIT_NEGATIVE;
                }
                summary.push_str(if ok { "; identity holds" } else { "; identity FAILS" });
            }
            Ok(b.finish(result, code, summary))
        }
        Command::Reflect { source, target, map, r_bound } => {
            let mut b = Builder::new("reflect", config);
            let (m, d) = load_manifold(&mut b, "source", source, config, load)?;
            let (t, _) = load_manifold(&mut b, "target", target, config, load)?;
            let h = load_map(&mut b, "map", map, config, load)?;
            let opts = options(*r_bound, d, config.seed);
            b.bound("degree", d);
            b.bound("r_bound", *r_bound);
            b.bound("cofactor_degree", opts.cofactor_degree);
            let id = reflection_identities(&m, &t, &h, &opts)?;
            let ok = verify_reflection(&m, &id, &h)?;
            let summary = format!(
                "{} monic identities with r={} (degrees {:?}); verification {}",
                id.polys.len(),
                id.r,
                id.polys.iter().map(|p| p.deg()).collect::<Vec<_>>(),
                if ok { "passes" } else { "FAILS" }
            );
            let mut result = report::identity(&id, ok);
            result.as_object_mut().unwrap().insert("through_order".into(), json!(d.saturating_sub(id.r)));
            Ok(b.finish(result, if ok { EXIT_OK } else { EXIT_NEGATIVE }, summary))
        }
        Command::Determine { source, target, h1, h2, k_jets, k_max, alpha_max } => {
            let mut b = Builder::new("determine", config);
            let (m, d) = load_manifold(&mut b, "source", source, config, load)?;
            let (t, _) = load_manifold(&mut b, "target", target, config, load)?;
            let a = load_map(&mut b, "h1", h1, config, load)?;
            let c = load_map(&mut b, "h2", h2, config, load)?;
            let k_max = k_max.unwrap_or(2 * (m.d() + 1));
            let opts = options(3, d, config.seed);
            b.bound("degree", d);
            b.bound("K", *k_jets);
            b.bound("k_max", k_max);
            b.bound("alpha_max", *alpha_max);
            let rep = chain_agreement(&m, &t, &a, &c, *k_jets, k_max, *alpha_max, &opts)?;
            let (code, summary) = match &rep.conclusion {
                Conclusion::Identical { order } => (EXIT_OK, format!("maps coincide through order {order}")),
                Conclusion::Differ { k, alpha, component } => (
                    EXIT_NEGATIVE,
                    format!("maps differ: first disagreement at k={k}, alpha={:?}, component {component}", alpha.0),
                ),
                Conclusion::Open => (EXIT_INCONCLUSIVE, "all rungs agree; identity not established at these bounds".into()),
            };
            Ok(b.finish(report::determination(&rep), code, summary))
        }
        Command::Ledger { source, target, map, k_max, alpha_max } => {
            let mut b = Builder::new("ledger", config);
            let (m, d) = load_manifold(&mut b, "source", source, config, load)?;
            let (t, _) = load_manifold(&mut b, "target", target, config, load)?;
            let h = load_map(&mut b, "map", map, config, load)?;
            let k_max = k_max.unwrap_or(2 * (m.d() + 1));
            let opts = options(3, d, config.seed);
            b.bound("degree", d);
            b.bound("k_max", k_max);
            b.bound("alpha_max", *alpha_max);
            let l = convergence_ledger(&m, &t, &h, k_max, *alpha_max, &opts)?;
            let ok = l.recheck(&m, &h)?;
            let nontrivial = l.entries.iter().all(|e| e.nontrivial);
            let summary = format!(
                "{} rungs, r={}, recheck {}, {}",
                l.entries.len(),
                l.r,
                if ok { "passes" } else { "FAILS" },
                if nontrivial { "all nontrivial" } else { "some trivial" }
            );
            let code = if ok && nontrivial { EXIT_OK } else { EXIT_NEGATIVE };
            Ok(b.finish(report::ledger(&l, ok), code, summary))
        }
        Command::Curve { manifold, alpha_bound } => {
            let mut b = Builder::new("curve", config);
            let (m, d) = load_manifold(&mut b, "manifold", manifold, config, load)?;
            b.bound("degree", d);
            b.bound("alpha_bound", *alpha_bound);
            let ess = essential_finiteness_nf(&m, *alpha_bound, d);
            let (code, summary) = if ess.is_finite() {
                (EXIT_OK, "essentially finite: no curve exists".to_string())
            } else if let Some(c) = &ess.curve {
                (EXIT_OK, format!("curve witness verified through order {}", c.order))
            } else {
                (EXIT_INCONCLUSIVE, "no finite staircase and no curve found at these bounds".to_string())
            };
            Ok(b.finish(report::essential(&ess), code, summary))
        }
        Command::Fixtures { action, name } => crate::fixtures::command(*action, name, config),
    }
}
