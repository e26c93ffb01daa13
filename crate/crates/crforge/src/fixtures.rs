//! Bundled manifold and map files, and the golden reports they produce.

use serde_json::{json, Value};

use crate::commands::{run_command, Config, FixtureAction, Input, Outcome};
use crate::json::to_canonical;
use crate::{Failure, EXIT_NEGATIVE, EXIT_OK};

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../fixtures/", $name)))),*]
    };
}

/// Manifolds, one per file.
pub const MANIFOLDS: &[(&str, &str)] = bundled![
    "heisenberg.json",
    "flat_direction.json",
    "product_type.json",
    "split_quartic.json",
    "rational_hypersurface.json",
];

/// Maps between the manifolds above.
pub const MAPS: &[(&str, &str)] = bundled![
    "identity.json",
    "dilate2.json",
    "heisenberg_bad.json",
    "chern_moser_1.json",
    "chern_moser_minus_half.json",
    "flat_direction_map.json",
    "product_type_map.json",
    "split_quartic_map.json",
];

/// A command over bundled files with its expected exit code and golden report.
pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: u8,
    pub golden: &'static str,
}

macro_rules! case {
    ($name:literal, [$($arg:literal),*], $exit:expr) => {
        Case { name: $name, args: &[$($arg),*], exit: $exit, golden: include_str!(concat!("../fixtures/golden/", $name, ".json")) }
    };
}

pub const CASES: &[Case] = &[
    case!("analyze-heisenberg", ["analyze", "heisenberg.json"], 0),
    case!("analyze-flat-direction", ["analyze", "flat_direction.json"], 0),
    case!("analyze-product-type", ["analyze", "product_type.json"], 0),
    case!("analyze-split-quartic", ["analyze", "split_quartic.json"], 0),
    case!("analyze-rational-hypersurface", ["analyze", "rational_hypersurface.json"], 0),
    case!("curve-product-type", ["curve", "product_type.json"], 0),
    case!("segre-heisenberg", ["segre", "heisenberg.json", "--k", "2", "--verify"], 0),
    case!("check-map-flat-direction", ["check-map", "flat_direction.json", "flat_direction.json", "flat_direction_map.json"], 0),
    case!("check-map-product-type", ["check-map", "product_type.json", "product_type.json", "product_type_map.json"], 0),
    case!("check-map-split-quartic", ["check-map", "split_quartic.json", "split_quartic.json", "split_quartic_map.json"], 0),
    case!("check-map-heisenberg-bad", ["check-map", "heisenberg.json", "heisenberg.json", "heisenberg_bad.json"], 1),
    case!("reflect-heisenberg-identity", ["reflect", "heisenberg.json", "heisenberg.json", "identity.json"], 0),
    case!("reflect-heisenberg-dilate2", ["reflect", "heisenberg.json", "heisenberg.json", "dilate2.json"], 0),
    case!("determine-dilate2", ["determine", "heisenberg.json", "heisenberg.json", "identity.json", "dilate2.json", "--K", "0"], 1),
    case!(
        "determine-chern-moser",
        ["determine", "heisenberg.json", "heisenberg.json", "chern_moser_1.json", "chern_moser_minus_half.json", "--K", "1", "--k-max", "2", "--alpha-max", "1"],
        1
    ),
    case!(
        "determine-chern-moser-same",
        ["determine", "heisenberg.json", "heisenberg.json", "chern_moser_minus_half.json", "chern_moser_minus_half.json", "--K", "2", "--k-max", "2", "--alpha-max", "1"],
        0
    ),
    case!("ledger-flat-direction", ["ledger", "flat_direction.json", "flat_direction.json", "flat_direction_map.json", "--k-max", "3"], 0),
];

/// Looks up a bundled file by name.
pub fn bundled(name: &str) -> Result<Input, Failure> {
    MANIFOLDS
        .iter()
        .chain(MAPS.iter())
        .find(|(n, _)| *n == name)
        .map(|(n, t)| Input { name: n.to_string(), text: t.to_string() })
        .ok_or_else(|| Failure::input(format!("no bundled fixture named {name}")))
}

/// Runs one case with the given settings passed explicitly on its command line.
pub fn run_case(case: &Case, config: &Config) -> Result<Outcome, Failure> {
    let mut argv: Vec<String> = case.args.iter().map(|s| s.to_string()).collect();
    argv.push("--seed".into());
    argv.push(config.seed.to_string());
    if let Some(d) = config.degree {
        argv.push("--degree".into());
        argv.push(d.to_string());
    }
    run_command(&argv, &bundled).map(|(_, o)| o)
}

/// The first line where two texts differ, as `(line, expected, actual)`.
pub fn first_difference(expected: &str, actual: &str) -> Option<(usize, String, String)> {
    let mut a = expected.lines();
    let mut b = actual.lines();
    let mut line = 1;
    loop {
        match (a.next(), b.next()) {
            (None, None) => return None,
            (x, y) if x == y => line += 1,
            (x, y) => return Some((line, x.unwrap_or("<end>").to_string(), y.unwrap_or("<end>").to_string())),
        }
    }
}

pub fn command(action: FixtureAction, name: &str, config: &Config) -> Result<Outcome, Failure> {
    match action {
        FixtureAction::List => {
            let v = json!({
                "command": "fixtures list",
                "manifolds": MANIFOLDS.iter().map(|(n, _)| *n).collect::<Vec<_>>(),
                "maps": MAPS.iter().map(|(n, _)| *n).collect::<Vec<_>>(),
                "cases": CASES.iter().map(|c| json!({"name": c.name, "args": c.args, "exit_code": c.exit})).collect::<Vec<_>>(),
            });
            let summary = format!("{} manifolds, {} maps, {} cases", MANIFOLDS.len(), MAPS.len(), CASES.len());
            Ok(Outcome { report: to_canonical(&v), summary, code: EXIT_OK })
        }
        FixtureAction::Run => {
            let chosen: Vec<&Case> = CASES.iter().filter(|c| name == "all" || c.name == name).collect();
            if chosen.is_empty() {
                return Err(Failure::input(format!("no fixture case named {name}")));
            }
            let mut rows = Vec::new();
            let mut failed = Vec::new();
            for case in chosen {
                let row = match run_case(case, config) {
                    Ok(out) => {
                        let diff = first_difference(case.golden, &out.report);
                        let ok = diff.is_none() && out.code == case.exit;
                        if !ok {
                            failed.push(case.name);
                        }
                        json!({
                            "name": case.name,
                            "exit_code": out.code,
                            "expected_exit_code": case.exit,
                            "golden": if diff.is_none() { "match" } else { "mismatch" },
                            "diff": diff.map(|(l, e, a)| json!({"line": l, "expected": e, "actual": a})),
                        })
                    }
                    Err(e) => {
                        failed.push(case.name);
                        json!({"name": case.name, "error": e.message, "exit_code": e.code, "expected_exit_code": case.exit})
                    }
                };
                rows.push(row);
            }
            let v = json!({"command": "fixtures run", "seed": config.seed, "cases": rows, "failed": failed});
            let summary = if failed.is_empty() {
                format!("{} cases match their golden reports", rows_len(&v))
            } else {
                format!("golden mismatch: {}", failed.join(", "))
            };
            let code = if failed.is_empty() { EXIT_OK } else { EXIT_NEGATIVE };
            Ok(Outcome { report: to_canonical(&v), summary, code })
        }
    }
}

fn rows_len(v: &Value) -> usize {
    v["cases"].as_array().map_or(0, |a| a.len())
}
