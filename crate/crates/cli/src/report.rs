//! Serializable report shapes and renderers. Every JSON document carries
//! the same top-level keys {meta, params, results}; floats render
//! shortest-roundtrip so fixed inputs give byte-identical output.

use serde::Serialize;

use ricsim_core::analysis::{LeakageReport, VerificationReport};
use ricsim_core::protocol::BranchRecord;
use ricsim_core::states::TelecloningParams;

#[derive(Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub resource: Option<String>,
    pub seed: Option<u64>,
}

impl Meta {
    pub fn new(command: &'static str, resource: Option<String>, seed: Option<u64>) -> Self {
        Meta {
            tool: "ricsim",
            version: env!("CARGO_PKG_VERSION"),
            command,
            resource,
            seed,
        }
    }
}

#[derive(Serialize)]
pub struct Report<P: Serialize, R: Serialize> {
    pub meta: Meta,
    pub params: P,
    pub results: R,
}

impl<P: Serialize, R: Serialize> Report<P, R> {
    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("report structs serialize infallibly");
        text.push('\n');
        text
    }
}

#[derive(Serialize)]
pub struct InputParams {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub q: f64,
    pub normalizer: f64,
}

impl From<&TelecloningParams> for InputParams {
    fn from(params: &TelecloningParams) -> Self {
        InputParams {
            alpha: params.alpha(),
            beta: params.beta(),
            p: params.p(),
            q: params.q(),
            normalizer: params.normalizer(),
        }
    }
}

#[derive(Serialize)]
pub struct CountRow {
    pub l: u8,
    pub j: u8,
    pub k: u8,
    pub count: u64,
}

#[derive(Serialize)]
pub struct RunResults {
    pub shots: u64,
    pub mean_fidelity: f64,
    pub min_fidelity: f64,
    pub counts: Vec<CountRow>,
}

pub fn counts_to_csv(counts: &[CountRow]) -> String {
    let mut out = String::from("l,j,k,count\n");
    for row in counts {
        out.push_str(&format!("{},{},{},{}\n", row.l, row.j, row.k, row.count));
    }
    out
}

#[derive(Serialize)]
pub struct BranchRow {
    pub l: u8,
    pub j: u8,
    pub k: u8,
    pub probability: f64,
    /// Pauli label index of the correction: 0 = I, 1 = Z, 2 = X, 3 = Y.
    pub correction: u8,
    pub fidelity: f64,
    pub reachable: bool,
}

impl From<&BranchRecord> for BranchRow {
    fn from(b: &BranchRecord) -> Self {
        BranchRow {
            l: b.outcome.l.value(),
            j: b.outcome.j.value(),
            k: b.outcome.k.value(),
            probability: b.probability,
            correction: b.correction.index() as u8,
            fidelity: b.fidelity,
            reachable: b.reachable,
        }
    }
}

#[derive(Serialize)]
pub struct BranchResults {
    pub branches: Vec<BranchRow>,
}

pub fn branches_to_csv(rows: &[BranchRow]) -> String {
    let mut out = String::from("l,j,k,probability,correction,fidelity,reachable\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.l, row.j, row.k, row.probability, row.correction, row.fidelity, row.reachable
        ));
    }
    out
}

#[derive(Serialize)]
pub struct PriorRow {
    pub weight: f64,
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
}

#[derive(Serialize)]
pub struct LeakParams {
    pub prior: Vec<PriorRow>,
}

#[derive(Serialize)]
pub struct ConditionalTable {
    pub weight: f64,
    pub alpha: f64,
    pub p: f64,
    pub probabilities: Vec<f64>,
}

#[derive(Serialize)]
pub struct LeakResults {
    pub mutual_information_bits: f64,
    pub hypothesis_count: usize,
    pub upper_bound_bits: f64,
    pub conditionals: Vec<ConditionalTable>,
}

pub fn leak_report(leak: &LeakageReport) -> (LeakParams, LeakResults) {
    let prior: Vec<PriorRow> = leak
        .prior
        .iter()
        .map(|(weight, params)| PriorRow {
            weight: *weight,
            alpha: params.alpha(),
            beta: params.beta(),
            p: params.p(),
        })
        .collect();
    let conditionals = leak
        .prior
        .iter()
        .zip(&leak.conditionals)
        .map(|((weight, params), table)| ConditionalTable {
            weight: *weight,
            alpha: params.alpha(),
            p: params.p(),
            probabilities: table.probabilities(),
        })
        .collect();
    (
        LeakParams { prior },
        LeakResults {
            mutual_information_bits: leak.mutual_information_bits,
            hypothesis_count: leak.prior.len(),
            upper_bound_bits: (leak.prior.len() as f64).log2(),
            conditionals,
        },
    )
}

#[derive(Serialize)]
pub struct GridParams {
    pub grid: String,
    pub points: Vec<InputParams>,
}

#[derive(Serialize)]
pub struct CheckRow {
    pub name: String,
    pub tolerance: f64,
    pub worst_deviation: f64,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct VerifyResults {
    pub passed: bool,
    pub checks: Vec<CheckRow>,
}

pub fn verify_results(report: &VerificationReport) -> VerifyResults {
    VerifyResults {
        passed: report.passed(),
        checks: report
            .checks
            .iter()
            .map(|c| CheckRow {
                name: c.name.clone(),
                tolerance: c.tolerance,
                worst_deviation: c.worst_deviation,
                passed: c.passed,
            })
            .collect(),
    }
}

pub fn verify_to_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "[{status}] {:<34} worst {:>12.3e}  (tolerance {:.1e})\n",
            c.name, c.worst_deviation, c.tolerance
        ));
    }
    let overall = if report.passed() { "PASS" } else { "FAIL" };
    out.push_str(&format!(
        "verification: {overall} ({} checks)\n",
        report.checks.len()
    ));
    out
}
