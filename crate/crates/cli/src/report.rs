use std::fs::File;
use std::io::Write;
use std::path::Path;

use qbounds::covering::MassPartition;
use qbounds::{EnergyBoundReport, InequalityReport};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub seed: u64,
    pub version: String,
}

/// Condensed view of a covering partition.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionSummary {
    pub d: usize,
    pub side: f64,
    pub lambda: f64,
    pub leaves: usize,
    pub max_depth: usize,
    pub max_leaf_mass: f64,
    pub total_mass: f64,
    pub total_volume: f64,
}

impl PartitionSummary {
    pub fn of(p: &MassPartition) -> Self {
        PartitionSummary {
            d: p.d,
            side: p.root.side,
            lambda: p.lambda,
            leaves: p.leaves.len(),
            max_depth: p.max_depth(),
            max_leaf_mass: p.max_leaf_mass(),
            total_mass: p.total_mass(),
            total_volume: p.total_volume(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Entry {
    Inequality(InequalityReport),
    Energy(EnergyBoundReport),
    Partition(PartitionSummary),
}

impl Entry {
    /// Only inequality entries can fail; computed values always count as passed.
    pub fn passed(&self) -> bool {
        match self {
            Entry::Inequality(r) => r.passed,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub manifest: RunManifest,
    pub reports: Vec<Entry>,
    pub summary: Summary,
}

impl Report {
    pub fn new(manifest: RunManifest, reports: Vec<Entry>) -> Self {
        let passed = reports.iter().filter(|e| e.passed()).count();
        let summary = Summary {
            total: reports.len(),
            passed,
            failed: reports.len() - passed,
        };
        Report { manifest, reports, summary }
    }

    pub fn write_json(&self, out: Option<&Path>) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self)?;
        match out {
            Some(path) => std::fs::write(path, text + "\n")?,
            None => writeln!(std::io::stdout().lock(), "{text}")?,
        }
        Ok(())
    }

    /// One row per entry; columns that do not apply to an entry stay empty.
    pub fn write_csv(&self, path: &Path) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(File::create(path)?);
        w.write_record([
            "type", "name", "relation", "lhs", "rhs", "constant", "ratio", "tolerance", "passed", "rigorous", "value",
            "per_particle",
        ])?;
        let num = |x: f64| x.to_string();
        for e in &self.reports {
            let row: [String; 12] = match e {
                Entry::Inequality(r) => [
                    "inequality".into(),
                    r.name.clone(),
                    format!("{:?}", r.relation).to_lowercase(),
                    num(r.lhs),
                    num(r.rhs),
                    num(r.constant_used),
                    r.ratio.map(num).unwrap_or_default(),
                    num(r.tolerance),
                    r.passed.to_string(),
                    r.rigorous.to_string(),
                    String::new(),
                    String::new(),
                ],
                Entry::Energy(r) => [
                    "energy".into(),
                    r.label.clone(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    "true".into(),
                    String::new(),
                    num(r.value),
                    num(r.per_particle),
                ],
                Entry::Partition(p) => [
                    "partition".into(),
                    format!("partition_d{}", p.d),
                    String::new(),
                    num(p.max_leaf_mass),
                    num(p.lambda),
                    String::new(),
                    String::new(),
                    String::new(),
                    "true".into(),
                    String::new(),
                    num(p.total_mass),
                    String::new(),
                ],
            };
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}
