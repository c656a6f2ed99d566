//! Rendering of sweep results: CSV tables, a Markdown summary and gnuplot
//! data files, plus the comparisons against published reference values.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use crate::encoding::{all_gates, EncodingVariant};
use crate::neuron::{ResetMechanism, Variant};
use crate::reference;
use crate::sweep::{SweepCell, SweepReport};

/// Marker written for statistics that are not computable (no solvable draw).
pub const MISSING: &str = "-";

/// Tolerance on gate 0 of PRM at beta = 0.5 against the published 93.0 %.
pub const HEADLINE_TOLERANCE_PCT: f64 = 15.0;
pub const HEADLINE_TARGET_PCT: f64 = 93.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    Probability,
    L1Mean,
    L1Std,
}

impl Table {
    pub const ALL: [Table; 3] = [Table::Probability, Table::L1Mean, Table::L1Std];

    pub fn stem(self) -> &'static str {
        match self {
            Table::Probability => "probability",
            Table::L1Mean => "l1_mean",
            Table::L1Std => "l1_std",
        }
    }

    fn title(self) -> &'static str {
        match self {
            Table::Probability => "Solvability probability (%)",
            Table::L1Mean => "Mean l1-norm of solvable draws",
            Table::L1Std => "Standard deviation of l1-norm of solvable draws",
        }
    }

    pub fn value(self, cell: &SweepCell) -> Option<f64> {
        match self {
            Table::Probability => Some(cell.probability_pct),
            Table::L1Mean => cell.l1_mean,
            Table::L1Std => cell.l1_std,
        }
    }

    fn reference_exists(self, encoding: EncodingVariant, beta: f64) -> bool {
        match self {
            Table::Probability => reference::probability(encoding, beta, 0, Variant::SRM).is_some(),
            Table::L1Mean => reference::l1_mean(encoding, beta, 0, Variant::SRM).is_some(),
            Table::L1Std => false,
        }
    }

    fn reference(self, encoding: EncodingVariant, cell: &SweepCell) -> Option<f64> {
        match self {
            Table::Probability => reference::probability(encoding, cell.beta, cell.gate, cell.variant),
            Table::L1Mean => reference::l1_mean(encoding, cell.beta, cell.gate, cell.variant),
            Table::L1Std => None,
        }
    }
}

fn header_lines(report: &SweepReport) -> String {
    format!(
        "# spikegate {}\n# config: {}\n# seed: {}\n",
        env!("CARGO_PKG_VERSION"),
        report.config.echo(),
        report.config.seed
    )
}

/// One CSV table with columns `gate,class_a,variant,beta,value`.
pub fn csv_table(report: &SweepReport, table: Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["gate", "class_a", "variant", "beta", "value"]).expect("in-memory write");
    for c in &report.cells {
        let value = table.value(c).map_or_else(|| MISSING.to_string(), |v| format!("{v:?}"));
        w.write_record([c.gate.to_string(), c.class_a.clone(), c.variant.to_string(), format!("{:?}", c.beta), value])
            .expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8");
    header_lines(report) + &body
}

/// Gnuplot data: one block per beta (separated by two blank lines), one row
/// per gate, one column per variant. Missing values are written as `NaN`.
pub fn gnuplot_table(report: &SweepReport, table: Table) -> String {
    let mut out = header_lines(report);
    for (i, &beta) in report.config.betas.iter().enumerate() {
        if i > 0 {
            out.push_str("\n\n");
        }
        let names: Vec<&str> = report.config.variants.iter().map(|v| v.name()).collect();
        let _ = writeln!(out, "# beta={beta:?}\n# gate {}", names.join(" "));
        for gate in all_gates() {
            let _ = write!(out, "{}", gate.id);
            for &v in &report.config.variants {
                match report.cell(gate.id, v, beta).and_then(|c| table.value(c)) {
                    Some(x) => {
                        let _ = write!(out, " {x:?}");
                    }
                    None => out.push_str(" NaN"),
                }
            }
            out.push('\n');
        }
    }
    out
}

/// Agreement of one reset-to-zero cell with the published all-zero column.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroColumnCheck {
    pub beta: f64,
    pub gate: usize,
    pub variant: Variant,
    pub observed_pct: f64,
    pub agrees: bool,
}

/// Whether both bit values of the configured encoding inject a spike.
pub fn both_bits_spike(report: &SweepReport) -> bool {
    let e = &report.config.encoding;
    e.amp_zero != 0.0 && e.amp_one != 0.0 && e.slot_signs.iter().all(|&s| s != 0.0)
}

/// Per-gate comparison of the SRZ/PRZ cells with the published zeros.
///
/// Empty unless both bit values spike (the only setting the published
/// columns describe).
pub fn zero_column_checks(report: &SweepReport) -> Vec<ZeroColumnCheck> {
    if !both_bits_spike(report) {
        return Vec::new();
    }
    report
        .cells
        .iter()
        .filter(|c| c.variant.reset() == ResetMechanism::ToZero)
        .map(|c| ZeroColumnCheck {
            beta: c.beta,
            gate: c.gate,
            variant: c.variant,
            observed_pct: c.probability_pct,
            agrees: c.probability_pct == 0.0,
        })
        .collect()
}

/// The two-neuron sparse-solution pattern for PRM at one beta.
#[derive(Clone, Debug, PartialEq)]
pub struct HeadlineCheck {
    pub beta: f64,
    /// PRM solvable counts per gate.
    pub prm_solvable: Vec<usize>,
    /// Gates where both PRM and SRM have an l1 mean.
    pub l1_compared: usize,
    /// Of those, gates where PRM's mean is at most SRM's.
    pub l1_prm_not_larger: usize,
    pub gate0_pct: f64,
}

impl HeadlineCheck {
    pub fn every_gate_solvable(&self) -> bool {
        self.prm_solvable.iter().all(|&n| n > 0)
    }

    pub fn l1_majority(&self) -> bool {
        2 * self.l1_prm_not_larger > self.l1_compared
    }

    pub fn gate0_within_tolerance(&self) -> bool {
        (self.gate0_pct - HEADLINE_TARGET_PCT).abs() <= HEADLINE_TOLERANCE_PCT
    }
}

/// `None` if the report lacks PRM or SRM at `beta`.
pub fn headline_check(report: &SweepReport, beta: f64) -> Option<HeadlineCheck> {
    let gates = all_gates();
    let mut prm_solvable = Vec::with_capacity(gates.len());
    let mut compared = 0;
    let mut not_larger = 0;
    for g in &gates {
        let prm = report.cell(g.id, Variant::PRM, beta)?;
        let srm = report.cell(g.id, Variant::SRM, beta)?;
        prm_solvable.push(prm.solvable_count);
        if let (Some(p), Some(s)) = (prm.l1_mean, srm.l1_mean) {
            compared += 1;
            not_larger += (p <= s) as usize;
        }
    }
    let gate0_pct = report.cell(0, Variant::PRM, beta)?.probability_pct;
    Some(HeadlineCheck { beta, prm_solvable, l1_compared: compared, l1_prm_not_larger: not_larger, gate0_pct })
}

fn fmt_value(v: Option<f64>) -> String {
    v.map_or_else(|| MISSING.to_string(), |x| format!("{x:.1}"))
}

/// Markdown tables for one measure, one per beta: rows are gates, columns
/// variants; published values (if any) follow in parentheses.
pub fn markdown_table(report: &SweepReport, table: Table) -> String {
    let encoding = report.config.encoding.variant;
    let mut out = String::new();
    for &beta in &report.config.betas {
        let _ = writeln!(out, "### {} (beta = {beta})\n", table.title());
        let names: Vec<&str> = report.config.variants.iter().map(|v| v.name()).collect();
        let _ = writeln!(out, "| gate | class A | {} |", names.join(" | "));
        let _ = writeln!(out, "|---|---|{}", "---|".repeat(names.len()));
        for gate in all_gates() {
            let _ = write!(out, "| {} | {} |", gate.id, gate.class_a_label());
            for &v in &report.config.variants {
                let cell = report.cell(gate.id, v, beta);
                let ours = fmt_value(cell.and_then(|c| table.value(c)));
                let theirs = cell.and_then(|c| table.reference(encoding, c));
                let has_table = table.reference_exists(encoding, beta);
                match (theirs, has_table) {
                    (Some(r), _) => {
                        let _ = write!(out, " {ours} ({r:.1}) |");
                    }
                    (None, true) => {
                        let _ = write!(out, " {ours} ({MISSING}) |");
                    }
                    (None, false) => {
                        let _ = write!(out, " {ours} |");
                    }
                }
            }
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

/// The full Markdown report.
pub fn markdown(report: &SweepReport) -> String {
    let cfg = &report.config;
    let mut out = String::from("# Sweep report\n\n");
    let _ = writeln!(out, "- config: `{}`", cfg.echo());
    let _ = writeln!(out, "- seed: {}", cfg.seed);
    let _ = writeln!(out, "- version: {}\n", env!("CARGO_PKG_VERSION"));
    out.push_str("Values in parentheses are the published reference for the same cell, where one exists.\n\n");
    for t in Table::ALL {
        out.push_str(&markdown_table(report, t));
    }

    let checks = zero_column_checks(report);
    if !checks.is_empty() {
        out.push_str("### Reset-to-zero columns against the published zeros\n\n");
        out.push_str("| beta | gate | variant | probability | flag |\n|---|---|---|---|---|\n");
        for c in &checks {
            let flag = if c.agrees { "agree" } else { "DISAGREE" };
            let _ = writeln!(out, "| {} | {} | {} | {:.1} | {flag} |", c.beta, c.gate, c.variant, c.observed_pct);
        }
        out.push('\n');
    }

    for &beta in &cfg.betas {
        if let Some(h) = headline_check(report, beta) {
            let _ = writeln!(
                out,
                "- beta = {beta}: PRM solvable on every gate: {}; PRM l1 <= SRM l1 on {}/{} gates; gate 0 PRM {:.1}%",
                h.every_gate_solvable(),
                h.l1_prm_not_larger,
                h.l1_compared,
                h.gate0_pct
            );
        }
    }

    let invalid: Vec<&SweepCell> = report.cells.iter().filter(|c| c.invalid).collect();
    let failures: usize = report.cells.iter().map(|c| c.failures).sum();
    let boundary: usize = report.cells.iter().map(|c| c.boundary_count).sum();
    let _ = writeln!(
        out,
        "- failed decisions: {failures}; boundary-flagged decisions: {boundary}; certificate violations: {}; invalid cells: {}",
        report.certificate_violations(),
        invalid.len()
    );
    out
}

/// Plain-text probability table (gates by variant, one block per beta).
pub fn probability_text(report: &SweepReport) -> String {
    let mut out = String::new();
    for &beta in &report.config.betas {
        let _ = write!(out, "beta={beta:<5} gate");
        for v in &report.config.variants {
            let _ = write!(out, " {:>6}", v.name());
        }
        out.push('\n');
        for gate in all_gates() {
            let _ = write!(out, "{:>15}", gate.id);
            for &v in &report.config.variants {
                let p = report.cell(gate.id, v, beta).map(|c| c.probability_pct);
                let _ = write!(out, " {:>6}", fmt_value(p));
            }
            let _ = writeln!(out, "   {}", gate.class_a_label());
        }
    }
    out
}

/// Writes every artifact into `dir` and returns the paths, in a fixed order.
pub fn write_reports(report: &SweepReport, dir: &Path) -> io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    let mut put = |name: String, body: String| -> io::Result<()> {
        let p = dir.join(name);
        std::fs::write(&p, body)?;
        paths.push(p);
        Ok(())
    };
    for t in Table::ALL {
        put(format!("{}.csv", t.stem()), csv_table(report, t))?;
    }
    put("report.md".into(), markdown(report))?;
    for t in Table::ALL {
        put(format!("{}.dat", t.stem()), gnuplot_table(report, t))?;
    }
    Ok(paths)
}
