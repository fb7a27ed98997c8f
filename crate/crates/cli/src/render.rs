//! Human-readable rendering of reports and batch tables.

use crate::doc::ReportDocument;
use crate::run::BatchRow;
use std::fmt::Write;

fn color_enabled() -> bool {
    std::env::var_os("NO_COLOR").is_none()
}

fn paint(s: &str, code: &str) -> String {
    if color_enabled() {
        format!("\x1b[{}m{}\x1b[0m", code, s)
    } else {
        s.to_string()
    }
}

fn verdict_colored(verdict: &str) -> String {
    match verdict {
        "trivial" => paint(verdict, "32"),
        "nontrivial" => paint(verdict, "33"),
        _ => paint(verdict, "31"),
    }
}

pub fn render_report(r: &ReportDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", r.input.name);
    let _ = writeln!(
        out,
        "  input: {} points in dimension {}",
        r.input.points.len(),
        r.input.dim
    );
    if let Some(from) = r.reembedded_from_dim {
        let _ = writeln!(
            out,
            "  re-embedded from dimension {} into dimension {}",
            from, r.analyzed_dim
        );
    }
    let _ = writeln!(
        out,
        "  hypotheses: simple={} semigroup={}",
        r.hypotheses.simple,
        if r.hypotheses.semigroup_checks.is_empty() {
            "n/a".to_string()
        } else {
            let ok = r
                .hypotheses
                .semigroup_checks
                .iter()
                .filter(|c| c.generated)
                .count();
            format!("{}/{}", ok, r.hypotheses.semigroup_checks.len())
        }
    );
    if r.cayley_structures.is_empty() {
        let _ = writeln!(out, "  cayley structures: none");
    } else {
        let _ = writeln!(out, "  cayley structures:");
        for s in &r.cayley_structures {
            let defect = s
                .image_defect
                .map(|d| format!(", image defect {}", d))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "    image dim {} with {} blocks (kernel rank {}{}){}",
                s.image_dim,
                s.blocks.len(),
                s.kernel_rank,
                defect,
                if s.elementary { " [elementary]" } else { "" }
            );
        }
    }
    match (r.defect.combinatorial, r.defect.oracle) {
        (Some(c), Some(o)) => {
            let _ = writeln!(
                out,
                "  dual defect: {} (oracle {}, {})",
                c,
                o,
                r.defect.agreement.as_deref().unwrap_or("uncompared")
            );
        }
        (Some(c), None) => {
            let _ = writeln!(out, "  dual defect: {} (oracle disabled)", c);
        }
        (None, Some(o)) => {
            let _ = writeln!(out, "  dual defect: not computed (oracle {})", o);
        }
        (None, None) => {
            let _ = writeln!(out, "  dual defect: not computed");
        }
    }
    if let (Some(factors), Some(base)) = (&r.witnesses.fiber_factors, r.witnesses.base_dim) {
        if !factors.is_empty() {
            let desc: Vec<String> = factors
                .iter()
                .map(|(d, def)| format!("(dim {}, def {})", d, def))
                .collect();
            let _ = writeln!(
                out,
                "  fibration: fiber factors {} over a base of dimension {}",
                desc.join(" x "),
                base
            );
        }
    }
    if let Some((q0, q1)) = &r.witnesses.two_faces {
        let _ = writeln!(
            out,
            "  two-face witness: vertex sets {:?} and {:?}",
            q0, q1
        );
    }
    if let Some(msg) = &r.inconsistency {
        let _ = writeln!(out, "  internal inconsistency: {}", msg);
    }
    let _ = writeln!(out, "  verdict: {}", verdict_colored(&r.verdict));
    out
}

pub fn render_batch_table(rows: &[BatchRow]) -> String {
    let mut table: Vec<[String; 5]> = vec![[
        "file".into(),
        "defect".into(),
        "oracle".into(),
        "verdict".into(),
        "agreement".into(),
    ]];
    for row in rows {
        let file = row
            .file
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_else(|| row.file.display().to_string());
        match &row.outcome {
            Ok(report) => table.push([
                file,
                report
                    .defect
                    .combinatorial
                    .map(|d| d.to_string())
                    .unwrap_or_else(|| "-".into()),
                report
                    .defect
                    .oracle
                    .map(|d| d.to_string())
                    .unwrap_or_else(|| "-".into()),
                report.verdict.clone(),
                report
                    .defect
                    .agreement
                    .clone()
                    .unwrap_or_else(|| "-".into()),
            ]),
            Err(e) => table.push([file, "-".into(), "-".into(), "error".into(), e.clone()]),
        }
    }
    let mut widths = [0usize; 5];
    for row in &table {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in &table {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, cell)| format!("{:width$}", cell, width = widths[i]))
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}
