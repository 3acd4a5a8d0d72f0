//! Text renderings of results: an activity table and a DOT graph.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::duration::Duration;
use crate::network::ProjectNetwork;
use crate::schedule::ScheduleResult;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("result path {path} is not a source-to-sink path of this network")]
    PathMismatch { path: String },
}

fn critical_arcs(result: &ScheduleResult) -> HashSet<(&str, &str)> {
    result
        .critical_path
        .windows(2)
        .map(|w| (w[0].as_str(), w[1].as_str()))
        .collect()
}

/// Activity listing with critical activities starred, followed by the
/// duration, path and activity summary lines.
pub fn emit_table(network: &ProjectNetwork, result: &ScheduleResult) -> String {
    let critical = critical_arcs(result);
    let rows: Vec<[String; 5]> = network
        .arcs()
        .iter()
        .filter(|a| !a.is_virtual)
        .enumerate()
        .map(|(i, a)| {
            let from = network.label(a.from);
            let to = network.label(a.to);
            let star = if critical.contains(&(from, to)) {
                "*"
            } else {
                ""
            };
            [
                (i + 1).to_string(),
                format!("{}{star}", a.name),
                from.to_string(),
                to.to_string(),
                a.duration.to_fixed2(),
            ]
        })
        .collect();
    let header = ["Line", "Activity", "From", "To", "Duration"];
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }

    let mut out = String::new();
    let _ = writeln!(out, "Engine: {}", result.engine);
    let line = |out: &mut String, cells: [&str; 5]| {
        let _ = writeln!(
            out,
            "{:>w0$}  {:<w1$}  {:<w2$}  {:<w3$}  {:>w4$}",
            cells[0],
            cells[1],
            cells[2],
            cells[3],
            cells[4],
            w0 = widths[0],
            w1 = widths[1],
            w2 = widths[2],
            w3 = widths[3],
            w4 = widths[4],
        );
    };
    line(&mut out, header);
    for row in &rows {
        line(&mut out, [&row[0], &row[1], &row[2], &row[3], &row[4]]);
    }
    let _ = writeln!(
        out,
        "Project Duration: {}",
        result.project_duration.to_fixed2()
    );
    let _ = writeln!(out, "Critical Path: {}", result.milestones.join(" - "));
    let _ = writeln!(
        out,
        "Critical Activities: {}",
        result.critical_activities.join(" - ")
    );
    out
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            q.push('\\');
        }
        q.push(c);
    }
    q.push('"');
    q
}

fn short(d: Duration) -> String {
    if d.ratio().is_integer() {
        d.ratio().to_integer().to_string()
    } else {
        d.to_fixed2()
    }
}

/// Graphviz rendering with the critical path dashed and bold. `result`
/// must have been computed on `network` (virtual terminals included).
pub fn emit_dot(network: &ProjectNetwork, result: &ScheduleResult) -> Result<String, ReportError> {
    let mismatch = || ReportError::PathMismatch {
        path: result.critical_path.join("-"),
    };
    let path = result.path_ids(network).ok_or_else(mismatch)?;
    if !network.is_complete_path(&path) {
        return Err(mismatch());
    }
    let critical = critical_arcs(result);

    let mut out = String::new();
    out.push_str("digraph project {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle];\n");
    for node in network.nodes() {
        let on_path = result.critical_path.contains(&node.label);
        let mut attrs = vec![format!("label={}", quote(&node.label))];
        if node.is_virtual {
            attrs.push("shape=box".into());
            attrs.push("style=\"rounded,dashed\"".into());
        }
        if on_path {
            attrs.push("penwidth=2".into());
        }
        let _ = writeln!(out, "  {} [{}];", quote(&node.label), attrs.join(", "));
    }
    for arc in network.arcs() {
        let from = network.label(arc.from);
        let to = network.label(arc.to);
        let mut attrs = vec![format!(
            "label={}",
            quote(&format!("{}:{}", arc.name, short(arc.duration)))
        )];
        if critical.contains(&(from, to)) {
            attrs.push("style=\"dashed,bold\"".into());
            attrs.push("penwidth=2".into());
        } else if arc.is_virtual {
            attrs.push("style=dotted".into());
        }
        let _ = writeln!(
            out,
            "  {} -> {} [{}];",
            quote(from),
            quote(to),
            attrs.join(", ")
        );
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::critical_path_exact;
    use crate::examples::{house_document, sample_activities};
    use crate::network::{build_network, Activity};

    #[test]
    fn sample_table_marks_critical_activities() {
        let net = build_network(&sample_activities())
            .unwrap()
            .normalize_terminals();
        let r = critical_path_exact(&net);
        let table = emit_table(&net, &r);
        let starred: Vec<&str> = table
            .lines()
            .filter_map(|l| l.split_whitespace().nth(1))
            .filter(|n| n.ends_with('*'))
            .collect();
        assert_eq!(starred, ["C*", "F*", "H*", "J*", "L*"]);
        assert!(table.contains("Project Duration: 51.00\n"));
        assert!(table.contains("Critical Path: D1 - D3 - D4 - D6 - D8 - D11\n"));
        assert!(table.contains("Critical Activities: C - F - H - J - L\n"));
        assert!(!table.contains("START"));
    }

    #[test]
    fn single_arc_table() {
        let net = build_network(&[Activity::fixed("A", "1", "2", 5)]).unwrap();
        let table = emit_table(&net, &critical_path_exact(&net));
        let rows: Vec<&str> = table
            .lines()
            .skip(2)
            .take_while(|l| !l.starts_with("Project"))
            .collect();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].contains("A*"));
    }

    #[test]
    fn pert_table_uses_two_decimals() {
        let net = build_network(&house_document().activities).unwrap();
        let table = emit_table(&net, &critical_path_exact(&net));
        // Plumbing: (2 + 12 + 6) / 6 = 3.333...
        assert!(table
            .lines()
            .any(|l| l.contains("Plumbing") && l.ends_with("3.33")));
    }

    #[test]
    fn sample_dot_dashes_critical_arcs() {
        let net = build_network(&sample_activities())
            .unwrap()
            .normalize_terminals();
        let r = critical_path_exact(&net);
        let dot = emit_dot(&net, &r).unwrap();
        let dashed: Vec<&str> = dot.lines().filter(|l| l.contains("dashed,bold")).collect();
        let expected = [
            "\"D1\" -> \"D3\"",
            "\"D3\" -> \"D4\"",
            "\"D4\" -> \"D6\"",
            "\"D6\" -> \"D8\"",
            "\"D8\" -> \"D11\"",
            "\"START\" -> \"D1\"",
        ];
        assert_eq!(dashed.len(), expected.len());
        for e in expected {
            assert!(dashed.iter().any(|l| l.contains(e)), "{e}");
        }
        assert!(dot.contains("\"D1\" -> \"D3\" [label=\"C:5\""));
        assert!(dot.contains("\"START\" [label=\"START\", shape=box"));
        assert_eq!(dot, emit_dot(&net, &r).unwrap());
    }

    #[test]
    fn dot_rejects_foreign_result() {
        let raw = build_network(&sample_activities()).unwrap();
        let r = critical_path_exact(&raw); // computed on the normalized network
        assert!(matches!(
            emit_dot(&raw, &r),
            Err(ReportError::PathMismatch { .. })
        ));
    }

    #[test]
    fn dot_quotes_labels() {
        assert_eq!(quote("a\"b\\c"), "\"a\\\"b\\\\c\"");
    }
}
