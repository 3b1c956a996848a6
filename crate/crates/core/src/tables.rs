//! Aligned plain-text tables: posterior proportions, index summaries and
//! dominance probabilities.

use crate::analysis::AnalysisReport;
use crate::comparison::Criterion;

type Getter = fn(&crate::DominanceReport) -> f64;

fn render(header: &[String], rows: &[Vec<String>]) -> String {
    let ncol = header.len();
    let mut width = vec![0; ncol];
    for row in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |row: &[String]| {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == 0 {
                    format!("{c:<w$}", w = width[i])
                } else {
                    format!("{c:>w$}", w = width[i])
                }
            })
            .collect();
        cells.join("  ").trim_end().to_string()
    };
    let mut out = line(header);
    out.push('\n');
    out.push_str(&"-".repeat(width.iter().sum::<usize>() + 2 * (ncol - 1)));
    out.push('\n');
    for r in rows {
        out.push_str(&line(r));
        out.push('\n');
    }
    out
}

/// Posterior means (sds) of each category proportion, one column per group.
pub fn proportions_table(report: &AnalysisReport) -> String {
    let k_max = report
        .groups
        .iter()
        .map(|g| g.categories)
        .max()
        .unwrap_or(0);
    let mut header = vec!["k".to_string()];
    header.extend(report.groups.iter().map(|g| g.name.clone()));
    let rows: Vec<Vec<String>> = (0..k_max)
        .map(|k| {
            let mut row = vec![format!("p_{}", k + 1)];
            row.extend(
                report
                    .groups
                    .iter()
                    .map(|g| g.proportions.get(k).map(|s| s.cell()).unwrap_or_default()),
            );
            row
        })
        .collect();
    format!(
        "Posterior means (standard deviations) of category proportions\n\n{}",
        render(&header, &rows)
    )
}

/// Posterior means (sds) of each index, one row per group.
pub fn indices_table(report: &AnalysisReport) -> String {
    let Some(first) = report.groups.first() else {
        return String::new();
    };
    let mut header = vec!["group".to_string()];
    header.extend(first.indices.iter().map(|i| i.index.to_string()));
    let rows: Vec<Vec<String>> = report
        .groups
        .iter()
        .map(|g| {
            let mut row = vec![g.name.clone()];
            row.extend(g.indices.iter().map(|i| i.summary.cell()));
            row
        })
        .collect();
    format!(
        "Headcount and inequality measures, posterior mean (sd)\n\n{}",
        render(&header, &rows)
    )
}

/// Dominance probabilities, one column per comparison and three rows per
/// criterion.
pub fn dominance_table(report: &AnalysisReport) -> String {
    if report.comparisons.is_empty() {
        return String::new();
    }
    let mut header = vec![String::new()];
    header.extend(
        report
            .comparisons
            .iter()
            .map(|c| format!("X={} Y={}", c.x, c.y)),
    );
    let mut rows = Vec::new();
    for crit in Criterion::ALL {
        if !report
            .comparisons
            .iter()
            .any(|c| c.reports.iter().any(|r| r.criterion == crit))
        {
            continue;
        }
        let label = crit.label();
        let lines: [(String, Getter); 3] = [
            (format!("Pr[X >_{label} Y]"), |r| r.prob_x),
            (format!("Pr[Y >_{label} X]"), |r| r.prob_y),
            ("Pr(No Dominance)".to_string(), |r| r.prob_none),
        ];
        for (name, get) in lines {
            let mut row = vec![name];
            row.extend(report.comparisons.iter().map(|c| {
                c.reports
                    .iter()
                    .find(|r| r.criterion == crit)
                    .map(|r| format!("{:.4}", get(r)))
                    .unwrap_or_default()
            }));
            rows.push(row);
        }
    }
    format!("Dominance probabilities\n\n{}", render(&header, &rows))
}

pub fn full_report(report: &AnalysisReport) -> String {
    let mut out = vec![proportions_table(report), indices_table(report)];
    let dom = dominance_table(report);
    if !dom.is_empty() {
        out.push(dom);
    }
    out.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_aligns_columns() {
        let t = render(
            &["a".into(), "bb".into()],
            &[
                vec!["xyz".into(), "1".into()],
                vec!["q".into(), "22".into()],
            ],
        );
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "a    bb");
        assert_eq!(lines[1], "-------");
        assert_eq!(lines[2], "xyz   1");
        assert_eq!(lines[3], "q    22");
    }
}
