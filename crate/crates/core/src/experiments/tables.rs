//! Table emitters: CSV (10 significant digits) and aligned markdown.
//!
//! Every table carries the published reference numbers next to the computed
//! ones; rows whose computed value cannot match the reference are annotated.

use super::{toy1_run, toy2_run, toy3_run, OscillatorReport, OscillatorVariant, PathMetrics, Toy3Config, ToyDecoder};
use crate::{fmt, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Free-text lines printed under the markdown table.
    pub notes: Vec<String>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|c| {
                std::iter::once(&self.header[c])
                    .chain(self.rows.iter().map(|r| &r[c]))
                    .map(|s| s.chars().count())
                    .max()
                    .unwrap_or(0)
                    .max(3)
            })
            .collect();
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s}{}", " ".repeat(w - s.chars().count())))
                .collect();
            format!("| {} |\n", padded.join(" | "))
        };
        let mut out = format!("### {}\n\n", self.title);
        out.push_str(&line(&self.header));
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        out.push_str(&format!("|-{}-|\n", rule.join("-|-")));
        for r in &self.rows {
            out.push_str(&line(r));
        }
        if !self.notes.is_empty() {
            out.push('\n');
            for n in &self.notes {
                out.push_str(&format!("- {n}\n"));
            }
        }
        out
    }
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn node(y: f64) -> String {
    let s = fmt::real(y);
    if s.contains('.') || s.contains('e') {
        s
    } else {
        format!("{s}.0")
    }
}

fn path_string(path: &[f64]) -> String {
    path.iter().map(|&y| node(y)).collect::<Vec<_>>().join(" -> ")
}

/// Reference `(u_T, Δu, J, Δu/J)` rows.
pub const TABLE1_REFERENCE: [(&str, [f64; 4]); 3] = [
    ("linear", [0.9060, 0.1684, 3.4000, 0.0495]),
    ("hjb-like", [0.9146, 0.1598, 1.6650, 0.0960]),
    ("ndm-sssp", [0.9060, 0.1684, 1.0000, 0.1684]),
];

/// Reference `(final y, u_T, Δu, J, Δu/J)` rows.
pub const TABLE2_REFERENCE: [(&str, [f64; 5]); 2] = [
    ("hjb-only", [0.25, 0.9393, 0.1351, 1.6406, 0.0823]),
    ("ctm-style", [0.0933, 0.9187, 0.1556, 2.1204, 0.0734]),
];

/// Reference `(y_N, p_N, ε_state, ε_H^max)` rows.
pub const TABLE3_REFERENCE: [(&str, [f64; 4]); 3] = [
    ("leapfrog-hamiltonian", [0.883, 0.469, 0.042, 1.25e-2]),
    ("euler-hamiltonian", [94.2, 110.0, 1.44e2, 1.05e-1]),
    ("leapfrog-damped", [0.0725, 0.0362, 0.919, 4.97e-1]),
];

fn metric_cells(m: &PathMetrics, csv: bool) -> Vec<String> {
    let f = |x: f64| if csv { fmt::real(x) } else { fmt::fixed(x, 4) };
    vec![f(m.u_final), f(m.delta_u), f(m.cost), f(m.efficiency)]
}

fn reference_cells(xs: &[f64], csv: bool) -> Vec<String> {
    xs.iter().map(|&x| if csv { fmt::real(x) } else { fmt::fixed(x, 4) }).collect()
}

/// Planner comparison. `markdown` selects 4-decimal cells instead of CSV precision.
fn table1_with(decoder: &ToyDecoder, markdown: bool) -> Result<Table> {
    let t = toy1_run(decoder)?;
    let csv = !markdown;
    let rows = [&t.linear, &t.hjb_like, &t.ndm_sssp]
        .into_iter()
        .zip(TABLE1_REFERENCE)
        .map(|(m, (name, reference))| {
            let mut row = vec![name.to_string(), path_string(&m.path)];
            row.extend(metric_cells(m, csv));
            row.extend(reference_cells(&reference, csv));
            row
        })
        .collect();
    Ok(Table {
        title: "Table 1: planners on the latent line".into(),
        header: strings(&[
            "method", "path", "u_T", "delta_u", "cost_J", "efficiency", "ref_u_T", "ref_delta_u", "ref_cost_J", "ref_efficiency",
        ]),
        rows,
        notes: vec![format!(
            "entropies from the {} decoder; reference entropies come from an unpublished decoder",
            decoder.name()
        )],
    })
}

fn table2_with(decoder: &ToyDecoder, markdown: bool) -> Result<Table> {
    let t = toy2_run(decoder)?;
    let csv = !markdown;
    let steps = ["3 / 3", "3 / 6"];
    let rows = [&t.hjb_only, &t.ctm_style]
        .into_iter()
        .zip(TABLE2_REFERENCE)
        .zip(steps)
        .map(|((m, (name, reference)), steps)| {
            let y = m.path[m.path.len() - 1];
            let mut row = vec![name.to_string(), steps.to_string(), if csv { fmt::real(y) } else { fmt::fixed(y, 6) }];
            row.extend(metric_cells(m, csv));
            row.extend(reference_cells(&reference, csv));
            row
        })
        .collect();
    Ok(Table {
        title: "Table 2: CTM-style ticks against halving steps".into(),
        header: strings(&[
            "method", "steps", "final_y", "u_T", "delta_u", "cost_J", "efficiency", "ref_final_y", "ref_u_T", "ref_delta_u", "ref_cost_J",
            "ref_efficiency",
        ]),
        rows,
        notes: vec![format!(
            "entropies from the {} decoder; reference entropies come from an unpublished decoder",
            decoder.name()
        )],
    })
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

fn table3_note(r: &OscillatorReport, reference: &[f64; 4], cfg: &Toy3Config) -> String {
    match r.variant {
        OscillatorVariant::Euler => {
            let ref_energy_error = 0.5 * (reference[0].powi(2) + reference[1].powi(2)) - 0.5;
            format!(
                "ref eps_H_max {} contradicts the ref final state whose energy error is {}",
                sci(reference[3]),
                sci(ref_energy_error)
            )
        }
        OscillatorVariant::Leapfrog => {
            let bound = cfg.step * cfg.step / 8.0;
            if (r.eps_h_max - reference[3]).abs() > 0.1 * reference[3] {
                format!(
                    "ref eps_H_max {} is 10x the leapfrog energy bound h^2/8 = {} reached here",
                    sci(reference[3]),
                    sci(bound)
                )
            } else {
                String::new()
            }
        }
        OscillatorVariant::DampedLeapfrog => String::new(),
    }
}

fn table3_with(cfg: &Toy3Config, markdown: bool) -> Result<Table> {
    let reports = toy3_run(cfg)?;
    let f = |x: f64| if markdown { fmt::fixed(x, 4) } else { fmt::real(x) };
    let e = |x: f64| if markdown { sci(x) } else { fmt::real(x) };
    let yes_no = |b: bool| if b { "yes" } else { "no" }.to_string();
    let rows = reports
        .iter()
        .zip(TABLE3_REFERENCE)
        .map(|(r, (name, reference))| {
            vec![
                name.to_string(),
                yes_no(r.variant.symplectic()),
                yes_no(r.variant.hamiltonian()),
                f(r.final_state.0),
                f(r.final_state.1),
                e(r.eps_state),
                e(r.eps_h_max),
                f(reference[0]),
                f(reference[1]),
                e(reference[2]),
                e(reference[3]),
                table3_note(r, &reference, cfg),
            ]
        })
        .collect();
    let mut notes = vec![format!(
        "T = {}, h = {}, lambda = {}, {} steps; reference columns are for T = 100, h = 0.1, lambda = 0.05",
        fmt::real(cfg.horizon),
        fmt::real(cfg.step),
        fmt::real(cfg.damping),
        cfg.steps()
    )];
    notes.push("eps_state is the distance to (cos T, -sin T); eps_H_max is max_k |H_k - 0.5|".into());
    Ok(Table {
        title: "Table 3: harmonic oscillator".into(),
        header: strings(&[
            "variant", "symplectic", "hamiltonian", "y_N", "p_N", "eps_state", "eps_H_max", "ref_y_N", "ref_p_N", "ref_eps_state",
            "ref_eps_H_max", "note",
        ]),
        rows,
        notes,
    })
}

/// CSV-precision and markdown versions of the planner table.
pub fn table1(decoder: &ToyDecoder) -> Result<(Table, Table)> {
    Ok((table1_with(decoder, false)?, table1_with(decoder, true)?))
}

pub fn table2(decoder: &ToyDecoder) -> Result<(Table, Table)> {
    Ok((table2_with(decoder, false)?, table2_with(decoder, true)?))
}

pub fn table3(cfg: &Toy3Config) -> Result<(Table, Table)> {
    Ok((table3_with(cfg, false)?, table3_with(cfg, true)?))
}
