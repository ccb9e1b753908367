use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use spinflow::experiments::{table1, table2, table3, Table, Toy3Config, ToyDecoder};
use spinflow::fmt;
use spinflow::info_phase::synthetic::{constant_portraits, rotation_portraits};
use spinflow::info_phase::{divergence_score, empirical_field, read_distributions, PhasePortrait};
use spinflow::planner::{read_graph, shortest_path, PathResult};

use crate::config::{Generator, RunConfig};

/// Synthetic rotation sampling: portraits, steps per portrait, step scale.
const ROTATION_SAMPLES: (usize, usize, f64) = (400, 60, 0.05);
const CONSTANT_SAMPLES: (usize, usize) = (3, 20);
const CONSTANT_DISTRIBUTION: [f64; 3] = [0.2, 0.3, 0.5];

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))
}

/// Runs toy `n`, writes `tableN.csv` and `tableN.md`, and returns the markdown.
pub fn table(n: u8, cfg: &RunConfig) -> Result<String> {
    let (csv, md): (Table, Table) = match n {
        1 | 2 => {
            let dec = ToyDecoder::by_name(&cfg.decoder)?;
            if n == 1 {
                table1(&dec)?
            } else {
                table2(&dec)?
            }
        }
        3 => {
            let toy = Toy3Config { horizon: cfg.steps as f64 * cfg.dt, step: cfg.dt, damping: cfg.damping };
            table3(&toy)?
        }
        _ => bail!("no table {n}; expected 1, 2 or 3"),
    };
    ensure_dir(&cfg.out)?;
    let markdown = md.to_markdown();
    write(&cfg.out, &format!("table{n}.csv"), &csv.to_csv())?;
    write(&cfg.out, &format!("table{n}.md"), &markdown)?;
    Ok(markdown)
}

fn concatenated_csv(portraits: &[PhasePortrait]) -> String {
    let mut out = String::from("t,u,e\n");
    for p in portraits {
        // Each portrait restarts at t = 0.
        out.extend(p.to_csv().lines().skip(1).map(|l| format!("{l}\n")));
    }
    out
}

/// Builds portraits, writes `portrait.csv` and `field.csv`, and returns the
/// line reporting the divergence score.
pub fn phase(cfg: &RunConfig) -> Result<String> {
    let portraits = match (&cfg.input, cfg.generator) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let dists = read_distributions(&text).with_context(|| format!("in {}", path.display()))?;
            vec![PhasePortrait::from_distributions(&dists, cfg.window).with_context(|| format!("in {}", path.display()))?]
        }
        (None, Some(Generator::Rotation)) => {
            let (count, steps, tau) = ROTATION_SAMPLES;
            rotation_portraits(count, steps, tau, cfg.seed)?
        }
        (None, Some(Generator::Constant)) => {
            let (count, steps) = CONSTANT_SAMPLES;
            constant_portraits(count, steps, &CONSTANT_DISTRIBUTION)?
        }
        (Some(_), Some(_)) => bail!("give either --input or --generator, not both"),
        (None, None) => bail!("phase needs --input <file> or --generator rotation|constant"),
    };
    let field = empirical_field(&portraits, cfg.bins, cfg.bins)?;
    ensure_dir(&cfg.out)?;
    write(&cfg.out, "portrait.csv", &concatenated_csv(&portraits))?;
    write(&cfg.out, "field.csv", &field.to_csv())?;
    Ok(match divergence_score(&field) {
        Ok(score) => format!("divergence_score={}", fmt::real(score)),
        Err(e) => format!("divergence_score=undefined ({e})"),
    })
}

/// Shortest path between two named (or indexed) nodes of a graph file.
pub fn plan(graph: &Path, src: &str, dst: &str) -> Result<String> {
    let text = fs::read_to_string(graph).with_context(|| format!("reading {}", graph.display()))?;
    let g = read_graph(&text).with_context(|| format!("in {}", graph.display()))?;
    let find = |name: &str| {
        g.payloads()
            .iter()
            .position(|p| p == name)
            .with_context(|| format!("no node {name:?} in {}", graph.display()))
    };
    let (s, d) = (find(src)?, find(dst)?);
    Ok(match shortest_path(&g, s, d)? {
        PathResult::Found { nodes, cost } => {
            let names: Vec<&str> = nodes.iter().map(|&k| g.payload(k).as_str()).collect();
            format!("{}  cost={}", names.join(" "), fmt::real(cost))
        }
        PathResult::Unreachable => "unreachable".to_string(),
    })
}
