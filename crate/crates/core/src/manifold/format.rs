//! Decoder weight files and trajectory CSV.
//!
//! Decoder files are block structured:
//!
//! ```text
//! decoder <linear|mlp-tanh>
//! layer <rows> <cols>
//! <rows lines of cols reals>
//! <one line of rows bias reals>
//! layer ...
//! ```
//!
//! Blank lines and `#` comments are ignored. A linear decoder has exactly one layer.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use super::{Decoder, Hamiltonian, Layer, PhaseTrajectory};
use crate::{fmt, Error, Result};

pub fn read_decoder(text: &str) -> Result<Decoder> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "empty decoder file"))?;
    let kind = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["decoder", k] => k.to_string(),
        _ => return Err(Error::parse(line, "expected 'decoder <linear|mlp-tanh>'")),
    };

    let parse_row = |line: usize, l: &str, want: usize| -> Result<Vec<f64>> {
        let vals = l
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| Error::parse(line, format!("not a number: '{t}'"))))
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != want {
            return Err(Error::parse(line, format!("expected {want} values, got {}", vals.len())));
        }
        Ok(vals)
    };

    let mut layers = Vec::new();
    while let Some((line, l)) = lines.next() {
        let (rows, cols) = match l.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["layer", r, c] => (
                r.parse::<usize>().map_err(|_| Error::parse(line, "bad row count"))?,
                c.parse::<usize>().map_err(|_| Error::parse(line, "bad column count"))?,
            ),
            _ => return Err(Error::parse(line, "expected 'layer <rows> <cols>'")),
        };
        let mut w = DMatrix::zeros(rows, cols);
        for r in 0..rows {
            let (ln, l) = lines.next().ok_or_else(|| Error::parse(line, "truncated layer"))?;
            for (c, x) in parse_row(ln, l, cols)?.into_iter().enumerate() {
                w[(r, c)] = x;
            }
        }
        let (ln, l) = lines.next().ok_or_else(|| Error::parse(line, "missing bias row"))?;
        let b = DVector::from_vec(parse_row(ln, l, rows)?);
        layers.push(Layer::new(w, b).map_err(|e| Error::parse(line, e.to_string()))?);
    }

    match kind.as_str() {
        "linear" => {
            if layers.len() != 1 {
                return Err(Error::parse(line, "linear decoder needs exactly one layer"));
            }
            let l = layers.pop().expect("one layer");
            Decoder::linear(l.weight, l.bias).map_err(|e| Error::parse(line, e.to_string()))
        }
        "mlp-tanh" => Decoder::mlp_tanh(layers).map_err(|e| Error::parse(line, e.to_string())),
        other => Err(Error::parse(line, format!("unknown decoder kind '{other}'"))),
    }
}

/// Serialises a linear or MLP decoder; custom decoders have no file form.
pub fn write_decoder(dec: &Decoder) -> Result<String> {
    let (kind, layers): (&str, Vec<&Layer>) = match dec {
        Decoder::Linear(l) => ("linear", vec![l]),
        Decoder::MlpTanh(ls) => ("mlp-tanh", ls.iter().collect()),
        Decoder::Custom { .. } => {
            return Err(Error::InvalidArgument("custom decoders cannot be serialised".into()))
        }
    };
    let mut out = format!("decoder {kind}\n");
    for l in layers {
        let _ = writeln!(out, "layer {} {}", l.weight.nrows(), l.weight.ncols());
        for r in 0..l.weight.nrows() {
            let row: Vec<String> = l.weight.row(r).iter().map(|x| fmt::real(*x)).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        let bias: Vec<String> = l.bias.iter().map(|x| fmt::real(*x)).collect();
        let _ = writeln!(out, "{}", bias.join(" "));
    }
    Ok(out)
}

/// CSV with columns `s, y0..y{d-1}, p0..p{d-1}, H`.
pub fn trajectory_csv<H: Hamiltonian + ?Sized>(traj: &PhaseTrajectory, h: &H) -> Result<String> {
    let d = traj.points()[0].dim();
    let mut header = vec!["s".to_string()];
    header.extend((0..d).map(|i| format!("y{i}")));
    header.extend((0..d).map(|i| format!("p{i}")));
    header.push("H".to_string());
    let mut out = header.join(",");
    out.push('\n');
    for (k, pt) in traj.points().iter().enumerate() {
        let mut row = vec![fmt::real(traj.time(k))];
        row.extend(pt.y.iter().map(|x| fmt::real(*x)));
        row.extend(pt.p.iter().map(|x| fmt::real(*x)));
        row.push(fmt::real(h.energy(pt)?));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}
