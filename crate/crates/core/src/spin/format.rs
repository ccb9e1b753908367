//! Plain-text spin-system files.
//!
//! ```text
//! # spins
//! <N rows, d reals each>
//! # couplings
//! <N rows, N reals each>
//! # fields            (optional, defaults to zero)
//! <N rows, d reals each>
//! # three_body        (optional)
//! <i j k K per row>
//! ```
//!
//! Section headers start with `#`; values are whitespace separated. Spins are
//! normalised on load.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use super::{Spin, SpinSystem, ThreeBody};
use crate::{fmt, Error, Result};

pub fn read_spin_system(text: &str) -> Result<SpinSystem> {
    let mut section: Option<(String, usize)> = None;
    let mut rows: Vec<(String, usize, Vec<f64>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('#') {
            let name = name.split_whitespace().next().unwrap_or("").to_string();
            if !matches!(name.as_str(), "spins" | "couplings" | "fields" | "three_body") {
                return Err(Error::parse(line_no, format!("unknown section '{name}'")));
            }
            section = Some((name, line_no));
            continue;
        }
        let Some((name, _)) = &section else {
            return Err(Error::parse(line_no, "data before first section header"));
        };
        let vals = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::parse(line_no, format!("not a number: '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((name.clone(), line_no, vals));
    }
    let take = |name: &str| -> Vec<(usize, Vec<f64>)> {
        rows.iter()
            .filter(|(n, _, _)| n == name)
            .map(|(_, l, v)| (*l, v.clone()))
            .collect()
    };

    let spin_rows = take("spins");
    if spin_rows.is_empty() {
        return Err(Error::parse(0, "missing '# spins' section"));
    }
    let n = spin_rows.len();
    let d = spin_rows[0].1.len();
    let mut spins = Vec::with_capacity(n);
    for (line, v) in &spin_rows {
        if v.len() != d {
            return Err(Error::parse(*line, format!("expected {d} spin components")));
        }
        spins.push(Spin::from_slice(v).map_err(|e| Error::parse(*line, e.to_string()))?);
    }

    let coupling_rows = take("couplings");
    if coupling_rows.len() != n {
        return Err(Error::parse(0, format!("expected {n} coupling rows, got {}", coupling_rows.len())));
    }
    let mut j = DMatrix::zeros(n, n);
    for (r, (line, v)) in coupling_rows.iter().enumerate() {
        if v.len() != n {
            return Err(Error::parse(*line, format!("expected {n} couplings")));
        }
        for (c, x) in v.iter().enumerate() {
            j[(r, c)] = *x;
        }
    }
    let mut sys = SpinSystem::new(spins, j)?;

    let field_rows = take("fields");
    if !field_rows.is_empty() {
        if field_rows.len() != n {
            return Err(Error::parse(field_rows[0].0, format!("expected {n} field rows")));
        }
        let mut fields = Vec::with_capacity(n);
        for (line, v) in &field_rows {
            if v.len() != d {
                return Err(Error::parse(*line, format!("expected {d} field components")));
            }
            fields.push(DVector::from_column_slice(v));
        }
        sys = sys.with_fields(fields)?;
    }

    let tb_rows = take("three_body");
    if !tb_rows.is_empty() {
        let mut terms = Vec::new();
        for (line, v) in &tb_rows {
            if v.len() != 4 || v[..3].iter().any(|x| *x < 0.0 || x.fract() != 0.0) {
                return Err(Error::parse(*line, "expected 'i j k K' with integer indices"));
            }
            if !(v[0] < v[1] && v[1] < v[2]) {
                return Err(Error::parse(*line, "three-body indices must satisfy i < j < k"));
            }
            terms.push(ThreeBody {
                i: v[0] as usize,
                j: v[1] as usize,
                k: v[2] as usize,
                strength: v[3],
            });
        }
        sys = sys.with_three_body(terms)?;
    }
    Ok(sys)
}

pub fn write_spin_system(sys: &SpinSystem) -> String {
    let mut out = String::new();
    let row = |xs: &mut dyn Iterator<Item = f64>| xs.map(fmt::real).collect::<Vec<_>>().join(" ");
    out.push_str("# spins\n");
    for s in sys.spins() {
        let _ = writeln!(out, "{}", row(&mut s.as_vector().iter().copied()));
    }
    out.push_str("# couplings\n");
    for r in 0..sys.len() {
        let _ = writeln!(out, "{}", row(&mut sys.couplings().row(r).iter().copied()));
    }
    out.push_str("# fields\n");
    for h in sys.fields() {
        let _ = writeln!(out, "{}", row(&mut h.iter().copied()));
    }
    if !sys.three_body().is_empty() {
        out.push_str("# three_body\n");
        for t in sys.three_body() {
            let _ = writeln!(out, "{} {} {} {}", t.i, t.j, t.k, fmt::real(t.strength));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "\
# spins
1 0
0 2
# couplings
0 1
1 0
# three_body
0 1 1 2
";

    #[test]
    fn parses_and_reports_line_numbers() {
        let err = read_spin_system(FIXTURE).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 8, .. }), "{err:?}");

        let ok = FIXTURE.replace("# three_body\n0 1 1 2\n", "");
        let sys = read_spin_system(&ok).unwrap();
        assert_eq!(sys.len(), 2);
        assert_eq!(sys.spins()[1].as_vector()[1], 1.0);

        let bad = ok.replace("0 1\n1 0", "0 x\n1 0");
        assert!(matches!(read_spin_system(&bad), Err(Error::Parse { line: 5, .. })));
    }

    #[test]
    fn write_then_read_preserves_system() {
        let text = "# spins\n0.6 0.8\n1 0\n0 1\n# couplings\n0 0.5 1\n0.5 0 -2\n1 -2 0\n# fields\n0 0\n0.1 0\n0 0.25\n# three_body\n0 1 2 0.75\n";
        let sys = read_spin_system(text).unwrap();
        let again = read_spin_system(&write_spin_system(&sys)).unwrap();
        assert_eq!(sys, again);
    }
}
