//! Deterministic number formatting for CSV and table output.
//!
//! Reals are written with 10 significant digits in the style of C's `%.10g`:
//! fixed notation for decimal exponents in `[-5, 10)`, scientific otherwise,
//! trailing zeros trimmed. Output never depends on locale.

const SIG: i32 = 10;

pub fn real(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    // Round first, then read the exponent back so 9.9999999999 -> 10 is handled.
    let sci = format!("{:.*e}", (SIG - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG).contains(&exp) {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}

/// Fixed-point with `decimals` places, for markdown tables.
pub fn fixed(x: f64, decimals: usize) -> String {
    format!("{:.*}", decimals, x)
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0');
    t.trim_end_matches('.').to_string()
}
