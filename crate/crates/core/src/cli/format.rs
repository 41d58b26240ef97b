//! Number formatting shared by reports and CSV output.

/// Shortest of fixed or scientific notation with `sig` significant digits,
/// trailing zeros removed (the C `%g` conversion).
pub fn sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -5 || exp >= sig as i32 {
        let mantissa = trim_zeros(mantissa);
        format!(
            "{mantissa}e{}{:02}",
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Payoff values and coefficient printouts.
pub fn num(x: f64) -> String {
    let s = sig(x, 12);
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// Radians followed by degrees in parentheses.
pub fn angle(rad: f64) -> String {
    format!("{} ({}°)", num(rad), num_deg(rad.to_degrees()))
}

fn num_deg(deg: f64) -> String {
    let s = sig(deg, 9);
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// Residuals and tolerances.
pub fn small(x: f64) -> String {
    format!("{x:.3e}")
}
