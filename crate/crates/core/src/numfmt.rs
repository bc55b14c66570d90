//! Fixed significant-digit number formatting shared by the text formats.

/// Formats `x` in plain decimal notation with `digits` significant digits.
///
/// Zero prints as `0`. Negative zero is normalized to `0`.
pub fn decimal(x: f64, digits: usize) -> String {
    assert!(digits > 0);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    // Round through scientific formatting first so the exponent reflects
    // carries (9.9999999996 -> 10.0000000).
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    let frac = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{:.*}", frac, x)
}

/// CSV formatting: 12 significant digits, decimal for moderate magnitudes and
/// scientific otherwise.
pub fn csv(x: f64) -> String {
    const DIGITS: usize = 12;
    let a = x.abs();
    if x == 0.0 || (1e-4..1e12).contains(&a) {
        decimal(x, DIGITS)
    } else {
        format!("{:.*e}", DIGITS - 1, x)
    }
}
