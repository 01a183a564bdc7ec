//! Fixed-decimal rounding for human-readable reports.
//!
//! Values are rounded half away from zero on their exact binary value, so
//! `1.005` (stored as 1.00499999...) prints as `1.00` while `0.125` prints as
//! `0.13`. Only the reporting layer rounds; computations keep full precision.

/// Formats `value` with `decimals` fractional digits, rounding half away from zero.
pub fn fixed(value: f64, decimals: usize) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    // every finite f64 has a terminating expansion of at most 1074 fractional digits
    let exact = format!("{:.1100}", value.abs());
    let (int_part, frac_part) = exact.split_once('.').expect("fixed-point output has a point");
    let mut digits: Vec<u8> = int_part.bytes().chain(frac_part.bytes().take(decimals)).collect();
    let round_up = frac_part.as_bytes()[decimals] >= b'5';
    if round_up {
        let mut i = digits.len();
        loop {
            if i == 0 {
                digits.insert(0, b'1');
                break;
            }
            i -= 1;
            if digits[i] == b'9' {
                digits[i] = b'0';
            } else {
                digits[i] += 1;
                break;
            }
        }
    }
    let int_len = digits.len() - decimals;
    let mut out = String::with_capacity(digits.len() + 2);
    if value < 0.0 && digits.iter().any(|&d| d != b'0') {
        out.push('-');
    }
    out.push_str(std::str::from_utf8(&digits[..int_len]).expect("ascii"));
    if decimals > 0 {
        out.push('.');
        out.push_str(std::str::from_utf8(&digits[int_len..]).expect("ascii"));
    }
    out
}

/// Two-decimal display form used throughout the reports.
pub fn two(value: f64) -> String {
    fixed(value, 2)
}
