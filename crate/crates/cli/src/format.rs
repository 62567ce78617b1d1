/// Formats `x` with 12 significant digits: positional notation for exponents in
/// `-5..12`, scientific otherwise. Negative zero prints as zero.
pub fn significant(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let x = if x == 0.0 { 0.0 } else { x };
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        return sci;
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let body = if exp >= 0 {
        let (int, frac) = digits.split_at(exp as usize + 1);
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    } else {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    };
    format!("{sign}{body}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(significant(0.0), "0.00000000000");
        assert_eq!(significant(-0.0), "0.00000000000");
        assert_eq!(significant(1.0), "1.00000000000");
        assert_eq!(significant(0.5), "0.500000000000");
        assert_eq!(significant(-0.25), "-0.250000000000");
        assert_eq!(significant(std::f64::consts::PI / 20.0), "0.157079632679");
        assert_eq!(significant(123456.789), "123456.789000");
        assert_eq!(significant(1e-3), "0.00100000000000");
        assert_eq!(significant(1.5e-7), "1.50000000000e-7");
        assert_eq!(significant(9.999999999999995), "10.0000000000");
        assert_eq!(significant(123456789012.4), "123456789012");
        assert_eq!(significant(f64::NAN), "NaN");
    }

    #[test]
    fn round_trips_to_twelve_digits() {
        for x in [0.1234567890123456, -3.3e-12, 0.6180339887498949, 2.5e13] {
            let back: f64 = significant(x).parse().unwrap();
            assert!((back - x).abs() <= 1e-11 * x.abs());
        }
    }
}
