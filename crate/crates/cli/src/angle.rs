use std::f64::consts::PI;

/// Parses an angle in radians: a plain number or a multiple of π such as `pi/20`,
/// `π/4`, `3pi/8` or `pi`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let invalid = || format!("invalid angle {text:?} (expected a number or a form like pi/20)");
    let Some(pos) = t.find("pi").map(|p| (p, 2)).or_else(|| t.find('π').map(|p| (p, 'π'.len_utf8())))
    else {
        return t.parse::<f64>().map_err(|_| invalid());
    };
    let (head, tail) = (&t[..pos.0], &t[pos.0 + pos.1..]);
    let factor = match head.trim_end_matches('*') {
        "" => 1.0,
        "-" => -1.0,
        k => k.parse::<f64>().map_err(|_| invalid())?,
    };
    let divisor = match tail.strip_prefix('/') {
        None if tail.is_empty() => 1.0,
        None => return Err(invalid()),
        Some(n) => n.parse::<f64>().map_err(|_| invalid())?,
    };
    if divisor == 0.0 {
        return Err(invalid());
    }
    Ok(factor * PI / divisor)
}
