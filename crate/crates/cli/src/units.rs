//! Durations with optional unit suffixes: `s`, `m`, `h`, `d`, `w`.

pub fn parse_duration(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let (num, scale) = match s.char_indices().last() {
        Some((i, c)) if c.is_ascii_alphabetic() => {
            let scale = match c {
                's' => 1.0,
                'm' => 60.0,
                'h' => 3600.0,
                'd' => 86_400.0,
                'w' => 604_800.0,
                _ => return Err(format!("unknown unit '{c}' (expected s, m, h, d or w)")),
            };
            (&s[..i], scale)
        }
        _ => (s, 1.0),
    };
    let value: f64 = num
        .parse()
        .map_err(|_| format!("'{s}' is not a duration"))?;
    let secs = value * scale;
    if !secs.is_finite() || secs <= 0.0 {
        return Err(format!("'{s}' must be a positive, finite duration"));
    }
    Ok(secs)
}
