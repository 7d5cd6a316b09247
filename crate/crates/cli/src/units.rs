/// Length in meters from `3e-7`, `300nm`, `0.3 um`, `0.3µm`, `1mm` or `2m`.
pub fn parse_length(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let split = s
        .find(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E' || c == 'µ')
        .unwrap_or(s.len());
    let (num, unit) = s.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a length (expected e.g. 3e-7, 300nm, 0.3um)"))?;
    let divisor = match unit.trim() {
        "" | "m" => 1.0,
        "mm" => 1e3,
        "um" | "µm" => 1e6,
        "nm" => 1e9,
        other => return Err(format!("unknown length unit `{other}` (use m, mm, um, nm)")),
    };
    let v = value / divisor;
    if !(v > 0.0 && v.is_finite()) {
        return Err(format!("length must be positive, got `{s}`"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffixes() {
        assert_eq!(parse_length("3e-7").unwrap(), 3e-7);
        assert!(parse_length("300nm").unwrap() == 3e-7);
        assert!((parse_length("0.3 um").unwrap() - 3e-7).abs() < 1e-22);
        assert!((parse_length("0.3µm").unwrap() - 3e-7).abs() < 1e-22);
        assert_eq!(parse_length("1mm").unwrap(), 1e-3);
        assert_eq!(parse_length("2m").unwrap(), 2.0);
        assert!(parse_length("3 furlongs").is_err());
        assert!(parse_length("-1nm").is_err());
        assert!(parse_length("nm").is_err());
    }
}
