//! Numeric formatting and CSV emission.
//!
//! CSV dialect: comma separator, `.` decimal point, `\n` line endings,
//! header always present. Every float is printed with 17 significant
//! digits so the text round-trips to the exact double.

/// 17-significant-digit scientific rendering, round-trip exact for f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// A CSV table with a fixed header.
pub fn csv_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// The same table as a JSON array of objects keyed by the header.
pub fn json_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let objects: Vec<serde_json::Value> = rows
        .iter()
        .map(|row| {
            let map: serde_json::Map<String, serde_json::Value> = header
                .iter()
                .zip(row)
                .map(|(k, v)| ((*k).to_string(), serde_json::json!(v)))
                .collect();
            serde_json::Value::Object(map)
        })
        .collect();
    serde_json::to_string_pretty(&objects).expect("numeric table serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_round_trips() {
        for &v in &[
            0.0,
            1.0,
            -1.5,
            std::f64::consts::PI,
            1e-300,
            6.02e23,
            1.6 / std::f64::consts::PI,
        ] {
            let s = fmt_f64(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v} -> {s} -> {back}");
        }
    }

    #[test]
    fn csv_shape() {
        let t = csv_table(&["y", "p"], &[vec![1.0, 0.5]]);
        let mut lines = t.lines();
        assert_eq!(lines.next(), Some("y,p"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("1.0000000000000000e0,"));
        assert_eq!(lines.next(), None);
        assert!(t.ends_with('\n'));
    }

    #[test]
    fn json_shape() {
        let t = json_table(&["q", "quantile"], &[vec![0.5, 1.25]]);
        let v: serde_json::Value = serde_json::from_str(&t).unwrap();
        assert_eq!(v[0]["q"], 0.5);
        assert_eq!(v[0]["quantile"], 1.25);
    }
}
