//! Grid specifications of the form `min:max:count[:lin|:log]`.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn parse(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() < 3 || parts.len() > 4 {
            return Err(format!(
                "grid spec must be min:max:count[:lin|:log], got {s:?}"
            ));
        }
        let min: f64 = parts[0]
            .parse()
            .map_err(|_| format!("bad grid minimum {:?}", parts[0]))?;
        let max: f64 = parts[1]
            .parse()
            .map_err(|_| format!("bad grid maximum {:?}", parts[1]))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| format!("bad grid count {:?}", parts[2]))?;
        let log = match parts.get(3) {
            None | Some(&"lin") | Some(&"linear") => false,
            Some(&"log") => true,
            Some(other) => return Err(format!("grid spacing must be lin or log, got {other:?}")),
        };
        if !min.is_finite() || !max.is_finite() {
            return Err("grid endpoints must be finite".to_string());
        }
        if max < min {
            return Err(format!("grid maximum {max} below minimum {min}"));
        }
        if count == 0 {
            return Err("grid count must be at least 1".to_string());
        }
        if log && min <= 0.0 {
            return Err("log spacing requires a positive minimum".to_string());
        }
        Ok(Self {
            min,
            max,
            count,
            log,
        })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let n = self.count as f64 - 1.0;
        (0..self.count)
            .map(|i| {
                let frac = i as f64 / n;
                if self.log {
                    (self.min.ln() + (self.max.ln() - self.min.ln()) * frac).exp()
                } else {
                    self.min + (self.max - self.min) * frac
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_expand() {
        let g = GridSpec::parse("0:2:5").unwrap();
        assert_eq!(g.points(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);

        let single = GridSpec::parse("1:1:1").unwrap();
        assert_eq!(single.points(), vec![1.0]);

        let lg = GridSpec::parse("0.01:100:5:log").unwrap();
        let pts = lg.points();
        assert_eq!(pts.len(), 5);
        assert!((pts[0] - 0.01).abs() < 1e-15);
        assert!((pts[2] - 1.0).abs() < 1e-12);
        assert!((pts[4] - 100.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_malformed() {
        assert!(GridSpec::parse("1:2").is_err());
        assert!(GridSpec::parse("2:1:5").is_err());
        assert!(GridSpec::parse("1:2:0").is_err());
        assert!(GridSpec::parse("0:2:5:log").is_err());
        assert!(GridSpec::parse("a:2:5").is_err());
        assert!(GridSpec::parse("1:2:5:cubic").is_err());
    }
}
