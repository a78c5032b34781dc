use std::fmt::Write as _;

/// 17 significant digits in scientific notation, so values round-trip.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// One CSV file: header with unit annotations, then numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(file: impl Into<String>, headers: &[&str]) -> Self {
        Self {
            file: file.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_headers(file: impl Into<String>, headers: Vec<String>) -> Self {
        Self {
            file: file.into(),
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    /// Comma separated, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut s = self.headers.join(",");
        s.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{}", format_value(*v));
            }
            s.push('\n');
        }
        s
    }

    /// Column by header name.
    pub fn column(&self, header: &str) -> Option<Vec<f64>> {
        let i = self.headers.iter().position(|h| h == header)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}
