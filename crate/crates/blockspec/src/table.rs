//! CSV artifacts.
//!
//! Every table starts with two `#` comment lines carrying the library
//! version and the run configuration as compact JSON, followed by the header
//! row. Floats are written in scientific notation with 17 significant digits,
//! which round-trips every finite `f64` exactly.

use std::io::Write;

use serde_json::Value;

use crate::error::Result;

/// `x` with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A header and rows of already formatted cells, plus optional trailing
/// comment lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub footer: Vec<String>,
}

impl Table {
    pub fn new<I, S>(header: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Write the provenance lines, the header, the rows and the footer.
    pub fn write<W: Write>(&self, mut out: W, version: &str, config: &Value) -> Result<()> {
        writeln!(out, "# blockspec {version}").map_err(|e| crate::Error::io("output", e))?;
        writeln!(out, "# config: {config}").map_err(|e| crate::Error::io("output", e))?;
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush().map_err(|e| crate::Error::io("output", e))?;
        drop(w);
        for line in &self.footer {
            writeln!(out, "# {line}").map_err(|e| crate::Error::io("output", e))?;
        }
        Ok(())
    }

    pub fn to_bytes(&self, version: &str, config: &Value) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.write(&mut buf, version, config)?;
        Ok(buf)
    }
}

/// Numeric column of a CSV file, skipping `#` lines. With `column = None` the
/// last column is used.
pub fn read_column(text: &str, column: Option<&str>) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    let index = match column {
        Some(name) => header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| crate::Error::Format(format!("no column named {name:?}")))?,
        None => header
            .len()
            .checked_sub(1)
            .ok_or_else(|| crate::Error::Format("CSV has no columns".into()))?,
    };
    let mut values = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let cell = record.get(index).unwrap_or("");
        let x: f64 = cell.trim().parse().map_err(|_| {
            crate::Error::Format(format!("row {}: {cell:?} is not a number", line + 1))
        })?;
        values.push(x);
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(fmt_float(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_float(2.0), "2.0000000000000000e0");
        for x in [std::f64::consts::PI, 1e-300, -7.252504447492721, f64::MAX] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn layout() {
        let mut t = Table::new(["m", "E_m"]);
        t.push(vec!["0".into(), fmt_float(1.0)]);
        t.footer.push("done".into());
        let text =
            String::from_utf8(t.to_bytes("9.9.9", &serde_json::json!({"k": 1})).unwrap()).unwrap();
        assert_eq!(
            text,
            "# blockspec 9.9.9\n# config: {\"k\":1}\nm,E_m\n0,1.0000000000000000e0\n# done\n"
        );
        assert_eq!(read_column(&text, Some("E_m")).unwrap(), vec![1.0]);
        assert_eq!(read_column(&text, None).unwrap(), vec![1.0]);
        assert!(read_column(&text, Some("x")).is_err());
    }
}
