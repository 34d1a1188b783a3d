//! Shared output records. Every command produces one [`Report`]; the CSV and JSON writers
//! render the same numbers.

use std::fmt::Write as _;
use std::io::Write;

use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub name: String,
    pub value: f64,
    pub err: f64,
    /// Which computation produced the number, e.g. `L2:K_integral`.
    pub route: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub route: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub entries: Vec<Entry>,
    pub table: Option<Table>,
    /// (name, passed)
    pub checks: Vec<(String, bool)>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, value: f64, err: f64, route: impl Into<String>) {
        self.entries.push(Entry {
            name: name.into(),
            value,
            err,
            route: route.into(),
        });
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push((name.into(), passed));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }

    /// Entries, checks (as 1/0 with route `assertion`), then table cells as `column[i]`.
    pub fn flat(&self) -> Vec<Entry> {
        let mut out = self.entries.clone();
        for (name, ok) in &self.checks {
            out.push(Entry {
                name: format!("check:{name}"),
                value: if *ok { 1.0 } else { 0.0 },
                err: 0.0,
                route: "assertion".into(),
            });
        }
        if let Some(t) = &self.table {
            for (i, row) in t.rows.iter().enumerate() {
                for (c, v) in t.columns.iter().zip(row) {
                    out.push(Entry {
                        name: format!("{c}[{i}]"),
                        value: *v,
                        err: 0.0,
                        route: t.route.clone(),
                    });
                }
            }
        }
        out
    }
}

/// Plain decimal, switching to scientific notation for |x| < 1e−3 and very large values.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = x.abs();
    if a != 0.0 && !(1e-3..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn json_num(x: f64) -> Value {
    match serde_json::Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None => Value::String(fmt_num(x)),
    }
}

pub fn to_json(r: &Report) -> String {
    let mut map = Map::new();
    for e in r.flat() {
        let mut obj = Map::new();
        obj.insert("value".into(), json_num(e.value));
        obj.insert("err".into(), json_num(e.err));
        obj.insert("route".into(), Value::String(e.route));
        map.insert(e.name, Value::Object(obj));
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("json of plain values");
    s.push('\n');
    s
}

/// `name,value,err,route` rows for entries and checks.
pub fn records_csv(r: &Report) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["name", "value", "err", "route"])?;
    for e in r.flat().into_iter().take(r.entries.len() + r.checks.len()) {
        w.write_record([e.name, fmt_num(e.value), fmt_num(e.err), e.route])?;
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf8 csv"))
}

pub fn table_csv(t: &Table) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&t.columns)?;
    for row in &t.rows {
        w.write_record(row.iter().map(|v| fmt_num(*v)))?;
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf8 csv"))
}

pub fn summary_line(r: &Report) -> String {
    let mut s = String::new();
    for (name, ok) in &r.checks {
        let _ = write!(s, "{name}: {}; ", if *ok { "ok" } else { "FAILED" });
    }
    s.trim_end_matches("; ").to_string()
}

pub fn write_all(out: &mut dyn Write, text: &str) -> std::io::Result<()> {
    out.write_all(text.as_bytes())?;
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(0.25), "0.25");
        assert_eq!(fmt_num(2.5e-4), "2.5e-4");
        assert_eq!(fmt_num(-1e-7), "-1e-7");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        for x in [1.0 / 3.0, 2.5e-4, 123.456, -7e-12] {
            assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_and_csv_agree() {
        let mut r = Report::default();
        r.push("L1", 1.0 / 3.0, 1e-12, "L1:closed_form");
        r.check("positive", true);
        r.table = Some(Table {
            columns: vec!["t".into(), "K".into()],
            rows: vec![vec![0.0, 2e-5], vec![1.0, f64::INFINITY]],
            route: "K:layer".into(),
        });
        let j: Value = serde_json::from_str(&to_json(&r)).unwrap();
        assert_eq!(j["L1"]["value"].as_f64().unwrap(), 1.0 / 3.0);
        assert_eq!(j["check:positive"]["value"].as_f64().unwrap(), 1.0);
        assert_eq!(j["K[0]"]["value"].as_f64().unwrap(), 2e-5);
        assert_eq!(j["K[1]"]["value"].as_str().unwrap(), "inf");
        let c = records_csv(&r).unwrap();
        assert!(c.starts_with("name,value,err,route\n"));
        assert!(c.contains("L1,0.3333333333333333,1e-12,L1:closed_form"));
        let t = table_csv(r.table.as_ref().unwrap()).unwrap();
        assert_eq!(t, "t,K\n0,2e-5\n1,inf\n");
    }
}
