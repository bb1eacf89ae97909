//! Tabular output with a provenance header, as CSV or JSON.

use serde_json::{json, Map, Value as Json};

use crate::params::RunConfig;

pub const GENERATOR: &str = concat!("monopole ", env!("CARGO_PKG_VERSION"));

/// Rounds to 12 significant digits and prints the shortest decimal that
/// reads back to the rounded value.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round12(x);
    if r == 0.0 {
        return "0".into();
    }
    let exp = r.abs().log10().floor() as i32;
    if (-5..16).contains(&exp) {
        let s = format!("{r}");
        s.strip_suffix(".0").map(str::to_string).unwrap_or(s)
    } else {
        format!("{r:e}")
    }
}

fn round12(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Note {
    Number(f64),
    Text(String),
}

impl Note {
    fn render(&self) -> String {
        match self {
            Note::Number(x) => format_number(*x),
            Note::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Note::Number(x) => number_json(*x),
            Note::Text(s) => Json::String(s.clone()),
        }
    }
}

fn number_json(x: f64) -> Json {
    serde_json::Number::from_f64(round12(x)).map_or(Json::Null, Json::Number)
}

/// Columns of numbers plus named scalar results.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DataSet {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub results: Vec<(String, Note)>,
}

impl DataSet {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: impl Into<String>, value: f64) {
        self.results.push((key.into(), Note::Number(value)));
    }

    pub fn note_text(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.results.push((key.into(), Note::Text(value.into())));
    }

    pub fn result(&self, key: &str) -> Option<&Note> {
        self.results.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// CSV with `# key = value` provenance lines and `#: key = value`
    /// result lines ahead of the column names.
    pub fn to_csv(&self, run: &RunConfig) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {GENERATOR}\n# command = {}\n", run.command));
        for (k, v) in &run.values {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        for (k, v) in &self.results {
            out.push_str(&format!("#: {k} = {}\n", v.render()));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, run: &RunConfig) -> String {
        let parameters: Map<String, Json> = run
            .values
            .iter()
            .map(|(k, v)| {
                let j = match v {
                    crate::params::Value::Real(x) => number_json(*x),
                    crate::params::Value::Int(i) => json!(i),
                    crate::params::Value::Count(c) => json!(c),
                    crate::params::Value::Text(s) => json!(s),
                    crate::params::Value::Switch(b) => json!(b),
                };
                (k.to_string(), j)
            })
            .collect();
        let results: Map<String, Json> = self
            .results
            .iter()
            .map(|(k, v)| (k.clone(), v.to_json()))
            .collect();
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|r| Json::Array(r.iter().map(|&x| number_json(x)).collect()))
            .collect();
        let doc = json!({
            "generator": GENERATOR,
            "command": run.command.name(),
            "parameters": parameters,
            "results": results,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s =
            serde_json::to_string_pretty(&doc).expect("JSON values are always serialisable");
        s.push('\n');
        s
    }
}
