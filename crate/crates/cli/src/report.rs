//! Report assembly: human-readable text or one `key=value` record per line.

use num::{BigInt, Integer, Signed};
use threefold_core::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Records,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Entry {
    Field { key: String, value: String },
    /// Human-only text; any number in it must also appear in some field.
    Text(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<Entry>,
    /// Human rendering prints fields as `# key: value` so the text stays parseable.
    commented: bool,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn commented() -> Self {
        Self { entries: Vec::new(), commented: true }
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push(Entry::Field {
            key: key.into(),
            value: value.to_string(),
        });
        self
    }

    pub fn text(&mut self, text: impl Into<String>) -> &mut Self {
        self.entries.push(Entry::Text(text.into()));
        self
    }

    /// Value of the first field named `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find_map(|e| match e {
            Entry::Field { key: k, value } if k == key => Some(value.as_str()),
            _ => None,
        })
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for e in &self.entries {
            match (e, format) {
                (Entry::Field { key, value }, Format::Human) => {
                    let hash = if self.commented { "# " } else { "" };
                    out.push_str(&format!("{hash}{key}: {value}\n"));
                }
                (Entry::Field { key, value }, Format::Records) => {
                    out.push_str(&format!("{key}={value}\n"));
                }
                (Entry::Text(t), Format::Human) => {
                    out.push_str(t);
                    if !t.ends_with('\n') {
                        out.push('\n');
                    }
                }
                (Entry::Text(_), Format::Records) => {}
            }
        }
        out
    }
}

fn scaled(value: &Q, digits: u32) -> (BigInt, BigInt) {
    let scale = BigInt::from(10u32).pow(digits);
    let num = value.numer() * &scale;
    let (q, r) = num.div_mod_floor(value.denom());
    (q, r)
}

fn decimal(units: &BigInt, digits: u32) -> String {
    let negative = units.is_negative();
    let s = units.abs().to_string();
    let d = digits as usize;
    let s = if s.len() <= d { format!("{}{s}", "0".repeat(d + 1 - s.len())) } else { s };
    let (int, frac) = s.split_at(s.len() - d);
    let sign = if negative { "-" } else { "" };
    if d == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Largest decimal with `digits` places not above `value`.
pub fn decimal_floor(value: &Q, digits: u32) -> String {
    decimal(&scaled(value, digits).0, digits)
}

/// Smallest decimal with `digits` places not below `value`.
pub fn decimal_ceil(value: &Q, digits: u32) -> String {
    let (q, r) = scaled(value, digits);
    let q = if r == BigInt::from(0) { q } else { q + 1 };
    decimal(&q, digits)
}

/// Outward-rounded decimal interval.
pub fn interval(lower: &Q, upper: &Q, digits: u32) -> (String, String) {
    (decimal_floor(lower, digits), decimal_ceil(upper, digits))
}
