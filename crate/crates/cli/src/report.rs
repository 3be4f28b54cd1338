use compound_tin::power::UserPower;
use compound_tin::rational::render;
use compound_tin::{GdofTuple, Q};
use serde_json::{json, Value};

/// A command result in machine-readable and human-readable form.
pub struct Report {
    pub json: Value,
    pub text: String,
    /// A yes/no query answered "no".
    pub negative: bool,
}

pub fn q(v: &Q) -> Value {
    Value::String(render(v))
}

pub fn qs(values: &[Q]) -> Value {
    Value::Array(values.iter().map(q).collect())
}

pub fn tuple(d: &GdofTuple) -> Value {
    qs(d.values())
}

pub fn power(p: &UserPower) -> Value {
    Value::String(p.to_string())
}

pub fn powers(values: &[UserPower]) -> Value {
    Value::Array(values.iter().map(power).collect())
}

/// `(a, b, c)` with exact rendering.
pub fn paren<T: std::fmt::Display>(values: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = values.into_iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub fn circuit(labels: &[String], length: &Q) -> Value {
    json!({ "vertices": labels, "length": q(length) })
}
