use clap::ValueEnum;
use nilmult_core::exactlin::{SparseVec, Subspace};
use nilmult_core::format::{vector_strings, SCHEMA};
use nilmult_core::{Error, LeibnizAlgebra, Rational};
use serde_json::{json, Value};

use crate::Global;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Prints `text` or the JSON report tagged with the schema and command.
pub fn emit(g: &Global, command: &str, text: &str, mut body: Value) {
    match g.format {
        Format::Text => println!("{}", text.trim_end()),
        Format::Json => {
            if let Value::Object(map) = &mut body {
                map.insert("schema".into(), json!(SCHEMA));
                map.insert("command".into(), json!(command));
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&body).expect("reports serialize")
            );
        }
    }
}

pub fn report_error(g: &Global, e: &Error) {
    eprintln!("error [{}]: {e}", e.code());
    if g.format == Format::Json {
        let body =
            json!({ "schema": SCHEMA, "error": { "code": e.code(), "message": e.to_string() } });
        println!(
            "{}",
            serde_json::to_string_pretty(&body).expect("reports serialize")
        );
    }
}

pub fn vector_json(v: &SparseVec<Rational>, dim: usize) -> Value {
    json!(vector_strings(v, dim))
}

pub fn subspace_json(s: &Subspace<Rational>) -> Value {
    json!({
        "dim": s.dim(),
        "basis": s.basis().iter().map(|v| vector_json(v, s.ambient())).collect::<Vec<_>>(),
    })
}

pub fn subspace_text(a: &LeibnizAlgebra, s: &Subspace<Rational>) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = s.basis().iter().map(|v| a.format_vector(v)).collect();
    format!("span({})", parts.join(", "))
}

pub fn table_text(a: &LeibnizAlgebra) -> String {
    let mut s = format!("{} (dim {})\n", a.name(), a.dim());
    if a.product_count() == 0 {
        s.push_str("  all products zero\n");
    }
    for (i, j, v) in a.products() {
        s.push_str(&format!(
            "  [{}, {}] = {}\n",
            a.labels()[i],
            a.labels()[j],
            a.format_vector(v)
        ));
    }
    s
}
