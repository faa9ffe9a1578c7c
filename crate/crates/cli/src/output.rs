//! Rendering of command results as JSON, CSV or plain text.
//!
//! A result is a tree of named values. JSON keeps the nesting; CSV and
//! text flatten names with `.`. Numbers are always exact strings.

use std::io::{self, Write};

use clap::ValueEnum;
use cyclic_potts::{MultiPoly, RationalFunction};
use num_rational::BigRational;
use serde_json::{json, Map, Value as Json};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug)]
pub enum Value {
    Poly(MultiPoly),
    Rational(RationalFunction),
    Number(BigRational),
    Text(String),
    Flag(bool),
    Count(u128),
    Group(Vec<(String, Value)>),
}

impl Value {
    fn to_json(&self) -> Json {
        match self {
            Value::Poly(p) => serde_json::to_value(p.to_json_terms()).expect("terms serialize"),
            Value::Rational(r) => r.to_json(),
            Value::Number(x) => json!(x.to_string()),
            Value::Text(s) => json!(s),
            Value::Flag(b) => json!(b),
            Value::Count(n) => json!(n.to_string()),
            Value::Group(items) => {
                let mut m = Map::new();
                for (k, v) in items {
                    m.insert(k.clone(), v.to_json());
                }
                Json::Object(m)
            }
        }
    }

    fn flatten<'a>(&'a self, prefix: &str, out: &mut Vec<(String, &'a Value)>) {
        match self {
            Value::Group(items) => {
                for (k, v) in items {
                    let name = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    v.flatten(&name, out);
                }
            }
            _ => out.push((prefix.to_string(), self)),
        }
    }
}

fn poly_rows(name: &str, p: &MultiPoly, rows: &mut Vec<[String; 5]>) {
    for t in p.to_json_terms() {
        rows.push([
            name.to_string(),
            t.q.to_string(),
            t.v.to_string(),
            t.q0.to_string(),
            t.coeff,
        ]);
    }
}

pub fn render(value: &Value, format: Format, out: &mut impl Write) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &value.to_json())?;
            writeln!(out)
        }
        Format::Text => {
            let mut flat = Vec::new();
            value.flatten("", &mut flat);
            for (name, v) in flat {
                let shown = match v {
                    Value::Poly(p) => p.to_string(),
                    Value::Rational(r) => r.to_string(),
                    Value::Number(x) => x.to_string(),
                    Value::Text(s) => s.clone(),
                    Value::Flag(b) => b.to_string(),
                    Value::Count(n) => n.to_string(),
                    Value::Group(_) => unreachable!("groups are flattened"),
                };
                writeln!(out, "{name} = {shown}")?;
            }
            Ok(())
        }
        Format::Csv => {
            let mut flat = Vec::new();
            value.flatten("", &mut flat);
            let mut rows = Vec::new();
            for (name, v) in flat {
                match v {
                    Value::Poly(p) => poly_rows(&name, p, &mut rows),
                    Value::Rational(r) => {
                        poly_rows(&format!("{name}.num"), r.num(), &mut rows);
                        poly_rows(&format!("{name}.den"), r.den(), &mut rows);
                    }
                    Value::Number(x) => {
                        poly_rows(&name, &MultiPoly::constant(x.clone()), &mut rows)
                    }
                    Value::Count(n) => {
                        rows.push([name, "0".into(), "0".into(), "0".into(), n.to_string()])
                    }
                    Value::Text(s) => {
                        rows.push([name, String::new(), String::new(), String::new(), s.clone()])
                    }
                    Value::Flag(b) => rows.push([
                        name,
                        String::new(),
                        String::new(),
                        String::new(),
                        b.to_string(),
                    ]),
                    Value::Group(_) => unreachable!("groups are flattened"),
                }
            }
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["name", "Q", "v", "Q0", "coeff"])?;
            for r in rows {
                w.write_record(&r)?;
            }
            w.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(v: &Value, f: Format) -> String {
        let mut buf = Vec::new();
        render(v, f, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn csv_has_one_row_per_monomial() {
        let p = &MultiPoly::q() + &MultiPoly::v();
        let v = Value::Group(vec![("K_1,1".into(), Value::Poly(p))]);
        assert_eq!(
            show(&v, Format::Csv),
            "name,Q,v,Q0,coeff\n\"K_1,1\",0,1,0,1\n\"K_1,1\",1,0,0,1\n"
        );
    }

    #[test]
    fn text_flattens_groups() {
        let v = Value::Group(vec![(
            "a".into(),
            Value::Group(vec![(
                "b".into(),
                Value::Number(BigRational::new(1.into(), 2.into())),
            )]),
        )]);
        assert_eq!(show(&v, Format::Text), "a.b = 1/2\n");
        assert_eq!(
            show(&v, Format::Json),
            "{\n  \"a\": {\n    \"b\": \"1/2\"\n  }\n}\n"
        );
    }
}
