//! Canonical text of a script, as written by `svlab fmt`. Comments inside
//! attribute blocks are not kept.

use std::fmt::Write;

use svlab_core::rational;

use crate::ast::*;

pub fn print(script: &Script) -> String {
    let mut out = String::new();
    let mut blank = true;
    for s in &script.statements {
        if s.stmt == Stmt::Blank {
            if !blank {
                out.push('\n');
            }
            blank = true;
            continue;
        }
        blank = false;
        out.push_str(&statement(&s.stmt));
        if let Some(c) = &s.trailing {
            let _ = write!(out, "  # {c}");
        }
        out.push('\n');
    }
    while out.ends_with("\n\n") {
        out.pop();
    }
    out
}

pub fn statement(s: &Stmt) -> String {
    match s {
        Stmt::Manifold { name, attrs } => {
            if attrs.is_empty() {
                return format!("manifold {name} {{}}");
            }
            let mut out = format!("manifold {name} {{\n");
            for a in attrs {
                let _ = writeln!(out, "  {}: {}", a.key, value(&a.value));
            }
            out.push('}');
            out
        }
        Stmt::Let { name, expr: e } => format!("let {name} = {}", expr(e)),
        Stmt::Certify { name, stable: None } => format!("certify {name}"),
        Stmt::Certify {
            name,
            stable: Some(Stable { cocycle, degrees }),
        } => format!(
            "certify {name} stable({cocycle}, [{}])",
            join(degrees.iter().map(u64::to_string))
        ),
        Stmt::Assert(a) => format!(
            "assert {}({}) {} {}",
            a.func,
            a.arg,
            a.op.symbol(),
            expected(&a.expected)
        ),
        Stmt::Query { name, invariant } => format!("query {name}.{invariant}"),
        Stmt::Cobordism { name, def } => match def {
            CobDef::Explicit {
                body,
                incoming,
                outgoing,
            } => format!(
                "cobordism {name} = {body} [{}] -> [{}]",
                join(incoming.iter().map(usize::to_string)),
                join(outgoing.iter().map(usize::to_string))
            ),
            CobDef::Word(w) => format!("cobordism {name} = {}", word(w)),
        },
        Stmt::Comment(c) if c.is_empty() => "#".into(),
        Stmt::Comment(c) => format!("# {c}"),
        Stmt::Blank => String::new(),
    }
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(", ")
}

fn attrs(a: &[Attr]) -> String {
    if a.is_empty() {
        return "{}".into();
    }
    format!(
        "{{ {} }}",
        join(a.iter().map(|a| format!("{}: {}", a.key, value(&a.value))))
    )
}

pub fn value(v: &Value) -> String {
    match v {
        Value::Bool(b) => b.to_string(),
        Value::Unknown => "unknown".into(),
        Value::Int(n) => n.to_string(),
        Value::Ident(s) => s.clone(),
        Value::List(xs) => format!("[{}]", join(xs.iter().map(value))),
        Value::Block(a) => attrs(a),
        Value::Tagged(name, a) => format!("{name} {}", attrs(a)),
    }
}

/// Canonical text of an expression; nested operands are registered under
/// this name.
pub fn expr(e: &Expr) -> String {
    match e {
        Expr::Name(n) => n.clone(),
        Expr::Indexed(n, k) => format!("{n}[{k}]"),
        Expr::Double(a) => format!("double({})", expr(a)),
        Expr::Reverse(a) => format!("reverse({})", expr(a)),
        Expr::ConnSum(a, b) => format!("connsum({}, {})", expr(a), expr(b)),
        Expr::Product(a, b) => format!("product({}, {})", expr(a), expr(b)),
        Expr::Disjoint(a, b) => format!("disjoint({}, {})", expr(a), expr(b)),
        Expr::Glue {
            left,
            left_component,
            right,
            right_component,
            map,
        } => {
            let mut s = format!(
                "glue({}.b{left_component}, {}.b{right_component}",
                expr(left),
                expr(right)
            );
            if let Some(m) = map {
                let _ = write!(s, ", [{}]", join(m.iter().map(|(u, v)| format!("({u}, {v})"))));
            }
            s.push(')');
            s
        }
        Expr::Cover { base, cocycle, degree } => format!("cover({}, {cocycle}, {degree})", expr(base)),
    }
}

pub fn expected(e: &Expected) -> String {
    match e {
        Expected::Number(x) => rational::display(x),
        Expected::Inf => "inf".into(),
        Expected::Interval { lo, strict, hi } => format!(
            "{}{}, {}]",
            if *strict { "(" } else { "[" },
            rational::display(lo),
            hi.as_ref().map_or("inf".into(), rational::display)
        ),
        Expected::Tuple(xs) => format!("({})", join(xs.iter().map(rational::display))),
        Expected::Ident(s) if s.chars().all(|c| c.is_alphanumeric() || c == '_') => s.clone(),
        Expected::Ident(s) => format!("\"{s}\""),
    }
}

pub fn word(w: &Word) -> String {
    match w {
        Word::Name(n) => n.clone(),
        Word::Compose(a, b) => {
            let right = match **b {
                Word::Compose(..) => format!("({})", word(b)),
                _ => word(b),
            };
            format!("{} ; {right}", word(a))
        }
        Word::Tensor(a, b) => {
            let left = match **a {
                Word::Compose(..) => format!("({})", word(a)),
                _ => word(a),
            };
            let right = match **b {
                Word::Name(_) => word(b),
                _ => format!("({})", word(b)),
            };
            format!("{left} * {right}")
        }
    }
}
