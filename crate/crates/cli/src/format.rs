//! Line-oriented instance and advice files.
//!
//! ```text
//! p ssc <n> <stars>     s <source> <fan> <sink>...
//! p mscs <n> <arcs>     a <u> <v>
//! p dpa <n> <edges>     e <u> <v> <cost>
//! p 2ecs <n> <edges>    e <u> <v>
//! ```
//!
//! Ids are 1-based in files and 0-based in memory. `#` starts a comment.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use cutdual::{
    Digraph, DpaEdge, DpaInstance, Instance, MscsInstance, Multigraph, SscInstance, Star,
    TwoEcsInstance,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    /// The file is well formed but the instance has no feasible solution.
    #[error("infeasible instance: {0}")]
    Infeasible(cutdual::Error),
}

impl FormatError {
    pub fn exit_code(&self) -> u8 {
        match self {
            FormatError::Syntax { .. } => 2,
            FormatError::Infeasible(_) => 1,
        }
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with comments stripped, with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let fields: Vec<_> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn number(line: usize, field: &str, what: &str) -> Result<usize, FormatError> {
    field.parse().map_err(|_| {
        syntax(
            line,
            format!("{what} {field:?} is not a non-negative integer"),
        )
    })
}

fn vertex(line: usize, field: &str, n: usize) -> Result<usize, FormatError> {
    let v = number(line, field, "vertex")?;
    if v == 0 || v > n {
        return Err(syntax(line, format!("vertex {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

fn whole_instance_error(header: usize, e: cutdual::Error) -> FormatError {
    match e {
        cutdual::Error::NotStronglyConnected | cutdual::Error::NotTwoEdgeConnected => {
            FormatError::Infeasible(e)
        }
        other => syntax(header, other.to_string()),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| syntax(1, "missing `p` header line"))?;
    if header.len() != 4 || header[0] != "p" {
        return Err(syntax(hline, "header must be `p <kind> <n> <count>`"));
    }
    let kind = header[1];
    let n = number(hline, header[2], "vertex count")?;
    let count = number(hline, header[3], "item count")?;
    if n == 0 {
        return Err(syntax(hline, "vertex count must be positive"));
    }
    let (tag, arity) = match kind {
        "ssc" => ("s", None),
        "mscs" => ("a", Some(2)),
        "dpa" => ("e", Some(3)),
        "2ecs" => ("e", Some(2)),
        other => return Err(syntax(hline, format!("unknown kind {other:?}"))),
    };
    let mut stars = Vec::new();
    let mut pairs = Vec::new();
    let mut dpa_edges = Vec::new();
    let mut seen = BTreeSet::new();
    let mut items = 0;
    let mut last = hline;
    for (line, fields) in lines {
        last = line;
        if fields[0] != tag {
            return Err(syntax(
                line,
                format!("expected a `{tag}` line in a {kind} file"),
            ));
        }
        items += 1;
        if items > count {
            return Err(syntax(
                line,
                format!("more than the {count} items announced in the header"),
            ));
        }
        let args = &fields[1..];
        if let Some(k) = arity {
            if args.len() != k {
                return Err(syntax(line, format!("expected {k} fields after `{tag}`")));
            }
        }
        match kind {
            "ssc" => {
                if args.len() < 2 {
                    return Err(syntax(line, "star needs a source and a fan size"));
                }
                let source = vertex(line, args[0], n)?;
                let fan = number(line, args[1], "fan")?;
                if fan == 0 {
                    return Err(syntax(line, "star has no sinks"));
                }
                if args.len() != 2 + fan {
                    return Err(syntax(
                        line,
                        format!("fan {fan} but {} sinks listed", args.len() - 2),
                    ));
                }
                let mut sinks = Vec::with_capacity(fan);
                for f in &args[2..] {
                    let v = vertex(line, f, n)?;
                    if v == source {
                        return Err(syntax(line, "star contains its own source"));
                    }
                    if sinks.contains(&v) {
                        return Err(syntax(line, format!("sink {} repeated", v + 1)));
                    }
                    sinks.push(v);
                }
                stars.push(Star::new(source, sinks));
            }
            _ => {
                let (u, v) = (vertex(line, args[0], n)?, vertex(line, args[1], n)?);
                if u == v {
                    return Err(syntax(line, "self-loop"));
                }
                if kind == "dpa" {
                    let cost = number(line, args[2], "cost")?;
                    if cost > 1 {
                        return Err(syntax(line, format!("cost {cost} is not 0 or 1")));
                    }
                    if !seen.insert((u.min(v), u.max(v))) {
                        return Err(syntax(line, "duplicate edge"));
                    }
                    dpa_edges.push(DpaEdge {
                        u,
                        v,
                        cost: cost as u8,
                    });
                } else {
                    pairs.push((u, v));
                }
            }
        }
    }
    if items != count {
        return Err(syntax(
            last,
            format!("header announces {count} items but {items} were given"),
        ));
    }
    let build = |r: cutdual::Result<Instance>| r.map_err(|e| whole_instance_error(hline, e));
    match kind {
        "ssc" => build(SscInstance::new(n, stars).map(Instance::Ssc)),
        "mscs" => build(
            Digraph::new(n, pairs)
                .and_then(MscsInstance::new)
                .map(Instance::Mscs),
        ),
        "dpa" => build(DpaInstance::new(n, dpa_edges).map(Instance::Dpa)),
        _ => build(
            Multigraph::new(n, pairs)
                .and_then(TwoEcsInstance::new)
                .map(Instance::TwoEcs),
        ),
    }
}

pub fn write_instance(instance: &Instance) -> String {
    let mut out = String::new();
    match instance {
        Instance::Ssc(s) => {
            writeln!(out, "p ssc {} {}", s.vertex_count(), s.stars().len()).unwrap();
            for f in s.stars() {
                write!(out, "s {} {}", f.source + 1, f.sinks.len()).unwrap();
                for v in &f.sinks {
                    write!(out, " {}", v + 1).unwrap();
                }
                out.push('\n');
            }
        }
        Instance::Mscs(g) => {
            let d = g.digraph();
            writeln!(out, "p mscs {} {}", d.vertex_count(), d.arcs().len()).unwrap();
            for &(u, v) in d.arcs() {
                writeln!(out, "a {} {}", u + 1, v + 1).unwrap();
            }
        }
        Instance::Dpa(d) => {
            writeln!(out, "p dpa {} {}", d.vertex_count(), d.edges().len()).unwrap();
            for e in d.edges() {
                writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, e.cost).unwrap();
            }
        }
        Instance::TwoEcs(t) => {
            let g = t.graph();
            writeln!(out, "p 2ecs {} {}", g.vertex_count(), g.edge_count()).unwrap();
            for &(u, v) in g.edges() {
                writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
            }
        }
    }
    out
}

/// Whitespace-separated non-negative integers; `#` starts a comment.
pub fn parse_advice(text: &str) -> Result<Vec<usize>, FormatError> {
    let mut out = Vec::new();
    for (line, fields) in content_lines(text) {
        for f in fields {
            out.push(number(line, f, "advice entry")?);
        }
    }
    Ok(out)
}

pub fn write_advice(script: &[usize]) -> String {
    let mut out = String::new();
    for chunk in script.chunks(20) {
        let row: Vec<_> = chunk.iter().map(usize::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_the_small_examples() {
        let i2 = parse_instance("p mscs 3 3\na 1 2\na 2 3\na 3 1\n").unwrap();
        assert!(
            matches!(i2, Instance::Mscs(ref g) if g.digraph().arcs() == [(0, 1), (1, 2), (2, 0)])
        );
        let i1 = parse_instance("# two vertices\np ssc 2 2\ns 1 1 2\ns 2 1 1 # back\n").unwrap();
        assert!(matches!(i1, Instance::Ssc(ref s) if s.stars().len() == 2));
        let pair = parse_instance("p 2ecs 2 2\ne 1 2\ne 1 2\n").unwrap();
        assert!(matches!(pair, Instance::TwoEcs(ref t) if t.graph().edge_count() == 2));
    }

    #[test]
    fn round_trips() {
        for text in [
            "p ssc 3 3\ns 1 2 2 3\ns 2 1 1\ns 3 1 1\n",
            "p mscs 2 2\na 1 2\na 2 1\n",
            "p dpa 3 2\ne 1 2 0\ne 2 3 1\n",
            "p 2ecs 3 3\ne 1 2\ne 2 3\ne 3 1\n",
        ] {
            assert_eq!(write_instance(&parse_instance(text).unwrap()), text);
        }
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let err = |t: &str| parse_instance(t).unwrap_err().to_string();
        assert_eq!(
            err("p mscs 3 3\na 1 2\n\na 2 4\na 3 1\n"),
            "line 4: vertex 4 out of range 1..=3"
        );
        assert_eq!(err("p mscs 2 1\na 1 1\n"), "line 2: self-loop");
        assert_eq!(
            err("p ssc 2 1\ns 1 2 2\n"),
            "line 2: fan 2 but 1 sinks listed"
        );
        assert_eq!(err("p dpa 2 1\ne 1 2 5\n"), "line 2: cost 5 is not 0 or 1");
        assert_eq!(
            err("p 2ecs 3 4\ne 1 2\ne 2 3\ne 3 1\n"),
            "line 4: header announces 4 items but 3 were given"
        );
        assert_eq!(err("q\n"), "line 1: header must be `p <kind> <n> <count>`");
        assert_eq!(err(""), "line 1: missing `p` header line");
    }

    #[test]
    fn infeasible_instances_are_separate() {
        let e = parse_instance("p mscs 2 1\na 1 2\n").unwrap_err();
        assert_eq!(e.exit_code(), 1);
        let e = parse_instance("p 2ecs 3 2\ne 1 2\ne 2 3\n").unwrap_err();
        assert_eq!(e.exit_code(), 1);
        assert_eq!(parse_instance("p mscs x 1\n").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn advice_files() {
        assert_eq!(
            parse_advice("# start\n3 1\n0 # then\n\n2").unwrap(),
            vec![3, 1, 0, 2]
        );
        assert!(parse_advice("1 -2").is_err());
        let long: Vec<_> = (0..45).collect();
        assert_eq!(parse_advice(&write_advice(&long)).unwrap(), long);
    }
}
