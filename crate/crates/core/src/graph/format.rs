use super::{DagInstance, InstanceSpec, TypeSpec};
use crate::rational::{format_rational, parse_rational};
use crate::textio::{self, ParseError, Section};
use std::fmt::Write;

pub(crate) const GRAPH_SECTIONS: [&str; 4] = ["nodes", "sink", "edges", "types"];

pub(crate) fn parse_instance(text: &str) -> Result<InstanceSpec, ParseError> {
    let secs = textio::sections(text, &GRAPH_SECTIONS)?;
    parse_graph_sections(&secs, true)
}

/// Reads `[nodes]`, `[sink]`, `[edges]` and (optionally) `[types]` where
/// each type record is `id count neighbour...`.
pub(crate) fn parse_graph_sections(secs: &[Section<'_>], with_types: bool) -> Result<InstanceSpec, ParseError> {
    let mut spec = InstanceSpec::default();
    let last_line = secs.iter().flat_map(|s| s.records.last().map(|r| r.line).or(Some(s.line))).max().unwrap_or(0);

    let nodes = textio::find(secs, "nodes").ok_or_else(|| ParseError::new(last_line, "missing [nodes] section"))?;
    for r in &nodes.records {
        r.expect_len(2, Some(2))?;
        let cap = parse_rational(r.fields[1]).map_err(|e| r.err(e.to_string()))?;
        spec.nodes.push((r.fields[0].to_string(), cap));
    }

    let sink = textio::find(secs, "sink").ok_or_else(|| ParseError::new(last_line, "missing [sink] section"))?;
    match sink.records.as_slice() {
        [r] => {
            r.expect_len(1, Some(1))?;
            spec.sink = r.fields[0].to_string();
        }
        [] => return Err(ParseError::new(sink.line, "[sink] needs exactly one id")),
        [_, r, ..] => return Err(r.err("[sink] needs exactly one id")),
    }

    if let Some(edges) = textio::find(secs, "edges") {
        for r in &edges.records {
            r.expect_len(2, Some(2))?;
            spec.edges.push((r.fields[0].to_string(), r.fields[1].to_string()));
        }
    }

    if with_types {
        if let Some(types) = textio::find(secs, "types") {
            for r in &types.records {
                r.expect_len(2, None)?;
                let count = parse_rational(r.fields[1]).map_err(|e| r.err(e.to_string()))?;
                spec.types.push(TypeSpec {
                    id: r.fields[0].to_string(),
                    count,
                    neighbors: r.fields[2..].iter().map(|s| s.to_string()).collect(),
                });
            }
        }
    }
    Ok(spec)
}

pub(crate) fn write_graph_sections(out: &mut String, inst: &DagInstance) {
    let spec = inst.to_spec();
    out.push_str("[nodes]\n");
    for (id, c) in &spec.nodes {
        let _ = writeln!(out, "{id} {}", format_rational(c));
    }
    let _ = writeln!(out, "\n[sink]\n{}\n\n[edges]", spec.sink);
    for (u, v) in &spec.edges {
        let _ = writeln!(out, "{u} {v}");
    }
}

/// Serializes an instance in the text format accepted by
/// `InstanceSpec::from_str`.
pub fn write_instance(inst: &DagInstance) -> String {
    let mut out = String::from("# propflow instance\n");
    write_graph_sections(&mut out, inst);
    out.push_str("\n[types]\n");
    for t in inst.types() {
        let _ = write!(out, "{} {}", t.id, format_rational(&t.count));
        for &nb in &t.neighbors {
            let _ = write!(out, " {}", inst.name(nb));
        }
        out.push('\n');
    }
    out
}
