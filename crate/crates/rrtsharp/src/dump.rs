//! Line-oriented graph dumps.
//!
//! ```text
//! # vertices
//! 0, 0.1, 0.1, 0, 0, -1, CONSISTENT_FINITE
//! 1, 0.2, 0.1, inf, 0.1, 0, INCONSISTENT_INF_G_FINITE_LMC
//! # edges
//! 0, 1
//! ```
//!
//! Vertex lines are `id, coords..., g, lmc, parent (-1 if none), category`.
//! Numbers use the shortest representation that parses back exactly.

use std::fmt::Write as _;

use rrtsharp_core::nngraph::VertexId;
use rrtsharp_core::planner::{GraphSnapshot, SnapshotVertex, VertexCategory};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct DumpError {
    pub line: usize,
    pub message: String,
}

pub fn write_dump(snapshot: &GraphSnapshot) -> String {
    let mut out = String::from("# vertices\n");
    for v in &snapshot.vertices {
        write!(out, "{}", v.id).unwrap();
        for c in &v.coords {
            write!(out, ", {c}").unwrap();
        }
        let parent = v.parent.map_or(-1, |p| p.0 as i64);
        writeln!(out, ", {}, {}, {parent}, {}", v.g, v.lmc, v.category).unwrap();
    }
    out.push_str("# edges\n");
    for (u, v) in &snapshot.edges {
        writeln!(out, "{u}, {v}").unwrap();
    }
    out
}

pub fn parse_dump(text: &str) -> Result<GraphSnapshot, DumpError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let fail = |line: usize, message: String| DumpError { line, message };
    match lines.next() {
        Some((_, "# vertices")) => {}
        other => return Err(fail(1, format!("expected `# vertices`, found {other:?}"))),
    }
    let mut snapshot = GraphSnapshot::default();
    let mut in_edges = false;
    for (n, line) in lines {
        if line == "# edges" && !in_edges {
            in_edges = true;
            continue;
        }
        let fields: Vec<&str> = line.split(", ").collect();
        if in_edges {
            let [u, v] = fields[..] else {
                return Err(fail(n, format!("edge line needs 2 fields, has {}", fields.len())));
            };
            let u = parse_id(u).map_err(|m| fail(n, m))?;
            let v = parse_id(v).map_err(|m| fail(n, m))?;
            if u >= v {
                return Err(fail(n, format!("edge {u}, {v} is not listed as u < v")));
            }
            snapshot.edges.push((u, v));
        } else {
            snapshot.vertices.push(parse_vertex(&fields).map_err(|m| fail(n, m))?);
        }
    }
    if !in_edges {
        return Err(fail(text.lines().count(), "missing `# edges` section".into()));
    }
    Ok(snapshot)
}

fn parse_id(s: &str) -> Result<VertexId, String> {
    s.parse().map(VertexId).map_err(|_| format!("bad vertex id `{s}`"))
}

fn parse_number(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if !x.is_nan() => Ok(x),
        _ => Err(format!("bad number `{s}`")),
    }
}

fn parse_vertex(fields: &[&str]) -> Result<SnapshotVertex, String> {
    // id, at least two coordinates, g, lmc, parent, category
    if fields.len() < 7 {
        return Err(format!("vertex line needs at least 7 fields, has {}", fields.len()));
    }
    let k = fields.len();
    let coords = fields[1..k - 4].iter().map(|s| parse_number(s)).collect::<Result<_, _>>()?;
    let parent = match fields[k - 2] {
        "-1" => None,
        s => Some(parse_id(s)?),
    };
    Ok(SnapshotVertex {
        id: parse_id(fields[0])?,
        coords,
        g: parse_number(fields[k - 4])?,
        lmc: parse_number(fields[k - 3])?,
        parent,
        category: fields[k - 1]
            .parse::<VertexCategory>()
            .map_err(|()| format!("unknown category `{}`", fields[k - 1]))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rrtsharp_core::planner::{plan, AlgorithmVariant};

    #[test]
    fn round_trips_planner_snapshots() {
        let scenario = crate::bundled::load("pt2_boxes_2d").unwrap();
        for variant in [AlgorithmVariant::RrtSharpV0, AlgorithmVariant::RrtStar] {
            let result = plan(&scenario, variant, 300, 4, 50).unwrap();
            let text = write_dump(&result.snapshot);
            assert_eq!(parse_dump(&text).unwrap(), result.snapshot);
        }
    }

    #[test]
    fn example_lines() {
        let text = "# vertices\n0, 0.1, 0.1, 0, 0, -1, CONSISTENT_FINITE\n\
                    1, 0.2, 0.1, inf, 0.1, 0, INCONSISTENT_INF_G_FINITE_LMC\n# edges\n0, 1\n";
        let s = parse_dump(text).unwrap();
        assert_eq!(s.vertices[1].g, f64::INFINITY);
        assert_eq!(s.vertices[1].parent, Some(VertexId(0)));
        assert_eq!(s.edges, vec![(VertexId(0), VertexId(1))]);
        assert_eq!(write_dump(&s), text);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert_eq!(parse_dump("# edges\n").unwrap_err().line, 1);
        let bad = "# vertices\n0, 0.1, 0.1, 0, 0, -1, GREEN\n# edges\n";
        assert!(parse_dump(bad).unwrap_err().message.contains("GREEN"));
        let bad = "# vertices\n# edges\n1, 0\n";
        assert_eq!(parse_dump(bad).unwrap_err().line, 3);
        assert!(parse_dump("# vertices\n").is_err());
    }
}
