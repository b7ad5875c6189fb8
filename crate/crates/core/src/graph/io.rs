//! Line-oriented text formats.
//!
//! ```text
//! graph <node_count>
//! edge <u> <p> <v> <q>
//! start <u>
//! treasure <v>
//! ```
//!
//! Pebble files hold one `pebble <u>` line per pebbled node. Blank lines and
//! lines starting with `#` are ignored.

use std::fmt::Write as _;

use super::{GraphError, Instance, NodeId, PebbleConfig, PortLabeledGraph};

fn fields(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

fn number(line: usize, tok: &str) -> Result<usize, GraphError> {
    tok.parse().map_err(|_| GraphError::Parse {
        line,
        msg: format!("expected a decimal id, found {tok:?}"),
    })
}

fn expect_args(line: usize, words: &[&str], n: usize) -> Result<(), GraphError> {
    if words.len() == n + 1 {
        Ok(())
    } else {
        Err(GraphError::Parse {
            line,
            msg: format!("`{}` takes {n} arguments", words[0]),
        })
    }
}

impl PortLabeledGraph {
    pub fn to_text(&self) -> String {
        let mut out = format!("graph {}\n", self.node_count());
        for (u, p, v, q) in self.edges() {
            let _ = writeln!(out, "edge {u} {p} {v} {q}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let (graph, start, treasure) = parse(text)?;
        if let Some(line) = start.or(treasure).map(|(line, _)| line) {
            return Err(GraphError::Parse {
                line,
                msg: "graph files do not carry start/treasure".into(),
            });
        }
        Ok(graph)
    }
}

type Marked = Option<(usize, NodeId)>;

fn parse(text: &str) -> Result<(PortLabeledGraph, Marked, Marked), GraphError> {
    let mut node_count = None;
    let mut edges = Vec::new();
    let mut start = None;
    let mut treasure = None;
    for (line, words) in fields(text) {
        match words[0] {
            "graph" => {
                expect_args(line, &words, 1)?;
                if node_count.is_some() {
                    return Err(GraphError::Parse { line, msg: "duplicate header".into() });
                }
                node_count = Some(number(line, words[1])?);
            }
            "edge" => {
                expect_args(line, &words, 4)?;
                if node_count.is_none() {
                    return Err(GraphError::Parse { line, msg: "edge before header".into() });
                }
                let n: Vec<usize> = words[1..]
                    .iter()
                    .map(|w| number(line, w))
                    .collect::<Result<_, _>>()?;
                edges.push((n[0], n[1], n[2], n[3]));
            }
            "start" => {
                expect_args(line, &words, 1)?;
                start = Some((line, number(line, words[1])?));
            }
            "treasure" => {
                expect_args(line, &words, 1)?;
                treasure = Some((line, number(line, words[1])?));
            }
            other => {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("unknown directive {other:?}"),
                })
            }
        }
    }
    let node_count = node_count.ok_or(GraphError::Parse {
        line: 0,
        msg: "missing `graph <node_count>` header".into(),
    })?;
    let graph = PortLabeledGraph::from_edges(node_count, &edges)?;
    Ok((graph, start, treasure))
}

impl Instance {
    pub fn to_text(&self) -> String {
        let mut out = self.graph.to_text();
        let _ = writeln!(out, "start {}", self.start);
        let _ = writeln!(out, "treasure {}", self.treasure);
        out
    }

    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let (graph, start, treasure) = parse(text)?;
        let missing = |what: &str| GraphError::Parse {
            line: 0,
            msg: format!("missing `{what}` line"),
        };
        let start = start.ok_or_else(|| missing("start"))?.1;
        let treasure = treasure.ok_or_else(|| missing("treasure"))?.1;
        Instance::new(graph, start, treasure)
    }
}

impl PebbleConfig {
    pub fn to_text(&self) -> String {
        self.pebbled.iter().map(|u| format!("pebble {u}\n")).collect()
    }

    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut config = PebbleConfig::new();
        for (line, words) in fields(text) {
            if words[0] != "pebble" {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("unknown directive {:?}", words[0]),
                });
            }
            expect_args(line, &words, 1)?;
            if !config.place(number(line, words[1])?) {
                return Err(GraphError::Parse {
                    line,
                    msg: "node pebbled twice".into(),
                });
            }
        }
        Ok(config)
    }
}
