//! Plain-text genome files.
//!
//! ```text
//! [meta]
//! id = 7
//! [nodes]
//! # id kind bias
//! 0 input 0
//! 41 output -0.3127
//! [connections]
//! # innovation source target weight enabled
//! 1 0 41 0.52 true
//! ```
//!
//! Floats are written in shortest round-trip form, so reading a file back
//! gives the same bits.

use std::fmt::Write as _;
use std::path::Path;

use swarmlife_core::neat::{Genome, NodeKind};

#[derive(Debug, thiserror::Error)]
pub enum GenomeIoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn kind_name(k: NodeKind) -> &'static str {
    match k {
        NodeKind::Input => "input",
        NodeKind::Hidden => "hidden",
        NodeKind::Output => "output",
    }
}

pub fn to_text(g: &Genome) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "[meta]\nid = {}", g.id);
    let _ = writeln!(s, "[nodes]\n# id kind bias");
    for n in g.nodes.values() {
        let _ = writeln!(s, "{} {} {:?}", n.id, kind_name(n.kind), n.bias);
    }
    let _ = writeln!(s, "[connections]\n# innovation source target weight enabled");
    for c in g.connections.values() {
        let _ = writeln!(s, "{} {} {} {:?} {}", c.innovation, c.source, c.target, c.weight, c.enabled);
    }
    s
}

fn field<T: std::str::FromStr>(line: usize, what: &str, raw: Option<&str>) -> Result<T, GenomeIoError> {
    let raw = raw.ok_or_else(|| GenomeIoError::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    raw.parse().map_err(|_| GenomeIoError::Parse {
        line,
        message: format!("bad {what} `{raw}`"),
    })
}

pub fn from_text(text: &str) -> Result<Genome, GenomeIoError> {
    let mut section = "";
    let mut id = None;
    let mut g = Genome::new(0);
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if l.starts_with('[') {
            section = match l {
                "[meta]" => "meta",
                "[nodes]" => "nodes",
                "[connections]" => "connections",
                _ => {
                    return Err(GenomeIoError::Parse {
                        line,
                        message: format!("unknown section {l}"),
                    })
                }
            };
            continue;
        }
        let err = |message: String| GenomeIoError::Parse { line, message };
        match section {
            "meta" => {
                let (k, v) = l.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
                match k.trim() {
                    "id" => id = Some(field(line, "id", Some(v.trim()))?),
                    other => return Err(err(format!("unknown meta key {other}"))),
                }
            }
            "nodes" => {
                let mut w = l.split_whitespace();
                let nid: u32 = field(line, "node id", w.next())?;
                let kind = match w.next() {
                    Some("input") => NodeKind::Input,
                    Some("hidden") => NodeKind::Hidden,
                    Some("output") => NodeKind::Output,
                    other => return Err(err(format!("bad node kind {other:?}"))),
                };
                let bias: f64 = field(line, "bias", w.next())?;
                if w.next().is_some() {
                    return Err(err("trailing fields".into()));
                }
                if g.nodes.contains_key(&nid) {
                    return Err(err(format!("duplicate node {nid}")));
                }
                if kind == NodeKind::Input && bias != 0.0 {
                    return Err(err("input nodes carry no bias".into()));
                }
                g.add_node(nid, kind, bias);
            }
            "connections" => {
                let mut w = l.split_whitespace();
                let innovation: u64 = field(line, "innovation", w.next())?;
                let source: u32 = field(line, "source", w.next())?;
                let target: u32 = field(line, "target", w.next())?;
                let weight: f64 = field(line, "weight", w.next())?;
                let enabled: bool = field(line, "enabled flag", w.next())?;
                if w.next().is_some() {
                    return Err(err("trailing fields".into()));
                }
                if g.connections.contains_key(&innovation) {
                    return Err(err(format!("duplicate innovation {innovation}")));
                }
                g.add_connection(innovation, source, target, weight, enabled);
            }
            _ => return Err(err("content before the first section".into())),
        }
    }
    g.id = id.ok_or(GenomeIoError::Parse {
        line: 0,
        message: "missing [meta] id".into(),
    })?;
    g.validate(f64::INFINITY, f64::INFINITY).map_err(|e| GenomeIoError::Parse {
        line: 0,
        message: e.to_string(),
    })?;
    Ok(g)
}

pub fn write(path: &Path, g: &Genome) -> Result<(), GenomeIoError> {
    std::fs::write(path, to_text(g)).map_err(|source| GenomeIoError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read(path: &Path) -> Result<Genome, GenomeIoError> {
    let text = std::fs::read_to_string(path).map_err(|source| GenomeIoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_text(&text)
}
