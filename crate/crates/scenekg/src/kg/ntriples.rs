//! N-Triples serialization of the graph and a reader for the emitted
//! dialect. Output is sorted by (subject, predicate, object) and therefore
//! byte-reproducible; export -> parse -> export is the identity on bytes.

use std::io::{self, BufRead, Write};

use std::collections::BTreeMap;

use super::graph::KnowledgeGraph;
use super::schema::{attr, AttrValue, EdgeType, NodeType};

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
pub const GEO_WKT: &str = "http://www.opengis.net/ont/geosparql#wktLiteral";

const NS: &str = "urn:nskg:";

#[derive(Debug, thiserror::Error)]
pub enum NtError {
    #[error("line {0}: {1}")]
    Malformed(usize, String),
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("graph error at line {0}: {1}")]
    Graph(usize, #[source] super::graph::GraphError),
}

fn encode_id(id: &str) -> String {
    let mut out = String::with_capacity(id.len());
    for b in id.bytes() {
        match b {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'_' | b'-' | b'.' | b'~' => {
                out.push(b as char)
            }
            other => out.push_str(&format!("%{other:02X}")),
        }
    }
    out
}

fn decode_id(text: &str) -> Option<String> {
    let bytes = text.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' {
            if i + 2 >= bytes.len() + 1 {
                return None;
            }
            let hex = std::str::from_utf8(&bytes[i + 1..i + 3]).ok()?;
            out.push(u8::from_str_radix(hex, 16).ok()?);
            i += 3;
        } else {
            out.push(bytes[i]);
            i += 1;
        }
    }
    String::from_utf8(out).ok()
}

fn node_iri(ty: NodeType, id: &str) -> String {
    format!("<{NS}{}:{}>", ty.class_name(), encode_id(id))
}

fn class_iri(name: &str) -> String {
    format!("<{NS}class:{name}>")
}

fn prop_iri(name: &str) -> String {
    format!("<{NS}prop:{name}>")
}

fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            other => out.push(other),
        }
    }
    out
}

fn unescape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('"') => out.push('"'),
                Some('\\') => out.push('\\'),
                Some('n') => out.push('\n'),
                Some('r') => out.push('\r'),
                Some('t') => out.push('\t'),
                Some(other) => {
                    out.push('\\');
                    out.push(other);
                }
                None => out.push('\\'),
            }
        } else {
            out.push(c);
        }
    }
    out
}

fn literal(value: &AttrValue, attr_name: &str) -> String {
    match value {
        AttrValue::Int(v) => format!("\"{v}\"^^<{XSD_INTEGER}>"),
        AttrValue::Float(v) => format!("\"{v:?}\"^^<{XSD_DOUBLE}>"),
        AttrValue::Bool(v) => format!("\"{v}\"^^<{XSD_BOOLEAN}>"),
        AttrValue::Str(v) => {
            if attr_name == attr::WKT || attr_name == attr::GPS_WKT {
                format!("\"{}\"^^<{GEO_WKT}>", escape_literal(v))
            } else {
                format!("\"{}\"", escape_literal(v))
            }
        }
    }
}

/// Serialize the graph as N-Triples, one statement per line, sorted and
/// deduplicated. Returns the triple count.
pub fn export_ntriples<W: Write>(g: &KnowledgeGraph, w: &mut W) -> io::Result<u64> {
    let rdf_type = format!("<{RDF_TYPE}>");
    let mut triples: Vec<(String, String, String)> = Vec::new();
    for idx in g.node_indices() {
        let node = g.node_at(idx);
        let subject = node_iri(node.ty, &node.id);
        triples.push((subject.clone(), rdf_type.clone(), class_iri(node.ty.class_name())));
        for sup in node.ty.superclass_names() {
            triples.push((subject.clone(), rdf_type.clone(), class_iri(sup)));
        }
        for (name, value) in &node.attrs {
            triples.push((subject.clone(), prop_iri(name), literal(value, name)));
        }
        for (ty, dst) in g.out_edges(idx) {
            let dst_node = g.node_at(*dst);
            triples.push((
                subject.clone(),
                prop_iri(ty.name()),
                node_iri(dst_node.ty, &dst_node.id),
            ));
        }
    }
    triples.sort();
    triples.dedup();
    for (s, p, o) in &triples {
        writeln!(w, "{s} {p} {o} .")?;
    }
    Ok(triples.len() as u64)
}

pub fn export_ntriples_to_string(g: &KnowledgeGraph) -> (String, u64) {
    let mut buf = Vec::new();
    let count = export_ntriples(g, &mut buf).expect("in-memory write");
    (String::from_utf8(buf).expect("utf-8 output"), count)
}

enum Object {
    Iri(String),
    Literal { value: String, datatype: Option<String> },
}

fn parse_iri_token(token: &str, lineno: usize) -> Result<String, NtError> {
    token
        .strip_prefix('<')
        .and_then(|t| t.strip_suffix('>'))
        .map(str::to_string)
        .ok_or_else(|| NtError::Malformed(lineno, format!("expected IRI, got '{token}'")))
}

/// (class name, id) from a node IRI.
fn split_node_iri(iri: &str, lineno: usize) -> Result<(String, String), NtError> {
    let rest = iri
        .strip_prefix(NS)
        .ok_or_else(|| NtError::Malformed(lineno, format!("unknown namespace in '{iri}'")))?;
    let (class, enc) = rest
        .split_once(':')
        .ok_or_else(|| NtError::Malformed(lineno, format!("malformed node IRI '{iri}'")))?;
    let id = decode_id(enc)
        .ok_or_else(|| NtError::Malformed(lineno, format!("bad id encoding in '{iri}'")))?;
    Ok((class.to_string(), id))
}

fn parse_literal_token(tok: &str, lineno: usize) -> Result<(String, Option<String>), NtError> {
    let bytes = tok.as_bytes();
    let mut i = 1;
    while i < bytes.len() {
        if bytes[i] == b'\\' {
            i += 2;
            continue;
        }
        if bytes[i] == b'"' {
            break;
        }
        i += 1;
    }
    if i >= bytes.len() {
        return Err(NtError::Malformed(lineno, "unterminated literal".into()));
    }
    let raw = &tok[1..i];
    let rest = &tok[i + 1..];
    let datatype = rest
        .strip_prefix("^^")
        .map(|dt| dt.trim_start_matches('<').trim_end_matches('>').to_string());
    Ok((unescape_literal(raw), datatype))
}

fn split_line(line: &str, lineno: usize) -> Result<(String, String, Object), NtError> {
    let line = line
        .strip_suffix(" .")
        .ok_or_else(|| NtError::Malformed(lineno, "missing statement terminator".into()))?;
    let mut rest = line;
    let mut take_token = || -> Result<String, NtError> {
        rest = rest.trim_start();
        if rest.starts_with('<') {
            let end = rest
                .find('>')
                .ok_or_else(|| NtError::Malformed(lineno, "unterminated IRI".into()))?;
            let tok = rest[..=end].to_string();
            rest = &rest[end + 1..];
            Ok(tok)
        } else if rest.starts_with('"') {
            // find the closing unescaped quote
            let bytes = rest.as_bytes();
            let mut i = 1;
            while i < bytes.len() {
                if bytes[i] == b'\\' {
                    i += 2;
                    continue;
                }
                if bytes[i] == b'"' {
                    break;
                }
                i += 1;
            }
            if i >= bytes.len() {
                return Err(NtError::Malformed(lineno, "unterminated literal".into()));
            }
            let mut end = i + 1;
            if rest[end..].starts_with("^^") {
                let close = rest[end..]
                    .find('>')
                    .ok_or_else(|| NtError::Malformed(lineno, "unterminated datatype".into()))?;
                end += close + 1;
            }
            let tok = rest[..end].to_string();
            rest = &rest[end..];
            Ok(tok)
        } else {
            Err(NtError::Malformed(lineno, format!("unexpected token start in '{rest}'")))
        }
    };

    let s = parse_iri_token(&take_token()?, lineno)?;
    let p = parse_iri_token(&take_token()?, lineno)?;
    let otok = take_token()?;
    let object = if otok.starts_with('<') {
        Object::Iri(parse_iri_token(&otok, lineno)?)
    } else {
        let (value, datatype) = parse_literal_token(&otok, lineno)?;
        Object::Literal { value, datatype }
    };
    Ok((s, p, object))
}

/// Read a graph back from the exporter's dialect. Node identity and the
/// most-specific class come from the subject IRIs; statement order in the
/// file fixes insertion order.
pub fn parse_ntriples<R: BufRead>(reader: R) -> Result<KnowledgeGraph, NtError> {
    let mut g = KnowledgeGraph::new();
    let mut statements: Vec<(usize, String, String, Object)> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (s, p, o) = split_line(&line, lineno + 1)?;
        statements.push((lineno + 1, s, p, o));
    }

    let ensure_node = |g: &mut KnowledgeGraph, iri: &str, lineno: usize| -> Result<(), NtError> {
        let (class, id) = split_node_iri(iri, lineno)?;
        let Some(ty) = NodeType::from_class_name(&class) else {
            return Err(NtError::Malformed(lineno, format!("unknown node class '{class}'")));
        };
        if g.index_of(&id).is_none() {
            g.add_node(ty, id, BTreeMap::new()).map_err(|e| NtError::Graph(lineno, e))?;
        }
        Ok(())
    };

    for (lineno, s, _, o) in &statements {
        ensure_node(&mut g, s, *lineno)?;
        if let Object::Iri(iri) = o {
            if iri.starts_with(NS) && !iri.starts_with("urn:nskg:class:") {
                ensure_node(&mut g, iri, *lineno)?;
            }
        }
    }

    for (lineno, s, p, o) in statements {
        let (_, sid) = split_node_iri(&s, lineno)?;
        if p == RDF_TYPE {
            continue; // encoded in the subject IRI already
        }
        let Some(prop) = p.strip_prefix("urn:nskg:prop:") else {
            return Err(NtError::Malformed(lineno, format!("unknown predicate '{p}'")));
        };
        match o {
            Object::Iri(iri) => {
                let edge = EdgeType::from_name(prop).ok_or_else(|| {
                    NtError::Malformed(lineno, format!("unknown edge relation '{prop}'"))
                })?;
                let (_, did) = split_node_iri(&iri, lineno)?;
                g.add_edge(edge, &sid, &did).map_err(|e| NtError::Graph(lineno, e))?;
            }
            Object::Literal { value, datatype } => {
                let attr_value = match datatype.as_deref() {
                    Some(XSD_INTEGER) => AttrValue::Int(value.parse().map_err(|_| {
                        NtError::Malformed(lineno, format!("bad integer '{value}'"))
                    })?),
                    Some(XSD_DOUBLE) => AttrValue::Float(value.parse().map_err(|_| {
                        NtError::Malformed(lineno, format!("bad double '{value}'"))
                    })?),
                    Some(XSD_BOOLEAN) => AttrValue::Bool(value.parse().map_err(|_| {
                        NtError::Malformed(lineno, format!("bad boolean '{value}'"))
                    })?),
                    Some(GEO_WKT) | None => AttrValue::Str(value),
                    Some(other) => {
                        return Err(NtError::Malformed(
                            lineno,
                            format!("unsupported datatype '{other}'"),
                        ))
                    }
                };
                let idx = g.index_of(&sid).expect("subject created above");
                let node_idx = idx as usize;
                // direct attribute insert, bypassing node construction
                let _ = node_idx;
                g.set_attr(idx, prop, attr_value);
            }
        }
    }
    Ok(g)
}
