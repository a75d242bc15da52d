//! Readers and writers for `.gr` graphs, `.td` decompositions, triple
//! systems, String 3-Groups instances and generator metadata.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use fewbags_core::gadgets::{BitString, HardInstance, S3GInstance, TripleSystem, ChainLabeling};
use fewbags_core::{Graph, PathDecomposition, TreeDecomposition, VertexSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    /// 1-based line number, or 0 for end of input.
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

/// Non-empty lines other than comments, with their line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, toks)| !toks.is_empty() && toks[0] != "c")
}

fn number(line: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse().or_else(|_| err(line, format!("expected a non-negative integer, found {tok:?}")))
}

/// A vertex id in `1..=n`, returned 0-based.
fn vertex(line: usize, tok: &str, n: usize) -> Result<usize, ParseError> {
    let v = number(line, tok)?;
    if v == 0 || v > n {
        return err(line, format!("vertex {v} out of range 1..={n}"));
    }
    Ok(v - 1)
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    tag: &[&str],
    fields: usize,
) -> Result<(usize, Vec<usize>), ParseError> {
    let expected = tag.join(" ");
    let Some((line, toks)) = lines.next() else {
        return err(0, format!("missing \"{expected}\" header"));
    };
    if toks.len() != tag.len() + fields || toks[..tag.len()] != *tag {
        return err(line, format!("malformed header, expected \"{expected}\" and {fields} numbers"));
    }
    let nums = toks[tag.len()..].iter().map(|t| number(line, t)).collect::<Result<_, _>>()?;
    Ok((line, nums))
}

/// Parses a `.gr` file. Duplicate edges collapse; self-loops are errors.
pub fn parse_gr(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (_, h) = header(&mut lines, &["p", "tw"], 2)?;
    let (n, m) = (h[0], h[1]);
    let mut edges = Vec::with_capacity(m);
    for (line, toks) in lines {
        if toks.len() != 2 {
            return err(line, "expected an edge \"<u> <v>\"");
        }
        let (u, v) = (vertex(line, toks[0], n)?, vertex(line, toks[1], n)?);
        if u == v {
            return err(line, format!("self-loop at vertex {}", u + 1));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return err(0, format!("header declares {m} edges, found {}", edges.len()));
    }
    Ok(Graph::from_edges(n, edges).expect("edges were range-checked"))
}

pub fn write_gr(g: &Graph) -> String {
    let mut s = format!("p tw {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{} {}", u + 1, v + 1);
    }
    s
}

/// A decomposition read from a `.td` file, rooted at its first bag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TdFile {
    pub td: TreeDecomposition,
    /// Vertex count declared in the header.
    pub n: usize,
}

pub fn parse_td(text: &str) -> Result<TdFile, ParseError> {
    let mut lines = content_lines(text).peekable();
    let (hline, h) = header(&mut lines, &["s", "td"], 3)?;
    let (t, max_bag, n) = (h[0], h[1], h[2]);
    if t == 0 {
        return err(hline, "a decomposition has at least one bag");
    }
    let mut bags: Vec<Option<VertexSet>> = vec![None; t];
    while let Some((line, toks)) = lines.next_if(|(_, toks)| toks[0] == "b") {
        let id = number(line, toks.get(1).copied().unwrap_or(""))?;
        if id == 0 || id > t {
            return err(line, format!("bag id {id} out of range 1..={t}"));
        }
        if bags[id - 1].is_some() {
            return err(line, format!("bag {id} listed twice"));
        }
        let bag = toks[2..].iter().map(|v| vertex(line, v, n)).collect::<Result<VertexSet, _>>()?;
        bags[id - 1] = Some(bag);
    }
    let mut edges = Vec::with_capacity(t - 1);
    for (line, toks) in lines {
        if toks.len() != 2 {
            return err(line, "expected a tree edge \"<i> <j>\"");
        }
        edges.push((vertex(line, toks[0], t)?, vertex(line, toks[1], t)?));
    }
    let bags: Vec<VertexSet> = match bags.into_iter().enumerate().map(|(i, b)| b.ok_or(i + 1)).collect() {
        Ok(b) => b,
        Err(id) => return err(0, format!("bag {id} is missing")),
    };
    if bags.iter().map(VertexSet::len).max().unwrap_or(0) != max_bag {
        return err(hline, format!("header declares maximum bag size {max_bag}"));
    }
    let td = TreeDecomposition::from_edges(bags, &edges, 0).or_else(|e| err(0, e.to_string()))?;
    Ok(TdFile { td, n })
}

fn write_bags(s: &mut String, bags: &[VertexSet], n: usize) {
    let max = bags.iter().map(VertexSet::len).max().unwrap_or(0);
    let _ = writeln!(s, "s td {} {} {}", bags.len(), max, n);
    for (i, b) in bags.iter().enumerate() {
        let _ = write!(s, "b {}", i + 1);
        for v in b {
            let _ = write!(s, " {}", v + 1);
        }
        s.push('\n');
    }
}

pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut s = String::new();
    write_bags(&mut s, &td.bags, n);
    for (a, b) in td.edges() {
        let _ = writeln!(s, "{} {}", a + 1, b + 1);
    }
    s
}

/// A path decomposition as a `.td` whose tree is the path `1, 2, ..., s`.
pub fn write_path_td(pd: &PathDecomposition, n: usize) -> String {
    let mut s = String::new();
    write_bags(&mut s, &pd.bags, n);
    for i in 1..pd.len() {
        let _ = writeln!(s, "{} {}", i, i + 1);
    }
    s
}

/// `p 3dm <n> <t>` followed by `t` lines `<p> <q> <r>`, 0-based.
pub fn parse_3dm(text: &str) -> Result<TripleSystem, ParseError> {
    let mut lines = content_lines(text);
    let (hline, h) = header(&mut lines, &["p", "3dm"], 2)?;
    let (n, t) = (h[0], h[1]);
    let mut triples = Vec::with_capacity(t);
    for (line, toks) in lines {
        if toks.len() != 3 {
            return err(line, "expected a triple \"<p> <q> <r>\"");
        }
        let (p, q, r) = (number(line, toks[0])?, number(line, toks[1])?, number(line, toks[2])?);
        if p >= n || q >= n || r >= n {
            return err(line, format!("element out of range 0..{n}"));
        }
        triples.push((p, q, r));
    }
    if triples.len() != t {
        return err(0, format!("header declares {t} triples, found {}", triples.len()));
    }
    TripleSystem::new(n, triples).or_else(|e| err(hline, e.to_string()))
}

pub fn write_3dm(t: &TripleSystem) -> String {
    let mut s = format!("p 3dm {} {}\n", t.n, t.triples.len());
    for &(p, q, r) in &t.triples {
        let _ = writeln!(s, "{p} {q} {r}");
    }
    s
}

/// `p s3g <n> <L>` followed by `3n` lines `A|B|C <bits>`; the strings of
/// each side keep their file order.
pub fn parse_s3g(text: &str) -> Result<S3GInstance, ParseError> {
    let mut lines = content_lines(text);
    let (hline, h) = header(&mut lines, &["p", "s3g"], 2)?;
    let (n, len) = (h[0], h[1]);
    let mut sides: [Vec<BitString>; 3] = Default::default();
    for (line, toks) in lines {
        let side = match toks[0] {
            "A" => 0,
            "B" => 1,
            "C" => 2,
            other => return err(line, format!("expected side A, B or C, found {other:?}")),
        };
        // An empty string has no token after the side letter.
        let bits = match toks.len() {
            1 => BitString::default(),
            2 => toks[1].parse().or_else(|_| err(line, "strings use only 0 and 1"))?,
            _ => return err(line, "expected \"<side> <bits>\""),
        };
        if bits.len() != len {
            return err(line, format!("string has length {}, header declares {len}", bits.len()));
        }
        sides[side].push(bits);
    }
    if sides.iter().any(|s| s.len() != n) {
        return err(hline, format!("each side needs {n} strings"));
    }
    let [a, b, c] = sides;
    S3GInstance::new(a, b, c).or_else(|e| err(hline, e.to_string()))
}

pub fn write_s3g(s: &S3GInstance) -> String {
    let mut out = format!("p s3g {} {}\n", s.n(), s.len());
    for (tag, side) in [("A", &s.a), ("B", &s.b), ("C", &s.c)] {
        for x in side {
            let _ = writeln!(out, "{tag} {x}");
        }
    }
    out
}

/// Sidecar describing a generated instance. Vertex ids are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Metadata {
    pub family: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, serde_json::Value>,
    /// Largest allowed bag, when the family has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    /// Number of bags a yes-instance attains.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_size: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parts: BTreeMap<String, Vec<Vec<usize>>>,
}

fn one_based(vs: impl IntoIterator<Item = usize>) -> Vec<usize> {
    vs.into_iter().map(|v| v + 1).collect()
}

impl Metadata {
    pub fn new(family: &str) -> Self {
        Metadata { family: family.to_owned(), ..Default::default() }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).expect("plain parameters serialize");
        self.params.insert(key.to_owned(), v);
        self
    }

    /// Records the base, pendant and maximal cliques of a chain under
    /// `prefix`.
    pub fn chain(&mut self, prefix: &str, l: &ChainLabeling) {
        let parts = [
            ("base", l.base.iter().map(|c| one_based(c.iter().copied())).collect()),
            ("pendant", l.pendant.iter().map(|c| one_based(c.iter().copied())).collect()),
            ("maximal", l.maximal.iter().map(|m| one_based(m.iter())).collect()),
        ];
        for (name, sets) in parts {
            self.parts.insert(format!("{prefix}{name}"), sets);
        }
    }

    pub fn hard_instance(h: &HardInstance) -> Self {
        let mut m = Metadata::new("mspd-hard").param("n", h.source.n()).param("ell", h.ell);
        m.capacity = Some(h.capacity);
        m.width = Some(h.capacity - 1);
        m.target_size = Some(h.size);
        m.chain("A.", &h.a_chain);
        for (i, l) in h.b_chains.iter().enumerate() {
            m.chain(&format!("B{}.", i + 1), l);
        }
        for (i, l) in h.c_chains.iter().enumerate() {
            m.chain(&format!("C{}.", i + 1), l);
        }
        m
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metadata serializes") + "\n"
    }
}
