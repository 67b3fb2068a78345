//! Plain-text formats.
//!
//! Graphs use an edge list: a header `n m d`, then `m` lines `u v D` for arcs
//! and `d` lines `u v U` for undirected edges. Ids are 0-based and `#` starts
//! a comment. Linear models add a weight column (`u v D w`) and an
//! `intercepts c_0 .. c_{n-1}` line. Shift assignments are `v a` lines.
//!
//! Instance files append sections to the graph: `targets k` followed by `k`
//! edge lines for subset instances, or `shifts k` and `target_mean ..` for
//! matching instances, and finally `meta` followed by `key=value` lines.
//! Floats are written in shortest round-trip form.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gen::{MatchingInstance, SubsetInstance};
use crate::graph::{Dag, EdgeSet, Pdag, VertexId};
use crate::oracle::{ShiftAssignment, ShiftSem};

pub type Meta = BTreeMap<String, String>;

type Tokens<'a> = Box<dyn Iterator<Item = (usize, Vec<&'a str>)> + 'a>;

struct Lines<'a> {
    inner: std::iter::Peekable<Tokens<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Tokens<'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| {
                    (
                        i + 1,
                        l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>(),
                    )
                })
                .filter(|(_, t)| !t.is_empty()),
        );
        Self {
            inner: it.peekable(),
            last: 0,
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        match self.inner.next() {
            Some((i, t)) => {
                self.last = i;
                Ok((i, t))
            }
            None => Err(Error::parse(
                self.last + 1,
                format!("unexpected end of input, expected {what}"),
            )),
        }
    }

    fn peek_keyword(&mut self) -> Option<&'a str> {
        self.inner.peek().map(|(_, t)| t[0])
    }

    fn done(&mut self) -> Result<()> {
        match self.inner.next() {
            None => Ok(()),
            Some((i, t)) => Err(Error::parse(
                i,
                format!("unexpected trailing content {:?}", t.join(" ")),
            )),
        }
    }
}

fn field<T: FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} {tok:?}")))
}

fn arity(line: usize, toks: &[&str], n: usize, shape: &str) -> Result<()> {
    if toks.len() == n {
        Ok(())
    } else {
        Err(Error::parse(
            line,
            format!("expected \"{shape}\", got {:?}", toks.join(" ")),
        ))
    }
}

struct Header {
    n: usize,
    arcs: Vec<(VertexId, VertexId, Option<f64>)>,
    undirected: Vec<(VertexId, VertexId)>,
}

fn parse_graph(lines: &mut Lines, weighted: bool) -> Result<Header> {
    let (i, t) = lines.next("header \"n m d\"")?;
    arity(i, &t, 3, "n m d")?;
    let n: usize = field(i, t[0], "vertex count")?;
    let m: usize = field(i, t[1], "arc count")?;
    let d: usize = field(i, t[2], "undirected edge count")?;
    let vertex = |i: usize, tok: &str| -> Result<VertexId> {
        let v: VertexId = field(i, tok, "vertex")?;
        if v >= n {
            return Err(Error::parse(i, format!("vertex {v} out of range for n={n}")));
        }
        Ok(v)
    };
    let mut arcs = Vec::with_capacity(m);
    for _ in 0..m {
        let (i, t) = lines.next("arc line")?;
        if weighted {
            arity(i, &t, 4, "u v D w")?;
        } else {
            arity(i, &t, 3, "u v D")?;
        }
        if t[2] != "D" {
            return Err(Error::parse(i, format!("expected arc marker D, got {:?}", t[2])));
        }
        let w = if weighted {
            Some(field::<f64>(i, t[3], "weight")?)
        } else {
            None
        };
        arcs.push((vertex(i, t[0])?, vertex(i, t[1])?, w));
    }
    let mut undirected = Vec::with_capacity(d);
    for _ in 0..d {
        let (i, t) = lines.next("undirected edge line")?;
        arity(i, &t, 3, "u v U")?;
        if t[2] != "U" {
            return Err(Error::parse(i, format!("expected edge marker U, got {:?}", t[2])));
        }
        undirected.push((vertex(i, t[0])?, vertex(i, t[1])?));
    }
    Ok(Header { n, arcs, undirected })
}

fn write_header(out: &mut String, n: usize, m: usize, d: usize) {
    writeln!(out, "{n} {m} {d}").unwrap();
}

pub fn write_dag(g: &Dag) -> String {
    let mut out = String::new();
    write_header(&mut out, g.n(), g.num_arcs(), 0);
    for (u, v) in g.arcs() {
        writeln!(out, "{u} {v} D").unwrap();
    }
    out
}

pub fn write_pdag(g: &Pdag) -> String {
    let arcs = g.arcs();
    let und = g.undirected_edges();
    let mut out = String::new();
    write_header(&mut out, g.n(), arcs.len(), und.len());
    for (u, v) in arcs {
        writeln!(out, "{u} {v} D").unwrap();
    }
    for (u, v) in und {
        writeln!(out, "{u} {v} U").unwrap();
    }
    out
}

fn dag_from(h: &Header, line: usize) -> Result<Dag> {
    if !h.undirected.is_empty() {
        return Err(Error::parse(line, "a DAG may not contain undirected edges"));
    }
    Dag::new(h.n, h.arcs.iter().map(|&(u, v, _)| (u, v)))
}

pub fn parse_dag(text: &str) -> Result<Dag> {
    let mut lines = Lines::new(text);
    let h = parse_graph(&mut lines, false)?;
    let last = lines.last;
    lines.done()?;
    dag_from(&h, last)
}

pub fn parse_pdag(text: &str) -> Result<Pdag> {
    let mut lines = Lines::new(text);
    let h = parse_graph(&mut lines, false)?;
    lines.done()?;
    Pdag::new(
        h.n,
        h.arcs.iter().map(|&(u, v, _)| (u, v)),
        h.undirected.iter().copied(),
    )
}

fn write_floats(out: &mut String, keyword: &str, xs: &[f64]) {
    out.push_str(keyword);
    for x in xs {
        write!(out, " {x}").unwrap();
    }
    out.push('\n');
}

fn parse_floats(lines: &mut Lines, keyword: &str, n: usize) -> Result<Vec<f64>> {
    let (i, t) = lines.next(keyword)?;
    if t[0] != keyword {
        return Err(Error::parse(i, format!("expected {keyword:?} line, got {:?}", t[0])));
    }
    if t.len() != n + 1 {
        return Err(Error::parse(
            i,
            format!("expected {n} values after {keyword:?}, got {}", t.len() - 1),
        ));
    }
    t[1..].iter().map(|tok| field(i, tok, "number")).collect()
}

fn push_sem(out: &mut String, sem: &ShiftSem) {
    let g = sem.dag();
    write_header(out, g.n(), g.num_arcs(), 0);
    for ((u, v), w) in sem.weights() {
        writeln!(out, "{u} {v} D {w}").unwrap();
    }
    write_floats(out, "intercepts", sem.intercepts());
}

fn read_sem(lines: &mut Lines) -> Result<ShiftSem> {
    let h = parse_graph(lines, true)?;
    let dag = dag_from(&h, lines.last)?;
    let intercepts = parse_floats(lines, "intercepts", h.n)?;
    let weights = h.arcs.iter().map(|&(u, v, w)| ((u, v), w.unwrap()));
    ShiftSem::new(dag, weights, intercepts)
}

pub fn write_sem(sem: &ShiftSem) -> String {
    let mut out = String::new();
    push_sem(&mut out, sem);
    out
}

pub fn parse_sem(text: &str) -> Result<ShiftSem> {
    let mut lines = Lines::new(text);
    let sem = read_sem(&mut lines)?;
    lines.done()?;
    Ok(sem)
}

/// `v a` lines.
pub fn write_shifts(shifts: &ShiftAssignment) -> String {
    let mut out = String::new();
    for (v, a) in shifts.iter() {
        writeln!(out, "{v} {a}").unwrap();
    }
    out
}

pub fn parse_shifts(text: &str) -> Result<ShiftAssignment> {
    let mut lines = Lines::new(text);
    let mut out = ShiftAssignment::new();
    while lines.peek_keyword().is_some() {
        read_shift(&mut lines, &mut out)?;
    }
    Ok(out)
}

fn read_shift(lines: &mut Lines, out: &mut ShiftAssignment) -> Result<()> {
    let (i, t) = lines.next("shift line")?;
    arity(i, &t, 2, "v a")?;
    let v: VertexId = field(i, t[0], "vertex")?;
    if out.get(v).is_some() {
        return Err(Error::parse(i, format!("vertex {v} shifted twice")));
    }
    out.insert(v, field(i, t[1], "shift")?)
        .map_err(|e| Error::parse(i, e.to_string()))
}

fn section_count(lines: &mut Lines, keyword: &str) -> Result<usize> {
    let (i, t) = lines.next(keyword)?;
    if t[0] != keyword {
        return Err(Error::parse(i, format!("expected {keyword:?} section, got {:?}", t[0])));
    }
    arity(i, &t, 2, &format!("{keyword} k"))?;
    field(i, t[1], "count")
}

fn push_meta(out: &mut String, meta: &Meta) {
    out.push_str("meta\n");
    for (k, v) in meta {
        writeln!(out, "{k}={v}").unwrap();
    }
}

fn read_meta(lines: &mut Lines) -> Result<Meta> {
    let (i, t) = lines.next("meta section")?;
    if t != ["meta"] {
        return Err(Error::parse(i, format!("expected \"meta\", got {:?}", t.join(" "))));
    }
    let mut meta = Meta::new();
    while lines.peek_keyword().is_some() {
        let (i, t) = lines.next("meta entry")?;
        let line = t.join(" ");
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(i, format!("expected key=value, got {line:?}")))?;
        meta.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(meta)
}

pub fn meta_get<T: FromStr>(meta: &Meta, key: &str) -> Result<T> {
    let raw = meta
        .get(key)
        .ok_or_else(|| Error::Precondition(format!("instance metadata lacks {key:?}")))?;
    raw.parse()
        .map_err(|_| Error::Precondition(format!("metadata {key}={raw:?} is malformed")))
}

pub fn write_subset_instance(inst: &SubsetInstance) -> String {
    let mut out = String::from("# subset search instance\n");
    out.push_str(&write_dag(&inst.hidden));
    writeln!(out, "targets {}", inst.targets.len()).unwrap();
    for (u, v) in inst.targets.iter() {
        writeln!(out, "{u} {v}").unwrap();
    }
    let meta: Meta = [
        ("model", "r-hop".to_string()),
        ("n", inst.n.to_string()),
        ("r", inst.r.to_string()),
        ("density", inst.density.to_string()),
        ("seed", inst.seed.to_string()),
        ("center", inst.hop_center.to_string()),
        ("distance", "skeleton".to_string()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    push_meta(&mut out, &meta);
    out
}

pub fn parse_subset_instance(text: &str) -> Result<SubsetInstance> {
    let mut lines = Lines::new(text);
    let h = parse_graph(&mut lines, false)?;
    let hidden = dag_from(&h, lines.last)?;
    let k = section_count(&mut lines, "targets")?;
    let mut targets = EdgeSet::new();
    for _ in 0..k {
        let (i, t) = lines.next("target edge")?;
        arity(i, &t, 2, "u v")?;
        let (u, v): (VertexId, VertexId) = (field(i, t[0], "vertex")?, field(i, t[1], "vertex")?);
        if u >= hidden.n() || v >= hidden.n() || !hidden.adjacent(u, v) {
            return Err(Error::parse(i, format!("target {u} {v} is not an edge")));
        }
        targets.insert(u, v)?;
    }
    let meta = read_meta(&mut lines)?;
    Ok(SubsetInstance {
        targets,
        hop_center: meta_get(&meta, "center")?,
        n: hidden.n(),
        r: meta_get(&meta, "r")?,
        density: meta_get(&meta, "density")?,
        seed: meta_get(&meta, "seed")?,
        hidden,
    })
}

pub fn write_matching_instance(inst: &MatchingInstance, meta: &Meta) -> String {
    let mut out = String::from("# mean matching instance\n");
    push_sem(&mut out, &inst.sem);
    writeln!(out, "shifts {}", inst.hidden_targets.len()).unwrap();
    out.push_str(&write_shifts(&inst.hidden_targets));
    write_floats(&mut out, "target_mean", &inst.target_mean);
    push_meta(&mut out, meta);
    out
}

pub fn parse_matching_instance(text: &str) -> Result<(MatchingInstance, Meta)> {
    let mut lines = Lines::new(text);
    let sem = read_sem(&mut lines)?;
    let k = section_count(&mut lines, "shifts")?;
    let mut hidden_targets = ShiftAssignment::new();
    for _ in 0..k {
        read_shift(&mut lines, &mut hidden_targets)?;
    }
    let target_mean = parse_floats(&mut lines, "target_mean", sem.dag().n())?;
    let meta = read_meta(&mut lines)?;
    Ok((
        MatchingInstance {
            sem,
            hidden_targets,
            target_mean,
        },
        meta,
    ))
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}
