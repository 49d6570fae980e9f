//! Line-oriented canonical text format for graphs, basis maps, descriptors,
//! certificates and decisions.
//!
//! Every document starts with `circle-morse 1 <kind>` and ends with `end`.
//! Ids are listed in increasing order and rationals are written `p/q` in
//! lowest terms, so equal values always produce equal bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::decision::{Decision, Reason, SearchStatus};
use crate::graph::{DecoratedReebGraph, Sign, VertexKind};
use crate::homology::SignedEdge;
use crate::invariants::{BasisMap, CriticalType, MorseDescriptor, WindingVector};
use crate::moves::{CircleMap, Move, MoveCertificate, PairKind, Placement, Site};
use crate::rational::{parse_canonical, Canon, Q};
use crate::surface::SurfaceDescriptor;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "circle-morse";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Graph { graph: DecoratedReebGraph, basis: Option<BasisMap> },
    Basis(BasisMap),
    Descriptor(MorseDescriptor),
    Certificate(MoveCertificate),
    Decision { decision: Decision, search: Option<SearchStatus> },
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Graph { .. } => "graph",
            Document::Basis(_) => "basis",
            Document::Descriptor(_) => "descriptor",
            Document::Certificate(_) => "certificate",
            Document::Decision { .. } => "decision",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

// ---------------------------------------------------------------- emit

fn sign_text(s: Sign) -> &'static str {
    match s {
        Sign::Pos => "+1",
        Sign::Neg => "-1",
    }
}

fn walk_text(w: &[SignedEdge]) -> String {
    w.iter().map(|&(e, s)| format!(" {}{e}", if s > 0 { '+' } else { '-' })).collect()
}

fn bit(b: bool) -> u8 {
    b as u8
}

fn write_graph_body(out: &mut String, g: &DecoratedReebGraph) {
    for v in g.vertices.values() {
        // Boundary vertices put the angle before label and sign.
        match &v.kind {
            VertexKind::Boundary { label, sign } => {
                let _ = writeln!(out, "vertex {} boundary {} {label} {}", v.id, Canon(v.angle), sign_text(*sign));
            }
            k => {
                let _ = writeln!(out, "vertex {} {} {}", v.id, k.name(), Canon(v.angle));
            }
        }
    }
    for e in g.edges.values() {
        let _ = writeln!(out, "edge {} {} {} {} {}", e.id, e.tail, e.head, Canon(e.delta), bit(e.twist));
    }
}

fn write_basis(out: &mut String, b: &BasisMap) {
    for (i, w) in b.iter().enumerate() {
        let _ = writeln!(out, "cycle {i}{}", walk_text(w));
    }
}

/// Canonical text of a bare graph; fingerprints hash exactly these bytes.
pub fn graph_text(g: &DecoratedReebGraph) -> String {
    emit(&Document::Graph { graph: g.clone(), basis: None })
}

fn placement_text(p: &Placement) -> String {
    let site = match &p.site {
        Site::Edge { edge, angle } => format!("edge {edge} {}", Canon(*angle)),
        Site::Marker(v) => format!("marker {v}"),
    };
    format!("{site} {} {} {}", Canon(p.extremum), bit(p.upper_twist), bit(p.leaf_twist))
}

pub fn move_line(m: &Move) -> String {
    match m {
        Move::CreatePair { kind, at } => format!("create-pair {} {}", kind.code(), placement_text(at)),
        Move::CancelPair { extremum, saddle } => format!("cancel-pair {extremum} {saddle}"),
        Move::ShiftTerminalEdge { edge, to } => format!("shift {edge} {}", placement_text(to)),
        Move::ReduceUnessential { angle, component } => {
            let vs: String = component.iter().map(|v| format!(" {v}")).collect();
            format!("reduce {}{vs}", Canon(*angle))
        }
        Move::Reangle(map) => {
            let ps: String = map.points.iter().map(|(x, y)| format!(" {}:{}", Canon(*x), Canon(*y))).collect();
            format!("reangle{ps}")
        }
        Move::Retime { shifts } => {
            let ps: String = shifts.iter().map(|(v, s)| format!(" {v}:{}", Canon(*s))).collect();
            format!("retime{ps}")
        }
        Move::InsertMarker { edge, angle, upper_twist } => {
            format!("insert-marker {edge} {} {}", Canon(*angle), bit(*upper_twist))
        }
        Move::RemoveMarker { vertex } => format!("remove-marker {vertex}"),
    }
}

fn reason_text(r: &Reason) -> String {
    match r {
        Reason::Ok => "ok".into(),
        Reason::WindingMismatch(i) => format!("winding-mismatch {i}"),
        Reason::CountMismatch(which) => format!("count-mismatch {}", which.name()),
        Reason::SignMismatch(l) => format!("sign-mismatch {l}"),
        Reason::SurfaceMismatch => "surface-mismatch".into(),
    }
}

pub fn emit(doc: &Document) -> String {
    let mut out = format!("{MAGIC} {FORMAT_VERSION} {}\n", doc.kind());
    match doc {
        Document::Graph { graph, basis } => {
            write_graph_body(&mut out, graph);
            if let Some(b) = basis {
                write_basis(&mut out, b);
            }
        }
        Document::Basis(b) => write_basis(&mut out, b),
        Document::Descriptor(d) => {
            let s = &d.surface;
            let labels: String = s.boundary.iter().map(|l| format!(" {l}")).collect();
            let o = if s.orientable { "orientable" } else { "nonorientable" };
            let _ = writeln!(out, "surface {o} {}{labels}", s.genus);
            let _ = writeln!(out, "counts {} {} {}", d.ctype.c0, d.ctype.c1, d.ctype.c2);
            for (l, sg) in &d.ctype.sign {
                let _ = writeln!(out, "sign {l} {}", sign_text(*sg));
            }
            let ws: String = d.winding.0.iter().map(|w| format!(" {w}")).collect();
            let _ = writeln!(out, "winding{ws}");
        }
        Document::Certificate(c) => {
            let _ = writeln!(out, "initial {}", c.initial);
            let _ = writeln!(out, "final {}", c.terminal);
            for m in &c.moves {
                let _ = writeln!(out, "move {}", move_line(m));
            }
        }
        Document::Decision { decision, search } => {
            let _ = writeln!(out, "equivalent {}", decision.equivalent);
            let _ = writeln!(out, "reason {}", reason_text(&decision.reason));
            if let Some(s) = search {
                let _ = writeln!(out, "search {}", s.name());
            }
        }
    }
    out.push_str("end\n");
    out
}

pub fn emit_all(docs: &[Document]) -> String {
    docs.iter().map(emit).collect()
}

// ---------------------------------------------------------------- parse

struct Line<'a> {
    no: usize,
    tokens: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    fn split(no: usize, text: &'a str) -> Self {
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, c) in text.char_indices() {
            match (c == ' ', start) {
                (true, Some(s)) => {
                    tokens.push((s + 1, &text[s..i]));
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        if let Some(s) = start {
            tokens.push((s + 1, &text[s..]));
        }
        Self { no, tokens }
    }

    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.no, column, message: message.into() }
    }

    fn tok(&self, i: usize) -> Result<(usize, &'a str), ParseError> {
        self.tokens.get(i).copied().ok_or_else(|| {
            let col = self.tokens.last().map_or(1, |(c, t)| c + t.len());
            self.err(col, format!("expected field {}", i + 1))
        })
    }

    fn arity(&self, n: usize) -> Result<(), ParseError> {
        if self.tokens.len() > n {
            let (c, _) = self.tokens[n];
            return Err(self.err(c, "unexpected trailing field"));
        }
        self.tok(n - 1).map(|_| ())
    }

    fn uint(&self, i: usize) -> Result<u32, ParseError> {
        let (c, t) = self.tok(i)?;
        match t.parse::<u32>() {
            Ok(v) if v.to_string() == t => Ok(v),
            _ => Err(self.err(c, format!("expected a non-negative integer, found {t:?}"))),
        }
    }

    fn int(&self, i: usize) -> Result<i64, ParseError> {
        let (c, t) = self.tok(i)?;
        match t.parse::<i64>() {
            Ok(v) if v.to_string() == t => Ok(v),
            _ => Err(self.err(c, format!("expected an integer, found {t:?}"))),
        }
    }

    fn rational(&self, i: usize) -> Result<Q, ParseError> {
        let (c, t) = self.tok(i)?;
        parse_canonical(t).map_err(|e| self.err(c, format!("{e}: {t:?}")))
    }

    fn flag(&self, i: usize) -> Result<bool, ParseError> {
        let (c, t) = self.tok(i)?;
        match t {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(self.err(c, format!("expected 0 or 1, found {t:?}"))),
        }
    }

    fn sign(&self, i: usize) -> Result<Sign, ParseError> {
        let (c, t) = self.tok(i)?;
        match t {
            "+1" => Ok(Sign::Pos),
            "-1" => Ok(Sign::Neg),
            _ => Err(self.err(c, format!("expected +1 or -1, found {t:?}"))),
        }
    }

    fn label(&self, i: usize) -> Result<String, ParseError> {
        let (c, t) = self.tok(i)?;
        if is_label(t) {
            Ok(t.to_string())
        } else {
            Err(self.err(c, format!("invalid label {t:?}")))
        }
    }

    fn signed_edge(&self, i: usize) -> Result<SignedEdge, ParseError> {
        let (c, t) = self.tok(i)?;
        let (s, rest) = match t.split_at_checked(1) {
            Some(("+", r)) => (1, r),
            Some(("-", r)) => (-1, r),
            _ => return Err(self.err(c, format!("expected +id or -id, found {t:?}"))),
        };
        match rest.parse::<u32>() {
            Ok(e) if e.to_string() == rest => Ok((e, s)),
            _ => Err(self.err(c, format!("expected +id or -id, found {t:?}"))),
        }
    }
}

pub fn is_label(t: &str) -> bool {
    !t.is_empty()
        && t.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '#' | '-'))
        && t.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
}

fn parse_kind(line: &Line<'_>) -> Result<(VertexKind, Q), ParseError> {
    let (c, k) = line.tok(2)?;
    let angle = line.rational(3)?;
    let kind = match k {
        "min" => VertexKind::Min,
        "max" => VertexKind::Max,
        "saddle" => VertexKind::Saddle,
        "twist-saddle" => VertexKind::TwistSaddle,
        "regular" => VertexKind::Regular,
        "boundary" => {
            line.arity(6)?;
            return Ok((VertexKind::Boundary { label: line.label(4)?, sign: line.sign(5)? }, angle));
        }
        _ => return Err(line.err(c, format!("unknown vertex kind {k:?}"))),
    };
    line.arity(4)?;
    Ok((kind, angle))
}

fn parse_placement(line: &Line<'_>, at: usize) -> Result<(Placement, usize), ParseError> {
    let (c, s) = line.tok(at)?;
    let (site, next) = match s {
        "edge" => (Site::Edge { edge: line.uint(at + 1)?, angle: line.rational(at + 2)? }, at + 3),
        "marker" => (Site::Marker(line.uint(at + 1)?), at + 2),
        _ => return Err(line.err(c, format!("expected edge or marker, found {s:?}"))),
    };
    let p = Placement {
        site,
        extremum: line.rational(next)?,
        upper_twist: line.flag(next + 1)?,
        leaf_twist: line.flag(next + 2)?,
    };
    Ok((p, next + 3))
}

fn parse_move(line: &Line<'_>) -> Result<Move, ParseError> {
    let (c, name) = line.tok(1)?;
    let m = match name {
        "create-pair" => {
            let (kc, k) = line.tok(2)?;
            let kind = match k {
                "01" => PairKind::MinSaddle,
                "12" => PairKind::SaddleMax,
                _ => return Err(line.err(kc, format!("expected 01 or 12, found {k:?}"))),
            };
            let (at, n) = parse_placement(line, 3)?;
            line.arity(n)?;
            Move::CreatePair { kind, at }
        }
        "cancel-pair" => {
            line.arity(4)?;
            Move::CancelPair { extremum: line.uint(2)?, saddle: line.uint(3)? }
        }
        "shift" => {
            let edge = line.uint(2)?;
            let (to, n) = parse_placement(line, 3)?;
            line.arity(n)?;
            Move::ShiftTerminalEdge { edge, to }
        }
        "reduce" => {
            let angle = line.rational(2)?;
            let component = (3..line.tokens.len()).map(|i| line.uint(i)).collect::<Result<Vec<_>, _>>()?;
            Move::ReduceUnessential { angle, component }
        }
        "reangle" => {
            let mut points = Vec::new();
            for i in 2..line.tokens.len() {
                let (pc, t) = line.tokens[i];
                let (x, y) = t.split_once(':').ok_or_else(|| line.err(pc, "expected x:y"))?;
                let x = parse_canonical(x).map_err(|e| line.err(pc, e.to_string()))?;
                let y = parse_canonical(y).map_err(|e| line.err(pc, e.to_string()))?;
                points.push((x, y));
            }
            let map = CircleMap::new(points).map_err(|e| line.err(c, e.to_string()))?;
            Move::Reangle(map)
        }
        "retime" => {
            let mut shifts = Vec::new();
            for i in 2..line.tokens.len() {
                let (pc, t) = line.tokens[i];
                let (v, x) = t.split_once(':').ok_or_else(|| line.err(pc, "expected vertex:shift"))?;
                let v = match v.parse::<u32>() {
                    Ok(id) if id.to_string() == v => id,
                    _ => return Err(line.err(pc, format!("expected a vertex id, found {v:?}"))),
                };
                if shifts.last().is_some_and(|&(p, _)| p >= v) {
                    return Err(line.err(pc, "vertex ids must strictly increase"));
                }
                let x = parse_canonical(x).map_err(|e| line.err(pc, e.to_string()))?;
                shifts.push((v, x));
            }
            Move::Retime { shifts }
        }
        "insert-marker" => {
            line.arity(5)?;
            Move::InsertMarker { edge: line.uint(2)?, angle: line.rational(3)?, upper_twist: line.flag(4)? }
        }
        "remove-marker" => {
            line.arity(3)?;
            Move::RemoveMarker { vertex: line.uint(2)? }
        }
        _ => return Err(line.err(c, format!("unknown move {name:?}"))),
    };
    Ok(m)
}

fn parse_reason(line: &Line<'_>) -> Result<Reason, ParseError> {
    let (c, r) = line.tok(1)?;
    let reason = match r {
        "ok" => Reason::Ok,
        "surface-mismatch" => Reason::SurfaceMismatch,
        "winding-mismatch" => {
            line.arity(3)?;
            return Ok(Reason::WindingMismatch(line.uint(2)? as usize));
        }
        "count-mismatch" => {
            line.arity(3)?;
            let (wc, w) = line.tok(2)?;
            return crate::decision::CountIndex::from_name(w)
                .map(Reason::CountMismatch)
                .ok_or_else(|| line.err(wc, format!("expected c0, c1 or c2, found {w:?}")));
        }
        "sign-mismatch" => {
            line.arity(3)?;
            return Ok(Reason::SignMismatch(line.label(2)?));
        }
        _ => return Err(line.err(c, format!("unknown reason {r:?}"))),
    };
    line.arity(2)?;
    Ok(reason)
}

struct Body<'a> {
    kind: &'a str,
    lines: Vec<Line<'a>>,
}

fn parse_body(b: &Body<'_>, header: &Line<'_>) -> Result<Document, ParseError> {
    let expect = |line: &Line<'_>, key: &str| -> Result<(), ParseError> {
        let (c, t) = line.tok(0)?;
        if t == key {
            Ok(())
        } else {
            Err(line.err(c, format!("expected {key:?}, found {t:?}")))
        }
    };
    let mut it = b.lines.iter().peekable();
    let doc = match b.kind {
        "graph" | "basis" => {
            let mut g = DecoratedReebGraph::new();
            let mut basis: BasisMap = Vec::new();
            let mut has_cycles = false;
            for line in it {
                let (c, key) = line.tok(0)?;
                match key {
                    "vertex" if b.kind == "graph" && !has_cycles && g.edges.is_empty() => {
                        let id = line.uint(1)?;
                        if g.vertices.keys().next_back().is_some_and(|&p| p >= id) {
                            return Err(line.err(line.tok(1)?.0, "vertex ids must strictly increase"));
                        }
                        let (kind, angle) = parse_kind(line)?;
                        if !crate::rational::is_unit_interval(angle) {
                            return Err(line.err(line.tok(3)?.0, "angle must lie in [0, 1)"));
                        }
                        g.add_vertex(id, kind, angle);
                    }
                    "edge" if b.kind == "graph" && !has_cycles => {
                        line.arity(6)?;
                        let id = line.uint(1)?;
                        if g.edges.keys().next_back().is_some_and(|&p| p >= id) {
                            return Err(line.err(line.tok(1)?.0, "edge ids must strictly increase"));
                        }
                        g.add_edge(id, line.uint(2)?, line.uint(3)?, line.rational(4)?, line.flag(5)?);
                    }
                    "cycle" => {
                        let i = line.uint(1)? as usize;
                        if i != basis.len() {
                            return Err(line.err(line.tok(1)?.0, format!("expected cycle index {}", basis.len())));
                        }
                        basis.push((2..line.tokens.len()).map(|k| line.signed_edge(k)).collect::<Result<_, _>>()?);
                        has_cycles = true;
                    }
                    _ => return Err(line.err(c, format!("unexpected {key:?} in {} document", b.kind))),
                }
            }
            if b.kind == "basis" {
                Document::Basis(basis)
            } else {
                Document::Graph { graph: g, basis: has_cycles.then_some(basis) }
            }
        }
        "descriptor" => {
            let line = it.next().ok_or_else(|| header.err(1, "missing surface line"))?;
            expect(line, "surface")?;
            let (oc, o) = line.tok(1)?;
            let orientable = match o {
                "orientable" => true,
                "nonorientable" => false,
                _ => return Err(line.err(oc, format!("expected orientable or nonorientable, found {o:?}"))),
            };
            let genus = line.uint(2)?;
            let boundary = (3..line.tokens.len()).map(|i| line.label(i)).collect::<Result<Vec<_>, _>>()?;
            let surface = SurfaceDescriptor::new(orientable, genus, boundary).map_err(|e| line.err(1, e.to_string()))?;
            let line = it.next().ok_or_else(|| header.err(1, "missing counts line"))?;
            expect(line, "counts")?;
            line.arity(4)?;
            let mut ctype = CriticalType::new(line.uint(1)?, line.uint(2)?, line.uint(3)?);
            let mut winding = None;
            for line in it.by_ref() {
                let (c, key) = line.tok(0)?;
                match key {
                    "sign" if winding.is_none() => {
                        line.arity(3)?;
                        let l = line.label(1)?;
                        if ctype.sign.keys().next_back().is_some_and(|p| *p >= l) {
                            return Err(line.err(line.tok(1)?.0, "sign labels must strictly increase"));
                        }
                        ctype.sign.insert(l, line.sign(2)?);
                    }
                    "winding" if winding.is_none() => {
                        winding = Some((1..line.tokens.len()).map(|i| line.int(i)).collect::<Result<Vec<_>, _>>()?);
                    }
                    _ => return Err(line.err(c, format!("unexpected {key:?} in descriptor"))),
                }
            }
            let winding = winding.ok_or_else(|| header.err(1, "missing winding line"))?;
            let d = MorseDescriptor { surface, ctype, winding: WindingVector(winding) };
            d.check().map_err(|e| header.err(1, e.to_string()))?;
            Document::Descriptor(d)
        }
        "certificate" => {
            let line = it.next().ok_or_else(|| header.err(1, "missing initial line"))?;
            expect(line, "initial")?;
            line.arity(2)?;
            let initial = hash_token(line, 1)?;
            let line = it.next().ok_or_else(|| header.err(1, "missing final line"))?;
            expect(line, "final")?;
            line.arity(2)?;
            let terminal = hash_token(line, 1)?;
            let mut moves = Vec::new();
            for line in it {
                expect(line, "move")?;
                moves.push(parse_move(line)?);
            }
            Document::Certificate(MoveCertificate { initial, terminal, moves })
        }
        "decision" => {
            let line = it.next().ok_or_else(|| header.err(1, "missing equivalent line"))?;
            expect(line, "equivalent")?;
            line.arity(2)?;
            let (c, v) = line.tok(1)?;
            let equivalent = match v {
                "true" => true,
                "false" => false,
                _ => return Err(line.err(c, format!("expected true or false, found {v:?}"))),
            };
            let line = it.next().ok_or_else(|| header.err(1, "missing reason line"))?;
            expect(line, "reason")?;
            let reason = parse_reason(line)?;
            if equivalent != (reason == Reason::Ok) {
                return Err(line.err(1, "reason must be ok exactly when equivalent"));
            }
            let search = match it.next() {
                None => None,
                Some(line) => {
                    expect(line, "search")?;
                    line.arity(2)?;
                    let (c, s) = line.tok(1)?;
                    Some(SearchStatus::from_name(s).ok_or_else(|| line.err(c, format!("unknown search status {s:?}")))?)
                }
            };
            if let Some(line) = it.next() {
                return Err(line.err(1, "unexpected line in decision"));
            }
            Document::Decision { decision: Decision { equivalent, reason }, search }
        }
        other => return Err(header.err(header.tok(2)?.0, format!("unknown document kind {other:?}"))),
    };
    Ok(doc)
}

fn hash_token(line: &Line<'_>, i: usize) -> Result<String, ParseError> {
    let (c, t) = line.tok(i)?;
    if t.len() == 64 && t.chars().all(|ch| ch.is_ascii_digit() || ('a'..='f').contains(&ch)) {
        Ok(t.to_string())
    } else {
        Err(line.err(c, "expected a 64-digit lowercase hex fingerprint"))
    }
}

/// Parse a stream of one or more documents.
pub fn parse_all(text: &str) -> Result<Vec<Document>, ParseError> {
    let mut docs = Vec::new();
    let mut lines = text.split('\n').enumerate().map(|(i, l)| Line::split(i + 1, l)).peekable();
    let mut last_no = 1;
    loop {
        let Some(header) = lines.next() else { break };
        last_no = header.no;
        if header.tokens.is_empty() {
            if lines.peek().is_none() && !docs.is_empty() {
                break;
            }
            return Err(header.err(1, "expected a document header"));
        }
        let (c, magic) = header.tok(0)?;
        if magic != MAGIC {
            return Err(header.err(c, format!("expected {MAGIC:?}")));
        }
        let (vc, v) = header.tok(1)?;
        if v != FORMAT_VERSION.to_string() {
            return Err(header.err(vc, format!("unsupported format version {v:?}")));
        }
        header.arity(3)?;
        let kind = header.tok(2)?.1;
        let mut body = Body { kind, lines: Vec::new() };
        let mut closed = false;
        for line in lines.by_ref() {
            last_no = line.no;
            if line.tokens.len() == 1 && line.tokens[0].1 == "end" {
                closed = true;
                break;
            }
            if line.tokens.is_empty() {
                return Err(line.err(1, "blank line inside document"));
            }
            body.lines.push(line);
        }
        if !closed {
            return Err(ParseError { line: last_no, column: 1, message: "missing end line".into() });
        }
        docs.push(parse_body(&body, &header)?);
    }
    if docs.is_empty() {
        return Err(ParseError { line: last_no, column: 1, message: "no document found".into() });
    }
    if !text.ends_with('\n') {
        return Err(ParseError { line: last_no, column: 1, message: "missing final newline".into() });
    }
    Ok(docs)
}

/// Parse exactly one document.
pub fn parse(text: &str) -> Result<Document, ParseError> {
    let mut docs = parse_all(text)?;
    if docs.len() != 1 {
        return Err(ParseError { line: 1, column: 1, message: format!("expected one document, found {}", docs.len()) });
    }
    Ok(docs.pop().unwrap())
}

/// Boundary sign map as text pairs; used by reports.
pub fn sign_map_text(m: &BTreeMap<String, Sign>) -> String {
    m.iter().map(|(l, s)| format!("{l}:{}", sign_text(*s))).collect::<Vec<_>>().join(",")
}
