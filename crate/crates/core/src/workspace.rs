//! Line-oriented workspace files.
//!
//! ```text
//! # comment
//! universe x1 x2 x3
//! params s1 s2
//! softset E {}
//! softset G { s1: x1 x2; s2: x3 }
//! space G
//! topology T = { E G }
//! epset Ev = mod(2: 0)
//! ideal I = gens(Ev; finite(1))
//! seq W = prefix[x1@s1] pattern[x2@s1 x3@s2]
//! ```
//!
//! `universe` and `params` come first. Topologies and sequences live in the
//! declared `space` (the absolute soft set if none is declared), so `space`
//! must precede them. Every topology is verified when it is declared.

use std::sync::Arc;

use crate::convergence::EpSoftSeq;
use crate::error::Error;
use crate::ideals::Ideal;
use crate::natset::EpSet;
use crate::softset::{Context, ParameterSet, SoftSet, Universe};
use crate::syntax::{ideal_to_string, tokenize, Cursor, ParseError, Tok};
use crate::topology::SoftTopology;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyDecl {
    /// Names of the soft sets listed as opens.
    pub members: Vec<String>,
    pub topology: SoftTopology,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Workspace {
    ctx: Arc<Context>,
    softsets: Vec<(String, SoftSet)>,
    space: Option<String>,
    topologies: Vec<(String, TopologyDecl)>,
    epsets: Vec<(String, EpSet)>,
    ideals: Vec<(String, Ideal)>,
    seqs: Vec<(String, EpSoftSeq)>,
}

fn find<'a, T>(items: &'a [(String, T)], name: &str) -> Option<&'a T> {
    items.iter().find(|(n, _)| n == name).map(|(_, v)| v)
}

fn unknown(kind: &'static str, name: &str) -> Error {
    Error::UnknownName { kind, name: name.to_string() }
}

impl Workspace {
    pub fn new(ctx: Arc<Context>) -> Workspace {
        Workspace {
            ctx,
            softsets: Vec::new(),
            space: None,
            topologies: Vec::new(),
            epsets: Vec::new(),
            ideals: Vec::new(),
            seqs: Vec::new(),
        }
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    /// The declared space, or the absolute soft set.
    pub fn ambient(&self) -> SoftSet {
        match &self.space {
            Some(name) => find(&self.softsets, name).expect("space refers to a declared soft set").clone(),
            None => SoftSet::absolute(&self.ctx),
        }
    }

    pub fn softset(&self, name: &str) -> Result<&SoftSet, Error> {
        find(&self.softsets, name).ok_or_else(|| unknown("softset", name))
    }

    pub fn topology(&self, name: &str) -> Result<&SoftTopology, Error> {
        find(&self.topologies, name).map(|d| &d.topology).ok_or_else(|| unknown("topology", name))
    }

    pub fn epset(&self, name: &str) -> Result<&EpSet, Error> {
        find(&self.epsets, name).ok_or_else(|| unknown("epset", name))
    }

    pub fn ideal(&self, name: &str) -> Result<&Ideal, Error> {
        find(&self.ideals, name).ok_or_else(|| unknown("ideal", name))
    }

    pub fn seq(&self, name: &str) -> Result<&EpSoftSeq, Error> {
        find(&self.seqs, name).ok_or_else(|| unknown("seq", name))
    }

    pub fn softsets(&self) -> &[(String, SoftSet)] {
        &self.softsets
    }

    pub fn topologies(&self) -> &[(String, TopologyDecl)] {
        &self.topologies
    }

    pub fn ideals(&self) -> &[(String, Ideal)] {
        &self.ideals
    }

    pub fn seqs(&self) -> &[(String, EpSoftSeq)] {
        &self.seqs
    }

    /// Resolves an ideal given either as a declared name or as an expression.
    pub fn resolve_ideal(&self, text: &str) -> Result<Ideal, ParseError> {
        let tokens = tokenize(text)?;
        let mut c = Cursor::new(&tokens, text.chars().count());
        let i = c.ideal(&|n| self.epset(n).ok().cloned(), &|n| self.ideal(n).ok().cloned())?;
        c.finish()?;
        Ok(i)
    }

    fn check_fresh<T>(items: &[(String, T)], kind: &'static str, name: &str) -> Result<(), Error> {
        if find(items, name).is_some() {
            return Err(Error::DuplicateName { kind, name: name.to_string() });
        }
        Ok(())
    }

    pub fn add_softset(&mut self, name: &str, set: SoftSet) -> Result<(), Error> {
        Self::check_fresh(&self.softsets, "softset", name)?;
        if set.context() != &self.ctx && **set.context() != *self.ctx {
            return Err(Error::ContextMismatch);
        }
        self.softsets.push((name.to_string(), set));
        Ok(())
    }

    pub fn set_space(&mut self, name: &str) -> Result<(), Error> {
        if self.space.is_some() {
            return Err(Error::DuplicateName { kind: "space declaration", name: name.to_string() });
        }
        self.softset(name)?;
        self.space = Some(name.to_string());
        Ok(())
    }

    pub fn add_topology(&mut self, name: &str, members: Vec<String>) -> Result<(), Error> {
        Self::check_fresh(&self.topologies, "topology", name)?;
        let opens = members.iter().map(|m| self.softset(m).cloned()).collect::<Result<Vec<_>, _>>()?;
        let topology = SoftTopology::new(self.ambient(), opens)?;
        self.topologies.push((name.to_string(), TopologyDecl { members, topology }));
        Ok(())
    }

    pub fn add_epset(&mut self, name: &str, set: EpSet) -> Result<(), Error> {
        Self::check_fresh(&self.epsets, "epset", name)?;
        self.epsets.push((name.to_string(), set));
        Ok(())
    }

    pub fn add_ideal(&mut self, name: &str, ideal: Ideal) -> Result<(), Error> {
        Self::check_fresh(&self.ideals, "ideal", name)?;
        self.ideals.push((name.to_string(), ideal));
        Ok(())
    }

    pub fn add_seq(&mut self, name: &str, seq: EpSoftSeq) -> Result<(), Error> {
        Self::check_fresh(&self.seqs, "seq", name)?;
        if seq.ambient() != &self.ambient() {
            return Err(Error::AmbientMismatch);
        }
        self.seqs.push((name.to_string(), seq));
        Ok(())
    }

    /// Renders the workspace in the file format; `header` lines become
    /// leading comments.
    pub fn to_text(&self, header: &[String]) -> String {
        let mut out = String::new();
        for line in header {
            out.push_str(&format!("# {line}\n"));
        }
        out.push_str(&format!("universe {}\n", self.ctx.universe().names().join(" ")));
        out.push_str(&format!("params {}\n", self.ctx.params().names().join(" ")));
        for (name, set) in &self.softsets {
            out.push_str(&format!("softset {name} {set}\n"));
        }
        if let Some(space) = &self.space {
            out.push_str(&format!("space {space}\n"));
        }
        for (name, set) in &self.epsets {
            out.push_str(&format!("epset {name} = {set}\n"));
        }
        for (name, ideal) in &self.ideals {
            out.push_str(&format!("ideal {name} = {}\n", ideal_to_string(ideal)));
        }
        for (name, decl) in &self.topologies {
            out.push_str(&format!("topology {name} = {{ {} }}\n", decl.members.join(" ")));
        }
        for (name, seq) in &self.seqs {
            out.push_str(&format!("seq {name} = {seq}\n"));
        }
        out
    }
}

struct Builder {
    universe: Option<Universe>,
    params: Option<ParameterSet>,
    ws: Option<Workspace>,
    used_ambient: bool,
}

impl Builder {
    fn ws(&mut self, column: usize) -> Result<&mut Workspace, ParseError> {
        if self.ws.is_none() {
            match (self.universe.take(), self.params.take()) {
                (Some(u), Some(s)) => self.ws = Some(Workspace::new(Context::new(u, s))),
                (u, s) => {
                    self.universe = u;
                    self.params = s;
                    return Err(ParseError::new(column, "`universe` and `params` must be declared first"));
                }
            }
        }
        Ok(self.ws.as_mut().expect("initialized above"))
    }

    fn names(c: &mut Cursor) -> Result<Vec<String>, ParseError> {
        let mut out = Vec::new();
        while !c.at_end() {
            out.push(c.ident()?.0.to_string());
        }
        if out.is_empty() {
            return Err(c.error("expected at least one name"));
        }
        Ok(out)
    }

    fn declaration(&mut self, c: &mut Cursor) -> Result<(), ParseError> {
        let (keyword, kw_col) = c.ident()?;
        let sem = |column: usize| move |e: Error| ParseError::caused_by(column, e);
        match keyword {
            "universe" => {
                if self.universe.is_some() || self.ws.is_some() {
                    return Err(ParseError::new(kw_col, "duplicate `universe` declaration"));
                }
                self.universe = Some(Universe::new(Self::names(c)?).map_err(sem(kw_col))?);
            }
            "params" => {
                if self.params.is_some() || self.ws.is_some() {
                    return Err(ParseError::new(kw_col, "duplicate `params` declaration"));
                }
                self.params = Some(ParameterSet::new(Self::names(c)?).map_err(sem(kw_col))?);
            }
            "softset" => {
                let (name, col) = c.ident()?;
                let ws = self.ws(kw_col)?;
                let set = softset_body(c, ws.context())?;
                c.finish()?;
                ws.add_softset(name, set).map_err(sem(col))?;
            }
            "space" => {
                let (name, col) = c.ident()?;
                c.finish()?;
                if self.used_ambient {
                    return Err(ParseError::new(kw_col, "`space` must come before topologies and sequences"));
                }
                self.ws(kw_col)?.set_space(name).map_err(sem(col))?;
            }
            "topology" => {
                let (name, col) = c.ident()?;
                c.expect('=')?;
                let open_col = c.column();
                c.expect('{')?;
                let mut members = Vec::new();
                while !c.eat('}') {
                    if c.at_end() {
                        return Err(c.error("expected `}`"));
                    }
                    let (m, mcol) = c.ident()?;
                    self.ws(kw_col)?.softset(m).map_err(sem(mcol))?;
                    members.push(m.to_string());
                }
                c.finish()?;
                self.used_ambient = true;
                let ws = self.ws(kw_col)?;
                Workspace::check_fresh(&ws.topologies, "topology", name).map_err(sem(col))?;
                ws.add_topology(name, members).map_err(sem(open_col))?;
            }
            "epset" => {
                let (name, col) = c.ident()?;
                c.expect('=')?;
                let ws = self.ws(kw_col)?;
                let set = c.epset(&|n| ws.epset(n).ok().cloned())?;
                c.finish()?;
                ws.add_epset(name, set).map_err(sem(col))?;
            }
            "ideal" => {
                let (name, col) = c.ident()?;
                c.expect('=')?;
                let ws = self.ws(kw_col)?;
                let ideal = c.ideal(&|n| ws.epset(n).ok().cloned(), &|n| ws.ideal(n).ok().cloned())?;
                c.finish()?;
                ws.add_ideal(name, ideal).map_err(sem(col))?;
            }
            "seq" => {
                let (name, col) = c.ident()?;
                c.expect('=')?;
                self.used_ambient = true;
                let ws = self.ws(kw_col)?;
                let seq = seq_body(c, ws)?;
                ws.add_seq(name, seq).map_err(sem(col))?;
            }
            other => return Err(ParseError::new(kw_col, format!("unknown declaration `{other}`"))),
        }
        Ok(())
    }
}

/// `{ p: e e; p: e }`
fn softset_body(c: &mut Cursor, ctx: &Arc<Context>) -> Result<SoftSet, ParseError> {
    c.expect('{')?;
    let mut entries: Vec<(String, Vec<String>)> = Vec::new();
    loop {
        if c.eat('}') {
            break;
        }
        if c.eat(';') {
            continue;
        }
        let (param, pcol) = c.ident()?;
        ctx.param_index(param).map_err(|e| ParseError::caused_by(pcol, e))?;
        c.expect(':')?;
        let mut elems = Vec::new();
        while c.is_ident() {
            let (e, ecol) = c.ident()?;
            ctx.element_index(e).map_err(|err| ParseError::caused_by(ecol, err))?;
            elems.push(e.to_string());
        }
        entries.push((param.to_string(), elems));
        if !matches!(c.peek(), Some(Tok::Sym(';')) | Some(Tok::Sym('}'))) {
            return Err(c.error("expected `;` or `}`"));
        }
    }
    SoftSet::new(ctx, &entries).map_err(|e| ParseError::caused_by(c.column(), e))
}

fn point_list(c: &mut Cursor, ws: &Workspace, ambient: &SoftSet) -> Result<Vec<crate::softset::SoftPoint>, ParseError> {
    c.expect('[')?;
    let mut out = Vec::new();
    while !c.eat(']') {
        if c.at_end() {
            return Err(c.error("expected `]`"));
        }
        let (text, col) = c.point()?;
        let p = ws.context().parse_point(&text).map_err(|e| ParseError::caused_by(col, e))?;
        if !ambient.contains_point(p) {
            return Err(ParseError::caused_by(col, Error::PointOutsideSpace { point: text }));
        }
        out.push(p);
    }
    Ok(out)
}

/// `[prefix[...]] pattern[...]`
fn seq_body(c: &mut Cursor, ws: &Workspace) -> Result<EpSoftSeq, ParseError> {
    let ambient = ws.ambient();
    let mut prefix = Vec::new();
    if matches!(c.peek(), Some(Tok::Ident(s)) if s == "prefix") {
        c.ident()?;
        prefix = point_list(c, ws, &ambient)?;
    }
    let (kw, col) = c.ident()?;
    if kw != "pattern" {
        return Err(ParseError::new(col, format!("expected `pattern`, found `{kw}`")));
    }
    let pattern = point_list(c, ws, &ambient)?;
    if pattern.is_empty() {
        return Err(ParseError::caused_by(col, Error::EmptyPattern));
    }
    c.finish()?;
    EpSoftSeq::new(&ambient, prefix, pattern).map_err(|e| ParseError::caused_by(col, e))
}

/// Parses a workspace file.
pub fn parse_workspace(text: &str) -> Result<Workspace, ParseError> {
    let mut b = Builder { universe: None, params: None, ws: None, used_ambient: false };
    for (i, line) in text.lines().enumerate() {
        let tokens = tokenize(line).map_err(|e| e.at_line(i + 1))?;
        if tokens.is_empty() {
            continue;
        }
        let mut c = Cursor::new(&tokens, line.chars().count());
        b.declaration(&mut c).map_err(|e| e.at_line(i + 1))?;
    }
    let last = text.lines().count().max(1);
    b.ws(1).map_err(|e| e.at_line(last))?;
    Ok(b.ws.expect("checked above"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::AxiomViolation;

    const UNIVERSITY: &str = "\
# five universities
universe x1 x2 x3 x4 x5
params s1 s2 s3 s4
softset G { s1: x1; s2: x1 x3 x5; s3: x1 x4 x5 }
";

    const SIERPINSKI: &str = "\
universe a b
params s
softset E {}
softset A { s: a }
softset X { s: a b }
space X
topology T = { E A X }
epset Ev = mod(2:0)
ideal Iev = gens(Ev)
ideal Odd = gens(mod(2:1) + finite(0))
seq W = pattern[a@s b@s]
seq V = prefix[b@s] pattern[a@s]
";

    #[test]
    fn university_file() {
        let ws = parse_workspace(UNIVERSITY).unwrap();
        let g = ws.softset("G").unwrap();
        assert_eq!(g.point_count(), 7);
        assert!(g.contains_point(ws.context().parse_point("x4@s3").unwrap()));
        assert!(g.value_of("s4").unwrap().is_empty());
        assert_eq!(ws.ambient(), SoftSet::absolute(ws.context()));
    }

    #[test]
    fn sierpinski_file() {
        let ws = parse_workspace(SIERPINSKI).unwrap();
        let t = ws.topology("T").unwrap();
        assert_eq!(t.open_masks(), &[0, 1, 3]);
        assert_eq!(ws.ideal("Iev").unwrap().generators(), &[EpSet::from_residues(2, &[0]).unwrap()]);
        assert_eq!(ws.seq("W").unwrap().period(), 2);
        assert_eq!(ws.resolve_ideal("Iev").unwrap(), *ws.ideal("Iev").unwrap());
        assert_eq!(ws.resolve_ideal("gens(Ev)").unwrap(), *ws.ideal("Iev").unwrap());
        assert_eq!(ws.resolve_ideal("fin").unwrap(), Ideal::finite());
    }

    #[test]
    fn round_trip() {
        for text in [UNIVERSITY, SIERPINSKI] {
            let ws = parse_workspace(text).unwrap();
            let again = parse_workspace(&ws.to_text(&["regenerated".into()])).unwrap();
            assert_eq!(again, ws);
        }
    }

    #[test]
    fn missing_empty_open() {
        let text = "universe a\nparams s\nsoftset G { s: a }\nspace G\ntopology T = { G }\n";
        let err = parse_workspace(text).unwrap_err();
        assert_eq!(err.line, 5);
        assert_eq!(err.cause, Some(Error::Axiom(AxiomViolation::MissingEmpty)));
        assert!(err.message.contains("axiom (i)"));
    }

    #[test]
    fn duplicate_names() {
        let text = "universe a\nparams s\nsoftset G { s: a }\nsoftset G {}\n";
        let err = parse_workspace(text).unwrap_err();
        assert_eq!((err.line, err.column), (4, 9));
        assert!(err.message.contains("duplicate softset name `G`"));
    }

    #[test]
    fn diagnostics_have_positions() {
        let err = parse_workspace("universe a\nparams s\nsoftset G { s: b }\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 16));
        let err = parse_workspace("softset G {}\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = parse_workspace("universe a\nparams s\nseq W = pattern[]\n").unwrap_err();
        assert_eq!(err.cause, Some(Error::EmptyPattern));
        let err = parse_workspace("universe a\nparams s\ntopology T = { Q }\n").unwrap_err();
        assert!(err.message.contains("unknown softset `Q`"));
        let err = parse_workspace("universe a\nparams s\nfrobnicate\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 1));
        let err = parse_workspace("universe a b\nparams s\nsoftset A { s: a }\nspace A\nseq W = pattern[b@s]\n").unwrap_err();
        assert!(matches!(err.cause, Some(Error::PointOutsideSpace { .. })));
        assert!(parse_workspace("").is_err());
    }
}
