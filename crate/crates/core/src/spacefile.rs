//! Text format for finite spaces.
//!
//! ```text
//! # comment
//! space NAME N
//! elements a b c
//! kind uniformity            # or quasi-uniformity
//! entourage (a,a) (a,b) ...  # one basis element per line
//! covering {a,b} {c}         # one covering per line
//! open {a,b}                 # one open set per line
//! dense a b                  # pair files: the dense subset
//! ```
//!
//! Labels are runs of letters, digits and `_ . ' + -`. Sections may appear in
//! any order after `elements`. The canonical form lists elements in sorted
//! order (numerals numerically, first), sorts the pairs/blocks inside each
//! line, and keeps lines in file order; printing it back is byte-identical.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quniform::{normalize_covering, Covering, CoveringFamily, QUniformity};
use crate::relation::{FiniteSet, Relation, Subset};
use crate::topology::FiniteTopology;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Word(String),
    Punct(char),
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub column: usize,
}

pub(crate) fn is_label_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '\'' | '+' | '-' | '/')
}

/// Splits one line into tokens, dropping a trailing `#` comment.
pub(crate) fn tokenize(line_no: usize, line: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (_, c) = chars[i];
        let column = i + 1;
        if c == '#' {
            break;
        } else if c.is_whitespace() {
            i += 1;
        } else if "(){}[],;=".contains(c) {
            out.push(Token { tok: Tok::Punct(c), column });
            i += 1;
        } else if is_label_char(c) {
            let start = i;
            while i < chars.len() && is_label_char(chars[i].1) {
                i += 1;
            }
            let word: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push(Token { tok: Tok::Word(word), column });
        } else {
            return Err(Error::parse(line_no, column, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// Cursor over the tokens of one line.
pub(crate) struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token], line: usize, line_len: usize) -> Self {
        Cursor { toks, pos: 0, line, end_column: line_len + 1 }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.column(), message)
    }

    pub fn word(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    pub fn punct(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(Tok::Punct(p)) if *p == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected `{c}`"))),
        }
    }

    pub fn eat(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Tok::Punct(p)) if *p == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }
}

/// Numerals first in numeric order, then the rest lexicographically.
pub fn label_order(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Uniformity,
    QuasiUniformity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceFile {
    pub name: String,
    pub base: Arc<FiniteSet>,
    pub kind: Option<Kind>,
    pub entourages: Vec<Relation>,
    pub coverings: Vec<Covering>,
    pub opens: Vec<Subset>,
    pub dense: Option<Subset>,
}

impl SpaceFile {
    pub fn new(name: impl Into<String>, base: &Arc<FiniteSet>) -> Self {
        SpaceFile {
            name: name.into(),
            base: base.clone(),
            kind: None,
            entourages: Vec::new(),
            coverings: Vec::new(),
            opens: Vec::new(),
            dense: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut next_content = || -> Result<Option<(usize, usize, Vec<Token>)>> {
            for (no, l) in lines.by_ref() {
                let toks = tokenize(no, l)?;
                if !toks.is_empty() {
                    return Ok(Some((no, l.chars().count(), toks)));
                }
            }
            Ok(None)
        };
        let (no, len, toks) = next_content()?.ok_or_else(|| Error::parse(1, 1, "missing `space` header"))?;
        let mut c = Cursor::new(&toks, no, len);
        if c.word("`space`")? != "space" {
            return Err(Error::parse(no, 1, "expected `space` header"));
        }
        let name = c.word("space name")?;
        let col = c.column();
        let count: usize = c
            .word("element count")?
            .parse()
            .map_err(|_| Error::parse(no, col, "element count must be a nonnegative integer"))?;
        c.finish()?;

        let (no, len, toks) = next_content()?.ok_or_else(|| Error::parse(no + 1, 1, "missing `elements` line"))?;
        let mut c = Cursor::new(&toks, no, len);
        if c.word("`elements`")? != "elements" {
            return Err(Error::parse(no, 1, "expected `elements` line"));
        }
        let mut labels = Vec::new();
        while !c.at_end() {
            labels.push(c.word("element label")?);
        }
        if labels.len() != count {
            return Err(Error::parse(no, 1, format!("header declares {count} elements, found {}", labels.len())));
        }
        let base = FiniteSet::new(labels).map_err(|e| Error::parse(no, 1, e.to_string()))?;
        let mut file = SpaceFile::new(name, &base);

        while let Some((no, len, toks)) = next_content()? {
            let mut c = Cursor::new(&toks, no, len);
            let keyword = c.word("section keyword")?;
            match keyword.as_str() {
                "kind" => {
                    let col = c.column();
                    file.kind = Some(match c.word("kind")?.as_str() {
                        "uniformity" => Kind::Uniformity,
                        "quasi-uniformity" => Kind::QuasiUniformity,
                        other => return Err(Error::parse(no, col, format!("unknown kind `{other}`"))),
                    });
                }
                "entourage" => {
                    let mut pairs = Vec::new();
                    while !c.at_end() {
                        c.punct('(')?;
                        let a = file.label(&mut c)?;
                        c.punct(',')?;
                        let b = file.label(&mut c)?;
                        c.punct(')')?;
                        pairs.push((a, b));
                    }
                    file.entourages.push(Relation::from_pairs(&base, pairs)?);
                }
                "covering" => {
                    let mut blocks = Vec::new();
                    while !c.at_end() {
                        blocks.push(file.braced(&mut c)?);
                    }
                    file.coverings.push(normalize_covering(blocks));
                }
                "open" => file.opens.push(file.braced(&mut c)?),
                "dense" => {
                    let mut s = Subset::with_capacity(base.size());
                    while !c.at_end() {
                        s.insert(file.label(&mut c)?);
                    }
                    file.dense = Some(s);
                }
                other => return Err(Error::parse(no, 1, format!("unknown section `{other}`"))),
            }
            c.finish()?;
        }
        Ok(file)
    }

    fn label(&self, c: &mut Cursor<'_>) -> Result<usize> {
        let col = c.column();
        let w = c.word("element label")?;
        self.base.index_of(&w).map_err(|_| Error::parse(c.line, col, format!("unknown label `{w}`")))
    }

    fn braced(&self, c: &mut Cursor<'_>) -> Result<Subset> {
        c.punct('{')?;
        let mut s = Subset::with_capacity(self.base.size());
        if !c.eat('}') {
            loop {
                s.insert(self.label(c)?);
                if c.eat('}') {
                    break;
                }
                c.punct(',')?;
            }
        }
        Ok(s)
    }

    fn sorted_labels(&self, s: impl Iterator<Item = usize>) -> Vec<&str> {
        let mut v: Vec<&str> = s.map(|i| self.base.label(i)).collect();
        v.sort_by(|a, b| label_order(a, b));
        v
    }

    fn format_braced(&self, s: &Subset) -> String {
        format!("{{{}}}", self.sorted_labels(s.ones()).join(","))
    }

    /// Canonical text.
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "space {} {}", self.name, self.base.size());
        let _ = writeln!(out, "elements {}", self.sorted_labels(0..self.base.size()).join(" "));
        if let Some(kind) = self.kind {
            let k = match kind {
                Kind::Uniformity => "uniformity",
                Kind::QuasiUniformity => "quasi-uniformity",
            };
            let _ = writeln!(out, "kind {k}");
        }
        for e in &self.entourages {
            let mut pairs: Vec<(&str, &str)> =
                e.pairs().map(|(a, b)| (self.base.label(a), self.base.label(b))).collect();
            pairs.sort_by(|p, q| label_order(p.0, q.0).then_with(|| label_order(p.1, q.1)));
            out.push_str("entourage");
            for (a, b) in pairs {
                let _ = write!(out, " ({a},{b})");
            }
            out.push('\n');
        }
        for cov in &self.coverings {
            let mut blocks: Vec<(Vec<&str>, String)> =
                cov.iter().map(|b| (self.sorted_labels(b.ones()), self.format_braced(b))).collect();
            blocks.sort_by(|x, y| cmp_label_lists(&x.0, &y.0));
            out.push_str("covering");
            for (_, s) in blocks {
                let _ = write!(out, " {s}");
            }
            out.push('\n');
        }
        for o in &self.opens {
            let _ = writeln!(out, "open {}", self.format_braced(o));
        }
        if let Some(d) = &self.dense {
            let _ = writeln!(out, "dense {}", self.sorted_labels(d.ones()).join(" "));
        }
        out
    }

    /// The (quasi-)uniformity of the entourage section. Defaults to a
    /// uniformity when no `kind` line is present.
    pub fn quniformity(&self) -> Result<QUniformity> {
        let symmetric = self.kind != Some(Kind::QuasiUniformity);
        QUniformity::new(&self.base, self.entourages.clone(), symmetric)
    }

    pub fn covering_family(&self) -> Result<CoveringFamily> {
        CoveringFamily::new(&self.base, self.coverings.clone())
    }

    /// The topology of the `open` section. `∅` and `X` are implied.
    pub fn topology(&self) -> Result<FiniteTopology> {
        let n = self.base.size();
        let mut opens = self.opens.clone();
        opens.push(Subset::with_capacity(n));
        opens.push(crate::relation::full_subset(n));
        FiniteTopology::from_opens(&self.base, &opens)
    }

    pub fn from_quniformity(name: &str, u: &QUniformity) -> Self {
        let mut f = SpaceFile::new(name, u.base());
        f.kind = Some(if u.is_symmetric_flag() { Kind::Uniformity } else { Kind::QuasiUniformity });
        for e in u.basis() {
            if !f.entourages.contains(e) {
                f.entourages.push(e.clone());
            }
        }
        f
    }

    pub fn from_covering_family(name: &str, t: &CoveringFamily) -> Self {
        let mut f = SpaceFile::new(name, t.base());
        f.coverings = t.coverings().to_vec();
        f
    }

    /// Lists every nontrivial open (excluding `∅` and `X`).
    pub fn from_topology(name: &str, t: &FiniteTopology) -> Result<Self> {
        let n = t.size();
        let mut f = SpaceFile::new(name, t.base());
        f.opens = t.opens()?.into_iter().filter(|o| !o.is_clear() && o.count_ones(..) != n).collect();
        Ok(f)
    }
}

fn cmp_label_lists(a: &[&str], b: &[&str]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match label_order(x, y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "space S 3\nelements 0 1 2\nkind uniformity\nentourage (0,0) (0,1) (1,0) (1,1) (2,2)\ncovering {0,1} {2}\nopen {2}\n";

    #[test]
    fn canonical_roundtrip_is_byte_identical() {
        let f = SpaceFile::parse(SAMPLE).unwrap();
        assert_eq!(f.to_canonical_string(), SAMPLE);
        assert!(f.quniformity().unwrap().check().unwrap().is_uniformity);
    }

    #[test]
    fn non_canonical_input_normalizes() {
        let text = "# header\nspace S 3\nelements 2 b 0\n\nentourage (b,b) (0,0) (2,2)  # diag\ncovering {b} {2,0}\ndense b 0\n";
        let f = SpaceFile::parse(text).unwrap();
        let canon = f.to_canonical_string();
        assert_eq!(canon, "space S 3\nelements 0 2 b\nentourage (0,0) (2,2) (b,b)\ncovering {0,2} {b}\ndense 0 b\n");
        assert_eq!(SpaceFile::parse(&canon).unwrap().to_canonical_string(), canon);
    }

    #[test]
    fn errors_cite_positions() {
        let e = SpaceFile::parse("space S 2\nelements a b\nentourage (a,c)\n").unwrap_err();
        assert_eq!(e, Error::parse(3, 14, "unknown label `c`"));
        let e = SpaceFile::parse("space S 2\nelements a b\nentourage (a b)\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, column: 14, .. }));
        let e = SpaceFile::parse("space S 3\nelements a b\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = SpaceFile::parse("space S 1\nelements a\nbogus\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, column: 1, .. }));
        let e = SpaceFile::parse("space S 1\nelements a\nopen {a} $\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, column: 10, .. }));
    }

    #[test]
    fn empty_basis_surfaces_on_check() {
        let f = SpaceFile::parse("space E 2\nelements a b\nkind uniformity\n").unwrap();
        assert_eq!(f.quniformity().unwrap().check().unwrap_err(), Error::EmptyBasis);
    }

    #[test]
    fn topology_section() {
        let f = SpaceFile::parse("space Sier 2\nelements 0 1\nopen {1}\n").unwrap();
        assert_eq!(f.topology().unwrap(), FiniteTopology::sierpinski());
        let back = SpaceFile::from_topology("Sier", &FiniteTopology::sierpinski()).unwrap();
        assert_eq!(back.to_canonical_string(), "space Sier 2\nelements 0 1\nopen {1}\n");
    }
}
