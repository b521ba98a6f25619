//! The `.quiv` text format.
//!
//! ```text
//! # comment
//! field GF 2
//! quiver
//!   vertex 1
//!   vertex 2
//!   arrow a 1 2
//!   arrow x 2 2
//! end
//! order lenlex x < a
//! relations
//!   x*x
//!   a*x - 2/3*a*x*x
//! end
//! ```

use num_bigint::BigInt;

use crate::algebra::Algebra;
use crate::element::FreeElement;
use crate::error::{Error, Result};
use crate::groebner::DEFAULT_CAP;
use crate::order::AdmissibleOrder;
use crate::quiver::{Path, Quiver};
use crate::scalar::Field;

/// A parsed input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub field: Field,
    pub quiver: Quiver,
    /// Arrows listed in the order line, smallest first.
    pub precedence: Vec<String>,
    pub relations: Vec<FreeElement>,
}

impl AlgebraSpec {
    pub fn order(&self) -> Result<AdmissibleOrder> {
        let listed: Vec<_> = self
            .precedence
            .iter()
            .map(|n| {
                self.quiver.arrow(n).ok_or_else(|| Error::Semantic {
                    token: n.clone(),
                    message: "unknown arrow in order".into(),
                })
            })
            .collect::<Result<_>>()?;
        AdmissibleOrder::with_precedence(&self.quiver, &listed)
    }

    pub fn algebra(&self) -> Result<Algebra> {
        self.algebra_with_cap(DEFAULT_CAP)
    }

    pub fn algebra_with_cap(&self, cap: usize) -> Result<Algebra> {
        Algebra::new(
            self.quiver.clone(),
            self.field,
            self.order()?,
            self.relations.clone(),
            cap,
        )
    }

    /// Canonical text; `parse(&spec.print())` gives back `spec`.
    pub fn print(&self) -> String {
        let q = &self.quiver;
        let mut out = String::new();
        match self.field {
            Field::Rationals => out.push_str("field Q\n"),
            Field::Prime(p) => out.push_str(&format!("field GF {p}\n")),
        }
        out.push_str("quiver\n");
        for v in q.vertices() {
            out.push_str(&format!("  vertex {}\n", q.vertex_name(v)));
        }
        for a in q.arrows() {
            out.push_str(&format!(
                "  arrow {} {} {}\n",
                q.arrow_name(*a),
                q.vertex_name(a.source()),
                q.vertex_name(a.target())
            ));
        }
        out.push_str("end\n");
        if !self.precedence.is_empty() {
            out.push_str(&format!("order lenlex {}\n", self.precedence.join(" < ")));
        }
        out.push_str("relations\n");
        let order = self.order().unwrap_or_else(|_| AdmissibleOrder::length_lex(q));
        for r in &self.relations {
            out.push_str(&format!("  {}\n", r.render(q, &order)));
        }
        out.push_str("end\n");
        out
    }
}

pub fn parse_file(path: &std::path::Path) -> Result<AlgebraSpec> {
    parse(&std::fs::read_to_string(path)?)
}

#[derive(PartialEq)]
enum Section {
    Top,
    Quiver,
    Relations,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn semantic(line: usize, token: &str, message: impl Into<String>) -> Error {
    Error::Semantic {
        token: token.to_string(),
        message: format!("line {line}: {}", message.into()),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// Whitespace-separated words with their 1-based columns.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(s, w)| (line[..s].chars().count() + 1, w))
        .collect()
}

pub fn parse(text: &str) -> Result<AlgebraSpec> {
    let mut field: Option<Field> = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<(String, String, String)> = Vec::new();
    let mut precedence: Option<Vec<String>> = None;
    let mut raw_relations: Vec<(usize, usize, String)> = Vec::new();
    let mut section = Section::Top;
    let mut seen_quiver = false;
    let mut seen_relations = false;
    let mut last_line = 0;

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let ws = words(content);
        let Some(&(col, head)) = ws.first() else {
            continue;
        };
        match section {
            Section::Top => match head {
                "field" => {
                    if field.is_some() {
                        return Err(syntax(line_no, col, "field declared twice"));
                    }
                    field = Some(match ws.get(1).map(|w| w.1) {
                        Some("Q") if ws.len() == 2 => Field::Rationals,
                        Some("GF") if ws.len() == 3 => {
                            let (pc, pt) = ws[2];
                            let p: u64 = pt.parse().map_err(|_| syntax(line_no, pc, "expected a prime"))?;
                            Field::prime(p).map_err(|e| syntax(line_no, pc, e.to_string()))?
                        }
                        _ => return Err(syntax(line_no, col, "expected `field Q` or `field GF <p>`")),
                    });
                }
                "quiver" => {
                    if ws.len() != 1 {
                        return Err(syntax(line_no, ws[1].0, "unexpected token after `quiver`"));
                    }
                    if seen_quiver {
                        return Err(syntax(line_no, col, "quiver declared twice"));
                    }
                    seen_quiver = true;
                    section = Section::Quiver;
                }
                "order" => {
                    if precedence.is_some() {
                        return Err(syntax(line_no, col, "order declared twice"));
                    }
                    match ws.get(1) {
                        Some(&(_, "lenlex")) => {}
                        Some(&(c, other)) => return Err(syntax(line_no, c, format!("unknown order kind `{other}`"))),
                        None => return Err(syntax(line_no, col, "expected an order kind")),
                    }
                    let mut names = Vec::new();
                    for (k, &(c, w)) in ws.iter().enumerate().skip(2) {
                        let expect_name = k % 2 == 0;
                        if expect_name {
                            if !is_identifier(w) {
                                return Err(syntax(line_no, c, "expected an arrow name"));
                            }
                            names.push(w.to_string());
                        } else if w != "<" {
                            return Err(syntax(line_no, c, "expected `<`"));
                        }
                    }
                    if ws.len() > 2 && ws.len().is_multiple_of(2) {
                        return Err(syntax(line_no, ws[ws.len() - 1].0, "dangling `<`"));
                    }
                    precedence = Some(names);
                }
                "relations" => {
                    if ws.len() != 1 {
                        return Err(syntax(line_no, ws[1].0, "unexpected token after `relations`"));
                    }
                    if seen_relations {
                        return Err(syntax(line_no, col, "relations declared twice"));
                    }
                    seen_relations = true;
                    section = Section::Relations;
                }
                other => return Err(syntax(line_no, col, format!("unexpected `{other}`"))),
            },
            Section::Quiver => match head {
                "end" if ws.len() == 1 => section = Section::Top,
                "vertex" => {
                    if ws.len() != 2 {
                        return Err(syntax(line_no, col, "expected `vertex <id>`"));
                    }
                    vertices.push(ws[1].1.to_string());
                }
                "arrow" => {
                    if ws.len() != 4 {
                        return Err(syntax(line_no, col, "expected `arrow <id> <source> <target>`"));
                    }
                    if !is_identifier(ws[1].1) {
                        return Err(syntax(line_no, ws[1].0, "arrow ids must start with a letter"));
                    }
                    arrows.push((ws[1].1.into(), ws[2].1.into(), ws[3].1.into()));
                }
                other => return Err(syntax(line_no, col, format!("unexpected `{other}` in quiver block"))),
            },
            Section::Relations => {
                if head == "end" && ws.len() == 1 {
                    section = Section::Top;
                } else {
                    let offset = content.len() - content.trim_start().len();
                    raw_relations.push((line_no, offset + 1, content.trim().to_string()));
                }
            }
        }
    }
    match section {
        Section::Quiver => return Err(syntax(last_line + 1, 1, "missing `end` of quiver block")),
        Section::Relations => return Err(syntax(last_line + 1, 1, "missing `end` of relations block")),
        Section::Top => {}
    }
    let field = field.ok_or_else(|| syntax(1, 1, "missing field declaration"))?;
    if !seen_quiver {
        return Err(syntax(last_line.max(1), 1, "missing quiver block"));
    }
    let quiver = Quiver::new(vertices, arrows)?;
    let precedence = precedence.unwrap_or_default();
    for name in &precedence {
        if quiver.arrow(name).is_none() {
            return Err(Error::Semantic {
                token: name.clone(),
                message: "unknown arrow in order".into(),
            });
        }
    }
    let mut relations = Vec::new();
    for (line_no, col, text) in raw_relations {
        let z = parse_element_at(&quiver, field, &text, line_no, col)?;
        if !z.is_relation() {
            return Err(semantic(
                line_no,
                &text,
                "not a relation (paths of length at least two with common endpoints)",
            ));
        }
        relations.push(z);
    }
    let spec = AlgebraSpec {
        field,
        quiver,
        precedence,
        relations,
    };
    spec.order()?;
    Ok(spec)
}

/// Parses a linear combination such as `2/3*a*b - c*d` or `e_1`.
pub fn parse_element(q: &Quiver, field: Field, text: &str) -> Result<FreeElement> {
    parse_element_at(q, field, text, 1, 1)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Num(&'a str),
    Ident(&'a str),
    Plus,
    Minus,
    Star,
    Slash,
}

fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<(usize, Tok<'_>)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut k = 0;
    while k < chars.len() {
        let (i, c) = chars[k];
        let col = col0 + text[..i].chars().count();
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            _ => None,
        };
        if let Some(t) = single {
            out.push((col, t));
            k += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                k += 1;
            }
            let end = chars.get(k).map_or(text.len(), |x| x.0);
            out.push((col, Tok::Num(&text[start..end])));
        } else if c.is_alphabetic() || c == '_' {
            while k < chars.len() && (chars[k].1.is_alphanumeric() || chars[k].1 == '_' || chars[k].1 == '\'') {
                k += 1;
            }
            let end = chars.get(k).map_or(text.len(), |x| x.0);
            out.push((col, Tok::Ident(&text[start..end])));
        } else {
            return Err(syntax(line, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

fn parse_element_at(q: &Quiver, field: Field, text: &str, line: usize, col0: usize) -> Result<FreeElement> {
    let toks = tokenize(text, line, col0)?;
    let end_col = col0 + text.chars().count();
    let mut pos = 0;
    let mut z = FreeElement::zero();
    let mut first = true;
    if toks.is_empty() {
        return Err(syntax(line, col0, "empty expression"));
    }
    while pos < toks.len() {
        let mut negative = false;
        match toks[pos].1 {
            Tok::Plus if !first => pos += 1,
            Tok::Minus => {
                negative = true;
                pos += 1;
            }
            _ if first => {}
            _ => return Err(syntax(line, toks[pos].0, "expected `+` or `-`")),
        }
        first = false;
        let at = |p: usize| toks.get(p).map_or(end_col, |t| t.0);
        let mut coeff = field.one();
        if let Some(&(_, Tok::Num(n))) = toks.get(pos) {
            let num: BigInt = n.parse().expect("digits");
            pos += 1;
            let mut den = BigInt::from(1);
            if let Some((_, Tok::Slash)) = toks.get(pos) {
                pos += 1;
                match toks.get(pos) {
                    Some(&(_, Tok::Num(d))) => {
                        den = d.parse().expect("digits");
                        pos += 1;
                    }
                    _ => return Err(syntax(line, at(pos), "expected a denominator")),
                }
            }
            coeff = field
                .from_ratio(&num, &den)
                .ok_or_else(|| semantic(line, n, format!("denominator vanishes in {field}")))?;
            if !matches!(toks.get(pos), Some((_, Tok::Star))) {
                return Err(syntax(line, at(pos), "expected `*` after coefficient"));
            }
            pos += 1;
        }
        let mut names = Vec::new();
        loop {
            match toks.get(pos) {
                Some(&(_, Tok::Ident(name))) => {
                    names.push(name);
                    pos += 1;
                }
                _ => return Err(syntax(line, at(pos), "expected an arrow name")),
            }
            if matches!(toks.get(pos), Some((_, Tok::Star))) {
                pos += 1;
            } else {
                break;
            }
        }
        let joined = names.join("*");
        let path: Path = if names.len() == 1 && q.arrow(names[0]).is_none() {
            match names[0].strip_prefix("e_").and_then(|v| q.vertex(v)) {
                Some(v) => Path::trivial(v),
                None => return Err(semantic(line, names[0], "unknown arrow")),
            }
        } else {
            let mut arrows = Vec::with_capacity(names.len());
            for n in &names {
                arrows.push(q.arrow(n).ok_or_else(|| semantic(line, n, "unknown arrow"))?);
            }
            Path::from_arrows(arrows).ok_or_else(|| semantic(line, &joined, "arrows do not compose"))?
        };
        if negative {
            coeff = -coeff;
        }
        z.add_term(path, coeff);
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
# two vertices
field Q
quiver
  vertex 1
  vertex 2
  arrow a 1 2
  arrow x 2 2
end
order lenlex x < a
relations
  x*x
  a*x*x - 2/3*a*x*x   # collapses to one term
end
";

    #[test]
    fn parses_and_round_trips() {
        let spec = parse(SMALL).unwrap();
        assert_eq!(spec.quiver.vertex_count(), 2);
        assert_eq!(spec.relations.len(), 2);
        assert_eq!(spec.precedence, vec!["x", "a"]);
        let again = parse(&spec.print()).unwrap();
        assert_eq!(again, spec);
        assert_eq!(again.print(), spec.print());
    }

    #[test]
    fn binomial_has_two_terms() {
        let spec = parse(SMALL).unwrap();
        let z = parse_element(&spec.quiver, spec.field, "x*x - 3*x*x*x").unwrap();
        assert_eq!(z.len(), 2);
        assert!(parse_element(&spec.quiver, spec.field, "e_2")
            .unwrap()
            .as_monomial()
            .is_some());
    }

    #[test]
    fn errors_carry_locations() {
        let bad = SMALL.replace("arrow x 2 2", "arrow x 2");
        match parse(&bad) {
            Err(Error::Syntax { line: 7, column: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        let bad = SMALL.replace("  x*x\n", "  x*y\n");
        assert!(matches!(parse(&bad), Err(Error::Semantic { token, .. }) if token == "y"));
        let bad = SMALL.replace("  x*x\n", "  x\n");
        assert!(matches!(parse(&bad), Err(Error::Semantic { .. })));
        let bad = SMALL.replace("  x*x\n", "  x*a\n");
        assert!(matches!(parse(&bad), Err(Error::Semantic { .. })));
        let bad = SMALL.replace("  x*x\n", "  x*x +\n");
        assert!(matches!(parse(&bad), Err(Error::Syntax { line: 11, .. })));
        assert!(matches!(
            parse("field GF 4\n"),
            Err(Error::Syntax {
                line: 1,
                column: 10,
                ..
            })
        ));
        assert!(matches!(
            parse(&SMALL.replace("end\norder", "order")),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn empty_relations_block() {
        let text = "field GF 3\nquiver\n vertex v\n arrow l v v\nend\nrelations\nend\n";
        let spec = parse(text).unwrap();
        assert!(spec.relations.is_empty());
        assert!(matches!(spec.algebra(), Err(Error::NotAdmissible(_))));
    }
}
