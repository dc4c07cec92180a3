//! The algebra file format.
//!
//! One statement per line, `#` starts a comment:
//!
//! ```text
//! prime 2                # optional, default 2; --field overrides it
//! bound 3                # every path of length >= 3 is zero
//! vertices 1 2
//! arrow c: 1 -> 1
//! arrow a: 1 -> 2
//! relation c*c - a*b     # paths compose left to right: a*b is a, then b
//! relation 2*c*a + d*b
//! ```

use std::fmt::Write as _;

use ausgen_core::{Algebra, Error as CoreError, PrimeField, Quiver, Relation};

pub const DEFAULT_PRIME: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based; 0 when the problem concerns the whole file.
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowDecl {
    pub label: String,
    pub source: String,
    pub target: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationDecl {
    pub terms: Vec<(i64, Vec<String>)>,
    pub text: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraFile {
    pub prime: Option<u32>,
    pub bound: Option<usize>,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowDecl>,
    pub relations: Vec<RelationDecl>,
}

fn is_label(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphanumeric() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn parse_relation(text: &str, line: usize) -> Result<Vec<(i64, Vec<String>)>, ParseError> {
    let mut terms = Vec::new();
    let mut sign = 1i64;
    let mut current = String::new();
    let mut flush = |sign: i64, current: &mut String| -> Result<(), ParseError> {
        let t = current.trim().to_string();
        current.clear();
        if t.is_empty() {
            return Err(err(line, "missing term in relation"));
        }
        let mut coef = sign;
        let mut path = Vec::new();
        for (k, factor) in t.split('*').map(str::trim).enumerate() {
            if factor.is_empty() {
                return Err(err(line, format!("empty factor in `{t}`")));
            }
            if k == 0 && factor.chars().all(|c| c.is_ascii_digit()) {
                let n: i64 = factor
                    .parse()
                    .map_err(|_| err(line, format!("coefficient `{factor}` is too large")))?;
                coef *= n;
                continue;
            }
            if !is_label(factor) {
                return Err(err(line, format!("`{factor}` is not an arrow label")));
            }
            path.push(factor.to_string());
        }
        if path.is_empty() {
            return Err(err(line, format!("term `{t}` has no arrows")));
        }
        terms.push((coef, path));
        Ok(())
    };
    let mut started = false;
    for ch in text.chars() {
        match ch {
            '+' | '-' => {
                if started {
                    flush(sign, &mut current)?;
                } else if !current.trim().is_empty() {
                    return Err(err(line, "unexpected sign"));
                }
                sign = if ch == '-' { -1 } else { 1 };
                started = false;
            }
            c => {
                if !c.is_whitespace() {
                    started = true;
                }
                current.push(c);
            }
        }
    }
    flush(sign, &mut current)?;
    Ok(terms)
}

pub fn parse(text: &str) -> Result<AlgebraFile, ParseError> {
    let mut file = AlgebraFile::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .map(|(k, r)| (k, r.trim()))
            .unwrap_or((content, ""));
        match keyword {
            "prime" => {
                if file.prime.is_some() {
                    return Err(err(line, "prime given twice"));
                }
                let p = rest
                    .parse()
                    .map_err(|_| err(line, format!("`{rest}` is not a number")))?;
                file.prime = Some(p);
            }
            "bound" => {
                if file.bound.is_some() {
                    return Err(err(line, "bound given twice"));
                }
                let b = rest
                    .parse()
                    .map_err(|_| err(line, format!("`{rest}` is not a number")))?;
                file.bound = Some(b);
            }
            "vertices" => {
                if !file.vertices.is_empty() {
                    return Err(err(line, "vertices given twice"));
                }
                for v in rest.split_whitespace() {
                    if !is_label(v) {
                        return Err(err(line, format!("`{v}` is not a valid vertex label")));
                    }
                    if file.vertices.iter().any(|w| w == v) {
                        return Err(err(line, format!("duplicate vertex `{v}`")));
                    }
                    file.vertices.push(v.to_string());
                }
                if file.vertices.is_empty() {
                    return Err(err(line, "no vertices listed"));
                }
            }
            "arrow" => {
                let (label, ends) = rest
                    .split_once(':')
                    .ok_or_else(|| err(line, "expected `arrow label: source -> target`"))?;
                let (source, target) = ends
                    .split_once("->")
                    .ok_or_else(|| err(line, "expected `arrow label: source -> target`"))?;
                let (label, source, target) = (label.trim(), source.trim(), target.trim());
                if !is_label(label) {
                    return Err(err(line, format!("`{label}` is not a valid arrow label")));
                }
                if file.arrows.iter().any(|a| a.label == label) {
                    return Err(err(line, format!("duplicate arrow `{label}`")));
                }
                for v in [source, target] {
                    if !file.vertices.iter().any(|w| w == v) {
                        return Err(err(line, format!("unknown vertex `{v}`")));
                    }
                }
                file.arrows.push(ArrowDecl {
                    label: label.to_string(),
                    source: source.to_string(),
                    target: target.to_string(),
                    line,
                });
            }
            "relation" => {
                let terms = parse_relation(rest, line)?;
                for (_, path) in &terms {
                    for a in path {
                        if !file.arrows.iter().any(|d| &d.label == a) {
                            return Err(err(line, format!("unknown arrow `{a}`")));
                        }
                    }
                }
                file.relations.push(RelationDecl {
                    terms,
                    text: rest.to_string(),
                    line,
                });
            }
            other => return Err(err(line, format!("unknown statement `{other}`"))),
        }
    }
    if file.vertices.is_empty() {
        return Err(err(0, "missing `vertices` line"));
    }
    if file.bound.is_none() {
        return Err(err(0, "missing `bound` line"));
    }
    Ok(file)
}

impl AlgebraFile {
    /// Builds the algebra; `prime` overrides the one in the file.
    pub fn build(&self, prime: Option<u32>) -> Result<Algebra, ParseError> {
        let p = prime.or(self.prime).unwrap_or(DEFAULT_PRIME);
        let field = PrimeField::new(p).map_err(|e| err(0, e.to_string()))?;
        let mut q =
            Quiver::new(self.vertices.iter().cloned()).map_err(|e| err(0, e.to_string()))?;
        let vertex = |v: &str| self.vertices.iter().position(|w| w == v).unwrap_or(0);
        for a in &self.arrows {
            q.add_arrow(&a.label, vertex(&a.source), vertex(&a.target))
                .map_err(|e| err(a.line, e.to_string()))?;
        }
        let arrow = |l: &str| self.arrows.iter().position(|a| a.label == l).unwrap_or(0);
        let relations: Vec<Relation> = self
            .relations
            .iter()
            .map(|r| {
                Relation::new(
                    r.terms
                        .iter()
                        .map(|(c, path)| (*c, path.iter().map(|a| arrow(a)).collect()))
                        .collect(),
                )
            })
            .collect();
        let bound = self.bound.unwrap_or(0);
        Algebra::new(field, q, relations, bound).map_err(|e| self.locate(e))
    }

    fn locate(&self, e: CoreError) -> ParseError {
        let at = |k: usize| self.relations.get(k).map_or(0, |r| r.line);
        match e {
            CoreError::EmptyPath { relation, .. } => err(at(relation), "empty path in relation"),
            CoreError::NotComposable { relation, term } => err(
                at(relation),
                format!(
                    "term {} of `{}` is not a path (arrows compose left to right)",
                    term + 1,
                    self.relations[relation].text
                ),
            ),
            CoreError::NonParallelRelation { relation } => err(
                at(relation),
                format!(
                    "the paths of `{}` do not share source and target",
                    self.relations[relation].text
                ),
            ),
            CoreError::InconsistentRelations(v) => err(
                0,
                format!(
                    "relations force the idempotent at vertex {} to vanish",
                    self.vertices[v]
                ),
            ),
            other => err(0, other.to_string()),
        }
    }

    /// Writes the file back in canonical form.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Some(p) = self.prime {
            let _ = writeln!(out, "prime {p}");
        }
        if let Some(b) = self.bound {
            let _ = writeln!(out, "bound {b}");
        }
        let _ = writeln!(out, "vertices {}", self.vertices.join(" "));
        for a in &self.arrows {
            let _ = writeln!(out, "arrow {}: {} -> {}", a.label, a.source, a.target);
        }
        for r in &self.relations {
            let mut s = String::new();
            for (k, (c, path)) in r.terms.iter().enumerate() {
                let sign = if *c < 0 { "-" } else { "+" };
                if k > 0 {
                    let _ = write!(s, " {sign} ");
                } else if *c < 0 {
                    s.push('-');
                }
                if c.abs() != 1 {
                    let _ = write!(s, "{}*", c.abs());
                }
                s.push_str(&path.join("*"));
            }
            let _ = writeln!(out, "relation {s}");
        }
        out
    }
}

pub fn load(text: &str, prime: Option<u32>) -> Result<Algebra, ParseError> {
    parse(text)?.build(prime)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_terms() {
        let t = parse_relation("c*c - a*b", 1).unwrap();
        assert_eq!(
            t,
            vec![
                (1, vec!["c".to_string(), "c".to_string()]),
                (-1, vec!["a".to_string(), "b".to_string()])
            ]
        );
        let t = parse_relation("-2*a1*b2 + 3 * c", 1).unwrap();
        assert_eq!(t[0].0, -2);
        assert_eq!(t[1], (3, vec!["c".to_string()]));
        assert!(parse_relation("a*b -", 4).is_err());
        assert!(parse_relation("a**b", 4).is_err());
        assert!(parse_relation("3", 4).is_err());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse("bound 3\nvertices 1\narrow x: 1 -> 2\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse("bound 3\nvertices 1\n\nrelation y*y\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse("vertices 1\n").unwrap_err();
        assert_eq!(e.line, 0);
        let e = parse("bound 3\nvertices 1\nfoo\n").unwrap_err();
        assert_eq!(e.message, "unknown statement `foo`");
    }

    #[test]
    fn build_reports_relation_lines() {
        let text =
            "bound 3\nvertices 1 2\narrow a: 1 -> 2\narrow b: 2 -> 1\n# comment\nrelation b*b\n";
        let e = load(text, None).unwrap_err();
        assert_eq!(e.line, 6);
        let e = load("bound 3\nvertices 1\narrow x: 1 -> 1\n", Some(4)).unwrap_err();
        assert_eq!(e.line, 0);
    }

    #[test]
    fn render_round_trips() {
        let text = "prime 3\nbound 3\nvertices 1 2\narrow a: 1 -> 2\narrow b: 2 -> 1\nrelation -2*a*b + a*b\n";
        let f = parse(text).unwrap();
        assert_eq!(
            parse(&f.render()).unwrap().relations[0].terms,
            f.relations[0].terms
        );
    }
}
