//! Words in free groups, finitely presented groups, and the presentation
//! text format.
//!
//! A letter is a nonzero `i32`: generator `k` (0-based) is `k + 1`, its
//! inverse is `-(k + 1)`. Words are always stored freely reduced.
//!
//! Text grammar (one presentation per file, UTF-8):
//!
//! ```text
//! presentation := ('⟨' | '<') gens '|' relators ('⟩' | '>')
//! gens         := ident (',' ident)*      (may be empty)
//! relators     := expr (',' expr)*        (may be empty)
//! expr         := factor (('*')? factor)*
//! factor       := atom ('^' int)*
//! atom         := ident | '1' | '(' expr ')' | '[' expr ',' expr ']'
//! ```
//!
//! Lines starting with `#` are comments. `[x,y]` expands to `x^-1 y^-1 x y`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub type Letter = i32;

#[inline]
pub fn letter(gen: usize, inverse: bool) -> Letter {
    let l = gen as Letter + 1;
    if inverse {
        -l
    } else {
        l
    }
}

#[inline]
pub fn gen_of(l: Letter) -> usize {
    (l.unsigned_abs() - 1) as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gen {
    pub index: usize,
    pub label: String,
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        free_reduce(letters)
    }

    pub fn gen(g: usize) -> Self {
        Word { letters: vec![letter(g, false)] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word { letters: self.letters.iter().rev().map(|&l| -l).collect() }
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.inverse().mul(&b.inverse()).mul(a).mul(b)
    }

    pub fn conjugate_by(&self, t: &Word) -> Word {
        t.inverse().mul(self).mul(t)
    }

    /// Exponent sum per generator.
    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        let mut v = vec![0i64; ngens];
        for &l in &self.letters {
            v[gen_of(l)] += l.signum() as i64;
        }
        v
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.letters.iter().map(|&l| gen_of(l)).max()
    }

    /// Replace every generator by a word.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for &l in &self.letters {
            let img = &images[gen_of(l)];
            let push = |out: &mut Vec<Letter>, x: Letter| {
                if out.last() == Some(&-x) {
                    out.pop();
                } else {
                    out.push(x);
                }
            };
            if l > 0 {
                for &x in img.letters() {
                    push(&mut out, x);
                }
            } else {
                for &x in img.letters().iter().rev() {
                    push(&mut out, -x);
                }
            }
        }
        Word { letters: out }
    }

    /// Cyclically reduced form (conjugate).
    pub fn cyclically_reduced(&self) -> Word {
        let l = &self.letters;
        let (mut i, mut j) = (0usize, l.len());
        while j > i + 1 && l[i] == -l[j - 1] {
            i += 1;
            j -= 1;
        }
        Word { letters: l[i..j].to_vec() }
    }

    /// If the word is a proper power `w^k` (k ≥ 2) of a shorter word, return `(w, k)`.
    pub fn as_proper_power(&self) -> Option<(Word, usize)> {
        let n = self.letters.len();
        for p in 1..n {
            if n % p == 0 && (p..n).all(|i| self.letters[i] == self.letters[i - p]) {
                return Some((Word { letters: self.letters[..p].to_vec() }, n / p));
            }
        }
        None
    }

    pub fn display<'a>(&'a self, labels: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, labels }
    }
}

/// Freely reduce a raw letter sequence.
pub fn free_reduce(letters: impl IntoIterator<Item = Letter>) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        assert!(l != 0, "letter 0 is not a generator");
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word { letters: out }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    labels: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.word.letters();
        if l.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < l.len() {
            let mut j = i;
            while j < l.len() && l[j] == l[i] {
                j += 1;
            }
            let run = (j - i) as i64 * l[i].signum() as i64;
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let label = &self.labels[gen_of(l[i])];
            if run == 1 {
                write!(f, "{label}")?;
            } else {
                write!(f, "{label}^{run}")?;
            }
            i = j;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub gens: Vec<Gen>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(name: &str, labels: &[&str], relators: Vec<Word>) -> Self {
        let gens = labels
            .iter()
            .enumerate()
            .map(|(index, l)| Gen { index, label: l.to_string() })
            .collect();
        Presentation { name: name.to_string(), gens, relators }
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn labels(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.label.clone()).collect()
    }

    pub fn gen_index(&self, label: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.label == label)
    }

    /// Total relator length.
    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    /// Parse a relator-style expression in this presentation's generators.
    pub fn word(&self, expr: &str) -> Result<Word, ParseError> {
        let labels = self.labels();
        let mut p = Parser::new(expr);
        let w = p.expr(&labels)?;
        p.skip_ws();
        if let Some(c) = p.peek() {
            return Err(p.error(format!("unexpected '{c}'")));
        }
        Ok(w)
    }

    pub fn add_relators(&self, name: &str, extra: impl IntoIterator<Item = Word>) -> Presentation {
        let mut relators = self.relators.clone();
        relators.extend(extra);
        Presentation { name: name.to_string(), gens: self.gens.clone(), relators }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.labels();
        write!(f, "<{} | ", labels.join(","))?;
        for (i, r) in self.relators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", r.display(&labels))?;
        }
        write!(f, ">")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("undeclared generator '{name}' at line {line}, column {column}")]
    UndeclaredGenerator { name: String, line: usize, column: usize },
}

/// Parse a presentation in the text grammar described in the module docs.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    parse_named_presentation(text, "user")
}

pub fn parse_named_presentation(text: &str, name: &str) -> Result<Presentation, ParseError> {
    let mut p = Parser::new(text);
    p.skip_ws();
    match p.next() {
        Some('⟨') | Some('<') => {}
        _ => return Err(p.error("expected '<' or '⟨'".into())),
    }
    let mut labels: Vec<String> = Vec::new();
    p.skip_ws();
    if p.peek() != Some('|') {
        loop {
            p.skip_ws();
            let (line, column) = (p.line, p.col);
            let id = p.ident().ok_or_else(|| p.error("expected generator name".into()))?;
            if labels.contains(&id) {
                return Err(ParseError::Syntax { line, column, message: format!("duplicate generator '{id}'") });
            }
            labels.push(id);
            p.skip_ws();
            match p.peek() {
                Some(',') => {
                    p.next();
                }
                Some('|') => break,
                _ => return Err(p.error("expected ',' or '|'".into())),
            }
        }
    }
    p.next();
    let mut relators = Vec::new();
    p.skip_ws();
    if !matches!(p.peek(), Some('⟩') | Some('>')) {
        loop {
            let w = p.expr(&labels)?;
            relators.push(w);
            p.skip_ws();
            match p.peek() {
                Some(',') => {
                    p.next();
                }
                Some('⟩') | Some('>') => break,
                _ => return Err(p.error("expected ',' or '>'".into())),
            }
        }
    }
    p.next();
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.error(format!("trailing input '{c}'")));
    }
    let gens = labels.into_iter().enumerate().map(|(index, label)| Gen { index, label }).collect();
    Ok(Presentation { name: name.to_string(), gens, relators })
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn next(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, message: String) -> ParseError {
        ParseError::Syntax { line: self.line, column: self.col, message }
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.next();
                }
                Some('#') => {
                    while let Some(c) = self.next() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }

    fn ident(&mut self) -> Option<String> {
        let mut s = String::new();
        match self.peek() {
            Some(c) if c.is_alphabetic() || c == '_' => {}
            _ => return None,
        }
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                s.push(c);
                self.next();
            } else {
                break;
            }
        }
        Some(s)
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let mut s = String::new();
        if self.peek() == Some('-') {
            s.push('-');
            self.next();
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.next();
            } else {
                break;
            }
        }
        s.parse().map_err(|_| self.error("expected integer exponent".into()))
    }

    fn expr(&mut self, labels: &[String]) -> Result<Word, ParseError> {
        let mut w = self.factor(labels)?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.next();
                    let f = self.factor(labels)?;
                    w = w.mul(&f);
                }
                Some(c) if c.is_alphanumeric() || c == '_' || c == '(' || c == '[' => {
                    let f = self.factor(labels)?;
                    w = w.mul(&f);
                }
                _ => return Ok(w),
            }
        }
    }

    fn factor(&mut self, labels: &[String]) -> Result<Word, ParseError> {
        let mut w = self.atom(labels)?;
        loop {
            self.skip_ws();
            if self.peek() == Some('^') {
                self.next();
                let e = self.int()?;
                w = w.pow(e);
            } else {
                return Ok(w);
            }
        }
    }

    fn atom(&mut self, labels: &[String]) -> Result<Word, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.next();
                let w = self.expr(labels)?;
                self.skip_ws();
                if self.next() != Some(')') {
                    return Err(self.error("expected ')'".into()));
                }
                Ok(w)
            }
            Some('[') => {
                self.next();
                let a = self.expr(labels)?;
                self.skip_ws();
                if self.next() != Some(',') {
                    return Err(self.error("expected ',' in commutator".into()));
                }
                let b = self.expr(labels)?;
                self.skip_ws();
                if self.next() != Some(']') {
                    return Err(self.error("expected ']'".into()));
                }
                Ok(Word::commutator(&a, &b))
            }
            Some('1') => {
                self.next();
                Ok(Word::identity())
            }
            _ => {
                let (line, column) = (self.line, self.col);
                let id = self.ident().ok_or_else(|| self.error("expected generator, '(' or '['".into()))?;
                match labels.iter().position(|l| *l == id) {
                    Some(g) => Ok(Word::gen(g)),
                    None => Err(ParseError::UndeclaredGenerator { name: id, line, column }),
                }
            }
        }
    }
}

/// Minimal interface of a concrete group element.
pub trait GroupElement: Clone + Eq + std::hash::Hash {
    fn compose(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn identity_like(&self) -> Self;

    fn is_identity(&self) -> bool {
        *self == self.identity_like()
    }

    fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = self.identity_like();
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&sq);
            }
            sq = sq.compose(&sq);
            k >>= 1;
        }
        acc
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("no image given for generator {0}")]
    MissingImage(usize),
}

/// Evaluate a word under generator images.
pub fn evaluate_word<T: GroupElement>(w: &Word, images: &[T], identity: &T) -> Result<T, EvalError> {
    let mut acc = identity.clone();
    let mut inverses: HashMap<usize, T> = HashMap::new();
    for &l in w.letters() {
        let g = gen_of(l);
        let img = images.get(g).ok_or(EvalError::MissingImage(g))?;
        if l > 0 {
            acc = acc.compose(img);
        } else {
            let inv = inverses.entry(g).or_insert_with(|| img.inverse());
            acc = acc.compose(inv);
        }
    }
    Ok(acc)
}

/// The lattice Λ from the Deligne–Mostow quintuple (2/12,2/12,2/12,7/12,11/12).
pub const LAMBDA_TEXT: &str = "⟨j,u,v,b | u^4, v^8, [u,j], [v,j], j^-3*v^2, u*v*u*v^-1*u*v^-1, \
    (b*j)^2*(v*u^2)^-1, [b,v*u^2], b^3, (b*v*u^3)^3⟩";

pub fn lambda_presentation() -> Presentation {
    parse_named_presentation(LAMBDA_TEXT, "Lambda").expect("built-in presentation parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_shape() {
        let p = lambda_presentation();
        assert_eq!(p.ngens(), 4);
        assert_eq!(p.relators.len(), 10);
        assert_eq!(p.labels(), vec!["j", "u", "v", "b"]);
        // j^-3 v^2
        assert_eq!(p.relators[4].len(), 5);
    }

    #[test]
    fn free_group_and_commutator() {
        let p = parse_presentation("⟨a | ⟩").unwrap();
        assert_eq!(p.ngens(), 1);
        assert!(p.relators.is_empty());
        let p = parse_presentation("<x,y | [x,y]>").unwrap();
        assert_eq!(p.relators[0].letters(), &[-1, -2, 1, 2]);
    }

    #[test]
    fn reduction_examples() {
        assert!(free_reduce([2, -2]).is_empty());
        assert_eq!(free_reduce([-1, 1, 2]).letters(), &[2]);
        let w = free_reduce([1, 2, -2, 3, -3, -1, 4]);
        assert_eq!(w.letters(), &[4]);
    }

    #[test]
    fn parse_errors() {
        match parse_presentation("<a | b>") {
            Err(ParseError::UndeclaredGenerator { name, line, column }) => {
                assert_eq!(name, "b");
                assert_eq!((line, column), (1, 6));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_presentation("<a | a^>"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_presentation("<a, a | >"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_presentation("a | a"), Err(ParseError::Syntax { .. })));
        match parse_presentation("<a |\n  a^2,\n  (a>") {
            Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn printer_round_trip_lambda() {
        let p = lambda_presentation();
        let q = parse_named_presentation(&p.to_string(), "Lambda").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn comments_and_juxtaposition() {
        let p = parse_presentation("# cache file\n<x, y | x y x^-1, (x*y)^2 # trailing\n>").unwrap();
        assert_eq!(p.relators[0].letters(), &[1, 2, -1]);
        assert_eq!(p.relators[1].len(), 4);
    }

    #[test]
    fn proper_powers() {
        let p = lambda_presentation();
        let (w, k) = p.relators[9].as_proper_power().unwrap();
        assert_eq!(k, 3);
        assert_eq!(w.len(), 5);
        assert!(p.relators[4].as_proper_power().is_none());
    }
}
