//! The expression language for maps, algebras and shapes.
//!
//! ```text
//! EXPR  := NAME [ '(' [ARG (',' ARG)*] ')' ] | INT
//! ARG   := NAME '=' EXPR | EXPR
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment running to the end
//! of the line. Parsing happens in two passes: a raw call tree, then a typed
//! [`Expr`] whose constructors, arities and argument sorts are checked.

use std::fmt;

use tightmaps::algebra::Family;
use tightmaps::catalog::StdKind;
use tightmaps::hull::ShapeFactor;

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

impl std::error::Error for SyntaxError {}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError { pos, message: message.into() })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Eq,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("'{}'", s),
        Tok::Int(n) => format!("'{}'", n),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Comma => "','".into(),
        Tok::Eq => "'='".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '=' => Tok::Eq,
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                Tok::Ident(chars[start..=i].iter().collect())
            }
            c if c.is_ascii_digit() || c == '+' || c == '-' => {
                if !c.is_ascii_digit() && !chars.get(i + 1).is_some_and(char::is_ascii_digit) {
                    return err(pos, format!("expected a digit after '{}'", c));
                }
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..=i].iter().collect();
                match s.parse::<i64>() {
                    Ok(n) => Tok::Int(n),
                    Err(_) => return err(pos, format!("integer '{}' out of range", s)),
                }
            }
            c => return err(pos, format!("unexpected character '{}'", c)),
        };
        i += 1;
        col += i - start;
        out.push((tok, pos));
    }
    out.push((Tok::End, Pos { line, col }));
    Ok(out)
}

/// Untyped call tree.
#[derive(Clone, Debug)]
enum Raw {
    Call { name: String, args: Vec<Raw>, pos: Pos, parens: bool },
    Int { value: i64, pos: Pos },
    Kw { key: String, value: Box<Raw>, pos: Pos },
}

impl Raw {
    fn pos(&self) -> Pos {
        match self {
            Raw::Call { pos, .. } | Raw::Int { pos, .. } | Raw::Kw { pos, .. } => *pos,
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, Pos) {
        &self.toks[self.at]
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Raw, SyntaxError> {
        match self.next() {
            (Tok::Int(value), pos) => Ok(Raw::Int { value, pos }),
            (Tok::Ident(name), pos) => {
                if self.peek().0 != Tok::LParen {
                    return Ok(Raw::Call { name, args: Vec::new(), pos, parens: false });
                }
                self.next();
                let mut args = Vec::new();
                if self.peek().0 == Tok::RParen {
                    self.next();
                    return Ok(Raw::Call { name, args, pos, parens: true });
                }
                loop {
                    args.push(self.arg()?);
                    match self.next() {
                        (Tok::Comma, _) => {}
                        (Tok::RParen, _) => break,
                        (t, p) => return err(p, format!("expected ',' or ')', found {}", describe(&t))),
                    }
                }
                Ok(Raw::Call { name, args, pos, parens: true })
            }
            (t, p) => err(p, format!("expected an expression, found {}", describe(&t))),
        }
    }

    fn arg(&mut self) -> Result<Raw, SyntaxError> {
        if let (Tok::Ident(key), pos) = self.peek().clone() {
            if self.toks.get(self.at + 1).is_some_and(|t| t.0 == Tok::Eq) {
                self.next();
                self.next();
                let value = Box::new(self.expr()?);
                return Ok(Raw::Kw { key, value, pos });
            }
        }
        self.expr()
    }
}

fn parse_raw(text: &str) -> Result<Raw, SyntaxError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let e = p.expr()?;
    match p.next() {
        (Tok::End, _) => Ok(e),
        (t, pos) => err(pos, format!("unexpected {} after the expression", describe(&t))),
    }
}

/// A typed expression node; equality ignores positions.
#[derive(Clone, Debug)]
pub struct Expr {
    pub pos: Pos,
    pub kind: ExprKind,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind) -> Expr {
        Expr { pos: Pos::default(), kind }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    /// `alg(FAMILY, params...)`
    Alg { family: Family, params: Vec<usize> },
    /// `asum(alg, alg, ...)`: direct sum of algebras.
    Asum(Vec<Expr>),
    /// `std(KIND, params...)`
    Std { kind: StdKind, params: Vec<usize> },
    /// `rho(n)`
    Rho(usize),
    /// `spin(p[, chirality])`
    Spin { p: usize, chirality: Option<i8> },
    /// `disc(alg, sign, ...)`
    Disc { alg: Box<Expr>, signs: Vec<i8> },
    /// `polydisc(alg)`
    Polydisc(Box<Expr>),
    /// `id(alg)`
    Id(Box<Expr>),
    /// `incl(small, big)`: corner inclusion of simple algebras.
    Incl { small: Box<Expr>, big: Box<Expr> },
    /// `dsum(e1, e2[, same_source=BOOL])`
    Dsum { first: Box<Expr>, second: Box<Expr>, same_source: bool },
    /// `comp(outer, inner)`
    Comp { outer: Box<Expr>, inner: Box<Expr> },
    /// `tensor(e1, e2)`
    Tensor(Box<Expr>, Box<Expr>),
    /// `gl2()`: the `gl(2,C) -> u(2,2)` example.
    Gl2,
    /// `shape(target, FACTOR(...), ...)`
    Shape { target: Box<Expr>, entries: Vec<ShapeLit> },
}

/// One shape entry; `multiplicity` is the number of diagonal copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeLit {
    pub factor: ShapeFactor,
    pub multiplicity: usize,
}

/// What an expression elaborates to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sort {
    Alg,
    Hom,
    Shape,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Alg => "an algebra",
            Sort::Hom => "a homomorphism",
            Sort::Shape => "a shape",
        })
    }
}

impl ExprKind {
    pub fn sort(&self) -> Sort {
        match self {
            ExprKind::Alg { .. } | ExprKind::Asum(_) => Sort::Alg,
            ExprKind::Shape { .. } => Sort::Shape,
            _ => Sort::Hom,
        }
    }
}

struct Args<'a> {
    name: &'a str,
    pos: Pos,
    positional: Vec<&'a Raw>,
    keywords: Vec<(&'a str, &'a Raw, Pos)>,
}

impl<'a> Args<'a> {
    fn new(name: &'a str, pos: Pos, args: &'a [Raw]) -> Result<Args<'a>, SyntaxError> {
        let mut positional = Vec::new();
        let mut keywords = Vec::new();
        for a in args {
            match a {
                Raw::Kw { key, value, pos } => keywords.push((key.as_str(), value.as_ref(), *pos)),
                _ if !keywords.is_empty() => return err(a.pos(), "positional argument after a keyword argument"),
                _ => positional.push(a),
            }
        }
        Ok(Args { name, pos, positional, keywords })
    }

    fn arity(&self, min: usize, max: usize) -> Result<(), SyntaxError> {
        let n = self.positional.len();
        if n < min || n > max {
            let expected = match (min, max) {
                (a, b) if a == b => format!("{}", a),
                (a, usize::MAX) => format!("at least {}", a),
                (a, b) => format!("{} to {}", a, b),
            };
            return err(self.pos, format!("{} takes {} argument(s), got {}", self.name, expected, n));
        }
        Ok(())
    }

    fn no_keywords(&self) -> Result<(), SyntaxError> {
        match self.keywords.first() {
            Some((k, _, p)) => err(*p, format!("{} has no keyword argument '{}'", self.name, k)),
            None => Ok(()),
        }
    }
}

fn int(r: &Raw) -> Result<i64, SyntaxError> {
    match r {
        Raw::Int { value, .. } => Ok(*value),
        _ => err(r.pos(), "expected an integer"),
    }
}

fn nat(r: &Raw) -> Result<usize, SyntaxError> {
    let v = int(r)?;
    usize::try_from(v).or_else(|_| err(r.pos(), format!("expected a nonnegative integer, found {}", v)))
}

fn sign(r: &Raw) -> Result<i8, SyntaxError> {
    match int(r)? {
        1 => Ok(1),
        -1 => Ok(-1),
        v => err(r.pos(), format!("expected +1 or -1, found {}", v)),
    }
}

fn word(r: &Raw) -> Result<(&str, Pos), SyntaxError> {
    match r {
        Raw::Call { name, parens: false, pos, .. } => Ok((name.as_str(), *pos)),
        _ => err(r.pos(), "expected a name"),
    }
}

fn boolean(r: &Raw) -> Result<bool, SyntaxError> {
    match word(r)? {
        ("true", _) => Ok(true),
        ("false", _) => Ok(false),
        (w, p) => err(p, format!("expected true or false, found '{}'", w)),
    }
}

fn typed_sub(r: &Raw, want: Sort) -> Result<Box<Expr>, SyntaxError> {
    let e = typed(r)?;
    if e.kind.sort() != want {
        return err(e.pos, format!("expected {}, found {}", want, e.kind.sort()));
    }
    Ok(Box::new(e))
}

fn shape_lit(r: &Raw) -> Result<ShapeLit, SyntaxError> {
    let (name, args, pos) = match r {
        Raw::Call { name, args, pos, parens: true } => (name.as_str(), args, *pos),
        _ => return err(r.pos(), "expected a shape factor such as SU_PP(2)"),
    };
    let a = Args::new(name, pos, args)?;
    a.no_keywords()?;
    let ps = a.positional.iter().map(|r| nat(r)).collect::<Result<Vec<_>, _>>()?;
    let with_g = |k: usize| -> Result<usize, SyntaxError> {
        a.arity(k, k + 1)?;
        Ok(ps.get(k).copied().unwrap_or(1))
    };
    let (factor, multiplicity) = match name {
        "SU11_VIA_RHO" => {
            if ps.is_empty() || ps.len() % 2 != 0 {
                return err(pos, "SU11_VIA_RHO takes pairs f,g of block size and count");
            }
            (ShapeFactor::Su11Rho { blocks: ps.chunks(2).map(|c| (c[0], c[1])).collect() }, 1)
        }
        "SU_PP" => (ShapeFactor::SuPP { p: ps[0] }, with_g(1)?),
        "SP" => (ShapeFactor::Sp { n: ps[0] }, with_g(1)?),
        "SOSTAR4" => (ShapeFactor::SoStar4 { m: ps[0] }, with_g(1)?),
        "SO2" => (ShapeFactor::So2 { r: ps[0] }, with_g(1)?),
        "SU_PQ" => {
            let g = with_g(2)?;
            (ShapeFactor::SuPQ { p: ps[0], q: ps[1] }, g)
        }
        "SOSTAR_ODD" => {
            a.arity(1, 1)?;
            (ShapeFactor::SoStarOdd { k: ps[0] }, 1)
        }
        other => return err(pos, format!("unknown shape factor '{}'", other)),
    };
    Ok(ShapeLit { factor, multiplicity })
}

fn typed(r: &Raw) -> Result<Expr, SyntaxError> {
    let (name, args, pos) = match r {
        Raw::Call { name, args, pos, .. } => (name.as_str(), args.as_slice(), *pos),
        Raw::Int { pos, .. } => return err(*pos, "expected a constructor, found an integer"),
        Raw::Kw { pos, .. } => return err(*pos, "unexpected keyword argument"),
    };
    let a = Args::new(name, pos, args)?;
    if name != "dsum" {
        a.no_keywords()?;
    }
    let p = &a.positional;
    let kind = match name {
        "alg" => {
            a.arity(1, usize::MAX)?;
            let (w, wp) = word(p[0])?;
            let family = Family::parse(w).map_or_else(|| err(wp, format!("unknown family '{}'", w)), Ok)?;
            let params = p[1..].iter().map(|r| nat(r)).collect::<Result<_, _>>()?;
            ExprKind::Alg { family, params }
        }
        "asum" => {
            a.arity(1, usize::MAX)?;
            ExprKind::Asum(p.iter().map(|r| typed_sub(r, Sort::Alg).map(|b| *b)).collect::<Result<_, _>>()?)
        }
        "std" => {
            a.arity(1, usize::MAX)?;
            let (w, wp) = word(p[0])?;
            let kind = StdKind::parse(w).map_or_else(|| err(wp, format!("unknown standard inclusion '{}'", w)), Ok)?;
            let params = p[1..].iter().map(|r| nat(r)).collect::<Result<_, _>>()?;
            ExprKind::Std { kind, params }
        }
        "rho" => {
            a.arity(1, 1)?;
            ExprKind::Rho(nat(p[0])?)
        }
        "spin" => {
            a.arity(1, 2)?;
            ExprKind::Spin { p: nat(p[0])?, chirality: p.get(1).map(|r| sign(r)).transpose()? }
        }
        "disc" => {
            a.arity(2, usize::MAX)?;
            let signs = p[1..].iter().map(|r| sign(r)).collect::<Result<_, _>>()?;
            ExprKind::Disc { alg: typed_sub(p[0], Sort::Alg)?, signs }
        }
        "polydisc" => {
            a.arity(1, 1)?;
            ExprKind::Polydisc(typed_sub(p[0], Sort::Alg)?)
        }
        "id" => {
            a.arity(1, 1)?;
            ExprKind::Id(typed_sub(p[0], Sort::Alg)?)
        }
        "incl" => {
            a.arity(2, 2)?;
            ExprKind::Incl { small: typed_sub(p[0], Sort::Alg)?, big: typed_sub(p[1], Sort::Alg)? }
        }
        "dsum" => {
            a.arity(2, 3)?;
            let mut same_source = match p.get(2) {
                Some(r) => Some(boolean(r)?),
                None => None,
            };
            for &(k, v, kp) in &a.keywords {
                if k != "same_source" {
                    return err(kp, format!("dsum has no keyword argument '{}'", k));
                }
                if same_source.is_some() {
                    return err(kp, "same_source given twice");
                }
                same_source = Some(boolean(v)?);
            }
            ExprKind::Dsum {
                first: typed_sub(p[0], Sort::Hom)?,
                second: typed_sub(p[1], Sort::Hom)?,
                same_source: same_source.unwrap_or(false),
            }
        }
        "comp" => {
            a.arity(2, 2)?;
            ExprKind::Comp { outer: typed_sub(p[0], Sort::Hom)?, inner: typed_sub(p[1], Sort::Hom)? }
        }
        "tensor" => {
            a.arity(2, 2)?;
            ExprKind::Tensor(typed_sub(p[0], Sort::Hom)?, typed_sub(p[1], Sort::Hom)?)
        }
        "gl2" => {
            a.arity(0, 0)?;
            ExprKind::Gl2
        }
        "shape" => {
            a.arity(2, usize::MAX)?;
            let entries = p[1..].iter().map(|r| shape_lit(r)).collect::<Result<_, _>>()?;
            ExprKind::Shape { target: typed_sub(p[0], Sort::Alg)?, entries }
        }
        other => return err(pos, format!("unknown constructor '{}'", other)),
    };
    Ok(Expr { pos, kind })
}

/// Parses and type-checks an expression.
pub fn parse_spec(text: &str) -> Result<Expr, SyntaxError> {
    typed(&parse_raw(text)?)
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for ShapeLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut ps = self.factor.params();
        if self.multiplicity != 1 {
            ps.push(self.multiplicity);
        }
        write!(f, "{}({})", self.factor.tag(), join(ps))
    }
}

/// Canonical text; [`parse_spec`] reads it back to an equal [`Expr`].
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Alg { family, params } => {
                write!(
                    f,
                    "alg({})",
                    join(std::iter::once(family.tag().to_string()).chain(params.iter().map(|p| p.to_string())))
                )
            }
            ExprKind::Asum(parts) => write!(f, "asum({})", join(parts)),
            ExprKind::Std { kind, params } => {
                write!(
                    f,
                    "std({})",
                    join(std::iter::once(kind.tag().to_string()).chain(params.iter().map(|p| p.to_string())))
                )
            }
            ExprKind::Rho(n) => write!(f, "rho({})", n),
            ExprKind::Spin { p, chirality: None } => write!(f, "spin({})", p),
            ExprKind::Spin { p, chirality: Some(c) } => write!(f, "spin({}, {})", p, c),
            ExprKind::Disc { alg, signs } => write!(f, "disc({}, {})", alg, join(signs)),
            ExprKind::Polydisc(a) => write!(f, "polydisc({})", a),
            ExprKind::Id(a) => write!(f, "id({})", a),
            ExprKind::Incl { small, big } => write!(f, "incl({}, {})", small, big),
            ExprKind::Dsum { first, second, same_source } => {
                write!(f, "dsum({}, {}, same_source={})", first, second, same_source)
            }
            ExprKind::Comp { outer, inner } => write!(f, "comp({}, {})", outer, inner),
            ExprKind::Tensor(a, b) => write!(f, "tensor({}, {})", a, b),
            ExprKind::Gl2 => f.write_str("gl2()"),
            ExprKind::Shape { target, entries } => {
                write!(f, "shape({}", target)?;
                for e in entries {
                    write!(f, ", {}", e)?;
                }
                f.write_str(")")
            }
        }
    }
}
