//! Parser for `.dr` signature files and expressions.
//!
//! Grammar (ASCII):
//!   declarations  `const N : TYPE @ [r, ...]`
//!                 `typefam N : TYPE @ [r, ...] where PATTERN = TERM`
//!                 `newtype N : TYPE @ [r, ...] where PATTERN = TERM`
//!   terms         `Type`, `\+(x:A) -> b`, `\-(x:A) -> b`,
//!                 `Pi +(x:A) -> B`, `Pi -(x:A) -> B`, `f a`, `f @nom a`,
//!                 `f {_}`, `f []`, `/\(c : a ~[nom] b : A) -> t`,
//!                 `Forall (c : a ~[R] b : A) -> B`,
//!                 `case s of F [flags] -> b1 ; _ -> b2`
//!   patterns      `F x@nom y@rep z {_} []`
//!   comments      `--` to end of line
//!
//! Annotation-free binders (`\+x -> b`) also parse, so printed erased
//! terms can be read back; the typechecker rejects them.

use std::collections::HashSet;
use std::fmt;

use crate::roles::{AppFlag, FullFlag, Relevance, Role};
use crate::syntax::{
    Binder, Name, PatArg, Pattern, Prop, SigEntry, Signature, Term,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at {line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LamRel,   // \+
    LamIrrel, // \-
    CLam,     // /\
    Arrow,    // ->
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Colon,
    Semi,
    Comma,
    Eq,
    At,
    Tilde,
    Under,
    Plus,
    Minus,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::LamRel => "\\+",
            Tok::LamIrrel => "\\-",
            Tok::CLam => "/\\",
            Tok::Arrow => "->",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Eq => "=",
            Tok::At => "@",
            Tok::Tilde => "~",
            Tok::Under => "_",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Eof => "end of input",
        };
        write!(f, "`{s}`")
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut lx = Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    loop {
        lx.skip_ws_and_comments();
        let (line, col) = (lx.line, lx.col);
        let Some(c) = lx.peek() else {
            out.push((Tok::Eof, line, col));
            return Ok(out);
        };
        let tok = match c {
            b'(' => lx.take(Tok::LParen),
            b')' => lx.take(Tok::RParen),
            b'[' => lx.take(Tok::LBracket),
            b']' => lx.take(Tok::RBracket),
            b'{' => lx.take(Tok::LBrace),
            b'}' => lx.take(Tok::RBrace),
            b':' => lx.take(Tok::Colon),
            b';' => lx.take(Tok::Semi),
            b',' => lx.take(Tok::Comma),
            b'=' => lx.take(Tok::Eq),
            b'@' => lx.take(Tok::At),
            b'~' => lx.take(Tok::Tilde),
            b'+' => lx.take(Tok::Plus),
            b'\\' => {
                lx.bump();
                match lx.peek() {
                    Some(b'+') => lx.take(Tok::LamRel),
                    Some(b'-') => lx.take(Tok::LamIrrel),
                    _ => {
                        return Err(ParseError {
                            line,
                            col,
                            msg: "expected `\\+` or `\\-`".into(),
                        })
                    }
                }
            }
            b'/' => {
                lx.bump();
                match lx.peek() {
                    Some(b'\\') => lx.take(Tok::CLam),
                    _ => {
                        return Err(ParseError { line, col, msg: "expected `/\\`".into() })
                    }
                }
            }
            b'-' => {
                lx.bump();
                match lx.peek() {
                    Some(b'>') => lx.take(Tok::Arrow),
                    _ => Tok::Minus,
                }
            }
            b'_' if !lx.ident_continues_at(lx.pos + 1) => lx.take(Tok::Under),
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = lx.pos;
                while lx.ident_continues_at(lx.pos) {
                    lx.bump();
                }
                Tok::Ident(String::from_utf8_lossy(&lx.src[start..lx.pos]).into_owned())
            }
            c => {
                return Err(ParseError {
                    line,
                    col,
                    msg: format!("unexpected character `{}`", c as char),
                })
            }
        };
        out.push((tok, line, col));
    }
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn ident_continues_at(&self, pos: usize) -> bool {
        matches!(self.src.get(pos), Some(c) if c.is_ascii_alphanumeric() || *c == b'_' || *c == b'\'')
    }

    fn bump(&mut self) {
        if self.peek() == Some(b'\n') {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        self.pos += 1;
    }

    fn take(&mut self, tok: Tok) -> Tok {
        self.bump();
        tok
    }

    fn skip_ws_and_comments(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_whitespace() => self.bump(),
                Some(b'-') if self.src.get(self.pos + 1) == Some(&b'-') => {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }
}

/// Words that can never be an application argument or a variable: they
/// either start a binder form or belong to the declaration layer.
fn is_keyword(s: &str) -> bool {
    matches!(
        s,
        "const" | "typefam" | "newtype" | "where" | "of" | "case" | "Pi" | "Forall"
    )
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BinderKind {
    Tm,
    Co,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    consts: HashSet<Name>,
    scope: Vec<(Name, BinderKind)>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn here(&self) -> (usize, usize) {
        let (_, l, c) = self.toks[self.pos];
        (l, c)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError { line, col, msg: msg.into() })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        if self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {want}, found {}", self.peek()))
        }
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => self.err(format!("expected a name, found {other}")),
        }
    }

    fn role(&mut self) -> Result<Role, ParseError> {
        let name = self.ident()?;
        match name.as_str() {
            "nom" => Ok(Role::Nom),
            "rep" => Ok(Role::Rep),
            other => self.err(format!("expected `nom` or `rep`, found `{other}`")),
        }
    }

    fn name_term(&mut self, name: Name) -> Result<Term, ParseError> {
        match self.scope.iter().rev().find(|(x, _)| *x == name) {
            Some((_, BinderKind::Co)) => {
                self.err(format!("coercion variable `{name}` cannot appear in a term"))
            }
            Some((_, BinderKind::Tm)) => Ok(Term::Var(name)),
            None if self.consts.contains(&name) => Ok(Term::Const(name)),
            None => Ok(Term::Var(name)),
        }
    }

    // term := binder forms | application
    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::LamRel => {
                self.bump();
                self.abs(Relevance::Rel)
            }
            Tok::LamIrrel => {
                self.bump();
                self.abs(Relevance::Irrel)
            }
            Tok::Ident(s) if s == "Pi" && matches!(self.peek2(), Tok::Plus | Tok::Minus) => {
                self.bump();
                let rho = match self.bump() {
                    Tok::Plus => Relevance::Rel,
                    _ => Relevance::Irrel,
                };
                self.expect(&Tok::LParen)?;
                let x = self.ident()?;
                self.expect(&Tok::Colon)?;
                let dom = self.term()?;
                self.expect(&Tok::RParen)?;
                self.expect(&Tok::Arrow)?;
                self.scope.push((x.clone(), BinderKind::Tm));
                let body = self.term();
                self.scope.pop();
                Ok(Term::Pi(rho, Box::new(dom), Binder::bind(&x, &x, body?)))
            }
            Tok::Ident(s) if s == "Forall" => {
                self.bump();
                self.expect(&Tok::LParen)?;
                let (c, prop) = self.prop_binder()?;
                self.expect(&Tok::RParen)?;
                self.expect(&Tok::Arrow)?;
                self.scope.push((c.clone(), BinderKind::Co));
                let body = self.term();
                self.scope.pop();
                Ok(Term::CPi(Box::new(prop), Binder::bind(&c, &c, body?)))
            }
            Tok::CLam => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let (c, prop) = self.prop_binder()?;
                    self.expect(&Tok::RParen)?;
                    self.expect(&Tok::Arrow)?;
                    self.scope.push((c.clone(), BinderKind::Co));
                    let body = self.term();
                    self.scope.pop();
                    Ok(Term::CAbs(Some(Box::new(prop)), Binder::bind(&c, &c, body?)))
                } else {
                    // erased coercion abstraction: /\c -> b
                    let c = self.ident()?;
                    self.expect(&Tok::Arrow)?;
                    self.scope.push((c.clone(), BinderKind::Co));
                    let body = self.term();
                    self.scope.pop();
                    Ok(Term::CAbs(None, Binder::bind(&c, &c, body?)))
                }
            }
            Tok::Ident(s) if s == "case" => {
                self.bump();
                let scrut = self.term()?;
                match self.bump() {
                    Tok::Ident(s) if s == "of" => {}
                    other => return self.err(format!("expected `of`, found {other}")),
                }
                let head = self.ident()?;
                self.expect(&Tok::LBracket)?;
                let mut flags = Vec::new();
                if *self.peek() != Tok::RBracket {
                    loop {
                        flags.push(self.case_flag()?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(&Tok::RBracket)?;
                self.expect(&Tok::Arrow)?;
                let b1 = self.term()?;
                self.expect(&Tok::Semi)?;
                self.expect(&Tok::Under)?;
                self.expect(&Tok::Arrow)?;
                let b2 = self.term()?;
                Ok(Term::Case(
                    Box::new(scrut),
                    head,
                    flags,
                    Box::new(b1),
                    Box::new(b2),
                ))
            }
            _ => self.app(),
        }
    }

    // \+(x:A) -> b  |  \+x -> b  (and the \- forms)
    fn abs(&mut self, rho: Relevance) -> Result<Term, ParseError> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let x = self.ident()?;
            self.expect(&Tok::Colon)?;
            let ann = self.term()?;
            self.expect(&Tok::RParen)?;
            self.expect(&Tok::Arrow)?;
            self.scope.push((x.clone(), BinderKind::Tm));
            let body = self.term();
            self.scope.pop();
            Ok(Term::Abs(rho, Some(Box::new(ann)), Binder::bind(&x, &x, body?)))
        } else {
            let x = self.ident()?;
            self.expect(&Tok::Arrow)?;
            self.scope.push((x.clone(), BinderKind::Tm));
            let body = self.term();
            self.scope.pop();
            Ok(Term::Abs(rho, None, Binder::bind(&x, &x, body?)))
        }
    }

    // c : a ~[R] b : A
    fn prop_binder(&mut self) -> Result<(Name, Prop), ParseError> {
        let c = self.ident()?;
        self.expect(&Tok::Colon)?;
        let lhs = self.term()?;
        self.expect(&Tok::Tilde)?;
        self.expect(&Tok::LBracket)?;
        let role = self.role()?;
        self.expect(&Tok::RBracket)?;
        let rhs = self.term()?;
        self.expect(&Tok::Colon)?;
        let ty = self.term()?;
        Ok((c, Prop { lhs, rhs, role, ty }))
    }

    fn case_flag(&mut self) -> Result<FullFlag, ParseError> {
        match self.peek().clone() {
            Tok::Plus => {
                self.bump();
                Ok(FullFlag::App(AppFlag::Rel))
            }
            Tok::Minus => {
                self.bump();
                Ok(FullFlag::App(AppFlag::Irrel))
            }
            Tok::Ident(s) if s == "o" => {
                self.bump();
                Ok(FullFlag::Co)
            }
            Tok::Ident(s) if s == "nom" || s == "rep" => {
                self.bump();
                let r = if s == "nom" { Role::Nom } else { Role::Rep };
                Ok(FullFlag::App(AppFlag::Role(r)))
            }
            other => self.err(format!("expected a case flag (nom, rep, +, -, o), found {other}")),
        }
    }

    // application chain: atom followed by arguments
    fn app(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.atom()?;
        loop {
            match self.peek().clone() {
                // `@nom`/`@rep` flags an argument; any other `@` belongs to
                // the enclosing declaration's role list
                Tok::At if matches!(self.peek2(), Tok::Ident(s) if s == "nom" || s == "rep") => {
                    self.bump();
                    let r = self.role()?;
                    let arg = self.atom()?;
                    acc = Term::App(Box::new(acc), Box::new(arg), AppFlag::Role(r));
                }
                Tok::LBrace => {
                    self.bump();
                    self.expect(&Tok::Under)?;
                    self.expect(&Tok::RBrace)?;
                    acc = Term::App(Box::new(acc), Box::new(Term::Box), AppFlag::Irrel);
                }
                Tok::LBracket => {
                    self.bump();
                    self.expect(&Tok::RBracket)?;
                    acc = Term::CApp(Box::new(acc));
                }
                Tok::Ident(s) if !is_keyword(&s) => {
                    let arg = self.atom()?;
                    acc = Term::App(Box::new(acc), Box::new(arg), AppFlag::Rel);
                }
                Tok::LParen => {
                    let arg = self.atom()?;
                    acc = Term::App(Box::new(acc), Box::new(arg), AppFlag::Rel);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "Type" => {
                self.bump();
                Ok(Term::Star)
            }
            Tok::Ident(s) if is_keyword(&s) => {
                self.err(format!("`{s}` is reserved; parenthesize binder forms used as arguments"))
            }
            Tok::Ident(s) => {
                self.bump();
                self.name_term(s)
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            other => self.err(format!("expected a term, found {other}")),
        }
    }

    fn role_list(&mut self) -> Result<Vec<Role>, ParseError> {
        self.expect(&Tok::LBracket)?;
        let mut roles = Vec::new();
        if *self.peek() != Tok::RBracket {
            loop {
                roles.push(self.role()?);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(&Tok::RBracket)?;
        Ok(roles)
    }

    // F x@nom y@rep z {_} []
    fn pattern(&mut self) -> Result<Pattern, ParseError> {
        let head = self.ident()?;
        let mut args = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Ident(x) => {
                    self.bump();
                    if *self.peek() == Tok::At {
                        self.bump();
                        let r = self.role()?;
                        args.push(PatArg::RoleVar(x, r));
                    } else {
                        args.push(PatArg::RelVar(x));
                    }
                }
                Tok::LBrace => {
                    self.bump();
                    self.expect(&Tok::Under)?;
                    self.expect(&Tok::RBrace)?;
                    args.push(PatArg::IrrelSlot);
                }
                Tok::LBracket => {
                    self.bump();
                    self.expect(&Tok::RBracket)?;
                    args.push(PatArg::CoSlot);
                }
                _ => return Ok(Pattern { head, args }),
            }
        }
    }

    fn decl(&mut self) -> Result<SigEntry, ParseError> {
        let kw = self.ident()?;
        match kw.as_str() {
            "const" => {
                let name = self.ident()?;
                self.expect(&Tok::Colon)?;
                let ty = self.term()?;
                self.expect(&Tok::At)?;
                let roles = self.role_list()?;
                Ok(SigEntry::Const { name, ty, roles })
            }
            "typefam" | "newtype" => {
                let axiom_role = if kw == "typefam" { Role::Nom } else { Role::Rep };
                let name = self.ident()?;
                self.expect(&Tok::Colon)?;
                let ty = self.term()?;
                self.expect(&Tok::At)?;
                let roles = self.role_list()?;
                match self.bump() {
                    Tok::Ident(s) if s == "where" => {}
                    other => return self.err(format!("expected `where`, found {other}")),
                }
                let pattern = self.pattern()?;
                self.expect(&Tok::Eq)?;
                // pattern variables scope over the right-hand side,
                // shadowing constants
                let depth = self.scope.len();
                self.scope.extend(pattern.vars().into_iter().map(|v| (v, BinderKind::Tm)));
                let rhs = self.term();
                self.scope.truncate(depth);
                Ok(SigEntry::Axiom { name, ty, roles, pattern, rhs: rhs?, axiom_role })
            }
            other => self.err(format!(
                "expected `const`, `typefam` or `newtype`, found `{other}`"
            )),
        }
    }
}

/// Parse a full `.dr` signature. Declarations are unordered and may be
/// recursive: names resolve against the whole file.
pub fn parse_signature(src: &str) -> Result<Signature, ParseError> {
    let entries = parse_entries(src)?;
    let (line, col) = (1, 1);
    Signature::from_entries(entries)
        .map_err(|e| ParseError { line, col, msg: e.to_string() })
}

/// Parse the declarations of a `.dr` file without rejecting duplicates.
pub fn parse_entries(src: &str) -> Result<Vec<SigEntry>, ParseError> {
    let toks = lex(src)?;
    let mut consts = HashSet::new();
    let mut i = 0;
    while i < toks.len() {
        if let (Tok::Ident(kw), ..) = &toks[i] {
            if kw == "const" || kw == "typefam" || kw == "newtype" {
                if let Some((Tok::Ident(name), ..)) = toks.get(i + 1) {
                    consts.insert(name.clone());
                }
            }
        }
        i += 1;
    }
    let mut p = Parser { toks, pos: 0, consts, scope: Vec::new() };
    let mut entries = Vec::new();
    while *p.peek() != Tok::Eof {
        entries.push(p.decl()?);
    }
    Ok(entries)
}

/// Parse one expression against a signature's constant names.
pub fn parse_expr(sig: &Signature, src: &str) -> Result<Term, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        consts: sig.names().cloned().collect(),
        scope: Vec::new(),
    };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.err(format!("trailing input starting at {}", p.peek()));
    }
    Ok(t)
}
