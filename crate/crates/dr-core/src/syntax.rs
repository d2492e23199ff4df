//! Term, pattern and signature data model.
//!
//! Binding uses a locally nameless representation: bound variables are
//! de Bruijn indices private to [`Binder`], free variables are names. Every
//! term handed across a public API is locally closed, so alpha-equivalence
//! is plain structural equality (binder name hints are kept for printing
//! only and ignored by `Eq`/`Hash`).

use std::collections::HashSet;
use std::fmt;

use indexmap::IndexMap;

use crate::roles::{AppFlag, FullFlag, Relevance, Role};

pub type Name = String;

/// Terms and types share one syntax: a single sort `Type`, dependent
/// functions (relevant and irrelevant), coercion abstraction over equality
/// propositions, declared constants, and head-constructor case analysis.
#[derive(Clone, Debug)]
pub enum Term {
    /// The sort of types, `Type : Type`.
    Star,
    /// Free variable.
    Var(Name),
    /// Bound variable; never escapes a [`Binder`].
    BVar(u32),
    /// Declared constant or axiom head.
    Const(Name),
    /// The trivial term, the argument of every irrelevant application.
    Box,
    /// `\+(x:A) -> b` / `\-(x:A) -> b`; the annotation exists only in
    /// surface terms and is stripped by [`erase`].
    Abs(Relevance, Option<Box<Term>>, Binder),
    App(Box<Term>, Box<Term>, AppFlag),
    Pi(Relevance, Box<Term>, Binder),
    /// `/\(c : phi) -> b`; annotation surface-only, the bound coercion
    /// variable cannot occur in the body.
    CAbs(Option<Box<Prop>>, Binder),
    /// `a []` — coercion instantiation.
    CApp(Box<Term>),
    CPi(Box<Prop>, Binder),
    /// `case a of F [flags] -> b1 ; _ -> b2`.
    Case(Box<Term>, Name, Vec<FullFlag>, Box<Term>, Box<Term>),
}

/// Role-indexed equality proposition `a ~[R] b : A`.
#[derive(Clone, Debug)]
pub struct Prop {
    pub lhs: Term,
    pub rhs: Term,
    pub role: Role,
    pub ty: Term,
}

/// Body of a binding form. The body carries `BVar(d)` references to the
/// binder at nesting depth `d`; `hint` is the user-facing name, ignored by
/// equality.
#[derive(Clone, Debug)]
pub struct Binder {
    pub hint: Name,
    body: Box<Term>,
}

impl Binder {
    /// Bind `x`: occurrences of the free variable `x` in `body` become
    /// references to this binder.
    pub fn bind(hint: impl Into<Name>, x: &Name, body: Term) -> Binder {
        let hint = hint.into();
        Binder { hint, body: Box::new(close_at(body, x, 0)) }
    }

    /// A binder whose variable does not occur (used for coercion binders
    /// and non-dependent codomains).
    pub fn unused(hint: impl Into<Name>, body: Term) -> Binder {
        Binder { hint: hint.into(), body: Box::new(body) }
    }

    /// Open the binder with a replacement term (capture-avoiding by
    /// construction: the replacement is locally closed).
    pub fn open(&self, arg: &Term) -> Term {
        open_at((*self.body).clone(), arg, 0)
    }

    /// Open with a fresh free variable whose name avoids `avoid`.
    pub fn open_fresh(&self, avoid: &HashSet<Name>) -> (Name, Term) {
        let x = fresh(&self.hint, avoid);
        let t = self.open(&Term::Var(x.clone()));
        (x, t)
    }

    /// Access the body of a binder whose variable is known not to occur.
    pub fn open_unused(&self) -> Term {
        debug_assert!(!self.mentions_binder());
        (*self.body).clone()
    }

    /// Whether the bound variable occurs in the body.
    pub fn mentions_binder(&self) -> bool {
        mentions_bvar(&self.body, 0)
    }

    pub fn map_body(&self, f: impl FnOnce(&Term) -> Term) -> Binder {
        Binder { hint: self.hint.clone(), body: Box::new(f(&self.body)) }
    }
}

fn close_at(t: Term, x: &Name, depth: u32) -> Term {
    match t {
        Term::Var(ref y) if y == x => Term::BVar(depth),
        Term::Star | Term::Var(_) | Term::BVar(_) | Term::Const(_) | Term::Box => t,
        Term::Abs(rho, ann, b) => Term::Abs(
            rho,
            ann.map(|a| Box::new(close_at(*a, x, depth))),
            b.map_at(x, depth, close_at),
        ),
        Term::App(f, a, nu) => Term::App(
            Box::new(close_at(*f, x, depth)),
            Box::new(close_at(*a, x, depth)),
            nu,
        ),
        Term::Pi(rho, a, b) => Term::Pi(
            rho,
            Box::new(close_at(*a, x, depth)),
            b.map_at(x, depth, close_at),
        ),
        Term::CAbs(ann, b) => Term::CAbs(
            ann.map(|p| Box::new(p.map_terms(|t| close_at(t, x, depth)))),
            b.map_at(x, depth, close_at),
        ),
        Term::CApp(f) => Term::CApp(Box::new(close_at(*f, x, depth))),
        Term::CPi(p, b) => Term::CPi(
            Box::new(p.map_terms(|t| close_at(t, x, depth))),
            b.map_at(x, depth, close_at),
        ),
        Term::Case(s, f, flags, b1, b2) => Term::Case(
            Box::new(close_at(*s, x, depth)),
            f,
            flags,
            Box::new(close_at(*b1, x, depth)),
            Box::new(close_at(*b2, x, depth)),
        ),
    }
}

fn open_at(t: Term, arg: &Term, depth: u32) -> Term {
    match t {
        Term::BVar(i) if i == depth => arg.clone(),
        Term::Star | Term::Var(_) | Term::BVar(_) | Term::Const(_) | Term::Box => t,
        Term::Abs(rho, ann, b) => Term::Abs(
            rho,
            ann.map(|a| Box::new(open_at(*a, arg, depth))),
            b.map_arg_at(arg, depth, open_at),
        ),
        Term::App(f, a, nu) => Term::App(
            Box::new(open_at(*f, arg, depth)),
            Box::new(open_at(*a, arg, depth)),
            nu,
        ),
        Term::Pi(rho, a, b) => Term::Pi(
            rho,
            Box::new(open_at(*a, arg, depth)),
            b.map_arg_at(arg, depth, open_at),
        ),
        Term::CAbs(ann, b) => Term::CAbs(
            ann.map(|p| Box::new(p.map_terms(|t| open_at(t, arg, depth)))),
            b.map_arg_at(arg, depth, open_at),
        ),
        Term::CApp(f) => Term::CApp(Box::new(open_at(*f, arg, depth))),
        Term::CPi(p, b) => Term::CPi(
            Box::new(p.map_terms(|t| open_at(t, arg, depth))),
            b.map_arg_at(arg, depth, open_at),
        ),
        Term::Case(s, f, flags, b1, b2) => Term::Case(
            Box::new(open_at(*s, arg, depth)),
            f,
            flags,
            Box::new(open_at(*b1, arg, depth)),
            Box::new(open_at(*b2, arg, depth)),
        ),
    }
}

impl Binder {
    fn map_at(self, x: &Name, depth: u32, f: fn(Term, &Name, u32) -> Term) -> Binder {
        Binder { hint: self.hint, body: Box::new(f(*self.body, x, depth + 1)) }
    }

    fn map_arg_at(self, arg: &Term, depth: u32, f: fn(Term, &Term, u32) -> Term) -> Binder {
        Binder { hint: self.hint, body: Box::new(f(*self.body, arg, depth + 1)) }
    }
}

fn mentions_bvar(t: &Term, depth: u32) -> bool {
    match t {
        Term::BVar(i) => *i == depth,
        Term::Star | Term::Var(_) | Term::Const(_) | Term::Box => false,
        Term::Abs(_, ann, b) => {
            ann.as_deref().is_some_and(|a| mentions_bvar(a, depth))
                || mentions_bvar(&b.body, depth + 1)
        }
        Term::App(f, a, _) => mentions_bvar(f, depth) || mentions_bvar(a, depth),
        Term::Pi(_, a, b) => mentions_bvar(a, depth) || mentions_bvar(&b.body, depth + 1),
        Term::CAbs(ann, b) => {
            ann.as_deref().is_some_and(|p| p.any_term(|t| mentions_bvar(t, depth)))
                || mentions_bvar(&b.body, depth + 1)
        }
        Term::CApp(f) => mentions_bvar(f, depth),
        Term::CPi(p, b) => {
            p.any_term(|t| mentions_bvar(t, depth)) || mentions_bvar(&b.body, depth + 1)
        }
        Term::Case(s, _, _, b1, b2) => {
            mentions_bvar(s, depth) || mentions_bvar(b1, depth) || mentions_bvar(b2, depth)
        }
    }
}

impl Prop {
    pub fn map_terms(&self, mut f: impl FnMut(Term) -> Term) -> Prop {
        Prop {
            lhs: f(self.lhs.clone()),
            rhs: f(self.rhs.clone()),
            role: self.role,
            ty: f(self.ty.clone()),
        }
    }

    pub fn any_term(&self, mut f: impl FnMut(&Term) -> bool) -> bool {
        f(&self.lhs) || f(&self.rhs) || f(&self.ty)
    }
}

/// Substitute the free variable `x` by `v` (capture-free: bound variables
/// are indices, `v` is locally closed).
pub fn subst_free(t: &Term, x: &Name, v: &Term) -> Term {
    match t {
        Term::Var(y) if y == x => v.clone(),
        Term::Star | Term::Var(_) | Term::BVar(_) | Term::Const(_) | Term::Box => t.clone(),
        Term::Abs(rho, ann, b) => Term::Abs(
            *rho,
            ann.as_ref().map(|a| Box::new(subst_free(a, x, v))),
            b.map_body(|body| subst_free(body, x, v)),
        ),
        Term::App(f, a, nu) => Term::App(
            Box::new(subst_free(f, x, v)),
            Box::new(subst_free(a, x, v)),
            *nu,
        ),
        Term::Pi(rho, a, b) => Term::Pi(
            *rho,
            Box::new(subst_free(a, x, v)),
            b.map_body(|body| subst_free(body, x, v)),
        ),
        Term::CAbs(ann, b) => Term::CAbs(
            ann.as_ref().map(|p| Box::new(p.map_terms(|t| subst_free(&t, x, v)))),
            b.map_body(|body| subst_free(body, x, v)),
        ),
        Term::CApp(f) => Term::CApp(Box::new(subst_free(f, x, v))),
        Term::CPi(p, b) => Term::CPi(
            Box::new(p.map_terms(|t| subst_free(&t, x, v))),
            b.map_body(|body| subst_free(body, x, v)),
        ),
        Term::Case(s, f, flags, b1, b2) => Term::Case(
            Box::new(subst_free(s, x, v)),
            f.clone(),
            flags.clone(),
            Box::new(subst_free(b1, x, v)),
            Box::new(subst_free(b2, x, v)),
        ),
    }
}

/// Open a binder body with a replacement term.
pub fn substitute(body: &Binder, replacement: &Term) -> Term {
    body.open(replacement)
}

/// True iff the two terms are identical up to bound-variable renaming.
/// Binder annotations participate (they are absent from erased terms).
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    a == b
}

/// The free (term) variables of a term. Coercion variables cannot occur
/// inside erased terms, so the set is exactly the free term variables.
pub fn free_vars(t: &Term) -> HashSet<Name> {
    let mut out = HashSet::new();
    collect_free(t, &mut out);
    out
}

fn collect_free(t: &Term, out: &mut HashSet<Name>) {
    match t {
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::Star | Term::BVar(_) | Term::Const(_) | Term::Box => {}
        Term::Abs(_, ann, b) => {
            if let Some(a) = ann {
                collect_free(a, out);
            }
            collect_free(&b.body, out);
        }
        Term::App(f, a, _) => {
            collect_free(f, out);
            collect_free(a, out);
        }
        Term::Pi(_, a, b) => {
            collect_free(a, out);
            collect_free(&b.body, out);
        }
        Term::CAbs(ann, b) => {
            if let Some(p) = ann {
                collect_free(&p.lhs, out);
                collect_free(&p.rhs, out);
                collect_free(&p.ty, out);
            }
            collect_free(&b.body, out);
        }
        Term::CApp(f) => collect_free(f, out),
        Term::CPi(p, b) => {
            collect_free(&p.lhs, out);
            collect_free(&p.rhs, out);
            collect_free(&p.ty, out);
            collect_free(&b.body, out);
        }
        Term::Case(s, _, _, b1, b2) => {
            collect_free(s, out);
            collect_free(b1, out);
            collect_free(b2, out);
        }
    }
}

/// Strip binder annotations; evaluation and equality operate on erased
/// terms only.
pub fn erase(t: &Term) -> Term {
    match t {
        Term::Star | Term::Var(_) | Term::BVar(_) | Term::Const(_) | Term::Box => t.clone(),
        Term::Abs(rho, _, b) => Term::Abs(*rho, None, b.map_body(erase)),
        Term::App(f, a, nu) => Term::App(Box::new(erase(f)), Box::new(erase(a)), *nu),
        Term::Pi(rho, a, b) => Term::Pi(*rho, Box::new(erase(a)), b.map_body(erase)),
        Term::CAbs(_, b) => Term::CAbs(None, b.map_body(erase)),
        Term::CApp(f) => Term::CApp(Box::new(erase(f))),
        Term::CPi(p, b) => Term::CPi(
            Box::new(p.map_terms(|t| erase(&t))),
            b.map_body(erase),
        ),
        Term::Case(s, f, flags, b1, b2) => Term::Case(
            Box::new(erase(s)),
            f.clone(),
            flags.clone(),
            Box::new(erase(b1)),
            Box::new(erase(b2)),
        ),
    }
}

/// Pick a name based on `base` that is not in `avoid`: the bare base if
/// possible, otherwise the base with the smallest numeric suffix. Purely a
/// function of its inputs, so reduction stays reproducible.
pub fn fresh(base: &str, avoid: &HashSet<Name>) -> Name {
    let base = if base.is_empty() { "x" } else { base };
    if !avoid.contains(base) {
        return base.to_string();
    }
    for k in 1u64.. {
        let cand = format!("{base}{k}");
        if !avoid.contains(&cand) {
            return cand;
        }
    }
    unreachable!()
}

// Equality and hashing ignore binder hints so that alpha-equivalence is
// structural.

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        use Term::*;
        match (self, other) {
            (Star, Star) | (Box, Box) => true,
            (Var(x), Var(y)) => x == y,
            (BVar(i), BVar(j)) => i == j,
            (Const(x), Const(y)) => x == y,
            (Abs(r1, a1, b1), Abs(r2, a2, b2)) => r1 == r2 && a1 == a2 && b1 == b2,
            (App(f1, a1, n1), App(f2, a2, n2)) => n1 == n2 && f1 == f2 && a1 == a2,
            (Pi(r1, a1, b1), Pi(r2, a2, b2)) => r1 == r2 && a1 == a2 && b1 == b2,
            (CAbs(a1, b1), CAbs(a2, b2)) => a1 == a2 && b1 == b2,
            (CApp(f1), CApp(f2)) => f1 == f2,
            (CPi(p1, b1), CPi(p2, b2)) => p1 == p2 && b1 == b2,
            (Case(s1, f1, fl1, x1, y1), Case(s2, f2, fl2, x2, y2)) => {
                f1 == f2 && fl1 == fl2 && s1 == s2 && x1 == x2 && y1 == y2
            }
            _ => false,
        }
    }
}

impl Eq for Term {}

impl PartialEq for Binder {
    fn eq(&self, other: &Self) -> bool {
        self.body == other.body
    }
}

impl Eq for Binder {}

impl PartialEq for Prop {
    fn eq(&self, other: &Self) -> bool {
        self.role == other.role
            && self.lhs == other.lhs
            && self.rhs == other.rhs
            && self.ty == other.ty
    }
}

impl Eq for Prop {}

impl std::hash::Hash for Term {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        use Term::*;
        std::mem::discriminant(self).hash(state);
        match self {
            Star | Box => {}
            Var(x) => x.hash(state),
            BVar(i) => i.hash(state),
            Const(x) => x.hash(state),
            Abs(r, a, b) => {
                r.hash(state);
                a.hash(state);
                b.hash(state);
            }
            App(f, a, n) => {
                n.hash(state);
                f.hash(state);
                a.hash(state);
            }
            Pi(r, a, b) => {
                r.hash(state);
                a.hash(state);
                b.hash(state);
            }
            CAbs(a, b) => {
                a.hash(state);
                b.hash(state);
            }
            CApp(f) => f.hash(state),
            CPi(p, b) => {
                p.hash(state);
                b.hash(state);
            }
            Case(s, f, fl, x, y) => {
                s.hash(state);
                f.hash(state);
                fl.hash(state);
                x.hash(state);
                y.hash(state);
            }
        }
    }
}

impl std::hash::Hash for Binder {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.body.hash(state);
    }
}

impl std::hash::Hash for Prop {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.role.hash(state);
        self.lhs.hash(state);
        self.rhs.hash(state);
        self.ty.hash(state);
    }
}

// Application spines.

/// One element of an application spine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Applicator {
    Tm(Term, AppFlag),
    Co,
}

/// Decompose nested applications into a head and its applicators in
/// head-outward order.
pub fn decompose_spine(t: &Term) -> (Term, Vec<Applicator>) {
    let mut args = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::App(f, a, nu) => {
                args.push(Applicator::Tm((**a).clone(), *nu));
                cur = f;
            }
            Term::CApp(f) => {
                args.push(Applicator::Co);
                cur = f;
            }
            _ => break,
        }
    }
    args.reverse();
    (cur.clone(), args)
}

pub fn rebuild_spine(head: Term, args: &[Applicator]) -> Term {
    args.iter().fold(head, |acc, app| match app {
        Applicator::Tm(a, nu) => Term::App(Box::new(acc), Box::new(a.clone()), *nu),
        Applicator::Co => Term::CApp(Box::new(acc)),
    })
}

// Patterns and signatures.

/// One argument position of an axiom pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatArg {
    RoleVar(Name, Role),
    RelVar(Name),
    IrrelSlot,
    CoSlot,
}

/// Axiom pattern: a constant head applied to variables and slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    pub head: Name,
    pub args: Vec<PatArg>,
}

impl Pattern {
    pub fn vars(&self) -> Vec<Name> {
        self.args
            .iter()
            .filter_map(|a| match a {
                PatArg::RoleVar(x, _) => Some(x.clone()),
                PatArg::RelVar(x) => Some(x.clone()),
                _ => None,
            })
            .collect()
    }
}

/// Top-level declaration: an opaque constant, or an axiom (type family at
/// role Nom, newtype at role Rep) equating a pattern with its definition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigEntry {
    Const {
        name: Name,
        ty: Term,
        roles: Vec<Role>,
    },
    Axiom {
        name: Name,
        ty: Term,
        roles: Vec<Role>,
        pattern: Pattern,
        rhs: Term,
        axiom_role: Role,
    },
}

impl SigEntry {
    pub fn name(&self) -> &Name {
        match self {
            SigEntry::Const { name, .. } | SigEntry::Axiom { name, .. } => name,
        }
    }

    pub fn ty(&self) -> &Term {
        match self {
            SigEntry::Const { ty, .. } | SigEntry::Axiom { ty, .. } => ty,
        }
    }

    pub fn roles(&self) -> &[Role] {
        match self {
            SigEntry::Const { roles, .. } | SigEntry::Axiom { roles, .. } => roles,
        }
    }
}

/// The global signature: declaration-ordered, names unique. Definitions may
/// be recursive; each entry may refer to any name in the signature.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    entries: IndexMap<Name, SigEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("duplicate declaration of `{0}`")]
pub struct DuplicateName(pub Name);

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn insert(&mut self, entry: SigEntry) -> Result<(), DuplicateName> {
        let name = entry.name().clone();
        if self.entries.contains_key(&name) {
            return Err(DuplicateName(name));
        }
        self.entries.insert(name, entry);
        Ok(())
    }

    pub fn from_entries(entries: Vec<SigEntry>) -> Result<Signature, DuplicateName> {
        let mut sig = Signature::new();
        for e in entries {
            sig.insert(e)?;
        }
        Ok(sig)
    }

    pub fn get(&self, name: &str) -> Option<&SigEntry> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &SigEntry> {
        self.entries.values()
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.entries.keys()
    }
}

// Typing contexts.

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CtxEntry {
    /// Term variable with its (erased) type.
    TmVar(Name, Term),
    /// Coercion variable with its proposition.
    CoVar(Name, Prop),
}

impl CtxEntry {
    pub fn name(&self) -> &Name {
        match self {
            CtxEntry::TmVar(x, _) | CtxEntry::CoVar(x, _) => x,
        }
    }
}

/// Ordered telescope of term- and coercion-variable bindings.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ctx {
    entries: Vec<CtxEntry>,
}

impl Ctx {
    pub fn new() -> Ctx {
        Ctx::default()
    }

    pub fn push(&mut self, entry: CtxEntry) {
        debug_assert!(!self.contains(entry.name()));
        self.entries.push(entry);
    }

    pub fn pop(&mut self) {
        self.entries.pop();
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.iter().any(|e| e.name() == name)
    }

    pub fn lookup_tm(&self, name: &str) -> Option<&Term> {
        self.entries.iter().find_map(|e| match e {
            CtxEntry::TmVar(x, ty) if x == name => Some(ty),
            _ => None,
        })
    }

    pub fn lookup_co(&self, name: &str) -> Option<&Prop> {
        self.entries.iter().find_map(|e| match e {
            CtxEntry::CoVar(x, p) if x == name => Some(p),
            _ => None,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = &CtxEntry> {
        self.entries.iter()
    }

    pub fn names(&self) -> HashSet<Name> {
        self.entries.iter().map(|e| e.name().clone()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The set of context names whose coercions may justify equalities.
/// Term-variable names may be stored too; equality consults only names
/// bound to coercions in the ambient context.
pub type AvailSet = std::collections::BTreeSet<Name>;

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::print::print_term(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roles::{AppFlag, Relevance, Role};

    fn var(x: &str) -> Term {
        Term::Var(x.to_string())
    }

    fn lam(x: &str, body: Term) -> Term {
        Term::Abs(Relevance::Rel, None, Binder::bind(x, &x.to_string(), body))
    }

    #[test]
    fn substitute_identity_body() {
        // body of \+x -> x, opened with Type
        let b = Binder::bind("x", &"x".to_string(), var("x"));
        assert_eq!(substitute(&b, &Term::Star), Term::Star);
    }

    #[test]
    fn substitute_constant_body() {
        let b = Binder::bind("x", &"x".to_string(), Term::Star);
        assert_eq!(substitute(&b, &Term::Const("Int".into())), Term::Star);
    }

    #[test]
    fn substitute_axiom_rhs() {
        // rhs of F: Maybe x^Rep, opened with Int, gives Maybe Int^Rep
        let rhs = Term::App(
            Box::new(Term::Const("Maybe".into())),
            Box::new(var("x")),
            AppFlag::Role(Role::Rep),
        );
        let got = subst_free(&rhs, &"x".to_string(), &Term::Const("Int".into()));
        let want = Term::App(
            Box::new(Term::Const("Maybe".into())),
            Box::new(Term::Const("Int".into())),
            AppFlag::Role(Role::Rep),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn alpha_renaming() {
        assert!(alpha_eq(&lam("x", var("x")), &lam("y", var("y"))));
        assert!(alpha_eq(&Term::Star, &Term::Star));
        assert!(!alpha_eq(
            &Term::Const("HTML".into()),
            &Term::Const("String".into())
        ));
    }

    #[test]
    fn free_vars_examples() {
        assert!(free_vars(&lam("x", var("x"))).is_empty());
        let t = Term::App(
            Box::new(Term::Const("Maybe".into())),
            Box::new(var("x")),
            AppFlag::Role(Role::Rep),
        );
        assert_eq!(free_vars(&t), HashSet::from(["x".to_string()]));
        let prop = Prop {
            lhs: var("x"),
            rhs: var("y"),
            role: Role::Nom,
            ty: Term::Star,
        };
        let t = Term::CPi(Box::new(prop), Binder::unused("c", Term::Star));
        assert_eq!(
            free_vars(&t),
            HashSet::from(["x".to_string(), "y".to_string()])
        );
    }

    #[test]
    fn erase_strips_annotations() {
        let surface = Term::Abs(
            Relevance::Rel,
            Some(Box::new(Term::Const("Int".into()))),
            Binder::bind("x", &"x".to_string(), var("x")),
        );
        assert_eq!(erase(&surface), lam("x", var("x")));
        assert_eq!(erase(&erase(&surface)), erase(&surface));

        let irrel = Term::Abs(
            Relevance::Irrel,
            Some(Box::new(Term::Star)),
            Binder::bind("x", &"x".to_string(), Term::Const("Int".into())),
        );
        let want = Term::Abs(
            Relevance::Irrel,
            None,
            Binder::bind("x", &"x".to_string(), Term::Const("Int".into())),
        );
        assert_eq!(erase(&irrel), want);

        let cabs = Term::CAbs(
            Some(Box::new(Prop {
                lhs: Term::Const("Int".into()),
                rhs: Term::Const("Int".into()),
                role: Role::Nom,
                ty: Term::Star,
            })),
            Binder::unused("c", Term::Star),
        );
        assert_eq!(erase(&cabs), Term::CAbs(None, Binder::unused("c", Term::Star)));
    }

    #[test]
    fn substitute_unused_binder_returns_body() {
        let b = Binder::bind("x", &"x".to_string(), var("y"));
        assert_eq!(substitute(&b, &Term::Star), var("y"));
    }

    #[test]
    fn fresh_is_deterministic() {
        let avoid: HashSet<Name> = ["x".to_string(), "x1".to_string()].into();
        assert_eq!(fresh("x", &avoid), "x2");
        assert_eq!(fresh("y", &avoid), "y");
    }

    #[test]
    fn spine_roundtrip() {
        let t = Term::CApp(Box::new(Term::App(
            Box::new(Term::App(
                Box::new(Term::Const("F".into())),
                Box::new(var("a")),
                AppFlag::Role(Role::Nom),
            )),
            Box::new(Term::Box),
            AppFlag::Irrel,
        )));
        let (head, args) = decompose_spine(&t);
        assert_eq!(head, Term::Const("F".into()));
        assert_eq!(args.len(), 3);
        assert_eq!(rebuild_spine(head, &args), t);
    }
}
