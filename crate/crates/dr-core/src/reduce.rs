//! Role-indexed operational semantics: values, primitive reduction,
//! deterministic one-step reduction with congruence, fuel-bounded
//! iteration, and the parallel (complete-development) step used by the
//! confluence oracle.

use std::collections::HashSet;
use std::fmt;

use crate::roles::{min_role, sub_role, AppFlag, FullFlag, Relevance, Role};
use crate::syntax::{
    decompose_spine, fresh, free_vars, rebuild_spine, subst_free, Applicator, Binder, Name,
    PatArg, Pattern, Prop, SigEntry, Signature, Term,
};

/// Fuel given to normalization when the caller does not say otherwise.
/// Axioms may be recursive, so every normalization is budgeted.
pub const DEFAULT_FUEL: u64 = 10_000;

/// The primitive rule that justified a step; congruence steps report the
/// primitive fired inside.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    AppAbs,
    AppAbsIrrel,
    CAppCAbs,
    Axiom,
    PatternTrue,
    PatternFalse,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::AppAbs => "ABeta-AppAbs",
            Rule::AppAbsIrrel => "ABeta-AppAbsIrrel",
            Rule::CAppCAbs => "ABeta-CAppCAbs",
            Rule::Axiom => "ABeta-Axiom",
            Rule::PatternTrue => "Beta-PatternTrue",
            Rule::PatternFalse => "Beta-PatternFalse",
        };
        write!(f, "{s}")
    }
}

/// Result of one deterministic step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Stepped { term: Term, rule: Rule },
    ValueAt(Role),
    /// Non-value normal form: an ill-typed input (free variable in head
    /// position, bare box, unknown constant, ...).
    Stuck(String),
}

/// Whether `a` is a value at role `r`. Relevant abstractions are values
/// outright; irrelevant abstractions only once their bodies are values;
/// constant-headed paths are values exactly when they cannot reduce at
/// `r` (see [`case_path`]).
pub fn is_value(sig: &Signature, r: Role, a: &Term) -> bool {
    match a {
        Term::Star | Term::Pi(..) | Term::CPi(..) | Term::CAbs(..) => true,
        Term::Abs(Relevance::Rel, _, _) => true,
        Term::Abs(Relevance::Irrel, _, b) => {
            let (_, body) = b.open_fresh(&free_vars(a));
            is_value(sig, r, &body)
        }
        Term::Const(_) | Term::App(..) | Term::CApp(_) => case_path(sig, r, a).is_some(),
        Term::Var(_) | Term::BVar(_) | Term::Box | Term::Case(..) => false,
    }
}

/// When `a` is an application path headed by a declared constant `F` that
/// cannot reduce at role `r`, returns `F`: either `F` is opaque, or its
/// axiom role is not below `r`, or no prefix of the spine agrees with the
/// axiom pattern (unsaturated or shape-mismatched).
pub fn case_path(sig: &Signature, r: Role, a: &Term) -> Option<Name> {
    let (head, args) = decompose_spine(a);
    let name = match head {
        Term::Const(f) => f,
        _ => return None,
    };
    match sig.get(&name)? {
        SigEntry::Const { .. } => Some(name),
        SigEntry::Axiom { axiom_role, pattern, .. } => {
            if !sub_role(*axiom_role, r) {
                return Some(name);
            }
            if prefix_agrees(&args, pattern) {
                None
            } else {
                Some(name)
            }
        }
    }
}

/// Whether some prefix of the spine can be unified with the pattern, i.e.
/// the path will eventually fire the axiom.
fn prefix_agrees(args: &[Applicator], pattern: &Pattern) -> bool {
    if args.len() < pattern.args.len() {
        return false;
    }
    args.iter().zip(&pattern.args).all(|(a, p)| arg_agrees(a, p))
}

fn arg_agrees(arg: &Applicator, pat: &PatArg) -> bool {
    match (arg, pat) {
        (Applicator::Tm(_, AppFlag::Role(r1)), PatArg::RoleVar(_, r2)) => r1 == r2,
        (Applicator::Tm(_, AppFlag::Rel), PatArg::RelVar(_)) => true,
        (Applicator::Tm(t, AppFlag::Irrel), PatArg::IrrelSlot) => matches!(t, Term::Box),
        (Applicator::Co, PatArg::CoSlot) => true,
        _ => false,
    }
}

/// Freshen the pattern variables consistently in pattern and right-hand
/// side, away from `avoid`.
pub fn rename(p: &Pattern, rhs: &Term, avoid: &HashSet<Name>) -> (Pattern, Term) {
    let mut taken: HashSet<Name> = avoid.clone();
    taken.extend(free_vars(rhs));
    for v in p.vars() {
        taken.insert(v);
    }
    let mut new_args = Vec::with_capacity(p.args.len());
    let mut new_rhs = rhs.clone();
    for arg in &p.args {
        match arg {
            PatArg::RoleVar(x, role) => {
                let x2 = rename_var(x, avoid, &mut taken);
                if x2 != *x {
                    new_rhs = subst_free(&new_rhs, x, &Term::Var(x2.clone()));
                }
                new_args.push(PatArg::RoleVar(x2, *role));
            }
            PatArg::RelVar(x) => {
                let x2 = rename_var(x, avoid, &mut taken);
                if x2 != *x {
                    new_rhs = subst_free(&new_rhs, x, &Term::Var(x2.clone()));
                }
                new_args.push(PatArg::RelVar(x2));
            }
            other => new_args.push(other.clone()),
        }
    }
    (Pattern { head: p.head.clone(), args: new_args }, new_rhs)
}

fn rename_var(x: &Name, avoid: &HashSet<Name>, taken: &mut HashSet<Name>) -> Name {
    if !avoid.contains(x) {
        return x.clone();
    }
    let x2 = fresh(x, taken);
    taken.insert(x2.clone());
    x2
}

/// If the application spine of `a` unifies positionally with the pattern,
/// returns the right-hand side with each pattern variable replaced by the
/// corresponding spine argument. Assumes [`rename`] was applied so pattern
/// variables avoid the free variables of `a`.
pub fn match_subst(a: &Term, p: &Pattern, rhs: &Term) -> Option<Term> {
    let (head, args) = decompose_spine(a);
    match head {
        Term::Const(f) if f == p.head => {}
        _ => return None,
    }
    if args.len() != p.args.len() {
        return None;
    }
    let mut out = rhs.clone();
    for (arg, pat) in args.iter().zip(&p.args) {
        if !arg_agrees(arg, pat) {
            return None;
        }
        match (arg, pat) {
            (Applicator::Tm(t, _), PatArg::RoleVar(x, _))
            | (Applicator::Tm(t, _), PatArg::RelVar(x)) => {
                out = subst_free(&out, x, t);
            }
            _ => {}
        }
    }
    Some(out)
}

/// Whether the scrutinee spine matches the case pattern `F [flags]`: same
/// head, positionally equal flag sequence, and the head is a constant at
/// role Nom (type-family axiom heads never match).
pub fn apps_path_match(sig: &Signature, scrutinee: &Term, head: &Name, flags: &[FullFlag]) -> bool {
    let (h, args) = decompose_spine(scrutinee);
    match h {
        Term::Const(f) if f == *head => {}
        _ => return false,
    }
    match sig.get(head) {
        Some(SigEntry::Const { .. }) => {}
        Some(SigEntry::Axiom { axiom_role, .. }) => {
            if *axiom_role == Role::Nom {
                return false;
            }
        }
        None => return false,
    }
    if args.len() != flags.len() {
        return false;
    }
    args.iter().zip(flags).all(|(a, fl)| match (a, fl) {
        (Applicator::Tm(_, nu1), FullFlag::App(nu2)) => nu1 == nu2,
        (Applicator::Co, FullFlag::Co) => true,
        _ => false,
    })
}

/// Apply the branch to the scrutinee's spine arguments, left to right.
/// Role-flagged arguments are passed relevantly (the branch is a plain
/// Π-telescope); box and coercion slots keep their shapes.
pub fn apply_args(args: &[Applicator], branch: &Term) -> Term {
    args.iter().fold(branch.clone(), |acc, arg| match arg {
        Applicator::Tm(t, AppFlag::Irrel) => {
            Term::App(Box::new(acc), Box::new(t.clone()), AppFlag::Irrel)
        }
        Applicator::Tm(t, _) => Term::App(Box::new(acc), Box::new(t.clone()), AppFlag::Rel),
        Applicator::Co => Term::CApp(Box::new(acc)),
    })
}

/// Perform one primitive reduction at the root, if any: call-by-name
/// beta, irrelevant beta (body must be a value), coercion beta, axiom
/// unfolding gated by the axiom role, and case dispatch on Nom-values.
pub fn beta_step(sig: &Signature, r: Role, a: &Term) -> Option<(Term, Rule)> {
    match a {
        Term::App(f, arg, nu) => match (f.as_ref(), nu) {
            (Term::Abs(Relevance::Rel, _, body), AppFlag::Rel | AppFlag::Role(_)) => {
                return Some((body.open(arg), Rule::AppAbs));
            }
            (Term::Abs(Relevance::Irrel, _, body), AppFlag::Irrel) => {
                let (_, opened) = body.open_fresh(&free_vars(f));
                if is_value(sig, r, &opened) {
                    return Some((body.open(arg), Rule::AppAbsIrrel));
                }
                return None;
            }
            _ => {}
        },
        Term::CApp(f) => {
            if let Term::CAbs(_, body) = f.as_ref() {
                return Some((body.open_unused(), Rule::CAppCAbs));
            }
        }
        Term::Case(s, head, flags, b1, b2) => {
            if is_value(sig, Role::Nom, s) {
                if apps_path_match(sig, s, head, flags) {
                    let (_, args) = decompose_spine(s);
                    let applied = apply_args(&args, b1);
                    return Some((Term::CApp(Box::new(applied)), Rule::PatternTrue));
                }
                return Some(((**b2).clone(), Rule::PatternFalse));
            }
            return None;
        }
        _ => {}
    }
    axiom_step(sig, r, a).map(|t| (t, Rule::Axiom))
}

/// Axiom unfolding at the root: the whole spine must match the pattern
/// exactly and the axiom role must be below the evaluation role.
fn axiom_step(sig: &Signature, r: Role, a: &Term) -> Option<Term> {
    let (head, args) = decompose_spine(a);
    let name = match head {
        Term::Const(f) => f,
        _ => return None,
    };
    let (pattern, rhs, axiom_role) = match sig.get(&name)? {
        SigEntry::Axiom { pattern, rhs, axiom_role, .. } => (pattern, rhs, *axiom_role),
        _ => return None,
    };
    if !sub_role(axiom_role, r) || args.len() != pattern.args.len() {
        return None;
    }
    let rhs = crate::syntax::erase(rhs);
    let (pattern, rhs) = rename(pattern, &rhs, &free_vars(a));
    match_subst(a, &pattern, &rhs)
}

/// One deterministic step at role `r`: a primitive reduction at the root,
/// else congruence in the function position of applications, inside the
/// body of an irrelevant abstraction, or in a case scrutinee (evaluated
/// at role Nom).
pub fn step(sig: &Signature, r: Role, a: &Term) -> StepOutcome {
    if let Some((term, rule)) = beta_step(sig, r, a) {
        return StepOutcome::Stepped { term, rule };
    }
    match a {
        Term::App(f, arg, nu) => match step(sig, r, f) {
            StepOutcome::Stepped { term, rule } => StepOutcome::Stepped {
                term: Term::App(Box::new(term), arg.clone(), *nu),
                rule,
            },
            StepOutcome::Stuck(msg) => StepOutcome::Stuck(msg),
            StepOutcome::ValueAt(_) => {
                if is_value(sig, r, a) {
                    StepOutcome::ValueAt(r)
                } else {
                    StepOutcome::Stuck("application of a non-function value".into())
                }
            }
        },
        Term::CApp(f) => match step(sig, r, f) {
            StepOutcome::Stepped { term, rule } => StepOutcome::Stepped {
                term: Term::CApp(Box::new(term)),
                rule,
            },
            StepOutcome::Stuck(msg) => StepOutcome::Stuck(msg),
            StepOutcome::ValueAt(_) => {
                if is_value(sig, r, a) {
                    StepOutcome::ValueAt(r)
                } else {
                    StepOutcome::Stuck("coercion application of a non-path value".into())
                }
            }
        },
        Term::Abs(Relevance::Irrel, ann, b) => {
            // the abstraction is a value only once its body is
            let (x, body) = b.open_fresh(&free_vars(a));
            match step(sig, r, &body) {
                StepOutcome::Stepped { term, rule } => StepOutcome::Stepped {
                    term: Term::Abs(Relevance::Irrel, ann.clone(), Binder::bind(&b.hint, &x, term)),
                    rule,
                },
                StepOutcome::ValueAt(_) => StepOutcome::ValueAt(r),
                StepOutcome::Stuck(msg) => StepOutcome::Stuck(msg),
            }
        }
        Term::Case(s, head, flags, b1, b2) => {
            // the scrutinee is evaluated at role Nom regardless of r
            match step(sig, Role::Nom, s) {
                StepOutcome::Stepped { term, rule } => StepOutcome::Stepped {
                    term: Term::Case(
                        Box::new(term),
                        head.clone(),
                        flags.clone(),
                        b1.clone(),
                        b2.clone(),
                    ),
                    rule,
                },
                StepOutcome::ValueAt(_) => {
                    StepOutcome::Stuck("case scrutinee is a value but dispatch failed".into())
                }
                StepOutcome::Stuck(msg) => StepOutcome::Stuck(msg),
            }
        }
        Term::Star | Term::Pi(..) | Term::CPi(..) | Term::CAbs(..)
        | Term::Abs(Relevance::Rel, _, _) => StepOutcome::ValueAt(r),
        Term::Const(name) => {
            if case_path(sig, r, a).is_some() {
                StepOutcome::ValueAt(r)
            } else {
                StepOutcome::Stuck(format!("unknown constant `{name}`"))
            }
        }
        Term::Var(x) => StepOutcome::Stuck(format!("free variable `{x}`")),
        Term::BVar(_) => StepOutcome::Stuck("dangling bound variable".into()),
        Term::Box => StepOutcome::Stuck("bare box".into()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReduceResult {
    pub term: Term,
    pub steps: u64,
    pub exhausted: bool,
    pub outcome: StepOutcome,
}

/// Iterate [`step`] until a value, a stuck term, or fuel exhaustion.
pub fn reduce(sig: &Signature, r: Role, a: &Term, fuel: u64) -> ReduceResult {
    let (res, _) = reduce_inner(sig, r, a, fuel, false);
    res
}

/// Like [`reduce`], also returning every intermediate step with the rule
/// that fired.
pub fn reduce_trace(sig: &Signature, r: Role, a: &Term, fuel: u64) -> (ReduceResult, Vec<(Rule, Term)>) {
    reduce_inner(sig, r, a, fuel, true)
}

fn reduce_inner(
    sig: &Signature,
    r: Role,
    a: &Term,
    fuel: u64,
    want_trace: bool,
) -> (ReduceResult, Vec<(Rule, Term)>) {
    let mut cur = a.clone();
    let mut steps = 0u64;
    let mut trace = Vec::new();
    loop {
        match step(sig, r, &cur) {
            StepOutcome::Stepped { term, rule } => {
                if steps >= fuel {
                    let outcome = StepOutcome::Stuck("fuel exhausted".into());
                    return (
                        ReduceResult { term: cur, steps, exhausted: true, outcome },
                        trace,
                    );
                }
                steps += 1;
                if want_trace {
                    trace.push((rule, term.clone()));
                }
                cur = term;
            }
            outcome => {
                return (
                    ReduceResult { term: cur, steps, exhausted: false, outcome },
                    trace,
                );
            }
        }
    }
}

/// The complete development of `a` at role `r`: simultaneously contracts
/// every primitive redex, with value side conditions evaluated on the
/// already-developed subterms. Application arguments develop at the role
/// the congruence rules compare them at: `+` at Nom, a role flag at the
/// minimum with the ambient role; case scrutinees develop at Nom.
pub fn par_step(sig: &Signature, r: Role, a: &Term) -> Term {
    match a {
        Term::Star | Term::Var(_) | Term::BVar(_) | Term::Box => a.clone(),
        Term::Const(_) => par_spine(sig, r, a).unwrap_or_else(|| a.clone()),
        Term::Abs(rho, ann, b) => {
            let (x, body) = b.open_fresh(&free_vars(a));
            Term::Abs(
                *rho,
                ann.clone(),
                Binder::bind(&b.hint, &x, par_step(sig, r, &body)),
            )
        }
        Term::Pi(rho, dom, b) => {
            let (x, body) = b.open_fresh(&free_vars(a));
            Term::Pi(
                *rho,
                Box::new(par_step(sig, r, dom)),
                Binder::bind(&b.hint, &x, par_step(sig, r, &body)),
            )
        }
        Term::CAbs(ann, b) => Term::CAbs(
            ann.clone(),
            b.map_body(|body| par_step(sig, r, body)),
        ),
        Term::CPi(p, b) => Term::CPi(
            Box::new(par_prop(sig, p)),
            b.map_body(|body| par_step(sig, r, body)),
        ),
        Term::App(f, arg, nu) => {
            match (f.as_ref(), nu) {
                (Term::Abs(Relevance::Rel, _, body), AppFlag::Rel | AppFlag::Role(_)) => {
                    let arg_role = arg_par_role(r, nu);
                    let (x, opened) = body.open_fresh(&free_vars(a));
                    let body_dev = par_step(sig, r, &opened);
                    let arg_dev = par_step(sig, arg_role, arg);
                    return subst_free(&body_dev, &x, &arg_dev);
                }
                // unlike one-step reduction, the parallel step contracts an
                // irrelevant beta redex without waiting for a value body;
                // the relation must be monotone in the role for developments
                // to commute across argument positions
                (Term::Abs(Relevance::Irrel, _, body), AppFlag::Irrel) => {
                    let (x, opened) = body.open_fresh(&free_vars(a));
                    let body_dev = par_step(sig, r, &opened);
                    return subst_free(&body_dev, &x, arg);
                }
                _ => {}
            }
            if let Some(t) = par_spine(sig, r, a) {
                return t;
            }
            let arg_role = arg_par_role(r, nu);
            Term::App(
                Box::new(par_step(sig, r, f)),
                Box::new(par_step(sig, arg_role, arg)),
                *nu,
            )
        }
        Term::CApp(f) => {
            if let Term::CAbs(_, body) = f.as_ref() {
                return par_step(sig, r, &body.open_unused());
            }
            if let Some(t) = par_spine(sig, r, a) {
                return t;
            }
            Term::CApp(Box::new(par_step(sig, r, f)))
        }
        Term::Case(s, head, flags, b1, b2) => {
            let s_dev = par_step(sig, Role::Nom, s);
            let b1_dev = par_step(sig, r, b1);
            let b2_dev = par_step(sig, r, b2);
            if is_value(sig, Role::Nom, &s_dev) {
                if apps_path_match(sig, &s_dev, head, flags) {
                    let (_, args) = decompose_spine(&s_dev);
                    return Term::CApp(Box::new(apply_args(&args, &b1_dev)));
                }
                return b2_dev;
            }
            Term::Case(
                Box::new(s_dev),
                head.clone(),
                flags.clone(),
                Box::new(b1_dev),
                Box::new(b2_dev),
            )
        }
    }
}

fn par_prop(sig: &Signature, p: &Prop) -> Prop {
    Prop {
        lhs: par_step(sig, p.role, &p.lhs),
        rhs: par_step(sig, p.role, &p.rhs),
        role: p.role,
        ty: par_step(sig, Role::Rep, &p.ty),
    }
}

fn arg_par_role(r: Role, nu: &AppFlag) -> Role {
    match nu {
        AppFlag::Rel | AppFlag::Irrel => Role::Nom,
        AppFlag::Role(r1) => min_role(*r1, r),
    }
}

/// Contract a saturated axiom spine on developed arguments, if the whole
/// term is such a redex at role `r`.
fn par_spine(sig: &Signature, r: Role, a: &Term) -> Option<Term> {
    let (head, args) = decompose_spine(a);
    let name = match head {
        Term::Const(f) => f,
        _ => return None,
    };
    let (pattern, rhs, axiom_role) = match sig.get(&name)? {
        SigEntry::Axiom { pattern, rhs, axiom_role, .. } => (pattern, rhs, *axiom_role),
        _ => return None,
    };
    if !sub_role(axiom_role, r) || args.len() != pattern.args.len() {
        return None;
    }
    let developed: Vec<Applicator> = args
        .iter()
        .map(|arg| match arg {
            Applicator::Tm(t, nu @ AppFlag::Irrel) => Applicator::Tm(t.clone(), *nu),
            Applicator::Tm(t, nu) => Applicator::Tm(par_step(sig, arg_par_role(r, nu), t), *nu),
            Applicator::Co => Applicator::Co,
        })
        .collect();
    let redex = rebuild_spine(Term::Const(name), &developed);
    let rhs = crate::syntax::erase(rhs);
    let (pattern, rhs) = rename(pattern, &rhs, &free_vars(&redex));
    match_subst(&redex, &pattern, &rhs)
}
