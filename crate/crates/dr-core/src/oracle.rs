//! Independent brute-force oracles and seeded generators powering the
//! metatheory property suites: exhaustive parallel-reduct enumeration,
//! joinability search, one-step redex enumeration, an annotation-carrying
//! reference stepper, and generators for well-roled and well-typed terms.

use std::collections::HashSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::reduce::{
    apply_args, apps_path_match, is_value, match_subst, rename, Rule,
};
use crate::rolecheck::{role_check, RoleCtx};
use crate::roles::{min_role, sub_role, AppFlag, FullFlag, Relevance, Role};
use crate::syntax::{
    decompose_spine, erase, free_vars, rebuild_spine, subst_free, Applicator, Binder, Name,
    Prop, SigEntry, Signature, Term,
};

/// Cap on the size of an enumerated reduct set; instances that blow past
/// it are skipped, not failed.
pub const REDUCT_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parallel reduct set exceeded the cap")]
pub struct CapExceeded;

/// All single parallel-step successors of `a` at role `r`: every subset of
/// its redexes contracted, with value side conditions evaluated on the
/// already-reduced subterms (mirroring the complete development).
pub fn enumerate_par_reducts(
    sig: &Signature,
    r: Role,
    a: &Term,
    cap: usize,
) -> Result<HashSet<Term>, CapExceeded> {
    let mut out = HashSet::new();
    par_reducts(sig, r, a, cap, &mut out)?;
    Ok(out)
}

fn guard(set: &HashSet<Term>, cap: usize) -> Result<(), CapExceeded> {
    if set.len() > cap {
        Err(CapExceeded)
    } else {
        Ok(())
    }
}

fn par_reducts(
    sig: &Signature,
    r: Role,
    a: &Term,
    cap: usize,
    out: &mut HashSet<Term>,
) -> Result<(), CapExceeded> {
    match a {
        Term::Star | Term::Var(_) | Term::BVar(_) | Term::Box => {
            out.insert(a.clone());
        }
        Term::Const(_) => {
            out.insert(a.clone());
            axiom_contractions(sig, r, a, cap, out)?;
        }
        Term::Abs(rho, ann, b) => {
            let (x, body) = b.open_fresh(&free_vars(a));
            let bodies = enumerate_par_reducts(sig, r, &body, cap)?;
            for b2 in bodies {
                out.insert(Term::Abs(*rho, ann.clone(), Binder::bind(&b.hint, &x, b2)));
            }
        }
        Term::Pi(rho, dom, b) => {
            let doms = enumerate_par_reducts(sig, r, dom, cap)?;
            let (x, body) = b.open_fresh(&free_vars(a));
            let bodies = enumerate_par_reducts(sig, r, &body, cap)?;
            for d in &doms {
                for b2 in &bodies {
                    out.insert(Term::Pi(
                        *rho,
                        Box::new(d.clone()),
                        Binder::bind(&b.hint, &x, b2.clone()),
                    ));
                    guard(out, cap)?;
                }
            }
        }
        Term::CAbs(ann, b) => {
            let bodies = enumerate_par_reducts(sig, r, &b.open_unused(), cap)?;
            for b2 in bodies {
                out.insert(Term::CAbs(ann.clone(), Binder::unused(&b.hint, b2)));
            }
        }
        Term::CPi(p, b) => {
            let ls = enumerate_par_reducts(sig, p.role, &p.lhs, cap)?;
            let rs = enumerate_par_reducts(sig, p.role, &p.rhs, cap)?;
            let ts = enumerate_par_reducts(sig, Role::Rep, &p.ty, cap)?;
            let bodies = enumerate_par_reducts(sig, r, &b.open_unused(), cap)?;
            for l in &ls {
                for rr in &rs {
                    for t in &ts {
                        for b2 in &bodies {
                            out.insert(Term::CPi(
                                Box::new(Prop {
                                    lhs: l.clone(),
                                    rhs: rr.clone(),
                                    role: p.role,
                                    ty: t.clone(),
                                }),
                                Binder::unused(&b.hint, b2.clone()),
                            ));
                            guard(out, cap)?;
                        }
                    }
                }
            }
        }
        Term::App(f, arg, nu) => {
            let arg_role = match nu {
                AppFlag::Role(r1) => min_role(*r1, r),
                _ => Role::Nom,
            };
            let fs = enumerate_par_reducts(sig, r, f, cap)?;
            let args = enumerate_par_reducts(sig, arg_role, arg, cap)?;
            for f2 in &fs {
                for a2 in &args {
                    out.insert(Term::App(Box::new(f2.clone()), Box::new(a2.clone()), *nu));
                    guard(out, cap)?;
                }
            }
            match (f.as_ref(), nu) {
                (Term::Abs(Relevance::Rel, _, body), AppFlag::Rel | AppFlag::Role(_)) => {
                    let (x, opened) = body.open_fresh(&free_vars(a));
                    let bodies = enumerate_par_reducts(sig, r, &opened, cap)?;
                    for b2 in &bodies {
                        for a2 in &args {
                            out.insert(subst_free(b2, &x, a2));
                            guard(out, cap)?;
                        }
                    }
                }
                (Term::Abs(Relevance::Irrel, _, body), AppFlag::Irrel) => {
                    // no value condition in the parallel relation
                    let (x, opened) = body.open_fresh(&free_vars(a));
                    let bodies = enumerate_par_reducts(sig, r, &opened, cap)?;
                    for b2 in &bodies {
                        out.insert(subst_free(b2, &x, &Term::Box));
                        guard(out, cap)?;
                    }
                }
                _ => {}
            }
            axiom_contractions(sig, r, a, cap, out)?;
        }
        Term::CApp(f) => {
            let fs = enumerate_par_reducts(sig, r, f, cap)?;
            for f2 in &fs {
                out.insert(Term::CApp(Box::new(f2.clone())));
                guard(out, cap)?;
            }
            if let Term::CAbs(_, body) = f.as_ref() {
                let bodies = enumerate_par_reducts(sig, r, &body.open_unused(), cap)?;
                for b2 in bodies {
                    out.insert(b2);
                    guard(out, cap)?;
                }
            }
            axiom_contractions(sig, r, a, cap, out)?;
        }
        Term::Case(s, head, flags, b1, b2) => {
            let ss = enumerate_par_reducts(sig, Role::Nom, s, cap)?;
            let b1s = enumerate_par_reducts(sig, r, b1, cap)?;
            let b2s = enumerate_par_reducts(sig, r, b2, cap)?;
            for s2 in &ss {
                for x1 in &b1s {
                    for x2 in &b2s {
                        out.insert(Term::Case(
                            Box::new(s2.clone()),
                            head.clone(),
                            flags.clone(),
                            Box::new(x1.clone()),
                            Box::new(x2.clone()),
                        ));
                        guard(out, cap)?;
                    }
                }
                if is_value(sig, Role::Nom, s2) {
                    if apps_path_match(sig, s2, head, flags) {
                        let (_, spine) = decompose_spine(s2);
                        for x1 in &b1s {
                            out.insert(Term::CApp(Box::new(apply_args(&spine, x1))));
                            guard(out, cap)?;
                        }
                    } else {
                        for x2 in &b2s {
                            out.insert(x2.clone());
                            guard(out, cap)?;
                        }
                    }
                }
            }
        }
    }
    guard(out, cap)
}

/// Contract a saturated axiom spine for every combination of developed
/// arguments.
fn axiom_contractions(
    sig: &Signature,
    r: Role,
    a: &Term,
    cap: usize,
    out: &mut HashSet<Term>,
) -> Result<(), CapExceeded> {
    let (head, args) = decompose_spine(a);
    let name = match head {
        Term::Const(f) => f,
        _ => return Ok(()),
    };
    let Some(SigEntry::Axiom { pattern, rhs, axiom_role, .. }) = sig.get(&name) else {
        return Ok(());
    };
    if !sub_role(*axiom_role, r) || args.len() != pattern.args.len() {
        return Ok(());
    }
    // reduct set per spine argument, at the role congruence compares it at
    let mut per_arg: Vec<Vec<Applicator>> = Vec::new();
    for arg in &args {
        match arg {
            Applicator::Tm(t, nu @ AppFlag::Irrel) => {
                per_arg.push(vec![Applicator::Tm(t.clone(), *nu)]);
            }
            Applicator::Tm(t, nu) => {
                let role = match nu {
                    AppFlag::Role(r1) => min_role(*r1, r),
                    _ => Role::Nom,
                };
                let set = enumerate_par_reducts(sig, role, t, cap)?;
                per_arg.push(set.into_iter().map(|t| Applicator::Tm(t, *nu)).collect());
            }
            Applicator::Co => per_arg.push(vec![Applicator::Co]),
        }
    }
    let mut combos: Vec<Vec<Applicator>> = vec![Vec::new()];
    for options in &per_arg {
        let mut next = Vec::new();
        for combo in &combos {
            for opt in options {
                let mut c = combo.clone();
                c.push(opt.clone());
                next.push(c);
                if next.len() > cap {
                    return Err(CapExceeded);
                }
            }
        }
        combos = next;
    }
    let rhs = erase(rhs);
    for combo in combos {
        let redex = rebuild_spine(Term::Const(name.clone()), &combo);
        let (pat, rhs2) = rename(pattern, &rhs, &free_vars(&redex));
        if let Some(t) = match_subst(&redex, &pat, &rhs2) {
            out.insert(t);
            guard(out, cap)?;
        }
    }
    Ok(())
}

/// Breadth-first joinability under parallel reduction, up to `depth`
/// parallel steps on each side.
pub fn joinable(sig: &Signature, r: Role, a: &Term, b: &Term, depth: usize) -> bool {
    let mut left: HashSet<Term> = HashSet::from([a.clone()]);
    let mut right: HashSet<Term> = HashSet::from([b.clone()]);
    if !left.is_disjoint(&right) {
        return true;
    }
    let mut lf: Vec<Term> = left.iter().cloned().collect();
    let mut rf: Vec<Term> = right.iter().cloned().collect();
    for _ in 0..depth {
        let mut next_l = Vec::new();
        for t in lf.drain(..) {
            if let Ok(set) = enumerate_par_reducts(sig, r, &t, REDUCT_CAP) {
                for u in set {
                    if left.insert(u.clone()) {
                        next_l.push(u);
                    }
                }
            }
        }
        lf = next_l;
        let mut next_r = Vec::new();
        for t in rf.drain(..) {
            if let Ok(set) = enumerate_par_reducts(sig, r, &t, REDUCT_CAP) {
                for u in set {
                    if right.insert(u.clone()) {
                        next_r.push(u);
                    }
                }
            }
        }
        rf = next_r;
        if !left.is_disjoint(&right) {
            return true;
        }
    }
    false
}

/// Every one-step reduct of `a` under the congruence discipline, derived
/// independently of [`crate::reduce::step`]: each primitive rule is tried
/// on its own, and congruence descends only where the relation allows.
pub fn one_step_reducts(sig: &Signature, r: Role, a: &Term) -> Vec<(Term, Rule)> {
    let mut out = Vec::new();
    // primitive rules, each checked independently
    if let Term::App(f, arg, nu) = a {
        if let (Term::Abs(Relevance::Rel, _, body), AppFlag::Rel | AppFlag::Role(_)) =
            (f.as_ref(), nu)
        {
            out.push((body.open(arg), Rule::AppAbs));
        }
        if let (Term::Abs(Relevance::Irrel, _, body), AppFlag::Irrel) = (f.as_ref(), nu) {
            let (_, opened) = body.open_fresh(&free_vars(f));
            if is_value(sig, r, &opened) {
                out.push((body.open(arg), Rule::AppAbsIrrel));
            }
        }
    }
    if let Term::CApp(f) = a {
        if let Term::CAbs(_, body) = f.as_ref() {
            out.push((body.open_unused(), Rule::CAppCAbs));
        }
    }
    {
        let (head, args) = decompose_spine(a);
        if let Term::Const(name) = head {
            if let Some(SigEntry::Axiom { pattern, rhs, axiom_role, .. }) = sig.get(&name) {
                if sub_role(*axiom_role, r) && args.len() == pattern.args.len() {
                    let rhs = erase(rhs);
                    let (pat, rhs2) = rename(pattern, &rhs, &free_vars(a));
                    if let Some(t) = match_subst(a, &pat, &rhs2) {
                        out.push((t, Rule::Axiom));
                    }
                }
            }
        }
    }
    if let Term::Case(s, head, flags, b1, b2) = a {
        if is_value(sig, Role::Nom, s) {
            if apps_path_match(sig, s, head, flags) {
                let (_, spine) = decompose_spine(s);
                out.push((
                    Term::CApp(Box::new(apply_args(&spine, b1))),
                    Rule::PatternTrue,
                ));
            } else {
                out.push(((**b2).clone(), Rule::PatternFalse));
            }
        }
    }
    // congruence positions
    match a {
        Term::App(f, arg, nu) => {
            for (f2, rule) in one_step_reducts(sig, r, f) {
                out.push((Term::App(Box::new(f2), arg.clone(), *nu), rule));
            }
        }
        Term::CApp(f) => {
            for (f2, rule) in one_step_reducts(sig, r, f) {
                out.push((Term::CApp(Box::new(f2)), rule));
            }
        }
        Term::Abs(Relevance::Irrel, ann, b) => {
            let (x, body) = b.open_fresh(&free_vars(a));
            for (b2, rule) in one_step_reducts(sig, r, &body) {
                out.push((
                    Term::Abs(Relevance::Irrel, ann.clone(), Binder::bind(&b.hint, &x, b2)),
                    rule,
                ));
            }
        }
        Term::Case(s, head, flags, b1, b2) => {
            for (s2, rule) in one_step_reducts(sig, Role::Nom, s) {
                out.push((
                    Term::Case(
                        Box::new(s2),
                        head.clone(),
                        flags.clone(),
                        b1.clone(),
                        b2.clone(),
                    ),
                    rule,
                ));
            }
        }
        _ => {}
    }
    out
}

/// Reference stepper over annotated surface terms: identical strategy to
/// [`crate::reduce::step`], but annotations ride along (axiom right-hand
/// sides are used as declared). Used by the preservation suite, which
/// needs typeable intermediate states.
pub fn surface_step(sig: &Signature, r: Role, a: &Term) -> Option<Term> {
    // primitive reductions at the root
    match a {
        Term::App(f, arg, nu) => match (f.as_ref(), nu) {
            (Term::Abs(Relevance::Rel, _, body), AppFlag::Rel | AppFlag::Role(_)) => {
                return Some(body.open(arg));
            }
            (Term::Abs(Relevance::Irrel, _, body), AppFlag::Irrel) => {
                let (_, opened) = body.open_fresh(&free_vars(f));
                if is_value(sig, r, &opened) {
                    return Some(body.open(arg));
                }
            }
            _ => {}
        },
        Term::CApp(f) => {
            if let Term::CAbs(_, body) = f.as_ref() {
                return Some(body.open_unused());
            }
        }
        Term::Case(s, head, flags, b1, b2) => {
            if is_value(sig, Role::Nom, s) {
                if apps_path_match(sig, s, head, flags) {
                    let (_, spine) = decompose_spine(s);
                    return Some(Term::CApp(Box::new(apply_args(&spine, b1))));
                }
                return Some((**b2).clone());
            }
        }
        _ => {}
    }
    {
        let (head, args) = decompose_spine(a);
        if let Term::Const(name) = head {
            if let Some(SigEntry::Axiom { pattern, rhs, axiom_role, .. }) = sig.get(&name) {
                if sub_role(*axiom_role, r) && args.len() == pattern.args.len() {
                    let (pat, rhs2) = rename(pattern, rhs, &free_vars(a));
                    if let Some(t) = match_subst(a, &pat, &rhs2) {
                        return Some(t);
                    }
                }
            }
        }
    }
    // congruence
    match a {
        Term::App(f, arg, nu) => {
            surface_step(sig, r, f).map(|f2| Term::App(Box::new(f2), arg.clone(), *nu))
        }
        Term::CApp(f) => surface_step(sig, r, f).map(|f2| Term::CApp(Box::new(f2))),
        Term::Abs(Relevance::Irrel, ann, b) => {
            let (x, body) = b.open_fresh(&free_vars(a));
            surface_step(sig, r, &body).map(|b2| {
                Term::Abs(Relevance::Irrel, ann.clone(), Binder::bind(&b.hint, &x, b2))
            })
        }
        Term::Case(s, head, flags, b1, b2) => surface_step(sig, Role::Nom, s).map(|s2| {
            Term::Case(Box::new(s2), head.clone(), flags.clone(), b1.clone(), b2.clone())
        }),
        _ => None,
    }
}

// Generators. Seeds are fixed per suite so failures reproduce.

/// Stream of (role context, erased term) pairs, every term role-checked
/// at `role` by construction (and asserted).
pub fn gen_terms<'s>(
    sig: &'s Signature,
    size_bound: usize,
    role: Role,
    seed: u64,
) -> impl Iterator<Item = (RoleCtx, Term)> + 's {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::iter::from_fn(move || {
        let omega = RoleCtx::from_pairs([
            ("x".to_string(), Role::Nom),
            ("y".to_string(), Role::Rep),
            ("z".to_string(), Role::Nom),
        ]);
        let t = gen_roled(sig, &mut rng, &omega, role, size_bound);
        debug_assert!(
            role_check(sig, &omega, &t, role).is_ok(),
            "generator produced an ill-roled term: {t}"
        );
        Some((omega, t))
    })
}

/// One generated term under a caller-supplied role context, role-checked
/// at `role` by construction.
pub fn gen_term_under(
    sig: &Signature,
    omega: &RoleCtx,
    role: Role,
    size: usize,
    seed: u64,
) -> Term {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_roled(sig, &mut rng, omega, role, size)
}

fn gen_roled(sig: &Signature, rng: &mut ChaCha8Rng, omega: &RoleCtx, r: Role, size: usize) -> Term {
    if size <= 1 {
        return gen_leaf(sig, rng, omega, r);
    }
    let half = size / 2;
    match rng.gen_range(0..14u8) {
        // beta redex: bound variable enters at Nom, argument checks at Nom
        0 => {
            let x = pick_binder_name(rng, omega);
            let mut inner = omega.clone();
            inner.push(x.clone(), Role::Nom);
            let body = gen_roled(sig, rng, &inner, r, half);
            let arg = gen_roled(sig, rng, omega, Role::Nom, half);
            Term::App(
                Box::new(Term::Abs(Relevance::Rel, None, Binder::bind(&x, &x, body))),
                Box::new(arg),
                AppFlag::Rel,
            )
        }
        // saturated axiom / constant spines from the signature
        1 | 2 => gen_spine(sig, rng, omega, r, half),
        // plain application (the function side is arbitrary)
        3 => {
            let f = gen_roled(sig, rng, omega, r, half);
            let arg = gen_roled(sig, rng, omega, Role::Nom, half);
            Term::App(Box::new(f), Box::new(arg), AppFlag::Rel)
        }
        4 => {
            let x = pick_binder_name(rng, omega);
            let mut inner = omega.clone();
            inner.push(x.clone(), Role::Nom);
            let body = gen_roled(sig, rng, &inner, r, size - 1);
            Term::Abs(Relevance::Rel, None, Binder::bind(&x, &x, body))
        }
        5 => {
            let x = pick_binder_name(rng, omega);
            let mut inner = omega.clone();
            inner.push(x.clone(), Role::Nom);
            let body = gen_roled(sig, rng, &inner, r, half);
            let dom = gen_roled(sig, rng, omega, r, half);
            Term::Pi(Relevance::Rel, Box::new(dom), Binder::bind(&x, &x, body))
        }
        // irrelevant abstraction and application
        6 => {
            let x = pick_binder_name(rng, omega);
            let mut inner = omega.clone();
            inner.push(x.clone(), Role::Nom);
            let body = gen_roled(sig, rng, &inner, r, size - 1);
            Term::Abs(Relevance::Irrel, None, Binder::bind(&x, &x, body))
        }
        7 => {
            let x = pick_binder_name(rng, omega);
            let mut inner = omega.clone();
            inner.push(x.clone(), Role::Nom);
            let body = gen_roled(sig, rng, &inner, r, size - 1);
            Term::App(
                Box::new(Term::Abs(Relevance::Irrel, None, Binder::bind(&x, &x, body))),
                Box::new(Term::Box),
                AppFlag::Irrel,
            )
        }
        // coercion forms
        8 => {
            let body = gen_roled(sig, rng, omega, r, size - 1);
            Term::CAbs(None, Binder::unused("c", body))
        }
        9 => {
            let body = gen_roled(sig, rng, omega, r, size - 1);
            Term::CApp(Box::new(Term::CAbs(None, Binder::unused("c", body))))
        }
        10 => {
            let prop_role = if rng.gen_bool(0.5) { Role::Nom } else { Role::Rep };
            let lhs = gen_roled(sig, rng, omega, prop_role, half / 2 + 1);
            let rhs = gen_roled(sig, rng, omega, prop_role, half / 2 + 1);
            let body = gen_roled(sig, rng, omega, r, half);
            Term::CPi(
                Box::new(Prop { lhs, rhs, role: prop_role, ty: Term::Star }),
                Binder::unused("c", body),
            )
        }
        // case with a Nom-checked scrutinee
        11 | 12 => {
            let scrut = gen_roled(sig, rng, omega, Role::Nom, half);
            let b2 = gen_roled(sig, rng, omega, r, half);
            let (head, flags, b1) = gen_case_shape(sig, rng, omega, r, half);
            Term::Case(Box::new(scrut), head, flags, Box::new(b1), Box::new(b2))
        }
        _ => gen_spine(sig, rng, omega, r, half),
    }
}

fn gen_leaf(sig: &Signature, rng: &mut ChaCha8Rng, omega: &RoleCtx, r: Role) -> Term {
    let vars: Vec<&(Name, Role)> = omega.iter().filter(|(_, vr)| sub_role(*vr, r)).collect();
    let consts: Vec<&Name> = sig.names().collect();
    match rng.gen_range(0..4u8) {
        0 if !vars.is_empty() => Term::Var(vars[rng.gen_range(0..vars.len())].0.clone()),
        1 | 2 if !consts.is_empty() => {
            Term::Const(consts[rng.gen_range(0..consts.len())].clone())
        }
        _ => Term::Star,
    }
}

/// A spine headed by a signature constant, with arguments at the roles
/// the congruence rules check them at.
fn gen_spine(sig: &Signature, rng: &mut ChaCha8Rng, omega: &RoleCtx, r: Role, size: usize) -> Term {
    let entries: Vec<&SigEntry> = sig.iter().collect();
    if entries.is_empty() {
        return Term::Star;
    }
    let entry = entries[rng.gen_range(0..entries.len())];
    let mut t = Term::Const(entry.name().clone());
    // apply along the declared roles, possibly stopping early (unsaturated)
    for declared in entry.roles() {
        if rng.gen_bool(0.3) {
            break;
        }
        let arg_role = min_role(*declared, r);
        let arg = gen_roled(sig, rng, omega, arg_role, size.max(1) / 2);
        t = Term::App(Box::new(t), Box::new(arg), AppFlag::Role(*declared));
    }
    t
}

fn gen_case_shape(
    sig: &Signature,
    rng: &mut ChaCha8Rng,
    omega: &RoleCtx,
    r: Role,
    size: usize,
) -> (Name, Vec<FullFlag>, Term) {
    // pick a non-type-family head from the signature
    let heads: Vec<&SigEntry> = sig
        .iter()
        .filter(|e| !matches!(e, SigEntry::Axiom { axiom_role: Role::Nom, .. }))
        .collect();
    let b1 = gen_roled(sig, rng, omega, r, size);
    if heads.is_empty() {
        return ("String".to_string(), Vec::new(), b1);
    }
    let head = heads[rng.gen_range(0..heads.len())];
    let flags: Vec<FullFlag> = head
        .roles()
        .iter()
        .map(|r| FullFlag::App(AppFlag::Role(*r)))
        .collect();
    (head.name().clone(), flags, b1)
}

fn pick_binder_name(rng: &mut ChaCha8Rng, omega: &RoleCtx) -> Name {
    let base = ["u", "v", "w"][rng.gen_range(0..3)];
    crate::syntax::fresh(base, &omega.names())
}

/// Terms with at least two parallel redexes by construction, for the
/// confluence triangle suite.
pub fn gen_multi_redex<'s>(
    sig: &'s Signature,
    role: Role,
    seed: u64,
) -> impl Iterator<Item = (RoleCtx, Term)> + 's {
    let mut inner = gen_terms(sig, 3, role, seed);
    std::iter::from_fn(move || loop {
        let (omega, small) = inner.next()?;
        let redex1 = Term::App(
            Box::new(Term::Abs(
                Relevance::Rel,
                None,
                Binder::bind("u", &"u".to_string(), Term::Var("u".to_string())),
            )),
            Box::new(small.clone()),
            AppFlag::Rel,
        );
        let redex2 = Term::App(
            Box::new(Term::Abs(
                Relevance::Rel,
                None,
                Binder::bind("v", &"v".to_string(), small.clone()),
            )),
            Box::new(Term::Star),
            AppFlag::Rel,
        );
        let t = Term::App(
            Box::new(Term::Abs(
                Relevance::Rel,
                None,
                Binder::bind("w", &"w".to_string(), redex1),
            )),
            Box::new(redex2),
            AppFlag::Rel,
        );
        if role_check(sig, &omega, &t, role).is_ok() {
            return Some((omega, t));
        }
    })
}

/// Closed, well-typed surface terms over the prelude-style signature,
/// asserted to typecheck.
pub fn gen_typed_terms<'s>(sig: &'s Signature, seed: u64) -> impl Iterator<Item = Term> + 's {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::iter::from_fn(move || {
        let t = gen_typed(sig, &mut rng, 3);
        debug_assert!(
            crate::typecheck::infer(sig, &crate::syntax::Ctx::new(), &t).is_ok(),
            "generator produced an ill-typed term: {t}"
        );
        Some(t)
    })
}

fn gen_typed(sig: &Signature, rng: &mut ChaCha8Rng, depth: usize) -> Term {
    let leaf = |rng: &mut ChaCha8Rng| -> Term {
        let named = ["Int", "Bool", "String", "HTML"];
        let pick = named[rng.gen_range(0..named.len())];
        if sig.contains(pick) {
            Term::Const(pick.to_string())
        } else {
            Term::Star
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    let d = depth - 1;
    match rng.gen_range(0..12u8) {
        0 => leaf(rng),
        1 => Term::Star,
        // containers at their declared roles
        2 if sig.contains("Maybe") => Term::App(
            Box::new(Term::Const("Maybe".into())),
            Box::new(gen_typed(sig, rng, d)),
            AppFlag::Role(Role::Rep),
        ),
        3 if sig.contains("Set") => Term::App(
            Box::new(Term::Const("Set".into())),
            Box::new(gen_typed(sig, rng, d)),
            AppFlag::Role(Role::Nom),
        ),
        4 if sig.contains("F") => Term::App(
            Box::new(Term::Const("F".into())),
            Box::new(gen_typed(sig, rng, d)),
            AppFlag::Role(Role::Nom),
        ),
        5 if sig.contains("T") => Term::App(
            Box::new(Term::Const("T".into())),
            Box::new(gen_typed(sig, rng, d)),
            AppFlag::Role(Role::Nom),
        ),
        // type-level beta redex
        6 => Term::App(
            Box::new(Term::Abs(
                Relevance::Rel,
                Some(Box::new(Term::Star)),
                Binder::bind("a", &"a".to_string(), Term::Var("a".into())),
            )),
            Box::new(gen_typed(sig, rng, d)),
            AppFlag::Rel,
        ),
        // dependent function type
        7 => Term::Pi(
            Relevance::Rel,
            Box::new(gen_typed(sig, rng, d)),
            Binder::unused("a", gen_typed(sig, rng, d)),
        ),
        // irrelevant redex
        8 => Term::App(
            Box::new(Term::Abs(
                Relevance::Irrel,
                Some(Box::new(Term::Star)),
                Binder::unused("a", gen_typed(sig, rng, d)),
            )),
            Box::new(Term::Box),
            AppFlag::Irrel,
        ),
        // reflexive coercion discharge
        9 => {
            let t = gen_typed(sig, rng, d);
            Term::CApp(Box::new(Term::CAbs(
                Some(Box::new(Prop {
                    lhs: t.clone(),
                    rhs: t,
                    role: Role::Nom,
                    ty: Term::Star,
                })),
                Binder::unused("c", gen_typed(sig, rng, d)),
            )))
        }
        // case on a matching scrutinee
        10 if sig.contains("Maybe") => {
            let inner = gen_typed(sig, rng, d);
            let scrut = Term::App(
                Box::new(Term::Const("Maybe".into())),
                Box::new(inner),
                AppFlag::Role(Role::Rep),
            );
            let pat_x = Term::App(
                Box::new(Term::Const("Maybe".into())),
                Box::new(Term::Var("px".into())),
                AppFlag::Role(Role::Rep),
            );
            let b1 = Term::Abs(
                Relevance::Rel,
                Some(Box::new(Term::Star)),
                Binder::bind(
                    "px",
                    &"px".to_string(),
                    Term::CAbs(
                        Some(Box::new(Prop {
                            lhs: scrut.clone(),
                            rhs: pat_x,
                            role: Role::Nom,
                            ty: Term::Star,
                        })),
                        Binder::unused("c", Term::Var("px".into())),
                    ),
                ),
            );
            Term::Case(
                Box::new(scrut),
                "Maybe".into(),
                vec![FullFlag::App(AppFlag::Role(Role::Rep))],
                Box::new(b1),
                Box::new(gen_typed(sig, rng, d)),
            )
        }
        // case on a mismatching scrutinee
        11 if sig.contains("String") && sig.contains("HTML") => {
            let scrut = Term::Const("HTML".into());
            let b0 = gen_typed(sig, rng, d);
            let b1 = Term::CAbs(
                Some(Box::new(Prop {
                    lhs: scrut.clone(),
                    rhs: Term::Const("String".into()),
                    role: Role::Nom,
                    ty: Term::Star,
                })),
                Binder::unused("c", gen_typed(sig, rng, d)),
            );
            Term::Case(
                Box::new(scrut),
                "String".into(),
                Vec::new(),
                Box::new(b1),
                Box::new(b0),
            )
        }
        _ => leaf(rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_expr, parse_signature};

    fn prelude() -> Signature {
        parse_signature(include_str!("../corpus/prelude.dr")).unwrap()
    }

    fn tm(sig: &Signature, s: &str) -> Term {
        erase(&parse_expr(sig, s).unwrap())
    }

    #[test]
    fn reducts_of_a_value_is_itself() {
        let sig = prelude();
        let set = enumerate_par_reducts(&sig, Role::Nom, &Term::Star, REDUCT_CAP).unwrap();
        assert_eq!(set, HashSet::from([Term::Star]));
    }

    #[test]
    fn reducts_of_one_redex() {
        let sig = prelude();
        let t = tm(&sig, "(\\+(x:Type) -> x) Type");
        let set = enumerate_par_reducts(&sig, Role::Nom, &t, REDUCT_CAP).unwrap();
        assert_eq!(set, HashSet::from([t.clone(), Term::Star]));

        let html = tm(&sig, "HTML");
        let set = enumerate_par_reducts(&sig, Role::Rep, &html, REDUCT_CAP).unwrap();
        assert_eq!(set, HashSet::from([html, tm(&sig, "String")]));
    }

    #[test]
    fn joinable_examples() {
        let sig = prelude();
        assert!(joinable(&sig, Role::Nom, &tm(&sig, "F @nom Int"), &tm(&sig, "Maybe @rep Int"), 2));
        assert!(!joinable(&sig, Role::Nom, &tm(&sig, "T @nom Int"), &tm(&sig, "F @nom Int"), 4));
        assert!(joinable(&sig, Role::Nom, &Term::Star, &Term::Star, 0));
    }

    #[test]
    fn small_sizes_reach_axiom_spines() {
        let sig = prelude();
        let f_int = tm(&sig, "F @nom Int");
        let t_int = tm(&sig, "T @nom Int");
        let tiny: Vec<Term> = gen_terms(&sig, 1, Role::Nom, 3)
            .take(64)
            .map(|(_, t)| t)
            .collect();
        assert!(tiny.contains(&Term::Star));
        let pool: Vec<Term> = gen_terms(&sig, 4, Role::Nom, 3)
            .take(4000)
            .map(|(_, t)| t)
            .collect();
        assert!(pool.contains(&f_int), "generator never built F @nom Int");
        assert!(pool.contains(&t_int), "generator never built T @nom Int");
    }

    #[test]
    fn generators_respect_their_contracts() {
        let sig = prelude();
        for (omega, t) in gen_terms(&sig, 5, Role::Rep, 7).take(50) {
            assert!(role_check(&sig, &omega, &t, Role::Rep).is_ok(), "{t}");
        }
        for t in gen_typed_terms(&sig, 7).take(50) {
            assert!(
                crate::typecheck::infer(&sig, &crate::syntax::Ctx::new(), &t).is_ok(),
                "{t}"
            );
        }
    }

    #[test]
    fn surface_step_erases_to_step() {
        let sig = prelude();
        for t in gen_typed_terms(&sig, 11).take(100) {
            let erased = erase(&t);
            match (surface_step(&sig, Role::Rep, &t), crate::reduce::step(&sig, Role::Rep, &erased))
            {
                (Some(s), crate::reduce::StepOutcome::Stepped { term, .. }) => {
                    assert_eq!(erase(&s), term, "surface and erased steps disagree on {t}");
                }
                (None, crate::reduce::StepOutcome::Stepped { term, .. }) => {
                    panic!("erased stepper moved {erased} -> {term} but surface stepper stalled")
                }
                (Some(s), other) => {
                    panic!("surface stepper moved {t} -> {s} but erased stepper said {other:?}")
                }
                (None, _) => {}
            }
        }
    }
}
