//! Property suites beyond the headline criteria: typing/roleing, equality
//! laws, derived injectivity, step-in-par containment, and the
//! equality-to-joinability soundness cross-check.

use dr_core::equality::{def_eq, EqEnv};
use dr_core::oracle::{enumerate_par_reducts, gen_terms, gen_typed_terms, joinable, REDUCT_CAP};
use dr_core::parse::{parse_expr, parse_signature};
use dr_core::reduce::{case_path, reduce, step, StepOutcome};
use dr_core::rolecheck::{role_check, RoleCtx};
use dr_core::roles::{min_role, role_path, AppFlag, Role};
use dr_core::syntax::{
    alpha_eq, decompose_spine, erase, free_vars, Applicator, Binder, Ctx, Signature, Term,
};
use dr_core::typecheck::infer;

fn prelude() -> Signature {
    parse_signature(include_str!("../corpus/prelude.dr")).unwrap()
}

fn tm(sig: &Signature, s: &str) -> Term {
    erase(&parse_expr(sig, s).unwrap())
}

/// Well-typed closed terms role-check at Nom (with no free variables the
/// all-Nom context is empty).
#[test]
fn typing_implies_roleing_at_nom() {
    let sig = prelude();
    let empty = RoleCtx::new();
    for t in gen_typed_terms(&sig, 0xE0).take(500) {
        let erased = erase(&t);
        assert!(free_vars(&erased).is_empty());
        assert!(
            role_check(&sig, &empty, &erased, Role::Nom).is_ok(),
            "well-typed term fails Nom role-checking: {t}"
        );
    }
}

#[test]
fn def_eq_is_reflexive_and_symmetric() {
    let sig = prelude();
    let env = EqEnv::new(&sig);
    for role in [Role::Nom, Role::Rep] {
        for (_, t) in gen_terms(&sig, 4, role, 0xE1).take(200) {
            assert_eq!(def_eq(&env, role, &t, &t), Ok(true), "not reflexive on {t}");
        }
        let mut gen = gen_terms(&sig, 4, role, 0xE2);
        for _ in 0..200 {
            let (_, a) = gen.next().unwrap();
            let (_, b) = gen.next().unwrap();
            let ab = def_eq(&env, role, &a, &b);
            let ba = def_eq(&env, role, &b, &a);
            assert_eq!(ab, ba, "verdict not symmetric on {a} / {b}");
        }
    }
}

#[test]
fn def_eq_transitive_on_corpus_chains() {
    let sig = prelude();
    let env = EqEnv::new(&sig);
    let chains = [
        ("rep", "T @nom Int", "F @nom Int", "Maybe @rep Int"),
        ("rep", "Maybe @rep HTML", "Maybe @rep String", "Maybe @rep HTML"),
        ("nom", "F @nom (F @nom Int)", "Maybe @rep (F @nom Int)", "Maybe @rep (Maybe @rep Int)"),
    ];
    for (role, a, b, c) in chains {
        let role = if role == "rep" { Role::Rep } else { Role::Nom };
        let (a, b, c) = (tm(&sig, a), tm(&sig, b), tm(&sig, c));
        assert_eq!(def_eq(&env, role, &a, &b), Ok(true));
        assert_eq!(def_eq(&env, role, &b, &c), Ok(true));
        assert_eq!(def_eq(&env, role, &a, &c), Ok(true), "transitivity broke");
    }
}

/// Equality at Nom is contained in equality at Rep: instances built from
/// reduction chains, which are definitionally equal by construction.
#[test]
fn def_eq_monotone_in_the_role() {
    let sig = prelude();
    let env = EqEnv::new(&sig);
    let mut positives = 0;
    for (_, t) in gen_terms(&sig, 4, Role::Nom, 0xE3).take(400) {
        let reduced = reduce(&sig, Role::Nom, &t, 50);
        if reduced.exhausted {
            continue;
        }
        if def_eq(&env, Role::Nom, &t, &reduced.term) == Ok(true) {
            positives += 1;
            assert_eq!(
                def_eq(&env, Role::Rep, &t, &reduced.term),
                Ok(true),
                "equal at nom but not rep: {t} vs {}",
                reduced.term
            );
        }
    }
    assert!(positives >= 200);
}

/// Function-type injectivity as a derived property: equal Π-types have
/// equal domains and codomains (compared under a shared fresh variable).
#[test]
fn pi_injectivity_is_derived() {
    let sig = prelude();
    let env = EqEnv::new(&sig);
    let mut gen = gen_terms(&sig, 3, Role::Rep, 0xE4);
    for _ in 0..200 {
        let (_, dom) = gen.next().unwrap();
        let (_, cod) = gen.next().unwrap();
        let pi1 = Term::Pi(
            dr_core::roles::Relevance::Rel,
            Box::new(dom.clone()),
            Binder::unused("x", cod.clone()),
        );
        // the same type behind a beta redex on the domain
        let wrapped_dom = tm(
            &sig,
            &format!("(\\+u -> u) ({})", dr_core::print::print_term(&dom)),
        );
        let pi2 = Term::Pi(
            dr_core::roles::Relevance::Rel,
            Box::new(wrapped_dom.clone()),
            Binder::unused("x", cod.clone()),
        );
        for role in [Role::Nom, Role::Rep] {
            if def_eq(&env, role, &pi1, &pi2) == Ok(true) {
                assert_eq!(def_eq(&env, role, &dom, &wrapped_dom), Ok(true));
                assert_eq!(def_eq(&env, role, &cod, &cod), Ok(true));
            }
        }
    }
}

/// Path injectivity as a derived property: equal same-headed stuck paths
/// have arguments equal at the minimum of the flag and ambient roles.
#[test]
fn path_injectivity_is_derived() {
    let sig = prelude();
    let env = EqEnv::new(&sig);
    for (head, flag_role, arg_a, arg_b) in [
        ("Set", Role::Nom, "F @nom Int", "Maybe @rep Int"),
        ("Maybe", Role::Rep, "HTML", "String"),
        ("Set", Role::Nom, "Int", "Int"),
    ] {
        for role in [Role::Nom, Role::Rep] {
            let a = tm(&sig, &format!("{head} @{flag_role} ({arg_a})"));
            let b = tm(&sig, &format!("{head} @{flag_role} ({arg_b})"));
            if def_eq(&env, role, &a, &b) != Ok(true) {
                continue;
            }
            // both sides are stuck paths at this role
            assert_eq!(case_path(&sig, role, &a).as_deref(), Some(head));
            let (_, args_a) = decompose_spine(&a);
            let (_, args_b) = decompose_spine(&b);
            for (x, y) in args_a.iter().zip(&args_b) {
                let (Applicator::Tm(x, AppFlag::Role(r1)), Applicator::Tm(y, _)) = (x, y) else {
                    continue;
                };
                assert_eq!(
                    def_eq(&env, min_role(*r1, role), x, y),
                    Ok(true),
                    "argument equality at the minimum role failed for {a} vs {b}"
                );
            }
        }
    }
}

/// A deterministic step is one of the parallel reducts.
#[test]
fn step_contained_in_par() {
    let sig = prelude();
    for role in [Role::Nom, Role::Rep] {
        for (_, t) in gen_terms(&sig, 4, role, 0xE5).take(300) {
            if let StepOutcome::Stepped { term, .. } = step(&sig, role, &t) {
                match enumerate_par_reducts(&sig, role, &t, REDUCT_CAP) {
                    Ok(set) => assert!(
                        set.contains(&term),
                        "step result not among parallel reducts of {t}"
                    ),
                    Err(_) => {}
                }
            }
        }
    }
}

/// Positive equality verdicts on terminating instances are joinable under
/// parallel reduction.
#[test]
fn def_eq_true_implies_joinable() {
    let sig = prelude();
    let env = EqEnv::new(&sig);
    let mut positives = 0;
    for (_, t) in gen_terms(&sig, 4, Role::Rep, 0xE6).take(200) {
        let reduced = reduce(&sig, Role::Rep, &t, 20);
        if reduced.exhausted || alpha_eq(&t, &reduced.term) {
            continue;
        }
        if def_eq(&env, Role::Rep, &t, &reduced.term) == Ok(true) {
            positives += 1;
            assert!(
                joinable(&sig, Role::Rep, &t, &reduced.term, 4),
                "equal but not joinable: {t} vs {}",
                reduced.term
            );
        }
    }
    assert!(positives >= 25, "only {positives} positive instances");
}

/// role_path consumes declared roles one flag at a time.
#[test]
fn role_path_tail_invariant() {
    let sig = prelude();
    for (_, t) in gen_terms(&sig, 4, Role::Rep, 0xE7).take(500) {
        let (head, args) = decompose_spine(&t);
        if !matches!(head, Term::Const(_)) || args.is_empty() {
            continue;
        }
        let Term::App(f, b, AppFlag::Role(r)) = &t else { continue };
        if let Some(mut roles) = role_path(&sig, f) {
            if roles.first() == Some(r) {
                roles.remove(0);
                assert_eq!(role_path(&sig, &t), Some(roles), "tail invariant on {t}");
            } else {
                assert_eq!(role_path(&sig, &t), None);
            }
        }
        let _ = b;
    }
}

/// Swapping a context type for a representationally equal one preserves
/// checkability (context conversion, spot-checked with HTML/String).
#[test]
fn context_conversion_spot_checks() {
    let sig = prelude();
    let mut with_html = Ctx::new();
    with_html.push(dr_core::syntax::CtxEntry::TmVar("v".into(), tm(&sig, "HTML")));
    let mut with_string = Ctx::new();
    with_string.push(dr_core::syntax::CtxEntry::TmVar("v".into(), tm(&sig, "String")));

    for src in ["v", "(\\+(u:String) -> u) v", "(\\+(u:HTML) -> u) v"] {
        let t = parse_expr(&sig, src).unwrap();
        let a = infer(&sig, &with_html, &t);
        let b = infer(&sig, &with_string, &t);
        assert_eq!(a.is_ok(), b.is_ok(), "context conversion broke on {src}");
    }
}
