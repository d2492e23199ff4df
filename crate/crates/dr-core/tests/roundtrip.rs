//! Printer/parser round-trips and the syntax-level invariants, as
//! properties over arbitrary generated terms:
//!
//! 1. parse(print(t)) is alpha-equal to t
//! 2. erase is idempotent
//! 3. renaming binder hints never changes alpha-equality or substitution
//! 4. opening a binder whose variable is unused returns the body

use proptest::prelude::*;

use dr_core::parse::{parse_expr, parse_signature};
use dr_core::print::print_term;
use dr_core::roles::{AppFlag, Relevance, Role};
use dr_core::syntax::{alpha_eq, erase, substitute, Binder, Prop, Signature, Term};

fn sig() -> Signature {
    parse_signature(include_str!("../corpus/prelude.dr")).unwrap()
}

fn name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "f", "g", "h", "k"])
        .prop_map(str::to_string)
}

fn const_name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["Int", "Bool", "String", "HTML", "Maybe", "Set", "F", "T"])
        .prop_map(str::to_string)
}

fn relevance() -> impl Strategy<Value = Relevance> {
    prop_oneof![Just(Relevance::Rel), Just(Relevance::Irrel)]
}

fn role() -> impl Strategy<Value = Role> {
    prop_oneof![Just(Role::Nom), Just(Role::Rep)]
}

/// Arbitrary well-scoped surface terms (annotations included), built
/// independently of the crate's own seeded generators.
fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::Star),
        name().prop_map(Term::Var),
        const_name().prop_map(Term::Const),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (relevance(), inner.clone(), name(), inner.clone()).prop_map(
                |(rho, ann, x, body)| Term::Abs(
                    rho,
                    Some(Box::new(ann)),
                    Binder::bind(&x, &x, body)
                )
            ),
            (relevance(), inner.clone(), name(), inner.clone()).prop_map(
                |(rho, dom, x, body)| Term::Pi(rho, Box::new(dom), Binder::bind(&x, &x, body))
            ),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::App(
                Box::new(f),
                Box::new(a),
                AppFlag::Rel
            )),
            (inner.clone(), inner.clone(), role()).prop_map(|(f, a, r)| Term::App(
                Box::new(f),
                Box::new(a),
                AppFlag::Role(r)
            )),
            inner
                .clone()
                .prop_map(|f| Term::App(Box::new(f), Box::new(Term::Box), AppFlag::Irrel)),
            inner.clone().prop_map(|f| Term::CApp(Box::new(f))),
            (inner.clone(), inner.clone(), inner.clone(), role(), name()).prop_map(
                |(l, r, body, pr, c)| {
                    let prop = Prop { lhs: l, rhs: r, role: pr, ty: Term::Star };
                    Term::CAbs(Some(Box::new(prop)), Binder::unused(&c, body))
                }
            ),
            (inner.clone(), inner.clone(), inner.clone(), role(), name()).prop_map(
                |(l, r, body, pr, c)| {
                    let prop = Prop { lhs: l, rhs: r, role: pr, ty: Term::Star };
                    Term::CPi(Box::new(prop), Binder::unused(&c, body))
                }
            ),
            (inner.clone(), inner.clone(), inner).prop_map(|(s, b1, b2)| Term::Case(
                Box::new(s),
                "Maybe".into(),
                vec![dr_core::roles::FullFlag::App(AppFlag::Role(Role::Rep))],
                Box::new(b1),
                Box::new(b2)
            )),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_parse_roundtrip(t in term()) {
        let sig = sig();
        let printed = print_term(&t);
        let back = parse_expr(&sig, &printed)
            .unwrap_or_else(|e| panic!("`{printed}` does not reparse: {e}"));
        prop_assert!(alpha_eq(&t, &back), "round-trip changed `{printed}` into `{back}`");
    }

    #[test]
    fn erased_roundtrip_and_idempotence(t in term()) {
        let sig = sig();
        let e = erase(&t);
        prop_assert!(alpha_eq(&erase(&e), &e), "erase is not idempotent");
        let printed = print_term(&e);
        let back = parse_expr(&sig, &printed)
            .unwrap_or_else(|err| panic!("`{printed}` does not reparse: {err}"));
        prop_assert!(alpha_eq(&e, &back));
    }

    #[test]
    fn hints_do_not_matter(body in term(), v in term()) {
        // two alpha-equal binders differing only in their bound name
        let b1 = Binder::bind("p", &"p".to_string(), body.clone());
        let renamed = b1.open(&Term::Var("q".into()));
        let b2 = Binder::bind("q", &"q".to_string(), renamed);
        let t1 = Term::Abs(Relevance::Rel, None, b1.clone());
        let t2 = Term::Abs(Relevance::Rel, None, b2.clone());
        prop_assert!(alpha_eq(&t1, &t2));
        // substitution respects alpha-equivalence
        prop_assert!(alpha_eq(&substitute(&b1, &v), &substitute(&b2, &v)));
    }

    #[test]
    fn unused_binder_substitution_is_identity(body in term(), v in term()) {
        // "fresh" cannot occur in generated bodies: the name pool avoids it
        let b = Binder::bind("fresh", &"fresh_unused".to_string(), body.clone());
        prop_assert!(alpha_eq(&substitute(&b, &v), &body));
    }
}
