//! Syntax-directed bidirectional typechecking of annotated surface terms,
//! plus signature well-formedness.
//!
//! Inference produces erased types; conversion at check-against-expected
//! sites uses definitional equality at the coarsest role (Rep), with every
//! coercion assumption of the context available.

use std::collections::HashSet;

use crate::equality::{def_eq, EqEnv, FuelExhausted};
use crate::reduce::{reduce, DEFAULT_FUEL};
use crate::rolecheck::{pat_ctx, role_check, PatCtxError, RoleError};
use crate::roles::{role_path, AppFlag, FullFlag, Relevance, Role};
use crate::syntax::{
    erase, free_vars, Binder, Ctx, CtxEntry, Name, Prop, SigEntry, Signature, Term,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("type mismatch: expected `{expected}`, got `{got}`")]
    TypeMismatch { expected: Term, got: Term },
    #[error("application flag does not match the declared roles: {0}")]
    FlagMismatch(String),
    #[error("irrelevant abstraction binds `{0}`, which occurs in the erased body")]
    IrrelVarEscape(Name),
    #[error("`{0}` is not a function type")]
    NotAFunction(Term),
    #[error("`{0}` is not a coercion function type")]
    NotACoercionFunction(Term),
    #[error("unknown name `{0}`")]
    UnknownName(Name),
    #[error("case is not saturated: {0}")]
    UnsaturatedCase(String),
    #[error("case head `{0}` must be a constant at role Nom, not a type family")]
    HeadNotConstant(Name),
    #[error("case branch does not fit the pattern telescope: {0}")]
    BranchShapeError(Box<TypeError>),
    #[error("coercion proposition `{0} ~[{1}] {2}` is not derivable here")]
    PropNotDerivable(Term, Role, Term),
    #[error("equality verdict unknown: normalization fuel exhausted")]
    EqualityUnknown,
    #[error("binder must be annotated in surface syntax")]
    MissingAnnotation,
    #[error("the trivial term can appear only as an irrelevant argument")]
    BareBox,
    #[error("`{0}` is bound twice in the context")]
    DuplicateBinding(Name),
}

impl From<FuelExhausted> for TypeError {
    fn from(_: FuelExhausted) -> TypeError {
        TypeError::EqualityUnknown
    }
}

/// Infer the (erased) type of an annotated surface term.
pub fn infer(sig: &Signature, gamma: &Ctx, a: &Term) -> Result<Term, TypeError> {
    match a {
        Term::Star => Ok(Term::Star),
        Term::Var(x) => match gamma.lookup_tm(x) {
            Some(ty) => Ok(ty.clone()),
            None => Err(TypeError::UnknownName(x.clone())),
        },
        Term::BVar(_) => Err(TypeError::UnknownName("#bound".into())),
        Term::Const(f) => match sig.get(f) {
            Some(entry) => Ok(erase(entry.ty())),
            None => Err(TypeError::UnknownName(f.clone())),
        },
        Term::Box => Err(TypeError::BareBox),
        Term::Abs(rho, Some(ann), b) => {
            check(sig, gamma, ann, &Term::Star)?;
            let dom = erase(ann);
            let (x, body) = open_binder(gamma, a, b);
            let mut inner = gamma.clone();
            inner.push(CtxEntry::TmVar(x.clone(), dom.clone()));
            let body_ty = infer(sig, &inner, &body)?;
            if *rho == Relevance::Irrel && free_vars(&erase(&body)).contains(&x) {
                return Err(TypeError::IrrelVarEscape(b.hint.clone()));
            }
            Ok(Term::Pi(*rho, Box::new(dom), Binder::bind(&b.hint, &x, body_ty)))
        }
        Term::Abs(_, None, _) => Err(TypeError::MissingAnnotation),
        Term::App(f, arg, nu) => {
            let fun_ty = whnf(sig, &infer(sig, gamma, f)?)?;
            match nu {
                AppFlag::Rel => match fun_ty {
                    Term::Pi(Relevance::Rel, dom, cod) => {
                        check(sig, gamma, arg, &dom)?;
                        Ok(cod.open(&erase(arg)))
                    }
                    Term::Pi(Relevance::Irrel, ..) => Err(TypeError::FlagMismatch(
                        "relevant application of an irrelevant function".into(),
                    )),
                    other => Err(TypeError::NotAFunction(other)),
                },
                AppFlag::Role(r) => match fun_ty {
                    Term::Pi(Relevance::Rel, dom, cod) => {
                        match role_path(sig, &erase(f)) {
                            Some(roles) if roles.first() == Some(r) => {}
                            Some(_) | None => {
                                return Err(TypeError::FlagMismatch(format!(
                                    "argument flagged @{r} is not justified by the head's declared roles"
                                )));
                            }
                        }
                        check(sig, gamma, arg, &dom)?;
                        Ok(cod.open(&erase(arg)))
                    }
                    Term::Pi(Relevance::Irrel, ..) => Err(TypeError::FlagMismatch(
                        "role-flagged application of an irrelevant function".into(),
                    )),
                    other => Err(TypeError::NotAFunction(other)),
                },
                AppFlag::Irrel => match fun_ty {
                    Term::Pi(Relevance::Irrel, _, cod) => {
                        if !matches!(arg.as_ref(), Term::Box) {
                            return Err(TypeError::FlagMismatch(
                                "irrelevant argument must be the trivial term".into(),
                            ));
                        }
                        Ok(cod.open(&Term::Box))
                    }
                    Term::Pi(Relevance::Rel, ..) => Err(TypeError::FlagMismatch(
                        "irrelevant application of a relevant function".into(),
                    )),
                    other => Err(TypeError::NotAFunction(other)),
                },
            }
        }
        Term::Pi(_, dom, b) => {
            check(sig, gamma, dom, &Term::Star)?;
            let (x, body) = open_binder(gamma, a, b);
            let mut inner = gamma.clone();
            inner.push(CtxEntry::TmVar(x, erase(dom)));
            check(sig, &inner, &body, &Term::Star)?;
            Ok(Term::Star)
        }
        Term::CAbs(Some(phi), b) => {
            check_prop(sig, gamma, phi)?;
            let phi_er = erase_prop(phi);
            let c = crate::syntax::fresh(&b.hint, &gamma.names());
            let body = b.open_unused();
            let mut inner = gamma.clone();
            inner.push(CtxEntry::CoVar(c, phi_er.clone()));
            let body_ty = infer(sig, &inner, &body)?;
            Ok(Term::CPi(Box::new(phi_er), Binder::unused(&b.hint, body_ty)))
        }
        Term::CAbs(None, _) => Err(TypeError::MissingAnnotation),
        Term::CApp(f) => {
            let fun_ty = whnf(sig, &infer(sig, gamma, f)?)?;
            match fun_ty {
                Term::CPi(phi, cod) => {
                    let env = EqEnv::with_ctx(sig, gamma);
                    match def_eq(&env, phi.role, &phi.lhs, &phi.rhs) {
                        Ok(true) => Ok(cod.open_unused()),
                        Ok(false) => Err(TypeError::PropNotDerivable(
                            phi.lhs.clone(),
                            phi.role,
                            phi.rhs.clone(),
                        )),
                        Err(e) => Err(e.into()),
                    }
                }
                other => Err(TypeError::NotACoercionFunction(other)),
            }
        }
        Term::CPi(phi, b) => {
            check_prop(sig, gamma, phi)?;
            check(sig, gamma, &b.open_unused(), &Term::Star)?;
            Ok(Term::Star)
        }
        Term::Case(..) => branch_typing(sig, gamma, a),
    }
}

/// Check a surface term against an expected (erased) type: infer, then
/// convert with definitional equality at Rep.
pub fn check(sig: &Signature, gamma: &Ctx, a: &Term, expected: &Term) -> Result<(), TypeError> {
    let got = infer(sig, gamma, a)?;
    let env = EqEnv::with_ctx(sig, gamma);
    match def_eq(&env, Role::Rep, &got, expected) {
        Ok(true) => Ok(()),
        Ok(false) => Err(TypeError::TypeMismatch { expected: expected.clone(), got }),
        Err(e) => Err(e.into()),
    }
}

/// Both endpoints check against the proposition's type, which itself
/// checks against `Type`.
pub fn check_prop(sig: &Signature, gamma: &Ctx, p: &Prop) -> Result<(), TypeError> {
    check(sig, gamma, &p.ty, &Term::Star)?;
    let ty = erase(&p.ty);
    check(sig, gamma, &p.lhs, &ty)?;
    check(sig, gamma, &p.rhs, &ty)
}

/// Each context type kinds to `Type` and each proposition is well-formed,
/// under the preceding prefix.
pub fn ctx_ok(sig: &Signature, gamma: &Ctx) -> Result<(), TypeError> {
    let mut prefix = Ctx::new();
    for entry in gamma.iter() {
        if prefix.contains(entry.name()) {
            return Err(TypeError::DuplicateBinding(entry.name().clone()));
        }
        match entry {
            CtxEntry::TmVar(x, ty) => {
                check(sig, &prefix, ty, &Term::Star)?;
                prefix.push(CtxEntry::TmVar(x.clone(), erase(ty)));
            }
            CtxEntry::CoVar(c, p) => {
                check_prop(sig, &prefix, p)?;
                prefix.push(CtxEntry::CoVar(c.clone(), erase_prop(p)));
            }
        }
    }
    Ok(())
}

/// Type a case expression. The scrutinee must have type `Type`; the flags
/// must saturate the head's telescope; the first branch checks against
/// the pattern telescope ending in a coercion binder equating scrutinee
/// and pattern; the second branch gives the result type.
pub fn branch_typing(sig: &Signature, gamma: &Ctx, case_term: &Term) -> Result<Term, TypeError> {
    let Term::Case(scrutinee, head, flags, b1, b2) = case_term else {
        return Err(TypeError::UnsaturatedCase("not a case expression".into()));
    };
    let s_ty = whnf(sig, &infer(sig, gamma, scrutinee)?)?;
    if s_ty != Term::Star {
        return Err(TypeError::TypeMismatch { expected: Term::Star, got: s_ty });
    }
    let entry = sig.get(head).ok_or_else(|| TypeError::UnknownName(head.clone()))?;
    if let SigEntry::Axiom { axiom_role: Role::Nom, .. } = entry {
        return Err(TypeError::HeadNotConstant(head.clone()));
    }

    // walk the head's telescope along the flags
    enum Bound {
        Tm(Name, Term, Relevance),
        Co(Prop),
    }
    let mut declared: std::collections::VecDeque<Role> = entry.roles().iter().copied().collect();
    let mut bound: Vec<Bound> = Vec::new();
    let mut pattern_term = Term::Const(head.clone());
    let mut current = erase(entry.ty());
    let mut avoid: HashSet<Name> = gamma.names();
    avoid.extend(free_vars(&erase(scrutinee)));
    for (i, flag) in flags.iter().enumerate() {
        current = whnf(sig, &current)?;
        match (flag, current) {
            (FullFlag::App(nu @ (AppFlag::Rel | AppFlag::Role(_))), Term::Pi(Relevance::Rel, dom, cod)) => {
                if let AppFlag::Role(r) = nu {
                    match declared.pop_front() {
                        Some(d) if d == *r => {}
                        _ => {
                            return Err(TypeError::FlagMismatch(format!(
                                "case flag @{r} at position {i} is not justified by `{head}`'s declared roles"
                            )));
                        }
                    }
                } else {
                    declared.pop_front();
                }
                let x = crate::syntax::fresh("x", &avoid);
                avoid.insert(x.clone());
                pattern_term = Term::App(Box::new(pattern_term), Box::new(Term::Var(x.clone())), *nu);
                current = cod.open(&Term::Var(x.clone()));
                bound.push(Bound::Tm(x, (*dom).clone(), Relevance::Rel));
            }
            (FullFlag::App(AppFlag::Irrel), Term::Pi(Relevance::Irrel, dom, cod)) => {
                let x = crate::syntax::fresh("x", &avoid);
                avoid.insert(x.clone());
                pattern_term = Term::App(Box::new(pattern_term), Box::new(Term::Box), AppFlag::Irrel);
                current = cod.open(&Term::Var(x.clone()));
                bound.push(Bound::Tm(x, (*dom).clone(), Relevance::Irrel));
            }
            (FullFlag::Co, Term::CPi(phi, cod)) => {
                pattern_term = Term::CApp(Box::new(pattern_term));
                current = cod.open_unused();
                bound.push(Bound::Co((*phi).clone()));
            }
            (_, other) => {
                return Err(TypeError::UnsaturatedCase(format!(
                    "flag {i} does not fit the telescope of `{head}` at `{other}`"
                )));
            }
        }
    }
    let residual = whnf(sig, &current)?;
    if residual != Term::Star {
        return Err(TypeError::UnsaturatedCase(format!(
            "`{head}` applied to the given flags has type `{residual}`, not `Type`"
        )));
    }

    let result_ty = infer(sig, gamma, b2)?;

    // Π/∀-closure for the first branch, ending in the dependent match
    // coercion and the (pattern-variable-free) result type
    let match_prop = Prop {
        lhs: erase(scrutinee),
        rhs: pattern_term,
        role: Role::Nom,
        ty: Term::Star,
    };
    let mut closure = Term::CPi(Box::new(match_prop), Binder::unused("c", result_ty.clone()));
    for b in bound.into_iter().rev() {
        closure = match b {
            Bound::Tm(x, dom, rho) => {
                Term::Pi(rho, Box::new(dom), Binder::bind(&x.clone(), &x, closure))
            }
            Bound::Co(phi) => Term::CPi(Box::new(phi), Binder::unused("c", closure)),
        };
    }
    check(sig, gamma, b1, &closure).map_err(|e| TypeError::BranchShapeError(Box::new(e)))?;
    Ok(result_ty)
}

fn open_binder(gamma: &Ctx, whole: &Term, b: &Binder) -> (Name, Term) {
    let mut avoid = gamma.names();
    avoid.extend(free_vars(whole));
    b.open_fresh(&avoid)
}

fn erase_prop(p: &Prop) -> Prop {
    p.map_terms(|t| erase(&t))
}

/// Weak-head normalization of a type at Rep; conversion is Rep, so newtype
/// axioms may expose Π/∀ heads.
fn whnf(sig: &Signature, t: &Term) -> Result<Term, TypeError> {
    let res = reduce(sig, Role::Rep, t, DEFAULT_FUEL);
    if res.exhausted {
        return Err(TypeError::EqualityUnknown);
    }
    Ok(res.term)
}

// Signature well-formedness.

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SigError {
    #[error("duplicate declaration of `{0}`")]
    DuplicateName(Name),
    #[error("`{name}`: kind error: {source}")]
    Kind { name: Name, source: TypeError },
    #[error("`{name}`: role error: {source}")]
    Role { name: Name, source: RoleError },
    #[error("`{name}`: unknown name `{var}` in the axiom right-hand side")]
    UnknownVar { name: Name, var: Name },
    #[error("`{name}`: declared roles {declared:?} do not match the pattern roles {derived:?}")]
    RoleListMismatch { name: Name, declared: Vec<Role>, derived: Vec<Role> },
    #[error("`{name}`: pattern error: {source}")]
    Pattern { name: Name, source: PatCtxError },
    #[error("`{name}`: the axiom pattern must be headed by `{name}`, found `{head}`")]
    PatternHead { name: Name, head: Name },
}

/// Check one signature entry against the whole (possibly recursive)
/// signature.
pub fn check_entry(sig: &Signature, entry: &SigEntry) -> Result<(), SigError> {
    let name = entry.name().clone();
    check(sig, &Ctx::new(), entry.ty(), &Term::Star)
        .map_err(|source| SigError::Kind { name: name.clone(), source })?;
    let SigEntry::Axiom { pattern, rhs, roles, axiom_role, ty, .. } = entry else {
        return Ok(());
    };
    if pattern.head != name {
        return Err(SigError::PatternHead { name, head: pattern.head.clone() });
    }
    let (gamma, residual, omega) = pat_ctx(sig, pattern, &erase(ty))
        .map_err(|source| SigError::Pattern { name: name.clone(), source })?;
    // the axiom's own role (Nom for type families, Rep for newtypes)
    // checks the right-hand side
    role_check(sig, &omega, &erase(rhs), *axiom_role).map_err(|source| match source {
        RoleError::Unbound(var) => SigError::UnknownVar { name: name.clone(), var },
        source => SigError::Role { name: name.clone(), source },
    })?;
    if *roles != omega.range() {
        return Err(SigError::RoleListMismatch {
            name,
            declared: roles.clone(),
            derived: omega.range(),
        });
    }
    check(sig, &gamma, rhs, &residual)
        .map_err(|source| SigError::Kind { name: name.clone(), source })?;
    Ok(())
}

/// Check every entry; recursion is permitted, so each entry is checked
/// against the whole signature.
pub fn check_sig(sig: &Signature) -> Result<(), SigError> {
    for entry in sig.iter() {
        check_entry(sig, entry)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_expr, parse_signature};

    fn prelude() -> Signature {
        parse_signature(include_str!("../corpus/prelude.dr")).unwrap()
    }

    fn ty_of(sig: &Signature, s: &str) -> Result<Term, TypeError> {
        infer(sig, &Ctx::new(), &parse_expr(sig, s).unwrap())
    }

    #[test]
    fn star_in_star() {
        let sig = prelude();
        assert_eq!(ty_of(&sig, "Type").unwrap(), Term::Star);
    }

    #[test]
    fn set_requires_nominal_flag() {
        let sig = prelude();
        assert!(matches!(
            ty_of(&sig, "Set @rep Int"),
            Err(TypeError::FlagMismatch(_))
        ));
        assert_eq!(ty_of(&sig, "Set @nom Int").unwrap(), Term::Star);
        assert_eq!(ty_of(&sig, "Maybe @rep Int").unwrap(), Term::Star);
    }

    #[test]
    fn annotated_identity() {
        let sig = prelude();
        let got = ty_of(&sig, "\\+(x:HTML) -> x").unwrap();
        let want = erase(&parse_expr(&sig, "Pi +(x:HTML) -> HTML").unwrap());
        assert_eq!(got, want);
    }

    #[test]
    fn conversion_at_rep_sees_through_newtypes() {
        let sig = prelude();
        // a String-expecting function accepts an HTML-typed argument
        let t = parse_expr(&sig, "(\\+(x:String) -> x) Mk").unwrap();
        assert!(infer(&sig, &Ctx::new(), &t).is_ok());
    }

    #[test]
    fn check_examples() {
        let sig = prelude();
        let star = parse_expr(&sig, "Type").unwrap();
        assert!(check(&sig, &Ctx::new(), &star, &Term::Star).is_ok());

        // HTML-typed term against String: ok via Rep conversion
        let mk = parse_expr(&sig, "Mk").unwrap();
        let string = erase(&parse_expr(&sig, "String").unwrap());
        let html = erase(&parse_expr(&sig, "HTML").unwrap());
        assert!(check(&sig, &Ctx::new(), &mk, &html).is_ok());
        assert!(check(&sig, &Ctx::new(), &mk, &string).is_ok());

        // Int-typed term against Bool: mismatch under the empty context
        let mut gamma = Ctx::new();
        gamma.push(CtxEntry::TmVar("i".into(), erase(&parse_expr(&sig, "Int").unwrap())));
        let i = Term::Var("i".into());
        let bool_t = erase(&parse_expr(&sig, "Bool").unwrap());
        assert!(matches!(
            check(&sig, &gamma, &i, &bool_t),
            Err(TypeError::TypeMismatch { .. })
        ));
    }

    #[test]
    fn check_prop_examples() {
        let sig = prelude();
        let p = Prop {
            lhs: parse_expr(&sig, "Int").unwrap(),
            rhs: parse_expr(&sig, "Bool").unwrap(),
            role: Role::Nom,
            ty: Term::Star,
        };
        // well-formed though unprovable
        assert!(check_prop(&sig, &Ctx::new(), &p).is_ok());

        let bad = Prop {
            lhs: parse_expr(&sig, "Int").unwrap(),
            rhs: parse_expr(&sig, "\\+(x:Type) -> x").unwrap(),
            role: Role::Rep,
            ty: Term::Star,
        };
        assert!(check_prop(&sig, &Ctx::new(), &bad).is_err());

        let newtype_rel = Prop {
            lhs: parse_expr(&sig, "HTML").unwrap(),
            rhs: parse_expr(&sig, "String").unwrap(),
            role: Role::Rep,
            ty: Term::Star,
        };
        assert!(check_prop(&sig, &Ctx::new(), &newtype_rel).is_ok());
    }

    #[test]
    fn ctx_ok_examples() {
        let sig = prelude();
        assert!(ctx_ok(&sig, &Ctx::new()).is_ok());

        let mut gamma = Ctx::new();
        gamma.push(CtxEntry::TmVar("x".into(), Term::Star));
        gamma.push(CtxEntry::TmVar("y".into(), Term::Var("x".into())));
        assert!(ctx_ok(&sig, &gamma).is_ok());

        let mut bad = Ctx::new();
        bad.push(CtxEntry::TmVar(
            "x".into(),
            parse_expr(&sig, "\\+(z:Type) -> z").unwrap(),
        ));
        assert!(ctx_ok(&sig, &bad).is_err());
    }

    #[test]
    fn prelude_checks() {
        let sig = prelude();
        assert_eq!(check_sig(&sig), Ok(()));
    }

    #[test]
    fn coercion_abstraction_and_discharge() {
        let sig = prelude();
        // \'(c : HTML ~rep String) -> Int, then discharged with []
        let t = parse_expr(
            &sig,
            "(/\\(c : HTML ~[rep] String : Type) -> Int) []",
        )
        .unwrap();
        let got = infer(&sig, &Ctx::new(), &t).unwrap();
        assert_eq!(got, Term::Star);

        // an unprovable proposition cannot be discharged
        let t = parse_expr(
            &sig,
            "(/\\(c : Int ~[nom] Bool : Type) -> Int) []",
        )
        .unwrap();
        assert!(matches!(
            infer(&sig, &Ctx::new(), &t),
            Err(TypeError::PropNotDerivable(..))
        ));
    }

    #[test]
    fn irrelevant_abstraction() {
        let sig = prelude();
        let ok = parse_expr(&sig, "\\-(x:Type) -> Int").unwrap();
        let got = infer(&sig, &Ctx::new(), &ok).unwrap();
        let want = erase(&parse_expr(&sig, "Pi -(x:Type) -> Type").unwrap());
        assert_eq!(got, want);

        let bad = parse_expr(&sig, "\\-(x:Type) -> x").unwrap();
        assert!(matches!(
            infer(&sig, &Ctx::new(), &bad),
            Err(TypeError::IrrelVarEscape(_))
        ));

        // application with the trivial argument
        let app = parse_expr(&sig, "(\\-(x:Type) -> Int) {_}").unwrap();
        assert_eq!(infer(&sig, &Ctx::new(), &app).unwrap(), Term::Star);
    }

    #[test]
    fn standalone_box_is_rejected() {
        let sig = prelude();
        assert_eq!(infer(&sig, &Ctx::new(), &Term::Box), Err(TypeError::BareBox));
    }

    #[test]
    fn case_head_must_not_be_a_type_family() {
        let sig = prelude();
        let t = parse_expr(&sig, "case Int of F [nom] -> Int ; _ -> Int").unwrap();
        assert!(matches!(
            infer(&sig, &Ctx::new(), &t),
            Err(TypeError::HeadNotConstant(_))
        ));
    }

    #[test]
    fn case_must_saturate_the_head() {
        let sig = prelude();
        let t = parse_expr(&sig, "case Int of Maybe [] -> Int ; _ -> Int").unwrap();
        assert!(matches!(
            infer(&sig, &Ctx::new(), &t),
            Err(TypeError::UnsaturatedCase(_))
        ));
    }

    #[test]
    fn case_branch_telescope() {
        let sig = prelude();
        let t = parse_expr(
            &sig,
            "case Maybe @rep Int of Maybe [rep] -> \
             (\\+(x:Type) -> /\\(c : Maybe @rep Int ~[nom] Maybe @rep x : Type) -> x) ; _ -> String",
        )
        .unwrap();
        assert_eq!(infer(&sig, &Ctx::new(), &t).unwrap(), Term::Star);

        // a first branch that skips the coercion binder is rejected
        let bad = parse_expr(
            &sig,
            "case Maybe @rep Int of Maybe [rep] -> (\\+(x:Type) -> x) ; _ -> String",
        )
        .unwrap();
        assert!(matches!(
            infer(&sig, &Ctx::new(), &bad),
            Err(TypeError::BranchShapeError(_))
        ));
    }

    #[test]
    fn discern_rejected_at_rep_accepted_at_nom() {
        let bad = "
            const String : Type @ []
            const Bool : Type @ []
            typefam D : Pi +(a:Type) -> Type @ [rep] where D x@rep =
              case x of String [] -> /\\(c : x ~[nom] String : Type) -> Bool ; _ -> Bool
        ";
        let sig = parse_signature(bad).unwrap();
        match check_sig(&sig) {
            Err(SigError::Role { name, source: RoleError::Sub { at, need, have } }) => {
                assert_eq!(name, "D");
                assert_eq!(at, "x");
                assert_eq!(need, Role::Nom);
                assert_eq!(have, Role::Rep);
            }
            other => panic!("expected a role error locating x, got {other:?}"),
        }

        let good = bad.replace("@ [rep] where D x@rep", "@ [nom] where D x@nom");
        let sig = parse_signature(&good).unwrap();
        assert_eq!(check_sig(&sig), Ok(()));
    }

    #[test]
    fn axiom_rhs_unknown_variable() {
        let src = "
            const Int : Type @ []
            newtype N : Type @ [] where N = y
        ";
        let sig = parse_signature(src).unwrap();
        assert!(matches!(
            check_sig(&sig),
            Err(SigError::UnknownVar { var, .. }) if var == "y"
        ));
    }

    #[test]
    fn role_list_must_match_pattern() {
        let src = "
            const Int : Type @ []
            typefam G : Pi +(a:Type) -> Type @ [rep, nom] where G x@rep = Int
        ";
        let sig = parse_signature(src).unwrap();
        assert!(matches!(
            check_sig(&sig),
            Err(SigError::RoleListMismatch { .. })
        ));
    }

    #[test]
    fn typing_regularity_spot_checks() {
        let sig = prelude();
        for src in [
            "Maybe @rep Int",
            "\\+(x:HTML) -> x",
            "Pi +(x:Type) -> x",
            "case Maybe @rep Int of Maybe [rep] -> \
             (\\+(x:Type) -> /\\(c : Maybe @rep Int ~[nom] Maybe @rep x : Type) -> x) ; _ -> String",
        ] {
            let t = parse_expr(&sig, src).unwrap();
            let ty = infer(&sig, &Ctx::new(), &t).unwrap();
            check(&sig, &Ctx::new(), &ty, &Term::Star).unwrap();
        }
    }
}
