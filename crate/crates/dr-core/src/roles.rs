//! The role lattice and the `Roles` path function.
//!
//! The lattice is fixed to two points, `Nom ≤ Rep`, but everything goes
//! through [`sub_role`]/[`min_role`] so a larger lattice stays a local
//! change.

use std::fmt;

use crate::syntax::{Applicator, Signature, Term, decompose_spine};

/// How much axiom unfolding an equality or reduction permits: `Nom`
/// distinguishes newtypes from their representations, `Rep` identifies
/// them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Nom,
    Rep,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Nom => write!(f, "nom"),
            Role::Rep => write!(f, "rep"),
        }
    }
}

/// Binder/argument relevance: `+` arguments exist at runtime, `-`
/// arguments are erased.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relevance {
    Rel,
    Irrel,
}

/// Flag on a term application: a declared role, plain relevant `+`, or
/// irrelevant `-` (whose argument is the trivial term).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AppFlag {
    Role(Role),
    Rel,
    Irrel,
}

/// Application flag extended with the coercion slot `[]`, as used by case
/// patterns and axiom patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FullFlag {
    App(AppFlag),
    Co,
}

/// `r1 ≤ r2` in the role lattice.
pub fn sub_role(r1: Role, r2: Role) -> bool {
    matches!((r1, r2), (Role::Nom, _) | (Role::Rep, Role::Rep))
}

/// Greatest lower bound of two roles.
pub fn min_role(r1: Role, r2: Role) -> Role {
    match (r1, r2) {
        (Role::Rep, Role::Rep) => Role::Rep,
        _ => Role::Nom,
    }
}

/// The declared roles still expected by a constant-headed application
/// path, or `None` if the term is not such a path.
///
/// The declared list is aligned with the relevant argument positions of
/// the head: a role-flagged argument consumes the front entry (and must
/// match it), a `+` argument consumes the front entry if one remains, and
/// `-`/coercion arguments consume nothing.
pub fn role_path(sig: &Signature, a: &Term) -> Option<Vec<Role>> {
    let (head, args) = decompose_spine(a);
    let name = match head {
        Term::Const(f) => f,
        _ => return None,
    };
    let entry = sig.get(&name)?;
    let mut roles: std::collections::VecDeque<Role> = entry.roles().iter().copied().collect();
    for arg in &args {
        match arg {
            Applicator::Tm(_, AppFlag::Role(r)) => match roles.pop_front() {
                Some(declared) if declared == *r => {}
                _ => return None,
            },
            Applicator::Tm(_, AppFlag::Rel) => {
                roles.pop_front();
            }
            Applicator::Tm(_, AppFlag::Irrel) | Applicator::Co => {}
        }
    }
    Some(roles.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Binder, SigEntry, Signature};

    fn maybe_sig() -> Signature {
        let star_to_star = Term::Pi(
            Relevance::Rel,
            Box::new(Term::Star),
            Binder::unused("a", Term::Star),
        );
        Signature::from_entries(vec![SigEntry::Const {
            name: "Maybe".into(),
            ty: star_to_star,
            roles: vec![Role::Rep],
        }])
        .unwrap()
    }

    #[test]
    fn lattice_order() {
        assert!(sub_role(Role::Nom, Role::Rep));
        assert!(!sub_role(Role::Rep, Role::Nom));
        assert!(sub_role(Role::Nom, Role::Nom));
        assert!(sub_role(Role::Rep, Role::Rep));
    }

    #[test]
    fn minimum_role_table() {
        assert_eq!(min_role(Role::Nom, Role::Rep), Role::Nom);
        assert_eq!(min_role(Role::Rep, Role::Rep), Role::Rep);
        assert_eq!(min_role(Role::Rep, Role::Nom), Role::Nom);
        assert_eq!(min_role(Role::Nom, Role::Nom), Role::Nom);
    }

    #[test]
    fn lattice_laws_exhaustive() {
        let roles = [Role::Nom, Role::Rep];
        for &a in &roles {
            assert!(sub_role(a, a));
            for &b in &roles {
                // antisymmetry
                if sub_role(a, b) && sub_role(b, a) {
                    assert_eq!(a, b);
                }
                assert_eq!(min_role(a, b), min_role(b, a));
                assert!(sub_role(min_role(a, b), a));
                for &c in &roles {
                    // transitivity
                    if sub_role(a, b) && sub_role(b, c) {
                        assert!(sub_role(a, c));
                    }
                    assert_eq!(
                        min_role(a, min_role(b, c)),
                        min_role(min_role(a, b), c)
                    );
                }
            }
            assert_eq!(min_role(a, a), a);
        }
    }

    #[test]
    fn path_of_bare_constant() {
        let sig = maybe_sig();
        assert_eq!(
            role_path(&sig, &Term::Const("Maybe".into())),
            Some(vec![Role::Rep])
        );
    }

    #[test]
    fn path_consumes_role_flagged_argument() {
        let sig = maybe_sig();
        let t = Term::App(
            Box::new(Term::Const("Maybe".into())),
            Box::new(Term::Const("Maybe".into())),
            AppFlag::Role(Role::Rep),
        );
        assert_eq!(role_path(&sig, &t), Some(vec![]));
    }

    #[test]
    fn path_rejects_non_constant_head() {
        let sig = maybe_sig();
        let lam = Term::Abs(
            Relevance::Rel,
            None,
            Binder::bind("x", &"x".to_string(), Term::Var("x".into())),
        );
        assert_eq!(role_path(&sig, &lam), None);
    }

    #[test]
    fn path_rejects_wrong_flag() {
        let sig = maybe_sig();
        let t = Term::App(
            Box::new(Term::Const("Maybe".into())),
            Box::new(Term::Star),
            AppFlag::Role(Role::Nom),
        );
        assert_eq!(role_path(&sig, &t), None);
    }
}
