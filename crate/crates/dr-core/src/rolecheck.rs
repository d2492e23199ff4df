//! The role-checking judgment over erased terms, and pattern-context
//! extraction for axiom checking.

use std::collections::HashSet;

use crate::reduce::{reduce, DEFAULT_FUEL};
use crate::roles::{min_role, sub_role, AppFlag, Relevance, Role};
use crate::syntax::{
    free_vars, Ctx, CtxEntry, Name, PatArg, Pattern, Prop, Signature, Term,
};

/// Role assignment for free term variables, declaration-ordered.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoleCtx {
    entries: Vec<(Name, Role)>,
}

impl RoleCtx {
    pub fn new() -> RoleCtx {
        RoleCtx::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Name, Role)>) -> RoleCtx {
        let mut ctx = RoleCtx::new();
        for (x, r) in pairs {
            ctx.push(x, r);
        }
        ctx
    }

    pub fn push(&mut self, x: Name, r: Role) {
        debug_assert!(self.lookup(&x).is_none());
        self.entries.push((x, r));
    }

    pub fn pop(&mut self) {
        self.entries.pop();
    }

    pub fn lookup(&self, x: &str) -> Option<Role> {
        self.entries.iter().find(|(y, _)| y == x).map(|(_, r)| *r)
    }

    /// The roles in declaration order.
    pub fn range(&self) -> Vec<Role> {
        self.entries.iter().map(|(_, r)| *r).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Name, Role)> {
        self.entries.iter()
    }

    pub fn names(&self) -> HashSet<Name> {
        self.entries.iter().map(|(x, _)| x.clone()).collect()
    }

    /// Replace the role of one variable (used by narrowing tests).
    pub fn set(&mut self, x: &str, r: Role) {
        for (y, role) in &mut self.entries {
            if y == x {
                *role = r;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RoleError {
    #[error("variable `{at}` has role {have} but is used where {need} is required")]
    Sub { at: Name, need: Role, have: Role },
    #[error("variable `{0}` is not in the role context")]
    Unbound(Name),
    #[error("irrelevant application argument must be the trivial term")]
    IrrelArgNotBox,
}

/// Does `a` role-check at `r`? Variables need a context role below `r`;
/// role-flagged arguments check at the minimum of the flag and the
/// ambient role; `+` arguments and abstraction-bound variables use Nom;
/// case scrutinees check at Nom regardless of the ambient role.
pub fn role_check(sig: &Signature, omega: &RoleCtx, a: &Term, r: Role) -> Result<(), RoleError> {
    let mut omega = omega.clone();
    check(sig, &mut omega, a, r)
}

fn check(sig: &Signature, omega: &mut RoleCtx, a: &Term, r: Role) -> Result<(), RoleError> {
    match a {
        Term::Star | Term::Box | Term::Const(_) => Ok(()),
        Term::Var(x) => match omega.lookup(x) {
            Some(have) if sub_role(have, r) => Ok(()),
            Some(have) => Err(RoleError::Sub { at: x.clone(), need: r, have }),
            None => Err(RoleError::Unbound(x.clone())),
        },
        Term::BVar(_) => Ok(()),
        Term::Abs(_, _, b) => {
            let mut avoid = free_vars(a);
            avoid.extend(omega.names());
            let (x, body) = b.open_fresh(&avoid);
            omega.push(x, Role::Nom);
            let res = check(sig, omega, &body, r);
            omega.pop();
            res
        }
        Term::App(f, arg, nu) => {
            check(sig, omega, f, r)?;
            match nu {
                AppFlag::Rel => check(sig, omega, arg, Role::Nom),
                AppFlag::Role(r1) => check(sig, omega, arg, min_role(*r1, r)),
                AppFlag::Irrel => match arg.as_ref() {
                    Term::Box => Ok(()),
                    _ => Err(RoleError::IrrelArgNotBox),
                },
            }
        }
        Term::Pi(_, dom, b) => {
            check(sig, omega, dom, r)?;
            let mut avoid = free_vars(a);
            avoid.extend(omega.names());
            let (x, body) = b.open_fresh(&avoid);
            omega.push(x, Role::Nom);
            let res = check(sig, omega, &body, r);
            omega.pop();
            res
        }
        Term::CAbs(_, b) => check(sig, omega, &b.open_unused(), r),
        Term::CApp(f) => check(sig, omega, f, r),
        Term::CPi(p, b) => {
            check_prop(sig, omega, p)?;
            check(sig, omega, &b.open_unused(), r)
        }
        Term::Case(s, _, _, b1, b2) => {
            check(sig, omega, s, Role::Nom)?;
            check(sig, omega, b1, r)?;
            check(sig, omega, b2, r)
        }
    }
}

/// Proposition endpoints check at the proposition's role (so variables of
/// a nominal proposition must have role Nom); the type checks at Rep.
fn check_prop(sig: &Signature, omega: &mut RoleCtx, p: &Prop) -> Result<(), RoleError> {
    check(sig, omega, &p.lhs, p.role)?;
    check(sig, omega, &p.rhs, p.role)?;
    check(sig, omega, &p.ty, Role::Rep)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PatCtxError {
    #[error("pattern has more arguments than the telescope of the head type")]
    PatternArity,
    #[error("pattern argument {position} does not fit the telescope: {reason}")]
    PatternShape { position: usize, reason: String },
    #[error("pattern variables must be pairwise distinct: `{0}` repeats")]
    DuplicatePatternVar(Name),
}

/// Walk the pattern against the Π/∀ telescope of the head's declared
/// type. Returns the typing context binding each pattern variable at its
/// domain type, the residual type of the fully applied pattern, and the
/// role context mapping each relevant pattern variable to its role
/// (annotated role for role-flagged variables, Nom for `+` variables).
pub fn pat_ctx(
    sig: &Signature,
    p: &Pattern,
    head_type: &Term,
) -> Result<(Ctx, Term, RoleCtx), PatCtxError> {
    let mut seen: HashSet<Name> = HashSet::new();
    for v in p.vars() {
        if !seen.insert(v.clone()) {
            return Err(PatCtxError::DuplicatePatternVar(v));
        }
    }
    let mut gamma = Ctx::new();
    let mut omega = RoleCtx::new();
    let mut current = head_type.clone();
    for (i, arg) in p.args.iter().enumerate() {
        current = telescope_whnf(sig, &current);
        match (arg, &current) {
            (PatArg::RoleVar(x, role), Term::Pi(Relevance::Rel, dom, body)) => {
                gamma.push(CtxEntry::TmVar(x.clone(), (**dom).clone()));
                omega.push(x.clone(), *role);
                current = body.open(&Term::Var(x.clone()));
            }
            (PatArg::RelVar(x), Term::Pi(Relevance::Rel, dom, body)) => {
                gamma.push(CtxEntry::TmVar(x.clone(), (**dom).clone()));
                omega.push(x.clone(), Role::Nom);
                current = body.open(&Term::Var(x.clone()));
            }
            (PatArg::IrrelSlot, Term::Pi(Relevance::Irrel, _, body)) => {
                current = body.open(&Term::Box);
            }
            (PatArg::CoSlot, Term::CPi(_, body)) => {
                current = body.open_unused();
            }
            (_, Term::Pi(..)) | (_, Term::CPi(..)) => {
                return Err(PatCtxError::PatternShape {
                    position: i,
                    reason: "argument kind does not match the telescope binder".into(),
                });
            }
            _ => return Err(PatCtxError::PatternArity),
        }
    }
    Ok((gamma, current, omega))
}

/// Expose a Π/∀ head through axiom unfolding; leaves the term unchanged if
/// normalization stalls.
fn telescope_whnf(sig: &Signature, t: &Term) -> Term {
    match t {
        Term::Pi(..) | Term::CPi(..) => t.clone(),
        _ => reduce(sig, Role::Rep, t, DEFAULT_FUEL).term,
    }
}
