//! Algorithmic, role-indexed definitional equality: a sound, fuel-bounded
//! semi-decision procedure. `true` verdicts are replayable (each node
//! records the rule that justified it); `false` may be returned for
//! derivable equations — the declarative relation is undecidable.

use std::collections::HashSet;

use crate::reduce::{reduce, StepOutcome};
use crate::roles::{min_role, sub_role, AppFlag, Role};
use crate::syntax::{alpha_eq, free_vars, AvailSet, Ctx, CtxEntry, Name, Prop, Signature, Term};

/// Environment for an equality query: signature, typing context, the set
/// of names whose coercions may be used, and a normalization budget.
#[derive(Clone, Debug)]
pub struct EqEnv<'s> {
    pub sig: &'s Signature,
    pub ctx: Ctx,
    pub avail: AvailSet,
    pub fuel: u64,
}

impl<'s> EqEnv<'s> {
    pub fn new(sig: &'s Signature) -> EqEnv<'s> {
        EqEnv { sig, ctx: Ctx::new(), avail: AvailSet::new(), fuel: crate::reduce::DEFAULT_FUEL }
    }

    /// Environment over a context with every coercion assumption available.
    pub fn with_ctx(sig: &'s Signature, ctx: &Ctx) -> EqEnv<'s> {
        let avail = ctx.iter().map(|e| e.name().clone()).collect();
        EqEnv { sig, ctx: ctx.clone(), avail, fuel: crate::reduce::DEFAULT_FUEL }
    }
}

/// The normalization budget hit: the verdict is unknown, which is distinct
/// from "unequal".
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("definitional equality: fuel exhausted, verdict unknown")]
pub struct FuelExhausted;

pub type EqResult = Result<bool, FuelExhausted>;

/// One node of the justification trace recorded for a `true` verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceNode {
    pub depth: usize,
    pub rule: &'static str,
}

/// Are `a` and `b` definitionally equal at role `r`? Both must be erased
/// and (for the verdict to mean anything) well-typed at a common type.
pub fn def_eq(env: &EqEnv, r: Role, a: &Term, b: &Term) -> EqResult {
    let mut q = Query::new(env, None);
    q.eq(0, r, a, b)
}

/// Like [`def_eq`], recording which rule justified every `true` node.
pub fn def_eq_traced(env: &EqEnv, r: Role, a: &Term, b: &Term, trace: &mut Vec<TraceNode>) -> EqResult {
    let mut q = Query::new(env, Some(trace));
    q.eq(0, r, a, b)
}

/// Proposition equality: the roles must be identical, the endpoints equal
/// at the proposition's role, the types at Rep.
pub fn prop_eq(env: &EqEnv, p1: &Prop, p2: &Prop) -> EqResult {
    let mut q = Query::new(env, None);
    q.props(0, p1, p2)
}

struct Query<'a, 's> {
    env: &'a EqEnv<'s>,
    fuel: u64,
    avoid: HashSet<Name>,
    trace: Option<&'a mut Vec<TraceNode>>,
}

impl<'a, 's> Query<'a, 's> {
    fn new(env: &'a EqEnv<'s>, trace: Option<&'a mut Vec<TraceNode>>) -> Self {
        let avoid = env.ctx.names().into_iter().collect();
        Query { env, fuel: env.fuel, avoid, trace }
    }

    fn note(&mut self, depth: usize, rule: &'static str) {
        if let Some(t) = self.trace.as_deref_mut() {
            t.push(TraceNode { depth, rule });
        }
    }

    /// Equations justified by available coercion assumptions whose role is
    /// below `r`, closed under symmetry and transitivity on alpha-classes.
    fn assumption_classes(&self, r: Role) -> Vec<Vec<&'a Term>> {
        let mut classes: Vec<Vec<&'a Term>> = Vec::new();
        for entry in self.env.ctx.iter() {
            let CtxEntry::CoVar(c, p) = entry else { continue };
            if !self.env.avail.contains(c) || !sub_role(p.role, r) {
                continue;
            }
            let i = classes.iter().position(|cl| cl.iter().any(|t| alpha_eq(t, &p.lhs)));
            let j = classes.iter().position(|cl| cl.iter().any(|t| alpha_eq(t, &p.rhs)));
            match (i, j) {
                (Some(i), Some(j)) if i == j => {}
                (Some(i), Some(j)) => {
                    let (lo, hi) = (i.min(j), i.max(j));
                    let merged = classes.remove(hi);
                    classes[lo].extend(merged);
                }
                (Some(i), None) => classes[i].push(&p.rhs),
                (None, Some(j)) => classes[j].push(&p.lhs),
                (None, None) => classes.push(vec![&p.lhs, &p.rhs]),
            }
        }
        classes
    }

    fn assumed(&self, r: Role, a: &Term, b: &Term) -> bool {
        self.assumption_classes(r).iter().any(|cl| {
            cl.iter().any(|t| alpha_eq(t, a)) && cl.iter().any(|t| alpha_eq(t, b))
        })
    }

    fn whnf(&mut self, r: Role, a: &Term) -> Result<Term, FuelExhausted> {
        let res = reduce(self.env.sig, r, a, self.fuel);
        self.fuel = self.fuel.saturating_sub(res.steps);
        if res.exhausted {
            return Err(FuelExhausted);
        }
        // A stuck term is treated as its own normal form; the structural
        // phase compares it by congruence.
        debug_assert!(!matches!(res.outcome, StepOutcome::Stepped { .. }));
        Ok(res.term)
    }

    fn eq(&mut self, depth: usize, r: Role, a: &Term, b: &Term) -> EqResult {
        if alpha_eq(a, b) {
            self.note(depth, "refl");
            return Ok(true);
        }
        if self.assumed(r, a, b) {
            self.note(depth, "assumption");
            return Ok(true);
        }
        let a = self.whnf(r, a)?;
        let b = self.whnf(r, b)?;
        if alpha_eq(&a, &b) {
            self.note(depth, "beta");
            return Ok(true);
        }
        if self.assumed(r, &a, &b) {
            self.note(depth, "beta-assumption");
            return Ok(true);
        }
        self.structural(depth, r, &a, &b)
    }

    fn structural(&mut self, depth: usize, r: Role, a: &Term, b: &Term) -> EqResult {
        use Term::*;
        let d = depth + 1;
        let ok = match (a, b) {
            (Star, Star) | (Box, Box) => true,
            (Var(x), Var(y)) => x == y,
            (Const(x), Const(y)) => x == y,
            (Abs(r1, _, b1), Abs(r2, _, b2)) => {
                r1 == r2 && {
                    let (x, t1) = self.open_pair(b1, b2);
                    let t2 = b2.open(&Term::Var(x));
                    self.eq(d, r, &t1, &t2)?
                }
            }
            (Pi(r1, a1, b1), Pi(r2, a2, b2)) => {
                r1 == r2 && self.eq(d, r, a1, a2)? && {
                    let (x, t1) = self.open_pair(b1, b2);
                    let t2 = b2.open(&Term::Var(x));
                    self.eq(d, r, &t1, &t2)?
                }
            }
            (App(f1, a1, n1), App(f2, a2, n2)) => {
                n1 == n2 && self.eq(d, r, f1, f2)? && match n1 {
                    AppFlag::Rel => self.eq(d, Role::Nom, a1, a2)?,
                    AppFlag::Role(r1) => self.eq(d, min_role(*r1, r), a1, a2)?,
                    AppFlag::Irrel => true,
                }
            }
            (CApp(f1), CApp(f2)) => self.eq(d, r, f1, f2)?,
            (CAbs(_, b1), CAbs(_, b2)) => {
                self.eq(d, r, &b1.open_unused(), &b2.open_unused())?
            }
            (CPi(p1, b1), CPi(p2, b2)) => {
                self.props(d, p1, p2)?
                    && self.eq(d, r, &b1.open_unused(), &b2.open_unused())?
            }
            (Case(s1, f1, fl1, x1, y1), Case(s2, f2, fl2, x2, y2)) => {
                f1 == f2
                    && fl1 == fl2
                    && self.eq(d, Role::Nom, s1, s2)?
                    && self.eq(d, r, x1, x2)?
                    && self.eq(d, r, y1, y2)?
            }
            _ => false,
        };
        if ok {
            self.note(depth, "congruence");
        }
        Ok(ok)
    }

    fn props(&mut self, depth: usize, p1: &Prop, p2: &Prop) -> EqResult {
        if p1.role != p2.role {
            return Ok(false);
        }
        let d = depth + 1;
        Ok(self.eq(d, p1.role, &p1.lhs, &p2.lhs)?
            && self.eq(d, p1.role, &p1.rhs, &p2.rhs)?
            && self.eq(d, Role::Rep, &p1.ty, &p2.ty)?)
    }

    /// A fresh name suitable for opening both binders.
    fn open_pair(&mut self, b1: &crate::syntax::Binder, b2: &crate::syntax::Binder) -> (Name, Term) {
        let mut avoid = self.avoid.clone();
        avoid.extend(free_vars(&b1.open(&Term::Star)));
        avoid.extend(free_vars(&b2.open(&Term::Star)));
        let (x, t1) = b1.open_fresh(&avoid);
        self.avoid.insert(x.clone());
        (x, t1)
    }
}
