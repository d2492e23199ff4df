//! Printer emitting exactly the grammar accepted by [`crate::parse`].

use std::collections::HashSet;

use crate::roles::{AppFlag, FullFlag, Relevance, Role};
use crate::syntax::{free_vars, Name, PatArg, Pattern, Prop, Term};

pub fn print_term(t: &Term) -> String {
    let mut scope = free_vars(t);
    let mut out = String::new();
    go(t, Level::Term, &mut scope, &mut out);
    out
}

pub fn print_pattern(p: &Pattern) -> String {
    let mut out = p.head.clone();
    for arg in &p.args {
        match arg {
            PatArg::RoleVar(x, r) => {
                out.push_str(&format!(" {x}@{r}"));
            }
            PatArg::RelVar(x) => {
                out.push_str(&format!(" {x}"));
            }
            PatArg::IrrelSlot => out.push_str(" {_}"),
            PatArg::CoSlot => out.push_str(" []"),
        }
    }
    out
}

pub fn print_roles(roles: &[Role]) -> String {
    let inner: Vec<String> = roles.iter().map(|r| r.to_string()).collect();
    format!("[{}]", inner.join(", "))
}

pub fn print_flags(flags: &[FullFlag]) -> String {
    let inner: Vec<String> = flags
        .iter()
        .map(|f| match f {
            FullFlag::App(AppFlag::Role(r)) => r.to_string(),
            FullFlag::App(AppFlag::Rel) => "+".to_string(),
            FullFlag::App(AppFlag::Irrel) => "-".to_string(),
            FullFlag::Co => "o".to_string(),
        })
        .collect();
    format!("[{}]", inner.join(", "))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    /// Binders extend as far right as possible.
    Term,
    /// Function position of an application.
    App,
    /// Argument position: names, `Type`, or parenthesized.
    Atom,
}

fn go(t: &Term, level: Level, scope: &mut HashSet<Name>, out: &mut String) {
    match t {
        Term::Star => out.push_str("Type"),
        Term::Var(x) => out.push_str(x),
        Term::BVar(i) => out.push_str(&format!("#{i}")),
        Term::Const(f) => out.push_str(f),
        Term::Box => out.push_str("{_}"),
        Term::Abs(rho, ann, b) => paren(level > Level::Term, out, |out| {
            let (x, body) = b.open_fresh(scope);
            scope.insert(x.clone());
            out.push_str(if *rho == Relevance::Rel { "\\+" } else { "\\-" });
            match ann {
                Some(a) => {
                    out.push('(');
                    out.push_str(&x);
                    out.push_str(" : ");
                    go(a, Level::Term, scope, out);
                    out.push(')');
                }
                None => out.push_str(&x),
            }
            out.push_str(" -> ");
            go(&body, Level::Term, scope, out);
            scope.remove(&x);
        }),
        Term::Pi(rho, dom, b) => paren(level > Level::Term, out, |out| {
            let (x, body) = b.open_fresh(scope);
            scope.insert(x.clone());
            out.push_str(if *rho == Relevance::Rel { "Pi +(" } else { "Pi -(" });
            out.push_str(&x);
            out.push_str(" : ");
            go(dom, Level::Term, scope, out);
            out.push_str(") -> ");
            go(&body, Level::Term, scope, out);
            scope.remove(&x);
        }),
        Term::App(f, a, nu) => paren(level > Level::App, out, |out| {
            go(f, Level::App, scope, out);
            match nu {
                AppFlag::Rel => {
                    out.push(' ');
                    go(a, Level::Atom, scope, out);
                }
                AppFlag::Role(r) => {
                    out.push_str(&format!(" @{r} "));
                    go(a, Level::Atom, scope, out);
                }
                AppFlag::Irrel => out.push_str(" {_}"),
            }
        }),
        Term::CAbs(ann, b) => paren(level > Level::Term, out, |out| {
            let x = crate::syntax::fresh(&b.hint, scope);
            scope.insert(x.clone());
            out.push_str("/\\");
            match ann {
                Some(p) => {
                    out.push('(');
                    out.push_str(&x);
                    out.push_str(" : ");
                    prop(p, scope, out);
                    out.push(')');
                }
                None => out.push_str(&x),
            }
            out.push_str(" -> ");
            go(&b.open_unused(), Level::Term, scope, out);
            scope.remove(&x);
        }),
        Term::CApp(f) => paren(level > Level::App, out, |out| {
            go(f, Level::App, scope, out);
            out.push_str(" []");
        }),
        Term::CPi(p, b) => paren(level > Level::Term, out, |out| {
            let x = crate::syntax::fresh(&b.hint, scope);
            scope.insert(x.clone());
            out.push_str("Forall (");
            out.push_str(&x);
            out.push_str(" : ");
            prop(p, scope, out);
            out.push_str(") -> ");
            go(&b.open_unused(), Level::Term, scope, out);
            scope.remove(&x);
        }),
        Term::Case(s, head, flags, b1, b2) => paren(level > Level::Term, out, |out| {
            out.push_str("case ");
            go(s, Level::App, scope, out);
            out.push_str(" of ");
            out.push_str(head);
            out.push(' ');
            out.push_str(&print_flags(flags));
            out.push_str(" -> ");
            // the first branch binds tighter than `;`
            go(b1, Level::App, scope, out);
            out.push_str(" ; _ -> ");
            go(b2, Level::Term, scope, out);
        }),
    }
}

fn prop(p: &Prop, scope: &mut HashSet<Name>, out: &mut String) {
    go(&p.lhs, Level::App, scope, out);
    out.push_str(&format!(" ~[{}] ", p.role));
    go(&p.rhs, Level::App, scope, out);
    out.push_str(" : ");
    go(&p.ty, Level::Term, scope, out);
}

fn paren(needed: bool, out: &mut String, f: impl FnOnce(&mut String)) {
    if needed {
        out.push('(');
        f(out);
        out.push(')');
    } else {
        f(out);
    }
}
