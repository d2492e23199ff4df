//! Batch front end: check `.dr` files, evaluate and compare expressions,
//! print role paths.
//!
//! Exit codes are a stable contract: 0 ok, 1 rejected, 2 unknown (fuel),
//! 64 usage, 65 parse error (66 for unreadable files).

use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use crate::equality::{def_eq, EqEnv};
use crate::parse::{parse_entries, parse_expr};
use crate::print::{print_roles, print_term};
use crate::reduce::{reduce_trace, StepOutcome, DEFAULT_FUEL};
use crate::roles::{role_path, Role};
use crate::syntax::{erase, Ctx, Signature, Term};
use crate::typecheck::{check_entry, infer};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;
pub const EXIT_NOINPUT: i32 = 66;

#[derive(Parser)]
#[command(name = "dr", disable_help_subcommand = true)]
#[command(about = "checker and evaluator for a dependently typed core language with roles")]
enum Cmd {
    /// Check every declaration of a signature file.
    Check { file: PathBuf },
    /// Evaluate an expression under a signature.
    Eval {
        file: PathBuf,
        /// Evaluation role.
        #[arg(long, value_parser = parse_role)]
        role: Role,
        /// Step budget.
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        /// Print one line per step, naming the rule fired.
        #[arg(long)]
        trace: bool,
        /// Expression to evaluate.
        #[arg(short = 'e', long = "expr")]
        expr: String,
    },
    /// Decide definitional equality of two expressions.
    Equal {
        file: PathBuf,
        #[arg(long, value_parser = parse_role)]
        role: Role,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        expr_a: String,
        expr_b: String,
    },
    /// Print the declared roles still expected by a constant-headed path.
    Roles { file: PathBuf, expr: String },
}

fn parse_role(s: &str) -> Result<Role, String> {
    match s {
        "nom" => Ok(Role::Nom),
        "rep" => Ok(Role::Rep),
        other => Err(format!("expected `nom` or `rep`, got `{other}`")),
    }
}

/// Run the CLI on the given arguments (without the leading program name),
/// writing to the given streams. Returns the process exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut argv = vec!["dr".to_string()];
    argv.extend_from_slice(args);
    let cmd = match Cmd::try_parse_from(&argv) {
        Ok(cmd) => cmd,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match cmd {
        Cmd::Check { file } => cmd_check(&file, out, err),
        Cmd::Eval { file, role, fuel, trace, expr } => {
            cmd_eval(&file, &expr, role, fuel, trace, out, err)
        }
        Cmd::Equal { file, role, fuel, expr_a, expr_b } => {
            cmd_equal(&file, &expr_a, &expr_b, role, fuel, out, err)
        }
        Cmd::Roles { file, expr } => cmd_roles(&file, &expr, out, err),
    }
}

enum Loaded {
    Sig(Signature),
    Code(i32),
}

fn load_signature(file: &PathBuf, err: &mut dyn Write) -> Loaded {
    let src = match std::fs::read_to_string(file) {
        Ok(src) => src,
        Err(e) => {
            let _ = writeln!(err, "cannot read {}: {e}", file.display());
            return Loaded::Code(EXIT_NOINPUT);
        }
    };
    let entries = match parse_entries(&src) {
        Ok(entries) => entries,
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", file.display());
            return Loaded::Code(EXIT_PARSE);
        }
    };
    match Signature::from_entries(entries) {
        Ok(sig) => Loaded::Sig(sig),
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", file.display());
            Loaded::Code(EXIT_REJECTED)
        }
    }
}

/// Load, and require every declaration to check.
fn load_checked(file: &PathBuf, err: &mut dyn Write) -> Loaded {
    let sig = match load_signature(file, err) {
        Loaded::Sig(sig) => sig,
        code => return code,
    };
    for entry in sig.iter() {
        if let Err(e) = check_entry(&sig, entry) {
            let _ = writeln!(err, "{}: {e}", file.display());
            return Loaded::Code(EXIT_REJECTED);
        }
    }
    Loaded::Sig(sig)
}

fn cmd_check(file: &PathBuf, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let sig = match load_signature(file, err) {
        Loaded::Sig(sig) => sig,
        Loaded::Code(c) => return c,
    };
    let mut ok = true;
    for entry in sig.iter() {
        match check_entry(&sig, entry) {
            Ok(()) => {
                let _ = writeln!(out, "{}: ok", entry.name());
            }
            Err(e) => {
                ok = false;
                let _ = writeln!(out, "{}: error: {e}", entry.name());
            }
        }
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_REJECTED
    }
}

fn cmd_eval(
    file: &PathBuf,
    expr: &str,
    role: Role,
    fuel: u64,
    trace: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let sig = match load_checked(file, err) {
        Loaded::Sig(sig) => sig,
        Loaded::Code(c) => return c,
    };
    let term = match parse_expr(&sig, expr) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return EXIT_PARSE;
        }
    };
    if fully_annotated(&term) {
        if let Err(e) = infer(&sig, &Ctx::new(), &term) {
            let _ = writeln!(err, "{e}");
            return EXIT_REJECTED;
        }
    } else {
        let _ = writeln!(err, "note: expression has erased binders; typechecking skipped");
    }
    let erased = erase(&term);
    let (res, steps) = reduce_trace(&sig, role, &erased, fuel);
    if trace {
        let _ = writeln!(out, "{}", print_term(&erased));
        for (rule, t) in &steps {
            let _ = writeln!(out, "-[{rule}]-> {}", print_term(t));
        }
    }
    let _ = writeln!(out, "{}", print_term(&res.term));
    if res.exhausted {
        let _ = writeln!(err, "fuel exhausted after {} steps", res.steps);
        return EXIT_UNKNOWN;
    }
    if let StepOutcome::Stuck(reason) = &res.outcome {
        let _ = writeln!(err, "stuck: {reason}");
        return EXIT_REJECTED;
    }
    EXIT_OK
}

fn cmd_equal(
    file: &PathBuf,
    expr_a: &str,
    expr_b: &str,
    role: Role,
    fuel: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let sig = match load_checked(file, err) {
        Loaded::Sig(sig) => sig,
        Loaded::Code(c) => return c,
    };
    let mut parsed = Vec::new();
    for src in [expr_a, expr_b] {
        match parse_expr(&sig, src) {
            Ok(t) => parsed.push(t),
            Err(e) => {
                let _ = writeln!(err, "{e}");
                return EXIT_PARSE;
            }
        }
    }
    let mut tys = Vec::new();
    for t in &parsed {
        match infer(&sig, &Ctx::new(), t) {
            Ok(ty) => tys.push(ty),
            Err(e) => {
                let _ = writeln!(err, "{e}");
                return EXIT_REJECTED;
            }
        }
    }
    let mut env = EqEnv::new(&sig);
    env.fuel = fuel;
    match def_eq(&env, Role::Rep, &tys[0], &tys[1]) {
        Ok(true) => {}
        Ok(false) => {
            let _ = writeln!(err, "the expressions do not share a type: `{}` vs `{}`", tys[0], tys[1]);
            return EXIT_REJECTED;
        }
        Err(_) => {
            let _ = writeln!(out, "unknown (fuel)");
            return EXIT_UNKNOWN;
        }
    }
    let a = erase(&parsed[0]);
    let b = erase(&parsed[1]);
    match def_eq(&env, role, &a, &b) {
        Ok(true) => {
            let _ = writeln!(out, "equal");
            EXIT_OK
        }
        Ok(false) => {
            let _ = writeln!(out, "not-equal");
            EXIT_REJECTED
        }
        Err(_) => {
            let _ = writeln!(out, "unknown (fuel)");
            EXIT_UNKNOWN
        }
    }
}

fn cmd_roles(file: &PathBuf, expr: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let sig = match load_signature(file, err) {
        Loaded::Sig(sig) => sig,
        Loaded::Code(c) => return c,
    };
    let term = match parse_expr(&sig, expr) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return EXIT_PARSE;
        }
    };
    match role_path(&sig, &erase(&term)) {
        Some(roles) => {
            let _ = writeln!(out, "{}", print_roles(&roles));
        }
        None => {
            let _ = writeln!(out, "not a constant-headed path");
        }
    }
    EXIT_OK
}

/// Every abstraction binder carries its annotation.
fn fully_annotated(t: &Term) -> bool {
    match t {
        Term::Star | Term::Var(_) | Term::BVar(_) | Term::Const(_) | Term::Box => true,
        Term::Abs(_, ann, b) => {
            ann.is_some()
                && ann.as_deref().is_none_or(fully_annotated)
                && fully_annotated(&b.open(&Term::Star))
        }
        Term::App(f, a, _) => fully_annotated(f) && fully_annotated(a),
        Term::Pi(_, a, b) => fully_annotated(a) && fully_annotated(&b.open(&Term::Star)),
        Term::CAbs(ann, b) => {
            ann.is_some()
                && ann
                    .as_deref()
                    .is_none_or(|p| !p.any_term(|t| !fully_annotated(t)))
                && fully_annotated(&b.open_unused())
        }
        Term::CApp(f) => fully_annotated(f),
        Term::CPi(p, b) => {
            !p.any_term(|t| !fully_annotated(t)) && fully_annotated(&b.open_unused())
        }
        Term::Case(s, _, _, b1, b2) => {
            fully_annotated(s) && fully_annotated(b1) && fully_annotated(b2)
        }
    }
}
