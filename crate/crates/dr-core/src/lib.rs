//! A dependently typed core calculus with role-indexed equality: nominal
//! and representational notions of type equality, newtype and type-family
//! axioms, irrelevant arguments, coercion abstraction, and head-constructor
//! case analysis. Ships as a checker/evaluator library with a batch CLI
//! and the brute-force oracles behind its property-test suites.

pub mod cli;
pub mod equality;
pub mod oracle;
pub mod parse;
pub mod print;
pub mod reduce;
pub mod rolecheck;
pub mod roles;
pub mod syntax;
pub mod typecheck;
