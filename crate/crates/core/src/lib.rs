//! Rewriting tools for monoid presentations.
//!
//! A [`Presentation`] is an alphabet with oriented rules and a reduction
//! order. On top of it this crate provides normalization and the word
//! problem ([`rewrite`]), the algebra of rewriting paths ([`track`]),
//! critical branchings and convergence checks ([`critical`]), Knuth-Bendix
//! completion ([`completion`]), identities among relations expressed over
//! the generating confluences ([`abelian`]), and transport of generating
//! sets between equivalent presentations ([`transport`]).

pub mod abelian;
pub mod completion;
pub mod critical;
mod error;
pub mod order;
pub mod presentation;
pub mod rewrite;
pub mod syntax;
pub mod track;
pub mod transport;

pub use abelian::{
    basis_loops, context_act, decompose_loop, footprint, pi_footprint, verify_certificate, BasisId, BasisLoop,
    ContextClass, DecompositionCertificate, Footprint, PiElement,
};
pub use completion::{knuth_bendix, same_congruence, CompletionTrace};
pub use critical::{
    brute_force_confluence, critical_branchings, generating_confluence, is_convergent, is_locally_confluent,
    Convergent, CriticalBranching, GeneratingConfluence,
};
pub use error::{Error, Result};
pub use order::{compare_words, OrderSpec};
pub use presentation::{parse_presentation, GenId, Presentation, Rule, RuleId, Word};
pub use rewrite::{apply_step, check_termination, find_redexes, normalize, words_equal, Redex, RewriteStep, Sign};
pub use track::{conjugate, ClosedPath, Path};
pub use transport::TranslationMap;
