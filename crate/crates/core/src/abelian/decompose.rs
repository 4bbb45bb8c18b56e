//! Decomposition of closed paths over the generating-confluence loops.
//!
//! For a positive step `s: u → v`, write `E(s)` for the class of the loop
//! `σ(u)⁻ ⋆ s ⋆ σ(v)`, where `σ` is the leftmost-lowest normalization path.
//! A closed path `x₁ ⋯ x_k` has class `Σ εᵢ E(xᵢ⁺)`. `E` is computed by
//! induction along the reduction order, comparing `s` with the first step
//! `b` of `σ(u)`:
//!
//! 1. `s = b`: the loop is trivial.
//! 2. `s` and `b` rewrite disjoint factors: exchanging them gives
//!    `E(s) = E(s') − E(b')` for the residuals `s'` after `b` and `b'`
//!    after `s`.
//! 3. `s` and `b` overlap: the pair is a critical branching `(c₁, c₂)`
//!    placed in a context `C`, with completions `d₁`, `d₂` and basis loop
//!    `β`. When `s = C[c₂]`,
//!    `E(s) = −C·β + Σ_{e ∈ C[d₁]} E(e) − Σ_{e ∈ C[d₂]} E(e)`,
//!    and the signs are mirrored when `s = C[c₁]`.
//!
//! Every recursive call starts from a word strictly below `u`.

use std::collections::HashMap;
use std::rc::Rc;

use super::{
    basis_loops, footprint, footprint_in_context, BasisId, BasisLoop, Combination, ContextClass, Footprint, PiElement,
    PiKey,
};
use crate::critical::Convergent;
use crate::error::{Error, Result};
use crate::presentation::{RuleId, Word};
use crate::rewrite::{RewriteStep, Sign};
use crate::track::{ClosedPath, Path};

/// A basis loop in a literal (unnormalized) word context.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Placed {
    left: Word,
    right: Word,
    basis: BasisId,
}

type Literal = Combination<Placed>;

/// Bound on recursive evaluations of `E` per system.
const CALL_BUDGET: usize = 5_000_000;

/// The basis of a convergent presentation together with a memo table for
/// the step classes `E(s)`.
pub struct PiSystem<'c> {
    conv: Convergent<'c>,
    basis: Vec<BasisLoop>,
    basis_footprints: Vec<Footprint>,
    by_branching: HashMap<(RuleId, RuleId, usize), BasisId>,
    memo: HashMap<(Word, RuleId, usize), Rc<Literal>>,
    calls: usize,
}

/// One conjugated, whiskered basis loop `g ⋆ C[β^ε] ⋆ g⁻`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateEntry {
    pub sign: Sign,
    pub left: Word,
    pub right: Word,
    pub basis: BasisId,
    /// A path from the decomposed loop's base to `left · base(β) · right`.
    pub conjugator: Path,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionCertificate {
    pub base: Word,
    pub entries: Vec<CertificateEntry>,
    pub pi: PiElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    /// The entry list sums to the stated Π element.
    pub summary_matches: bool,
    /// Every conjugator runs from the base to its whiskered basis loop.
    pub conjugators_match: bool,
    pub footprint: Footprint,
    pub pi_footprint: Footprint,
}

impl VerificationReport {
    pub fn is_ok(&self) -> bool {
        self.summary_matches && self.conjugators_match && self.footprint == self.pi_footprint
    }
}

impl<'c> PiSystem<'c> {
    pub fn new(conv: Convergent<'c>) -> Result<Self> {
        let basis = basis_loops(&conv)?;
        let basis_footprints = basis
            .iter()
            .map(|b| footprint(b.closed_path(), &conv))
            .collect::<Result<_>>()?;
        let by_branching = basis
            .iter()
            .map(|b| {
                let cb = &b.confluence.branching;
                ((cb.rule1, cb.rule2, cb.offset), b.id)
            })
            .collect();
        Ok(PiSystem {
            conv,
            basis,
            basis_footprints,
            by_branching,
            memo: HashMap::new(),
            calls: 0,
        })
    }

    pub fn convergent(&self) -> &Convergent<'c> {
        &self.conv
    }

    pub fn basis(&self) -> &[BasisLoop] {
        &self.basis
    }

    pub fn basis_footprint(&self, id: BasisId) -> &Footprint {
        &self.basis_footprints[id.0]
    }

    pub fn pi_footprint(&self, x: &PiElement) -> Result<Footprint> {
        let mut out = Footprint::zero();
        for (key, coef) in x.iter() {
            let placed = footprint_in_context(self.basis_footprint(key.basis), &key.context, &self.conv)?;
            out.add_scaled(&placed, coef);
        }
        Ok(out)
    }

    /// `E(s)` for a positive step, as a Π element.
    pub fn step_class(&mut self, s: &RewriteStep) -> Result<PiElement> {
        let lit = self.step_literal(s)?;
        self.classify(&lit)
    }

    fn classify(&self, lit: &Literal) -> Result<PiElement> {
        lit.try_map_keys(|k| {
            Ok(PiKey {
                context: ContextClass::of(&self.conv, &k.left, &k.right)?,
                basis: k.basis,
            })
        })
    }

    fn step_literal(&mut self, s: &RewriteStep) -> Result<Rc<Literal>> {
        if s.sign != Sign::Pos {
            return Err(Error::Precondition("E is defined on positive steps".into()));
        }
        let key = (s.source.clone(), s.rule, s.pos);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(Rc::clone(hit));
        }
        self.calls += 1;
        if self.calls > CALL_BUDGET {
            return Err(Error::FuelExhausted(CALL_BUDGET));
        }
        let value = Rc::new(self.evaluate(s)?);
        self.memo.insert(key, Rc::clone(&value));
        Ok(value)
    }

    fn evaluate(&mut self, s: &RewriteStep) -> Result<Literal> {
        let p = self.conv.presentation();
        let u = &s.source;
        let b = self
            .conv
            .first_redex(u)
            .ok_or_else(|| Error::Precondition("step source is already a normal form".into()))?;
        if b.rule == s.rule && b.pos == s.pos {
            return Ok(Literal::zero());
        }
        let (rs, rb) = (p.rule(s.rule), p.rule(b.rule));
        let (ls, lb) = (rs.lhs.len(), rb.lhs.len());

        if s.pos + ls <= b.pos || b.pos + lb <= s.pos {
            let after_b = u.splice(b.pos, lb, &rb.rhs);
            let after_s = u.splice(s.pos, ls, &rs.rhs);
            let (s_pos, b_pos) = if s.pos < b.pos {
                (s.pos, b.pos + rs.rhs.len() - ls)
            } else {
                (s.pos + rb.rhs.len() - lb, b.pos)
            };
            let s_res = RewriteStep::new(after_b, s.rule, s_pos, Sign::Pos);
            let b_res = RewriteStep::new(after_s, b.rule, b_pos, Sign::Pos);
            let es = self.step_literal(&s_res)?;
            let eb = self.step_literal(&b_res)?;
            return Ok(es.as_ref() - eb.as_ref());
        }

        // Overlap. The enclosing or leftmost redex plays the first role.
        let lo = s.pos.min(b.pos);
        let hi = (s.pos + ls).max(b.pos + lb);
        let s_first = match (s.pos == lo, b.pos == lo) {
            (true, false) => true,
            (false, true) => false,
            _ => ls > lb || (ls == lb && s.rule < b.rule),
        };
        let (first, second) = if s_first {
            ((s.rule, s.pos), (b.rule, b.pos))
        } else {
            ((b.rule, b.pos), (s.rule, s.pos))
        };
        let id = *self
            .by_branching
            .get(&(first.0, second.0, second.1 - lo))
            .ok_or_else(|| Error::Precondition("overlapping redexes without a critical branching".into()))?;
        let left = u.prefix(lo);
        let right = u.suffix(hi);
        let gc = &self.basis[id.0].confluence;
        let d1 = gc.first_completion.whisker(&left, &right);
        let d2 = gc.second_completion.whisker(&left, &right);

        let mut out = Literal::single(Placed { left, right, basis: id }, if s_first { 1 } else { -1 });
        let (plus, minus) = if s_first { (d2, d1) } else { (d1, d2) };
        for e in plus.steps() {
            let v = self.step_literal(e)?;
            out += v.as_ref();
        }
        for e in minus.steps() {
            let v = self.step_literal(e)?;
            out.add_scaled(v.as_ref(), -1);
        }
        Ok(out)
    }

    fn loop_literal(&mut self, f: &Path) -> Result<Literal> {
        let p = self.conv.presentation();
        let mut total = Literal::zero();
        for step in f.steps() {
            let positive = step.positive(p);
            let e = self.step_literal(&positive)?;
            total.add_scaled(e.as_ref(), step.sign.as_i64());
        }
        Ok(total)
    }

    /// The Π element of a closed path only.
    pub fn pi_of(&mut self, f: &ClosedPath) -> Result<PiElement> {
        let lit = self.loop_literal(f)?;
        self.classify(&lit)
    }

    /// Decomposes `f` as a combination of conjugated, whiskered basis loops.
    pub fn decompose(&mut self, f: &ClosedPath) -> Result<DecompositionCertificate> {
        let lit = self.loop_literal(f)?;
        let base = f.base().clone();
        let (_, to_normal) = self.conv.normalize(&base)?;
        let mut entries = Vec::new();
        for (placed, coef) in lit.iter() {
            let target = self.basis[placed.basis.0]
                .confluence
                .branching
                .overlap
                .framed(&placed.left, &placed.right);
            let (_, from_target) = self.conv.normalize(&target)?;
            let conjugator = to_normal.compose(&from_target.invert())?.free_reduce();
            let sign = if coef > 0 { Sign::Pos } else { Sign::Neg };
            for _ in 0..coef.unsigned_abs() {
                entries.push(CertificateEntry {
                    sign,
                    left: placed.left.clone(),
                    right: placed.right.clone(),
                    basis: placed.basis,
                    conjugator: conjugator.clone(),
                });
            }
        }
        let pi = self.classify(&lit)?;
        Ok(DecompositionCertificate { base, entries, pi })
    }

    pub fn verify(&self, f: &ClosedPath, cert: &DecompositionCertificate) -> Result<VerificationReport> {
        let mut summary = PiElement::zero();
        let mut conjugators_match = cert.base == *f.base();
        for e in &cert.entries {
            summary.add_term(
                PiKey {
                    context: ContextClass::of(&self.conv, &e.left, &e.right)?,
                    basis: e.basis,
                },
                e.sign.as_i64(),
            );
            let Some(b) = self.basis.get(e.basis.0) else {
                conjugators_match = false;
                continue;
            };
            let target = b.confluence.branching.overlap.framed(&e.left, &e.right);
            conjugators_match &= e.conjugator.base() == f.base()
                && *e.conjugator.target() == target
                && e.conjugator.check(self.conv.presentation()).is_ok();
        }
        Ok(VerificationReport {
            summary_matches: summary == cert.pi,
            conjugators_match,
            footprint: footprint(f, &self.conv)?,
            pi_footprint: self.pi_footprint(&cert.pi)?,
        })
    }
}

/// Decomposes a closed path over the generating-confluence basis.
pub fn decompose_loop(f: &ClosedPath, conv: &Convergent<'_>) -> Result<DecompositionCertificate> {
    PiSystem::new(*conv)?.decompose(f)
}

/// Checks a certificate against the footprint of the loop it claims to
/// decompose.
pub fn verify_certificate(
    f: &ClosedPath,
    cert: &DecompositionCertificate,
    conv: &Convergent<'_>,
) -> Result<VerificationReport> {
    PiSystem::new(*conv)?.verify(f, cert)
}
