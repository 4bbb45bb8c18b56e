//! One-step rewriting, the leftmost-lowest normalization strategy, and the
//! word problem for convergent presentations.

use std::fmt;

use crate::critical::Convergent;
use crate::error::{Error, Result};
use crate::order::OrderSpec;
use crate::presentation::{GenId, Presentation, RuleId, Word};
use crate::track::Path;

/// Step budget for normalization when none is given.
pub const DEFAULT_FUEL: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Pos => "+",
            Sign::Neg => "-",
        })
    }
}

/// An occurrence of a rule's left side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Redex {
    pub rule: RuleId,
    pub pos: usize,
}

/// A rule applied forwards (`+`) or backwards (`-`) at a position of its
/// source word. Positions always refer to `source`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RewriteStep {
    pub source: Word,
    pub rule: RuleId,
    pub pos: usize,
    pub sign: Sign,
}

impl RewriteStep {
    pub fn new(source: Word, rule: RuleId, pos: usize, sign: Sign) -> Self {
        RewriteStep {
            source,
            rule,
            pos,
            sign,
        }
    }

    /// The factor of `source` that the step rewrites.
    pub fn consumed<'p>(&self, p: &'p Presentation) -> &'p Word {
        let r = p.rule(self.rule);
        match self.sign {
            Sign::Pos => &r.lhs,
            Sign::Neg => &r.rhs,
        }
    }

    /// The factor that replaces it.
    pub fn produced<'p>(&self, p: &'p Presentation) -> &'p Word {
        let r = p.rule(self.rule);
        match self.sign {
            Sign::Pos => &r.rhs,
            Sign::Neg => &r.lhs,
        }
    }

    pub fn left_context(&self) -> Word {
        self.source.prefix(self.pos)
    }

    pub fn right_context(&self, p: &Presentation) -> Word {
        self.source.suffix(self.pos + self.consumed(p).len())
    }

    pub fn is_valid(&self, p: &Presentation) -> bool {
        self.rule.0 < p.rules().len() && self.source.occurs_at(self.pos, self.consumed(p))
    }

    /// The target word.
    pub fn apply(&self, p: &Presentation) -> Result<Word> {
        if !self.is_valid(p) {
            return Err(Error::MatchFailure {
                rule: p
                    .rules()
                    .get(self.rule.0)
                    .map(|r| r.id.clone())
                    .unwrap_or_else(|| format!("#{}", self.rule.0)),
                pos: self.pos,
            });
        }
        Ok(self.source.splice(self.pos, self.consumed(p).len(), self.produced(p)))
    }

    /// The inverse step, starting at this step's target.
    pub fn inverse(&self, target: Word) -> RewriteStep {
        RewriteStep::new(target, self.rule, self.pos, self.sign.flip())
    }

    /// The same step read in its positive direction (source and target
    /// swapped when the sign is `-`).
    pub fn positive(&self, p: &Presentation) -> RewriteStep {
        match self.sign {
            Sign::Pos => self.clone(),
            Sign::Neg => RewriteStep::new(
                self.apply(p).expect("step must be valid"),
                self.rule,
                self.pos,
                Sign::Pos,
            ),
        }
    }

    pub fn shifted(&self, left: &[GenId], right: &[GenId]) -> RewriteStep {
        RewriteStep::new(
            self.source.framed(left, right),
            self.rule,
            self.pos + left.len(),
            self.sign,
        )
    }
}

/// Free-function form of [`RewriteStep::apply`].
pub fn apply_step(step: &RewriteStep, p: &Presentation) -> Result<Word> {
    step.apply(p)
}

/// All redexes of `w`, sorted by position then rule index.
pub fn find_redexes(w: &[GenId], p: &Presentation) -> Vec<Redex> {
    let mut out = Vec::new();
    for pos in 0..w.len() {
        for rule in p.rule_ids() {
            let lhs = &p.rule(rule).lhs;
            if pos + lhs.len() <= w.len() && w[pos..pos + lhs.len()] == lhs[..] {
                out.push(Redex { rule, pos });
            }
        }
    }
    out
}

/// The redex chosen by the normalization strategy: leftmost position, then
/// lowest rule index.
pub fn leftmost_redex(w: &[GenId], p: &Presentation) -> Option<Redex> {
    (0..w.len()).find_map(|pos| {
        p.rule_ids()
            .find(|&rule| {
                let lhs = &p.rule(rule).lhs;
                pos + lhs.len() <= w.len() && w[pos..pos + lhs.len()] == lhs[..]
            })
            .map(|rule| Redex { rule, pos })
    })
}

/// Normal form and the canonical reduction path to it.
pub fn normalize(w: &Word, p: &Presentation) -> Result<(Word, Path)> {
    normalize_with_fuel(w, p, DEFAULT_FUEL)
}

pub fn normalize_with_fuel(w: &Word, p: &Presentation, fuel: usize) -> Result<(Word, Path)> {
    let mut steps = Vec::new();
    let mut current = w.clone();
    while let Some(Redex { rule, pos }) = leftmost_redex(&current, p) {
        if steps.len() == fuel {
            return Err(Error::FuelExhausted(fuel));
        }
        let step = RewriteStep::new(current, rule, pos, Sign::Pos);
        current = step.apply(p)?;
        steps.push(step);
    }
    Ok((current.clone(), Path::from_parts(w.clone(), steps, current)))
}

/// Normal form only.
pub fn normal_form(w: &[GenId], p: &Presentation, fuel: usize) -> Result<Word> {
    let mut current = Word::from(w);
    let mut used = 0;
    while let Some(Redex { rule, pos }) = leftmost_redex(&current, p) {
        if used == fuel {
            return Err(Error::FuelExhausted(fuel));
        }
        used += 1;
        let r = p.rule(rule);
        current = current.splice(pos, r.lhs.len(), &r.rhs);
    }
    Ok(current)
}

/// Termination evidence: the order used and the rules it fails to orient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminationCertificate {
    pub order: OrderSpec,
    pub violations: Vec<RuleId>,
}

impl TerminationCertificate {
    pub fn is_terminating(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_termination(p: &Presentation) -> TerminationCertificate {
    TerminationCertificate {
        order: p.order().clone(),
        violations: p.validate().violations.into_iter().map(|v| v.rule).collect(),
    }
}

/// Decides `u ≡ v`. Fails unless `p` is certified convergent.
pub fn words_equal(u: &Word, v: &Word, p: &Presentation) -> Result<bool> {
    let conv = Convergent::certify(p)?;
    conv.equal(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn as_pres() -> Presentation {
        parse_presentation("generators: a\nrules:\n r: a a -> a").unwrap()
    }

    fn w(p: &Presentation, s: &str) -> Word {
        p.parse_word(s).unwrap()
    }

    #[test]
    fn redexes() {
        let p = as_pres();
        let r = RuleId(0);
        assert_eq!(
            find_redexes(&w(&p, "aaa"), &p),
            vec![Redex { rule: r, pos: 0 }, Redex { rule: r, pos: 1 }]
        );
        assert!(find_redexes(&w(&p, "a"), &p).is_empty());
        let q = parse_presentation("generators: a b\nrules:\n r: a a -> a").unwrap();
        assert!(find_redexes(&w(&q, "aba"), &q).is_empty());
    }

    #[test]
    fn steps() {
        let p = as_pres();
        let r = RuleId(0);
        assert_eq!(
            RewriteStep::new(w(&p, "aaa"), r, 1, Sign::Pos).apply(&p).unwrap(),
            w(&p, "aa")
        );
        assert_eq!(
            RewriteStep::new(w(&p, "aa"), r, 0, Sign::Neg).apply(&p).unwrap(),
            w(&p, "aaa")
        );
        let q = parse_presentation("generators: a b\nrules:\n r: a a -> a").unwrap();
        assert!(matches!(
            RewriteStep::new(w(&q, "ab"), r, 1, Sign::Pos).apply(&q),
            Err(Error::MatchFailure { .. })
        ));
    }

    #[test]
    fn normalization() {
        let p = as_pres();
        let (nf, path) = normalize(&w(&p, "aaaa"), &p).unwrap();
        assert_eq!(nf, w(&p, "a"));
        assert_eq!(path.len(), 3);
        assert!(path.steps().iter().all(|s| s.pos == 0 && s.sign == Sign::Pos));
        let (nf, path) = normalize(&w(&p, "a"), &p).unwrap();
        assert_eq!(nf, w(&p, "a"));
        assert!(path.is_empty());
    }

    #[test]
    fn fuel_is_enforced() {
        let p = parse_presentation("generators: a\nrules:\n r: a -> a a").unwrap();
        assert_eq!(
            normalize_with_fuel(&w(&p, "a"), &p, 10).unwrap_err(),
            Error::FuelExhausted(10)
        );
    }

    #[test]
    fn termination_reports() {
        assert!(check_termination(&as_pres()).is_terminating());
        let bad = parse_presentation("generators: a\nrules:\n r: a -> a a").unwrap();
        assert_eq!(check_termination(&bad).violations, vec![RuleId(0)]);
        let two =
            parse_presentation("generators: a b\norder: shortlex a < b\nrules:\n r1: a b -> a\n r2: b a -> b").unwrap();
        assert!(check_termination(&two).is_terminating());
    }

    #[test]
    fn word_problem_in_as() {
        let p = as_pres();
        assert!(words_equal(&w(&p, "aaa"), &w(&p, "a"), &p).unwrap());
        assert!(!words_equal(&w(&p, ""), &w(&p, "a"), &p).unwrap());
        let bad = parse_presentation("generators: a b\nrules:\n r1: a b -> a\n r2: b a -> b").unwrap();
        assert_eq!(
            words_equal(&w(&bad, "a"), &w(&bad, "a"), &bad).unwrap_err(),
            Error::NotConvergent
        );
    }
}
