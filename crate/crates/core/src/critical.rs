//! Critical branchings, generating confluences, and convergence
//! certification.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::presentation::{GenId, Presentation, RuleId, Word};
use crate::rewrite::{
    check_termination, leftmost_redex, normal_form, normalize_with_fuel, Redex, RewriteStep, Sign,
    TerminationCertificate, DEFAULT_FUEL,
};
use crate::track::{ClosedPath, Path};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BranchKind {
    ProperOverlap,
    Containment,
}

impl fmt::Display for BranchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BranchKind::ProperOverlap => "overlap",
            BranchKind::Containment => "containment",
        })
    }
}

/// Two distinct redexes of `overlap`: `rule1` at position 0 and `rule2` at
/// `offset`, whose left sides together cover the whole word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CriticalBranching {
    pub rule1: RuleId,
    pub rule2: RuleId,
    pub offset: usize,
    pub overlap: Word,
    pub kind: BranchKind,
}

impl CriticalBranching {
    pub fn first_step(&self) -> RewriteStep {
        RewriteStep::new(self.overlap.clone(), self.rule1, 0, Sign::Pos)
    }

    pub fn second_step(&self) -> RewriteStep {
        RewriteStep::new(self.overlap.clone(), self.rule2, self.offset, Sign::Pos)
    }
}

/// All critical branchings, sorted by `(rule1, rule2, offset)`.
///
/// Proper overlaps put the leftmost redex first. For containments the
/// enclosing rule comes first; two rules with the same left side are
/// reported once, lower index first.
pub fn critical_branchings(p: &Presentation) -> Vec<CriticalBranching> {
    let mut out = Vec::new();
    for i in p.rule_ids() {
        let l1 = &p.rule(i).lhs;
        for j in p.rule_ids() {
            let l2 = &p.rule(j).lhs;
            for offset in 0..l1.len() {
                let tail = &l1[offset..];
                if tail.len() < l2.len() {
                    if offset > 0 && l2.starts_with(tail) {
                        out.push(CriticalBranching {
                            rule1: i,
                            rule2: j,
                            offset,
                            overlap: l1.concat(&l2[tail.len()..]),
                            kind: BranchKind::ProperOverlap,
                        });
                    }
                } else if tail.starts_with(l2) {
                    let same_lhs = offset == 0 && l1.len() == l2.len();
                    if (i == j && offset == 0) || (same_lhs && i > j) {
                        continue;
                    }
                    out.push(CriticalBranching {
                        rule1: i,
                        rule2: j,
                        offset,
                        overlap: l1.clone(),
                        kind: BranchKind::Containment,
                    });
                }
            }
        }
    }
    out
}

/// A critical branching closed up by normalizing both branches with the
/// leftmost-lowest strategy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingConfluence {
    pub branching: CriticalBranching,
    pub first: Path,
    pub second: Path,
    pub first_completion: Path,
    pub second_completion: Path,
    pub normal_form: Word,
    /// `(first ⋆ first_completion) ⋆ (second ⋆ second_completion)⁻`, free-reduced.
    pub basis_loop: ClosedPath,
}

pub fn generating_confluence(b: &CriticalBranching, p: &Presentation) -> Result<GeneratingConfluence> {
    generating_confluence_with_fuel(b, p, DEFAULT_FUEL)
}

pub fn generating_confluence_with_fuel(
    b: &CriticalBranching,
    p: &Presentation,
    fuel: usize,
) -> Result<GeneratingConfluence> {
    let single = |step: RewriteStep| -> Result<Path> {
        let target = step.apply(p)?;
        Ok(Path::from_parts(step.source.clone(), vec![step], target))
    };
    let first = single(b.first_step())?;
    let second = single(b.second_step())?;
    let (nf1, first_completion) = normalize_with_fuel(first.target(), p, fuel)?;
    let (nf2, second_completion) = normalize_with_fuel(second.target(), p, fuel)?;
    if nf1 != nf2 {
        return Err(Error::NotConfluent {
            overlap: p.display_word(&b.overlap).to_string(),
            left: p.display_word(&nf1).to_string(),
            right: p.display_word(&nf2).to_string(),
        });
    }
    let left = first.compose(&first_completion)?;
    let right = second.compose(&second_completion)?;
    let basis_loop = ClosedPath::new(left.compose(&right.invert())?.free_reduce())?;
    Ok(GeneratingConfluence {
        branching: b.clone(),
        first,
        second,
        first_completion,
        second_completion,
        normal_form: nf1,
        basis_loop,
    })
}

/// A critical branching whose branches normalize to different words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfluenceFailure {
    pub branching: CriticalBranching,
    pub first_normal_form: Word,
    pub second_normal_form: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LocalConfluenceReport {
    pub branchings: usize,
    pub failures: Vec<ConfluenceFailure>,
}

impl LocalConfluenceReport {
    pub fn is_confluent(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Joins every critical branching. Disjoint redexes always commute, so these
/// are the only local branchings that need checking. Requires termination;
/// `fuel` bounds each normalization.
pub fn is_locally_confluent(p: &Presentation) -> Result<LocalConfluenceReport> {
    local_confluence_with_fuel(p, DEFAULT_FUEL)
}

pub fn local_confluence_with_fuel(p: &Presentation, fuel: usize) -> Result<LocalConfluenceReport> {
    let branchings = critical_branchings(p);
    let mut failures = Vec::new();
    for b in &branchings {
        let t1 = b.first_step().apply(p)?;
        let t2 = b.second_step().apply(p)?;
        let n1 = normal_form(&t1, p, fuel)?;
        let n2 = normal_form(&t2, p, fuel)?;
        if n1 != n2 {
            failures.push(ConfluenceFailure {
                branching: b.clone(),
                first_normal_form: n1,
                second_normal_form: n2,
            });
        }
    }
    Ok(LocalConfluenceReport {
        branchings: branchings.len(),
        failures,
    })
}

/// Termination and local confluence together. Local confluence is only
/// checked when termination holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceCertificate {
    pub termination: TerminationCertificate,
    pub local_confluence: Option<LocalConfluenceReport>,
}

impl ConvergenceCertificate {
    pub fn is_terminating(&self) -> bool {
        self.termination.is_terminating()
    }

    pub fn is_locally_confluent(&self) -> bool {
        self.local_confluence
            .as_ref()
            .is_some_and(LocalConfluenceReport::is_confluent)
    }

    pub fn is_convergent(&self) -> bool {
        self.is_terminating() && self.is_locally_confluent()
    }
}

pub fn is_convergent(p: &Presentation) -> ConvergenceCertificate {
    let termination = check_termination(p);
    let local_confluence = termination
        .is_terminating()
        .then(|| is_locally_confluent(p).expect("terminating systems normalize"));
    ConvergenceCertificate {
        termination,
        local_confluence,
    }
}

/// A presentation together with evidence that it is convergent. Word
/// operations on it use normal forms.
#[derive(Debug, Clone, Copy)]
pub struct Convergent<'p> {
    pres: &'p Presentation,
    fuel: usize,
}

impl<'p> Convergent<'p> {
    /// Certifies convergence: rules oriented by the order and every critical
    /// branching joinable.
    pub fn certify(p: &'p Presentation) -> Result<Self> {
        if is_convergent(p).is_convergent() {
            Ok(Convergent {
                pres: p,
                fuel: DEFAULT_FUEL,
            })
        } else {
            Err(Error::NotConvergent)
        }
    }

    /// Skips the order check and trusts termination; normalization then
    /// stops with an error once `fuel` steps are used.
    pub fn assume_terminating(p: &'p Presentation, fuel: usize) -> Result<Self> {
        if local_confluence_with_fuel(p, fuel)?.is_confluent() {
            Ok(Convergent { pres: p, fuel })
        } else {
            Err(Error::NotConvergent)
        }
    }

    /// The same certificate with another normalization budget.
    pub fn with_fuel(self, fuel: usize) -> Self {
        Convergent { fuel, ..self }
    }

    pub fn presentation(&self) -> &'p Presentation {
        self.pres
    }

    pub fn fuel(&self) -> usize {
        self.fuel
    }

    pub fn normal_form(&self, w: &[GenId]) -> Result<Word> {
        normal_form(w, self.pres, self.fuel)
    }

    pub fn normalize(&self, w: &Word) -> Result<(Word, Path)> {
        normalize_with_fuel(w, self.pres, self.fuel)
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Result<bool> {
        Ok(self.normal_form(u)? == self.normal_form(v)?)
    }

    pub fn first_redex(&self, w: &[GenId]) -> Option<Redex> {
        leftmost_redex(w, self.pres)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceReport {
    pub words_checked: usize,
    /// A word with more than one reachable normal form, and those forms.
    pub counterexample: Option<(Word, Vec<Word>)>,
}

impl BruteForceReport {
    pub fn is_confluent(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks confluence directly: every word of length at most `max_len` must
/// reach exactly one normal form along all reduction sequences. Requires a
/// terminating presentation.
pub fn brute_force_confluence(p: &Presentation, max_len: usize) -> BruteForceReport {
    let mut memo: HashMap<Word, BTreeSet<Word>> = HashMap::new();
    let words = p.words_up_to(max_len);
    let words_checked = words.len();
    for w in words {
        let nfs = reachable_normal_forms(&w, p, &mut memo);
        if nfs.len() > 1 {
            return BruteForceReport {
                words_checked,
                counterexample: Some((w, nfs.into_iter().collect())),
            };
        }
    }
    BruteForceReport {
        words_checked,
        counterexample: None,
    }
}

fn reachable_normal_forms(w: &Word, p: &Presentation, memo: &mut HashMap<Word, BTreeSet<Word>>) -> BTreeSet<Word> {
    if let Some(s) = memo.get(w) {
        return s.clone();
    }
    let redexes = crate::rewrite::find_redexes(w, p);
    let mut out = BTreeSet::new();
    if redexes.is_empty() {
        out.insert(w.clone());
    }
    for Redex { rule, pos } in redexes {
        let r = p.rule(rule);
        let next = w.splice(pos, r.lhs.len(), &r.rhs);
        out.extend(reachable_normal_forms(&next, p, memo));
    }
    memo.insert(w.clone(), out.clone());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn pres(rules: &str) -> Presentation {
        parse_presentation(&format!("generators: a b\norder: shortlex a < b\nrules:\n{rules}")).unwrap()
    }

    fn as_pres() -> Presentation {
        parse_presentation("generators: a\nrules:\n r: a a -> a").unwrap()
    }

    #[test]
    fn as_has_one_critical_pair() {
        let p = as_pres();
        let cb = critical_branchings(&p);
        assert_eq!(cb.len(), 1);
        assert_eq!(cb[0].rule1, RuleId(0));
        assert_eq!(cb[0].rule2, RuleId(0));
        assert_eq!(cb[0].offset, 1);
        assert_eq!(cb[0].overlap, p.parse_word("aaa").unwrap());
        assert_eq!(cb[0].kind, BranchKind::ProperOverlap);
    }

    #[test]
    fn free_monoid_has_none() {
        assert!(critical_branchings(&pres("")).is_empty());
    }

    #[test]
    fn two_rule_overlaps() {
        let p = pres(" r1: a b -> a\n r2: b a -> b");
        let cb = critical_branchings(&p);
        assert_eq!(cb.len(), 2);
        assert_eq!((cb[0].rule1, cb[0].rule2, cb[0].offset), (RuleId(0), RuleId(1), 1));
        assert_eq!(cb[0].overlap, p.parse_word("aba").unwrap());
        assert_eq!((cb[1].rule1, cb[1].rule2, cb[1].offset), (RuleId(1), RuleId(0), 1));
        assert_eq!(cb[1].overlap, p.parse_word("bab").unwrap());
    }

    #[test]
    fn containments() {
        let p = pres(" r1: a b a -> a\n r2: b -> a\n r3: a b a -> b");
        let cb = critical_branchings(&p);
        let contain: Vec<_> = cb
            .iter()
            .filter(|b| b.kind == BranchKind::Containment)
            .map(|b| (b.rule1.0, b.rule2.0, b.offset))
            .collect();
        // r2 inside r1 and r3; r1 and r3 share a left side (reported once)
        assert_eq!(contain, vec![(0, 1, 1), (0, 2, 0), (2, 1, 1)]);
        for b in &cb {
            assert_ne!(b.first_step(), b.second_step());
            if b.kind == BranchKind::ProperOverlap {
                assert!(b.overlap.len() < p.rule(b.rule1).lhs.len() + p.rule(b.rule2).lhs.len());
            }
        }
    }

    #[test]
    fn as_generating_confluence() {
        let p = as_pres();
        let gc = generating_confluence(&critical_branchings(&p)[0], &p).unwrap();
        let r = RuleId(0);
        assert_eq!(gc.first.steps()[0].pos, 0);
        assert_eq!(gc.second.steps()[0].pos, 1);
        assert_eq!(gc.first_completion.len(), 1);
        assert_eq!(gc.second_completion.len(), 1);
        let expected =
            Path::from_steps(p.parse_word("aaa").unwrap(), [(r, 0, Sign::Pos), (r, 1, Sign::Neg)], &p).unwrap();
        assert_eq!(gc.basis_loop.path(), &expected);
    }

    #[test]
    fn unjoinable_branching() {
        let p = pres(" r1: a b -> a\n r2: b a -> b");
        let err = generating_confluence(&critical_branchings(&p)[0], &p).unwrap_err();
        assert_eq!(
            err,
            Error::NotConfluent {
                overlap: "aba".into(),
                left: "aa".into(),
                right: "a".into()
            }
        );
        let report = is_locally_confluent(&p).unwrap();
        assert_eq!(report.failures.len(), 2);
    }

    #[test]
    fn coinciding_branches_leave_a_two_step_loop() {
        let p = pres(" r1: a a -> a\n r2: a a -> a");
        let cb = critical_branchings(&p);
        let same = cb.iter().find(|b| b.kind == BranchKind::Containment).unwrap();
        let gc = generating_confluence(same, &p).unwrap();
        assert!(gc.first_completion.is_empty() && gc.second_completion.is_empty());
        assert_eq!(gc.basis_loop.len(), 2);
    }

    #[test]
    fn convergence() {
        assert!(is_convergent(&as_pres()).is_convergent());
        assert!(is_locally_confluent(&pres("")).unwrap().is_confluent());
        let bad = parse_presentation("generators: a\nrules:\n r: a -> a a").unwrap();
        let c = is_convergent(&bad);
        assert!(!c.is_terminating() && !c.is_convergent());
        let done = pres(" r1: a b -> a\n r2: b a -> b\n r3: a a -> a\n r4: b b -> b");
        assert!(is_convergent(&done).is_convergent());
        assert_eq!(critical_branchings(&done).len(), 8);
    }

    #[test]
    fn brute_force() {
        assert!(brute_force_confluence(&as_pres(), 6).is_confluent());
        let r = brute_force_confluence(&pres(" r1: a b -> a\n r2: b a -> b"), 3);
        let (w, nfs) = r.counterexample.unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(nfs.len(), 2);
        assert!(brute_force_confluence(&pres(""), 4).is_confluent());
    }

    #[test]
    fn brute_force_witness_is_aba() {
        let p = pres(" r1: a b -> a\n r2: b a -> b");
        let (w, _) = brute_force_confluence(&p, 3).counterexample.unwrap();
        assert_eq!(w, p.parse_word("aba").unwrap());
    }
}
