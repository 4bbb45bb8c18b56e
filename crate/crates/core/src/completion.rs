//! Knuth-Bendix completion with inter-reduction, and a bounded check that
//! two presentations over the same alphabet define the same congruence.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};

use crate::critical::critical_branchings;
use crate::error::{Error, Result};
use crate::presentation::{Presentation, Rule, Word};
use crate::rewrite::{check_termination, find_redexes, normal_form, DEFAULT_FUEL};

/// Where an added rule came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// The two normal forms of an unjoinable critical branching.
    Overlap {
        overlap: Word,
        rule1: String,
        rule2: String,
    },
    /// A rule removed during inter-reduction whose sides stayed distinct.
    Collapsed { rule: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompletionEvent {
    Added {
        rule: String,
        lhs: Word,
        rhs: Word,
        provenance: Provenance,
    },
    /// The rule's left side became reducible by `by`.
    Removed { rule: String, by: String },
    /// The rule's right side was replaced by its normal form.
    Simplified { rule: String, old_rhs: Word, new_rhs: Word },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CompletionTrace {
    pub events: Vec<CompletionEvent>,
}

impl CompletionTrace {
    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn added(&self) -> impl Iterator<Item = (&str, &Word, &Word, &Provenance)> {
        self.events.iter().filter_map(|e| match e {
            CompletionEvent::Added {
                rule,
                lhs,
                rhs,
                provenance,
            } => Some((rule.as_str(), lhs, rhs, provenance)),
            _ => None,
        })
    }
}

/// Default bound on the number of rules completion may add.
pub const DEFAULT_COMPLETION_FUEL: usize = 256;

struct Completion<'a> {
    base: &'a Presentation,
    rules: Vec<Rule>,
    trace: CompletionTrace,
    used_names: HashSet<String>,
    next_name: usize,
    added: usize,
    fuel: usize,
}

impl Completion<'_> {
    fn current(&self) -> Presentation {
        self.base
            .with_rules(self.rules.clone())
            .expect("completion keeps rules well formed")
    }

    fn fresh_name(&mut self) -> String {
        loop {
            self.next_name += 1;
            let name = format!("kb{}", self.next_name);
            if self.used_names.insert(name.clone()) {
                return name;
            }
        }
    }

    fn orient(&self, u: Word, v: Word) -> Result<(Word, Word)> {
        match self.base.order().compare(&u, &v) {
            Ordering::Greater => Ok((u, v)),
            Ordering::Less => Ok((v, u)),
            Ordering::Equal => Err(Error::Unorientable {
                lhs: self.base.display_word(&u).to_string(),
                rhs: self.base.display_word(&v).to_string(),
            }),
        }
    }

    fn add_equations(&mut self, mut pending: VecDeque<(Word, Word, Provenance)>) -> Result<()> {
        while let Some((u, v, provenance)) = pending.pop_front() {
            let cur = self.current();
            let u = normal_form(&u, &cur, DEFAULT_FUEL)?;
            let v = normal_form(&v, &cur, DEFAULT_FUEL)?;
            if u == v {
                continue;
            }
            if self.added == self.fuel {
                return Err(Error::FuelExhausted(self.fuel));
            }
            self.added += 1;
            let (lhs, rhs) = self.orient(u, v)?;
            let name = self.fresh_name();
            self.trace.events.push(CompletionEvent::Added {
                rule: name.clone(),
                lhs: lhs.clone(),
                rhs: rhs.clone(),
                provenance,
            });

            // Rules whose left side contains the new left side are retired
            // and their equation re-queued.
            let mut kept = Vec::with_capacity(self.rules.len() + 1);
            for r in std::mem::take(&mut self.rules) {
                if r.lhs.windows(lhs.len()).any(|f| f == &lhs[..]) {
                    self.trace.events.push(CompletionEvent::Removed {
                        rule: r.id.clone(),
                        by: name.clone(),
                    });
                    pending.push_back((r.lhs, r.rhs, Provenance::Collapsed { rule: r.id }));
                } else {
                    kept.push(r);
                }
            }
            kept.push(Rule { id: name, lhs, rhs });
            self.rules = kept;

            let cur = self.current();
            for i in 0..self.rules.len() {
                let nf = normal_form(&self.rules[i].rhs, &cur, DEFAULT_FUEL)?;
                if nf != self.rules[i].rhs {
                    let old_rhs = std::mem::replace(&mut self.rules[i].rhs, nf.clone());
                    self.trace.events.push(CompletionEvent::Simplified {
                        rule: self.rules[i].id.clone(),
                        old_rhs,
                        new_rhs: nf,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Completes a terminating presentation into a convergent one presenting
/// the same monoid. Unjoinable critical branchings are processed in sorted
/// order, re-enumerating after each addition; `fuel` bounds the number of
/// added rules.
pub fn knuth_bendix(p: &Presentation, fuel: usize) -> Result<(Presentation, CompletionTrace)> {
    let term = check_termination(p);
    if !term.is_terminating() {
        return Err(Error::NotTerminating {
            rules: term.violations.iter().map(|&r| p.rule(r).id.clone()).collect(),
        });
    }
    let mut state = Completion {
        base: p,
        rules: p.rules().to_vec(),
        trace: CompletionTrace::default(),
        used_names: p.rules().iter().map(|r| r.id.clone()).collect(),
        next_name: 0,
        added: 0,
        fuel,
    };
    loop {
        let cur = state.current();
        let mut unjoinable = None;
        for b in critical_branchings(&cur) {
            let n1 = normal_form(&b.first_step().apply(&cur)?, &cur, DEFAULT_FUEL)?;
            let n2 = normal_form(&b.second_step().apply(&cur)?, &cur, DEFAULT_FUEL)?;
            if n1 != n2 {
                let provenance = Provenance::Overlap {
                    overlap: b.overlap.clone(),
                    rule1: cur.rule(b.rule1).id.clone(),
                    rule2: cur.rule(b.rule2).id.clone(),
                };
                unjoinable = Some((n1, n2, provenance));
                break;
            }
        }
        match unjoinable {
            None => break,
            Some(eq) => state.add_equations(VecDeque::from([eq]))?,
        }
    }
    let out = state.current();
    Ok((out, state.trace))
}

/// Result of [`same_congruence`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceReport {
    pub words_checked: usize,
    /// Two words identified by exactly one of the presentations; the flag
    /// says whether the first presentation identifies them.
    pub witness: Option<(Word, Word, bool)>,
}

impl CongruenceReport {
    pub fn agree(&self) -> bool {
        self.witness.is_none()
    }
}

/// Compares the congruences of `p` and `q` on words of length at most
/// `max_len`. Each congruence is closed over words up to `max_len` plus the
/// longest rule side, so derivations passing through slightly longer words
/// are found. Derivations that need longer detours are missed, so a witness
/// is only evidence of disagreement, while agreement is exact on the bounded
/// closures.
pub fn same_congruence(p: &Presentation, q: &Presentation, max_len: usize) -> Result<CongruenceReport> {
    if p.generators() != q.generators() {
        return Err(Error::Precondition("presentations must share their alphabet".into()));
    }
    let words = p.words_up_to(max_len);
    let cp = bounded_classes(p, max_len);
    let cq = bounded_classes(q, max_len);
    for (i, w) in words.iter().enumerate() {
        for v in &words[..i] {
            let in_p = cp[w] == cp[v];
            let in_q = cq[w] == cq[v];
            if in_p != in_q {
                return Ok(CongruenceReport {
                    words_checked: words.len(),
                    witness: Some((w.clone(), v.clone(), in_p)),
                });
            }
        }
    }
    Ok(CongruenceReport {
        words_checked: words.len(),
        witness: None,
    })
}

/// Class representative for each word of length up to `max_len` + the
/// longest rule side, joining words related by one rewriting step.
fn bounded_classes(p: &Presentation, max_len: usize) -> HashMap<Word, usize> {
    let window = p
        .rules()
        .iter()
        .map(|r| r.lhs.len().max(r.rhs.len()))
        .max()
        .unwrap_or(0);
    let universe = p.words_up_to(max_len + window);
    let index: HashMap<Word, usize> = universe.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut parent: Vec<usize> = (0..universe.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, w) in universe.iter().enumerate() {
        for redex in find_redexes(w, p) {
            let r = p.rule(redex.rule);
            let next = w.splice(redex.pos, r.lhs.len(), &r.rhs);
            if let Some(&j) = index.get(&next) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut out = HashMap::new();
    for (i, w) in universe.into_iter().enumerate() {
        if w.len() <= max_len {
            out.insert(w, find(&mut parent, i));
        }
    }
    out
}

/// Searches for a mixed-direction derivation from `u` to `v` through words
/// of length at most `max_len`.
pub fn derivable(p: &Presentation, u: &Word, v: &Word, max_len: usize) -> bool {
    let mut seen = HashSet::from([u.clone()]);
    let mut queue = VecDeque::from([u.clone()]);
    while let Some(w) = queue.pop_front() {
        if &w == v {
            return true;
        }
        for r in p.rules() {
            for (from, to) in [(&r.lhs, &r.rhs), (&r.rhs, &r.lhs)] {
                for pos in 0..=w.len() {
                    if w.occurs_at(pos, from) {
                        let next = w.splice(pos, from.len(), to);
                        if next.len() <= max_len && seen.insert(next.clone()) {
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critical::{brute_force_confluence, is_convergent};
    use crate::presentation::parse_presentation;

    fn pres(rules: &str) -> Presentation {
        parse_presentation(&format!("generators: a b\norder: shortlex a < b\nrules:\n{rules}")).unwrap()
    }

    fn rule_set(p: &Presentation) -> Vec<(String, String)> {
        let mut v: Vec<_> = p
            .rules()
            .iter()
            .map(|r| (p.display_word(&r.lhs).to_string(), p.display_word(&r.rhs).to_string()))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn completes_the_two_rule_system() {
        let p = pres(" r1: a b -> a\n r2: b a -> b");
        let (q, trace) = knuth_bendix(&p, 256).unwrap();
        let expected: Vec<(String, String)> = [("aa", "a"), ("ab", "a"), ("ba", "b"), ("bb", "b")]
            .iter()
            .map(|(l, r)| (l.to_string(), r.to_string()))
            .collect();
        assert_eq!(rule_set(&q), expected);
        assert!(is_convergent(&q).is_convergent());
        assert!(brute_force_confluence(&q, 6).is_confluent());
        let added: Vec<_> = trace.added().collect();
        assert_eq!(added.len(), 2);
        assert!(matches!(added[0].3, Provenance::Overlap { overlap, .. } if *overlap == p.parse_word("aba").unwrap()));
        assert!(matches!(added[1].3, Provenance::Overlap { overlap, .. } if *overlap == p.parse_word("bab").unwrap()));
        for (_, lhs, rhs, _) in added {
            assert!(derivable(&p, lhs, rhs, 6));
        }
        assert!(same_congruence(&p, &q, 5).unwrap().agree());
    }

    #[test]
    fn convergent_input_is_a_fixed_point() {
        let as_pres = parse_presentation("generators: a\nrules:\n r: a a -> a").unwrap();
        let (q, trace) = knuth_bendix(&as_pres, 256).unwrap();
        assert_eq!(q, as_pres);
        assert!(trace.is_empty());
        let (q, trace) = knuth_bendix(&pres(""), 256).unwrap();
        assert!(q.rules().is_empty() && trace.is_empty());

        let (done, _) = knuth_bendix(&pres(" r1: a b -> a\n r2: b a -> b"), 256).unwrap();
        let (again, trace) = knuth_bendix(&done, 256).unwrap();
        assert_eq!(again, done);
        assert!(trace.is_empty());
    }

    #[test]
    fn inter_reduction_retires_rules() {
        // kb1: aaaa -> aa is learnt first, then subsumed by kb3: aaa -> a
        let p = pres(" r1: a a b -> b\n r2: b a -> a a\n r3: a b a -> a");
        let (q, trace) = knuth_bendix(&p, 256).unwrap();
        assert!(is_convergent(&q).is_convergent());
        assert!(brute_force_confluence(&q, 6).is_confluent());
        assert!(same_congruence(&p, &q, 4).unwrap().agree());
        assert!(trace
            .events
            .iter()
            .any(|e| matches!(e, CompletionEvent::Removed { rule, by } if rule == "kb1" && by == "kb3")));
        assert!(q.rule_by_name("kb1").is_none());
        assert!(q.rule_by_name("kb3").is_some());
    }

    #[test]
    fn fuel_and_termination_errors() {
        let bad = parse_presentation("generators: a\nrules:\n r: a -> a a").unwrap();
        assert!(matches!(knuth_bendix(&bad, 10), Err(Error::NotTerminating { .. })));
        let p = pres(" r1: a b -> a\n r2: b a -> b");
        assert_eq!(knuth_bendix(&p, 1).unwrap_err(), Error::FuelExhausted(1));
    }

    #[test]
    fn congruence_comparison() {
        let as_pres = parse_presentation("generators: a\nrules:\n r: a a -> a").unwrap();
        let free = parse_presentation("generators: a\nrules:").unwrap();
        let r = same_congruence(&as_pres, &free, 5).unwrap();
        let (u, v, in_first) = r.witness.unwrap();
        assert_eq!(u, as_pres.parse_word("aa").unwrap());
        assert_eq!(v, as_pres.parse_word("a").unwrap());
        assert!(in_first);
        assert!(same_congruence(&as_pres, &as_pres, 5).unwrap().agree());
    }
}
