//! Rewriting paths: composition, inversion, whiskering, free cancellation,
//! exchange of disjoint steps and conjugation.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::presentation::{GenId, Presentation, RuleId, Word};
use crate::rewrite::{RewriteStep, Sign};

/// A chain of rewriting steps. Each step records its own source word; the
/// first source is `base` and every later source is the previous target.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    base: Word,
    steps: Vec<RewriteStep>,
    target: Word,
}

impl Path {
    pub fn identity(w: Word) -> Path {
        Path {
            target: w.clone(),
            base: w,
            steps: Vec::new(),
        }
    }

    pub(crate) fn from_parts(base: Word, steps: Vec<RewriteStep>, target: Word) -> Path {
        Path { base, steps, target }
    }

    /// Builds a path from `base` by applying `(rule, position, sign)` triples
    /// in turn.
    pub fn from_steps(
        base: Word,
        steps: impl IntoIterator<Item = (RuleId, usize, Sign)>,
        p: &Presentation,
    ) -> Result<Path> {
        let mut path = Path::identity(base);
        for (rule, pos, sign) in steps {
            path.push(rule, pos, sign, p)?;
        }
        Ok(path)
    }

    pub fn push(&mut self, rule: RuleId, pos: usize, sign: Sign, p: &Presentation) -> Result<()> {
        let step = RewriteStep::new(self.target.clone(), rule, pos, sign);
        self.target = step.apply(p)?;
        self.steps.push(step);
        Ok(())
    }

    pub fn base(&self) -> &Word {
        &self.base
    }

    pub fn target(&self) -> &Word {
        &self.target
    }

    pub fn steps(&self) -> &[RewriteStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.base == self.target
    }

    /// Target of step `i`.
    pub fn step_target(&self, i: usize) -> &Word {
        self.steps.get(i + 1).map(|s| &s.source).unwrap_or(&self.target)
    }

    /// Checks every step against `p` and the chaining condition.
    pub fn check(&self, p: &Presentation) -> Result<()> {
        if self.steps.first().is_some_and(|s| s.source != self.base) {
            return Err(mismatch(&self.base, &self.steps[0].source));
        }
        for (i, step) in self.steps.iter().enumerate() {
            let next = step.apply(p)?;
            if &next != self.step_target(i) {
                return Err(mismatch(&next, self.step_target(i)));
            }
        }
        if self.steps.is_empty() && self.base != self.target {
            return Err(mismatch(&self.base, &self.target));
        }
        Ok(())
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Path) -> Result<Path> {
        if self.target != other.base {
            return Err(mismatch(&self.target, &other.base));
        }
        let mut steps = Vec::with_capacity(self.len() + other.len());
        steps.extend_from_slice(&self.steps);
        steps.extend_from_slice(&other.steps);
        Ok(Path {
            base: self.base.clone(),
            steps,
            target: other.target.clone(),
        })
    }

    pub fn invert(&self) -> Path {
        let steps = (0..self.len())
            .rev()
            .map(|i| self.steps[i].inverse(self.step_target(i).clone()))
            .collect();
        Path {
            base: self.target.clone(),
            steps,
            target: self.base.clone(),
        }
    }

    /// The path in context `left · _ · right`.
    pub fn whisker(&self, left: &[GenId], right: &[GenId]) -> Path {
        Path {
            base: self.base.framed(left, right),
            steps: self.steps.iter().map(|s| s.shifted(left, right)).collect(),
            target: self.target.framed(left, right),
        }
    }

    /// Horizontal composite: `self` acting on the left factor, then `other`
    /// on the right factor.
    pub fn horizontal(&self, other: &Path) -> Path {
        let first = self.whisker(&[], &other.base);
        let second = other.whisker(&self.target, &[]);
        first.compose(&second).expect("horizontal composite is well formed")
    }

    /// Cancels adjacent mutually inverse steps until none remain.
    pub fn free_reduce(&self) -> Path {
        let mut kept: Vec<RewriteStep> = Vec::with_capacity(self.len());
        for step in &self.steps {
            if let Some(top) = kept.last() {
                if top.rule == step.rule && top.pos == step.pos && top.sign != step.sign {
                    kept.pop();
                    continue;
                }
            }
            kept.push(step.clone());
        }
        Path {
            base: self.base.clone(),
            steps: kept,
            target: self.target.clone(),
        }
    }

    /// Swaps steps `i` and `i + 1` when they rewrite disjoint factors,
    /// re-basing positions. If the two factors touch only through an empty
    /// factor, the second step is read as lying to the left of the first.
    pub fn exchange_swap(&self, i: usize, p: &Presentation) -> Result<Path> {
        if i + 1 >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            });
        }
        let s = &self.steps[i];
        let t = &self.steps[i + 1];
        let (cons_s, prod_s) = (s.consumed(p).len(), s.produced(p).len());
        let (cons_t, prod_t) = (t.consumed(p).len(), t.produced(p).len());
        let (ps, pt) = (s.pos, t.pos);

        let (first_pos, second_pos) = if pt + cons_t <= ps {
            (pt, ps + prod_t - cons_t)
        } else if pt >= ps + prod_s {
            (pt - prod_s + cons_s, ps)
        } else {
            return Err(Error::Overlap { index: i });
        };
        let first = RewriteStep::new(s.source.clone(), t.rule, first_pos, t.sign);
        let mid = first.apply(p)?;
        let second = RewriteStep::new(mid, s.rule, second_pos, s.sign);
        debug_assert_eq!(&second.apply(p)?, self.step_target(i + 1));

        let mut steps = self.steps.clone();
        steps[i] = first;
        steps[i + 1] = second;
        Ok(Path {
            base: self.base.clone(),
            steps,
            target: self.target.clone(),
        })
    }
}

fn mismatch(expected: &[GenId], found: &[GenId]) -> Error {
    let show = |w: &[GenId]| w.iter().map(|g| format!("#{}", g.0)).collect::<Vec<_>>().join(" ");
    Error::BoundaryMismatch {
        expected: show(expected),
        found: show(found),
    }
}

/// A path whose target is its base.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClosedPath(Path);

impl ClosedPath {
    pub fn new(path: Path) -> Result<ClosedPath> {
        if !path.is_closed() {
            return Err(mismatch(path.base(), path.target()));
        }
        Ok(ClosedPath(path))
    }

    pub fn empty(base: Word) -> ClosedPath {
        ClosedPath(Path::identity(base))
    }

    pub fn path(&self) -> &Path {
        &self.0
    }

    pub fn into_path(self) -> Path {
        self.0
    }

    pub fn invert(&self) -> ClosedPath {
        ClosedPath(self.0.invert())
    }

    pub fn free_reduce(&self) -> ClosedPath {
        ClosedPath(self.0.free_reduce())
    }

    pub fn whisker(&self, left: &[GenId], right: &[GenId]) -> ClosedPath {
        ClosedPath(self.0.whisker(left, right))
    }
}

impl Deref for ClosedPath {
    type Target = Path;
    fn deref(&self) -> &Path {
        &self.0
    }
}

/// `g ⋆ f ⋆ g⁻`, free-reduced: the loop `f` transported along `g` to the
/// source of `g`.
pub fn conjugate(f: &ClosedPath, g: &Path) -> Result<ClosedPath> {
    let path = g.compose(f)?.compose(&g.invert())?;
    ClosedPath::new(path.free_reduce())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;
    use crate::rewrite::normalize;

    fn as_pres() -> Presentation {
        parse_presentation("generators: a\nrules:\n r: a a -> a").unwrap()
    }

    fn path(p: &Presentation, base: &str, steps: &[(i8, usize)]) -> Path {
        Path::from_steps(
            p.parse_word(base).unwrap(),
            steps
                .iter()
                .map(|&(s, pos)| (RuleId(0), pos, if s > 0 { Sign::Pos } else { Sign::Neg })),
            p,
        )
        .unwrap()
    }

    #[test]
    fn targets() {
        let p = as_pres();
        assert_eq!(path(&p, "aa", &[]).target(), &p.parse_word("aa").unwrap());
        assert_eq!(path(&p, "aaa", &[(1, 0), (1, 0)]).target(), &p.parse_word("a").unwrap());
        assert_eq!(path(&p, "aa", &[(-1, 0)]).target(), &p.parse_word("aaa").unwrap());
    }

    #[test]
    fn composition() {
        let p = as_pres();
        let a = path(&p, "aaa", &[(1, 0)]);
        let b = path(&p, "aa", &[(1, 0)]);
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.len(), 2);
        assert_eq!(ab.target(), &p.parse_word("a").unwrap());
        assert_eq!(a.compose(&Path::identity(a.target().clone())).unwrap(), a);
        assert!(matches!(
            a.compose(&path(&p, "aaa", &[(1, 0)])),
            Err(Error::BoundaryMismatch { .. })
        ));
        assert!(ab.check(&p).is_ok());
    }

    #[test]
    fn inversion() {
        let p = as_pres();
        let a = path(&p, "aaa", &[(1, 0)]);
        assert_eq!(a.invert(), path(&p, "aa", &[(-1, 0)]));
        let e = Path::identity(p.parse_word("aa").unwrap());
        assert_eq!(e.invert(), e);
        let long = path(&p, "aaaa", &[(1, 2), (-1, 0), (1, 1)]);
        assert_eq!(long.invert().invert(), long);
        assert!(long.compose(&long.invert()).unwrap().free_reduce().is_empty());
    }

    #[test]
    fn whiskering() {
        let p = as_pres();
        let a = p.parse_word("a").unwrap();
        let x = path(&p, "aa", &[(1, 0)]);
        assert_eq!(x.whisker(&a, &[]), path(&p, "aaa", &[(1, 1)]));
        assert_eq!(x.whisker(&[], &[]), x);
        let y = path(&p, "a", &[(-1, 0)]);
        assert_eq!(
            x.compose(&y).unwrap().whisker(&a, &a),
            x.whisker(&a, &a).compose(&y.whisker(&a, &a)).unwrap()
        );
    }

    #[test]
    fn free_reduction() {
        let p = as_pres();
        let x = path(&p, "aaa", &[(1, 0), (-1, 0)]);
        assert!(x.free_reduce().is_empty());
        let beta = path(&p, "aaa", &[(1, 0), (1, 0), (-1, 0), (-1, 1)]);
        assert_eq!(beta.free_reduce(), path(&p, "aaa", &[(1, 0), (-1, 1)]));
        let reduced = beta.free_reduce();
        assert_eq!(reduced.free_reduce(), reduced);
    }

    #[test]
    fn exchange() {
        let p = as_pres();
        let x = path(&p, "aaaa", &[(1, 0), (1, 1)]);
        let swapped = x.exchange_swap(0, &p).unwrap();
        assert_eq!(swapped, path(&p, "aaaa", &[(1, 2), (1, 0)]));
        assert_eq!(swapped.exchange_swap(0, &p).unwrap(), x);
        let y = path(&p, "aaa", &[(1, 0), (1, 0)]);
        assert_eq!(y.exchange_swap(0, &p).unwrap_err(), Error::Overlap { index: 0 });
        assert!(matches!(y.exchange_swap(1, &p), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn conjugation() {
        let p = as_pres();
        let beta = ClosedPath::new(path(&p, "aaa", &[(1, 0), (-1, 1)])).unwrap();
        let id = Path::identity(beta.base().clone());
        assert_eq!(conjugate(&beta, &id).unwrap(), beta);
        let empty = ClosedPath::empty(p.parse_word("aaa").unwrap());
        let g = path(&p, "aa", &[(-1, 0)]);
        assert!(conjugate(&empty, &g).unwrap().is_empty());
        let c = conjugate(&beta, &g).unwrap();
        assert_eq!(c.base(), &p.parse_word("aa").unwrap());
        assert_eq!(c.len(), 2);
        assert!(conjugate(&beta, &beta.invert()).is_ok());
        let (_, sigma) = normalize(&p.parse_word("aaa").unwrap(), &p).unwrap();
        assert!(conjugate(&beta, &sigma).is_err());
    }
}
