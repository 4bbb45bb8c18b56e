//! Reduction orders on words.
//!
//! Both supported orders are total on words over a finite alphabet, well
//! founded, and compatible with concatenation on both sides, so orienting
//! every rule downwards certifies termination.

use std::cmp::Ordering;

use crate::presentation::{GenId, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Shortlex,
    WeightedShortlex,
}

/// A shortlex or weighted-shortlex order.
///
/// `precedence` lists generators from smallest to largest. For the weighted
/// variant, `weights[g]` is the weight of generator `g`; all weights are
/// strictly positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderSpec {
    kind: OrderKind,
    precedence: Vec<GenId>,
    rank: Vec<usize>,
    weights: Vec<u64>,
}

impl OrderSpec {
    /// Shortlex with the given precedence (smallest first). The precedence
    /// must be a permutation of `0..n`.
    pub fn shortlex(precedence: Vec<GenId>) -> Self {
        let n = precedence.len();
        Self::build(OrderKind::Shortlex, precedence, vec![1; n])
    }

    /// Weighted shortlex. `weights` is indexed by generator.
    pub fn weighted(precedence: Vec<GenId>, weights: Vec<u64>) -> Self {
        Self::build(OrderKind::WeightedShortlex, precedence, weights)
    }

    fn build(kind: OrderKind, precedence: Vec<GenId>, weights: Vec<u64>) -> Self {
        let mut rank = vec![usize::MAX; precedence.len()];
        for (r, g) in precedence.iter().enumerate() {
            rank[g.index()] = r;
        }
        assert!(
            rank.iter().all(|&r| r != usize::MAX),
            "precedence must be a permutation of the alphabet"
        );
        assert_eq!(weights.len(), precedence.len());
        assert!(weights.iter().all(|&w| w > 0), "weights must be positive");
        OrderSpec {
            kind,
            precedence,
            rank,
            weights,
        }
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn precedence(&self) -> &[GenId] {
        &self.precedence
    }

    pub fn weight(&self, g: GenId) -> u64 {
        self.weights[g.index()]
    }

    pub fn alphabet_size(&self) -> usize {
        self.precedence.len()
    }

    fn size(&self, w: &[GenId]) -> u64 {
        match self.kind {
            OrderKind::Shortlex => w.len() as u64,
            OrderKind::WeightedShortlex => w.iter().map(|&g| self.weight(g)).sum(),
        }
    }

    /// Compares `u` and `v`: size first (length or total weight), then
    /// length, then lexicographically by precedence.
    pub fn compare(&self, u: &[GenId], v: &[GenId]) -> Ordering {
        self.size(u)
            .cmp(&self.size(v))
            .then(u.len().cmp(&v.len()))
            .then_with(|| {
                u.iter()
                    .map(|g| self.rank[g.index()])
                    .cmp(v.iter().map(|g| self.rank[g.index()]))
            })
    }
}

/// Free-function form of [`OrderSpec::compare`].
pub fn compare_words(order: &OrderSpec, u: &Word, v: &Word) -> Ordering {
    order.compare(u, v)
}
