//! Identities among relations.
//!
//! Closed rewriting paths are measured by two abelian invariants:
//!
//! * the [`Footprint`], the signed multiset of rule applications in which
//!   each application is recorded with the monoid classes of its left and
//!   right contexts;
//! * the [`PiElement`], an integer combination of generating-confluence
//!   loops placed in context classes, obtained by [`decompose_loop`].
//!
//! [`pi_footprint`] maps the second to the first, and every decomposition
//! satisfies `pi_footprint(decompose_loop(f)) == footprint(f)`.

mod decompose;
mod footprint;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

pub use decompose::{
    decompose_loop, verify_certificate, CertificateEntry, DecompositionCertificate, PiSystem, VerificationReport,
};
pub use footprint::{footprint, footprint_in_context};

use crate::critical::{critical_branchings, generating_confluence_with_fuel, Convergent, GeneratingConfluence};
use crate::error::Result;
use crate::presentation::{RuleId, Word};
use crate::track::ClosedPath;

/// A finitely supported integer combination over `K`. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Combination<K: Ord> {
    terms: BTreeMap<K, i64>,
}

impl<K: Ord> Default for Combination<K> {
    fn default() -> Self {
        Combination { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Combination<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: K, coef: i64) -> Self {
        let mut c = Self::zero();
        c.add_term(key, coef);
        c
    }

    pub fn add_term(&mut self, key: K, coef: i64) {
        if coef == 0 {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, factor: i64) {
        for (k, &c) in &other.terms {
            self.add_term(k.clone(), c * factor);
        }
    }

    pub fn coefficient(&self, key: &K) -> i64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, i64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    /// Applies `f` to every key, merging coefficients of keys sent to the
    /// same place.
    pub fn try_map_keys<L: Ord + Clone, E>(&self, mut f: impl FnMut(&K) -> Result<L, E>) -> Result<Combination<L>, E> {
        let mut out = Combination::zero();
        for (k, &c) in &self.terms {
            out.add_term(f(k)?, c);
        }
        Ok(out)
    }
}

impl<K: Ord + Clone> FromIterator<(K, i64)> for Combination<K> {
    fn from_iter<I: IntoIterator<Item = (K, i64)>>(iter: I) -> Self {
        let mut c = Combination::zero();
        for (k, coef) in iter {
            c.add_term(k, coef);
        }
        c
    }
}

impl<K: Ord + Clone> AddAssign<&Combination<K>> for Combination<K> {
    fn add_assign(&mut self, rhs: &Combination<K>) {
        self.add_scaled(rhs, 1);
    }
}

impl<K: Ord + Clone> Add for &Combination<K> {
    type Output = Combination<K>;
    fn add(self, rhs: &Combination<K>) -> Combination<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: Ord + Clone> Sub for &Combination<K> {
    type Output = Combination<K>;
    fn sub(self, rhs: &Combination<K>) -> Combination<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, -1);
        out
    }
}

impl<K: Ord + Clone> Neg for &Combination<K> {
    type Output = Combination<K>;
    fn neg(self) -> Combination<K> {
        let mut out = Combination::zero();
        out.add_scaled(self, -1);
        out
    }
}

/// A rule application seen up to the monoid classes of its contexts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FootprintKey {
    pub left: Word,
    pub rule: RuleId,
    pub right: Word,
}

pub type Footprint = Combination<FootprintKey>;

/// A pair of normal forms acting on both sides.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContextClass {
    pub left: Word,
    pub right: Word,
}

impl ContextClass {
    pub fn identity() -> Self {
        Self::default()
    }

    /// The class of the context `(u, v)`.
    pub fn of(conv: &Convergent<'_>, u: &Word, v: &Word) -> Result<Self> {
        Ok(ContextClass {
            left: conv.normal_form(u)?,
            right: conv.normal_form(v)?,
        })
    }

    /// `self` applied outside `inner`: `(l·l', r'·r)`, normalized.
    pub fn compose(&self, inner: &ContextClass, conv: &Convergent<'_>) -> Result<Self> {
        Ok(ContextClass {
            left: conv.normal_form(&self.left.concat(&inner.left))?,
            right: conv.normal_form(&inner.right.concat(&self.right))?,
        })
    }
}

/// Index of a generating confluence in [`basis_loops`] order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisId(pub usize);

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "β{}", self.0 + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PiKey {
    pub context: ContextClass,
    pub basis: BasisId,
}

pub type PiElement = Combination<PiKey>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisLoop {
    pub id: BasisId,
    pub confluence: GeneratingConfluence,
}

impl BasisLoop {
    pub fn closed_path(&self) -> &ClosedPath {
        &self.confluence.basis_loop
    }
}

/// One loop per critical branching, in critical-branching order.
pub fn basis_loops(conv: &Convergent<'_>) -> Result<Vec<BasisLoop>> {
    let p = conv.presentation();
    critical_branchings(p)
        .iter()
        .enumerate()
        .map(|(i, b)| {
            Ok(BasisLoop {
                id: BasisId(i),
                confluence: generating_confluence_with_fuel(b, p, conv.fuel())?,
            })
        })
        .collect()
}

/// Image of a Π element under the footprint map: each basis loop's
/// footprint placed in the term's context class.
pub fn pi_footprint(x: &PiElement, conv: &Convergent<'_>) -> Result<Footprint> {
    PiSystem::new(*conv)?.pi_footprint(x)
}

/// The context action on Π elements.
pub fn context_act(c: &ContextClass, x: &PiElement, conv: &Convergent<'_>) -> Result<PiElement> {
    x.try_map_keys(|k| {
        Ok(PiKey {
            context: c.compose(&k.context, conv)?,
            basis: k.basis,
        })
    })
}

/// How two Π elements relate, as far as can be decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiComparison {
    /// Same representation, hence equal.
    Equal,
    /// Different representations with the same footprint.
    IndistinguishableAtFootprint,
    /// Different footprints, hence different elements.
    Distinct,
}

pub fn compare_pi(x: &PiElement, y: &PiElement, conv: &Convergent<'_>) -> Result<PiComparison> {
    if x == y {
        return Ok(PiComparison::Equal);
    }
    let sys = PiSystem::new(*conv)?;
    Ok(if sys.pi_footprint(x)? == sys.pi_footprint(y)? {
        PiComparison::IndistinguishableAtFootprint
    } else {
        PiComparison::Distinct
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{parse_presentation, Presentation};

    fn as_pres() -> Presentation {
        parse_presentation("generators: a\nrules:\n r: a a -> a").unwrap()
    }

    #[test]
    fn combination_arithmetic() {
        let x: Combination<u8> = [(1, 2), (2, -1)].into_iter().collect();
        let y: Combination<u8> = [(1, -2), (3, 4)].into_iter().collect();
        let s = &x + &y;
        assert_eq!(s.coefficient(&1), 0);
        assert_eq!(s.len(), 2);
        assert!((&x - &x).is_zero());
        assert_eq!(-&(-&x), x);
    }

    #[test]
    fn as_basis() {
        let p = as_pres();
        let conv = Convergent::certify(&p).unwrap();
        let basis = basis_loops(&conv).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].closed_path().len(), 2);
        assert_eq!(basis[0].id.to_string(), "β1");

        let free = parse_presentation("generators: a\nrules:").unwrap();
        assert!(basis_loops(&Convergent::certify(&free).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn pi_footprint_in_as() {
        let p = as_pres();
        let conv = Convergent::certify(&p).unwrap();
        let a = p.parse_word("a").unwrap();
        let e = Word::empty();
        let r = RuleId(0);
        let key = |l: &Word, rr: &Word| FootprintKey {
            left: l.clone(),
            rule: r,
            right: rr.clone(),
        };

        let beta = PiElement::single(
            PiKey {
                context: ContextClass::identity(),
                basis: BasisId(0),
            },
            1,
        );
        let fb: Footprint = [(key(&e, &a), 1), (key(&a, &e), -1)].into_iter().collect();
        assert_eq!(pi_footprint(&beta, &conv).unwrap(), fb);

        let left_a = ContextClass {
            left: a.clone(),
            right: e.clone(),
        };
        let shifted = context_act(&left_a, &beta, &conv).unwrap();
        assert_eq!(
            shifted,
            PiElement::single(
                PiKey {
                    context: left_a.clone(),
                    basis: BasisId(0)
                },
                1
            )
        );
        let expected: Footprint = [(key(&a, &a), 1), (key(&a, &e), -1)].into_iter().collect();
        assert_eq!(pi_footprint(&shifted, &conv).unwrap(), expected);
        assert!(pi_footprint(&PiElement::zero(), &conv).unwrap().is_zero());
        assert_eq!(context_act(&ContextClass::identity(), &beta, &conv).unwrap(), beta);
    }

    #[test]
    fn comparison() {
        let p = as_pres();
        let conv = Convergent::certify(&p).unwrap();
        let a = p.parse_word("a").unwrap();
        let k = |l: &Word, r: &Word| PiKey {
            context: ContextClass {
                left: l.clone(),
                right: r.clone(),
            },
            basis: BasisId(0),
        };
        let x = PiElement::single(k(&Word::empty(), &Word::empty()), 1);
        let y = PiElement::single(k(&a, &Word::empty()), 1);
        assert_eq!(compare_pi(&x, &x, &conv).unwrap(), PiComparison::Equal);
        assert_eq!(compare_pi(&x, &y, &conv).unwrap(), PiComparison::Distinct);
        // (a,a)·β and (a,ε)·β have the same footprint in As
        let z = PiElement::single(k(&a, &a), 1);
        let w = PiElement::single(k(&Word::empty(), &a), 1);
        let lhs = &z + &x;
        let rhs = &y + &w;
        assert_eq!(
            compare_pi(&lhs, &rhs, &conv).unwrap(),
            PiComparison::IndistinguishableAtFootprint
        );
    }
}
