//! Moving generating sets of identities among relations between two
//! presentations of the same monoid.
//!
//! A [`TranslationMap`] sends each generator of `Σ` to a word over `Υ`
//! (forward, `F`) and back (backward, `G`). A rule `u → v` is sent to the
//! zigzag `σ(F u) ⋆ σ(F v)⁻` through the common normal form. For every word
//! `w` there is a path `Λ_w : w → GF(w)`, and for every path `f : u → v` a
//! loop `Λ_f = f ⋆ Λ_v ⋆ GF(f)⁻ ⋆ Λ_u⁻`. The loops `Λ_φ` for the rules of
//! `Σ` together with the images `G(b)` of a generating set of `Υ` generate
//! the identities among relations of `Σ`.

use std::collections::HashMap;

use crate::critical::Convergent;
use crate::error::{Error, Result};
use crate::presentation::{valid_token, GenId, Presentation, RuleId, Word};
use crate::rewrite::Sign;
use crate::track::{ClosedPath, Path};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationMap {
    /// Indexed by generators of `Σ`; words over `Υ`.
    pub forward: Vec<Word>,
    /// Indexed by generators of `Υ`; words over `Σ`.
    pub backward: Vec<Word>,
}

fn translate(w: &[GenId], images: &[Word]) -> Word {
    w.iter().flat_map(|g| images[g.index()].iter().copied()).collect()
}

impl TranslationMap {
    /// The identity map of a presentation onto itself.
    pub fn identity(p: &Presentation) -> Self {
        let ids: Vec<Word> = (0..p.generators().len() as u32)
            .map(|g| Word::from(vec![GenId(g)]))
            .collect();
        TranslationMap {
            forward: ids.clone(),
            backward: ids,
        }
    }

    pub fn forward_word(&self, w: &[GenId]) -> Word {
        translate(w, &self.forward)
    }

    pub fn backward_word(&self, w: &[GenId]) -> Word {
        translate(w, &self.backward)
    }

    /// Reads a map file:
    ///
    /// ```text
    /// forward: a -> b
    /// backward: b -> a
    /// backward: e ->
    /// ```
    ///
    /// Every generator of both presentations must be mapped exactly once.
    pub fn parse(text: &str, sigma: &Presentation, upsilon: &Presentation) -> Result<Self> {
        let mut forward: Vec<Option<Word>> = vec![None; sigma.generators().len()];
        let mut backward: Vec<Option<Word>> = vec![None; upsilon.generators().len()];
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let syntax = |message: String| Error::Syntax {
                line,
                column: 1,
                message,
            };
            let (dir, rest) = body
                .split_once(':')
                .ok_or_else(|| syntax("expected `forward:` or `backward:`".into()))?;
            let (from, to, slots) = match dir.trim() {
                "forward" => (sigma, upsilon, &mut forward),
                "backward" => (upsilon, sigma, &mut backward),
                other => return Err(syntax(format!("unknown direction `{other}`"))),
            };
            let (name, image) = rest
                .split_once("->")
                .ok_or_else(|| syntax("expected `<generator> -> <word>`".into()))?;
            let name = name.trim();
            if !valid_token(name) {
                return Err(syntax(format!("invalid generator name `{name}`")));
            }
            let g = from.generator(name).ok_or_else(|| Error::UnknownGenerator {
                line,
                name: name.to_string(),
            })?;
            let image = to.parse_word(image)?;
            if slots[g.index()].replace(image).is_some() {
                return Err(syntax(format!("generator `{name}` mapped twice")));
            }
        }
        let finish = |slots: Vec<Option<Word>>, p: &Presentation, dir: &str| -> Result<Vec<Word>> {
            slots
                .into_iter()
                .enumerate()
                .map(|(i, w)| {
                    w.ok_or_else(|| Error::Syntax {
                        line: 0,
                        column: 0,
                        message: format!("no {dir} image for `{}`", p.generators()[i]),
                    })
                })
                .collect()
        };
        Ok(TranslationMap {
            forward: finish(forward, sigma, "forward")?,
            backward: finish(backward, upsilon, "backward")?,
        })
    }
}

/// Which side of the map a failure refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Sigma,
    Upsilon,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TranslationReport {
    /// Rules whose two sides translate to different classes.
    pub rule_failures: Vec<(Side, String)>,
    /// Generators not recovered up to equivalence by the round trip.
    pub round_trip_failures: Vec<(Side, String)>,
}

impl TranslationReport {
    pub fn is_ok(&self) -> bool {
        self.rule_failures.is_empty() && self.round_trip_failures.is_empty()
    }
}

/// Checks that `m` respects both rule sets and that both round trips are the
/// identity up to equivalence.
pub fn check_translation(
    sigma: &Convergent<'_>,
    upsilon: &Convergent<'_>,
    m: &TranslationMap,
) -> Result<TranslationReport> {
    let (ps, pu) = (sigma.presentation(), upsilon.presentation());
    if m.forward.len() != ps.generators().len() || m.backward.len() != pu.generators().len() {
        return Err(Error::Precondition(
            "translation map does not match the alphabets".into(),
        ));
    }
    let mut report = TranslationReport::default();
    for r in ps.rules() {
        if !upsilon.equal(&m.forward_word(&r.lhs), &m.forward_word(&r.rhs))? {
            report.rule_failures.push((Side::Sigma, r.id.clone()));
        }
    }
    for r in pu.rules() {
        if !sigma.equal(&m.backward_word(&r.lhs), &m.backward_word(&r.rhs))? {
            report.rule_failures.push((Side::Upsilon, r.id.clone()));
        }
    }
    for (i, name) in ps.generators().iter().enumerate() {
        let a = Word::from(vec![GenId(i as u32)]);
        if !sigma.equal(&m.backward_word(&m.forward_word(&a)), &a)? {
            report.round_trip_failures.push((Side::Sigma, name.clone()));
        }
    }
    for (i, name) in pu.generators().iter().enumerate() {
        let b = Word::from(vec![GenId(i as u32)]);
        if !upsilon.equal(&m.forward_word(&m.backward_word(&b)), &b)? {
            report.round_trip_failures.push((Side::Upsilon, name.clone()));
        }
    }
    Ok(report)
}

/// Image of a path under the functor that sends each generator `g` to
/// `images[g]` and each rule `u → v` of the source presentation to
/// `σ(F u) ⋆ σ(F v)⁻` (free-reduced) in `target`.
pub fn functor_image(f: &Path, images: &[Word], source: &Presentation, target: &Convergent<'_>) -> Result<Path> {
    let mut rule_images: HashMap<RuleId, Path> = HashMap::new();
    let mut out = Path::identity(translate(f.base(), images));
    for step in f.steps() {
        let rule = match rule_images.get(&step.rule) {
            Some(path) => path.clone(),
            None => {
                let r = source.rule(step.rule);
                let (_, down) = target.normalize(&translate(&r.lhs, images))?;
                let (_, up) = target.normalize(&translate(&r.rhs, images))?;
                let path = down.compose(&up.invert())?.free_reduce();
                rule_images.insert(step.rule, path.clone());
                path
            }
        };
        let oriented = match step.sign {
            Sign::Pos => rule,
            Sign::Neg => rule.invert(),
        };
        let left = translate(&step.left_context(), images);
        let right = translate(&step.right_context(source), images);
        out = out.compose(&oriented.whisker(&left, &right))?;
    }
    Ok(out)
}

/// The functors between two presentations fixed by a translation map.
#[derive(Clone, Copy)]
pub struct Transport<'a> {
    pub sigma: Convergent<'a>,
    pub upsilon: Convergent<'a>,
    pub map: &'a TranslationMap,
}

impl<'a> Transport<'a> {
    /// Checks the map first; fails with the report's first problem.
    pub fn new(sigma: Convergent<'a>, upsilon: Convergent<'a>, map: &'a TranslationMap) -> Result<Self> {
        let report = check_translation(&sigma, &upsilon, map)?;
        if let Some((side, what)) = report.rule_failures.first().or(report.round_trip_failures.first()) {
            return Err(Error::Precondition(format!(
                "translation map fails at `{what}` ({})",
                match side {
                    Side::Sigma => "sigma",
                    Side::Upsilon => "upsilon",
                }
            )));
        }
        Ok(Transport { sigma, upsilon, map })
    }

    /// `F`: paths over `Σ` to paths over `Υ`.
    pub fn forward(&self, f: &Path) -> Result<Path> {
        functor_image(f, &self.map.forward, self.sigma.presentation(), &self.upsilon)
    }

    /// `G`: paths over `Υ` to paths over `Σ`.
    pub fn backward(&self, f: &Path) -> Result<Path> {
        functor_image(f, &self.map.backward, self.upsilon.presentation(), &self.sigma)
    }

    /// `GF`.
    pub fn round_trip(&self, f: &Path) -> Result<Path> {
        self.backward(&self.forward(f)?)
    }

    fn gf_word(&self, w: &[GenId]) -> Word {
        self.map.backward_word(&self.map.forward_word(w))
    }

    /// `Λ_w : w → GF(w)`: the zigzag `σ(a) ⋆ σ(GF a)⁻` for each letter,
    /// combined side by side.
    pub fn lambda_word(&self, w: &[GenId]) -> Result<Path> {
        let mut out = Path::identity(Word::empty());
        for &g in w {
            let a = Word::from(vec![g]);
            let (_, down) = self.sigma.normalize(&a)?;
            let (_, up) = self.sigma.normalize(&self.gf_word(&a))?;
            let letter = down.compose(&up.invert())?.free_reduce();
            out = out.horizontal(&letter);
        }
        Ok(out)
    }

    /// `Λ_f = f ⋆ Λ_v ⋆ GF(f)⁻ ⋆ Λ_u⁻` for `f : u → v`, free-reduced.
    pub fn lambda_path(&self, f: &Path) -> Result<ClosedPath> {
        let lu = self.lambda_word(f.base())?;
        let lv = self.lambda_word(f.target())?;
        let gf = self.round_trip(f)?;
        let path = f.compose(&lv)?.compose(&gf.invert())?.compose(&lu.invert())?;
        ClosedPath::new(path.free_reduce())
    }

    /// `Λ_φ` for a rule of `Σ`, applied to its own left side.
    pub fn lambda_loop(&self, rule: RuleId) -> Result<ClosedPath> {
        let p = self.sigma.presentation();
        let f = Path::from_steps(p.rule(rule).lhs.clone(), [(rule, 0, Sign::Pos)], p)?;
        self.lambda_path(&f)
    }

    /// `{Λ_φ}` for the rules of `Σ` followed by `G(b)` for each loop `b` of
    /// `basis`, labelled `Λ_<rule>` and `G(β<i>)`.
    pub fn transported_generators(&self, basis: &[ClosedPath]) -> Result<Vec<(String, ClosedPath)>> {
        let p = self.sigma.presentation();
        let mut out = Vec::with_capacity(p.rules().len() + basis.len());
        for id in p.rule_ids() {
            out.push((format!("Λ_{}", p.rule(id).id), self.lambda_loop(id)?));
        }
        for (i, b) in basis.iter().enumerate() {
            out.push((format!("G(β{})", i + 1), ClosedPath::new(self.backward(b)?)?));
        }
        Ok(out)
    }
}

/// Free-function form of [`Transport::lambda_loop`].
pub fn lambda_loop(
    rule: RuleId,
    m: &TranslationMap,
    sigma: &Convergent<'_>,
    upsilon: &Convergent<'_>,
) -> Result<ClosedPath> {
    Transport::new(*sigma, *upsilon, m)?.lambda_loop(rule)
}

/// Free-function form of [`Transport::transported_generators`].
pub fn transported_generators(
    sigma: &Convergent<'_>,
    upsilon: &Convergent<'_>,
    m: &TranslationMap,
    basis_upsilon: &[ClosedPath],
) -> Result<Vec<(String, ClosedPath)>> {
    Transport::new(*sigma, *upsilon, m)?.transported_generators(basis_upsilon)
}
