//! Monoid presentations: generators, oriented rules and a reduction order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::order::{OrderKind, OrderSpec};

/// Index of a generator in its presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId(pub u32);

impl GenId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Index of a rule in its presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleId(pub usize);

/// A word over the generators. The empty word is the monoid unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<GenId>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn push(&mut self, g: GenId) {
        self.0.push(g);
    }

    pub fn concat(&self, other: &[GenId]) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        Word(v)
    }

    /// `left · self · right`.
    pub fn framed(&self, left: &[GenId], right: &[GenId]) -> Word {
        let mut v = Vec::with_capacity(left.len() + self.len() + right.len());
        v.extend_from_slice(left);
        v.extend_from_slice(&self.0);
        v.extend_from_slice(right);
        Word(v)
    }

    /// Whether `factor` occurs at `pos`.
    pub fn occurs_at(&self, pos: usize, factor: &[GenId]) -> bool {
        pos + factor.len() <= self.len() && &self.0[pos..pos + factor.len()] == factor
    }

    /// Replaces `len` letters at `pos` by `replacement`.
    pub fn splice(&self, pos: usize, len: usize, replacement: &[GenId]) -> Word {
        let mut v = Vec::with_capacity(self.len() - len + replacement.len());
        v.extend_from_slice(&self.0[..pos]);
        v.extend_from_slice(replacement);
        v.extend_from_slice(&self.0[pos + len..]);
        Word(v)
    }

    pub fn prefix(&self, end: usize) -> Word {
        Word(self.0[..end].to_vec())
    }

    pub fn suffix(&self, start: usize) -> Word {
        Word(self.0[start..].to_vec())
    }

    pub fn into_vec(self) -> Vec<GenId> {
        self.0
    }
}

impl Deref for Word {
    type Target = [GenId];
    fn deref(&self) -> &[GenId] {
        &self.0
    }
}

impl From<Vec<GenId>> for Word {
    fn from(v: Vec<GenId>) -> Self {
        Word(v)
    }
}

impl From<&[GenId]> for Word {
    fn from(v: &[GenId]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<GenId> for Word {
    fn from_iter<I: IntoIterator<Item = GenId>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub id: String,
    pub lhs: Word,
    pub rhs: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    rules: Vec<Rule>,
    order: OrderSpec,
}

/// A rule whose left side is not strictly greater than its right side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientationViolation {
    pub rule: RuleId,
    pub ordering: Ordering,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<OrientationViolation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub(crate) fn valid_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Presentation {
    /// Builds a presentation from parts, checking the structural invariants
    /// (unique names, known generators, nonempty left sides). Orientation is
    /// not checked here; see [`Presentation::validate`].
    pub fn new(generators: Vec<String>, rules: Vec<Rule>, order: OrderSpec) -> Result<Self> {
        let mut seen = HashMap::new();
        for g in &generators {
            if !valid_token(g) {
                return Err(Error::Syntax {
                    line: 0,
                    column: 0,
                    message: format!("invalid generator name `{g}`"),
                });
            }
            if seen.insert(g.as_str(), ()).is_some() {
                return Err(Error::DuplicateGenerator {
                    line: 0,
                    name: g.clone(),
                });
            }
        }
        if order.alphabet_size() != generators.len() {
            return Err(Error::Precondition("order does not cover the alphabet".into()));
        }
        let mut ids = HashMap::new();
        for r in &rules {
            if ids.insert(r.id.as_str(), ()).is_some() {
                return Err(Error::DuplicateRule {
                    line: 0,
                    id: r.id.clone(),
                });
            }
            if r.lhs.is_empty() {
                return Err(Error::EmptyLhs {
                    line: 0,
                    id: r.id.clone(),
                });
            }
            if let Some(g) = r.lhs.iter().chain(r.rhs.iter()).find(|g| g.index() >= generators.len()) {
                return Err(Error::UnknownGenerator {
                    line: 0,
                    name: format!("#{}", g.0),
                });
            }
        }
        Ok(Presentation {
            generators,
            rules,
            order,
        })
    }

    /// Parses the line-oriented presentation format.
    pub fn parse(text: &str) -> Result<Self> {
        parse_presentation(text)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_name(&self, g: GenId) -> &str {
        &self.generators[g.index()]
    }

    pub fn generator(&self, name: &str) -> Option<GenId> {
        self.generators.iter().position(|g| g == name).map(|i| GenId(i as u32))
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, id: RuleId) -> &Rule {
        &self.rules[id.0]
    }

    pub fn rule_ids(&self) -> impl Iterator<Item = RuleId> + '_ {
        (0..self.rules.len()).map(RuleId)
    }

    pub fn rule_by_name(&self, name: &str) -> Option<RuleId> {
        self.rules.iter().position(|r| r.id == name).map(RuleId)
    }

    pub fn order(&self) -> &OrderSpec {
        &self.order
    }

    /// Same alphabet and order with a different rule set.
    pub fn with_rules(&self, rules: Vec<Rule>) -> Result<Self> {
        Presentation::new(self.generators.clone(), rules, self.order.clone())
    }

    /// Every word of length at most `max_len`, shortest first and
    /// lexicographic by precedence within a length.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..max_len {
            let next: Vec<Word> = layer
                .iter()
                .flat_map(|w| self.order.precedence().iter().map(move |&g| w.concat(&[g])))
                .collect();
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// Lists every rule with `lhs <= rhs` under the order.
    pub fn validate(&self) -> ValidationReport {
        let violations = self
            .rule_ids()
            .filter_map(|id| {
                let r = self.rule(id);
                let ordering = self.order.compare(&r.lhs, &r.rhs);
                (ordering != Ordering::Greater).then_some(OrientationViolation { rule: id, ordering })
            })
            .collect();
        ValidationReport { violations }
    }

    /// Reads a word from text. Tokens are separated by whitespace; a token
    /// that is not itself a generator name is split into generator names if
    /// that can be done in exactly one way. `ε` and the empty string denote
    /// the unit.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut out = Word::empty();
        for token in text.split_whitespace() {
            if token == "ε" {
                continue;
            }
            if let Some(g) = self.generator(token) {
                out.push(g);
                continue;
            }
            let splits = self.segmentations(token);
            match splits.len() {
                1 => splits[0].iter().for_each(|&g| out.push(g)),
                0 => {
                    return Err(Error::BadWord {
                        input: text.to_string(),
                        reason: format!("unknown generator in `{token}`"),
                    })
                }
                _ => {
                    return Err(Error::BadWord {
                        input: text.to_string(),
                        reason: format!("`{token}` splits into generators in more than one way"),
                    })
                }
            }
        }
        Ok(out)
    }

    // At most two segmentations are collected; that is enough to detect ambiguity.
    fn segmentations(&self, token: &str) -> Vec<Vec<GenId>> {
        fn go(p: &Presentation, rest: &str, acc: &mut Vec<GenId>, out: &mut Vec<Vec<GenId>>) {
            if out.len() > 1 {
                return;
            }
            if rest.is_empty() {
                out.push(acc.clone());
                return;
            }
            for (i, name) in p.generators.iter().enumerate() {
                if let Some(tail) = rest.strip_prefix(name.as_str()) {
                    acc.push(GenId(i as u32));
                    go(p, tail, acc, out);
                    acc.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, token, &mut Vec::new(), &mut out);
        out
    }

    /// Compact rendering: letters are juxtaposed when every generator name is
    /// a single character, space separated otherwise; the unit is `ε`.
    pub fn display_word<'a>(&'a self, w: &'a [GenId]) -> WordDisplay<'a> {
        WordDisplay { p: self, w }
    }

    /// Generator names separated by spaces, as in the file format. The unit
    /// is the empty string.
    pub fn spaced_word(&self, w: &[GenId]) -> String {
        w.iter().map(|&g| self.generator_name(g)).collect::<Vec<_>>().join(" ")
    }

    /// Canonical text form, re-readable by [`Presentation::parse`].
    pub fn to_text(&self) -> String {
        let spaced = |w: &[GenId]| self.spaced_word(w);
        let mut s = String::new();
        s.push_str("generators:");
        for g in &self.generators {
            s.push(' ');
            s.push_str(g);
        }
        s.push('\n');
        let names: Vec<&str> = self
            .order
            .precedence()
            .iter()
            .map(|&g| self.generator_name(g))
            .collect();
        match self.order.kind() {
            OrderKind::Shortlex => {
                s.push_str("order: shortlex");
                if !names.is_empty() {
                    s.push(' ');
                    s.push_str(&names.join(" < "));
                }
            }
            OrderKind::WeightedShortlex => {
                s.push_str("order: weights");
                for &g in self.order.precedence() {
                    s.push_str(&format!(" {}={}", self.generator_name(g), self.order.weight(g)));
                }
            }
        }
        s.push_str("\nrules:\n");
        for r in &self.rules {
            s.push_str(&format!("  {}: {} ->", r.id, spaced(&r.lhs)));
            if !r.rhs.is_empty() {
                s.push(' ');
                s.push_str(&spaced(&r.rhs));
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub struct WordDisplay<'a> {
    p: &'a Presentation,
    w: &'a [GenId],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.w.is_empty() {
            return f.write_str("ε");
        }
        let compact = self.p.generators.iter().all(|g| g.chars().count() == 1);
        for (i, &g) in self.w.iter().enumerate() {
            if i > 0 && !compact {
                f.write_str(" ")?;
            }
            f.write_str(self.p.generator_name(g))?;
        }
        Ok(())
    }
}

/// Parses a presentation file.
///
/// ```text
/// generators: a b
/// order: shortlex a < b        # or: weights a=1 b=2
/// rules:
///   r1: a b -> a
///   r2: b a ->                 # empty right side is the unit
/// ```
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut generators: Vec<String> = Vec::new();
    let mut index: HashMap<String, GenId> = HashMap::new();
    let mut order: Option<(OrderSpec, usize)> = None;
    let mut rules: Vec<Rule> = Vec::new();
    let mut rule_ids: HashMap<String, ()> = HashMap::new();
    let mut in_rules = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let body = content.trim();
        let syntax = |column: usize, message: String| Error::Syntax { line, column, message };

        if let Some(rest) = body.strip_prefix("generators:") {
            in_rules = false;
            let base = indent + "generators:".len();
            for (col, tok) in tokens(rest, base) {
                if !valid_token(tok) {
                    return Err(syntax(col, format!("invalid generator name `{tok}`")));
                }
                if index.contains_key(tok) {
                    return Err(Error::DuplicateGenerator {
                        line,
                        name: tok.to_string(),
                    });
                }
                index.insert(tok.to_string(), GenId(generators.len() as u32));
                generators.push(tok.to_string());
            }
        } else if let Some(rest) = body.strip_prefix("order:") {
            in_rules = false;
            let base = indent + "order:".len();
            order = Some((parse_order(rest, base, line, &index)?, line));
        } else if let Some(rest) = body.strip_prefix("rules:") {
            in_rules = true;
            if !rest.trim().is_empty() {
                rules.push(parse_rule(rest, indent + "rules:".len(), line, &index, &mut rule_ids)?);
            }
        } else if in_rules {
            rules.push(parse_rule(content, 0, line, &index, &mut rule_ids)?);
        } else {
            return Err(syntax(indent + 1, format!("unexpected line `{body}`")));
        }
    }

    let order = match order {
        Some((o, line)) => {
            if o.alphabet_size() != generators.len() {
                return Err(Error::Syntax {
                    line,
                    column: 1,
                    message: "order must rank every generator exactly once".into(),
                });
            }
            o
        }
        None => OrderSpec::shortlex((0..generators.len() as u32).map(GenId).collect()),
    };
    Presentation::new(generators, rules, order)
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(s: &str, base: usize) -> impl Iterator<Item = (usize, &str)> {
    let start = s.as_ptr() as usize;
    s.split_whitespace()
        .map(move |t| (base + (t.as_ptr() as usize - start) + 1, t))
}

fn parse_order(rest: &str, base: usize, line: usize, index: &HashMap<String, GenId>) -> Result<OrderSpec> {
    let syntax = |column: usize, message: String| Error::Syntax { line, column, message };
    let toks: Vec<(usize, &str)> = tokens(rest, base).collect();
    let Some(&(kcol, kind)) = toks.first() else {
        return Err(syntax(base + 1, "expected `shortlex` or `weights`".into()));
    };
    let lookup = |col: usize, name: &str| -> Result<GenId> {
        if !valid_token(name) {
            return Err(syntax(col, format!("invalid generator name `{name}`")));
        }
        index.get(name).copied().ok_or(Error::UnknownGenerator {
            line,
            name: name.to_string(),
        })
    };
    let mut precedence = Vec::new();
    let mut seen = vec![false; index.len()];
    let mut add = |col: usize, g: GenId, precedence: &mut Vec<GenId>| -> Result<()> {
        if std::mem::replace(&mut seen[g.index()], true) {
            return Err(syntax(col, "generator ranked twice".into()));
        }
        precedence.push(g);
        Ok(())
    };
    match kind {
        "shortlex" => {
            let mut expect_name = true;
            for &(col, tok) in &toks[1..] {
                match (expect_name, tok) {
                    (false, "<") => expect_name = true,
                    (true, name) => {
                        let g = lookup(col, name)?;
                        add(col, g, &mut precedence)?;
                        expect_name = false;
                    }
                    (false, other) => return Err(syntax(col, format!("expected `<`, found `{other}`"))),
                }
            }
            if expect_name && toks.len() > 1 {
                return Err(syntax(base + rest.len() + 1, "dangling `<`".into()));
            }
            if precedence.len() != index.len() {
                return Err(syntax(kcol, "order must rank every generator exactly once".into()));
            }
            Ok(OrderSpec::shortlex(precedence))
        }
        "weights" => {
            let mut weights = vec![0u64; index.len()];
            for &(col, tok) in &toks[1..] {
                let (name, value) = tok
                    .split_once('=')
                    .ok_or_else(|| syntax(col, format!("expected `<name>=<weight>`, found `{tok}`")))?;
                let g = lookup(col, name)?;
                let weight: u64 = value
                    .parse()
                    .map_err(|_| syntax(col, format!("invalid weight `{value}`")))?;
                if weight == 0 {
                    return Err(syntax(col, "weights must be strictly positive".into()));
                }
                add(col, g, &mut precedence)?;
                weights[g.index()] = weight;
            }
            if precedence.len() != index.len() {
                return Err(syntax(kcol, "order must rank every generator exactly once".into()));
            }
            Ok(OrderSpec::weighted(precedence, weights))
        }
        other => Err(syntax(kcol, format!("unknown order `{other}`"))),
    }
}

fn parse_rule(
    text: &str,
    base: usize,
    line: usize,
    index: &HashMap<String, GenId>,
    rule_ids: &mut HashMap<String, ()>,
) -> Result<Rule> {
    let syntax = |column: usize, message: String| Error::Syntax { line, column, message };
    let lead = text.len() - text.trim_start().len();
    let Some((id_part, sides)) = text.split_once(':') else {
        return Err(syntax(base + lead + 1, "expected `<id>: <lhs> -> <rhs>`".into()));
    };
    let id = id_part.trim();
    if !valid_token(id) {
        return Err(syntax(base + lead + 1, format!("invalid rule id `{id}`")));
    }
    let sides_base = base + id_part.len() + 1;
    let Some(arrow) = sides.find("->") else {
        return Err(syntax(sides_base + 1, "expected `->`".into()));
    };
    let word = |s: &str, col0: usize| -> Result<Word> {
        tokens(s, col0)
            .map(|(col, tok)| {
                if !valid_token(tok) {
                    return Err(syntax(col, format!("invalid generator name `{tok}`")));
                }
                index.get(tok).copied().ok_or(Error::UnknownGenerator {
                    line,
                    name: tok.to_string(),
                })
            })
            .collect()
    };
    let lhs = word(&sides[..arrow], sides_base)?;
    let rhs = word(&sides[arrow + 2..], sides_base + arrow + 2)?;
    if lhs.is_empty() {
        return Err(Error::EmptyLhs {
            line,
            id: id.to_string(),
        });
    }
    if rule_ids.insert(id.to_string(), ()).is_some() {
        return Err(Error::DuplicateRule {
            line,
            id: id.to_string(),
        });
    }
    Ok(Rule {
        id: id.to_string(),
        lhs,
        rhs,
    })
}
