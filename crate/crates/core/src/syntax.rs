//! Text forms shared by the command line and the bindings.
//!
//! A step is written `+<rule>@<pos>` or `-<rule>@<pos>`. A path is its base
//! word, a colon, and its steps: `aaa: +r@0 -r@1`.

use crate::abelian::{Footprint, PiElement};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::rewrite::{RewriteStep, Sign};
use crate::track::{ClosedPath, Path};

pub fn format_step(step: &RewriteStep, p: &Presentation) -> String {
    format!("{}{}@{}", step.sign, p.rule(step.rule).id, step.pos)
}

pub fn format_path(path: &Path, p: &Presentation) -> String {
    let mut s = format!("{}:", p.display_word(path.base()));
    for step in path.steps() {
        s.push(' ');
        s.push_str(&format_step(step, p));
    }
    s
}

fn bad_path(text: &str, reason: impl Into<String>) -> Error {
    Error::BadWord {
        input: text.to_string(),
        reason: reason.into(),
    }
}

/// Reads a path. The colon may be omitted, in which case the base is every
/// token before the first signed one.
pub fn parse_path(text: &str, p: &Presentation) -> Result<Path> {
    let (base_text, steps_text) = match text.split_once(':') {
        Some((b, s)) => (b.to_string(), s.to_string()),
        None => {
            let tokens: Vec<&str> = text.split_whitespace().collect();
            let cut = tokens
                .iter()
                .position(|t| t.starts_with('+') || t.starts_with('-'))
                .unwrap_or(tokens.len());
            (tokens[..cut].join(" "), tokens[cut..].join(" "))
        }
    };
    let base = p.parse_word(&base_text)?;
    let mut path = Path::identity(base);
    for tok in steps_text.split_whitespace() {
        let (sign, rest) = match tok.split_at_checked(1) {
            Some(("+", rest)) => (Sign::Pos, rest),
            Some(("-", rest)) => (Sign::Neg, rest),
            _ => return Err(bad_path(text, format!("step `{tok}` must start with + or -"))),
        };
        let (name, pos) = rest
            .rsplit_once('@')
            .ok_or_else(|| bad_path(text, format!("step `{tok}` lacks `@<position>`")))?;
        let rule = p
            .rule_by_name(name)
            .ok_or_else(|| Error::UnknownRule(name.to_string()))?;
        let pos: usize = pos
            .parse()
            .map_err(|_| bad_path(text, format!("invalid position in `{tok}`")))?;
        path.push(rule, pos, sign, p)?;
    }
    Ok(path)
}

pub fn parse_closed_path(text: &str, p: &Presentation) -> Result<ClosedPath> {
    ClosedPath::new(parse_path(text, p)?)
}

fn signed(coef: i64) -> String {
    if coef > 0 {
        format!("+{coef}")
    } else {
        coef.to_string()
    }
}

/// `+1·(ε, r, a) -1·(a, r, ε)`, or `0`.
pub fn format_footprint(fp: &Footprint, p: &Presentation) -> String {
    if fp.is_zero() {
        return "0".into();
    }
    fp.iter()
        .map(|(k, c)| {
            format!(
                "{}·({}, {}, {})",
                signed(c),
                p.display_word(&k.left),
                p.rule(k.rule).id,
                p.display_word(&k.right)
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// `+1·((ε,ε), β1)`, or `0`.
pub fn format_pi(x: &PiElement, p: &Presentation) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.iter()
        .map(|(k, c)| {
            format!(
                "{}·(({},{}), {})",
                signed(c),
                p.display_word(&k.context.left),
                p.display_word(&k.context.right),
                k.basis
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;
    use proptest::prelude::*;

    fn as_pres() -> Presentation {
        parse_presentation("generators: a\nrules:\n r: a a -> a").unwrap()
    }

    #[test]
    fn paths_read_and_print() {
        let p = as_pres();
        let path = parse_path("aaa: +r@0 -r@1", &p).unwrap();
        assert_eq!(path.len(), 2);
        assert_eq!(format_path(&path, &p), "aaa: +r@0 -r@1");
        assert_eq!(parse_path("a a a +r@0 -r@1", &p).unwrap(), path);
        assert!(parse_closed_path("aaa: +r@0 -r@1", &p).is_ok());
        assert!(parse_closed_path("aaa: +r@0", &p).is_err());
        assert!(matches!(parse_path("aaa: +q@0", &p), Err(Error::UnknownRule(_))));
        assert!(matches!(parse_path("ab: +r@0", &p), Err(Error::BadWord { .. })));
        assert!(matches!(parse_path("aaa: r@0", &p), Err(Error::BadWord { .. })));
        assert!(matches!(parse_path("a: +r@0", &p), Err(Error::MatchFailure { .. })));
        assert_eq!(format_path(&parse_path(":", &p).unwrap(), &p), "ε:");
    }

    proptest! {
        #[test]
        fn path_text_round_trips(len in 1usize..8, picks in proptest::collection::vec((any::<bool>(), 0usize..8), 0..10)) {
            let p = as_pres();
            let mut path = Path::identity(p.parse_word(&"a".repeat(len)).unwrap());
            for (up, pos) in picks {
                let sign = if up { Sign::Neg } else { Sign::Pos };
                let _ = path.push(crate::presentation::RuleId(0), pos, sign, &p);
            }
            prop_assert_eq!(parse_path(&format_path(&path, &p), &p).unwrap(), path);
        }
    }
}
