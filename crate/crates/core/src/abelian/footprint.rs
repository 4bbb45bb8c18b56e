use super::{ContextClass, Footprint, FootprintKey};
use crate::critical::Convergent;
use crate::error::Result;
use crate::track::Path;

/// Signed sum over the steps of `f` of `(class of left context, rule, class
/// of right context)`. A step and its inverse share their contexts, so they
/// cancel.
pub fn footprint(f: &Path, conv: &Convergent<'_>) -> Result<Footprint> {
    let p = conv.presentation();
    let mut out = Footprint::zero();
    for step in f.steps() {
        let key = FootprintKey {
            left: conv.normal_form(&step.left_context())?,
            rule: step.rule,
            right: conv.normal_form(&step.right_context(p))?,
        };
        out.add_term(key, step.sign.as_i64());
    }
    Ok(out)
}

/// `fp` with every context multiplied by `c` on the outside.
pub fn footprint_in_context(fp: &Footprint, c: &ContextClass, conv: &Convergent<'_>) -> Result<Footprint> {
    fp.try_map_keys(|k| {
        Ok(FootprintKey {
            left: conv.normal_form(&c.left.concat(&k.left))?,
            rule: k.rule,
            right: conv.normal_form(&k.right.concat(&c.right))?,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{parse_presentation, RuleId, Word};
    use crate::rewrite::Sign;

    #[test]
    fn footprint_of_the_as_loop() {
        let p = parse_presentation("generators: a\nrules:\n r: a a -> a").unwrap();
        let conv = Convergent::certify(&p).unwrap();
        let r = RuleId(0);
        let beta = Path::from_steps(p.parse_word("aaa").unwrap(), [(r, 0, Sign::Pos), (r, 1, Sign::Neg)], &p).unwrap();
        let a = p.parse_word("a").unwrap();
        let fp = footprint(&beta, &conv).unwrap();
        let expected: Footprint = [
            (
                FootprintKey {
                    left: Word::empty(),
                    rule: r,
                    right: a.clone(),
                },
                1,
            ),
            (
                FootprintKey {
                    left: a.clone(),
                    rule: r,
                    right: Word::empty(),
                },
                -1,
            ),
        ]
        .into_iter()
        .collect();
        assert_eq!(fp, expected);

        assert!(footprint(&Path::identity(a.clone()), &conv).unwrap().is_zero());
        let round = beta.compose(&beta.invert()).unwrap();
        assert!(footprint(&round, &conv).unwrap().is_zero());

        let whiskered = footprint(&beta.whisker(&a, &[]), &conv).unwrap();
        let ctx = ContextClass {
            left: a.clone(),
            right: Word::empty(),
        };
        assert_eq!(whiskered, footprint_in_context(&fp, &ctx, &conv).unwrap());
    }
}
