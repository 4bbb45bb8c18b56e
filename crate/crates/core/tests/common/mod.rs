#![allow(dead_code)]

use std::cmp::Ordering;

use polyrewrite::{
    basis_loops, conjugate, find_redexes, parse_presentation, ClosedPath, Convergent, GenId, OrderSpec, Path,
    Presentation, Rule, RuleId, Sign, Word,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const AS: &str = "generators: a\nrules:\n  r: a a -> a\n";

pub const FOUR: &str =
    "generators: a b\norder: shortlex a < b\nrules:\n  r1: a b -> a\n  r2: b a -> b\n  r3: a a -> a\n  r4: b b -> b\n";

pub const BE: &str = "generators: b e\norder: shortlex b < e\nrules:\n  s: b b -> b\n  z: e ->\n";

pub fn pres(text: &str) -> Presentation {
    parse_presentation(text).unwrap()
}

pub fn random_word(rng: &mut ChaCha8Rng, p: &Presentation, lo: usize, hi: usize) -> Word {
    let n = p.generators().len() as u32;
    let len = rng.random_range(lo..=hi);
    (0..len).map(|_| GenId(rng.random_range(0..n))).collect()
}

/// Every step available from `w`, in either direction, that keeps the word
/// at most `max_len` long.
pub fn moves(w: &Word, p: &Presentation, max_len: usize) -> Vec<(RuleId, usize, Sign)> {
    let mut out: Vec<_> = find_redexes(w, p)
        .into_iter()
        .map(|r| (r.rule, r.pos, Sign::Pos))
        .collect();
    for id in p.rule_ids() {
        let rule = p.rule(id);
        if (w.len() + rule.lhs.len()).saturating_sub(rule.rhs.len()) > max_len {
            continue;
        }
        for pos in 0..=w.len().saturating_sub(rule.rhs.len()) {
            if w.occurs_at(pos, &rule.rhs) {
                out.push((id, pos, Sign::Neg));
            }
        }
    }
    out
}

/// A zigzag of up to `steps` random steps from `start`.
pub fn random_walk(rng: &mut ChaCha8Rng, p: &Presentation, start: Word, steps: usize, max_len: usize) -> Path {
    let mut path = Path::identity(start);
    for _ in 0..steps {
        let options = moves(path.target(), p, max_len);
        if options.is_empty() {
            break;
        }
        let (rule, pos, sign) = options[rng.random_range(0..options.len())];
        path.push(rule, pos, sign, p).unwrap();
    }
    path
}

/// Reduces `w` to normal form choosing a random redex at each step.
pub fn random_reduction(rng: &mut ChaCha8Rng, p: &Presentation, w: Word) -> Path {
    let mut path = Path::identity(w);
    loop {
        let redexes = find_redexes(path.target(), p);
        if redexes.is_empty() {
            return path;
        }
        let r = redexes[rng.random_range(0..redexes.len())];
        path.push(r.rule, r.pos, Sign::Pos, p).unwrap();
    }
}

/// A closed path of one of several shapes: two reductions of the same word
/// glued at the normal form, a walk closed up through normal forms, a
/// whiskered basis loop, a conjugate, an inverse or a product of these.
pub fn random_loop(rng: &mut ChaCha8Rng, conv: &Convergent<'_>, depth: u32) -> ClosedPath {
    let p = conv.presentation();
    let kind = if depth == 0 {
        rng.random_range(0..3)
    } else {
        rng.random_range(0..6)
    };
    match kind {
        0 => {
            let w = random_word(rng, p, 0, 6);
            let one = random_reduction(rng, p, w.clone());
            let two = random_reduction(rng, p, w);
            ClosedPath::new(one.compose(&two.invert()).unwrap()).unwrap()
        }
        1 => {
            let w = random_word(rng, p, 0, 5);
            let walk = random_walk(rng, p, w, 6, 8);
            let (_, down) = conv.normalize(walk.base()).unwrap();
            let (_, back) = conv.normalize(walk.target()).unwrap();
            let path = walk.compose(&back).unwrap().compose(&down.invert()).unwrap();
            ClosedPath::new(path).unwrap()
        }
        2 => {
            let basis = basis_loops(conv).unwrap();
            if basis.is_empty() {
                return ClosedPath::empty(random_word(rng, p, 0, 4));
            }
            let b = basis[rng.random_range(0..basis.len())].closed_path().clone();
            let u = random_word(rng, p, 0, 2);
            let v = random_word(rng, p, 0, 2);
            b.whisker(&u, &v)
        }
        3 => {
            let f = random_loop(rng, conv, depth - 1);
            let g = random_walk(rng, p, f.base().clone(), 4, 8).invert();
            conjugate(&f, &g).unwrap()
        }
        4 => random_loop(rng, conv, depth - 1).invert(),
        _ => {
            let f = random_loop(rng, conv, depth - 1);
            let g = random_loop(rng, conv, depth - 1);
            let g = match_base(conv, &g, f.base());
            ClosedPath::new(f.compose(&g).unwrap()).unwrap()
        }
    }
}

/// Conjugates `g` so that it sits at `base`, going through normal forms.
/// Only possible when both bases are equivalent; otherwise returns the empty
/// loop at `base`.
pub fn match_base(conv: &Convergent<'_>, g: &ClosedPath, base: &Word) -> ClosedPath {
    if g.base() == base {
        return g.clone();
    }
    let (n1, to_g) = conv.normalize(g.base()).unwrap();
    let (n2, to_base) = conv.normalize(base).unwrap();
    if n1 != n2 {
        return ClosedPath::empty(base.clone());
    }
    let link = to_base.compose(&to_g.invert()).unwrap();
    conjugate(g, &link).unwrap()
}

/// A random closed path based at `base`.
pub fn random_loop_at(rng: &mut ChaCha8Rng, conv: &Convergent<'_>, base: &Word) -> ClosedPath {
    let p = conv.presentation();
    let mut tries = 0;
    loop {
        tries += 1;
        let f = random_loop(rng, conv, 2);
        let fitted = match_base(conv, &f, base);
        if !fitted.is_empty() || tries > 20 {
            return fitted;
        }
        let one = random_reduction(rng, p, base.clone());
        let two = random_reduction(rng, p, base.clone());
        let zig = ClosedPath::new(one.compose(&two.invert()).unwrap()).unwrap();
        if !zig.is_empty() {
            return zig;
        }
    }
}

/// A random terminating presentation under shortlex: each rule is a random
/// pair of distinct words oriented by the order.
pub fn random_presentation(rng: &mut ChaCha8Rng, max_gens: usize, max_rules: usize, max_lhs: usize) -> Presentation {
    let names = ["a", "b", "c", "d"];
    let n = rng.random_range(1..=max_gens);
    let generators: Vec<String> = names[..n].iter().map(|s| s.to_string()).collect();
    let order = OrderSpec::shortlex((0..n as u32).map(GenId).collect());
    let count = rng.random_range(1..=max_rules);
    let mut rules: Vec<Rule> = Vec::new();
    while rules.len() < count {
        let len = rng.random_range(1..=max_lhs);
        let x: Word = (0..len).map(|_| GenId(rng.random_range(0..n as u32))).collect();
        let len = rng.random_range(0..=max_lhs);
        let y: Word = (0..len).map(|_| GenId(rng.random_range(0..n as u32))).collect();
        let (lhs, rhs) = match order.compare(&x, &y) {
            Ordering::Greater => (x, y),
            Ordering::Less => (y, x),
            Ordering::Equal => continue,
        };
        if lhs.len() > max_lhs || rules.iter().any(|r| r.lhs == lhs && r.rhs == rhs) {
            continue;
        }
        rules.push(Rule {
            id: format!("r{}", rules.len() + 1),
            lhs,
            rhs,
        });
    }
    Presentation::new(generators, rules, order).unwrap()
}
