use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use polyrewrite::abelian::PiSystem;
use polyrewrite::completion::{CompletionEvent, Provenance, DEFAULT_COMPLETION_FUEL};
use polyrewrite::critical::{generating_confluence_with_fuel, local_confluence_with_fuel, LocalConfluenceReport};
use polyrewrite::rewrite::{normalize_with_fuel, DEFAULT_FUEL};
use polyrewrite::syntax::{format_footprint, format_path, format_pi, parse_closed_path, parse_path};
use polyrewrite::transport::{check_translation, Side, Transport};
use polyrewrite::{
    brute_force_confluence, check_termination, critical_branchings, footprint, knuth_bendix, same_congruence,
    Convergent, Error, Presentation, TranslationMap, Word,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "polyrewrite", version, about = "Rewriting tools for monoid presentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Step budget for each normalization, or rule budget for `complete`.
    #[arg(long, global = true)]
    fuel: Option<usize>,

    /// Trust termination instead of checking rule orientation.
    #[arg(long, global = true)]
    assume_terminating: bool,

    /// Word length for brute-force confluence (`check`) and the congruence
    /// comparison (`complete`).
    #[arg(long, global = true)]
    max_len: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Termination, local confluence and convergence.
    Check { file: PathBuf },
    /// Normal form of a word and the reduction reaching it.
    Normalize { file: PathBuf, word: String },
    /// Decides whether two words are equal in the presented monoid.
    Equal { file: PathBuf, u: String, v: String },
    /// Critical branchings and their generating confluences.
    CriticalPairs { file: PathBuf },
    /// Knuth-Bendix completion.
    Complete { file: PathBuf },
    /// The basis loops of the identities among relations.
    PiBasis { file: PathBuf },
    /// Decomposes a closed path over the basis loops.
    Decompose { file: PathBuf, path: String },
    /// Footprint of a path.
    Footprint { file: PathBuf, path: String },
    /// Transports a generating set along a translation map.
    Transport {
        sigma: PathBuf,
        upsilon: PathBuf,
        map: PathBuf,
    },
}

/// What a command produced: text lines, the same data as JSON, and whether
/// the answer was affirmative.
struct Report {
    text: Vec<String>,
    json: Value,
    ok: bool,
}

enum Failure {
    /// Bad input; exit 2.
    Usage(String),
    /// A well-formed question with a negative answer that cannot be
    /// reported normally; exit 1.
    Negative(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::FuelExhausted(_) | Error::NotTerminating { .. } => Failure::Negative(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<Report, Failure>;

fn load(path: &FsPath) -> Result<Presentation, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Presentation::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

struct Ctx {
    fuel: Option<usize>,
    assume_terminating: bool,
    max_len: Option<usize>,
}

impl Ctx {
    fn fuel(&self) -> usize {
        self.fuel.unwrap_or(DEFAULT_FUEL)
    }

    fn convergent<'p>(&self, p: &'p Presentation) -> Result<Convergent<'p>, Failure> {
        let conv = if self.assume_terminating {
            Convergent::assume_terminating(p, self.fuel())
        } else {
            Convergent::certify(p).map(|c| c.with_fuel(self.fuel()))
        };
        conv.map_err(|e| match e {
            Error::NotConvergent => {
                Failure::Usage("presentation is not convergent; run `polyrewrite complete` first".into())
            }
            other => other.into(),
        })
    }

    fn terminating(&self, p: &Presentation) -> Result<(), Failure> {
        if self.assume_terminating || check_termination(p).is_terminating() {
            Ok(())
        } else {
            Err(Failure::Usage(
                "rules are not oriented by the order; pass --assume-terminating to rewrite anyway".into(),
            ))
        }
    }
}

fn word(p: &Presentation, text: &str) -> Result<Word, Failure> {
    Ok(p.parse_word(text)?)
}

fn check(ctx: &Ctx, file: &FsPath) -> Outcome {
    let p = load(file)?;
    let termination = check_termination(&p);
    let terminating = termination.is_terminating() || ctx.assume_terminating;
    let local: Option<LocalConfluenceReport> = if terminating {
        Some(local_confluence_with_fuel(&p, ctx.fuel())?)
    } else {
        None
    };
    let locally = local.as_ref().map(LocalConfluenceReport::is_confluent);
    let convergent = terminating && locally == Some(true);
    let mut text = vec![format!(
        "terminating: {}; locally confluent: {}; convergent: {}",
        if termination.is_terminating() {
            "yes"
        } else if ctx.assume_terminating {
            "assumed"
        } else {
            "no"
        },
        locally.map_or("unknown", yes),
        yes(convergent)
    )];
    for id in &termination.violations {
        let r = p.rule(*id);
        text.push(format!(
            "not oriented: {}: {} -> {}",
            r.id,
            p.display_word(&r.lhs),
            p.display_word(&r.rhs)
        ));
    }
    let mut failures = Vec::new();
    if let Some(report) = &local {
        for f in &report.failures {
            let b = &f.branching;
            text.push(format!(
                "unjoinable: overlap={} r1={}@0 r2={}@{} normal forms {} and {}",
                p.display_word(&b.overlap),
                p.rule(b.rule1).id,
                p.rule(b.rule2).id,
                b.offset,
                p.display_word(&f.first_normal_form),
                p.display_word(&f.second_normal_form)
            ));
            failures.push(json!({
                "overlap": p.display_word(&b.overlap).to_string(),
                "r1": p.rule(b.rule1).id,
                "r2": p.rule(b.rule2).id,
                "offset": b.offset,
                "normal_forms": [p.display_word(&f.first_normal_form).to_string(), p.display_word(&f.second_normal_form).to_string()],
            }));
        }
    }
    let mut brute = Value::Null;
    if let (Some(n), true) = (ctx.max_len, terminating) {
        let report = brute_force_confluence(&p, n);
        text.push(format!(
            "confluent up to length {n}: {} ({} words)",
            yes(report.is_confluent()),
            report.words_checked
        ));
        brute = json!({"max_len": n, "confluent": report.is_confluent(), "words_checked": report.words_checked});
    }
    Ok(Report {
        text,
        json: json!({
            "terminating": termination.is_terminating(),
            "assumed_terminating": ctx.assume_terminating,
            "locally_confluent": locally,
            "convergent": convergent,
            "not_oriented": termination.violations.iter().map(|id| p.rule(*id).id.clone()).collect::<Vec<_>>(),
            "unjoinable": failures,
            "brute_force": brute,
        }),
        ok: convergent,
    })
}

fn normalize(ctx: &Ctx, file: &FsPath, w: &str) -> Outcome {
    let p = load(file)?;
    ctx.terminating(&p)?;
    let w = word(&p, w)?;
    let (nf, path) = normalize_with_fuel(&w, &p, ctx.fuel())?;
    Ok(Report {
        text: vec![
            format!("normal form: {}", p.display_word(&nf)),
            format!("path: {}", format_path(&path, &p)),
        ],
        json: json!({
            "normal_form": p.display_word(&nf).to_string(),
            "path": format_path(&path, &p),
            "steps": path.len(),
        }),
        ok: true,
    })
}

fn equal(ctx: &Ctx, file: &FsPath, u: &str, v: &str) -> Outcome {
    let p = load(file)?;
    let conv = ctx.convergent(&p)?;
    let (u, v) = (word(&p, u)?, word(&p, v)?);
    let (nu, nv) = (conv.normal_form(&u)?, conv.normal_form(&v)?);
    let same = nu == nv;
    let line = if same {
        format!("equal (normal form: {})", p.display_word(&nu))
    } else {
        format!(
            "not equal (normal forms: {} and {})",
            p.display_word(&nu),
            p.display_word(&nv)
        )
    };
    Ok(Report {
        text: vec![line],
        json: json!({
            "equal": same,
            "normal_forms": [p.display_word(&nu).to_string(), p.display_word(&nv).to_string()],
        }),
        ok: same,
    })
}

fn critical_pairs(ctx: &Ctx, file: &FsPath) -> Outcome {
    let p = load(file)?;
    ctx.terminating(&p)?;
    let mut text = Vec::new();
    let mut loops = Vec::new();
    let mut entries = Vec::new();
    let mut all_joinable = true;
    for (i, b) in critical_branchings(&p).iter().enumerate() {
        let gc = match generating_confluence_with_fuel(b, &p, ctx.fuel()) {
            Ok(gc) => Some(gc),
            Err(Error::NotConfluent { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        let joinable = gc.is_some();
        all_joinable &= joinable;
        text.push(format!(
            "overlap={} r1={}@0 r2={}@{} kind={} joinable={}",
            p.display_word(&b.overlap),
            p.rule(b.rule1).id,
            p.rule(b.rule2).id,
            b.offset,
            b.kind,
            joinable
        ));
        let lp = gc.map(|gc| format_path(&gc.basis_loop, &p));
        if let Some(l) = &lp {
            loops.push(format!("β{} = {l}", i + 1));
        }
        entries.push(json!({
            "overlap": p.display_word(&b.overlap).to_string(),
            "r1": p.rule(b.rule1).id,
            "r2": p.rule(b.rule2).id,
            "offset": b.offset,
            "kind": b.kind.to_string(),
            "joinable": joinable,
            "loop": lp,
        }));
    }
    text.extend(loops);
    Ok(Report {
        text,
        json: json!({"branchings": entries, "all_joinable": all_joinable}),
        ok: all_joinable,
    })
}

fn complete(ctx: &Ctx, file: &FsPath) -> Outcome {
    let p = load(file)?;
    let (q, trace) = knuth_bendix(&p, ctx.fuel.unwrap_or(DEFAULT_COMPLETION_FUEL))?;
    let mut text: Vec<String> = q.to_text().lines().map(str::to_string).collect();
    let mut added = Vec::new();
    for e in &trace.events {
        let CompletionEvent::Added {
            rule,
            lhs,
            rhs,
            provenance,
        } = e
        else {
            continue;
        };
        let from = match provenance {
            Provenance::Overlap { overlap, .. } => format!("overlap {}", p.display_word(overlap)),
            Provenance::Collapsed { rule } => format!("rule {rule}"),
        };
        text.push(format!(
            "# add {rule}: {} -> {} from {from}",
            q.spaced_word(lhs),
            q.spaced_word(rhs)
        ));
        added.push(json!({
            "id": rule,
            "lhs": q.spaced_word(lhs),
            "rhs": q.spaced_word(rhs),
            "from": from,
        }));
    }
    let mut agree = Value::Null;
    if let Some(n) = ctx.max_len {
        let report = same_congruence(&p, &q, n)?;
        text.push(format!("# same congruence up to length {n}: {}", yes(report.agree())));
        agree = json!(report.agree());
    }
    Ok(Report {
        text,
        json: json!({"presentation": q.to_text(), "added": added, "same_congruence": agree}),
        ok: true,
    })
}

fn pi_basis(ctx: &Ctx, file: &FsPath) -> Outcome {
    let p = load(file)?;
    let conv = ctx.convergent(&p)?;
    let sys = PiSystem::new(conv)?;
    let mut text = Vec::new();
    let mut loops = Vec::new();
    for b in sys.basis() {
        let path = format_path(b.closed_path(), &p);
        let fp = format_footprint(sys.basis_footprint(b.id), &p);
        text.push(format!("{} = {path}", b.id));
        text.push(format!("  footprint = {fp}"));
        loops.push(json!({"id": b.id.to_string(), "loop": path, "footprint": fp}));
    }
    let n = sys.basis().len();
    text.push(format!("generated by {n} element{}", if n == 1 { "" } else { "s" }));
    Ok(Report {
        text,
        json: json!({"basis": loops, "generators": n}),
        ok: true,
    })
}

fn decompose(ctx: &Ctx, file: &FsPath, path: &str) -> Outcome {
    let p = load(file)?;
    let conv = ctx.convergent(&p)?;
    let f = parse_closed_path(path, &p)?;
    let mut sys = PiSystem::new(conv)?;
    let cert = sys.decompose(&f)?;
    let report = sys.verify(&f, &cert)?;
    let mut text = Vec::new();
    let mut entries = Vec::new();
    for e in &cert.entries {
        let conj = format_path(&e.conjugator, &p);
        text.push(format!(
            "ε={} ctx=({},{}) basis={} conj={conj}",
            e.sign,
            p.display_word(&e.left),
            p.display_word(&e.right),
            e.basis
        ));
        entries.push(json!({
            "sign": e.sign.to_string(),
            "left": p.display_word(&e.left).to_string(),
            "right": p.display_word(&e.right).to_string(),
            "basis": e.basis.to_string(),
            "conjugator": conj,
        }));
    }
    let pi = format_pi(&cert.pi, &p);
    let fp = format_footprint(&report.footprint, &p);
    text.push(format!("pi = {pi}"));
    text.push(format!("footprint = {fp}"));
    text.push(format!("verified: {}", yes(report.is_ok())));
    Ok(Report {
        text,
        json: json!({"entries": entries, "pi": pi, "footprint": fp, "verified": report.is_ok()}),
        ok: report.is_ok(),
    })
}

fn footprint_cmd(ctx: &Ctx, file: &FsPath, path: &str) -> Outcome {
    let p = load(file)?;
    let conv = ctx.convergent(&p)?;
    let f = parse_path(path, &p)?;
    let fp = format_footprint(&footprint(&f, &conv)?, &p);
    Ok(Report {
        text: vec![format!("footprint = {fp}")],
        json: json!({"footprint": fp, "closed": f.is_closed()}),
        ok: true,
    })
}

fn transport(ctx: &Ctx, sigma: &FsPath, upsilon: &FsPath, map: &FsPath) -> Outcome {
    let (s, u) = (load(sigma)?, load(upsilon)?);
    let (cs, cu) = (ctx.convergent(&s)?, ctx.convergent(&u)?);
    let text = fs::read_to_string(map).map_err(|e| Failure::Usage(format!("{}: {e}", map.display())))?;
    let m = TranslationMap::parse(&text, &s, &u).map_err(|e| Failure::Usage(format!("{}: {e}", map.display())))?;
    let report = check_translation(&cs, &cu, &m)?;
    if !report.is_ok() {
        let side = |s: &Side| match s {
            Side::Sigma => "sigma",
            Side::Upsilon => "upsilon",
        };
        let mut text = vec!["translation map rejected".to_string()];
        let mut problems = Vec::new();
        for (s, what) in &report.rule_failures {
            text.push(format!("rule not preserved: {what} ({})", side(s)));
            problems.push(json!({"kind": "rule", "name": what, "side": side(s)}));
        }
        for (s, what) in &report.round_trip_failures {
            text.push(format!("round trip fails: {what} ({})", side(s)));
            problems.push(json!({"kind": "round_trip", "name": what, "side": side(s)}));
        }
        return Ok(Report {
            text,
            json: json!({"accepted": false, "problems": problems}),
            ok: false,
        });
    }
    let t = Transport::new(cs, cu, &m)?;
    let basis: Vec<_> = PiSystem::new(cu)?
        .basis()
        .iter()
        .map(|b| b.closed_path().clone())
        .collect();
    let gens = t.transported_generators(&basis)?;
    let mut text = Vec::new();
    let mut loops = Vec::new();
    for (label, l) in &gens {
        let path = format_path(l, &s);
        text.push(format!("{label} = {path}"));
        loops.push(json!({"label": label, "loop": path}));
    }
    text.push(format!("{} generators", gens.len()));
    Ok(Report {
        text,
        json: json!({"accepted": true, "generators": loops}),
        ok: true,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        fuel: cli.fuel,
        assume_terminating: cli.assume_terminating,
        max_len: cli.max_len,
    };
    let (name, outcome) = match &cli.command {
        Command::Check { file } => ("check", check(&ctx, file)),
        Command::Normalize { file, word } => ("normalize", normalize(&ctx, file, word)),
        Command::Equal { file, u, v } => ("equal", equal(&ctx, file, u, v)),
        Command::CriticalPairs { file } => ("critical-pairs", critical_pairs(&ctx, file)),
        Command::Complete { file } => ("complete", complete(&ctx, file)),
        Command::PiBasis { file } => ("pi-basis", pi_basis(&ctx, file)),
        Command::Decompose { file, path } => ("decompose", decompose(&ctx, file, path)),
        Command::Footprint { file, path } => ("footprint", footprint_cmd(&ctx, file, path)),
        Command::Transport { sigma, upsilon, map } => ("transport", transport(&ctx, sigma, upsilon, map)),
    };
    match outcome {
        Ok(report) => {
            match cli.format {
                Format::Text => {
                    for line in &report.text {
                        println!("{line}");
                    }
                }
                Format::Json => {
                    let mut doc = json!({"schema": 1, "command": name, "ok": report.ok});
                    if let (Value::Object(doc), Value::Object(body)) = (&mut doc, report.json) {
                        doc.extend(body);
                    }
                    println!("{}", serde_json::to_string_pretty(&doc).expect("json values serialize"));
                }
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("polyrewrite {name}: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Negative(msg)) => {
            eprintln!("polyrewrite {name}: {msg}");
            ExitCode::from(1)
        }
    }
}
