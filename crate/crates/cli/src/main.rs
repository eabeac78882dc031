use std::cell::OnceCell;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use condal_core::io::{element_to_json, event_to_json, read_algebra, read_cmeasure, read_kb, read_measure, CMeasureDoc};
use condal_core::logic::{
    basic_events, entails, klm_harness, nm_consequence, parse, parse_nm_query, to_element, HarnessMode, KlmRule,
};
use condal_core::measure_free::{interval_relation, to_interval, Relation};
use condal_core::probability::{
    check_cp_axioms, find_nonconvex_witness, separability_witness, ChainViolation, CpViolation, TwoPlaceAssignment,
};
use condal_core::trees::AtomTree;
use condal_core::{
    canonical_extension, format_rational, CElement, CLInterpretation, CMeasure, CondFormula, ConditionalAlgebra, Engine,
    Error, Event, EventAlgebra, KnowledgeBase,
};

#[derive(Parser)]
#[command(name = "condal", version, about = "Boolean algebras of conditionals, their probabilities and logic")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List the atoms of the conditional algebra.
    Atoms {
        #[arg(long)]
        algebra: PathBuf,
        /// Only the atoms below this basic conditional.
        #[arg(long)]
        cond: Option<String>,
        /// Print the atom tree.
        #[arg(long)]
        tree: bool,
    },
    /// Decide equality or order, or evaluate a term.
    Query {
        #[arg(long)]
        algebra: PathBuf,
        #[command(subcommand)]
        query: Query,
    },
    /// Probabilities on the conditional algebra.
    Measure {
        #[arg(long)]
        algebra: PathBuf,
        /// Probability on the atoms of the event algebra.
        #[arg(long, conflicts_with = "cmeasure")]
        measure: Option<PathBuf>,
        /// Probability on the atoms of the conditional algebra.
        #[arg(long)]
        cmeasure: Option<PathBuf>,
        #[command(subcommand)]
        action: MeasureAction,
    },
    /// Entailment from a knowledge base of conditionals.
    Entail {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long, value_enum, default_value_t = EngineArg::Fast)]
        engine: EngineArg,
        #[command(subcommand)]
        action: EntailAction,
    },
    /// Relation of two conditionals in the algebra and as intervals.
    Compare {
        #[arg(long)]
        algebra: PathBuf,
        left: String,
        right: String,
    },
}

#[derive(Subcommand)]
enum Query {
    Equal { left: String, right: String },
    Leq { left: String, right: String },
    Eval { term: String },
}

#[derive(Subcommand)]
enum MeasureAction {
    /// Atom weights of the canonical extension.
    Extend,
    /// Probability of a term.
    Measure { term: String },
    /// Chain-rule check, with the first failing triple.
    Separable,
    /// Check the axioms of conditional probability.
    CpCheck,
    /// Two separable measures whose midpoint is not separable.
    Nonconvex,
}

#[derive(Subcommand)]
enum EntailAction {
    Query {
        formula: String,
    },
    /// Nonmonotonic consequence `phi |~ psi`.
    Nmc {
        query: String,
    },
    /// Check the KLM rules for the consequence relation of the knowledge base.
    Klm {
        /// Random instances per rule instead of all of them.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Fast,
    Brute,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Fast => Engine::Fast,
            EngineArg::Brute => Engine::Brute,
        }
    }
}

/// What a command produced: exit status plus both renderings.
struct Report {
    code: u8,
    text: Vec<String>,
    json: Value,
}

impl Report {
    fn new(code: u8, text: Vec<String>, json: Value) -> Self {
        Report { code, text, json }
    }
}

enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = std::result::Result<Report, Failure>;

struct Session {
    alg: EventAlgebra,
    calg: OnceCell<ConditionalAlgebra>,
}

impl Session {
    fn new(alg: EventAlgebra) -> Self {
        Session { alg, calg: OnceCell::new() }
    }

    fn load(path: &Path) -> std::result::Result<Self, Failure> {
        Ok(Session::new(read_algebra(&read_file(path)?)?))
    }

    fn calg(&self) -> &ConditionalAlgebra {
        self.calg.get_or_init(|| ConditionalAlgebra::new(&self.alg))
    }

    fn term(&self, s: &str) -> std::result::Result<(CondFormula, CElement), Failure> {
        let f = parse(s, &self.alg)?;
        let t = to_element(self.calg(), &f)?;
        Ok((f, t))
    }

    fn basic(&self, f: &CondFormula) -> std::result::Result<Option<(Event, Event)>, Failure> {
        match f {
            CondFormula::Basic(a, b) => {
                let (a, b) = basic_events(&self.alg, a, b)?;
                Ok(Some((a.meet(&b)?, b)))
            }
            _ => Ok(None),
        }
    }

    fn atom_label(&self, rank: u64) -> String {
        CLInterpretation::from_rank(self.calg(), rank).map(|e| e.render(&self.alg)).unwrap_or_default()
    }

    fn conditional(&self, a: &Event, b: &Event) -> String {
        format!("({} | {})", self.alg.render(a), self.alg.render(b))
    }
}

fn read_file(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Atoms { algebra, cond, tree } => cmd_atoms(&algebra, cond.as_deref(), tree),
        Command::Query { algebra, query } => cmd_query(&algebra, query),
        Command::Measure { algebra, measure, cmeasure, action } => {
            cmd_measure(&algebra, measure.as_deref(), cmeasure.as_deref(), action)
        }
        Command::Entail { kb, engine, action } => cmd_entail(&kb, engine.into(), action),
        Command::Compare { algebra, left, right } => cmd_compare(&algebra, &left, &right),
    };
    match outcome {
        Ok(report) => {
            match cli.output {
                Output::Text => {
                    for line in &report.text {
                        println!("{line}");
                    }
                }
                Output::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable")),
            }
            ExitCode::from(report.code)
        }
        Err(failure) => {
            let (code, msg) = match failure {
                Failure::Core(e) if e.is_cap_exceeded() => (3, e.to_string()),
                Failure::Core(e) => (2, e.to_string()),
                Failure::Usage(msg) => (2, msg),
            };
            match cli.output {
                Output::Text => eprintln!("error: {msg}"),
                Output::Json => println!("{}", json!({ "error": msg, "exit_code": code })),
            }
            ExitCode::from(code)
        }
    }
}

fn cmd_atoms(path: &Path, cond: Option<&str>, tree: bool) -> Outcome {
    let s = Session::load(path)?;
    let calg = s.calg();
    let count = calg.atom_count();
    let mut text = Vec::new();
    let size = if count < 128 { format!(" = {}", 1u128 << count) } else { String::new() };
    let noun = if count == 1 { "atom" } else { "atoms" };
    text.push(format!("{count} {noun}, |C(A)| = 2^{count}{size}"));
    let mut json = json!({ "atom_count": count });

    let selected: Vec<u64> = match cond {
        None => (0..count as u64).collect(),
        Some(c) => {
            let (f, t) = s.term(c)?;
            let (a, b) = s
                .basic(&f)?
                .ok_or_else(|| Failure::Usage(format!("`{c}` is not a basic conditional")))?;
            let k = calg.count_atoms_below(&a, &b)?;
            text.push(format!("{}: {k} atoms below (n!·|a∧b|/|b| = {count}·{}/{})", s.conditional(&a, &b), a.count(), b.count()));
            json["conditional"] = json!(s.conditional(&a, &b));
            json["atoms_below"] = json!(k);
            t.ranks().collect()
        }
    };
    let listed: Vec<Value> = selected
        .iter()
        .map(|&r| {
            text.push(format!("  {:>4}  {}", r + 1, s.atom_label(r)));
            let perm: Vec<String> = calg.perm(r as usize).iter().map(|&i| s.alg.label(i as usize).to_string()).collect();
            json!({ "rank": r, "order": perm })
        })
        .collect();
    json["atoms"] = Value::from(listed);
    if tree {
        let t = AtomTree::build(&s.alg);
        let rendered = t.render_text(&s.alg);
        text.push("tree:".into());
        text.extend(rendered.lines().map(|l| format!("  {l}")));
        json["tree"] = Value::from(rendered.lines().collect::<Vec<_>>());
    }
    Ok(Report::new(0, text, json))
}

fn cmd_query(path: &Path, query: Query) -> Outcome {
    let s = Session::load(path)?;
    match query {
        Query::Equal { left, right } => {
            let (f, x) = s.term(&left)?;
            let (g, y) = s.term(&right)?;
            let (verdict, how) = match (s.basic(&f)?, s.basic(&g)?) {
                (Some((a, b)), Some((c, d))) => {
                    let (v, clause) = s.calg().equal_basic_explained(&a, &b, &c, &d)?;
                    (v, clause.describe().to_string())
                }
                _ => (x == y, "semantic comparison of atom sets".to_string()),
            };
            Ok(verdict_report(verdict, &how))
        }
        Query::Leq { left, right } => {
            let (f, x) = s.term(&left)?;
            let (g, y) = s.term(&right)?;
            let (verdict, how) = match (s.basic(&f)?, s.basic(&g)?) {
                (Some((a, b)), Some((c, d))) => {
                    let (v, clause) = s.calg().leq_basic(&a, &b, &c, &d)?;
                    (v, clause.describe().to_string())
                }
                _ => (x.leq(&y)?, "semantic comparison of atom sets".to_string()),
            };
            Ok(verdict_report(verdict, &how))
        }
        Query::Eval { term } => {
            let (_, t) = s.term(&term)?;
            let mut text = vec![format!("{} of {} atoms", t.count(), s.calg().atom_count())];
            text.extend(t.ranks().map(|r| format!("  {:>4}  {}", r + 1, s.atom_label(r))));
            let basic = s.calg().recognize_basic(&t);
            let mut json = json!({ "atoms": element_to_json(&t), "basic": Value::Null });
            if let Some((a, b)) = basic {
                text.push(format!("equals the basic conditional {}", s.conditional(&a, &b)));
                json["basic"] = json!({
                    "consequent": event_to_json(&s.alg, &a),
                    "antecedent": event_to_json(&s.alg, &b),
                });
            }
            Ok(Report::new(0, text, json))
        }
    }
}

fn verdict_report(verdict: bool, how: &str) -> Report {
    Report::new(
        if verdict { 0 } else { 1 },
        vec![format!("{verdict} ({how})")],
        json!({ "result": verdict, "clause": how }),
    )
}

fn cmd_measure(path: &Path, measure: Option<&Path>, cmeasure: Option<&Path>, action: MeasureAction) -> Outcome {
    let s = Session::load(path)?;
    let calg = s.calg();
    let p = measure.map(|m| read_file(m).and_then(|j| Ok(read_measure(&j, &s.alg)?))).transpose()?;
    let given = cmeasure.map(|m| read_file(m).and_then(|j| Ok(read_cmeasure(&j, calg)?))).transpose()?;
    let mu = || -> std::result::Result<CMeasure, Failure> {
        match (&p, &given) {
            (Some(p), _) => Ok(canonical_extension(calg, p)?),
            (None, Some(mu)) => Ok(mu.clone()),
            (None, None) => Err(Failure::Usage("give --measure or --cmeasure".into())),
        }
    };
    match action {
        MeasureAction::Extend => {
            let p = p.as_ref().ok_or_else(|| Failure::Usage("extend needs --measure".into()))?;
            let mu = canonical_extension(calg, p)?;
            let text = mu
                .weights()
                .iter()
                .enumerate()
                .map(|(r, w)| format!("  {:>4}  {}  {}", r + 1, s.atom_label(r as u64), format_rational(w)))
                .collect();
            Ok(Report::new(0, text, serde_json::to_value(CMeasureDoc::of(&mu)).expect("serializable")))
        }
        MeasureAction::Measure { term } => {
            let (f, t) = s.term(&term)?;
            let value = mu()?.measure(&t)?;
            let mut text = vec![format_rational(&value)];
            let mut json = json!({ "value": format_rational(&value) });
            if let (Some(p), Some((a, b))) = (&p, s.basic(&f)?) {
                let ratio = p.prob(&a.meet(&b)?)? / p.prob(&b)?;
                text.push(format!("P(a∧b)/P(b) = {}", format_rational(&ratio)));
                json["conditional_probability"] = json!(format_rational(&ratio));
            }
            Ok(Report::new(0, text, json))
        }
        MeasureAction::Separable => match separability_witness(calg, &mu()?)? {
            None => Ok(Report::new(0, vec!["separable: true".into()], json!({ "separable": true }))),
            Some(v) => {
                let (text, witness) = chain_violation(&s, &v);
                Ok(Report::new(1, vec!["separable: false".into(), text], json!({ "separable": false, "witness": witness })))
            }
        },
        MeasureAction::CpCheck => {
            let cp = match (&p, &given) {
                (Some(p), _) => TwoPlaceAssignment::from_event_measure(p),
                _ => TwoPlaceAssignment::from_cmeasure(calg, &mu()?)?,
            };
            let report = check_cp_axioms(&cp);
            let mut text = Vec::new();
            let mut rows = serde_json::Map::new();
            for (name, v) in report.rows() {
                let line = match v {
                    None => format!("{name}: pass"),
                    Some(v) => format!("{name}: FAIL at {}", cp_violation(&s, v)),
                };
                text.push(line);
                rows.insert(name.to_string(), v.as_ref().map_or(Value::Null, |v| json!(cp_violation(&s, v))));
            }
            Ok(Report::new(if report.all_pass() { 0 } else { 1 }, text, json!({ "all_pass": report.all_pass(), "violations": rows })))
        }
        MeasureAction::Nonconvex => {
            let w = find_nonconvex_witness(calg)?;
            let weights = |p: &condal_core::EventMeasure| p.weights().iter().map(format_rational).collect::<Vec<_>>();
            let (line, violation) = chain_violation(&s, &w.violation);
            let text = vec![
                format!("P1 = [{}]", weights(&w.p1).join(", ")),
                format!("P2 = [{}]", weights(&w.p2).join(", ")),
                "both canonical extensions are separable; their midpoint is not:".into(),
                line,
            ];
            let json = json!({ "p1": weights(&w.p1), "p2": weights(&w.p2), "midpoint_violation": violation });
            Ok(Report::new(0, text, json))
        }
    }
}

fn chain_violation(s: &Session, v: &ChainViolation) -> (String, Value) {
    let (a, b, c) = (s.alg.render(&v.a), s.alg.render(&v.b), s.alg.render(&v.c));
    let text = format!(
        "  mu({a} | {c}) = {} but mu({a} | {b})·mu({b} | {c}) = {}",
        format_rational(&v.lhs),
        format_rational(&v.rhs)
    );
    let json = json!({
        "a": event_to_json(&s.alg, &v.a),
        "b": event_to_json(&s.alg, &v.b),
        "c": event_to_json(&s.alg, &v.c),
        "lhs": format_rational(&v.lhs),
        "rhs": format_rational(&v.rhs),
    });
    (text, json)
}

fn cp_violation(s: &Session, v: &CpViolation) -> String {
    let r = |e: &Event| s.alg.render(e);
    match v {
        CpViolation::Cp1 { b } => format!("b = {}", r(b)),
        CpViolation::Cp2 { a1, a2, b } => format!("a1 = {}, a2 = {}, b = {}", r(a1), r(a2), r(b)),
        CpViolation::Cp3 { a, b } => format!("a = {}, b = {}", r(a), r(b)),
        CpViolation::Cp4 { a, b, c } => format!("a = {}, b = {}, c = {}", r(a), r(b), r(c)),
    }
}

fn cmd_entail(path: &Path, engine: Engine, action: EntailAction) -> Outcome {
    let (alg, kb) = read_kb(&read_file(path)?)?;
    let s = Session::new(alg);
    match action {
        EntailAction::Query { formula } => {
            let goal = parse(&formula, &s.alg)?;
            let r = entails(s.calg(), &kb, &goal, engine)?;
            Ok(entailment_report(&s, r.entailed, r.witness.as_ref()))
        }
        EntailAction::Nmc { query } => {
            let (phi, psi) = parse_nm_query(&query)?;
            let r = nm_consequence(s.calg(), &kb, &phi, &psi, engine)?;
            Ok(entailment_report(&s, r.entailed, r.witness.as_ref()))
        }
        EntailAction::Klm { samples, seed } => {
            let mode = match samples {
                Some(samples) => HarnessMode::Sampled { samples, seed },
                None => HarnessMode::Exhaustive,
            };
            klm_report(&s, &kb, mode, engine)
        }
    }
}

fn entailment_report(s: &Session, entailed: bool, witness: Option<&CLInterpretation>) -> Report {
    let mut text = vec![format!("entailed: {entailed}")];
    let mut json = json!({ "entailed": entailed, "witness": Value::Null });
    if let Some(w) = witness {
        text.push(format!("witness: {} = {}", w, w.render(&s.alg)));
        let labels: Vec<&str> = w.order().iter().map(|&i| s.alg.label(i)).collect();
        json["witness"] = json!({ "order": w.order(), "labels": labels });
    }
    Report::new(if entailed { 0 } else { 1 }, text, json)
}

fn klm_report(s: &Session, kb: &KnowledgeBase, mode: HarnessMode, engine: Engine) -> Outcome {
    let reports = klm_harness(s.calg(), kb, mode, engine)?;
    let mut text = Vec::new();
    let mut rows = Vec::new();
    for r in &reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let extra = if r.rule.is_preferential() { "" } else { " (not a System P rule)" };
        text.push(format!(
            "{:<28} {status}  checked={} skipped={} failures={}{extra}",
            r.rule.name(),
            r.checked,
            r.skipped,
            r.failures
        ));
        let failure = r.first_failure.as_ref().map(|events| {
            let rendered: Vec<String> = events.iter().map(|e| s.alg.render(e)).collect();
            text.push(format!("    first failure: ({})", rendered.join(", ")));
            rendered
        });
        rows.push(json!({
            "rule": r.rule.name(),
            "passed": r.passed(),
            "checked": r.checked,
            "skipped": r.skipped,
            "failures": r.failures,
            "first_failure": failure,
        }));
    }
    let all = reports.iter().all(|r| r.passed() || r.rule == KlmRule::ConditionalExcludedMiddle);
    Ok(Report::new(if all { 0 } else { 1 }, text, json!({ "rules": rows })))
}

fn cmd_compare(path: &Path, left: &str, right: &str) -> Outcome {
    let s = Session::load(path)?;
    let (f, x) = s.term(left)?;
    let (g, y) = s.term(right)?;
    let in_algebra = Relation::from_order(x.leq(&y)?, y.leq(&x)?);
    let mut text = vec![format!("conditional algebra: {left} {} {right}", in_algebra.symbol())];
    let mut json = json!({ "algebra": in_algebra.symbol(), "interval": Value::Null });
    match (s.basic(&f)?, s.basic(&g)?) {
        (Some((a, b)), Some((c, d))) => {
            let (i, j) = (to_interval(&a, &b)?, to_interval(&c, &d)?);
            let rel = interval_relation(&i, &j)?;
            text.push(format!("intervals: {} {} {}", i.render(&s.alg), rel.symbol(), j.render(&s.alg)));
            json["interval"] = json!(rel.symbol());
            json["intervals"] = json!([i.render(&s.alg), j.render(&s.alg)]);
        }
        _ => text.push("intervals: only basic conditionals have an interval form".into()),
    }
    Ok(Report::new(0, text, json))
}
