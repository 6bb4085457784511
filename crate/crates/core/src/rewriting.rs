//! String rewriting systems, Turing machines, and the compilation of a machine
//! into a rewriting system that maps `a_L u a_R` to `a_L w ♦`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub type Sym = Arc<str>;
pub type Word = Vec<Sym>;

pub fn sym(s: &str) -> Sym {
    Arc::from(s)
}

/// Splits on whitespace.
pub fn word(s: &str) -> Word {
    s.split_whitespace().map(sym).collect()
}

pub fn show_word(w: &[Sym]) -> String {
    w.iter().map(|s| &**s).collect::<Vec<_>>().join(" ")
}

/// Prefix reserved for the primed helper symbols `a_L′`, `a_R′`.
pub const PRIME: &str = "'";

pub fn primed(s: &Sym) -> Sym {
    sym(&format!("{PRIME}{s}"))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("symbol {0} is not in the alphabet")]
    UnknownSymbol(String),
    #[error("rule sides must be nonempty")]
    EmptySide,
    #[error("symbol {0} clashes with the machine's own symbols")]
    Clash(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("malformed machine: {0}")]
    Machine(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Srs {
    pub alphabet: BTreeSet<Sym>,
    pub rules: Vec<Rule>,
}

/// One rewrite: rule `rule` applied at offset `pos`, giving `result`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: usize,
    pub pos: usize,
    pub result: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reach {
    Found {
        target: Word,
        trace: Vec<RewriteStep>,
    },
    /// The whole (finite) closure was explored without a hit.
    Exhausted {
        explored: usize,
    },
    BudgetHit {
        explored: usize,
    },
}

impl Srs {
    pub fn new(alphabet: impl IntoIterator<Item = Sym>, rules: Vec<Rule>) -> Result<Self, RewriteError> {
        let alphabet: BTreeSet<Sym> = alphabet.into_iter().collect();
        for r in &rules {
            if r.lhs.is_empty() || r.rhs.is_empty() {
                return Err(RewriteError::EmptySide);
            }
            if let Some(s) = r.lhs.iter().chain(&r.rhs).find(|s| !alphabet.contains(*s)) {
                return Err(RewriteError::UnknownSymbol(s.to_string()));
            }
        }
        Ok(Srs { alphabet, rules })
    }

    /// Alphabet inferred from the rules.
    pub fn from_rules(rules: Vec<Rule>) -> Result<Self, RewriteError> {
        let alphabet: Vec<Sym> = rules.iter().flat_map(|r| r.lhs.iter().chain(&r.rhs).cloned()).collect();
        Srs::new(alphabet, rules)
    }

    /// One `lhs -> rhs` per line, symbols separated by whitespace.
    pub fn parse(text: &str) -> Result<Self, RewriteError> {
        let mut rules = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (l, r) =
                line.split_once("->").ok_or(RewriteError::Parse { line: no + 1, msg: "expected `->`".into() })?;
            rules.push(Rule { lhs: word(l), rhs: word(r) });
        }
        Srs::from_rules(rules)
    }

    pub fn successors(&self, w: &[Sym]) -> Vec<RewriteStep> {
        let mut out = Vec::new();
        for (k, r) in self.rules.iter().enumerate() {
            let n = r.lhs.len();
            if n > w.len() {
                continue;
            }
            for pos in 0..=w.len() - n {
                if w[pos..pos + n] == r.lhs[..] {
                    let mut result = w[..pos].to_vec();
                    result.extend_from_slice(&r.rhs);
                    result.extend_from_slice(&w[pos + n..]);
                    out.push(RewriteStep { rule: k, pos, result });
                }
            }
        }
        out
    }

    pub fn one_step(&self, w: &[Sym]) -> BTreeSet<Word> {
        self.successors(w).into_iter().map(|s| s.result).collect()
    }

    /// Breadth-first search for a string satisfying `target`. Each level is
    /// expanded in lexicographic order so traces are reproducible.
    pub fn reach(&self, w: &[Sym], target: impl Fn(&[Sym]) -> bool, budget: usize) -> Reach {
        let mut parent: HashMap<Word, Option<(Word, usize, usize)>> = HashMap::new();
        parent.insert(w.to_vec(), None);
        let mut level = vec![w.to_vec()];
        let mut explored = 0;
        while !level.is_empty() {
            level.sort();
            let mut next = Vec::new();
            for u in level {
                if target(&u) {
                    return Reach::Found { trace: trace_to(&parent, &u), target: u };
                }
                if explored >= budget {
                    return Reach::BudgetHit { explored };
                }
                explored += 1;
                for st in self.successors(&u) {
                    if !parent.contains_key(&st.result) {
                        parent.insert(st.result.clone(), Some((u.clone(), st.rule, st.pos)));
                        next.push(st.result);
                    }
                }
            }
            level = next;
        }
        Reach::Exhausted { explored }
    }

    /// The full reflexive-transitive closure, or `None` past `budget` strings.
    pub fn closure(&self, w: &[Sym], budget: usize) -> Option<BTreeSet<Word>> {
        let mut seen = BTreeSet::new();
        seen.insert(w.to_vec());
        let mut queue = VecDeque::from([w.to_vec()]);
        while let Some(u) = queue.pop_front() {
            for v in self.one_step(&u) {
                if seen.insert(v.clone()) {
                    if seen.len() > budget {
                        return None;
                    }
                    queue.push_back(v);
                }
            }
        }
        Some(seen)
    }
}

fn trace_to(parent: &HashMap<Word, Option<(Word, usize, usize)>>, end: &Word) -> Vec<RewriteStep> {
    let mut out = Vec::new();
    let mut cur = end.clone();
    while let Some(Some((prev, rule, pos))) = parent.get(&cur) {
        out.push(RewriteStep { rule: *rule, pos: *pos, result: cur.clone() });
        cur = prev.clone();
    }
    out.reverse();
    out
}

impl fmt::Display for Srs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{} -> {}", show_word(&r.lhs), show_word(&r.rhs))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    L,
    R,
    N,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub q: Sym,
    pub a: Sym,
    pub r: Sym,
    pub b: Sym,
    pub mv: Move,
}

impl Transition {
    pub fn new(q: &str, a: &str, r: &str, b: &str, mv: Move) -> Self {
        Transition { q: sym(q), a: sym(a), r: sym(r), b: sym(b), mv }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} -> {} {} {:?}", self.q, self.a, self.r, self.b, self.mv)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuringMachine {
    pub states: Vec<Sym>,
    pub tape: Vec<Sym>,
    pub input: Vec<Sym>,
    pub output: Vec<Sym>,
    pub blank: Sym,
    pub delta: Vec<Transition>,
    pub q0: Sym,
    pub qa: Sym,
}

/// How a direct run ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Run {
    /// Reached the accepting state; `output` is `Some(w)` when the
    /// configuration is a final one `q_a w`.
    Accepted {
        output: Option<Word>,
        steps: usize,
    },
    Stuck {
        steps: usize,
    },
    OutOfSteps,
}

impl TuringMachine {
    pub fn validate(&self) -> Result<(), RewriteError> {
        let bad = |m: String| Err(RewriteError::Machine(m));
        let has_state = |q: &Sym| self.states.contains(q);
        let has_sym = |a: &Sym| self.tape.contains(a);
        if !has_sym(&self.blank) {
            return bad("blank is not a tape symbol".into());
        }
        if self.input.iter().chain(&self.output).any(|c| *c == self.blank) {
            return bad("blank in the input or output alphabet".into());
        }
        if let Some(c) = self.input.iter().chain(&self.output).find(|c| !has_sym(c)) {
            return bad(format!("{c} is not a tape symbol"));
        }
        if !has_state(&self.q0) || !has_state(&self.qa) {
            return bad("unknown initial or accepting state".into());
        }
        if let Some(s) = self.states.iter().find(|q| has_sym(q)) {
            return bad(format!("{s} is both a state and a tape symbol"));
        }
        for t in &self.delta {
            if !has_state(&t.q) || !has_state(&t.r) || !has_sym(&t.a) || !has_sym(&t.b) {
                return bad(format!("transition {t} uses unknown symbols"));
            }
            if t.q == self.qa {
                return bad("the accepting state has an outgoing transition".into());
            }
        }
        Ok(())
    }

    pub fn is_deterministic(&self) -> bool {
        let mut keys = BTreeSet::new();
        self.delta.iter().all(|t| keys.insert((t.q.clone(), t.a.clone())))
    }

    /// Runs from the initial configuration `u q_0` (head on the last input
    /// symbol), taking the first applicable transition at each step.
    pub fn run(&self, u: &[Sym], max_steps: usize) -> Run {
        // `left` ends with the head cell; an empty `left` means a blank head.
        let mut left: Vec<Sym> = u.to_vec();
        let mut right: VecDeque<Sym> = VecDeque::new();
        let mut q = self.q0.clone();
        for steps in 0..=max_steps {
            if q == self.qa {
                return Run::Accepted { output: self.final_output(&left, &right), steps };
            }
            if steps == max_steps {
                break;
            }
            let head = left.last().cloned().unwrap_or_else(|| self.blank.clone());
            let Some(t) = self.delta.iter().find(|t| t.q == q && t.a == head) else {
                return Run::Stuck { steps };
            };
            match left.last_mut() {
                Some(h) => *h = t.b.clone(),
                None => left.push(t.b.clone()),
            }
            match t.mv {
                Move::N => {}
                Move::L => {
                    let h = left.pop().expect("head cell present");
                    right.push_front(h);
                }
                Move::R => {
                    let c = right.pop_front().unwrap_or_else(|| self.blank.clone());
                    left.push(c);
                }
            }
            q = t.r.clone();
        }
        Run::OutOfSteps
    }

    fn final_output(&self, left: &[Sym], right: &VecDeque<Sym>) -> Option<Word> {
        if left.iter().any(|c| *c != self.blank) {
            return None;
        }
        let mut w: Word = right.iter().cloned().collect();
        while w.last() == Some(&self.blank) {
            w.pop();
        }
        w.iter().all(|c| self.output.contains(c)).then_some(w)
    }

    /// Header lines `states:`, `tape:`, `input:`, `output:`, `blank:`,
    /// `start:`, `accept:`, then transitions `q a -> r b {L|R|N}`.
    pub fn parse(text: &str) -> Result<Self, RewriteError> {
        let mut fields: HashMap<&str, Word> = HashMap::new();
        let mut delta = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| RewriteError::Parse { line: no + 1, msg: msg.into() };
            if let Some((l, r)) = line.split_once("->") {
                let (l, r) = (word(l), word(r));
                let [q, a] = <[Sym; 2]>::try_from(l).map_err(|_| err("expected `q a` before `->`"))?;
                let [s, b, m] = <[Sym; 3]>::try_from(r).map_err(|_| err("expected `r b move` after `->`"))?;
                let mv = match &*m {
                    "L" => Move::L,
                    "R" => Move::R,
                    "N" => Move::N,
                    _ => return Err(err("move must be L, R or N")),
                };
                delta.push(Transition { q, a, r: s, b, mv });
            } else if let Some((k, v)) = line.split_once(':') {
                fields.insert(k.trim(), word(v));
            } else {
                return Err(err("expected a header or a transition"));
            }
        }
        let mut get = |k: &str| fields.remove(k).ok_or(RewriteError::Machine(format!("missing `{k}:`")));
        let one = |w: Word, k: &str| -> Result<Sym, RewriteError> {
            <[Sym; 1]>::try_from(w).map(|[s]| s).map_err(|_| RewriteError::Machine(format!("`{k}:` takes one symbol")))
        };
        let tm = TuringMachine {
            states: get("states")?,
            tape: get("tape")?,
            input: get("input")?,
            output: get("output")?,
            blank: one(get("blank")?, "blank")?,
            q0: one(get("start")?, "start")?,
            qa: one(get("accept")?, "accept")?,
            delta,
        };
        tm.validate()?;
        Ok(tm)
    }
}

impl fmt::Display for TuringMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states: {}", show_word(&self.states))?;
        writeln!(f, "tape: {}", show_word(&self.tape))?;
        writeln!(f, "input: {}", show_word(&self.input))?;
        writeln!(f, "output: {}", show_word(&self.output))?;
        writeln!(f, "blank: {}", self.blank)?;
        writeln!(f, "start: {}", self.q0)?;
        writeln!(f, "accept: {}", self.qa)?;
        for t in &self.delta {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Result of compiling a machine.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub srs: Srs,
    pub a_l: Sym,
    pub a_r: Sym,
    pub fin: Sym,
    /// R-moves on a blank that the rule schemas cannot fire at the left end
    /// when material follows the head (`a_L q c` with `c` a tape symbol).
    pub uncovered: Vec<Transition>,
}

/// Instantiates the eleven rule schemas over `δ`, the tape alphabet and the
/// output alphabet. The schemas are taken exactly as stated.
pub fn compile_tm(tm: &TuringMachine, a_l: &str, a_r: &str, fin: &str) -> Result<Compiled, RewriteError> {
    tm.validate()?;
    let (a_l, a_r, fin) = (sym(a_l), sym(a_r), sym(fin));
    let (l1, r1) = (primed(&a_l), primed(&a_r));
    let own: BTreeSet<&Sym> = tm.states.iter().chain(&tm.tape).collect();
    for s in [&a_l, &a_r, &fin, &l1, &r1] {
        if own.contains(s) {
            return Err(RewriteError::Clash(s.to_string()));
        }
    }
    if let Some(s) = own.iter().find(|s| s.starts_with(PRIME)) {
        return Err(RewriteError::Clash(s.to_string()));
    }
    let distinct: BTreeSet<&Sym> = [&a_l, &a_r, &fin].into_iter().collect();
    if distinct.len() < 3 {
        return Err(RewriteError::Clash("a_L, a_R and the final symbol must differ".into()));
    }
    let blank = &tm.blank;
    let mut rules = Vec::new();
    let mut rule = |lhs: Vec<&Sym>, rhs: Vec<&Sym>| {
        rules.push(Rule { lhs: lhs.into_iter().cloned().collect(), rhs: rhs.into_iter().cloned().collect() })
    };
    rule(vec![&a_r], vec![&tm.q0, &r1]);
    let mut uncovered = Vec::new();
    for t in &tm.delta {
        let (q, a, r, b) = (&t.q, &t.a, &t.r, &t.b);
        match t.mv {
            Move::N => {
                rule(vec![a, q], vec![b, r]);
                if a == blank {
                    rule(vec![&a_l, q], vec![&a_l, b, r]);
                }
            }
            Move::L => {
                rule(vec![a, q], vec![r, b]);
                if a == blank {
                    rule(vec![&a_l, q], vec![&a_l, r, b]);
                }
            }
            Move::R => {
                for c in &tm.tape {
                    rule(vec![a, q, c], vec![b, c, r]);
                }
                rule(vec![a, q, &r1], vec![b, blank, r, &r1]);
                if a == blank {
                    rule(vec![&a_l, q, &r1], vec![&a_l, b, blank, r, &r1]);
                    uncovered.push(t.clone());
                }
            }
        }
    }
    rule(vec![blank, &tm.qa], vec![&tm.qa]);
    rule(vec![blank, &r1], vec![&r1]);
    rule(vec![&a_l, &tm.qa], vec![&a_l, &l1]);
    for c in &tm.output {
        rule(vec![&l1, c], vec![c, &l1]);
    }
    rule(vec![&l1, &r1], vec![&fin]);
    let alphabet = own.into_iter().cloned().chain([a_l.clone(), a_r.clone(), fin.clone(), l1, r1]);
    let srs = Srs::new(alphabet, rules)?;
    Ok(Compiled { srs, a_l, a_r, fin, uncovered })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Both sides produce the same outputs (empty when the machine gives none).
    Agree {
        output: Option<Word>,
    },
    Disagree {
        machine: Option<Word>,
        rewriting: BTreeSet<Word>,
    },
    BudgetHit,
}

/// Compares a direct run of a deterministic machine on `u` with the
/// `♦`-terminated strings in the closure of `a_L u a_R`.
pub fn implements_check(tm: &TuringMachine, u: &[Sym], budget: usize) -> Result<Verdict, RewriteError> {
    let c = compile_tm(tm, "a_L", "a_R", "fin")?;
    let machine = match tm.run(u, budget) {
        Run::Accepted { output, .. } => output,
        Run::Stuck { .. } => None,
        Run::OutOfSteps => return Ok(Verdict::BudgetHit),
    };
    let mut start = vec![c.a_l.clone()];
    start.extend_from_slice(u);
    start.push(c.a_r.clone());
    let Some(closure) = c.srs.closure(&start, budget) else {
        return Ok(Verdict::BudgetHit);
    };
    let mut outputs = BTreeSet::new();
    for v in &closure {
        if v.last() == Some(&c.fin) {
            match v.split_first() {
                Some((h, rest)) if *h == c.a_l => outputs.insert(rest[..rest.len() - 1].to_vec()),
                // A ♦-string not of the form a_L w ♦ is a disagreement.
                _ => outputs.insert(v.clone()),
            };
        }
    }
    let expected: BTreeSet<Word> = machine.iter().cloned().collect();
    Ok(if outputs == expected {
        Verdict::Agree { output: machine }
    } else {
        Verdict::Disagree { machine, rewriting: outputs }
    })
}

/// Small deterministic machines over `{0, 1}` used throughout the tests.
pub mod toys {
    use super::*;

    fn machine(states: &str, delta: Vec<Transition>) -> TuringMachine {
        TuringMachine {
            states: word(states),
            tape: word("0 1 _"),
            input: word("0 1"),
            output: word("0 1"),
            blank: sym("_"),
            delta,
            q0: sym("q0"),
            qa: sym("qa"),
        }
    }

    /// Walks left over `1`s and accepts at the blank.
    pub fn identity() -> TuringMachine {
        machine(
            "q0 qa",
            vec![Transition::new("q0", "1", "q0", "1", Move::L), Transition::new("q0", "_", "qa", "_", Move::N)],
        )
    }

    /// Appends a `1` to a unary numeral.
    pub fn successor() -> TuringMachine {
        machine(
            "q0 q1 qa",
            vec![
                Transition::new("q0", "1", "q0", "1", Move::L),
                Transition::new("q0", "_", "q1", "1", Move::N),
                Transition::new("q1", "1", "qa", "1", Move::L),
            ],
        )
    }

    /// Blanks out a unary numeral.
    pub fn eraser() -> TuringMachine {
        machine(
            "q0 qa",
            vec![Transition::new("q0", "1", "q0", "_", Move::L), Transition::new("q0", "_", "qa", "_", Move::N)],
        )
    }

    pub fn all() -> Vec<(&'static str, TuringMachine)> {
        vec![("identity", identity()), ("successor", successor()), ("eraser", eraser())]
    }
}

/// Every string of length at most `max_len` over `alphabet`.
pub fn strings_upto(alphabet: &[Sym], max_len: usize) -> Vec<Word> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Word> = vec![vec![]];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |c| {
                    let mut v = w.clone();
                    v.push(c.clone());
                    v
                })
            })
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn srs(t: &str) -> Srs {
        Srs::parse(t).unwrap()
    }

    #[test]
    fn one_step_examples() {
        let s = srs("a c -> b b a");
        assert_eq!(s.one_step(&word("x a c y")), BTreeSet::from([word("x b b a y")]));
        assert!(s.one_step(&word("x y")).is_empty());
        let s = srs("a a -> b");
        assert_eq!(s.one_step(&word("a a a")), BTreeSet::from([word("b a"), word("a b")]));
    }

    #[test]
    fn reach_examples() {
        let s = srs("a -> b");
        match s.reach(&word("a"), |w| w == word("b").as_slice(), 10) {
            Reach::Found { trace, .. } => assert_eq!(trace.len(), 1),
            r => panic!("{r:?}"),
        }
        let empty = Srs::from_rules(vec![]).unwrap();
        assert!(matches!(empty.reach(&word("a"), |w| w.is_empty(), 10), Reach::Exhausted { .. }));
    }

    #[test]
    fn single_transition_machine() {
        let tm = TuringMachine {
            states: word("q0 qa"),
            tape: word("1 _"),
            input: word("1"),
            output: word("1"),
            blank: sym("_"),
            delta: vec![Transition::new("q0", "_", "qa", "_", Move::N)],
            q0: sym("q0"),
            qa: sym("qa"),
        };
        let c = compile_tm(&tm, "a_L", "a_R", "fin").unwrap();
        let has = |l: &str, r: &str| c.srs.rules.contains(&Rule { lhs: word(l), rhs: word(r) });
        assert!(has("a_R", "q0 'a_R"));
        assert!(has("a_L q0", "a_L _ qa"));
        assert!(has("_ qa", "qa"));
        assert!(has("_ 'a_R", "'a_R"));
        assert!(has("a_L qa", "a_L 'a_L"));
        assert!(has("'a_L 1", "1 'a_L"));
        assert!(has("'a_L 'a_R", "fin"));
        assert_eq!(implements_check(&tm, &[], 1000).unwrap(), Verdict::Agree { output: Some(vec![]) });
    }

    #[test]
    fn clash_is_rejected() {
        assert!(matches!(compile_tm(&toys::identity(), "q0", "a_R", "fin"), Err(RewriteError::Clash(_))));
    }

    #[test]
    fn successor_example() {
        let tm = toys::successor();
        assert_eq!(tm.run(&word("1 1"), 100), Run::Accepted { output: Some(word("1 1 1")), steps: 4 });
        assert_eq!(
            implements_check(&tm, &word("1 1"), 10_000).unwrap(),
            Verdict::Agree { output: Some(word("1 1 1")) }
        );
    }

    #[test]
    fn toy_machines_agree_up_to_length_four() {
        for (name, tm) in toys::all() {
            let alpha = if name == "successor" { word("1") } else { word("0 1") };
            for u in strings_upto(&alpha, 4) {
                let v = implements_check(&tm, &u, 100_000).unwrap();
                assert!(matches!(v, Verdict::Agree { .. }), "{name} on {u:?}: {v:?}");
            }
        }
    }

    #[test]
    fn left_boundary_is_preserved() {
        for (_, tm) in toys::all() {
            let c = compile_tm(&tm, "a_L", "a_R", "fin").unwrap();
            let start = word("a_L 1 1 1 a_R");
            for v in c.srs.closure(&start, 100_000).unwrap() {
                assert_eq!(&*v[0], "a_L");
            }
        }
    }

    #[test]
    fn text_formats_round_trip() {
        let tm = toys::successor();
        assert_eq!(TuringMachine::parse(&tm.to_string()).unwrap(), tm);
        let c = compile_tm(&tm, "a_L", "a_R", "fin").unwrap();
        assert_eq!(Srs::parse(&c.srs.to_string()).unwrap().rules, c.srs.rules);
    }
}
