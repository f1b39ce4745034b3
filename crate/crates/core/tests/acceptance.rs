use std::process::ExitCode;
use std::time::{Duration, Instant};

use finlie_core::group::{build_group, Preset};
use finlie_core::oracle::{run_suite_timed, Outcome, Scope};
use finlie_core::ring::{extend, make_ring, RingKind};
use finlie_core::torus::{make_torus, RegularityTable};
use finlie_core::variety::{inner_product_rhs, TorusCharacter};
use finlie_core::Budget;

use Preset::{Sp4, GL2, SL2, SL3};
use RingKind::{EqualChar, Witt};

/// Criteria whose statement is known not to hold as written.
const KNOWN_RED: &[u32] = &[4];

const FILTRATION_LIMIT: Duration = Duration::from_secs(60);
const VARIETY_LIMIT: Duration = Duration::from_secs(120);
const SL3_SAMPLES: u64 = 100_000;
const REGULARITY_BUDGET: Budget = Budget(1 << 16);

type RingSpec = (u32, u32, u32, RingKind);

const Z4: RingSpec = (2, 2, 1, Witt);
const F2T2: RingSpec = (2, 2, 1, EqualChar);
const GR16: RingSpec = (2, 2, 2, Witt);
const DESK: [RingSpec; 3] = [Z4, F2T2, GR16];

/// Every ring of the two families with at most 16 elements.
fn rings_up_to_16() -> Vec<RingSpec> {
    let mut out = Vec::new();
    for p in [2u32, 3, 5, 7, 11, 13] {
        for r in 1..=4 {
            for n in 1..=4 {
                if (p as u64).pow(r * n) > 16 {
                    continue;
                }
                out.push((p, r, n, Witt));
                if r > 1 {
                    out.push((p, r, n, EqualChar));
                }
            }
        }
    }
    out
}

struct Line {
    pass: bool,
    notes: Vec<String>,
}

impl Line {
    fn new() -> Line {
        Line { pass: true, notes: Vec::new() }
    }

    fn require(&mut self, ok: bool, note: impl Into<String>) {
        if !ok {
            self.pass = false;
            self.notes.push(note.into());
        }
    }

    /// Run one suite and fold its reports in; returns the wall time.
    fn suite(&mut self, id: &str, scope: &Scope) -> Duration {
        let t0 = Instant::now();
        let mut clock = || t0.elapsed().as_micros() as u64;
        match run_suite_timed(id, scope, &mut clock) {
            Ok(reports) => {
                for rep in reports {
                    match &rep.outcome {
                        Outcome::Pass => {}
                        Outcome::Fail(w) => self.require(false, format!("{id} on {}: {w}", rep.scope)),
                        Outcome::Aborted(w) => self.require(false, format!("{id} on {}: aborted, {w}", rep.scope)),
                    }
                }
            }
            Err(e) => self.require(false, format!("{id} on {}: {e}", scope.descriptor())),
        }
        t0.elapsed()
    }
}

fn scope(preset: Preset, (p, r, n, kind): RingSpec) -> Scope {
    Scope::new(preset, p, r, n, kind)
}

fn filtration() -> Line {
    let mut l = Line::new();
    let t0 = Instant::now();
    for ring in DESK {
        l.suite("filtration", &scope(SL2, ring));
    }
    let mut s = scope(SL3, Z4);
    s.samples = SL3_SAMPLES;
    l.suite("filtration", &s);
    let spent = t0.elapsed();
    l.require(spent <= FILTRATION_LIMIT, format!("took {spent:?}"));
    l
}

fn iwahori() -> Line {
    let mut l = Line::new();
    for ring in DESK {
        l.suite("iwahori", &scope(SL2, ring));
    }
    l
}

fn bruhat() -> Line {
    let mut l = Line::new();
    for (ring, order) in [(Z4, 48), (GR16, 3840)] {
        let s = scope(SL2, ring);
        match s.group() {
            Ok(g) => l.require(g.order_formula() == order, format!("|G| = {} for {}", g.order_formula(), s.descriptor())),
            Err(e) => l.require(false, e.to_string()),
        }
        l.suite("bruhat", &s);
    }
    l
}

fn rank1() -> Line {
    let mut l = Line::new();
    let g = build_group(SL2, make_ring(2, 2, 1, Witt).unwrap(), 0).unwrap();
    let r = g.ring();
    let (a, b) = (0, g.datum().neg(0));
    let lhs = g.commutator(&g.root_element(a, 1), &g.root_element(b, r.from_int(2)));
    let rhs = g.mul(&g.diag(&[r.from_int(3), r.from_int(3)]), &g.root_element(a, r.from_int(2)));
    l.require(lhs == rhs, format!("[p_α(1), p_-α(2)] = {lhs:?}"));
    for ring in [Z4, (2, 3, 1, Witt), (3, 2, 1, EqualChar)] {
        l.suite("rank1-literal", &scope(SL2, ring));
    }
    let mut corrected = Line::new();
    for ring in [Z4, (2, 3, 1, Witt), (3, 2, 1, EqualChar)] {
        corrected.suite("rank1", &scope(SL2, ring));
    }
    l.notes.push(format!("corrected form and (τ, u) uniqueness: {}", if corrected.pass { "pass" } else { "FAIL" }));
    l.notes.extend(corrected.notes);
    l
}

fn chevalley() -> Line {
    let mut l = Line::new();
    for ring in rings_up_to_16() {
        for preset in [SL3, Sp4] {
            l.suite("chevalley", &scope(preset, ring));
        }
    }
    l
}

fn stratification() -> Line {
    let mut l = Line::new();
    l.suite("stratification", &scope(SL3, Z4));
    l
}

fn norm() -> Line {
    let mut l = Line::new();
    for ring in [Z4, F2T2] {
        for preset in [SL2, GL2] {
            l.suite("norm", &scope(preset, ring));
        }
    }
    let z4 = make_ring(2, 2, 1, Witt).unwrap();
    let (gr, emb) = extend(&z4, 2).unwrap();
    let omega = (0..gr.card()).find(|&x| x != gr.one() && gr.pow(x, 3) == gr.one());
    match omega {
        Some(w) => {
            let n = |x| gr.norm(x, 1, 2).unwrap();
            let one_two_w = gr.add(gr.one(), gr.mul(gr.from_int(2), w));
            l.require(n(w) == emb.apply(z4.one()), "N(ω) ≠ 1");
            l.require(n(one_two_w) == emb.apply(z4.from_int(3)), "N(1+2ω) ≠ 3");
        }
        None => l.require(false, "no primitive cube root of unity in GR(4,2)"),
    }
    l
}

fn regularity() -> Line {
    let mut l = Line::new();
    let mut skipped = Vec::new();
    for ring in rings_up_to_16() {
        for preset in [SL2, GL2] {
            let mut s = scope(preset, ring);
            s.budget = REGULARITY_BUDGET;
            l.suite("regularity", &s);
            let g = s.group().unwrap();
            for w in 0..g.datum().weyl().len() {
                let t = make_torus(&g, w).unwrap();
                let tf = t.fixed_group(1, s.budget).unwrap();
                let table = RegularityTable::new(&t, &tf, s.n_max, s.budget).unwrap();
                if !table.skipped().is_empty() {
                    skipped.push(format!("{} twist {w} n {:?}", s.descriptor(), table.skipped()));
                }
            }
        }
    }
    if !skipped.is_empty() {
        l.notes.push(format!("levels beyond the budget, not compared: {}", skipped.join("; ")));
    }
    let b = Budget::default();
    let g = build_group(SL2, make_ring(2, 2, 1, Witt).unwrap(), 0).unwrap();
    let t = make_torus(&g, 0).unwrap();
    let tf = t.fixed_group(1, b).unwrap();
    let table = RegularityTable::new(&t, &tf, 6, b).unwrap();
    let chars = tf.characters(b).unwrap();
    let regular = chars.iter().filter(|c| table.is_regular(&tf, c).unwrap().regular).count();
    l.require((regular, chars.len()) == (1, 2), format!("{regular} regular of {}", chars.len()));
    l
}

fn lift_independence() -> Line {
    let mut l = Line::new();
    for ring in DESK {
        for preset in [SL2, GL2] {
            l.suite("lift-independence", &scope(preset, ring));
        }
    }
    l
}

fn inner_product() -> Line {
    let mut l = Line::new();
    for preset in [SL2, GL2] {
        l.suite("inner-product", &scope(preset, Z4));
    }
    let b = Budget::default();
    let g = build_group(SL2, make_ring(2, 2, 1, Witt).unwrap(), 0).unwrap();
    let t = make_torus(&g, 0).unwrap();
    let tf = t.fixed_group(1, b).unwrap();
    let reg = RegularityTable::new(&t, &tf, 6, b).unwrap();
    let chars = tf.characters(b).unwrap();
    let (regs, trivs): (Vec<_>, Vec<_>) = chars.iter().partition(|c| reg.is_regular(&tf, c).unwrap().regular);
    let side = TorusCharacter { torus: &t, fixed: &tf, theta: regs[0], regularity: &reg };
    let triv = TorusCharacter { torus: &t, fixed: &tf, theta: trivs[0], regularity: &reg };
    let rep = inner_product_rhs(&side, &side, false).unwrap();
    let ws: Vec<usize> = rep.witnesses.iter().map(|w| w.0).collect();
    l.require(rep.count == 2 && ws == [0, 1], format!("regular θ: count {}, witnesses {ws:?}", rep.count));
    let zero = inner_product_rhs(&side, &triv, true).unwrap().count;
    l.require(zero == 0, format!("regular vs trivial: {zero}"));
    l
}

fn variety() -> Line {
    let mut l = Line::new();
    for level in [1, 2] {
        let mut s = scope(SL2, Z4);
        s.level = level;
        let spent = l.suite("variety", &s);
        l.require(spent <= VARIETY_LIMIT, format!("level {level} took {spent:?}"));
    }
    l
}

fn class_bound() -> Line {
    let mut l = Line::new();
    for preset in [SL2, GL2] {
        l.suite("class-bound", &scope(preset, Z4));
    }
    l
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Line); 12] = [
        (1, "filtration", filtration),
        (2, "iwahori", iwahori),
        (3, "bruhat", bruhat),
        (4, "rank-1 closed form", rank1),
        (5, "chevalley", chevalley),
        (6, "stratification", stratification),
        (7, "norm", norm),
        (8, "regularity", regularity),
        (9, "lift independence", lift_independence),
        (10, "inner product", inner_product),
        (11, "variety", variety),
        (12, "class bound", class_bound),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let t0 = Instant::now();
        let line = run();
        let verdict = if line.pass { "PASS" } else { "FAIL" };
        let mut text = format!("{verdict} {id:>2} {name} ({:.1} s)", t0.elapsed().as_secs_f64());
        for n in &line.notes {
            text.push_str("\n        ");
            text.push_str(n);
        }
        println!("{text}");
        if line.pass == KNOWN_RED.contains(&id) {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
