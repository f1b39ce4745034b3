//! Registered property checks and the suite driver.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::{conjugacy_class_count, conjugate_positive, enumerate_group, Naive, NaiveBruhat};
use crate::abelian::Character;
use crate::decomp::{
    admissible_levels, iwahori_decompose, rank1_commutator, rank1_literal_form, BruhatFrame, IwahoriRecord,
    Rank1Constants, StratFrame,
};
use crate::error::{Budget, Error, Result};
use crate::group::{Group, Mat, Preset};
use crate::ring::{make_ring, Elem, Embedding, Ring, RingKind};
use crate::rootdata::{RootDatum, RootIdx};
use crate::torus::{
    make_torus, transport_character, weyl_transporter, FixedGroup, RegularityTable, Torus,
};
use crate::variety::{
    hat_sigma_fixed_count, inner_product_rhs, SigmaPoint, TorusCharacter, VarietyFrame,
};

/// Seed used by sampled checks unless the scope overrides it.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// A replaced structure constant `N_{α,β}` term, for mutation testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fault {
    pub alpha: RootIdx,
    pub beta: RootIdx,
    pub term: usize,
    pub constant: i64,
}

/// What a suite runs on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scope {
    pub preset: Preset,
    pub p: u32,
    pub r: u32,
    pub n: u32,
    pub kind: RingKind,
    /// Highest extension level for the variety checks.
    pub level: u32,
    /// Horizon for norm and regularity checks.
    pub n_max: u32,
    pub budget: Budget,
    /// Pairs drawn when an exhaustive pass would exceed the budget.
    pub samples: u64,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Scope {
    pub fn new(preset: Preset, p: u32, r: u32, n: u32, kind: RingKind) -> Scope {
        Scope {
            preset,
            p,
            r,
            n,
            kind,
            level: 1,
            n_max: 6,
            budget: Budget::default(),
            samples: 100_000,
            seed: DEFAULT_SEED,
            fault: None,
        }
    }

    pub fn descriptor(&self) -> String {
        format!("{} {}({},{},{}) level {}", self.preset.name(), self.kind.name(), self.p, self.r, self.n, self.level)
    }

    pub fn group(&self) -> Result<Group> {
        let ring = make_ring(self.p, self.r, self.n, self.kind)?;
        let mut datum = RootDatum::new(self.preset.datum_kind())?;
        if let Some(f) = self.fault {
            datum = datum.with_constant(f.alpha, f.beta, f.term, f.constant);
        }
        Group::with_datum(self.preset, ring, Arc::new(datum), 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// A counterexample that replays under the same scope.
    Fail(String),
    /// The check could not run to completion (for example over budget).
    Aborted(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub property: String,
    pub scope: String,
    pub mode: Mode,
    pub outcome: Outcome,
    pub wall_micros: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

type Verdict = Result<(Mode, Option<String>)>;
type Check = fn(&Group, &Scope) -> Verdict;

const CHECKS: &[(&str, Check)] = &[
    ("closure", check_closure),
    ("filtration", check_filtration),
    ("iwahori", check_iwahori),
    ("bruhat", check_bruhat),
    ("rank1", check_rank1),
    ("rank1-literal", check_rank1_literal),
    ("chevalley", check_chevalley),
    ("stratification", check_stratification),
    ("norm", check_norm),
    ("regularity", check_regularity),
    ("lift-independence", check_lift_independence),
    ("inner-product", check_inner_product),
    ("variety", check_variety),
    ("class-bound", check_class_bound),
];

/// Members of `all`; the literal rank-one form is known not to hold and is
/// only run on request.
const NOT_IN_ALL: &[&str] = &["rank1-literal"];

/// Ids accepted by [`run_suite`], `all` included.
pub fn registered_suites() -> Vec<&'static str> {
    let mut ids: Vec<&'static str> = CHECKS.iter().map(|c| c.0).collect();
    ids.push("all");
    ids
}

/// `run_suite` without wall-clock timing.
pub fn run_suite(id: &str, scope: &Scope) -> Result<Vec<VerificationReport>> {
    run_suite_timed(id, scope, &mut || 0)
}

/// `run_suite`, timing each check with `clock` (microseconds).
pub fn run_suite_timed(id: &str, scope: &Scope, clock: &mut dyn FnMut() -> u64) -> Result<Vec<VerificationReport>> {
    let selected: Vec<&(&str, Check)> = if id == "all" {
        CHECKS.iter().filter(|c| !NOT_IN_ALL.contains(&c.0)).collect()
    } else {
        let c = CHECKS
            .iter()
            .find(|c| c.0 == id)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {id}")))?;
        alloc::vec![c]
    };
    let g = scope.group()?;
    let mut out = Vec::new();
    for (name, check) in selected {
        let start = clock();
        let (mode, outcome) = match check(&g, scope) {
            Ok((mode, None)) => (mode, Outcome::Pass),
            Ok((mode, Some(w))) => (mode, Outcome::Fail(w)),
            Err(e) => (Mode::Exhaustive, Outcome::Aborted(format!("{e}"))),
        };
        let wall_micros = clock().saturating_sub(start);
        out.push(VerificationReport {
            property: String::from(*name),
            scope: scope.descriptor(),
            mode,
            outcome,
            wall_micros,
        });
    }
    Ok(out)
}

fn exhaustive(witness: Option<String>) -> Verdict {
    Ok((Mode::Exhaustive, witness))
}

fn check_closure(g: &Group, s: &Scope) -> Verdict {
    let a = enumerate_group(g, s.budget)?;
    let b = enumerate_group(g, s.budget)?;
    if a != b {
        return exhaustive(Some("two closure runs differ".into()));
    }
    exhaustive(None)
}

/// Inverses of every element, by powering.
fn inverse_table(nv: &Naive, els: &[Mat]) -> BTreeMap<Mat, Mat> {
    els.iter().map(|x| (*x, nv.inv(x))).collect()
}

fn check_filtration(g: &Group, s: &Scope) -> Verdict {
    let nv = Naive::new(g);
    let els = enumerate_group(g, s.budget)?;
    let inv = inverse_table(&nv, &els);
    let r = g.ring().r();
    let by_level: Vec<Vec<Mat>> = (0..=r).map(|i| els.iter().copied().filter(|x| nv.level(x) >= i).collect()).collect();
    let mut pairs = Vec::new();
    for i in 0..r {
        for j in i.max(1)..r {
            pairs.push((i, j));
        }
    }
    let total: u64 = pairs.iter().map(|&(i, j)| (by_level[i as usize].len() * by_level[j as usize].len()) as u64).sum();
    let test = |i: u32, j: u32, a: &Mat, b: &Mat| -> Option<String> {
        let c = nv.product(&[a, b, &inv[a], &inv[b]]);
        let lv = nv.level(&c);
        (lv < (i + j).min(r)).then(|| format!("g = {a:?} in G^{i}, h = {b:?} in G^{j}, level([g,h]) = {lv}"))
    };
    if total <= s.budget.0 {
        for &(i, j) in &pairs {
            for a in &by_level[i as usize] {
                for b in &by_level[j as usize] {
                    if let Some(w) = test(i, j, a, b) {
                        return exhaustive(Some(w));
                    }
                }
            }
        }
        return exhaustive(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let per = s.samples.div_ceil(pairs.len().max(1) as u64);
    for &(i, j) in &pairs {
        let (gi, gj) = (&by_level[i as usize], &by_level[j as usize]);
        for _ in 0..per {
            let a = &gi[(rng.next_u64() % gi.len() as u64) as usize];
            let b = &gj[(rng.next_u64() % gj.len() as u64) as usize];
            if let Some(w) = test(i, j, a, b) {
                return Ok((Mode::Sampled { count: per * pairs.len() as u64, seed: s.seed }, Some(w)));
            }
        }
    }
    Ok((Mode::Sampled { count: per * pairs.len() as u64, seed: s.seed }, None))
}

fn check_iwahori(g: &Group, s: &Scope) -> Verdict {
    let nv = Naive::new(g);
    let lower = nv.unitriangular(false, 1, s.budget)?;
    let diag = nv.diagonal(1, s.budget)?;
    let upper = nv.unitriangular(true, 1, s.budget)?;
    s.budget.check((lower.len() * diag.len() * upper.len()) as u64)?;
    let mut table: BTreeMap<Mat, Vec<IwahoriRecord>> = BTreeMap::new();
    for l in &lower {
        for t in &diag {
            let lt = nv.mul(l, t);
            for u in &upper {
                table.entry(nv.mul(&lt, u)).or_default().push(IwahoriRecord { u_minus: *l, t: *t, u: *u });
            }
        }
    }
    for x in enumerate_group(g, s.budget)? {
        let sols = table.get(&x).map(|v| v.as_slice()).unwrap_or(&[]);
        let fast = iwahori_decompose(g, &x);
        if nv.level(&x) >= 1 {
            match fast {
                Ok(rec) if sols == [rec] => {}
                other => return exhaustive(Some(format!("g = {x:?}: fast {other:?}, search {sols:?}"))),
            }
        } else if !sols.is_empty() || fast.is_ok() {
            return exhaustive(Some(format!("g = {x:?} outside G^1 was factored")));
        }
    }
    exhaustive(None)
}

fn check_bruhat(g: &Group, s: &Scope) -> Verdict {
    let els = enumerate_group(g, s.budget)?;
    let dat = g.datum();
    let mut frames = alloc::vec![dat.weyl_identity()];
    if dat.weyl_longest() != dat.weyl_identity() {
        frames.push(dat.weyl_longest());
    }
    for v in frames {
        let frame = BruhatFrame::new(g, v);
        let nb = NaiveBruhat::new(g, &frame, s.budget)?;
        if nb.tuples() != els.len() || nb.image_size() != els.len() {
            return exhaustive(Some(format!(
                "v' = {v}: {} tuples cover {} of {} elements",
                nb.tuples(),
                nb.image_size(),
                els.len()
            )));
        }
        for x in &els {
            let sols = nb.solutions(x);
            match frame.decompose(g, x) {
                Ok(rec) if sols == [rec] => {}
                other => return exhaustive(Some(format!("v' = {v}, g = {x:?}: fast {other:?}, search {sols:?}"))),
            }
        }
    }
    exhaustive(None)
}

/// Every `(α, x, y, b, c)` with `x ∈ m^b`, `y ∈ m^c` and `(b, c)` admissible.
fn rank1_inputs(g: &Group) -> Vec<(RootIdx, u32, u32, u32, u32)> {
    let r = g.ring();
    let mut out = Vec::new();
    for a in 0..g.datum().root_count() {
        for (b, c) in admissible_levels(r.r()) {
            for x in r.ideal_elements(b) {
                for y in r.ideal_elements(c) {
                    out.push((a, x, y, b, c));
                }
            }
        }
    }
    out
}

fn check_rank1(g: &Group, _s: &Scope) -> Verdict {
    let nv = Naive::new(g);
    let consts = Rank1Constants::solve(g)?;
    let r = g.ring();
    let top = r.r().saturating_sub(1);
    let lams = r.enumerate(crate::ring::ElemFilter::OnePlusM(top), Budget::default())?;
    for (a, x, y, b, c) in rank1_inputs(g) {
        let comm = nv.commutator(&g.root_element(a, x), &g.root_element(g.datum().neg(a), y));
        let taus: BTreeSet<Mat> = lams.iter().map(|&l| g.coroot_element(a, l)).collect::<Result<_>>()?;
        let mut sols = Vec::new();
        for tau in &taus {
            for v in r.ideal_elements(top) {
                let u = g.root_element(a, v);
                if nv.mul(tau, &u) == comm {
                    sols.push((*tau, u));
                }
            }
        }
        let label = g.datum().label(a);
        match rank1_commutator(g, &consts, a, x, b, y, c) {
            Ok(pair) if sols == [pair] => {}
            other => {
                return exhaustive(Some(format!("α = {label}, x = {x}, y = {y}: fast {other:?}, search {sols:?}")))
            }
        }
    }
    exhaustive(None)
}

fn check_rank1_literal(g: &Group, _s: &Scope) -> Verdict {
    let nv = Naive::new(g);
    let consts = Rank1Constants::solve(g)?;
    for (a, x, y, _, _) in rank1_inputs(g) {
        let comm = nv.commutator(&g.root_element(a, x), &g.root_element(g.datum().neg(a), y));
        let lit = rank1_literal_form(g, a, consts.by_root[a].0, x, y)?;
        if lit != comm {
            let label = g.datum().label(a);
            return exhaustive(Some(format!("α = {label}, x = {x}, y = {y}: literal {lit:?}, commutator {comm:?}")));
        }
    }
    exhaustive(None)
}

fn check_chevalley(g: &Group, s: &Scope) -> Verdict {
    let nv = Naive::new(g);
    let dat = g.datum();
    let r = g.ring();
    let vals = r.ideal_elements(0);
    let n = dat.root_count();
    s.budget.check((n * n * vals.len() * vals.len()) as u64)?;
    for a in 0..n {
        for b in 0..n {
            if a == dat.neg(b) {
                continue;
            }
            let terms = dat.chevalley_pairs(a, b)?;
            for &x in &vals {
                for &y in &vals {
                    let prod = terms.iter().fold(nv.identity(), |acc, t| {
                        let v = r.mul(r.from_int(t.constant), r.mul(r.pow(x, t.i as u64), r.pow(y, t.j as u64)));
                        nv.mul(&acc, &g.root_element(t.root, v))
                    });
                    let comm = nv.commutator(&g.root_element(a, x), &g.root_element(b, y));
                    if prod != comm {
                        return exhaustive(Some(format!(
                            "α = {}, β = {}, x = {x}, y = {y}: expansion {prod:?}, commutator {comm:?}",
                            dat.label(a),
                            dat.label(b)
                        )));
                    }
                }
            }
        }
    }
    exhaustive(None)
}

fn check_stratification(g: &Group, s: &Scope) -> Verdict {
    let nv = Naive::new(g);
    let dat = g.datum();
    let u1 = nv.unitriangular(true, 1, s.budget)?;
    for x in 0..dat.weyl().len() {
        let nx = g.weyl_rep(x);
        let nxi = nv.monomial_inv(&nx);
        for v in 0..dat.weyl().len() {
            let frame = StratFrame::new(g, x, v);
            let px: BTreeSet<RootIdx> = conjugate_positive(g, x).into_iter().collect();
            let roots: BTreeSet<RootIdx> = conjugate_positive(g, v).into_iter().filter(|b| px.contains(b)).collect();
            let fast_roots: BTreeSet<RootIdx> = frame.z_roots().iter().copied().collect();
            if roots != fast_roots {
                return exhaustive(Some(format!("(x, v) = ({x}, {v}): roots {roots:?} vs {fast_roots:?}")));
            }
            let nvv = g.weyl_rep(v);
            let nvi = nv.monomial_inv(&nvv);
            let z1: BTreeSet<Mat> = u1
                .iter()
                .map(|u| nv.product(&[&nvv, u, &nvi]))
                .filter(|z| {
                    let back = nv.product(&[&nxi, z, &nx]);
                    nv.is_upper_uni(&back)
                })
                .collect();
            let fast: BTreeSet<Mat> = frame.z1_elements(g).into_iter().collect();
            if z1 != fast {
                return exhaustive(Some(format!("(x, v) = ({x}, {v}): Z^1 has {} elements, fast {}", z1.len(), fast.len())));
            }
            let id = nv.identity();
            if frame.stratify(g, &id).is_ok() {
                return exhaustive(Some(format!("(x, v) = ({x}, {v}): identity was labelled")));
            }
            let rev = frame.reversed_order();
            let mut labelled = 0;
            for z in z1.iter().filter(|z| **z != id) {
                let l1 = frame.stratify(g, z);
                let l2 = frame.stratify_with(g, z, &rev);
                match (&l1, &l2) {
                    (Ok(a), Ok(b)) if a == b && a.a == nv.level(z) => labelled += 1,
                    _ => return exhaustive(Some(format!("(x, v) = ({x}, {v}), z = {z:?}: {l1:?} vs {l2:?}"))),
                }
            }
            if labelled + 1 != z1.len() {
                return exhaustive(Some(format!("(x, v) = ({x}, {v}): strata miss elements")));
            }
        }
    }
    exhaustive(None)
}

/// `F_w = Ad(ŵ·twist) ∘ F_std` on an ambient group, by naive products.
struct NaiveFrob<'a> {
    nv: Naive<'a>,
    m: Mat,
    mi: Mat,
}

impl<'a> NaiveFrob<'a> {
    fn new(g: &'a Group, w: usize) -> NaiveFrob<'a> {
        let nv = Naive::new(g);
        let m = nv.mul(&g.weyl_rep(w), g.twist_rep());
        let mi = nv.monomial_inv(&m);
        NaiveFrob { nv, m, mi }
    }

    fn frob(&self, x: &Mat) -> Mat {
        self.nv.product(&[&self.m, &self.nv.group().frob_std(x, 1), &self.mi])
    }

    /// `M` has integer entries, so `F^k = Ad(M^k) ∘ F_std^k`.
    fn frob_pow(&self, x: &Mat, k: u32) -> Mat {
        let mk = (0..k).fold(self.nv.identity(), |acc, _| self.nv.mul(&acc, &self.m));
        let mik = self.nv.monomial_inv(&mk);
        self.nv.product(&[&mk, &self.nv.group().frob_std(x, k as u64), &mik])
    }

    /// `x·F^a(x)⋯` with `b/a` factors.
    fn norm(&self, x: &Mat, a: u32, b: u32) -> Mat {
        let mut acc = self.nv.identity();
        let mut cur = *x;
        for _ in 0..b / a {
            acc = self.nv.mul(&acc, &cur);
            cur = self.frob_pow(&cur, a);
        }
        acc
    }
}

fn tori(g: &Group) -> Result<Vec<Torus>> {
    (0..g.datum().weyl().len()).map(|w| make_torus(g, w)).collect()
}

fn check_norm(g: &Group, s: &Scope) -> Verdict {
    let mut sampled = None;
    for t in tori(g)? {
        for b in 1..=s.n_max {
            let amb = t.ambient(t.ambient_level(b))?;
            let ga = &amb.group;
            let nf = NaiveFrob::new(ga, t.twist());
            let nv = &nf.nv;
            let divisors: Vec<u32> = (1..=b).filter(|a| b % a == 0).collect();
            let size = t.fixed_candidates(&amb, b, 0, Budget(u64::MAX))?;
            let mut witness = None;
            let mut check = |x: &Mat| -> Result<()> {
                if witness.is_some() {
                    return Ok(());
                }
                let full = nf.norm(x, 1, b);
                for &a in &divisors {
                    let comp = t.norm(ga, &t.norm(ga, x, a, b)?, 1, a)?;
                    if comp != full {
                        witness = Some(format!("twist {}, t = {x:?}, a = {a}, b = {b}", t.twist()));
                    }
                }
                Ok(())
            };
            if size <= s.budget.0 {
                t.for_each_fixed(&amb, b, 0, s.budget, &mut check)?;
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(s.seed ^ b as u64);
                t.random_fixed(&amb, b, 0, Budget(u64::MAX), s.samples, &mut || rng.next_u64(), &mut check)?;
                let prev = match sampled {
                    Some(Mode::Sampled { count, .. }) => count,
                    _ => 0,
                };
                sampled = Some(Mode::Sampled { count: prev + s.samples, seed: s.seed });
            }
            if witness.is_some() {
                return Ok((sampled.unwrap_or(Mode::Exhaustive), witness));
            }
            let top = ga.ring().r() - 1;
            let is_fixed = |x: &Mat| nf.frob(x) == *x;
            let ker_f: BTreeSet<Mat> = nv.diagonal(top, s.budget)?.into_iter().filter(|x| is_fixed(x)).collect();
            let image: BTreeSet<Mat> = t.kernel_fixed(&amb, b, s.budget)?.iter().map(|x| nf.norm(x, 1, b)).collect();
            if image != ker_f {
                return exhaustive(Some(format!("twist {}, b = {b}: N(𝒯^(F^b)) ≠ 𝒯^F", t.twist())));
            }
            let lams = ga.ring().enumerate(crate::ring::ElemFilter::OnePlusM(top), s.budget)?;
            for a in 0..g.datum().root_count() {
                let ta: BTreeSet<Mat> = lams.iter().map(|&l| ga.coroot_element(a, l)).collect::<Result<_>>()?;
                if !ta.iter().all(|x| ta.contains(&nf.frob(x))) {
                    continue;
                }
                let target: BTreeSet<Mat> = ta.iter().copied().filter(|x| is_fixed(x)).collect();
                let image: BTreeSet<Mat> = ta
                    .iter()
                    .filter(|x| nf.frob_pow(x, b) == **x)
                    .map(|x| nf.norm(x, 1, b))
                    .collect();
                if image != target {
                    return exhaustive(Some(format!(
                        "twist {}, b = {b}, α = {}: N onto (𝒯^α)^F fails",
                        t.twist(),
                        g.datum().label(a)
                    )));
                }
            }
        }
    }
    Ok((sampled.unwrap_or(Mode::Exhaustive), None))
}

fn check_regularity(g: &Group, s: &Scope) -> Verdict {
    for t in tori(g)? {
        let tf = t.fixed_group(1, s.budget)?;
        let table = RegularityTable::new(&t, &tf, s.n_max, s.budget)?;
        let chars = tf.characters(s.budget)?;
        let mut images: Vec<Vec<Mat>> = Vec::new();
        for n in 1..=s.n_max {
            if table.skipped().contains(&n) {
                continue;
            }
            let amb = t.ambient(t.ambient_level(n))?;
            let ga = &amb.group;
            let nf = NaiveFrob::new(ga, t.twist());
            let emb = Embedding::new(tf.ambient.ring(), amb.ring())?;
            let pull: BTreeMap<Mat, Mat> = tf.structure.elements().iter().map(|x| (embed(ga, &emb, x), *x)).collect();
            let top = ga.ring().r() - 1;
            let lams = ga.ring().enumerate(crate::ring::ElemFilter::OnePlusM(top), s.budget)?;
            let inverses = batch_inv(ga.ring(), &lams)?;
            for a in 0..g.datum().root_count() {
                let ks: Vec<i32> = g.datum().weights().iter().map(|w| g.datum().pair_coroot(w, a)).collect();
                let mut stable = true;
                let mut img = Vec::new();
                for x in coroot_iter(ga, &ks, &lams, &inverses) {
                    let y = nf.frob_pow(&x, n);
                    if !in_coroot_image(ga, &ks, top, &y) {
                        stable = false;
                        break;
                    }
                    if x == y {
                        let z = nf.norm(&x, 1, n);
                        img.push(*pull.get(&z).ok_or_else(|| Error::Internal("norm left T^F".into()))?);
                    }
                }
                if stable {
                    images.push(img);
                }
            }
        }
        for (i, theta) in chars.iter().enumerate() {
            let mut naive = true;
            for img in &images {
                let mut nontrivial = false;
                for x in img {
                    nontrivial |= tf.value(theta, x)? != crate::abelian::qz(0, 1);
                }
                naive &= nontrivial;
            }
            let fast = table.is_regular(&tf, theta)?.regular;
            let upto = table.is_regular_upto(&tf, theta)?;
            if fast != naive || upto != naive {
                return exhaustive(Some(format!(
                    "twist {}, character {i}: minimal-m {fast}, all-n {upto}, search {naive}",
                    t.twist()
                )));
            }
        }
    }
    exhaustive(None)
}

/// Inverses of units by prefix products and a single ring inversion.
fn batch_inv(r: &Ring, xs: &[Elem]) -> Result<Vec<Elem>> {
    let mut prefix = Vec::with_capacity(xs.len());
    let mut acc = r.one();
    for &x in xs {
        prefix.push(acc);
        acc = r.mul(acc, x);
    }
    let mut inv = r.inv(acc)?;
    let mut out = alloc::vec![0; xs.len()];
    for i in (0..xs.len()).rev() {
        out[i] = r.mul(inv, prefix[i]);
        inv = r.mul(inv, xs[i]);
    }
    Ok(out)
}

/// `diag(λ^{k_j})` for each `λ`, `k_j = ⟨e_j, α̌⟩`.
fn coroot_iter<'a>(g: &'a Group, ks: &'a [i32], lams: &'a [Elem], inverses: &'a [Elem]) -> impl Iterator<Item = Mat> + 'a {
    let r = g.ring();
    lams.iter().zip(inverses).map(move |(&l, &li)| {
        let mut m = Mat::zero(g.dim());
        for (j, &k) in ks.iter().enumerate() {
            let base = if k >= 0 { l } else { li };
            m.set(j, j, (0..k.unsigned_abs()).fold(r.one(), |acc, _| r.mul(acc, base)));
        }
        m
    })
}

/// Whether `y = diag(λ^{k_j})` for some `λ ∈ 1 + m^top`, read off entrywise.
fn in_coroot_image(g: &Group, ks: &[i32], top: u32, y: &Mat) -> bool {
    let r = g.ring();
    let d = g.dim();
    if (0..d).any(|i| (0..d).any(|j| i != j && y.get(i, j) != 0)) {
        return false;
    }
    let Some(j0) = ks.iter().position(|&k| k == 1) else {
        return false;
    };
    let l = y.get(j0, j0);
    if !r.is_unit(l) || r.valuation(r.sub(l, r.one())) < top {
        return false;
    }
    ks.iter().enumerate().all(|(j, &k)| {
        let p = (0..k.unsigned_abs()).fold(r.one(), |acc, _| r.mul(acc, l));
        if k >= 0 {
            y.get(j, j) == p
        } else {
            r.mul(y.get(j, j), p) == r.one()
        }
    })
}

fn embed(g: &Group, emb: &Embedding, m: &Mat) -> Mat {
    let mut out = *m;
    for i in 0..g.dim() {
        for j in 0..g.dim() {
            out.set(i, j, emb.apply(m.get(i, j)));
        }
    }
    out
}

/// Whether `θ(t) = θ'(ŵ^{-1} t ŵ)` on all of `T^F`, evaluated pointwise.
fn transports(tf: &FixedGroup, tf_prime: &FixedGroup, lift: &Mat, theta: &Character, theta_prime: &Character) -> Result<bool> {
    let ga = &tf.ambient.group;
    let nv = Naive::new(ga);
    let wl = tf.ambient.embed(lift);
    let wi = nv.inv(&wl);
    for t in tf.structure.elements() {
        let x = nv.product(&[&wi, t, &wl]);
        if !tf_prime.structure.contains(&x) {
            return Ok(false);
        }
        if tf.value(theta, t)? != tf_prime.value(theta_prime, &x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

struct TorusData {
    torus: Torus,
    tf: FixedGroup,
    chars: Vec<Character>,
    table: RegularityTable,
}

fn torus_data(g: &Group, s: &Scope) -> Result<Vec<TorusData>> {
    tori(g)?
        .into_iter()
        .map(|torus| {
            let tf = torus.fixed_group(1, s.budget)?;
            let chars = tf.characters(s.budget)?;
            let table = RegularityTable::new(&torus, &tf, s.n_max.min(2), s.budget)?;
            Ok(TorusData { torus, tf, chars, table })
        })
        .collect()
}

fn check_lift_independence(g: &Group, s: &Scope) -> Verdict {
    let data = torus_data(g, s)?;
    let t1 = Naive::new(g).diagonal(1, s.budget)?;
    for a in &data {
        for b in &data {
            for class in weyl_transporter(&a.torus, &b.torus)? {
                let nv = Naive::new(g);
                let lifts: Vec<Mat> = t1.iter().map(|x| nv.mul(&class.lift, x)).collect();
                for (i, th) in a.chars.iter().enumerate() {
                    for (j, thp) in b.chars.iter().enumerate() {
                        let fast = transport_character(&a.tf, &b.tf, &class.lift, thp)? == *th;
                        for l in &lifts {
                            if transports(&a.tf, &b.tf, l, th, thp)? != fast {
                                return exhaustive(Some(format!(
                                    "tori ({}, {}), class {}, lift {l:?}, characters ({i}, {j})",
                                    a.torus.twist(),
                                    b.torus.twist(),
                                    class.w
                                )));
                            }
                        }
                    }
                }
            }
        }
    }
    exhaustive(None)
}

/// Whether `Ad(n_v)` intertwines `F_{T'}` with `F_T`, checked on every
/// diagonal member of `G(R_L)` with Teichmüller-type entries, `L` the common
/// ambient level.
fn naive_intertwines(a: &Torus, b: &Torus, v: usize, budget: Budget) -> Result<bool> {
    if a.period() != b.period() {
        return Ok(false);
    }
    let amb = a.ambient(2 * a.period())?;
    let ga = &amb.group;
    let fa = NaiveFrob::new(ga, a.twist());
    let fb = NaiveFrob::new(ga, b.twist());
    let nv = &fa.nv;
    let n = ga.weyl_rep(v);
    let ni = nv.monomial_inv(&n);
    let reps: Vec<u32> = ga.ring().residue_representatives().into_iter().filter(|&x| ga.ring().is_unit(x)).collect();
    for t in nv.diagonal_with(&reps, budget)? {
        if fa.frob(&nv.product(&[&n, &t, &ni])) != nv.product(&[&n, &fb.frob(&t), &ni]) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_inner_product(g: &Group, s: &Scope) -> Verdict {
    let data = torus_data(g, s)?;
    let weyl = g.datum().weyl().len();
    for a in &data {
        for b in &data {
            let classes: Vec<usize> = (0..weyl)
                .map(|v| Ok((v, naive_intertwines(&a.torus, &b.torus, v, s.budget)?)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|&(_, ok)| ok)
                .map(|(v, _)| v)
                .collect();
            for (i, th) in a.chars.iter().enumerate() {
                for (j, thp) in b.chars.iter().enumerate() {
                    let mut naive = 0;
                    for &v in &classes {
                        if transports(&a.tf, &b.tf, &g.weyl_rep(v), th, thp)? {
                            naive += 1;
                        }
                    }
                    let sa = TorusCharacter { torus: &a.torus, fixed: &a.tf, theta: th, regularity: &a.table };
                    let sb = TorusCharacter { torus: &b.torus, fixed: &b.tf, theta: thp, regularity: &b.table };
                    let fwd = inner_product_rhs(&sa, &sb, true)?.count;
                    let back = inner_product_rhs(&sb, &sa, true)?.count;
                    if fwd != naive || back != fwd {
                        return exhaustive(Some(format!(
                            "tori ({}, {}), characters ({i}, {j}): count {fwd}, swapped {back}, search {naive}",
                            a.torus.twist(),
                            b.torus.twist()
                        )));
                    }
                }
            }
        }
    }
    exhaustive(None)
}

fn check_variety(g: &Group, s: &Scope) -> Verdict {
    for t in tori(g)? {
        let tf = t.fixed_group(1, s.budget)?;
        for level in 1..=s.level {
            let vf = VarietyFrame::new(&t, &t, g.datum().weyl_identity(), level, s.budget)?;
            let gl = vf.group();
            let tag = format!("twist {}, level {level}", t.twist());
            let els = enumerate_group(gl, s.budget)?;
            if els != vf.elements() {
                return exhaustive(Some(format!("{tag}: Bruhat cells do not enumerate G")));
            }
            let sigma = vf.sigma_points(s.budget)?;
            let nf = NaiveFrob::new(gl, t.twist());
            let nv = &nf.nv;
            let upper = nv.unitriangular(true, 0, s.budget)?;
            let fu: BTreeSet<Mat> = upper.iter().map(|u| nf.frob(u)).collect();
            let mut naive = Vec::new();
            for y in &els {
                let yi = nv.inv(y);
                let fy = nf.frob(y);
                for x in &fu {
                    let xp = nv.product(&[&yi, x, &fy]);
                    if fu.contains(&xp) {
                        naive.push(SigmaPoint { x: *x, x_prime: xp, y: *y });
                    }
                }
            }
            naive.sort();
            if naive != sigma {
                return exhaustive(Some(format!("{tag}: Σ has {} points, search {}", sigma.len(), naive.len())));
            }
            let weyl = g.datum().weyl().len();
            let parts: usize = (0..weyl).map(|w| vf.sigma_w_points(&sigma, w).len()).sum();
            if parts != sigma.len() || !vf.is_action_closed(&sigma) {
                return exhaustive(Some(format!("{tag}: Σ is not the disjoint union of stable Σ_w")));
            }
            let q = vf.quotient_fibers(s.budget)?;
            if !q.fibers_are_orbits() {
                return exhaustive(Some(format!("{tag}: quotient fibres {:?}, |G^F| = {}", q.fiber_sizes, q.fixed_group_order)));
            }
            for w in 0..weyl {
                let lift = gl.weyl_rep(w);
                let rep = vf.sigma_tilde_check(w, &lift, &sigma, s.budget)?;
                if !rep.bijective || !rep.equivariant {
                    return exhaustive(Some(format!("{tag}, w = {w}: {rep:?}")));
                }
                let fibres = vf.hat_fibers(w, &lift, &sigma, s.budget)?;
                if fibres.len() > 1 || fibres.contains(&0) {
                    return exhaustive(Some(format!("{tag}, w = {w}: fibre sizes {fibres:?}")));
                }
                if level == 1 {
                    let h = hat_sigma_fixed_count(&t, &t, &tf, w, &g.weyl_rep(w), s.budget)?;
                    if h.count != h.closed_form {
                        return exhaustive(Some(format!("{tag}, w = {w}: {h:?}")));
                    }
                }
            }
        }
    }
    exhaustive(None)
}

/// Representatives of the conjugacy classes of `W`.
fn weyl_class_reps(g: &Group) -> Vec<usize> {
    let dat = g.datum();
    let n = dat.weyl().len();
    let mut seen = BTreeSet::new();
    let mut reps = Vec::new();
    for w in 0..n {
        if seen.contains(&w) {
            continue;
        }
        reps.push(w);
        for x in 0..n {
            seen.insert(dat.weyl_mul(dat.weyl_mul(x, w), dat.weyl_inv(x)));
        }
    }
    reps
}

/// Number of `W(T,T)^F`-orbits of regular characters with trivial
/// stabilizer, summed over representatives of the tori.
pub fn regular_orbit_count(g: &Group, budget: Budget) -> Result<usize> {
    let mut total = 0;
    for w in weyl_class_reps(g) {
        let torus = make_torus(g, w)?;
        let tf = torus.fixed_group(1, budget)?;
        let table = RegularityTable::new(&torus, &tf, 1, budget)?;
        let stab = weyl_transporter(&torus, &torus)?.len();
        let mut free = 0;
        for theta in tf.characters(budget)? {
            if !table.is_regular(&tf, &theta)?.regular {
                continue;
            }
            let side = TorusCharacter { torus: &torus, fixed: &tf, theta: &theta, regularity: &table };
            if inner_product_rhs(&side, &side, false)?.count == 1 {
                free += 1;
            }
        }
        total += free / stab;
    }
    Ok(total)
}

fn check_class_bound(g: &Group, s: &Scope) -> Verdict {
    let els = enumerate_group(g, s.budget)?;
    let classes = conjugacy_class_count(g, &els, s.budget)?;
    let orbits = regular_orbit_count(g, s.budget)?;
    if orbits > classes {
        return exhaustive(Some(format!("{orbits} regular orbits exceed {classes} classes")));
    }
    exhaustive(None)
}
