//! Brute-force ground truth: closure enumeration, exhaustive factorization
//! search, class counting and the property-suite driver.
//!
//! Everything here multiplies matrices with its own loop and decides
//! membership with its own predicates, so that it can certify the fast
//! paths in `group` and `decomp`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use crate::decomp::{BruhatFrame, BruhatRecord, IwahoriRecord};
use crate::error::{Budget, Error, Result};
use crate::group::{Group, Mat, Preset};
use crate::ring::{ElemFilter, Ring};
use crate::rootdata::RootIdx;

mod suites;

pub use suites::{registered_suites, run_suite, run_suite_timed, Fault, Mode, Outcome, Scope, VerificationReport};

/// Matrix arithmetic and membership tests written independently of
/// [`Group`].
#[derive(Debug, Clone)]
pub struct Naive<'a> {
    group: &'a Group,
    ring: &'a Ring,
    d: usize,
    form: Option<Mat>,
}

impl<'a> Naive<'a> {
    pub fn new(group: &'a Group) -> Naive<'a> {
        let ring = &**group.ring();
        let d = group.dim();
        let form = group.datum().form().map(|j| {
            let mut m = Mat::zero(d);
            for i in 0..d {
                for k in 0..d {
                    m.set(i, k, ring.from_int(j.at(i, k)));
                }
            }
            m
        });
        Naive { group, ring, d, form }
    }

    pub fn group(&self) -> &Group {
        self.group
    }

    pub fn identity(&self) -> Mat {
        let mut m = Mat::zero(self.d);
        for i in 0..self.d {
            m.set(i, i, self.ring.one());
        }
        m
    }

    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        let r = self.ring;
        let mut out = Mat::zero(self.d);
        for i in 0..self.d {
            for j in 0..self.d {
                let v = (0..self.d)
                    .filter(|&k| a.get(i, k) != 0 && b.get(k, j) != 0)
                    .fold(r.zero(), |acc, k| r.add(acc, r.mul(a.get(i, k), b.get(k, j))));
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn product(&self, factors: &[&Mat]) -> Mat {
        factors.iter().fold(self.identity(), |acc, f| self.mul(&acc, f))
    }

    /// Inverse as `g^{k-1}` where `g^k = 1`.
    pub fn inv(&self, g: &Mat) -> Mat {
        let id = self.identity();
        let mut prev = id;
        let mut cur = *g;
        while cur != id {
            prev = cur;
            cur = self.mul(&cur, g);
        }
        prev
    }

    pub fn commutator(&self, a: &Mat, b: &Mat) -> Mat {
        self.product(&[a, b, &self.inv(a), &self.inv(b)])
    }

    /// Determinant by expansion over permutations.
    pub fn det(&self, a: &Mat) -> u32 {
        let r = self.ring;
        let mut perm: Vec<usize> = (0..self.d).collect();
        let mut total = r.zero();
        loop {
            let inversions = (0..self.d)
                .flat_map(|i| (i + 1..self.d).map(move |j| (i, j)))
                .filter(|&(i, j)| perm[i] > perm[j])
                .count();
            let term = (0..self.d).fold(r.one(), |acc, i| r.mul(acc, a.get(i, perm[i])));
            total = if inversions % 2 == 0 { r.add(total, term) } else { r.sub(total, term) };
            if !next_permutation(&mut perm) {
                break;
            }
        }
        total
    }

    fn transpose(&self, a: &Mat) -> Mat {
        let mut m = Mat::zero(self.d);
        for i in 0..self.d {
            for j in 0..self.d {
                m.set(j, i, a.get(i, j));
            }
        }
        m
    }

    pub fn is_member(&self, a: &Mat) -> bool {
        let det = self.det(a);
        match self.group.preset() {
            Preset::GL2 | Preset::GL3 => self.ring.is_unit(det),
            Preset::SL2 | Preset::SL3 => det == self.ring.one(),
            Preset::Sp4 => {
                let j = self.form.as_ref().expect("symplectic form");
                self.product(&[&self.transpose(a), j, a]) == *j
            }
        }
    }

    /// Least valuation of the entries of `g - 1`, capped at `r`.
    pub fn level(&self, g: &Mat) -> u32 {
        let r = self.ring;
        let mut lv = r.r();
        for i in 0..self.d {
            for j in 0..self.d {
                let e = if i == j { r.sub(g.get(i, j), r.one()) } else { g.get(i, j) };
                lv = lv.min(r.valuation(e));
            }
        }
        lv
    }

    /// Inverse of a signed permutation matrix.
    pub fn monomial_inv(&self, m: &Mat) -> Mat {
        let t = self.transpose(m);
        assert_eq!(self.mul(m, &t), self.identity(), "not a signed permutation matrix");
        t
    }

    fn is_lower_uni(&self, a: &Mat) -> bool {
        (0..self.d).all(|i| {
            (0..self.d).all(|j| {
                let e = a.get(i, j);
                if i == j {
                    e == self.ring.one()
                } else {
                    j < i || e == 0
                }
            })
        })
    }

    fn is_upper_uni(&self, a: &Mat) -> bool {
        self.is_lower_uni(&self.transpose(a))
    }

    /// All members of the given shape: `entry(i, j)` lists admissible values.
    fn shaped(&self, entry: impl Fn(usize, usize) -> Vec<u32>, budget: Budget) -> Result<Vec<Mat>> {
        let choices: Vec<Vec<u32>> = (0..self.d * self.d).map(|k| entry(k / self.d, k % self.d)).collect();
        let total = choices.iter().try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64));
        budget.check(total.unwrap_or(u64::MAX))?;
        let mut out = Vec::new();
        let mut idx = alloc::vec![0usize; choices.len()];
        'outer: loop {
            let mut m = Mat::zero(self.d);
            for (k, &i) in idx.iter().enumerate() {
                m.set(k / self.d, k % self.d, choices[k][i]);
            }
            if self.is_member(&m) {
                out.push(m);
            }
            for k in 0..idx.len() {
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
        Ok(out)
    }

    /// Members that are upper (or lower) unitriangular with off-diagonal
    /// entries in `m^level`.
    pub fn unitriangular(&self, upper: bool, level: u32, budget: Budget) -> Result<Vec<Mat>> {
        let r = self.ring;
        let ideal = r.ideal_elements(level);
        self.shaped(
            |i, j| {
                if i == j {
                    alloc::vec![r.one()]
                } else if (j > i) == upper {
                    ideal.clone()
                } else {
                    alloc::vec![r.zero()]
                }
            },
            budget,
        )
    }

    /// Diagonal members with entries in `vals`.
    pub fn diagonal_with(&self, vals: &[u32], budget: Budget) -> Result<Vec<Mat>> {
        let r = self.ring;
        self.shaped(|i, j| if i == j { vals.to_vec() } else { alloc::vec![r.zero()] }, budget)
    }

    /// Diagonal members with entries in `1 + m^level`.
    pub fn diagonal(&self, level: u32, budget: Budget) -> Result<Vec<Mat>> {
        let r = self.ring;
        let vals = r.enumerate(ElemFilter::OnePlusM(level), budget)?;
        self.shaped(|i, j| if i == j { vals.clone() } else { alloc::vec![r.zero()] }, budget)
    }

    /// Generators for closure: every root element, the diagonal units for
    /// `GL`, and every Weyl representative with its inverse.
    pub fn generators(&self) -> Vec<Mat> {
        let g = self.group;
        let r = self.ring;
        let dat = g.datum();
        let mut gens = BTreeSet::new();
        for a in 0..dat.root_count() {
            for u in r.ideal_elements(0) {
                gens.insert(g.root_element(a, u));
            }
        }
        if g.preset().is_gl() {
            for u in r.enumerate(ElemFilter::Units, Budget::default()).unwrap_or_default() {
                let mut m = self.identity();
                m.set(0, 0, u);
                gens.insert(m);
            }
        }
        for w in 0..dat.weyl().len() {
            let n = g.weyl_rep(w);
            gens.insert(self.monomial_inv(&n));
            gens.insert(n);
        }
        gens.remove(&self.identity());
        gens.into_iter().collect()
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `enumerate_group`: closure of the generators, in canonical (sorted)
/// order, cross-checked against the order formula.
pub fn enumerate_group(g: &Group, budget: Budget) -> Result<Vec<Mat>> {
    let nv = Naive::new(g);
    let expected = g.order_formula();
    budget.check(expected)?;
    let gens = nv.generators();
    let id = nv.identity();
    let mut seen: BTreeSet<Mat> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id);
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for s in &gens {
            let y = nv.mul(&x, s);
            if seen.insert(y) {
                budget.check(seen.len() as u64)?;
                queue.push_back(y);
            }
        }
    }
    if seen.len() as u64 != expected {
        return Err(Error::Internal(alloc::format!(
            "closure has {} elements, order formula gives {expected}",
            seen.len()
        )));
    }
    if let Some(bad) = seen.iter().find(|x| !nv.is_member(x)) {
        return Err(Error::Internal(alloc::format!("closure left the group at {bad:?}")));
    }
    Ok(seen.into_iter().collect())
}

/// Every Iwahori triple `(u⁻, t, u)` with `u⁻ t u = x`, by exhaustive search
/// over `(U⁻)^1 × T^1 × U^1`.
pub fn naive_iwahori_search(g: &Group, x: &Mat, budget: Budget) -> Result<Vec<IwahoriRecord>> {
    let nv = Naive::new(g);
    let lower = nv.unitriangular(false, 1, budget)?;
    let diag = nv.diagonal(1, budget)?;
    let upper = nv.unitriangular(true, 1, budget)?;
    budget.check((lower.len() * diag.len() * upper.len()) as u64)?;
    let mut out = Vec::new();
    for l in &lower {
        for t in &diag {
            let lt = nv.mul(l, t);
            for u in &upper {
                if nv.mul(&lt, u) == *x {
                    out.push(IwahoriRecord { u_minus: *l, t: *t, u: *u });
                }
            }
        }
    }
    Ok(out)
}

/// Exhaustive table of Bruhat factorizations `u ŵ t' k u'` relative to a
/// frame, built from factor sets cut out by membership predicates.
#[derive(Debug, Clone)]
pub struct NaiveBruhat {
    table: BTreeMap<Mat, Vec<BruhatRecord>>,
    tuples: usize,
}

impl NaiveBruhat {
    pub fn new(g: &Group, frame: &BruhatFrame, budget: Budget) -> Result<NaiveBruhat> {
        let nv = Naive::new(g);
        let nvp = frame.n_v_prime();
        let nvp_inv = nv.monomial_inv(nvp);
        let std = |m: &Mat| nv.product(&[&nvp_inv, m, nvp]);
        let upper = nv.unitriangular(true, 0, budget)?;
        let lower1 = nv.unitriangular(false, 1, budget)?;
        let torus = nv.diagonal(0, budget)?;
        // U' and the level-one part of U'^- are conjugates of U and (U^-)^1
        let u_prime: Vec<Mat> = upper.iter().map(|u| nv.product(&[nvp, u, &nvp_inv])).collect();
        let k_all: Vec<Mat> = lower1.iter().map(|u| nv.product(&[nvp, u, &nvp_inv])).collect();
        let mut table: BTreeMap<Mat, Vec<BruhatRecord>> = BTreeMap::new();
        let mut tuples = 0;
        for w in 0..g.datum().weyl().len() {
            let lift = *frame.lift(w);
            let li = nv.monomial_inv(&lift);
            let us: Vec<&Mat> = upper.iter().filter(|u| nv.is_lower_uni(&std(&nv.product(&[&li, u, &lift])))).collect();
            let ks: Vec<&Mat> = k_all.iter().filter(|k| nv.is_lower_uni(&nv.product(&[&lift, k, &li]))).collect();
            debug_assert!(u_prime.iter().all(|u| nv.is_upper_uni(&std(u))));
            let n = us.len() * torus.len() * ks.len() * u_prime.len();
            budget.check((tuples + n) as u64)?;
            tuples += n;
            for u in &us {
                let uw = nv.mul(u, &lift);
                for t in &torus {
                    let uwt = nv.mul(&uw, t);
                    for k in &ks {
                        let uwtk = nv.mul(&uwt, k);
                        for up in &u_prime {
                            let rec = BruhatRecord { w, lift, u: **u, t_prime: *t, k: **k, u_prime: *up };
                            table.entry(nv.mul(&uwtk, up)).or_default().push(rec);
                        }
                    }
                }
            }
        }
        Ok(NaiveBruhat { table, tuples })
    }

    /// Number of factor tuples multiplied.
    pub fn tuples(&self) -> usize {
        self.tuples
    }

    /// Number of distinct products.
    pub fn image_size(&self) -> usize {
        self.table.len()
    }

    pub fn solutions(&self, x: &Mat) -> &[BruhatRecord] {
        self.table.get(x).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn products(&self) -> impl Iterator<Item = &Mat> {
        self.table.keys()
    }
}

/// Which factorization `naive_decomposition_search` looks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionKind {
    Iwahori,
    Bruhat { v_prime: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solutions {
    Iwahori(Vec<IwahoriRecord>),
    Bruhat(Vec<BruhatRecord>),
}

impl Solutions {
    pub fn len(&self) -> usize {
        match self {
            Solutions::Iwahori(v) => v.len(),
            Solutions::Bruhat(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `naive_decomposition_search` for a single element.
pub fn naive_decomposition_search(g: &Group, x: &Mat, kind: DecompositionKind, budget: Budget) -> Result<Solutions> {
    match kind {
        DecompositionKind::Iwahori => Ok(Solutions::Iwahori(naive_iwahori_search(g, x, budget)?)),
        DecompositionKind::Bruhat { v_prime } => {
            let frame = BruhatFrame::new(g, v_prime);
            let nb = NaiveBruhat::new(g, &frame, budget)?;
            Ok(Solutions::Bruhat(nb.solutions(x).to_vec()))
        }
    }
}

/// `conjugacy_class_count` of the group spanned by `elements`, by orbit
/// partition under conjugation by the closure generators.
pub fn conjugacy_class_count(g: &Group, elements: &[Mat], budget: Budget) -> Result<usize> {
    let nv = Naive::new(g);
    let gens = nv.generators();
    let gens: Vec<(Mat, Mat)> = gens.iter().map(|s| (*s, nv.inv(s))).collect();
    budget.check((elements.len() * gens.len()) as u64)?;
    let all: BTreeSet<&Mat> = elements.iter().collect();
    let mut seen: BTreeSet<Mat> = BTreeSet::new();
    let mut classes = 0;
    for x in elements {
        if seen.contains(x) {
            continue;
        }
        classes += 1;
        seen.insert(*x);
        let mut queue = alloc::vec![*x];
        while let Some(y) = queue.pop() {
            for (s, si) in &gens {
                let z = nv.product(&[s, &y, si]);
                if !all.contains(&z) {
                    return Err(Error::Precondition("element set is not closed under conjugation".into()));
                }
                if seen.insert(z) {
                    queue.push(z);
                }
            }
        }
    }
    Ok(classes)
}

/// Class count of an abelian group given by its elements: every class is a
/// singleton, which the orbit partition confirms.
pub fn abelian_class_count(elements: &[Mat], mul: impl Fn(&Mat, &Mat) -> Mat) -> usize {
    let commute = elements.iter().all(|a| elements.iter().all(|b| mul(a, b) == mul(b, a)));
    if commute {
        elements.iter().collect::<BTreeSet<_>>().len()
    } else {
        0
    }
}

/// Roots `β` positive for `n_x U n_x^{-1}`: `x^{-1}β > 0`.
pub fn conjugate_positive(g: &Group, x: usize) -> Vec<RootIdx> {
    let dat = g.datum();
    let xi = &dat.weyl()[dat.weyl_inv(x)].perm;
    (0..dat.root_count()).filter(|&b| dat.is_positive(xi[b])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::iwahori_decompose;
    use crate::group::build_group;
    use crate::ring::{make_ring, RingKind};

    fn group(p: Preset, pr: u32, r: u32) -> Group {
        build_group(p, make_ring(pr, r, 1, RingKind::Witt).unwrap(), 0).unwrap()
    }

    #[test]
    fn enumeration_orders() {
        let b = Budget::default();
        let g = group(Preset::SL2, 2, 2);
        let els = enumerate_group(&g, b).unwrap();
        assert_eq!(els.len(), 48);
        assert_eq!(els, enumerate_group(&g, b).unwrap());
        assert_eq!(enumerate_group(&group(Preset::SL2, 2, 1), b).unwrap().len(), 6);
        assert_eq!(enumerate_group(&group(Preset::SL3, 2, 2), b).unwrap().len(), 43008);
    }

    #[test]
    fn class_counts() {
        let b = Budget::default();
        let g = group(Preset::SL2, 2, 1);
        let els = enumerate_group(&g, b).unwrap();
        assert_eq!(conjugacy_class_count(&g, &els, b).unwrap(), 3);
    }

    #[test]
    fn iwahori_search() {
        let b = Budget::default();
        let g = group(Preset::SL2, 2, 2);
        let nv = Naive::new(&g);
        for x in enumerate_group(&g, b).unwrap() {
            let sols = naive_iwahori_search(&g, &x, b).unwrap();
            if nv.level(&x) >= 1 {
                assert_eq!(sols, [iwahori_decompose(&g, &x).unwrap()]);
            } else {
                assert!(sols.is_empty());
            }
        }
    }

    #[test]
    fn bruhat_search() {
        let b = Budget::default();
        let g = group(Preset::SL2, 2, 2);
        let frame = BruhatFrame::standard(&g);
        let nb = NaiveBruhat::new(&g, &frame, b).unwrap();
        assert_eq!((nb.tuples(), nb.image_size()), (48, 48));
        for x in enumerate_group(&g, b).unwrap() {
            assert_eq!(nb.solutions(&x), [frame.decompose(&g, &x).unwrap()]);
        }
    }
}
