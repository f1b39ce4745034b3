//! The diagonal torus with the twisted Frobenius `F_w = Ad(n_w) ∘ F`, its
//! fixed-point groups at every level, norms, regular characters and Weyl
//! transporters.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::abelian::{AbelianStructure, Character, Qz};
use crate::error::{Budget, Error, Result};
use crate::group::{Group, Mat, Preset};
use crate::ring::{extend, ElemFilter, Embedding, Ring};
use crate::rootdata::RootIdx;

/// `p[j]`: the column of the nonzero entry in row `j` of a monomial matrix,
/// so that `(M t M^{-1})_{jj} = t_{p[j]}`.
pub fn position_map(g: &Group, m: &Mat) -> Vec<usize> {
    (0..g.dim())
        .map(|j| (0..g.dim()).find(|&i| m.get(j, i) != 0).expect("monomial matrix"))
        .collect()
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn perm_pow(p: &[usize], k: u32) -> Vec<usize> {
    let mut out: Vec<usize> = (0..p.len()).collect();
    for _ in 0..k {
        out = compose(p, &out);
    }
    out
}

fn perm_order(p: &[usize]) -> u32 {
    let id: Vec<usize> = (0..p.len()).collect();
    let mut k = 1;
    let mut q = p.to_vec();
    while q != id {
        q = compose(p, &q);
        k += 1;
    }
    k
}

/// `T` with Frobenius `F_w(t)_j = F(t_{σ(j)})`.
#[derive(Debug, Clone)]
pub struct Torus {
    group: Group,
    w: usize,
    lift: Mat,
    sigma: Vec<usize>,
    period: u32,
}

/// A ring `R_N` of the tower over the torus' base ring, large enough to
/// hold `T^{F^n}`, with the group over it.
#[derive(Debug, Clone)]
pub struct Ambient {
    pub level: u32,
    pub group: Group,
    pub base_embedding: Embedding,
}

impl Ambient {
    pub fn ring(&self) -> &Arc<Ring> {
        self.group.ring()
    }

    /// Entries of a base-ring matrix, mapped into `R_N`.
    pub fn embed(&self, m: &Mat) -> Mat {
        let mut out = *m;
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                out.set(i, j, self.base_embedding.apply(m.get(i, j)));
            }
        }
        out
    }
}

/// `T^{F^n}` inside an ambient ring, with its cyclic decomposition.
struct FixedSearch {
    n: u32,
    k: u32,
    /// Cycles of `σ^n` whose first entry is free.
    cycles: Vec<Vec<usize>>,
    choices: Vec<Vec<u32>>,
    solve_last: bool,
    /// `F^{-n}` as a forward power.
    back: u64,
}

impl FixedSearch {
    fn candidate(&self, g: &Group, idx: &[usize]) -> Result<Option<Mat>> {
        let r = g.ring();
        let d = g.dim();
        let mut entries = alloc::vec![r.one(); d];
        for (ci, c) in self.cycles.iter().enumerate() {
            let mut v = self.choices[ci][idx[ci]];
            for &pos in c {
                entries[pos] = v;
                v = r.frob(v, self.back);
            }
        }
        if self.solve_last {
            let prod = entries[..d - 1].iter().fold(r.one(), |a, &b| r.mul(a, b));
            let last = r.inv(prod)?;
            let k = self.k;
            if r.frob(last, self.n as u64) != last || (k > 0 && r.valuation(r.sub(last, r.one())) < k) {
                return Ok(None);
            }
            entries[d - 1] = last;
        }
        let t = g.diag(&entries);
        Ok(g.is_member(&t).then_some(t))
    }
}

#[derive(Debug, Clone)]
pub struct FixedGroup {
    pub n: u32,
    pub ambient: Ambient,
    pub structure: AbelianStructure<Mat>,
}

impl FixedGroup {
    pub fn order(&self) -> usize {
        self.structure.order()
    }

    pub fn characters(&self, budget: Budget) -> Result<Vec<Character>> {
        self.structure.characters(budget)
    }

    pub fn value(&self, ch: &Character, t: &Mat) -> Result<Qz> {
        self.structure.value(ch, t)
    }
}

/// `make_torus`.
pub fn make_torus(group: &Group, w: usize) -> Result<Torus> {
    if w >= group.datum().weyl().len() {
        return Err(Error::InvalidArgument(alloc::format!("no Weyl element {w}")));
    }
    let lift = group.weyl_rep(w);
    let m = group.mul(&lift, group.twist_rep());
    let sigma = position_map(group, &m);
    let period = perm_order(&sigma);
    Ok(Torus { group: group.clone(), w, lift, sigma, period })
}

impl Torus {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn twist(&self) -> usize {
        self.w
    }

    pub fn lift(&self) -> &Mat {
        &self.lift
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// Order of the position permutation: `F_w^k` acts entrywise as `F^k`
    /// exactly when `k` is a multiple of it.
    pub fn period(&self) -> u32 {
        self.period
    }

    /// `F_w^k(t)` for a diagonal `t` over any ring of the tower.
    pub fn frob(&self, g: &Group, t: &Mat, k: u32) -> Mat {
        let s = perm_pow(&self.sigma, k);
        let r = g.ring();
        let entries: Vec<_> = (0..g.dim()).map(|j| r.frob(t.get(s[j], s[j]), k as u64)).collect();
        g.diag(&entries)
    }

    /// Whether `F_w` maps `T` to itself, checked on the matrix level with
    /// the lift.
    pub fn is_stable(&self) -> bool {
        let g = &self.group;
        let r = g.ring();
        let t: Vec<_> = (0..g.dim()).map(|i| r.from_int(1 + 2 * i as i64)).collect();
        let t = g.diag(&t);
        let direct = g.mul_all(&[&self.lift, &g.frobenius(&t, 1), &g.inv(&self.lift)]);
        g.is_diagonal(&direct) && direct == self.frob(g, &t, 1)
    }

    /// The smallest ambient level holding `T^{F^n}`.
    pub fn ambient_level(&self, n: u32) -> u32 {
        n.lcm(&self.period)
    }

    pub fn ambient(&self, level: u32) -> Result<Ambient> {
        let base = self.group.ring();
        let (big, emb) = extend(base, level)?;
        Ok(Ambient { level, group: self.group.over(big), base_embedding: emb })
    }

    fn check_level(&self, amb: &Ambient, n: u32) -> Result<()> {
        if n == 0 || !amb.level.is_multiple_of(self.ambient_level(n)) {
            return Err(Error::InvalidArgument(alloc::format!(
                "level {} cannot hold the F^{n}-fixed points",
                amb.level
            )));
        }
        Ok(())
    }

    fn fixed_search(&self, amb: &Ambient, n: u32, k: u32, budget: Budget) -> Result<FixedSearch> {
        self.check_level(amb, n)?;
        let g = &amb.group;
        let r = g.ring();
        let d = g.dim();
        let s = perm_pow(&self.sigma, n);
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut seen = alloc::vec![false; d];
        for i in 0..d {
            if seen[i] {
                continue;
            }
            let mut c = Vec::new();
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                c.push(j);
                j = s[j];
            }
            cycles.push(c);
        }
        // the last diagonal entry is forced by det = 1 when it is alone
        let solve_last = matches!(self.group.preset(), Preset::SL2 | Preset::SL3)
            && cycles.last().is_some_and(|c| c == &[d - 1]);
        let free = if solve_last { cycles.len() - 1 } else { cycles.len() };
        cycles.truncate(free);
        let mut choices: Vec<Vec<u32>> = Vec::new();
        for c in &cycles {
            let sub_level = n * c.len() as u32;
            let (sub, _) = extend(self.group.ring(), sub_level)?;
            let vals = sub.enumerate(ElemFilter::OnePlusM(k), budget)?;
            if sub.same_as(r) {
                choices.push(vals);
            } else {
                let emb = Embedding::new(&sub, r)?;
                choices.push(vals.into_iter().map(|v| emb.apply(v)).collect());
            }
        }
        let back = (amb.level - n % amb.level) as u64;
        Ok(FixedSearch { n, k, cycles, choices, solve_last, back })
    }

    /// Number of candidates `for_each_fixed` would test.
    pub fn fixed_candidates(&self, amb: &Ambient, n: u32, k: u32, budget: Budget) -> Result<u64> {
        let fs = self.fixed_search(amb, n, k, budget)?;
        Ok(fs.choices.iter().map(|c| c.len() as u64).product())
    }

    /// Visit every `t ∈ T^{F^n}` whose entries lie in `1 + m^k`
    /// (`k = 0`: all of `T^{F^n}`).
    pub fn for_each_fixed(
        &self,
        amb: &Ambient,
        n: u32,
        k: u32,
        budget: Budget,
        mut f: impl FnMut(&Mat) -> Result<()>,
    ) -> Result<()> {
        let fs = self.fixed_search(amb, n, k, budget)?;
        let total: u64 = fs.choices.iter().map(|c| c.len() as u64).product();
        budget.check(total)?;
        let free = fs.cycles.len();
        let mut idx = alloc::vec![0usize; free];
        'outer: loop {
            if let Some(t) = fs.candidate(&amb.group, &idx)? {
                f(&t)?;
            }
            for ci in 0..free {
                idx[ci] += 1;
                if idx[ci] < fs.choices[ci].len() {
                    continue 'outer;
                }
                idx[ci] = 0;
            }
            break;
        }
        Ok(())
    }

    /// A uniformly drawn candidate for [`Torus::for_each_fixed`], or `None`
    /// when the draw is rejected; `next` supplies random words.
    pub fn random_fixed(
        &self,
        amb: &Ambient,
        n: u32,
        k: u32,
        budget: Budget,
        count: u64,
        next: &mut dyn FnMut() -> u64,
        mut f: impl FnMut(&Mat) -> Result<()>,
    ) -> Result<()> {
        let fs = self.fixed_search(amb, n, k, budget)?;
        for _ in 0..count {
            let idx: Vec<usize> = fs.choices.iter().map(|c| (next() % c.len() as u64) as usize).collect();
            if let Some(t) = fs.candidate(&amb.group, &idx)? {
                f(&t)?;
            }
        }
        Ok(())
    }

    pub fn fixed_elements(&self, amb: &Ambient, n: u32, k: u32, budget: Budget) -> Result<Vec<Mat>> {
        let mut out = Vec::new();
        self.for_each_fixed(amb, n, k, budget, |t| {
            out.push(*t);
            Ok(())
        })?;
        out.sort();
        Ok(out)
    }

    /// `torus_fixed_points` in the smallest ambient ring.
    pub fn fixed_group(&self, n: u32, budget: Budget) -> Result<FixedGroup> {
        let amb = self.ambient(self.ambient_level(n))?;
        self.fixed_group_in(&amb, n, budget)
    }

    pub fn fixed_group_in(&self, amb: &Ambient, n: u32, budget: Budget) -> Result<FixedGroup> {
        let els = self.fixed_elements(amb, n, 0, budget)?;
        let g = &amb.group;
        let structure = AbelianStructure::new(&els, &g.identity(), |a, b| g.mul(a, b))?;
        Ok(FixedGroup { n, ambient: amb.clone(), structure })
    }

    /// `𝒯^{F^n}`: fixed points congruent to 1 modulo `m^{r-1}`.
    pub fn kernel_fixed(&self, amb: &Ambient, n: u32, budget: Budget) -> Result<Vec<Mat>> {
        self.fixed_elements(amb, n, amb.ring().r() - 1, budget)
    }

    /// `(𝒯^α)^{F^n}`: `α̌(λ)` with `λ ∈ 1 + m^{r-1}`, fixed by `F_w^n`.
    pub fn root_kernel_fixed(&self, amb: &Ambient, n: u32, a: RootIdx, budget: Budget) -> Result<Vec<Mat>> {
        self.check_level(amb, n)?;
        let g = &amb.group;
        let r = g.ring();
        let lams = r.enumerate(ElemFilter::OnePlusM(r.r() - 1), budget)?;
        let sign = self.stab_sign(n, a);
        let mut out = Vec::new();
        for l in lams {
            let fl = r.frob(l, n as u64);
            match sign {
                Some(true) if fl != l => continue,
                Some(false) if r.mul(fl, l) != r.one() => continue,
                _ => {}
            }
            let t = g.coroot_element(a, l)?;
            if self.frob(g, &t, n) == t {
                out.push(t);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// `norm_map`: `N_{F^a}^{F^b}(t) = t·F^a(t)⋯F^{b-a}(t)`.
    pub fn norm(&self, g: &Group, t: &Mat, a: u32, b: u32) -> Result<Mat> {
        if a == 0 || !b.is_multiple_of(a) {
            return Err(Error::InvalidArgument(alloc::format!("{a} does not divide {b}")));
        }
        let mut acc = g.identity();
        for j in 0..b / a {
            acc = g.mul(&acc, &self.frob(g, t, j * a));
        }
        Ok(acc)
    }

    /// Whether `F_w^n(𝒯^α) = 𝒯^α`.
    pub fn stabilizes(&self, n: u32, a: RootIdx) -> bool {
        self.stab_sign(n, a).is_some()
    }

    /// `Some(true)` when `F_w^n α̌(λ) = α̌(F^n λ)`, `Some(false)` when it is
    /// `α̌(F^n λ)^{-1}`.
    fn stab_sign(&self, n: u32, a: RootIdx) -> Option<bool> {
        let dat = self.group.datum();
        let k: Vec<i32> = dat.weights().iter().map(|w| dat.pair_coroot(w, a)).collect();
        let s = perm_pow(&self.sigma, n);
        let moved: Vec<i32> = (0..k.len()).map(|j| k[s[j]]).collect();
        if moved == k {
            Some(true)
        } else if moved.iter().zip(&k).all(|(x, y)| *x == -*y) {
            Some(false)
        } else {
            None
        }
    }

    /// The least `m ≥ 1` with `F^m(𝒯^α) = 𝒯^α` for every root.
    pub fn minimal_m(&self) -> u32 {
        let roots = self.group.datum().root_count();
        (1..).find(|&m| (0..roots).all(|a| self.stabilizes(m, a))).unwrap()
    }

    /// `T^1` over the base ring: diagonal members congruent to 1 mod `m`.
    pub fn t1(&self) -> Result<Vec<Mat>> {
        self.group.torus_elements(1, Budget::default())
    }
}

/// Precomputed norm images used to decide regularity for many characters.
#[derive(Debug, Clone)]
pub struct RegularityTable {
    m: u32,
    /// `N_F^{F^m}((𝒯^α)^{F^m})` for every root, as elements of `T^F`.
    at_m: Vec<Vec<Mat>>,
    /// `(n, α, N_F^{F^n}((𝒯^α)^{F^n}))` for every stabilizing `n ≤ n_max`.
    all: Vec<(u32, RootIdx, Vec<Mat>)>,
    skipped: Vec<u32>,
}

/// The outcome of `is_regular` with its certificate level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regularity {
    pub regular: bool,
    pub m: u32,
}

impl RegularityTable {
    /// Norm images at the minimal `m` and at every `n ≤ n_max`, pulled back
    /// into the ambient ring of `tf` (which must be `T^F`).
    pub fn new(torus: &Torus, tf: &FixedGroup, n_max: u32, budget: Budget) -> Result<RegularityTable> {
        if tf.n != 1 {
            return Err(Error::InvalidArgument("regularity is defined on T^F".into()));
        }
        let m = torus.minimal_m();
        let roots = torus.group.datum().root_count();
        let base = torus.group.ring();
        let fits = |n: u32| {
            let level = torus.ambient_level(n);
            let kernel = (base.p() as u128).checked_pow(base.n() * level);
            base.extension_fits(level) && kernel.is_some_and(|k| k <= budget.0 as u128)
        };
        let mut levels: BTreeSet<u32> = (1..=n_max).filter(|&n| fits(n)).collect();
        let skipped = (1..=n_max).filter(|&n| !fits(n)).collect();
        if !fits(m) {
            return Err(Error::Precondition(alloc::format!("level {m} ring is too large")));
        }
        levels.insert(m);
        let mut images: BTreeMap<(u32, RootIdx), Vec<Mat>> = BTreeMap::new();
        for &n in &levels {
            let amb = torus.ambient(torus.ambient_level(n))?;
            let emb = Embedding::new(tf.ambient.ring(), amb.ring())?;
            let pull: BTreeMap<Mat, Mat> = tf
                .structure
                .elements()
                .iter()
                .map(|t| (embed_mat(&amb.group, &emb, t), *t))
                .collect();
            for a in 0..roots {
                if !torus.stabilizes(n, a) {
                    continue;
                }
                let mut img = BTreeSet::new();
                for x in torus.root_kernel_fixed(&amb, n, a, budget)? {
                    let y = torus.norm(&amb.group, &x, 1, n)?;
                    let back = pull.get(&y).ok_or_else(|| Error::Internal("norm left T^F".into()))?;
                    img.insert(*back);
                }
                images.insert((n, a), img.into_iter().collect());
            }
        }
        let at_m = (0..roots).map(|a| images[&(m, a)].clone()).collect();
        let all = images
            .into_iter()
            .filter(|((n, _), _)| *n <= n_max)
            .map(|((n, a), v)| (n, a, v))
            .collect();
        Ok(RegularityTable { m, at_m, all, skipped })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Levels `n ≤ n_max` left out because `R_n` cannot be indexed by `u32`
    /// or `𝒯^α(R_n)` exceeds the budget.
    pub fn skipped(&self) -> &[u32] {
        &self.skipped
    }

    /// `is_regular` via the single level `m`.
    pub fn is_regular(&self, tf: &FixedGroup, theta: &Character) -> Result<Regularity> {
        let mut regular = true;
        for img in &self.at_m {
            regular &= nontrivial_on(tf, theta, img)?;
        }
        Ok(Regularity { regular, m: self.m })
    }

    /// The definition checked literally at every `n ≤ n_max`.
    pub fn is_regular_upto(&self, tf: &FixedGroup, theta: &Character) -> Result<bool> {
        for (_, _, img) in &self.all {
            if !nontrivial_on(tf, theta, img)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn nontrivial_on(tf: &FixedGroup, theta: &Character, img: &[Mat]) -> Result<bool> {
    for t in img {
        if tf.value(theta, t)? != Qz::from_integer(0) {
            return Ok(true);
        }
    }
    Ok(false)
}

fn embed_mat(g: &Group, emb: &Embedding, m: &Mat) -> Mat {
    let mut out = *m;
    for i in 0..g.dim() {
        for j in 0..g.dim() {
            out.set(i, j, emb.apply(m.get(i, j)));
        }
    }
    out
}

/// An `F`-fixed class of `W(T_1, T'_1)` with its lifts.
#[derive(Debug, Clone)]
pub struct TransporterClass {
    pub w: usize,
    pub lift: Mat,
    pub lifts: Vec<Mat>,
}

/// Whether `Ad(n_w)` carries `F_{w'}` on `T'` to `F_w` on `T` after `k`
/// Frobenius steps.
pub fn intertwines(t: &Torus, t_prime: &Torus, v: usize, k: u32) -> bool {
    let g = &t.group;
    let p = position_map(g, &g.weyl_rep(v));
    compose(&p, &perm_pow(&t.sigma, k)) == compose(&perm_pow(&t_prime.sigma, k), &p)
}

/// `weyl_transporter`: classes `v` with `Ad(n_v): T'^F → T^F`, each with
/// every lift `n_v·s`, `s ∈ T^1`.
pub fn weyl_transporter(t: &Torus, t_prime: &Torus) -> Result<Vec<TransporterClass>> {
    let g = &t.group;
    let t1 = t_prime.t1()?;
    let mut out = Vec::new();
    for v in 0..g.datum().weyl().len() {
        if !intertwines(t, t_prime, v, 1) {
            continue;
        }
        let lift = g.weyl_rep(v);
        let lifts = t1.iter().map(|s| g.mul(&lift, s)).collect();
        out.push(TransporterClass { w: v, lift, lifts });
    }
    Ok(out)
}

/// `transport_character`: `t ↦ θ'(ŵ^{-1} t ŵ)` on `T^F`.
pub fn transport_character(
    tf: &FixedGroup,
    tf_prime: &FixedGroup,
    lift: &Mat,
    theta_prime: &Character,
) -> Result<Character> {
    let g = &tf.ambient.group;
    if !tf.ambient.ring().same_as(tf_prime.ambient.ring()) {
        return Err(Error::Precondition("ŵ does not transport T' to T".into()));
    }
    let wl = tf.ambient.embed(lift);
    let wi = g.try_inv(&wl)?;
    tf.structure.character_from_fn(|t| {
        let x = g.mul_all(&[&wi, t, &wl]);
        tf_prime
            .value(theta_prime, &x)
            .map_err(|_| Error::Precondition("ŵ does not transport T' to T".into()))
    })
}

/// A witness from [`geometric_conjugacy_search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyWitness {
    pub n: u32,
    pub w: usize,
    pub g: Mat,
}

/// `geometric_conjugacy_search`: the least `n ≤ n_max` and a `g = n_v`
/// intertwining `F^n` such that `θ'∘N(g x g^{-1}) = θ∘N(x)` on `𝒯^{F^n}`.
/// Conjugation by `T(R_n)` is trivial on `T`, so the canonical lift of each
/// class stands for its whole coset.
pub fn geometric_conjugacy_search(
    t: &Torus,
    tf: &FixedGroup,
    theta: &Character,
    t_prime: &Torus,
    tf_prime: &FixedGroup,
    theta_prime: &Character,
    n_max: u32,
    budget: Budget,
) -> Result<Option<ConjugacyWitness>> {
    for n in 1..=n_max {
        let level = t.ambient_level(n).lcm(&t_prime.ambient_level(n));
        let amb = t.ambient(level)?;
        let g = &amb.group;
        let chi = |tor: &Torus, fg: &FixedGroup, th: &Character| -> Result<BTreeMap<Mat, Qz>> {
            let emb = Embedding::new(fg.ambient.ring(), amb.ring())?;
            let pull: BTreeMap<Mat, Mat> =
                fg.structure.elements().iter().map(|x| (embed_mat(g, &emb, x), *x)).collect();
            let mut out = BTreeMap::new();
            for x in tor.kernel_fixed(&amb, n, budget)? {
                let y = tor.norm(g, &x, 1, n)?;
                let back = pull.get(&y).ok_or_else(|| Error::Internal("norm left T^F".into()))?;
                out.insert(x, fg.value(th, back)?);
            }
            Ok(out)
        };
        let c = chi(t, tf, theta)?;
        let c_prime = chi(t_prime, tf_prime, theta_prime)?;
        for v in 0..g.datum().weyl().len() {
            if !intertwines(t_prime, t, v, n) {
                continue;
            }
            let nv = g.weyl_rep(v);
            let nvi = g.inv(&nv);
            let ok = c.iter().all(|(x, val)| c_prime.get(&g.mul_all(&[&nv, x, &nvi])) == Some(val));
            if ok {
                return Ok(Some(ConjugacyWitness { n, w: v, g: nv }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::qz;
    use crate::group::build_group;
    use crate::ring::{make_ring, RingKind};

    fn sl2(p: u32, r: u32) -> Group {
        build_group(Preset::SL2, make_ring(p, r, 1, RingKind::Witt).unwrap(), 0).unwrap()
    }

    #[test]
    fn fixed_point_orders() {
        let g = sl2(2, 2);
        let split = make_torus(&g, 0).unwrap();
        assert!(split.is_stable());
        let tf = split.fixed_group(1, Budget::default()).unwrap();
        assert_eq!(tf.structure.elements(), &[g.identity(), g.diag(&[3, 3])]);
        assert_eq!(tf.structure.factors(), &[2]);
        let ns = make_torus(&g, 1).unwrap();
        assert!(ns.is_stable());
        let tf = ns.fixed_group(1, Budget::default()).unwrap();
        assert_eq!((tf.order(), tf.structure.factors()), (6, &[6u64][..]));
        let f2 = make_torus(&sl2(2, 1), 1).unwrap();
        assert_eq!(f2.fixed_group(1, Budget::default()).unwrap().order(), 3);
        // F^2 acts trivially on the level-2 ring: everything is fixed
        assert_eq!(ns.fixed_group(2, Budget::default()).unwrap().order(), 12);
    }

    #[test]
    fn regular_characters_split_sl2() {
        let g = sl2(2, 2);
        let t = make_torus(&g, 0).unwrap();
        let tf = t.fixed_group(1, Budget::default()).unwrap();
        let table = RegularityTable::new(&t, &tf, 6, Budget::default()).unwrap();
        let chars = tf.characters(Budget::default()).unwrap();
        let reg: Vec<bool> = chars.iter().map(|c| table.is_regular(&tf, c).unwrap().regular).collect();
        assert_eq!(reg, [false, true]);
        assert_eq!(table.m(), 1);
        for c in &chars {
            assert_eq!(table.is_regular(&tf, c).unwrap().regular, table.is_regular_upto(&tf, c).unwrap());
        }
    }

    #[test]
    fn transporters_and_transport() {
        let g = sl2(2, 2);
        let t = make_torus(&g, 0).unwrap();
        let ns = make_torus(&g, 1).unwrap();
        let classes = weyl_transporter(&t, &t).unwrap();
        assert_eq!(classes.iter().map(|c| c.w).collect::<Vec<_>>(), [0, 1]);
        assert!(classes.iter().all(|c| c.lifts.len() == 2));
        assert!(classes[0].lifts.contains(&g.identity()));
        assert!(weyl_transporter(&t, &ns).unwrap().is_empty());
        let tf = t.fixed_group(1, Budget::default()).unwrap();
        let theta = tf.structure.character(1);
        assert_eq!(tf.value(&theta, &g.diag(&[3, 3])).unwrap(), qz(1, 2));
        let moved = transport_character(&tf, &tf, &classes[1].lift, &theta).unwrap();
        assert_eq!(moved, theta);
        assert_eq!(transport_character(&tf, &tf, &g.identity(), &theta).unwrap(), theta);
    }

    #[test]
    fn conjugacy_search() {
        let g = sl2(2, 2);
        let t = make_torus(&g, 0).unwrap();
        let tf = t.fixed_group(1, Budget::default()).unwrap();
        let reg = tf.structure.character(1);
        let triv = tf.structure.character(0);
        let b = Budget::default();
        let found = geometric_conjugacy_search(&t, &tf, &reg, &t, &tf, &reg, 4, b).unwrap().unwrap();
        assert_eq!((found.n, found.g), (1, g.identity()));
        assert!(geometric_conjugacy_search(&t, &tf, &reg, &t, &tf, &triv, 4, b).unwrap().is_none());
    }

    #[test]
    fn norms() {
        let g = sl2(2, 2);
        let ns = make_torus(&g, 1).unwrap();
        let amb = ns.ambient(6).unwrap();
        let b = Budget::default();
        for (a, bb) in [(1, 2), (1, 6), (2, 6), (3, 6)] {
            let top = ns.fixed_elements(&amb, bb, 0, b).unwrap();
            let low: BTreeSet<Mat> = ns.fixed_elements(&amb, a, 0, b).unwrap().into_iter().collect();
            for x in &top {
                let y = ns.norm(&amb.group, x, a, bb).unwrap();
                assert!(low.contains(&y));
                let z = ns.norm(&amb.group, &y, 1, a).unwrap();
                assert_eq!(z, ns.norm(&amb.group, x, 1, bb).unwrap());
            }
        }
    }
}
