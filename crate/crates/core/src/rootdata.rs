//! Root data of the supported presets, realized inside the standard matrix
//! representation so that every structure constant can be read off from
//! integer matrix arithmetic.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DatumKind {
    A1,
    A2,
    C2,
    GL2,
    GL3,
}

pub type RootIdx = usize;

/// Small dense integer matrix used for exact evaluation over `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    pub d: usize,
    pub e: Vec<i64>,
}

impl IntMat {
    pub fn identity(d: usize) -> IntMat {
        let mut e = vec![0; d * d];
        for i in 0..d {
            e[i * d + i] = 1;
        }
        IntMat { d, e }
    }

    pub fn zero(d: usize) -> IntMat {
        IntMat { d, e: vec![0; d * d] }
    }

    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.e[i * self.d + j]
    }

    pub fn mul(&self, o: &IntMat) -> IntMat {
        let d = self.d;
        let mut e = vec![0i64; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.e[i * d + k];
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    e[i * d + j] += a * o.e[k * d + j];
                }
            }
        }
        IntMat { d, e }
    }

    pub fn add_scaled(&self, o: &IntMat, s: i64) -> IntMat {
        let e = self.e.iter().zip(&o.e).map(|(a, b)| a + s * b).collect();
        IntMat { d: self.d, e }
    }

    pub fn transpose(&self) -> IntMat {
        let d = self.d;
        let mut e = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                e[j * d + i] = self.e[i * d + j];
            }
        }
        IntMat { d, e }
    }
}

/// A Weyl group element, stored as its permutation of the root list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElem {
    pub perm: Vec<RootIdx>,
    /// Reduced word in the simple reflections: `w = s_{word[0]} ⋯ s_{word[k-1]}`,
    /// entries index `RootDatum::simple`.
    pub word: Vec<usize>,
    /// Action on the ambient weight lattice, row-major `d × d`.
    pub lin: Vec<i32>,
}

impl WeylElem {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

/// One term of a commutator expansion `[p_α(t), p_β(u)] = ∏ p_γ(C t^i u^j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChevalleyTerm {
    pub i: u32,
    pub j: u32,
    pub root: RootIdx,
    pub constant: i64,
}

#[derive(Debug, Clone)]
pub struct RootDatum {
    kind: DatumKind,
    dim: usize,
    roots: Vec<Vec<i32>>,
    npos: usize,
    simple: Vec<RootIdx>,
    coeffs: Vec<Vec<i32>>,
    coroots: Vec<Vec<i32>>,
    weights: Vec<Vec<i32>>,
    root_vectors: Vec<IntMat>,
    form: Option<IntMat>,
    weyl: Vec<WeylElem>,
    constants: BTreeMap<(RootIdx, RootIdx), Vec<ChevalleyTerm>>,
}

fn dot(a: &[i32], b: &[i32]) -> i32 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit_vec(d: usize, i: usize, s: i32) -> Vec<i32> {
    let mut v = vec![0; d];
    v[i] = s;
    v
}

/// Ambient data per kind: (dimension, all roots, simple roots, weights, form).
fn raw_data(kind: DatumKind) -> (usize, Vec<Vec<i32>>, Vec<Vec<i32>>, Vec<Vec<i32>>, Option<IntMat>) {
    match kind {
        DatumKind::A1 | DatumKind::A2 | DatumKind::GL2 | DatumKind::GL3 => {
            let d = match kind {
                DatumKind::A1 | DatumKind::GL2 => 2,
                _ => 3,
            };
            let mut roots = Vec::new();
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        let mut v = vec![0; d];
                        v[i] = 1;
                        v[j] = -1;
                        roots.push(v);
                    }
                }
            }
            let simple = (0..d - 1)
                .map(|i| {
                    let mut v = vec![0; d];
                    v[i] = 1;
                    v[i + 1] = -1;
                    v
                })
                .collect();
            let weights = (0..d).map(|i| unit_vec(d, i, 1)).collect();
            (d, roots, simple, weights, None)
        }
        DatumKind::C2 => {
            let mut roots = Vec::new();
            for s1 in [1, -1] {
                for s2 in [1, -1] {
                    roots.push(vec![s1, s2]);
                }
                roots.push(vec![2 * s1, 0]);
                roots.push(vec![0, 2 * s1]);
            }
            let simple = vec![vec![1, -1], vec![0, 2]];
            let weights = vec![vec![1, 0], vec![0, 1], vec![0, -1], vec![-1, 0]];
            let mut j = IntMat::zero(4);
            j.e[3] = 1;
            j.e[4 + 2] = 1;
            j.e[2 * 4 + 1] = -1;
            j.e[3 * 4] = -1;
            (4, roots, simple, weights, Some(j))
        }
    }
}

impl RootDatum {
    /// `make_root_datum`.
    pub fn new(kind: DatumKind) -> Result<RootDatum> {
        let (d, all, simple_vecs, weights, form) = raw_data(kind);
        let rank_dim = all[0].len();
        let find = |v: &[i32], list: &[Vec<i32>]| list.iter().position(|r| r.as_slice() == v);

        // positive roots by closure from the simple roots
        let ns = simple_vecs.len();
        let mut pos: Vec<(Vec<i32>, Vec<i32>)> = simple_vecs
            .iter()
            .enumerate()
            .map(|(k, v)| (v.clone(), unit_vec(ns, k, 1)))
            .collect();
        let mut frontier = pos.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (v, c) in &frontier {
                for (k, s) in simple_vecs.iter().enumerate() {
                    let w: Vec<i32> = v.iter().zip(s).map(|(a, b)| a + b).collect();
                    if find(&w, &all).is_some() && !pos.iter().any(|(p, _)| *p == w) {
                        let mut cc = c.clone();
                        cc[k] += 1;
                        pos.push((w.clone(), cc.clone()));
                        next.push((w, cc));
                    }
                }
            }
            frontier = next;
        }
        if 2 * pos.len() != all.len() {
            return Err(Error::Internal("positive system does not halve the roots".into()));
        }
        pos.sort_by(|(_, a), (_, b)| {
            let (ha, hb): (i32, i32) = (a.iter().sum(), b.iter().sum());
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let npos = pos.len();
        let mut roots: Vec<Vec<i32>> = pos.iter().map(|(v, _)| v.clone()).collect();
        let mut coeffs: Vec<Vec<i32>> = pos.iter().map(|(_, c)| c.clone()).collect();
        for k in 0..npos {
            roots.push(roots[k].iter().map(|x| -x).collect());
            coeffs.push(coeffs[k].iter().map(|x| -x).collect());
        }
        let simple: Vec<RootIdx> = simple_vecs.iter().map(|s| find(s, &roots).unwrap()).collect();
        let coroots: Vec<Vec<i32>> = roots
            .iter()
            .map(|a| {
                let n = dot(a, a);
                a.iter().map(|x| 2 * x / n).collect()
            })
            .collect();

        let root_vectors = roots
            .iter()
            .map(|a| root_vector(a, &weights, form.as_ref()))
            .collect::<Result<Vec<_>>>()?;

        let mut datum = RootDatum {
            kind,
            dim: d,
            roots,
            npos,
            simple,
            coeffs,
            coroots,
            weights,
            root_vectors,
            form,
            weyl: Vec::new(),
            constants: BTreeMap::new(),
        };
        debug_assert_eq!(rank_dim, datum.weights[0].len());
        datum.weyl = datum.enumerate_weyl()?;
        datum.constants = datum.solve_constants()?;
        Ok(datum)
    }

    pub fn kind(&self) -> DatumKind {
        self.kind
    }

    /// Size of the matrix representation.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn roots(&self) -> &[Vec<i32>] {
        &self.roots
    }

    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    /// Positive roots are the indices `0..positive_count()`, in
    /// height-then-lex order; `-roots[k]` is `roots[k + positive_count()]`.
    pub fn positive_count(&self) -> usize {
        self.npos
    }

    pub fn positive(&self) -> core::ops::Range<RootIdx> {
        0..self.npos
    }

    pub fn is_positive(&self, a: RootIdx) -> bool {
        a < self.npos
    }

    pub fn neg(&self, a: RootIdx) -> RootIdx {
        if a < self.npos {
            a + self.npos
        } else {
            a - self.npos
        }
    }

    pub fn simple(&self) -> &[RootIdx] {
        &self.simple
    }

    pub fn coroot(&self, a: RootIdx) -> &[i32] {
        &self.coroots[a]
    }

    pub fn weights(&self) -> &[Vec<i32>] {
        &self.weights
    }

    /// Integer matrix `X_α` with `p_α(u) = I + u X_α`.
    pub fn root_vector(&self, a: RootIdx) -> &IntMat {
        &self.root_vectors[a]
    }

    /// Invariant form `J` for symplectic presets.
    pub fn form(&self) -> Option<&IntMat> {
        self.form.as_ref()
    }

    pub fn find_root(&self, v: &[i32]) -> Option<RootIdx> {
        self.roots.iter().position(|r| r.as_slice() == v)
    }

    /// Coefficients of a root in the simple roots.
    pub fn simple_coeffs(&self, a: RootIdx) -> &[i32] {
        &self.coeffs[a]
    }

    pub fn height(&self, a: RootIdx) -> Result<u32> {
        if !self.is_positive(a) {
            return Err(Error::InvalidArgument(alloc::format!(
                "{} is not a positive root",
                self.label(a)
            )));
        }
        Ok(self.coeffs[a].iter().sum::<i32>() as u32)
    }

    /// Height extended to all roots by `ht(-α) = -ht(α)`.
    pub fn signed_height(&self, a: RootIdx) -> i32 {
        self.coeffs[a].iter().sum()
    }

    /// Human-readable name such as `e1-e2` or `2e1`.
    pub fn label(&self, a: RootIdx) -> String {
        let mut s = String::new();
        for (i, &c) in self.roots[a].iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c < 0 {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            if c.abs() != 1 {
                let _ = write!(s, "{}", c.abs());
            }
            let _ = write!(s, "e{}", i + 1);
        }
        s
    }

    pub fn find_label(&self, s: &str) -> Option<RootIdx> {
        (0..self.roots.len()).find(|&a| self.label(a) == s)
    }

    /// `⟨v, α̌⟩`.
    pub fn pair_coroot(&self, v: &[i32], a: RootIdx) -> i32 {
        dot(v, &self.coroots[a])
    }

    fn reflect(&self, v: &[i32], a: RootIdx) -> Vec<i32> {
        let c = self.pair_coroot(v, a);
        v.iter().zip(&self.roots[a]).map(|(x, r)| x - c * r).collect()
    }

    fn enumerate_weyl(&self) -> Result<Vec<WeylElem>> {
        let n = self.roots.len();
        let d = self.roots[0].len();
        let ident = WeylElem {
            perm: (0..n).collect(),
            word: Vec::new(),
            lin: {
                let mut m = vec![0; d * d];
                for i in 0..d {
                    m[i * d + i] = 1;
                }
                m
            },
        };
        let mut out = vec![ident];
        let mut head = 0;
        while head < out.len() {
            let w = out[head].clone();
            head += 1;
            for (k, &s) in self.simple.iter().enumerate() {
                // s ∘ w
                let perm: Vec<RootIdx> = w
                    .perm
                    .iter()
                    .map(|&b| self.find_root(&self.reflect(&self.roots[b], s)).unwrap())
                    .collect();
                if out.iter().any(|x| x.perm == perm) {
                    continue;
                }
                let mut lin = vec![0; d * d];
                for col in 0..d {
                    let v: Vec<i32> = (0..d).map(|row| w.lin[row * d + col]).collect();
                    let img = self.reflect(&v, s);
                    for row in 0..d {
                        lin[row * d + col] = img[row];
                    }
                }
                let mut word = vec![k];
                word.extend_from_slice(&w.word);
                out.push(WeylElem { perm, word, lin });
            }
        }
        let expected = match self.kind {
            DatumKind::A1 | DatumKind::GL2 => 2,
            DatumKind::A2 | DatumKind::GL3 => 6,
            DatumKind::C2 => 8,
        };
        if out.len() != expected {
            return Err(Error::Internal("unexpected Weyl group order".into()));
        }
        Ok(out)
    }

    /// `weyl_elements`: every element once, identity first, by word length.
    pub fn weyl(&self) -> &[WeylElem] {
        &self.weyl
    }

    pub fn weyl_identity(&self) -> usize {
        0
    }

    pub fn weyl_longest(&self) -> usize {
        self.weyl.len() - 1
    }

    /// Index of `w_a w_b`.
    pub fn weyl_mul(&self, a: usize, b: usize) -> usize {
        let perm: Vec<RootIdx> = self.weyl[b].perm.iter().map(|&x| self.weyl[a].perm[x]).collect();
        self.weyl_by_perm(&perm)
    }

    pub fn weyl_inv(&self, a: usize) -> usize {
        let mut perm = vec![0; self.roots.len()];
        for (i, &x) in self.weyl[a].perm.iter().enumerate() {
            perm[x] = i;
        }
        self.weyl_by_perm(&perm)
    }

    pub fn weyl_pow(&self, a: usize, k: u64) -> usize {
        let mut acc = 0;
        for _ in 0..k % self.weyl_order(a) as u64 {
            acc = self.weyl_mul(acc, a);
        }
        acc
    }

    pub fn weyl_order(&self, a: usize) -> u32 {
        let mut k = 1;
        let mut cur = a;
        while cur != 0 {
            cur = self.weyl_mul(cur, a);
            k += 1;
        }
        k
    }

    fn weyl_by_perm(&self, perm: &[RootIdx]) -> usize {
        self.weyl.iter().position(|w| w.perm == perm).expect("closed under composition")
    }

    /// Index of the Weyl element with the given reduced or unreduced word.
    pub fn weyl_from_word(&self, word: &[usize]) -> Result<usize> {
        let mut acc = 0;
        for &k in word {
            let sk = self
                .weyl
                .iter()
                .position(|w| w.word == [k])
                .ok_or_else(|| Error::InvalidArgument(alloc::format!("no simple reflection {k}")))?;
            acc = self.weyl_mul(acc, sk);
        }
        Ok(acc)
    }

    /// Apply `w` to an ambient lattice vector.
    pub fn weyl_apply(&self, w: usize, v: &[i32]) -> Vec<i32> {
        let d = v.len();
        let lin = &self.weyl[w].lin;
        (0..d).map(|row| (0..d).map(|col| lin[row * d + col] * v[col]).sum()).collect()
    }

    /// `π` with `w(weight_i) = weight_{π(i)}`: the permutation of diagonal
    /// positions induced by conjugation with a representative of `w`.
    pub fn weight_perm(&self, w: usize) -> Vec<usize> {
        self.weights
            .iter()
            .map(|wt| {
                let img = self.weyl_apply(w, wt);
                self.weights.iter().position(|x| *x == img).expect("weights are W-stable")
            })
            .collect()
    }

    /// `chevalley_pairs`: terms of the commutator expansion of `[p_α, p_β]`
    /// in height-then-lex order of `(i, j)`.
    pub fn chevalley_pairs(&self, a: RootIdx, b: RootIdx) -> Result<&[ChevalleyTerm]> {
        if a == self.neg(b) {
            return Err(Error::Precondition("opposite roots; use the rank-one formula".into()));
        }
        Ok(self.constants.get(&(a, b)).map(|v| v.as_slice()).unwrap_or(&[]))
    }

    /// `p_α(u)` over `Z`.
    pub fn int_root_element(&self, a: RootIdx, u: i64) -> IntMat {
        IntMat::identity(self.dim).add_scaled(&self.root_vectors[a], u)
    }

    fn candidate_terms(&self, a: RootIdx, b: RootIdx) -> Vec<(u32, u32, RootIdx)> {
        let mut out = Vec::new();
        for i in 1..=3u32 {
            for j in 1..=3u32 {
                let v: Vec<i32> = self.roots[a]
                    .iter()
                    .zip(&self.roots[b])
                    .map(|(x, y)| i as i32 * x + j as i32 * y)
                    .collect();
                if let Some(g) = self.find_root(&v) {
                    out.push((i, j, g));
                }
            }
        }
        out.sort_by_key(|&(i, j, _)| (i + j, i));
        out
    }

    fn int_commutator(&self, a: RootIdx, b: RootIdx, t: i64, u: i64) -> IntMat {
        let x = self.int_root_element(a, t);
        let y = self.int_root_element(b, u);
        let xi = self.int_root_element(a, -t);
        let yi = self.int_root_element(b, -u);
        x.mul(&y).mul(&xi).mul(&yi)
    }

    /// Whether `terms` reproduce the commutator over `Z` at the probe values.
    pub fn expansion_matches(&self, a: RootIdx, b: RootIdx, terms: &[ChevalleyTerm]) -> bool {
        const PROBES: [(i64, i64); 6] = [(1, 1), (2, 1), (1, 3), (-2, 5), (3, -2), (7, 4)];
        PROBES.iter().all(|&(t, u)| {
            let mut prod = IntMat::identity(self.dim);
            for term in terms {
                let arg = term.constant * t.pow(term.i) * u.pow(term.j);
                prod = prod.mul(&self.int_root_element(term.root, arg));
            }
            prod == self.int_commutator(a, b, t, u)
        })
    }

    fn solve_constants(&self) -> Result<BTreeMap<(RootIdx, RootIdx), Vec<ChevalleyTerm>>> {
        let mut out = BTreeMap::new();
        let n = self.roots.len();
        for a in 0..n {
            for b in 0..n {
                if a == self.neg(b) {
                    continue;
                }
                let cand = self.candidate_terms(a, b);
                let k = cand.len();
                let mut found = None;
                let choices: u32 = 7u32.pow(k as u32);
                for code in 0..choices {
                    let mut rest = code;
                    let terms: Vec<ChevalleyTerm> = cand
                        .iter()
                        .map(|&(i, j, root)| {
                            let c = (rest % 7) as i64 - 3;
                            rest /= 7;
                            ChevalleyTerm { i, j, root, constant: c }
                        })
                        .collect();
                    if self.expansion_matches(a, b, &terms) {
                        found = Some(terms);
                        break;
                    }
                }
                let terms = found.ok_or_else(|| {
                    Error::Internal(alloc::format!(
                        "no structure constants for ({}, {})",
                        self.label(a),
                        self.label(b)
                    ))
                })?;
                let terms: Vec<ChevalleyTerm> = terms.into_iter().filter(|t| t.constant != 0).collect();
                out.insert((a, b), terms);
            }
        }
        Ok(out)
    }

    /// Replace one structure constant; used to inject faults into checks.
    pub fn with_constant(&self, a: RootIdx, b: RootIdx, term: usize, constant: i64) -> RootDatum {
        let mut d = self.clone();
        if let Some(v) = d.constants.get_mut(&(a, b)) {
            if let Some(t) = v.get_mut(term) {
                t.constant = constant;
            }
        }
        d
    }
}

/// `X_γ`: the sum of the matrix units of weight `γ`, with signs chosen so
/// that `X_γ` lies in the Lie algebra of the form-preserving group.
fn root_vector(gamma: &[i32], weights: &[Vec<i32>], form: Option<&IntMat>) -> Result<IntMat> {
    let d = weights.len();
    let mut units = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let w: Vec<i32> = weights[i].iter().zip(&weights[j]).map(|(a, b)| a - b).collect();
            if w.as_slice() == gamma {
                units.push((i, j));
            }
        }
    }
    let k = units.len();
    for signs in 0..(1u32 << k.saturating_sub(1)) {
        let mut x = IntMat::zero(d);
        for (idx, &(i, j)) in units.iter().enumerate() {
            let s = if idx > 0 && signs >> (idx - 1) & 1 == 1 { -1 } else { 1 };
            x.e[i * d + j] = s;
        }
        let ok = match form {
            None => k == 1,
            Some(j) => {
                let lhs = x.transpose().mul(j).add_scaled(&j.mul(&x), 1);
                lhs.e.iter().all(|&v| v == 0)
            }
        };
        if ok && x.mul(&x).e.iter().all(|&v| v == 0) {
            return Ok(x);
        }
    }
    Err(Error::Internal("no root vector of the required weight".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_heights() {
        let a1 = RootDatum::new(DatumKind::A1).unwrap();
        assert_eq!(a1.root_count(), 2);
        assert_eq!(a1.weyl().len(), 2);
        let a2 = RootDatum::new(DatumKind::A2).unwrap();
        let h: Vec<u32> = a2.positive().map(|a| a2.height(a).unwrap()).collect();
        assert_eq!(h, vec![1, 1, 2]);
        assert_eq!(a2.weyl().len(), 6);
        assert_eq!(a2.weyl()[a2.weyl_longest()].len(), 3);
        let c2 = RootDatum::new(DatumKind::C2).unwrap();
        let h: Vec<u32> = c2.positive().map(|a| c2.height(a).unwrap()).collect();
        assert_eq!(h, vec![1, 1, 2, 3]);
        assert_eq!(c2.weyl().len(), 8);
        assert_eq!(c2.weyl()[c2.weyl_longest()].len(), 4);
        assert_eq!(c2.label(3), "2e1");
        assert!(c2.height(c2.neg(0)).is_err());
        assert_eq!(RootDatum::new(DatumKind::GL3).unwrap().weyl().len(), 6);
    }

    #[test]
    fn a2_commutator_terms() {
        let a2 = RootDatum::new(DatumKind::A2).unwrap();
        let (a, b) = (a2.find_label("e1-e2").unwrap(), a2.find_label("e2-e3").unwrap());
        let terms = a2.chevalley_pairs(a, b).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!((terms[0].i, terms[0].j, terms[0].constant), (1, 1, 1));
        assert_eq!(a2.label(terms[0].root), "e1-e3");
        assert!(a2.chevalley_pairs(a, a).unwrap().is_empty());
        assert!(a2.chevalley_pairs(a, a2.neg(a)).is_err());
    }

    #[test]
    fn c2_short_pair_has_two_terms() {
        let c2 = RootDatum::new(DatumKind::C2).unwrap();
        let (a, b) = (c2.find_label("e1-e2").unwrap(), c2.find_label("e1+e2").unwrap());
        let terms = c2.chevalley_pairs(a, b).unwrap();
        let shape: Vec<(u32, u32)> = terms.iter().map(|t| (t.i, t.j)).collect();
        assert_eq!(shape, vec![(1, 1)]);
        let (a, b) = (c2.find_label("e1-e2").unwrap(), c2.find_label("2e2").unwrap());
        let shape: Vec<(u32, u32)> = c2.chevalley_pairs(a, b).unwrap().iter().map(|t| (t.i, t.j)).collect();
        assert_eq!(shape, vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn symplectic_root_vectors_preserve_form() {
        let c2 = RootDatum::new(DatumKind::C2).unwrap();
        let j = c2.form().unwrap();
        for a in 0..c2.root_count() {
            let g = c2.int_root_element(a, 3);
            assert_eq!(g.transpose().mul(j).mul(&g), *j);
        }
    }

    #[test]
    fn reflections_change_heights_by_pairing() {
        for kind in [DatumKind::A2, DatumKind::C2] {
            let d = RootDatum::new(kind).unwrap();
            for (k, &s) in d.simple().iter().enumerate() {
                let w = d.weyl_from_word(&[k]).unwrap();
                for a in 0..d.root_count() {
                    let img = d.weyl()[w].perm[a];
                    let c = d.pair_coroot(&d.roots()[a], s);
                    assert_eq!(d.signed_height(img), d.signed_height(a) - c);
                }
            }
        }
    }

    #[test]
    fn weyl_group_laws() {
        let d = RootDatum::new(DatumKind::C2).unwrap();
        for a in 0..d.weyl().len() {
            assert_eq!(d.weyl_mul(a, d.weyl_inv(a)), 0);
            assert_eq!(d.weyl_from_word(&d.weyl()[a].word.clone()).unwrap(), a);
        }
    }
}
