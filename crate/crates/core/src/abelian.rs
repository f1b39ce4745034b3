//! Finite abelian groups given by an element list and a multiplication,
//! decomposed into cyclic factors, and their characters valued in Q/Z.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Budget, Error, Result};

/// An element of Q/Z, kept in `[0, 1)`.
pub type Qz = Ratio<i64>;

pub fn qz(a: i64, b: i64) -> Qz {
    let r = Ratio::new(a, b);
    r - r.floor()
}

/// `G ≅ ⊕ Z/d_i` with `d_1 | d_2 | …` (all `d_i > 1`), generators `h_i`
/// and the exponent vector of every element.
#[derive(Debug, Clone)]
pub struct AbelianStructure<E> {
    elements: Vec<E>,
    logs: Vec<Vec<u64>>,
    factors: Vec<u64>,
    generators: Vec<E>,
}

impl<E: Ord + Clone> AbelianStructure<E> {
    /// Decompose the group formed by `elements` (any order, no repeats).
    pub fn new(elements: &[E], identity: &E, mul: impl Fn(&E, &E) -> E) -> Result<AbelianStructure<E>> {
        let mut sorted = elements.to_vec();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != elements.len() {
            return Err(Error::InvalidArgument("repeated group elements".into()));
        }
        if sorted.binary_search(identity).is_err() {
            return Err(Error::InvalidArgument("identity missing".into()));
        }
        // chain of subgroups H_0 < H_1 < … with relative orders e_i
        let mut coords: BTreeMap<E, Vec<i64>> = BTreeMap::new();
        coords.insert(identity.clone(), Vec::new());
        let mut gens: Vec<E> = Vec::new();
        let mut rels: Vec<Vec<i64>> = Vec::new();
        while coords.len() < sorted.len() {
            let g = sorted.iter().find(|e| !coords.contains_key(*e)).unwrap().clone();
            let k = gens.len();
            let mut p = g.clone();
            let mut e = 1i64;
            while !coords.contains_key(&p) {
                p = mul(&p, &g);
                e += 1;
                if e as usize > sorted.len() {
                    return Err(Error::InvalidArgument("not closed under multiplication".into()));
                }
            }
            let mut rel: Vec<i64> = coords[&p].iter().map(|c| -c).collect();
            rel.resize(k, 0);
            rel.push(e);
            rels.push(rel);
            let old: Vec<(E, Vec<i64>)> = coords.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
            for (h, c) in old {
                let mut x = h;
                for j in 1..e {
                    x = mul(&x, &g);
                    let mut cc = c.clone();
                    cc.resize(k, 0);
                    cc.push(j);
                    if sorted.binary_search(&x).is_err() {
                        return Err(Error::InvalidArgument("not closed under multiplication".into()));
                    }
                    coords.insert(x.clone(), cc);
                }
            }
            gens.push(g);
        }
        let k = gens.len();
        let mut r = vec![vec![0i64; k]; k];
        for (i, rel) in rels.iter().enumerate() {
            r[i][..rel.len()].copy_from_slice(rel);
        }
        let (diag, v, vinv) = smith(r);
        let keep: Vec<usize> = (0..k).filter(|&i| diag[i] > 1).collect();
        let factors: Vec<u64> = keep.iter().map(|&i| diag[i] as u64).collect();
        let n = sorted.len() as i64;
        let power = |x: &[i64]| -> E {
            let mut acc = identity.clone();
            for (j, &xj) in x.iter().enumerate() {
                let mut ex = xj.rem_euclid(n);
                let mut base = gens[j].clone();
                while ex > 0 {
                    if ex & 1 == 1 {
                        acc = mul(&acc, &base);
                    }
                    base = mul(&base, &base);
                    ex >>= 1;
                }
            }
            acc
        };
        let generators: Vec<E> = keep.iter().map(|&i| power(&vinv[i])).collect();
        let logs = sorted
            .iter()
            .map(|e| {
                let mut x = coords[e].clone();
                x.resize(k, 0);
                keep.iter()
                    .map(|&i| {
                        let y: i64 = (0..k).map(|j| x[j] * v[j][i]).sum();
                        y.rem_euclid(diag[i]) as u64
                    })
                    .collect()
            })
            .collect();
        let s = AbelianStructure { elements: sorted, logs, factors, generators };
        if s.factors.iter().product::<u64>() != s.order() as u64 {
            return Err(Error::Internal("invariant factors do not multiply to the order".into()));
        }
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.elements.binary_search(e).ok()
    }

    pub fn contains(&self, e: &E) -> bool {
        self.index_of(e).is_some()
    }

    pub fn log(&self, e: &E) -> Option<&[u64]> {
        self.index_of(e).map(|i| self.logs[i].as_slice())
    }

    pub fn log_at(&self, i: usize) -> &[u64] {
        &self.logs[i]
    }

    /// `characters`: all `|S|` characters, indexed in mixed radix over the
    /// generator images.
    pub fn characters(&self, budget: Budget) -> Result<Vec<Character>> {
        budget.check(self.order() as u64)?;
        Ok((0..self.order()).map(|i| self.character(i)).collect())
    }

    /// The character with mixed-radix index `i`.
    pub fn character(&self, mut i: usize) -> Character {
        let images = self
            .factors
            .iter()
            .map(|&d| {
                let a = (i as u64) % d;
                i /= d as usize;
                a
            })
            .collect();
        Character { factors: self.factors.clone(), images }
    }

    pub fn trivial_character(&self) -> Character {
        self.character(0)
    }

    /// The character with the given generator images, each a multiple of
    /// `1/d_i`.
    pub fn character_from_images(&self, images: &[Qz]) -> Result<Character> {
        if images.len() != self.factors.len() {
            return Err(Error::InvalidArgument("wrong number of generator images".into()));
        }
        let mut out = Vec::new();
        for (v, &d) in images.iter().zip(&self.factors) {
            let a = *v * Ratio::from_integer(d as i64);
            if !a.is_integer() {
                return Err(Error::InvalidArgument("image order does not divide the factor".into()));
            }
            out.push(a.to_integer().rem_euclid(d as i64) as u64);
        }
        Ok(Character { factors: self.factors.clone(), images: out })
    }

    /// The character agreeing with `f` on the generators; `f` is then
    /// checked to be that homomorphism on every element.
    pub fn character_from_fn(&self, f: impl Fn(&E) -> Result<Qz>) -> Result<Character> {
        let imgs = self.generators.iter().map(&f).collect::<Result<Vec<_>>>()?;
        let ch = self.character_from_images(&imgs)?;
        for (i, e) in self.elements.iter().enumerate() {
            if ch.value(&self.logs[i]) != f(e)? {
                return Err(Error::Precondition("function is not a homomorphism".into()));
            }
        }
        Ok(ch)
    }

    pub fn value(&self, ch: &Character, e: &E) -> Result<Qz> {
        let l = self.log(e).ok_or_else(|| Error::NotInSubgroup("the abelian group".into()))?;
        Ok(ch.value(l))
    }

    /// `⟨θ, θ'⟩ = |S|^{-1} Σ_s θ(s) conj θ'(s)`, evaluated exactly from the
    /// value distribution of `θ - θ'`.
    pub fn inner_product(&self, a: &Character, b: &Character) -> Result<Qz> {
        let diff = a.sub(b);
        let mut counts: BTreeMap<Qz, usize> = BTreeMap::new();
        for l in &self.logs {
            *counts.entry(diff.value(l)).or_default() += 1;
        }
        // the values form a cyclic subgroup of Q/Z hit uniformly; its roots
        // of unity sum to zero unless it is trivial
        let k = counts.len();
        let each = self.order() / k;
        if counts.values().any(|&c| c != each) || counts.keys().any(|v| !(*v * Ratio::from_integer(k as i64)).is_integer()) {
            return Err(Error::Internal("character values are not a uniform subgroup".into()));
        }
        Ok(if k == 1 { Ratio::from_integer(1) } else { Ratio::from_integer(0) })
    }
}

/// Diagonal of the Smith form of `r` with the column transform `V` and
/// its inverse.
#[allow(clippy::type_complexity)]
fn smith(mut r: Vec<Vec<i64>>) -> (Vec<i64>, Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let k = r.len();
    let mut v: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| (i == j) as i64).collect()).collect();
    let mut vinv = v.clone();
    let swap_cols = |r: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, vinv: &mut Vec<Vec<i64>>, a: usize, b: usize| {
        for row in r.iter_mut() {
            row.swap(a, b);
        }
        for row in v.iter_mut() {
            row.swap(a, b);
        }
        vinv.swap(a, b);
    };
    // col_b += c·col_a
    let add_col = |r: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, vinv: &mut Vec<Vec<i64>>, a: usize, b: usize, c: i64| {
        for row in r.iter_mut() {
            row[b] += c * row[a];
        }
        for row in v.iter_mut() {
            row[b] += c * row[a];
        }
        for j in 0..k {
            let t = vinv[b][j];
            vinv[a][j] -= c * t;
        }
    };
    for t in 0..k {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..k {
                for j in t..k {
                    if r[i][j] != 0 && best.is_none_or(|(bi, bj)| r[i][j].abs() < r[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            r.swap(t, pi);
            if pj != t {
                swap_cols(&mut r, &mut v, &mut vinv, t, pj);
            }
            let mut done = true;
            for i in t + 1..k {
                let q = Integer::div_floor(&r[i][t], &r[t][t]);
                if q != 0 {
                    let (top, bottom) = r.split_at_mut(i);
                    for (x, y) in bottom[0].iter_mut().zip(&top[t]) {
                        *x -= q * y;
                    }
                }
                if r[i][t] != 0 {
                    done = false;
                }
            }
            for j in t + 1..k {
                let q = Integer::div_floor(&r[t][j], &r[t][t]);
                if q != 0 {
                    add_col(&mut r, &mut v, &mut vinv, t, j, -q);
                }
                if r[t][j] != 0 {
                    done = false;
                }
            }
            if !done {
                continue;
            }
            let bad = (t + 1..k).flat_map(|i| (t + 1..k).map(move |j| (i, j))).find(|&(i, j)| r[i][j] % r[t][t] != 0);
            match bad {
                Some((i, _)) => {
                    let (top, bottom) = r.split_at_mut(i);
                    for (x, y) in top[t].iter_mut().zip(&bottom[0]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if r[t][t] < 0 {
            r[t][t] = -r[t][t];
            for row in v.iter_mut() {
                row[t] = -row[t];
            }
            for x in vinv[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    let diag = (0..k).map(|i| r[i][i]).collect();
    (diag, v, vinv)
}

/// A character of an [`AbelianStructure`]: generator `h_i ↦ images[i]/d_i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    factors: Vec<u64>,
    images: Vec<u64>,
}

impl Character {
    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn images(&self) -> &[u64] {
        &self.images
    }

    /// Generator images in Q/Z.
    pub fn image_values(&self) -> Vec<Qz> {
        self.images.iter().zip(&self.factors).map(|(&a, &d)| qz(a as i64, d as i64)).collect()
    }

    pub fn value(&self, log: &[u64]) -> Qz {
        let mut acc = Ratio::from_integer(0);
        for ((&a, &d), &y) in self.images.iter().zip(&self.factors).zip(log) {
            acc += Ratio::new(((a * y) % d) as i64, d as i64);
        }
        acc - acc.floor()
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|&a| a == 0)
    }

    pub fn add(&self, other: &Character) -> Character {
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .zip(&self.factors)
            .map(|((&a, &b), &d)| (a + b) % d)
            .collect();
        Character { factors: self.factors.clone(), images }
    }

    pub fn neg(&self) -> Character {
        let images = self.images.iter().zip(&self.factors).map(|(&a, &d)| (d - a) % d).collect();
        Character { factors: self.factors.clone(), images }
    }

    pub fn sub(&self, other: &Character) -> Character {
        self.add(&other.neg())
    }

    pub fn order(&self) -> u64 {
        self.images
            .iter()
            .zip(&self.factors)
            .map(|(&a, &d)| d / a.gcd(&d))
            .fold(1, |acc, o| acc.lcm(&o))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmod(n: u64) -> AbelianStructure<u64> {
        let els: Vec<u64> = (0..n).collect();
        AbelianStructure::new(&els, &0, |a, b| (a + b) % n).unwrap()
    }

    #[test]
    fn cyclic_and_product() {
        assert_eq!(zmod(6).factors(), &[6]);
        assert_eq!(zmod(1).factors(), &[] as &[u64]);
        // (Z/2)^2 × Z/4 encoded on 0..16
        let els: Vec<u64> = (0..16).collect();
        let mul = |a: &u64, b: &u64| (((a & 3) + (b & 3)) % 4) | ((a ^ b) & 12);
        let s = AbelianStructure::new(&els, &0, mul).unwrap();
        assert_eq!(s.factors(), &[2, 2, 4]);
        // units mod 15 ≅ Z/2 × Z/4
        let units: Vec<u64> = (1..15).filter(|x| x.gcd(&15) == 1).collect();
        let s = AbelianStructure::new(&units, &1, |a, b| a * b % 15).unwrap();
        assert_eq!(s.factors(), &[2, 4]);
    }

    #[test]
    fn logs_are_homomorphic() {
        let units: Vec<u64> = (1..63).filter(|x| x.gcd(&63) == 1).collect();
        let s = AbelianStructure::new(&units, &1, |a, b| a * b % 63).unwrap();
        assert_eq!(s.factors(), &[6, 6]);
        for a in &units {
            for b in &units {
                let la = s.log(a).unwrap();
                let lb = s.log(b).unwrap();
                let lab = s.log(&(a * b % 63)).unwrap();
                for i in 0..2 {
                    assert_eq!((la[i] + lb[i]) % s.factors()[i], lab[i]);
                }
            }
        }
        for (i, g) in s.generators().iter().enumerate() {
            let mut l = vec![0; 2];
            l[i] = 1;
            assert_eq!(s.log(g).unwrap(), l.as_slice());
        }
    }

    #[test]
    fn characters_and_orthogonality() {
        let s = zmod(2);
        let chars = s.characters(Budget::default()).unwrap();
        assert_eq!(chars.len(), 2);
        assert!(chars[0].is_trivial());
        assert_eq!(s.value(&chars[1], &1).unwrap(), qz(1, 2));
        let s = zmod(6);
        let chars = s.characters(Budget::default()).unwrap();
        assert_eq!(chars.len(), 6);
        for a in &chars {
            for b in &chars {
                let ip = s.inner_product(a, b).unwrap();
                assert_eq!(ip, Ratio::from_integer((a == b) as i64));
            }
        }
        assert_eq!(chars[4].order(), 3);
    }
}
