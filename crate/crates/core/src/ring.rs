//! Finite local rings of the unramified tower: Galois rings
//! `W_r(F_{p^n}) = (Z/p^r)[x]/(f)` and truncated power series rings
//! `F_{p^n}[t]/t^r`, with the Frobenius lift and the `m`-adic filtration.
//!
//! Elements are plain `u32` indices into the ring; the index is the
//! little-endian positional encoding of the coordinate vector. Rings with at
//! most 256 elements carry full operation tables.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Budget, Error, Result};
use crate::poly;

pub type Elem = u32;

pub(crate) const MAX_DIGITS: usize = 32;
const TABLE_LIMIT: u32 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    /// Mixed characteristic: `(Z/p^r)[x]/(f)`.
    Witt,
    /// Equal characteristic: `F_{p^n}[t]/t^r`.
    EqualChar,
}

impl RingKind {
    pub fn name(self) -> &'static str {
        match self {
            RingKind::Witt => "witt",
            RingKind::EqualChar => "equal-char",
        }
    }
}

impl core::str::FromStr for RingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "witt" => Ok(RingKind::Witt),
            "equal-char" | "equal" => Ok(RingKind::EqualChar),
            other => Err(Error::InvalidArgument(alloc::format!("unknown ring kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElemFilter {
    All,
    Units,
    /// Elements of `1 + m^i`; `OnePlusM(0)` means all units.
    OnePlusM(u32),
}

struct Tables {
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u16>,
    val: Vec<u8>,
}

/// A finite local ring of the tower over a fixed base ring.
///
/// `n` is the residue degree over `F_p`; `base_degree` is the residue degree
/// of the base ring, so that the distinguished Frobenius is `F = σ^base_degree`
/// where `σ` lifts `a ↦ a^p`.
pub struct Ring {
    p: u32,
    r: u32,
    n: u32,
    base_degree: u32,
    kind: RingKind,
    modulus: Vec<u32>,
    /// Coefficient modulus of one coordinate: `p^r` (witt) or `p` (equal-char).
    radix: u32,
    /// `log2(radix)` when the radix is a power of two.
    shift: Option<u32>,
    ndigits: usize,
    card: u32,
    unit_count: u64,
    /// `x^k mod f` for `k < 2n - 1`, as coordinate vectors over the
    /// coefficient ring (`Z/p^r` or `F_p`).
    xpow: Vec<Vec<u32>>,
    /// `sigma[j][i]` is the coefficient vector of `σ^j(x^i)`.
    sigma: Vec<Vec<Vec<u32>>>,
    frob_image: Elem,
    tables: Option<Tables>,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ring")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("n", &self.n)
            .field("base_degree", &self.base_degree)
            .field("kind", &self.kind)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.r == other.r
            && self.n == other.n
            && self.base_degree == other.base_degree
            && self.kind == other.kind
    }
}

impl Eq for Ring {}

/// `make_ring`: the base ring `W_r(F_{p^n})` or `F_{p^n}[t]/t^r`.
pub fn make_ring(p: u32, r: u32, n: u32, kind: RingKind) -> Result<Arc<Ring>> {
    Ring::build(p, r, n, n, kind).map(Arc::new)
}

/// The degree-`m` unramified extension together with the embedding of `ring`.
pub fn extend(ring: &Arc<Ring>, m: u32) -> Result<(Arc<Ring>, Embedding)> {
    if m == 0 {
        return Err(Error::InvalidArgument("extension degree must be positive".into()));
    }
    let n = ring.n.checked_mul(m).ok_or(Error::InvalidArgument("degree overflow".into()))?;
    let big = Arc::new(Ring::build(ring.p, ring.r, n, ring.base_degree, ring.kind)?);
    let emb = Embedding::new(ring, &big)?;
    Ok((big, emb))
}

fn checked_card(p: u32, digits: u64) -> Result<u32> {
    let mut card: u64 = 1;
    for _ in 0..digits {
        card = card.saturating_mul(p as u64);
        if card > u32::MAX as u64 {
            return Err(Error::InvalidArgument("ring too large for u32 indices".into()));
        }
    }
    Ok(card as u32)
}

impl Ring {
    fn build(p: u32, r: u32, n: u32, base_degree: u32, kind: RingKind) -> Result<Ring> {
        if !poly::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 || n == 0 || base_degree == 0 || !n.is_multiple_of(base_degree) {
            return Err(Error::InvalidArgument("r, n must be positive".into()));
        }
        let card = checked_card(p, r as u64 * n as u64)?;
        let modulus = poly::lowest_irreducible(p, n)
            .ok_or_else(|| Error::Internal("no irreducible polynomial found".into()))?;
        let (radix, ndigits) = match kind {
            RingKind::Witt => (checked_card(p, r as u64)?, n as usize),
            RingKind::EqualChar => (p, (n * r) as usize),
        };
        if ndigits > MAX_DIGITS {
            return Err(Error::InvalidArgument("too many coordinates".into()));
        }
        let residue = (p as u64).pow(n);
        let unit_count = card as u64 / residue * (residue - 1);
        let mut ring = Ring {
            p,
            r,
            n,
            base_degree,
            kind,
            modulus,
            radix,
            shift: radix.is_power_of_two().then(|| radix.trailing_zeros()),
            ndigits,
            card,
            unit_count,
            xpow: Vec::new(),
            sigma: Vec::new(),
            frob_image: 0,
            tables: None,
        };
        ring.xpow = ring.reduction_table();
        ring.frob_image = ring.frobenius_lift()?;
        ring.sigma = ring.sigma_matrices();
        if card <= TABLE_LIMIT {
            ring.tables = Some(ring.make_tables());
        }
        Ok(ring)
    }

    fn reduction_table(&self) -> Vec<Vec<u32>> {
        let n = self.n as usize;
        let m = self.radix as u64;
        let mut out = Vec::with_capacity(2 * n);
        let mut cur = vec![0u32; n];
        cur[0] = 1 % self.radix;
        for _ in 0..(2 * n).max(2) {
            out.push(cur.clone());
            // multiply by x and reduce by the monic modulus
            let top = cur[n - 1] as u64;
            for i in (1..n).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            for (i, c) in cur.iter_mut().enumerate() {
                let sub = top * self.modulus[i] as u64 % m;
                *c = ((*c as u64 + m - sub) % m) as u32;
            }
        }
        out
    }

    fn frobenius_lift(&self) -> Result<Elem> {
        let x = self.gen();
        let mut y = self.pow(x, self.p as u64);
        if self.kind == RingKind::EqualChar {
            return Ok(y);
        }
        for _ in 0..=self.r + 1 {
            let fy = self.eval_modulus(y);
            if fy == 0 {
                return Ok(y);
            }
            let dfy = self.eval_modulus_derivative(y);
            let inv = self.inv(dfy).map_err(|_| Error::Internal("f' not a unit at root".into()))?;
            y = self.sub(y, self.mul(fy, inv));
        }
        Err(Error::Internal("Hensel iteration did not converge".into()))
    }

    fn eval_modulus(&self, y: Elem) -> Elem {
        self.eval_poly(&self.modulus, y)
    }

    fn eval_modulus_derivative(&self, y: Elem) -> Elem {
        let d: Vec<u32> = self
            .modulus
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| ((i as u64 * c as u64) % self.radix as u64) as u32)
            .collect();
        self.eval_poly(&d, y)
    }

    /// Horner evaluation of an integer-coefficient polynomial.
    pub(crate) fn eval_poly(&self, coeffs: &[u32], y: Elem) -> Elem {
        let mut acc = self.zero();
        for &c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, y), self.from_int(c as i64));
        }
        acc
    }

    fn sigma_matrices(&self) -> Vec<Vec<Vec<u32>>> {
        let n = self.n as usize;
        let mut out = Vec::with_capacity(n);
        let mut img = self.frob_image;
        let ident: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut v = vec![0u32; n];
                v[i] = 1 % self.radix;
                v
            })
            .collect();
        out.push(ident);
        for _ in 1..n {
            let mut cols = Vec::with_capacity(n);
            let mut acc = self.one();
            for _ in 0..n {
                let d = self.digits(acc);
                cols.push(d[..n].to_vec());
                acc = self.mul(acc, img);
            }
            out.push(cols);
            img = self.apply_sigma_raw(img, &out[1]);
        }
        out
    }

    fn make_tables(&self) -> Tables {
        let c = self.card as usize;
        let mut add = vec![0u8; c * c];
        let mut mul = vec![0u8; c * c];
        let mut neg = vec![0u8; c];
        let mut inv = vec![u16::MAX; c];
        let mut val = vec![0u8; c];
        for a in 0..c {
            neg[a] = self.neg_raw(a as Elem) as u8;
            val[a] = self.valuation_raw(a as Elem) as u8;
            for b in 0..c {
                add[a * c + b] = self.add_raw(a as Elem, b as Elem) as u8;
                let prod = self.mul_raw(a as Elem, b as Elem);
                mul[a * c + b] = prod as u8;
                if prod == 1 % self.card {
                    inv[a] = b as u16;
                }
            }
        }
        Tables { add, mul, neg, inv, val }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Nilpotency index of the maximal ideal.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Residue degree over `F_p`.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn base_degree(&self) -> u32 {
        self.base_degree
    }

    /// Degree of this ring over the base ring, i.e. the order of `F` on it.
    pub fn level(&self) -> u32 {
        self.n / self.base_degree
    }

    /// The size `q = p^base_degree` of the base residue field.
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.base_degree)
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    /// Monic defining polynomial over `F_p`, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn card(&self) -> u32 {
        self.card
    }

    pub fn unit_count(&self) -> u64 {
        self.unit_count
    }

    pub fn frobenius_image(&self) -> Elem {
        self.frob_image
    }

    /// Whether two rings have identical structure (same tower level).
    pub fn same_as(&self, other: &Ring) -> bool {
        self == other
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        if self.card == 1 {
            0
        } else {
            1
        }
    }

    /// The generator `x` of the residue extension.
    pub fn gen(&self) -> Elem {
        if self.n == 1 {
            // f = x, so x = 0
            return 0;
        }
        let mut d = [0u32; MAX_DIGITS];
        d[1] = 1;
        self.encode(&d)
    }

    /// A uniformizer: `p` (witt) or `t` (equal-char).
    pub fn uniformizer(&self) -> Elem {
        match self.kind {
            RingKind::Witt => self.from_int(self.p as i64),
            RingKind::EqualChar => {
                if self.r == 1 {
                    return 0;
                }
                let mut d = [0u32; MAX_DIGITS];
                d[self.n as usize] = 1;
                self.encode(&d)
            }
        }
    }

    pub fn from_int(&self, v: i64) -> Elem {
        let m = self.radix as i64;
        let c = v.rem_euclid(m) as u32;
        let mut d = [0u32; MAX_DIGITS];
        d[0] = c;
        self.encode(&d)
    }

    pub(crate) fn digits(&self, a: Elem) -> [u32; MAX_DIGITS] {
        let mut d = [0u32; MAX_DIGITS];
        let mut rest = a;
        if let Some(sh) = self.shift {
            let mask = self.radix - 1;
            for slot in d.iter_mut().take(self.ndigits) {
                *slot = rest & mask;
                rest >>= sh;
            }
            return d;
        }
        for slot in d.iter_mut().take(self.ndigits) {
            *slot = rest % self.radix;
            rest /= self.radix;
        }
        d
    }

    pub(crate) fn encode(&self, d: &[u32; MAX_DIGITS]) -> Elem {
        let mut acc: u32 = 0;
        if let Some(sh) = self.shift {
            for i in (0..self.ndigits).rev() {
                acc = (acc << sh) | d[i];
            }
            return acc;
        }
        for i in (0..self.ndigits).rev() {
            acc = acc * self.radix + d[i];
        }
        acc
    }

    /// Coordinates of `a`: for witt rings the `n` coefficients of
    /// `1, x, ..., x^{n-1}` in `[0, p^r)`; for equal-char rings the `n·r`
    /// coefficients of `x^i t^j` in `[0, p)`, at position `j·n + i`.
    pub fn coords(&self, a: Elem) -> Vec<u32> {
        self.digits(a)[..self.ndigits].to_vec()
    }

    pub fn from_coords(&self, c: &[u32]) -> Result<Elem> {
        if c.len() > self.ndigits {
            return Err(Error::InvalidArgument(alloc::format!(
                "expected at most {} coordinates, got {}",
                self.ndigits,
                c.len()
            )));
        }
        let mut d = [0u32; MAX_DIGITS];
        for (slot, &v) in d.iter_mut().zip(c) {
            if v >= self.radix {
                return Err(Error::InvalidArgument(alloc::format!(
                    "coordinate {v} out of range [0, {})",
                    self.radix
                )));
            }
            *slot = v;
        }
        Ok(self.encode(&d))
    }

    pub fn coord_count(&self) -> usize {
        self.ndigits
    }

    pub fn coord_modulus(&self) -> u32 {
        self.radix
    }

    #[inline]
    fn reduce(&self, v: u64) -> u64 {
        match self.shift {
            Some(_) => v & (self.radix as u64 - 1),
            None => v % self.radix as u64,
        }
    }

    fn add_raw(&self, a: Elem, b: Elem) -> Elem {
        let (da, db) = (self.digits(a), self.digits(b));
        let mut d = [0u32; MAX_DIGITS];
        for i in 0..self.ndigits {
            d[i] = self.reduce(da[i] as u64 + db[i] as u64) as u32;
        }
        self.encode(&d)
    }

    fn neg_raw(&self, a: Elem) -> Elem {
        let da = self.digits(a);
        let mut d = [0u32; MAX_DIGITS];
        for i in 0..self.ndigits {
            d[i] = (self.radix - da[i]) % self.radix;
        }
        self.encode(&d)
    }

    fn mul_raw(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let one = 1 % self.card;
        if a == one {
            return b;
        }
        if b == one {
            return a;
        }
        // -1 has first coordinate radix - 1 and all others zero
        let minus_one = (self.radix - 1) % self.card;
        if a == minus_one {
            return self.neg_raw(b);
        }
        if b == minus_one {
            return self.neg_raw(a);
        }
        let n = self.n as usize;
        let m = self.radix as u64;
        let (da, db) = (self.digits(a), self.digits(b));
        let blocks = match self.kind {
            RingKind::Witt => 1,
            RingKind::EqualChar => self.r as usize,
        };
        // reduce once per slot when the unreduced sums cannot overflow
        let lazy = (m - 1) * (m - 1) <= u64::MAX / (4 * MAX_DIGITS as u64 * MAX_DIGITS as u64);
        let mut out = [0u64; MAX_DIGITS];
        let mut prod = [0u64; 2 * MAX_DIGITS];
        for j in 0..blocks {
            // t-degree j of the product collects blocks j1 + j2 = j
            prod[..2 * n].iter_mut().for_each(|v| *v = 0);
            let mut any = false;
            for j1 in 0..=j {
                let j2 = j - j1;
                let (ba, bb) = (&da[j1 * n..j1 * n + n], &db[j2 * n..j2 * n + n]);
                for (i1, &x) in ba.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (i2, &y) in bb.iter().enumerate() {
                        if y != 0 {
                            let v = prod[i1 + i2] + x as u64 * y as u64;
                            prod[i1 + i2] = if lazy { v } else { self.reduce(v) };
                            any = true;
                        }
                    }
                }
            }
            if !any {
                continue;
            }
            for (k, c) in prod.iter().enumerate().take(2 * n - 1) {
                let c = self.reduce(*c);
                if c == 0 {
                    continue;
                }
                if k < n {
                    out[j * n + k] += c;
                    continue;
                }
                let red = &self.xpow[k];
                for i in 0..n {
                    let slot = &mut out[j * n + i];
                    let v = *slot + c * red[i] as u64;
                    *slot = if lazy { v } else { self.reduce(v) };
                }
            }
        }
        let mut d = [0u32; MAX_DIGITS];
        for i in 0..self.ndigits {
            d[i] = self.reduce(out[i]) as u32;
        }
        self.encode(&d)
    }

    fn valuation_raw(&self, a: Elem) -> u32 {
        if a == 0 {
            return self.r;
        }
        let d = self.digits(a);
        match self.kind {
            RingKind::Witt => d[..self.ndigits]
                .iter()
                .filter(|&&c| c != 0)
                .map(|&c| {
                    let mut v = 0;
                    let mut c = c;
                    while c % self.p == 0 {
                        c /= self.p;
                        v += 1;
                    }
                    v
                })
                .min()
                .unwrap_or(self.r),
            RingKind::EqualChar => {
                let n = self.n as usize;
                (0..self.r as usize)
                    .find(|&j| d[j * n..j * n + n].iter().any(|&c| c != 0))
                    .map_or(self.r, |j| j as u32)
            }
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.add[(a * self.card + b) as usize] as Elem,
            None => self.add_raw(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.neg[a as usize] as Elem,
            None => self.neg_raw(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.mul[(a * self.card + b) as usize] as Elem,
            None => self.mul_raw(a, b),
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut acc = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Largest `i` with `a ∈ m^i`; `valuation(0) = r`.
    #[inline]
    pub fn valuation(&self, a: Elem) -> u32 {
        match &self.tables {
            Some(t) => t.val[a as usize] as u32,
            None => self.valuation_raw(a),
        }
    }

    #[inline]
    pub fn is_unit(&self, a: Elem) -> bool {
        self.valuation(a) == 0 && self.card > 1
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if let Some(t) = &self.tables {
            let v = t.inv[a as usize];
            return if v == u16::MAX { Err(Error::NotUnit) } else { Ok(v as Elem) };
        }
        if !self.is_unit(a) {
            return Err(Error::NotUnit);
        }
        Ok(self.pow(a, self.unit_count - 1))
    }

    fn apply_sigma_raw(&self, a: Elem, mat: &[Vec<u32>]) -> Elem {
        let n = self.n as usize;
        let m = self.radix as u64;
        let d = self.digits(a);
        let lazy = (m - 1) * (m - 1) <= u64::MAX / (4 * MAX_DIGITS as u64);
        let mut acc = [0u64; MAX_DIGITS];
        for blk in 0..self.ndigits / n {
            for (i, col) in mat.iter().enumerate() {
                let c = d[blk * n + i] as u64;
                if c == 0 {
                    continue;
                }
                for (k, &v) in col.iter().enumerate() {
                    let slot = &mut acc[blk * n + k];
                    let s = *slot + c * v as u64;
                    *slot = if lazy { s } else { self.reduce(s) };
                }
            }
        }
        let mut out = [0u32; MAX_DIGITS];
        for i in 0..self.ndigits {
            out[i] = self.reduce(acc[i]) as u32;
        }
        self.encode(&out)
    }

    /// `σ^j(a)` where `σ` lifts the `p`-th power map of the residue field.
    pub fn sigma_pow(&self, a: Elem, j: u64) -> Elem {
        let j = (j % self.n as u64) as usize;
        if j == 0 || a == 0 || a == 1 % self.card {
            return a;
        }
        self.apply_sigma_raw(a, &self.sigma[j])
    }

    /// `frobenius_apply`: `F^k(a)` with `F = σ^{base_degree}`.
    pub fn frob(&self, a: Elem, k: u64) -> Elem {
        self.sigma_pow(a, (k % self.level() as u64) * self.base_degree as u64)
    }

    /// `N_{F^a}^{F^b}(x) = x·F^a(x)·F^{2a}(x)⋯` with `b/a` factors.
    pub fn norm(&self, x: Elem, a: u32, b: u32) -> Result<Elem> {
        if a == 0 || !b.is_multiple_of(a) {
            return Err(Error::InvalidArgument(alloc::format!("{a} does not divide {b}")));
        }
        let mut acc = self.one();
        for j in 0..(b / a) {
            acc = self.mul(acc, self.frob(x, (a * j) as u64));
        }
        Ok(acc)
    }

    /// Count of elements passing `filter`.
    pub fn count(&self, filter: ElemFilter) -> u64 {
        match filter {
            ElemFilter::All => self.card as u64,
            ElemFilter::Units => self.unit_count,
            ElemFilter::OnePlusM(0) => self.unit_count,
            ElemFilter::OnePlusM(i) => {
                let i = i.min(self.r);
                (self.p as u64).pow(self.n * (self.r - i))
            }
        }
    }

    /// `enumerate_elements`: every qualifying element once, by increasing index.
    pub fn enumerate(&self, filter: ElemFilter, budget: Budget) -> Result<Vec<Elem>> {
        budget.check(self.count(filter))?;
        match filter {
            ElemFilter::All => Ok((0..self.card).collect()),
            ElemFilter::Units | ElemFilter::OnePlusM(0) => {
                Ok((0..self.card).filter(|&a| self.is_unit(a)).collect())
            }
            ElemFilter::OnePlusM(i) => {
                let ideal = self.ideal_elements(i.min(self.r));
                let one = self.one();
                let mut out: Vec<Elem> = ideal.into_iter().map(|z| self.add(one, z)).collect();
                out.sort_unstable();
                Ok(out)
            }
        }
    }

    /// Elements of `m^i`, by increasing index.
    pub fn ideal_elements(&self, i: u32) -> Vec<Elem> {
        let i = i.min(self.r);
        let n = self.n as usize;
        let mut out = Vec::new();
        let count = (self.p as u64).pow(self.n * (self.r - i));
        for v in 0..count {
            let mut d = [0u32; MAX_DIGITS];
            let mut rest = v;
            match self.kind {
                RingKind::Witt => {
                    let step = (self.p as u64).pow(self.r - i);
                    let scale = self.p.pow(i);
                    for slot in d.iter_mut().take(n) {
                        *slot = (rest % step) as u32 * scale;
                        rest /= step;
                    }
                }
                RingKind::EqualChar => {
                    for slot in d.iter_mut().take(self.ndigits).skip(i as usize * n) {
                        *slot = (rest % self.p as u64) as u32;
                        rest /= self.p as u64;
                    }
                }
            }
            out.push(self.encode(&d));
        }
        out.sort_unstable();
        out
    }

    /// Whether the degree-`m` extension has at most `u32::MAX` elements.
    pub fn extension_fits(&self, m: u32) -> bool {
        checked_card(self.p, self.r as u64 * self.n as u64 * m as u64).is_ok()
    }

    /// Elements with coordinates in `[0, p)` of the constant `t`-block: a set of
    /// representatives of the residue field (the Teichmüller subfield in
    /// equal characteristic).
    pub fn residue_representatives(&self) -> Vec<Elem> {
        let count = (self.p as u64).pow(self.n);
        (0..count)
            .map(|v| {
                let mut d = [0u32; MAX_DIGITS];
                let mut rest = v;
                for slot in d.iter_mut().take(self.n as usize) {
                    *slot = (rest % self.p as u64) as u32;
                    rest /= self.p as u64;
                }
                self.encode(&d)
            })
            .collect()
    }

    /// The canonical representative of `a mod m^i`.
    pub fn truncate(&self, a: Elem, i: u32) -> Elem {
        let i = i.min(self.r);
        let mut d = self.digits(a);
        match self.kind {
            RingKind::Witt => {
                let m = self.p.pow(i);
                for c in d.iter_mut().take(self.ndigits) {
                    *c %= m;
                }
            }
            RingKind::EqualChar => {
                for c in d.iter_mut().take(self.ndigits).skip(i as usize * self.n as usize) {
                    *c = 0;
                }
            }
        }
        self.encode(&d)
    }

    /// The ring `A/m^i` of the same kind and residue degree.
    pub fn quotient(&self, i: u32) -> Result<Arc<Ring>> {
        if i == 0 || i > self.r {
            return Err(Error::InvalidArgument(alloc::format!("quotient level {i} not in 1..={}", self.r)));
        }
        Ring::build(self.p, i, self.n, self.base_degree, self.kind).map(Arc::new)
    }

    /// Image of `a` under the reduction map onto `target = A/m^i`.
    pub fn reduce_into(&self, a: Elem, target: &Ring) -> Elem {
        let d = self.digits(self.truncate(a, target.r));
        let mut out = [0u32; MAX_DIGITS];
        out[..target.ndigits].copy_from_slice(&d[..target.ndigits]);
        target.encode(&out)
    }
}

/// The Frobenius-compatible embedding of a ring into an extension of it.
#[derive(Clone)]
pub struct Embedding {
    small: Arc<Ring>,
    big: Arc<Ring>,
    /// Images of the coordinate basis vectors of `small`.
    basis: Vec<Elem>,
    table: Option<Vec<Elem>>,
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Embedding")
            .field("small", &self.small)
            .field("big", &self.big)
            .finish()
    }
}

impl Embedding {
    /// Sends `x` to the root of the small modulus with the least residue
    /// representative. Any root gives a Frobenius-compatible embedding.
    pub fn new(small: &Arc<Ring>, big: &Arc<Ring>) -> Result<Embedding> {
        if small.p != big.p || small.r != big.r || small.kind != big.kind || !big.n.is_multiple_of(small.n) {
            return Err(Error::InvalidArgument("rings are not in one tower".into()));
        }
        let root = if small.n == 1 {
            big.zero()
        } else {
            big.residue_representatives()
                .into_iter()
                .find_map(|z| {
                    let fz = big.eval_poly(&small.modulus, z);
                    let ok = match big.kind {
                        RingKind::Witt => big.valuation(fz) >= 1,
                        RingKind::EqualChar => fz == 0,
                    };
                    if !ok {
                        return None;
                    }
                    let mut y = z;
                    for _ in 0..=big.r + 1 {
                        let fy = big.eval_poly(&small.modulus, y);
                        if fy == 0 {
                            return Some(y);
                        }
                        let d: Vec<u32> = small
                            .modulus
                            .iter()
                            .enumerate()
                            .skip(1)
                            .map(|(i, &c)| ((i as u64 * c as u64) % big.radix as u64) as u32)
                            .collect();
                        let inv = big.inv(big.eval_poly(&d, y)).ok()?;
                        y = big.sub(y, big.mul(fy, inv));
                    }
                    None
                })
                .ok_or_else(|| Error::Internal("no root of the small modulus in the extension".into()))?
        };
        let n = small.n as usize;
        let mut basis = Vec::with_capacity(small.ndigits);
        let t = big.uniformizer();
        for k in 0..small.ndigits {
            let (i, j) = (k % n, k / n);
            let mut e = big.pow(root, i as u64);
            if small.kind == RingKind::EqualChar {
                e = big.mul(e, big.pow(t, j as u64));
            }
            basis.push(e);
        }
        let mut emb = Embedding { small: small.clone(), big: big.clone(), basis, table: None };
        if small.card <= 1 << 16 {
            let table = (0..small.card).map(|a| emb.apply_raw(a)).collect();
            emb.table = Some(table);
        }
        Ok(emb)
    }

    fn apply_raw(&self, a: Elem) -> Elem {
        let d = self.small.digits(a);
        let mut acc = self.big.zero();
        for (k, &img) in self.basis.iter().enumerate() {
            if d[k] != 0 {
                acc = self.big.add(acc, self.big.mul(self.big.from_int(d[k] as i64), img));
            }
        }
        acc
    }

    pub fn apply(&self, a: Elem) -> Elem {
        match &self.table {
            Some(t) => t[a as usize],
            None => self.apply_raw(a),
        }
    }

    pub fn small(&self) -> &Arc<Ring> {
        &self.small
    }

    pub fn big(&self) -> &Arc<Ring> {
        &self.big
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr16() -> Arc<Ring> {
        make_ring(2, 2, 2, RingKind::Witt).unwrap()
    }

    #[test]
    fn cardinalities() {
        assert_eq!(make_ring(2, 2, 1, RingKind::Witt).unwrap().card(), 4);
        assert_eq!(make_ring(2, 1, 3, RingKind::Witt).unwrap().card(), 8);
        let g = gr16();
        assert_eq!(g.card(), 16);
        assert_eq!(g.enumerate(ElemFilter::Units, Budget::DEFAULT).unwrap().len(), 12);
        assert_eq!(make_ring(4, 1, 1, RingKind::Witt).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn z4_enumeration_and_valuation() {
        let z4 = make_ring(2, 2, 1, RingKind::Witt).unwrap();
        assert_eq!(z4.enumerate(ElemFilter::All, Budget::DEFAULT).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(z4.enumerate(ElemFilter::Units, Budget::DEFAULT).unwrap(), vec![1, 3]);
        assert_eq!(z4.enumerate(ElemFilter::OnePlusM(1), Budget::DEFAULT).unwrap(), vec![1, 3]);
        assert_eq!(z4.valuation(1), 0);
        assert_eq!(z4.valuation(2), 1);
        assert_eq!(z4.valuation(0), 2);
        assert_eq!(z4.inv(3), Ok(3));
        assert_eq!(z4.inv(2), Err(Error::NotUnit));
    }

    #[test]
    fn teichmuller_cube_root() {
        let z4 = make_ring(2, 2, 1, RingKind::Witt).unwrap();
        let g = extend(&z4, 2).unwrap().0;
        assert!(gr16().frob(gr16().gen(), 1) == gr16().gen());
        let w = g.gen();
        assert_eq!(g.pow(w, 3), 1);
        assert_eq!(g.frob(w, 1), g.mul(w, w));
        let two_w = g.mul(g.from_int(2), w);
        assert_eq!(g.valuation(two_w), 1);
        for a in 0..16 {
            assert_eq!(g.frob(g.frob(a, 1), 1), a);
        }
    }

    #[test]
    fn norms_in_quadratic_galois_ring() {
        let z4 = make_ring(2, 2, 1, RingKind::Witt).unwrap();
        let (g, emb) = extend(&z4, 2).unwrap();
        let w = g.gen();
        assert_eq!(g.norm(w, 1, 2).unwrap(), 1);
        let x = g.add(1, g.mul(g.from_int(2), w));
        assert_eq!(g.norm(x, 1, 2).unwrap(), emb.apply(3));
        let fixed: Vec<Elem> = (0..16).filter(|&a| g.frob(a, 1) == a).collect();
        let image: Vec<Elem> = (0..4).map(|a| emb.apply(a)).collect();
        assert_eq!(fixed.len(), 4);
        assert!(image.iter().all(|a| fixed.contains(a)));
        assert_eq!(emb.apply(1), 1);
    }

    #[test]
    fn equal_char_extension() {
        let a = make_ring(2, 2, 1, RingKind::EqualChar).unwrap();
        let (b, emb) = extend(&a, 3).unwrap();
        assert_eq!(b.card(), 64);
        assert_eq!(b.valuation(b.uniformizer()), 1);
        assert_eq!(b.mul(b.uniformizer(), b.uniformizer()), 0);
        for x in 0..a.card() {
            assert_eq!(b.frob(emb.apply(x), 1), emb.apply(a.frob(x, 1)));
            for y in 0..a.card() {
                assert_eq!(emb.apply(a.mul(x, y)), b.mul(emb.apply(x), emb.apply(y)));
            }
        }
    }

    #[test]
    fn embedding_commutes_with_frobenius() {
        let a = make_ring(2, 2, 2, RingKind::Witt).unwrap();
        let (b, emb) = extend(&a, 2).unwrap();
        for x in 0..a.card() {
            assert_eq!(b.frob(emb.apply(x), 1), emb.apply(a.frob(x, 1)));
            for y in 0..a.card() {
                assert_eq!(emb.apply(a.mul(x, y)), b.mul(emb.apply(x), emb.apply(y)));
                assert_eq!(emb.apply(a.add(x, y)), b.add(emb.apply(x), emb.apply(y)));
            }
        }
    }

    #[test]
    fn quotient_reduction_is_a_homomorphism() {
        let a = make_ring(3, 2, 1, RingKind::EqualChar).unwrap();
        let q = a.quotient(1).unwrap();
        for x in 0..a.card() {
            for y in 0..a.card() {
                assert_eq!(a.reduce_into(a.mul(x, y), &q), q.mul(a.reduce_into(x, &q), a.reduce_into(y, &q)));
            }
        }
    }
}
