//! The split groups `SL2, SL3, GL2, GL3, Sp4` over a coefficient ring, as
//! matrix groups, with the congruence filtration and (twisted) Frobenius.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Budget, Error, Result};
use crate::ring::{Elem, ElemFilter, Ring};
use crate::rootdata::{DatumKind, IntMat, RootDatum, RootIdx};

pub const MAX_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    SL2,
    SL3,
    GL2,
    GL3,
    Sp4,
}

impl Preset {
    pub const ALL: [Preset; 5] = [Preset::SL2, Preset::SL3, Preset::GL2, Preset::GL3, Preset::Sp4];

    pub fn datum_kind(self) -> DatumKind {
        match self {
            Preset::SL2 => DatumKind::A1,
            Preset::SL3 => DatumKind::A2,
            Preset::GL2 => DatumKind::GL2,
            Preset::GL3 => DatumKind::GL3,
            Preset::Sp4 => DatumKind::C2,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Preset::SL2 | Preset::GL2 => 2,
            Preset::SL3 | Preset::GL3 => 3,
            Preset::Sp4 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::SL2 => "sl2",
            Preset::SL3 => "sl3",
            Preset::GL2 => "gl2",
            Preset::GL3 => "gl3",
            Preset::Sp4 => "sp4",
        }
    }

    /// Dimension of the group scheme.
    pub fn group_dim(self) -> u32 {
        match self {
            Preset::SL2 => 3,
            Preset::SL3 => 8,
            Preset::GL2 => 4,
            Preset::GL3 => 9,
            Preset::Sp4 => 10,
        }
    }

    /// `|G(F_q)|` as a polynomial in `q`.
    pub fn residue_order(self, q: u64) -> u64 {
        match self {
            Preset::SL2 => q * (q * q - 1),
            Preset::SL3 => q.pow(3) * (q * q - 1) * (q.pow(3) - 1),
            Preset::GL2 => q * (q - 1) * (q * q - 1),
            Preset::GL3 => q.pow(3) * (q - 1) * (q * q - 1) * (q.pow(3) - 1),
            Preset::Sp4 => q.pow(4) * (q * q - 1) * (q.pow(4) - 1),
        }
    }

    pub fn is_gl(self) -> bool {
        matches!(self, Preset::GL2 | Preset::GL3)
    }
}

impl core::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sl2" => Ok(Preset::SL2),
            "sl3" => Ok(Preset::SL3),
            "gl2" => Ok(Preset::GL2),
            "gl3" => Ok(Preset::GL3),
            "sp4" => Ok(Preset::Sp4),
            other => Err(Error::InvalidArgument(alloc::format!("unknown preset {other:?}"))),
        }
    }
}

/// A square matrix of ring elements, at most 4×4, row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    d: u8,
    e: [Elem; MAX_DIM * MAX_DIM],
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dim();
        f.write_str("[")?;
        for i in 0..d {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.debug_list().entries((0..d).map(|j| self.get(i, j))).finish()?;
        }
        f.write_str("]")
    }
}

impl Mat {
    pub fn zero(d: usize) -> Mat {
        Mat { d: d as u8, e: [0; MAX_DIM * MAX_DIM] }
    }

    pub fn dim(&self) -> usize {
        self.d as usize
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.e[i * MAX_DIM + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.e[i * MAX_DIM + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Result<Mat> {
        let d = rows.len();
        if d == 0 || d > MAX_DIM || rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidArgument("matrix must be square of size 1..=4".into()));
        }
        let mut m = Mat::zero(d);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn diagonal(&self) -> Vec<Elem> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }
}

/// `build_group`: a preset over a ring with Frobenius `F = Ad(n_{w0}) ∘ F_std`.
#[derive(Clone)]
pub struct Group {
    preset: Preset,
    ring: Arc<Ring>,
    datum: Arc<RootDatum>,
    twist: usize,
    twist_rep: Mat,
    twist_rep_inv: Mat,
    form: Option<Mat>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("preset", &self.preset)
            .field("ring", &self.ring)
            .field("twist", &self.datum.weyl()[self.twist].word)
            .finish()
    }
}

pub fn build_group(preset: Preset, ring: Arc<Ring>, twist: usize) -> Result<Group> {
    let datum = Arc::new(RootDatum::new(preset.datum_kind())?);
    Group::with_datum(preset, ring, datum, twist)
}

impl Group {
    pub fn with_datum(preset: Preset, ring: Arc<Ring>, datum: Arc<RootDatum>, twist: usize) -> Result<Group> {
        if datum.kind() != preset.datum_kind() {
            return Err(Error::InvalidArgument("root datum does not match preset".into()));
        }
        if twist >= datum.weyl().len() {
            return Err(Error::InvalidArgument(alloc::format!("no Weyl element {twist}")));
        }
        let d = preset.dim();
        let mut g = Group {
            preset,
            ring,
            datum,
            twist: 0,
            twist_rep: Mat::zero(d),
            twist_rep_inv: Mat::zero(d),
            form: None,
        };
        g.form = g.datum.form().map(|j| g.int_mat(j));
        g.twist = twist;
        g.twist_rep = g.weyl_rep(twist);
        g.twist_rep_inv = g.inv(&g.twist_rep);
        let ident = g.identity();
        if g.mul(&g.twist_rep, &g.twist_rep_inv) != ident {
            return Err(Error::Internal("Weyl representative not invertible".into()));
        }
        Ok(g)
    }

    /// The same preset and twist over another ring of the tower.
    pub fn over(&self, ring: Arc<Ring>) -> Group {
        let mut g = self.clone();
        g.ring = ring;
        g.form = g.datum.form().map(|j| g.int_mat(j));
        g.twist_rep = g.weyl_rep(g.twist);
        g.twist_rep_inv = g.inv(&g.twist_rep);
        g
    }

    /// The same preset over the ring with a different twist.
    pub fn with_twist(&self, twist: usize) -> Result<Group> {
        Group::with_datum(self.preset, self.ring.clone(), self.datum.clone(), twist)
    }

    pub fn preset(&self) -> Preset {
        self.preset
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn twist(&self) -> usize {
        self.twist
    }

    pub fn twist_rep(&self) -> &Mat {
        &self.twist_rep
    }

    pub fn dim(&self) -> usize {
        self.preset.dim()
    }

    /// `|G(A)|` from the order formula.
    pub fn order_formula(&self) -> u64 {
        let q = (self.ring.p() as u64).pow(self.ring.n());
        let kernel = q.pow(self.preset.group_dim() * (self.ring.r() - 1));
        self.preset.residue_order(q) * kernel
    }

    pub fn identity(&self) -> Mat {
        let d = self.dim();
        let mut m = Mat::zero(d);
        for i in 0..d {
            m.set(i, i, self.ring.one());
        }
        m
    }

    pub fn int_mat(&self, m: &IntMat) -> Mat {
        let mut out = Mat::zero(m.d);
        for i in 0..m.d {
            for j in 0..m.d {
                out.set(i, j, self.ring.from_int(m.at(i, j)));
            }
        }
        out
    }

    pub fn diag(&self, entries: &[Elem]) -> Mat {
        let mut m = Mat::zero(self.dim());
        for (i, &v) in entries.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    #[inline]
    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        let d = self.dim();
        let r = &*self.ring;
        let mut out = Mat::zero(d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = r.zero();
                for k in 0..d {
                    let x = a.get(i, k);
                    if x != 0 {
                        acc = r.add(acc, r.mul(x, b.get(k, j)));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_all(&self, factors: &[&Mat]) -> Mat {
        factors.iter().fold(self.identity(), |acc, m| self.mul(&acc, m))
    }

    pub fn det(&self, a: &Mat) -> Elem {
        Group::det_generic(&self.ring, a)
    }

    fn det_generic(r: &Ring, a: &Mat) -> Elem {
        let d = a.dim();
        if d == 1 {
            return a.get(0, 0);
        }
        if d == 2 {
            return r.sub(r.mul(a.get(0, 0), a.get(1, 1)), r.mul(a.get(0, 1), a.get(1, 0)));
        }
        let mut acc = r.zero();
        for j in 0..d {
            let mut minor = Mat::zero(d - 1);
            for i in 1..d {
                let mut c = 0;
                for k in 0..d {
                    if k != j {
                        minor.set(i - 1, c, a.get(i, k));
                        c += 1;
                    }
                }
            }
            let term = r.mul(a.get(0, j), Group::det_generic(r, &minor));
            acc = if j % 2 == 0 { r.add(acc, term) } else { r.sub(acc, term) };
        }
        acc
    }

    /// Inverse of an invertible matrix (panics on singular input; use
    /// `try_inv` for untrusted data).
    pub fn inv(&self, a: &Mat) -> Mat {
        self.try_inv(a).expect("matrix is invertible")
    }

    /// Gauss–Jordan elimination with unit pivots (every column of an
    /// invertible matrix over a local ring has a unit below the diagonal part
    /// already cleared).
    pub fn try_inv(&self, a: &Mat) -> Result<Mat> {
        let r = &*self.ring;
        let d = self.dim();
        if d == 2 {
            let det = self.det(a);
            let di = r.inv(det)?;
            let mut m = Mat::zero(2);
            m.set(0, 0, r.mul(di, a.get(1, 1)));
            m.set(1, 1, r.mul(di, a.get(0, 0)));
            m.set(0, 1, r.neg(r.mul(di, a.get(0, 1))));
            m.set(1, 0, r.neg(r.mul(di, a.get(1, 0))));
            return Ok(m);
        }
        let mut m = *a;
        let mut inv = self.identity();
        for col in 0..d {
            let piv = (col..d).find(|&i| r.is_unit(m.get(i, col))).ok_or(Error::NotUnit)?;
            if piv != col {
                for j in 0..d {
                    let (x, y) = (m.get(col, j), m.get(piv, j));
                    m.set(col, j, y);
                    m.set(piv, j, x);
                    let (x, y) = (inv.get(col, j), inv.get(piv, j));
                    inv.set(col, j, y);
                    inv.set(piv, j, x);
                }
            }
            let s = r.inv(m.get(col, col))?;
            for j in 0..d {
                m.set(col, j, r.mul(s, m.get(col, j)));
                inv.set(col, j, r.mul(s, inv.get(col, j)));
            }
            for i in 0..d {
                if i == col {
                    continue;
                }
                let f = m.get(i, col);
                if f == 0 {
                    continue;
                }
                for j in 0..d {
                    m.set(i, j, r.sub(m.get(i, j), r.mul(f, m.get(col, j))));
                    inv.set(i, j, r.sub(inv.get(i, j), r.mul(f, inv.get(col, j))));
                }
            }
        }
        Ok(inv)
    }

    pub fn commutator(&self, a: &Mat, b: &Mat) -> Mat {
        self.mul_all(&[a, b, &self.inv(a), &self.inv(b)])
    }

    /// `[a, b]` with precomputed inverses.
    #[inline]
    pub fn commutator_with(&self, a: &Mat, ai: &Mat, b: &Mat, bi: &Mat) -> Mat {
        self.mul(&self.mul(a, b), &self.mul(ai, bi))
    }

    pub fn conj(&self, g: &Mat, x: &Mat) -> Mat {
        self.mul_all(&[g, x, &self.inv(g)])
    }

    pub fn is_member(&self, a: &Mat) -> bool {
        if a.dim() != self.dim() {
            return false;
        }
        let det = self.det(a);
        match self.preset {
            Preset::GL2 | Preset::GL3 => self.ring.is_unit(det),
            Preset::SL2 | Preset::SL3 => det == self.ring.one(),
            Preset::Sp4 => {
                let j = self.form.as_ref().expect("symplectic form");
                self.mul_all(&[&self.transpose(a), j, a]) == *j
            }
        }
    }

    /// Diagonal members with entries in `1 + m^k` (`k = 0`: all of `T`).
    pub fn torus_elements(&self, k: u32, budget: Budget) -> Result<Vec<Mat>> {
        let r = &*self.ring;
        let vals = r.enumerate(ElemFilter::OnePlusM(k), budget)?;
        let d = self.dim();
        // the last entry is forced by the determinant for SL
        let solve_last = matches!(self.preset, Preset::SL2 | Preset::SL3);
        let free = if solve_last { d - 1 } else { d };
        budget.check((vals.len() as u64).saturating_pow(free as u32))?;
        let mut out = Vec::new();
        let mut idx = alloc::vec![0usize; free];
        let mut entries = alloc::vec![r.one(); d];
        'outer: loop {
            for i in 0..free {
                entries[i] = vals[idx[i]];
            }
            let mut ok = true;
            if solve_last {
                let prod = entries[..d - 1].iter().fold(r.one(), |a, &b| r.mul(a, b));
                entries[d - 1] = r.inv(prod)?;
                ok = k == 0 || r.valuation(r.sub(entries[d - 1], r.one())) >= k;
            }
            let t = self.diag(&entries);
            if ok && self.is_member(&t) {
                out.push(t);
            }
            for i in 0..free {
                idx[i] += 1;
                if idx[i] < vals.len() {
                    continue 'outer;
                }
                idx[i] = 0;
            }
            break;
        }
        out.sort();
        Ok(out)
    }

    /// All products `∏ p_β(c_β)` over `roots` in the given order with every
    /// `c_β ∈ m^level`.
    pub fn root_product_elements(&self, roots: &[RootIdx], level: u32, budget: Budget) -> Result<Vec<Mat>> {
        let vals = self.ring.ideal_elements(level);
        budget.check((vals.len() as u64).saturating_pow(roots.len() as u32))?;
        let mut out = Vec::new();
        let mut idx = alloc::vec![0usize; roots.len()];
        'outer: loop {
            let coeffs: Vec<Elem> = idx.iter().map(|&i| vals[i]).collect();
            out.push(self.compose_unipotent(roots, &coeffs));
            for i in 0..roots.len() {
                idx[i] += 1;
                if idx[i] < vals.len() {
                    continue 'outer;
                }
                idx[i] = 0;
            }
            break;
        }
        Ok(out)
    }

    pub fn transpose(&self, a: &Mat) -> Mat {
        let d = self.dim();
        let mut m = Mat::zero(d);
        for i in 0..d {
            for j in 0..d {
                m.set(j, i, a.get(i, j));
            }
        }
        m
    }

    /// `p_α(u) = I + u X_α`.
    pub fn root_element(&self, a: RootIdx, u: Elem) -> Mat {
        let x = self.datum.root_vector(a);
        let r = &*self.ring;
        let mut m = self.identity();
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let c = x.at(i, j);
                if c != 0 {
                    let v = r.mul(r.from_int(c), u);
                    m.set(i, j, r.add(m.get(i, j), v));
                }
            }
        }
        m
    }

    /// `α̌(λ) = diag(λ^{⟨wt_i, α̌⟩})`.
    pub fn coroot_element(&self, a: RootIdx, lambda: Elem) -> Result<Mat> {
        let r = &*self.ring;
        let li = r.inv(lambda)?;
        let entries: Vec<Elem> = self
            .datum
            .weights()
            .iter()
            .map(|w| {
                let k = self.datum.pair_coroot(w, a);
                if k >= 0 {
                    r.pow(lambda, k as u64)
                } else {
                    r.pow(li, (-k) as u64)
                }
            })
            .collect();
        Ok(self.diag(&entries))
    }

    /// `n_α = p_α(1) p_{-α}(-1) p_α(1)`.
    pub fn n_root(&self, a: RootIdx) -> Mat {
        let r = &*self.ring;
        let one = r.one();
        let x = self.root_element(a, one);
        let y = self.root_element(self.datum.neg(a), r.neg(one));
        self.mul_all(&[&x, &y, &x])
    }

    /// `n_w`: product of `n_α` over the reduced word of `w`.
    pub fn weyl_rep(&self, w: usize) -> Mat {
        let word = &self.datum.weyl()[w].word;
        word.iter().fold(self.identity(), |acc, &k| {
            self.mul(&acc, &self.n_root(self.datum.simple()[k]))
        })
    }

    /// `level`: the `i` with `g ∈ G^{i,*}`; `level(I) = r`.
    pub fn level(&self, g: &Mat) -> u32 {
        let r = &*self.ring;
        let d = self.dim();
        let mut v = r.r();
        for i in 0..d {
            for j in 0..d {
                let mut x = g.get(i, j);
                if i == j {
                    x = r.sub(x, r.one());
                }
                if x != 0 {
                    v = v.min(r.valuation(x));
                }
            }
        }
        v
    }

    /// Entrywise `F^k` of the coefficient ring.
    pub fn frob_std(&self, g: &Mat, k: u64) -> Mat {
        let mut m = *g;
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                m.set(i, j, self.ring.frob(g.get(i, j), k));
            }
        }
        m
    }

    /// `frobenius_g`: `F^k(g)` with `F = Ad(n_{w0}) ∘ F_std`.
    pub fn frobenius(&self, g: &Mat, k: u64) -> Mat {
        let mut m = *g;
        for _ in 0..k {
            m = self.mul_all(&[&self.twist_rep, &self.frob_std(&m, 1), &self.twist_rep_inv]);
        }
        m
    }

    /// Whether the root subgroup `U_α` is stable under the group Frobenius.
    pub fn root_subgroup_is_stable(&self, a: RootIdx) -> bool {
        self.datum.weyl()[self.twist].perm[a] == a
    }

    pub fn is_diagonal(&self, g: &Mat) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || g.get(i, j) == 0))
    }

    pub fn is_upper_unitriangular(&self, g: &Mat) -> bool {
        let d = self.dim();
        let one = self.ring.one();
        (0..d).all(|i| g.get(i, i) == one && (0..i).all(|j| g.get(i, j) == 0))
    }

    pub fn is_lower_unitriangular(&self, g: &Mat) -> bool {
        let d = self.dim();
        let one = self.ring.one();
        (0..d).all(|i| g.get(i, i) == one && (i + 1..d).all(|j| g.get(i, j) == 0))
    }

    pub fn is_upper_triangular(&self, g: &Mat) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..i).all(|j| g.get(i, j) == 0))
    }

    /// Membership in a subgroup described by `spec`.
    pub fn contains(&self, spec: &SubgroupSpec, g: &Mat) -> bool {
        if !self.is_member(g) {
            return false;
        }
        match *spec {
            SubgroupSpec::T => self.is_diagonal(g),
            SubgroupSpec::U => self.is_upper_unitriangular(g),
            SubgroupSpec::UMinus => self.is_lower_unitriangular(g),
            SubgroupSpec::B => self.is_upper_triangular(g),
            SubgroupSpec::RootSubgroup(a, i) => self.root_coordinate(a, g).is_some_and(|u| self.ring.valuation(u) >= i),
            SubgroupSpec::Congruence(i) => self.level(g) >= i,
            SubgroupSpec::TorusCongruence(i) => self.is_diagonal(g) && self.level(g) >= i,
        }
    }

    /// `u` with `g = p_α(u)`, if `g` lies in `U_α`.
    pub fn root_coordinate(&self, a: RootIdx, g: &Mat) -> Option<Elem> {
        let (i, j, s) = self.root_position(a);
        let u = if s > 0 { g.get(i, j) } else { self.ring.neg(g.get(i, j)) };
        (self.root_element(a, u) == *g).then_some(u)
    }

    /// First matrix position of `X_α` and its sign.
    pub fn root_position(&self, a: RootIdx) -> (usize, usize, i64) {
        let x = self.datum.root_vector(a);
        for i in 0..x.d {
            for j in 0..x.d {
                if x.at(i, j) != 0 {
                    return (i, j, x.at(i, j));
                }
            }
        }
        unreachable!("root vectors are nonzero")
    }

    /// Coordinates `u_β` with `g = ∏ p_β(u_β)` in the given order, where
    /// `order` lists a positive system by nondecreasing height for it.
    pub fn factor_unipotent(&self, g: &Mat, order: &[RootIdx]) -> Result<Vec<Elem>> {
        let r = &*self.ring;
        let mut rest = *g;
        let mut coeffs = Vec::with_capacity(order.len());
        for &b in order {
            let (i, j, s) = self.root_position(b);
            let u = if s > 0 { rest.get(i, j) } else { r.neg(rest.get(i, j)) };
            rest = self.mul(&self.root_element(b, r.neg(u)), &rest);
            coeffs.push(u);
        }
        if rest != self.identity() {
            return Err(Error::NotInSubgroup(String::from("the unipotent group of the given roots")));
        }
        Ok(coeffs)
    }

    /// Product `∏ p_β(u_β)` in the given order.
    pub fn compose_unipotent(&self, order: &[RootIdx], coeffs: &[Elem]) -> Mat {
        order
            .iter()
            .zip(coeffs)
            .fold(self.identity(), |acc, (&b, &u)| self.mul(&acc, &self.root_element(b, u)))
    }

    /// `φ_{i}`: entrywise reduction into the group over `A/m^i`.
    pub fn reduce_into(&self, g: &Mat, target: &Group) -> Mat {
        let d = self.dim();
        let mut m = Mat::zero(d);
        for i in 0..d {
            for j in 0..d {
                m.set(i, j, self.ring.reduce_into(g.get(i, j), target.ring()));
            }
        }
        m
    }

    /// The group over `A/m^i`.
    pub fn quotient(&self, i: u32) -> Result<Group> {
        Ok(self.over(self.ring.quotient(i)?))
    }

    /// Canonical representative of `g mod m^i`, entrywise.
    pub fn truncate(&self, g: &Mat, i: u32) -> Mat {
        let d = self.dim();
        let mut m = *g;
        for a in 0..d {
            for b in 0..d {
                m.set(a, b, self.ring.truncate(g.get(a, b), i));
            }
        }
        m
    }

    /// Build a matrix from integer coordinates: each entry is a list of ring
    /// coordinates.
    pub fn from_coord_rows(&self, rows: &[Vec<Vec<u32>>]) -> Result<Mat> {
        let rows: Vec<Vec<Elem>> = rows
            .iter()
            .map(|row| row.iter().map(|c| self.ring.from_coords(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Mat::from_rows(&rows)
    }

    pub fn coord_rows(&self, g: &Mat) -> Vec<Vec<Vec<u32>>> {
        g.rows()
            .iter()
            .map(|row| row.iter().map(|&e| self.ring.coords(e)).collect())
            .collect()
    }

    /// Matrix from plain integers (reduced into the ring).
    pub fn from_ints(&self, rows: &[&[i64]]) -> Result<Mat> {
        let rows: Vec<Vec<Elem>> = rows.iter().map(|r| r.iter().map(|&v| self.ring.from_int(v)).collect()).collect();
        Mat::from_rows(&rows)
    }
}

/// Subgroups with decidable membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupSpec {
    T,
    U,
    UMinus,
    B,
    /// `(U_α)^i`.
    RootSubgroup(RootIdx, u32),
    /// `G^i`.
    Congruence(u32),
    /// `T^i`.
    TorusCongruence(u32),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{extend, make_ring, RingKind};

    fn sl2_z4() -> Group {
        build_group(Preset::SL2, make_ring(2, 2, 1, RingKind::Witt).unwrap(), 0).unwrap()
    }

    #[test]
    fn root_and_coroot_elements() {
        let g = sl2_z4();
        let a = 0;
        assert_eq!(g.root_element(a, 1), g.from_ints(&[&[1, 1], &[0, 1]]).unwrap());
        assert_eq!(g.root_element(g.datum().neg(a), 2), g.from_ints(&[&[1, 0], &[2, 1]]).unwrap());
        assert_eq!(g.mul(&g.root_element(a, 1), &g.root_element(a, 3)), g.identity());
        assert_eq!(g.coroot_element(a, 3).unwrap(), g.diag(&[3, 3]));
        assert_eq!(g.coroot_element(a, 1).unwrap(), g.identity());
        assert!(g.coroot_element(a, 2).is_err());
        assert_eq!(g.weyl_rep(1), g.from_ints(&[&[0, 1], &[-1, 0]]).unwrap());
    }

    #[test]
    fn coroot_acts_by_square() {
        let g = build_group(Preset::SL2, make_ring(3, 2, 1, RingKind::Witt).unwrap(), 0).unwrap();
        let r = g.ring().clone();
        for lam in r.enumerate(crate::ring::ElemFilter::Units, Default::default()).unwrap() {
            let t = g.coroot_element(0, lam).unwrap();
            for z in 0..r.card() {
                let lhs = g.conj(&t, &g.root_element(0, z));
                assert_eq!(lhs, g.root_element(0, r.mul(r.mul(lam, lam), z)));
            }
        }
    }

    #[test]
    fn levels() {
        let g = sl2_z4();
        assert_eq!(g.level(&g.identity()), 2);
        assert_eq!(g.level(&g.from_ints(&[&[1, 2], &[0, 1]]).unwrap()), 1);
        assert_eq!(g.level(&g.root_element(0, 1)), 0);
    }

    #[test]
    fn twisted_frobenius_on_torus() {
        let z4 = make_ring(2, 2, 1, RingKind::Witt).unwrap();
        let (r2, _) = extend(&z4, 2).unwrap();
        let g = build_group(Preset::SL2, r2.clone(), 1).unwrap();
        let w = r2.gen();
        let wi = r2.inv(w).unwrap();
        let t = g.diag(&[w, wi]);
        let ft = g.frobenius(&t, 1);
        let fw = r2.frob(w, 1);
        assert_eq!(ft, g.diag(&[r2.inv(fw).unwrap(), fw]));
        let split = g.with_twist(0).unwrap();
        assert_eq!(split.frobenius(&split.root_element(0, w), 1), split.root_element(0, r2.mul(w, w)));
    }

    #[test]
    fn unipotent_factorization_roundtrip() {
        let z4 = make_ring(2, 2, 1, RingKind::Witt).unwrap();
        for preset in [Preset::SL3, Preset::Sp4] {
            let g = build_group(preset, z4.clone(), 0).unwrap();
            let order: Vec<RootIdx> = g.datum().positive().collect();
            let coeffs: Vec<Elem> = (0..order.len() as u32).map(|i| (i * 3 + 1) % 4).collect();
            let u = g.compose_unipotent(&order, &coeffs);
            assert!(g.is_member(&u));
            assert_eq!(g.factor_unipotent(&u, &order).unwrap(), coeffs);
            assert!(g.factor_unipotent(&g.weyl_rep(1), &order).is_err());
        }
    }

    #[test]
    fn symplectic_generators_are_members() {
        let z4 = make_ring(2, 2, 1, RingKind::Witt).unwrap();
        let g = build_group(Preset::Sp4, z4, 3).unwrap();
        for a in 0..g.datum().root_count() {
            assert!(g.is_member(&g.root_element(a, 3)));
            assert!(g.is_member(&g.coroot_element(a, 3).unwrap()));
        }
        for w in 0..g.datum().weyl().len() {
            assert!(g.is_member(&g.weyl_rep(w)));
        }
        let x = g.root_element(0, 1);
        assert!(g.is_member(&g.frobenius(&x, 1)));
    }

    #[test]
    fn inverse_matches_identity() {
        let z4 = make_ring(2, 2, 1, RingKind::Witt).unwrap();
        let g = build_group(Preset::GL3, z4, 0).unwrap();
        let m = g.mul_all(&[&g.weyl_rep(3), &g.root_element(1, 3), &g.diag(&[3, 1, 3])]);
        assert_eq!(g.mul(&m, &g.inv(&m)), g.identity());
        assert_eq!(g.det(&g.diag(&[3, 1, 3])), 1);
    }
}
