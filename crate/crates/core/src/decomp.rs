//! Iwahori and Bruhat decompositions, commutator identities between root
//! subgroups, and the stratification of `Z^1 - {1}` by leading root sets.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Budget, Error, Result};
use crate::group::{Group, Mat};
use crate::ring::{make_ring, Elem, RingKind};
use crate::rootdata::RootIdx;

/// `g = u_minus · t · u` with all three factors congruent to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IwahoriRecord {
    pub u_minus: Mat,
    pub t: Mat,
    pub u: Mat,
}

/// `g = L · D · U` with `L` lower unitriangular, `D` diagonal, `U` upper
/// unitriangular. Fails when a leading pivot is not a unit.
pub fn ldu(g: &Group, x: &Mat) -> Result<(Mat, Mat, Mat)> {
    let r = g.ring();
    let d = g.dim();
    let mut m = *x;
    let mut l = g.identity();
    for k in 0..d {
        let piv = m.get(k, k);
        let pi = r.inv(piv)?;
        for i in k + 1..d {
            let f = r.mul(m.get(i, k), pi);
            if f == 0 {
                continue;
            }
            l.set(i, k, f);
            for j in 0..d {
                m.set(i, j, r.sub(m.get(i, j), r.mul(f, m.get(k, j))));
            }
        }
    }
    let diag = g.diag(&m.diagonal());
    let mut u = m;
    for i in 0..d {
        let di = r.inv(m.get(i, i))?;
        for j in 0..d {
            u.set(i, j, r.mul(di, m.get(i, j)));
        }
    }
    Ok((l, diag, u))
}

/// `iwahori_decompose`: the unique factorization of `g ∈ G^1` in
/// `(U^-)^1 T^1 U^1`.
pub fn iwahori_decompose(g: &Group, x: &Mat) -> Result<IwahoriRecord> {
    if !g.is_member(x) || g.level(x) < 1 {
        return Err(Error::NotInSubgroup("the first congruence subgroup".into()));
    }
    let (l, t, u) = ldu(g, x)?;
    let rec = IwahoriRecord { u_minus: l, t, u };
    for f in [&rec.u_minus, &rec.t, &rec.u] {
        if !g.is_member(f) || g.level(f) < 1 {
            return Err(Error::Internal("Iwahori factor left the congruence subgroup".into()));
        }
    }
    if g.mul_all(&[&rec.u_minus, &rec.t, &rec.u]) != *x {
        return Err(Error::Internal("Iwahori factors do not multiply back".into()));
    }
    Ok(rec)
}

/// Ranks modulo `m` of the lower-left submatrices `rows i.., cols ..=j`.
/// Two elements lie in the same residue double coset `B_1 w B_1` exactly
/// when these profiles agree.
fn rank_profile(g: &Group, x: &Mat) -> Vec<u32> {
    let d = g.dim();
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            out.push(residue_rank(g, x, i, j));
        }
    }
    out
}

fn residue_rank(g: &Group, x: &Mat, row0: usize, col1: usize) -> u32 {
    let r = g.ring();
    let d = g.dim();
    let rows: Vec<usize> = (row0..d).collect();
    let mut m: Vec<Vec<Elem>> = rows.iter().map(|&i| (0..=col1).map(|j| x.get(i, j)).collect()).collect();
    let mut rank = 0;
    let mut used = alloc::vec![false; m.len()];
    for c in 0..=col1 {
        let Some(p) = (0..m.len()).find(|&i| !used[i] && r.is_unit(m[i][c])) else {
            continue;
        };
        used[p] = true;
        rank += 1;
        let pi = r.inv(m[p][c]).expect("unit pivot");
        for i in 0..m.len() {
            if i == p || m[i][c] == 0 {
                continue;
            }
            let f = r.mul(m[i][c], pi);
            for k in 0..=col1 {
                let v = r.sub(m[i][k], r.mul(f, m[p][k]));
                m[i][k] = v;
            }
        }
    }
    rank
}

/// Data for Bruhat decompositions relative to `(B, B')` with
/// `U' = n_{v'} U n_{v'}^{-1}` and both tori diagonal.
#[derive(Debug, Clone)]
pub struct BruhatFrame {
    v_prime: usize,
    n_v: Mat,
    n_v_inv: Mat,
    lifts: Vec<Mat>,
    profiles: Vec<Vec<u32>>,
}

/// Root lists spanning the unipotent factor sets of one Bruhat cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellRoots {
    pub u: Vec<RootIdx>,
    pub k: Vec<RootIdx>,
    pub u_prime: Vec<RootIdx>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruhatRecord {
    pub w: usize,
    pub lift: Mat,
    pub u: Mat,
    pub t_prime: Mat,
    pub k: Mat,
    pub u_prime: Mat,
}

impl BruhatFrame {
    pub fn new(g: &Group, v_prime: usize) -> BruhatFrame {
        let weyl = g.datum().weyl().len();
        let lifts: Vec<Mat> = (0..weyl).map(|w| g.weyl_rep(w)).collect();
        let profiles = lifts.iter().map(|n| rank_profile(g, n)).collect();
        let n_v = g.weyl_rep(v_prime);
        BruhatFrame { v_prime, n_v, n_v_inv: g.inv(&n_v), lifts, profiles }
    }

    /// The standard frame `U' = U`.
    pub fn standard(g: &Group) -> BruhatFrame {
        BruhatFrame::new(g, 0)
    }

    pub fn v_prime(&self) -> usize {
        self.v_prime
    }

    pub fn lift(&self, w: usize) -> &Mat {
        &self.lifts[w]
    }

    /// Replace the lift of `w` (any element of `N(T)` over `w`).
    pub fn set_lift(&mut self, w: usize, lift: Mat) {
        self.lifts[w] = lift;
    }

    pub fn n_v_prime(&self) -> &Mat {
        &self.n_v
    }

    /// The `w` with `φ_1(g) ∈ U_1 T_1 ẇ U'_1`.
    pub fn residue_cell(&self, g: &Group, x: &Mat) -> usize {
        let y = self.standard_cell(g, &g.mul(x, &self.n_v));
        g.datum().weyl_mul(y, g.datum().weyl_inv(self.v_prime))
    }

    fn standard_cell(&self, g: &Group, x: &Mat) -> usize {
        let prof = rank_profile(g, x);
        self.profiles
            .iter()
            .position(|p| *p == prof)
            .expect("every element lies in some residue Bruhat cell")
    }

    /// `bruhat_decompose`: `g = u ŵ t' k u'` with `u ∈ U ∩ ŵU'^-ŵ^{-1}`,
    /// `t' ∈ T'`, `k ∈ (U'^-)^1 ∩ ŵ^{-1}U^-ŵ`, `u' ∈ U'`.
    pub fn decompose(&self, g: &Group, x: &Mat) -> Result<BruhatRecord> {
        let w = self.residue_cell(g, x);
        let lift = self.lifts[w];
        let h = g.mul(x, &self.n_v);
        let xr = g.mul(&lift, &self.n_v);
        let xr_inv = g.inv(&xr);
        // x^{-1} h = (x^{-1} u x) t k u~ is an LDU factorization
        let (l, t, ut) = ldu(g, &g.mul(&xr_inv, &h)).map_err(|_| Error::Internal("residue cell mismatch".into()))?;
        // split L = v k'' with x v x^{-1} upper and x k'' x^{-1} lower
        let m = g.mul_all(&[&xr, &l, &xr_inv]);
        let (l1, d1, u1) = ldu(g, &g.inv(&m)).map_err(|_| Error::Internal("no UL splitting".into()))?;
        if d1 != g.identity() {
            return Err(Error::Internal("UL splitting has a torus part".into()));
        }
        let u = g.inv(&u1);
        let k2 = g.mul_all(&[&xr_inv, &g.inv(&l1), &xr]);
        let k_std = g.mul_all(&[&g.inv(&t), &k2, &t]);
        let rec = BruhatRecord {
            w,
            lift,
            u,
            t_prime: g.mul_all(&[&self.n_v, &t, &self.n_v_inv]),
            k: g.mul_all(&[&self.n_v, &k_std, &self.n_v_inv]),
            u_prime: g.mul_all(&[&self.n_v, &ut, &self.n_v_inv]),
        };
        if !self.is_valid(g, &rec) || self.compose(g, &rec) != *x {
            return Err(Error::Internal("Bruhat factors fail their membership checks".into()));
        }
        Ok(rec)
    }

    /// Roots of the factor sets of the cell of `w`: `U ∩ ŵU'^-ŵ^{-1}`,
    /// `(U'^-)^1 ∩ ŵ^{-1}U^-ŵ`, and `U'`.
    pub fn cell_roots(&self, g: &Group, w: usize) -> CellRoots {
        let dat = g.datum();
        let wp = &dat.weyl()[w].perm;
        let vp = &dat.weyl()[self.v_prime].perm;
        let winv = &dat.weyl()[dat.weyl_inv(w)].perm;
        let vinv = &dat.weyl()[dat.weyl_inv(self.v_prime)].perm;
        let u = dat.positive().filter(|&b| !dat.is_positive(vinv[winv[b]])).collect();
        let u_prime_minus: Vec<RootIdx> = dat.positive().map(|a| vp[dat.neg(a)]).collect();
        let k = u_prime_minus.iter().copied().filter(|&c| !dat.is_positive(wp[c])).collect();
        let u_prime = dat.positive().map(|a| vp[a]).collect();
        CellRoots { u, k, u_prime }
    }

    /// Every element of the cell of `w`, as products `u ŵ t' k u'`.
    pub fn cell_elements(&self, g: &Group, w: usize, budget: Budget) -> Result<Vec<Mat>> {
        let roots = self.cell_roots(g, w);
        let us = g.root_product_elements(&roots.u, 0, budget)?;
        let ts = g.torus_elements(0, budget)?;
        let ks = g.root_product_elements(&roots.k, 1, budget)?;
        let ups = g.root_product_elements(&roots.u_prime, 0, budget)?;
        budget.check((us.len() * ts.len() * ks.len() * ups.len()) as u64)?;
        let lift = &self.lifts[w];
        let mut out = Vec::new();
        for u in &us {
            let uw = g.mul(u, lift);
            for t in &ts {
                let uwt = g.mul(&uw, t);
                for k in &ks {
                    let uwtk = g.mul(&uwt, k);
                    for up in &ups {
                        out.push(g.mul(&uwtk, up));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn compose(&self, g: &Group, rec: &BruhatRecord) -> Mat {
        g.mul_all(&[&rec.u, &rec.lift, &rec.t_prime, &rec.k, &rec.u_prime])
    }

    /// Whether each factor lies in its declared subgroup.
    pub fn is_valid(&self, g: &Group, rec: &BruhatRecord) -> bool {
        let wl = &rec.lift;
        let wi = g.inv(wl);
        let to_std = |m: &Mat| g.mul_all(&[&self.n_v_inv, m, &self.n_v]);
        g.is_member(&rec.u)
            && g.is_upper_unitriangular(&rec.u)
            && g.is_lower_unitriangular(&to_std(&g.mul_all(&[&wi, &rec.u, wl])))
            && g.is_member(&rec.t_prime)
            && g.is_diagonal(&rec.t_prime)
            && g.is_member(&rec.k)
            && g.level(&rec.k) >= 1
            && g.is_lower_unitriangular(&to_std(&rec.k))
            && g.is_lower_unitriangular(&g.mul_all(&[wl, &rec.k, &wi]))
            && g.is_member(&rec.u_prime)
            && g.is_upper_unitriangular(&to_std(&rec.u_prime))
    }
}

/// `residue_bruhat_cell` for `U' = U`.
pub fn residue_bruhat_cell(g: &Group, x: &Mat) -> usize {
    BruhatFrame::standard(g).residue_cell(g, x)
}

/// Per-root constants `(a, c)` with
/// `[p_α(x), p_{-α}(y)] = α̌(1 + a·xy) · p_α(c·x²y)` whenever
/// `xy ∈ m^{r-1}` and `xy² = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank1Constants {
    pub by_root: Vec<(i64, i64)>,
}

impl Rank1Constants {
    /// Solve the constants for the preset of `g` over `Z/27`, where every
    /// candidate pair is distinguishable.
    pub fn solve(g: &Group) -> Result<Rank1Constants> {
        let z27 = make_ring(3, 3, 1, RingKind::Witt)?;
        let h = g.over(z27).with_twist(0)?;
        let r = h.ring().clone();
        let mut by_root = Vec::new();
        for a in 0..h.datum().root_count() {
            let mut found = None;
            'cand: for ca in [1i64, -1, 2, -2] {
                'cc: for cc in [-1i64, 1, -2, 2] {
                    for (b, c) in admissible_levels(r.r()) {
                        for x in r.ideal_elements(b) {
                            for y in r.ideal_elements(c) {
                                let lhs = h.commutator(&h.root_element(a, x), &h.root_element(h.datum().neg(a), y));
                                let (tau, u) = rank1_from_constants(&h, a, (ca, cc), x, y)?;
                                if h.mul(&tau, &u) != lhs {
                                    continue 'cc;
                                }
                            }
                        }
                    }
                    found = Some((ca, cc));
                    break 'cand;
                }
            }
            by_root.push(found.ok_or_else(|| Error::Internal("no rank-one constants".into()))?);
        }
        Ok(Rank1Constants { by_root })
    }
}

/// Pairs `(b, c)` with `b + c ≥ r - 1` and `b + 2c ≥ r`, `0 ≤ b, c ≤ r`.
pub fn admissible_levels(r: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for b in 0..=r {
        for c in 0..=r {
            if b + c + 1 >= r && b + 2 * c >= r {
                out.push((b, c));
            }
        }
    }
    out
}

fn rank1_from_constants(g: &Group, a: RootIdx, (ca, cc): (i64, i64), x: Elem, y: Elem) -> Result<(Mat, Mat)> {
    let r = g.ring();
    let xy = r.mul(x, y);
    let lam = r.add(r.one(), r.mul(r.from_int(ca), xy));
    let tau = g.coroot_element(a, lam)?;
    let u = g.root_element(a, r.mul(r.from_int(cc), r.mul(x, xy)));
    Ok((tau, u))
}

fn check_levels(g: &Group, x: Elem, b: u32, y: Elem, c: u32) -> Result<()> {
    let r = g.ring();
    if r.valuation(x) < b || r.valuation(y) < c {
        return Err(Error::Precondition("coordinate below its declared level".into()));
    }
    Ok(())
}

/// `rank1_commutator`: `[p_α(x), p_{-α}(y)] = τ·u` with `τ ∈ 𝒯^α`,
/// `u ∈ (U_α)^{r-1}`, cross-checked against the matrix commutator.
pub fn rank1_commutator(
    g: &Group,
    consts: &Rank1Constants,
    a: RootIdx,
    x: Elem,
    b: u32,
    y: Elem,
    c: u32,
) -> Result<(Mat, Mat)> {
    let rr = g.ring().r();
    if b + c + 1 < rr || b + 2 * c < rr {
        return Err(Error::Precondition(alloc::format!(
            "levels b = {b}, c = {c} need b + c ≥ r - 1 and b + 2c ≥ r"
        )));
    }
    check_levels(g, x, b, y, c)?;
    let (tau, u) = rank1_from_constants(g, a, consts.by_root[a], x, y)?;
    let direct = g.commutator(&g.root_element(a, x), &g.root_element(g.datum().neg(a), y));
    if g.mul(&tau, &u) != direct {
        return Err(Error::Internal("rank-one formula disagrees with the matrix commutator".into()));
    }
    Ok((tau, u))
}

/// The product `α̌(1 + a·xy) · p_α(xy / (1 - a·xy))`, evaluated literally.
pub fn rank1_literal_form(g: &Group, a: RootIdx, const_a: i64, x: Elem, y: Elem) -> Result<Mat> {
    let r = g.ring();
    let axy = r.mul(r.from_int(const_a), r.mul(x, y));
    let tau = g.coroot_element(a, r.add(r.one(), axy))?;
    let denom = r.inv(r.sub(r.one(), axy))?;
    Ok(g.mul(&tau, &g.root_element(a, r.mul(r.mul(x, y), denom))))
}

/// `chevalley_commutator`: factors `(γ, coefficient)` of `[p_α(x), p_β(y)]`
/// in the fixed expansion order, verified against the matrix commutator.
pub fn chevalley_commutator(
    g: &Group,
    a: RootIdx,
    x: Elem,
    b: u32,
    beta: RootIdx,
    y: Elem,
    c: u32,
) -> Result<Vec<(RootIdx, Elem)>> {
    check_levels(g, x, b, y, c)?;
    let r = g.ring();
    let terms = g.datum().chevalley_pairs(a, beta)?;
    let factors: Vec<(RootIdx, Elem)> = terms
        .iter()
        .map(|t| {
            let v = r.mul(r.pow(x, t.i as u64), r.pow(y, t.j as u64));
            (t.root, r.mul(r.from_int(t.constant), v))
        })
        .collect();
    let prod = factors.iter().fold(g.identity(), |acc, &(root, v)| g.mul(&acc, &g.root_element(root, v)));
    if prod != g.commutator(&g.root_element(a, x), &g.root_element(beta, y)) {
        return Err(Error::Internal("commutator expansion disagrees with matrices".into()));
    }
    Ok(factors)
}

/// The pair `(U_X, V)` of unipotent radicals `n_x U n_x^{-1}` and
/// `n_v U n_v^{-1}` used by the stratification and the induction identity;
/// heights refer to the positive system of `V`.
#[derive(Debug, Clone)]
pub struct StratFrame {
    x: usize,
    v: usize,
    /// Roots of `V` in height-then-lex order.
    v_order: Vec<RootIdx>,
    v_height: Vec<i32>,
    /// Roots of `Z = U_X ∩ V`.
    z_roots: Vec<RootIdx>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StratumLabel {
    pub a: u32,
    pub roots: Vec<RootIdx>,
}

impl StratFrame {
    pub fn new(g: &Group, x: usize, v: usize) -> StratFrame {
        let dat = g.datum();
        let vinv = dat.weyl_inv(v);
        let xinv = dat.weyl_inv(x);
        let v_height: Vec<i32> = (0..dat.root_count())
            .map(|a| dat.signed_height(dat.weyl()[vinv].perm[a]))
            .collect();
        // image of the standard height-then-lex order
        let v_order: Vec<RootIdx> = dat.positive().map(|a| dat.weyl()[v].perm[a]).collect();
        let z_roots = v_order
            .iter()
            .copied()
            .filter(|&b| dat.is_positive(dat.weyl()[xinv].perm[b]))
            .collect();
        StratFrame { x, v, v_order, v_height, z_roots }
    }

    pub fn x(&self) -> usize {
        self.x
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn v_order(&self) -> &[RootIdx] {
        &self.v_order
    }

    /// Height of a root in the positive system of `V` (negative on `V^-`).
    pub fn height(&self, a: RootIdx) -> i32 {
        self.v_height[a]
    }

    pub fn z_roots(&self) -> &[RootIdx] {
        &self.z_roots
    }

    /// The second factorization order: heights descending.
    pub fn reversed_order(&self) -> Vec<RootIdx> {
        self.v_order.iter().rev().copied().collect()
    }

    /// Coordinates `x_β^z` with respect to a product order on the roots of `V`.
    pub fn coordinates(&self, g: &Group, z: &Mat, order: &[RootIdx]) -> Result<Vec<Elem>> {
        let r = g.ring();
        let mut coeffs = alloc::vec![r.zero(); order.len()];
        // solve by increasing height: the entry at β's position is
        // ±x_β plus terms in strictly lower heights
        for &b in &self.v_order {
            let idx = order.iter().position(|&o| o == b).ok_or(Error::InvalidArgument("order misses a root".into()))?;
            coeffs[idx] = r.zero();
            let partial = g.compose_unipotent(order, &coeffs);
            let (i, j, s) = g.root_position(b);
            let diff = r.sub(z.get(i, j), partial.get(i, j));
            coeffs[idx] = if s > 0 { diff } else { r.neg(diff) };
        }
        if g.compose_unipotent(order, &coeffs) != *z {
            return Err(Error::NotInSubgroup("V".into()));
        }
        Ok(coeffs)
    }

    /// Elements of `Z^1 = ∏_{β ∈ Φ'} (U_β)^1`.
    pub fn z1_elements(&self, g: &Group) -> Vec<Mat> {
        let r = g.ring();
        let m = r.ideal_elements(1);
        let k = self.z_roots.len();
        let mut out = Vec::new();
        let total = m.len().pow(k as u32);
        for code in 0..total {
            let mut rest = code;
            let coeffs: Vec<Elem> = (0..k)
                .map(|_| {
                    let v = m[rest % m.len()];
                    rest /= m.len();
                    v
                })
                .collect();
            out.push(g.compose_unipotent(&self.z_roots, &coeffs));
        }
        out
    }

    /// `z_stratify` with respect to the given product order.
    pub fn stratify_with(&self, g: &Group, z: &Mat, order: &[RootIdx]) -> Result<StratumLabel> {
        let r = g.ring();
        if *z == g.identity() {
            return Err(Error::Precondition("z must not be the identity".into()));
        }
        let a = g.level(z);
        if a < 1 {
            return Err(Error::NotInSubgroup("Z^1".into()));
        }
        let coeffs = self.coordinates(g, z, order)?;
        let val = |b: RootIdx| r.valuation(coeffs[order.iter().position(|&o| o == b).unwrap()]);
        for &b in &self.v_order {
            if !self.z_roots.contains(&b) && val(b) < r.r() {
                return Err(Error::NotInSubgroup("U_X ∩ V".into()));
            }
            if val(b) < a {
                return Err(Error::Internal("coordinate below the level of z".into()));
            }
        }
        let roots: Vec<RootIdx> = self
            .z_roots
            .iter()
            .copied()
            .filter(|&a1| {
                val(a1) == a
                    && self
                        .v_order
                        .iter()
                        .filter(|&&b| self.height(b) > self.height(a1))
                        .all(|&b| val(b) > a)
            })
            .collect();
        let heights: BTreeSet<i32> = roots.iter().map(|&b| self.height(b)).collect();
        if roots.is_empty() || heights.len() != 1 {
            return Err(Error::Internal("stratum label is not a constant-height set".into()));
        }
        Ok(StratumLabel { a, roots })
    }

    /// `z_stratify` using the height-then-lex order.
    pub fn stratify(&self, g: &Group, z: &Mat) -> Result<StratumLabel> {
        self.stratify_with(g, z, &self.v_order)
    }

    /// `induction_commutator`: `[ξ, z] = τ·ω` with `τ ∈ 𝒯^α`,
    /// `ω ∈ (V^-)^{r-1}`, for `ξ = p_α(s) ∈ (U_α)^{r-a-1}`, `α` a root of `V^-`.
    pub fn induction_commutator(
        &self,
        g: &Group,
        consts: &Rank1Constants,
        alpha: RootIdx,
        s: Elem,
        z: &Mat,
        a: u32,
    ) -> Result<(Mat, Mat)> {
        let r = g.ring();
        let rr = r.r();
        if a < 1 || a + 1 > rr {
            return Err(Error::Precondition(alloc::format!("a = {a} not in 1..=r-1")));
        }
        if self.height(alpha) >= 0 {
            return Err(Error::Precondition("α must be a root of V^-".into()));
        }
        if r.valuation(s) < rr - a - 1 {
            return Err(Error::Precondition("ξ below level r - a - 1".into()));
        }
        if g.level(z) < a {
            return Err(Error::Precondition("z not in V^a".into()));
        }
        let coeffs = self.coordinates(g, z, &self.v_order)?;
        let h_alpha = -self.height(alpha);
        for (k, &b) in self.v_order.iter().enumerate() {
            if self.height(b) > h_alpha && r.valuation(coeffs[k]) < a + 1 {
                return Err(Error::Precondition("height condition on z fails".into()));
            }
        }
        let (tau, omega) = self.induction_step(g, consts, alpha, s, &coeffs, a)?;
        let xi = g.root_element(alpha, s);
        if g.mul(&tau, &omega) != g.commutator(&xi, z) {
            return Err(Error::Internal("inductive decomposition disagrees with the commutator".into()));
        }
        Ok((tau, omega))
    }

    fn induction_step(
        &self,
        g: &Group,
        consts: &Rank1Constants,
        alpha: RootIdx,
        s: Elem,
        coeffs: &[Elem],
        a: u32,
    ) -> Result<(Mat, Mat)> {
        let dat = g.datum();
        let rr = g.ring().r();
        let nz: Vec<usize> = (0..coeffs.len()).filter(|&k| coeffs[k] != 0).collect();
        match nz.len() {
            0 => Ok((g.identity(), g.identity())),
            1 => {
                let k = nz[0];
                let beta = self.v_order[k];
                let y = coeffs[k];
                if beta == dat.neg(alpha) {
                    rank1_commutator(g, consts, alpha, s, rr - a - 1, y, a)
                } else if self.height(beta) > -self.height(alpha) {
                    Ok((g.identity(), g.identity()))
                } else {
                    let factors = chevalley_commutator(g, alpha, s, rr - a - 1, beta, y, a)?;
                    let omega = factors.iter().fold(g.identity(), |acc, &(root, v)| {
                        g.mul(&acc, &g.root_element(root, v))
                    });
                    Ok((g.identity(), omega))
                }
            }
            _ => {
                let split = nz[0];
                let mut first = alloc::vec![g.ring().zero(); coeffs.len()];
                first[split] = coeffs[split];
                let mut rest = coeffs.to_vec();
                rest[split] = g.ring().zero();
                let (t1, o1) = self.induction_step(g, consts, alpha, s, &first, a)?;
                let (t2, o2) = self.induction_step(g, consts, alpha, s, &rest, a)?;
                Ok((g.mul(&t1, &t2), g.mul(&o1, &o2)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, Preset};

    fn sl2(p: u32, r: u32, n: u32, kind: RingKind) -> Group {
        build_group(Preset::SL2, make_ring(p, r, n, kind).unwrap(), 0).unwrap()
    }

    #[test]
    fn iwahori_examples() {
        let g = sl2(2, 2, 1, RingKind::Witt);
        let rec = iwahori_decompose(&g, &g.identity()).unwrap();
        assert_eq!(rec, IwahoriRecord { u_minus: g.identity(), t: g.identity(), u: g.identity() });
        let x = g.from_ints(&[&[1, 0], &[2, 1]]).unwrap();
        let rec = iwahori_decompose(&g, &x).unwrap();
        assert_eq!(rec.u_minus, g.root_element(1, 2));
        let x = g.mul(&g.diag(&[3, 3]), &g.root_element(0, 2));
        let rec = iwahori_decompose(&g, &x).unwrap();
        assert_eq!((rec.u_minus, rec.t, rec.u), (g.identity(), g.diag(&[3, 3]), g.root_element(0, 2)));
        assert!(iwahori_decompose(&g, &g.root_element(0, 1)).is_err());
    }

    #[test]
    fn bruhat_example() {
        let g = sl2(2, 2, 1, RingKind::Witt);
        let frame = BruhatFrame::standard(&g);
        let x = g.from_ints(&[&[2, 1], &[3, 0]]).unwrap();
        assert_eq!(residue_bruhat_cell(&g, &x), 1);
        let rec = frame.decompose(&g, &x).unwrap();
        assert_eq!(rec.w, 1);
        assert_eq!(rec.u, g.root_element(0, 2));
        assert_eq!((rec.t_prime, rec.k, rec.u_prime), (g.identity(), g.identity(), g.identity()));
        let y = g.root_element(1, 2);
        let rec = frame.decompose(&g, &y).unwrap();
        assert_eq!((rec.w, rec.k), (0, y));
        assert_eq!(residue_bruhat_cell(&g, &g.root_element(0, 3)), 0);
    }

    #[test]
    fn bruhat_in_rank_two() {
        let z4 = make_ring(2, 2, 1, RingKind::Witt).unwrap();
        for preset in [Preset::SL3, Preset::Sp4] {
            let g = build_group(preset, z4.clone(), 0).unwrap();
            for v in [0, g.datum().weyl_longest()] {
                let frame = BruhatFrame::new(&g, v);
                for w in 0..g.datum().weyl().len() {
                    let x = g.mul_all(&[
                        &g.root_element(0, 1),
                        &g.weyl_rep(w),
                        &g.root_element(g.datum().neg(1), 2),
                        &g.root_element(2, 3),
                    ]);
                    let rec = frame.decompose(&g, &x).unwrap();
                    assert_eq!(frame.compose(&g, &rec), x);
                }
            }
        }
    }

    #[test]
    fn cells_partition_sl2() {
        let g = sl2(2, 2, 1, RingKind::Witt);
        for v in [0, 1] {
            let frame = BruhatFrame::new(&g, v);
            let mut all = BTreeSet::new();
            let mut total = 0;
            for w in 0..2 {
                let cell = frame.cell_elements(&g, w, Budget::default()).unwrap();
                total += cell.len();
                for x in &cell {
                    assert_eq!(frame.residue_cell(&g, x), w);
                    assert_eq!(frame.decompose(&g, x).unwrap().w, w);
                }
                all.extend(cell);
            }
            assert_eq!((total, all.len()), (48, 48));
        }
    }

    #[test]
    fn rank1_constants_and_worked_value() {
        let g = sl2(2, 2, 1, RingKind::Witt);
        let consts = Rank1Constants::solve(&g).unwrap();
        assert_eq!(consts.by_root, alloc::vec![(1, -1), (1, -1)]);
        let (tau, u) = rank1_commutator(&g, &consts, 0, 1, 0, 2, 1).unwrap();
        assert_eq!(tau, g.diag(&[3, 3]));
        assert_eq!(u, g.root_element(0, 2));
        let (tau, u) = rank1_commutator(&g, &consts, 0, 2, 1, 2, 1).unwrap();
        assert_eq!((tau, u), (g.identity(), g.identity()));
        assert!(rank1_commutator(&g, &consts, 0, 1, 0, 1, 0).is_err());
    }

    #[test]
    fn chevalley_examples() {
        let z4 = make_ring(2, 2, 1, RingKind::Witt).unwrap();
        let g = build_group(Preset::SL3, z4, 0).unwrap();
        let (a, b) = (g.datum().find_label("e1-e2").unwrap(), g.datum().find_label("e2-e3").unwrap());
        let c = g.datum().find_label("e1-e3").unwrap();
        assert_eq!(chevalley_commutator(&g, a, 2, 1, b, 1, 0).unwrap(), alloc::vec![(c, 2)]);
        assert_eq!(chevalley_commutator(&g, a, 2, 1, b, 2, 1).unwrap(), alloc::vec![(c, 0)]);
        assert!(chevalley_commutator(&g, a, 2, 1, a, 1, 0).unwrap().is_empty());
    }

    #[test]
    fn induction_example() {
        let g = sl2(2, 2, 1, RingKind::Witt);
        let consts = Rank1Constants::solve(&g).unwrap();
        let frame = StratFrame::new(&g, 0, 0);
        let (tau, omega) = frame.induction_commutator(&g, &consts, 1, 1, &g.root_element(0, 2), 1).unwrap();
        assert_eq!(tau, g.diag(&[3, 3]));
        assert_eq!(omega, g.root_element(1, 2));
        assert_eq!(g.mul(&tau, &omega), g.from_ints(&[&[3, 0], &[2, 3]]).unwrap());
        let id = g.identity();
        assert_eq!(frame.induction_commutator(&g, &consts, 1, 1, &id, 1).unwrap(), (id, id));
        assert_eq!(frame.induction_commutator(&g, &consts, 1, 0, &g.root_element(0, 2), 1).unwrap(), (id, id));
    }

    #[test]
    fn stratify_examples() {
        let z4 = make_ring(2, 2, 1, RingKind::Witt).unwrap();
        let g = build_group(Preset::SL3, z4, 0).unwrap();
        let frame = StratFrame::new(&g, 0, 0);
        let d = g.datum();
        let (a, b, c) = (d.find_label("e1-e2").unwrap(), d.find_label("e2-e3").unwrap(), d.find_label("e1-e3").unwrap());
        let lab = frame.stratify(&g, &g.root_element(a, 2)).unwrap();
        assert_eq!(lab, StratumLabel { a: 1, roots: alloc::vec![a] });
        let lab = frame.stratify(&g, &g.root_element(c, 2)).unwrap();
        assert_eq!(lab, StratumLabel { a: 1, roots: alloc::vec![c] });
        let z = g.mul(&g.root_element(a, 2), &g.root_element(b, 2));
        let lab = frame.stratify(&g, &z).unwrap();
        assert_eq!(lab, StratumLabel { a: 1, roots: alloc::vec![a, b] });
        assert!(frame.stratify(&g, &g.identity()).is_err());
    }
}
