//! Finite point sets of `Σ`, `Σ_w`, `S_{T,U}`, the parametrizations from
//! the counting argument, and the right-hand side of the inner product
//! formula.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::abelian::Character;
use crate::decomp::{BruhatFrame, StratFrame};
use crate::error::{Budget, Error, Result};
use crate::group::{Group, Mat};
use crate::ring::extend;
use crate::torus::{intertwines, transport_character, weyl_transporter, FixedGroup, RegularityTable, Torus};

/// A point `(x, x', y)` with `x F(y) = y x'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SigmaPoint {
    pub x: Mat,
    pub x_prime: Mat,
    pub y: Mat,
}

/// Level-`n` points of the varieties attached to `(T, U)` and `(T', U')`,
/// where `U = upper unitriangular`, `U' = n_{v'} U n_{v'}^{-1}`, and `G`
/// carries the Frobenius `F = Ad(ŵ_T) ∘ F_G` of the torus `T`.
#[derive(Debug, Clone)]
pub struct VarietyFrame {
    level: u32,
    group: Group,
    m: Mat,
    m_inv: Mat,
    bruhat: BruhatFrame,
    f_u: BTreeSet<Mat>,
    f_u_prime: BTreeSet<Mat>,
    t_f: Vec<Mat>,
    elements: Vec<Mat>,
    cells: BTreeMap<Mat, usize>,
}

impl VarietyFrame {
    /// Both tori must carry the same Frobenius, since `Σ` lives in one
    /// rational structure on `G`.
    pub fn new(t: &Torus, t_prime: &Torus, v_prime: usize, level: u32, budget: Budget) -> Result<VarietyFrame> {
        if t.sigma() != t_prime.sigma() {
            return Err(Error::Precondition("T and T' must share the Frobenius of G".into()));
        }
        if level == 0 {
            return Err(Error::InvalidArgument("level must be positive".into()));
        }
        let (ring, _) = extend(t.group().ring(), level)?;
        let group = t.group().over(ring);
        let m = group.mul(&group.weyl_rep(t.twist()), group.twist_rep());
        let m_inv = group.inv(&m);
        let bruhat = BruhatFrame::new(&group, v_prime);
        let mut frame = VarietyFrame {
            level,
            group,
            m,
            m_inv,
            bruhat,
            f_u: BTreeSet::new(),
            f_u_prime: BTreeSet::new(),
            t_f: Vec::new(),
            elements: Vec::new(),
            cells: BTreeMap::new(),
        };
        let g = &frame.group;
        let dat = g.datum();
        let pos: Vec<_> = dat.positive().collect();
        let vp = &dat.weyl()[v_prime].perm;
        let pos_prime: Vec<_> = pos.iter().map(|&a| vp[a]).collect();
        let u = g.root_product_elements(&pos, 0, budget)?;
        let u_prime = g.root_product_elements(&pos_prime, 0, budget)?;
        frame.f_u = u.iter().map(|x| frame.frob(x)).collect();
        frame.f_u_prime = u_prime.iter().map(|x| frame.frob(x)).collect();
        frame.t_f = g.torus_elements(0, budget)?.into_iter().filter(|x| frame.frob(x) == *x).collect();
        for w in 0..dat.weyl().len() {
            for x in frame.bruhat.cell_elements(g, w, budget)? {
                if frame.cells.insert(x, w).is_some() {
                    return Err(Error::Internal("Bruhat cells overlap".into()));
                }
            }
        }
        frame.elements = frame.cells.keys().copied().collect();
        Ok(frame)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn bruhat(&self) -> &BruhatFrame {
        &self.bruhat
    }

    /// `F(g) = M F_std(g) M^{-1}`.
    pub fn frob(&self, x: &Mat) -> Mat {
        let g = &self.group;
        g.mul_all(&[&self.m, &g.frob_std(x, 1), &self.m_inv])
    }

    /// `G(R_n)`, enumerated cell by cell.
    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    /// `F(U)` as the image of `U`.
    pub fn f_u(&self) -> &BTreeSet<Mat> {
        &self.f_u
    }

    pub fn f_u_prime(&self) -> &BTreeSet<Mat> {
        &self.f_u_prime
    }

    /// `T^F ∩ T(R_n)`, the acting torus points at this level.
    pub fn torus_fixed(&self) -> &[Mat] {
        &self.t_f
    }

    /// `G^F ∩ G(R_n)`.
    pub fn fixed_elements(&self) -> Vec<Mat> {
        self.elements.iter().copied().filter(|x| self.frob(x) == *x).collect()
    }

    /// `sigma_points`.
    pub fn sigma_points(&self, budget: Budget) -> Result<Vec<SigmaPoint>> {
        let g = &self.group;
        budget.check((self.f_u.len() * self.elements.len()) as u64)?;
        let mut out = Vec::new();
        for y in &self.elements {
            let yi = g.inv(y);
            let fy = self.frob(y);
            for x in &self.f_u {
                let xp = g.mul_all(&[&yi, x, &fy]);
                if self.f_u_prime.contains(&xp) {
                    out.push(SigmaPoint { x: *x, x_prime: xp, y: *y });
                }
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn cell_of(&self, y: &Mat) -> usize {
        self.bruhat.residue_cell(&self.group, y)
    }

    /// `sigma_w_points`: the points whose `y` lies in the residue cell of `w`.
    pub fn sigma_w_points(&self, points: &[SigmaPoint], w: usize) -> Vec<SigmaPoint> {
        points.iter().copied().filter(|p| self.cell_of(&p.y) == w).collect()
    }

    pub fn is_sigma_point(&self, p: &SigmaPoint) -> bool {
        let g = &self.group;
        self.f_u.contains(&p.x)
            && self.f_u_prime.contains(&p.x_prime)
            && g.mul(&p.x, &self.frob(&p.y)) == g.mul(&p.y, &p.x_prime)
    }

    /// `(t, t')·(x, x', y) = (t x t^{-1}, t' x' t'^{-1}, t y t'^{-1})`.
    pub fn act(&self, t: &Mat, tp: &Mat, p: &SigmaPoint) -> SigmaPoint {
        let g = &self.group;
        let ti = g.inv(t);
        let tpi = g.inv(tp);
        SigmaPoint {
            x: g.mul_all(&[t, &p.x, &ti]),
            x_prime: g.mul_all(&[tp, &p.x_prime, &tpi]),
            y: g.mul_all(&[t, &p.y, &tpi]),
        }
    }

    /// Whether a point set is closed under the `T^F × T'^F` action.
    pub fn is_action_closed(&self, points: &[SigmaPoint]) -> bool {
        let set: BTreeSet<_> = points.iter().collect();
        points.iter().all(|p| {
            self.t_f.iter().all(|t| self.t_f.iter().all(|tp| set.contains(&self.act(t, tp, p))))
        })
    }

    /// `s_tu_points` for `U` (or `U'` when `prime`).
    pub fn s_points(&self, prime: bool) -> Vec<Mat> {
        let g = &self.group;
        let target = if prime { &self.f_u_prime } else { &self.f_u };
        self.elements
            .iter()
            .copied()
            .filter(|x| target.contains(&g.mul(&g.inv(x), &self.frob(x))))
            .collect()
    }

    /// Closure of `S` under `g ↦ g_1 g t^{-1}` for `g_1 ∈ G^F`, `t ∈ T^F`.
    pub fn is_s_action_closed(&self, s: &[Mat], g_f: &[Mat]) -> bool {
        let g = &self.group;
        let set: BTreeSet<_> = s.iter().collect();
        s.iter().all(|x| {
            g_f.iter().all(|g1| self.t_f.iter().all(|t| set.contains(&g.mul_all(&[g1, x, &g.inv(t)]))))
        })
    }

    /// The map `(g, g') ↦ (g^{-1}F(g), g'^{-1}F(g'), g^{-1}g')` on `S × S'`.
    pub fn quotient_fibers(&self, budget: Budget) -> Result<QuotientReport> {
        let g = &self.group;
        let s = self.s_points(false);
        let sp = self.s_points(true);
        budget.check((s.len() * sp.len()) as u64)?;
        let sigma: BTreeSet<SigmaPoint> = self.sigma_points(budget)?.into_iter().collect();
        let mut fibers: BTreeMap<SigmaPoint, usize> = BTreeMap::new();
        for a in &s {
            let ai = g.inv(a);
            let x = g.mul(&ai, &self.frob(a));
            for b in &sp {
                let p = SigmaPoint { x, x_prime: g.mul(&g.inv(b), &self.frob(b)), y: g.mul(&ai, b) };
                if !sigma.contains(&p) {
                    return Err(Error::Internal("quotient map leaves Σ".into()));
                }
                *fibers.entry(p).or_default() += 1;
            }
        }
        Ok(QuotientReport {
            sigma_size: sigma.len(),
            image_size: fibers.len(),
            fiber_sizes: fibers.values().copied().collect(),
            fixed_group_order: self.fixed_elements().len(),
        })
    }

    /// `sigma_tilde_check`: the map `(x, x', u, u', k, ν) ↦ (x, x', uνku')`
    /// from the solutions with `ν ∈ ŵT'` is a bijection onto `Σ_w`, and it
    /// intertwines the action (a) with the action on `Σ`.
    pub fn sigma_tilde_check(&self, w: usize, lift: &Mat, sigma: &[SigmaPoint], budget: Budget) -> Result<TildeReport> {
        let g = &self.group;
        let roots = self.bruhat.cell_roots(g, w);
        let us: BTreeSet<Mat> = g.root_product_elements(&roots.u, 0, budget)?.into_iter().collect();
        let ks: BTreeSet<Mat> = g.root_product_elements(&roots.k, 1, budget)?.into_iter().collect();
        let ups: BTreeSet<Mat> = g.root_product_elements(&roots.u_prime, 0, budget)?.into_iter().collect();
        let ts = g.torus_elements(0, budget)?;
        let nus: BTreeSet<Mat> = ts.iter().map(|t| g.mul(lift, t)).collect();
        budget.check((us.len() * nus.len() * ks.len() * ups.len() * self.f_u.len()) as u64)?;
        let mut tilde: Vec<([Mat; 4], SigmaPoint)> = Vec::new();
        for u in &us {
            for nu in &nus {
                for k in &ks {
                    for up in &ups {
                        let y = g.mul_all(&[u, nu, k, up]);
                        let yi = g.inv(&y);
                        let fy = g.mul_all(&[&self.frob(u), &self.frob(nu), &self.frob(k), &self.frob(up)]);
                        for x in &self.f_u {
                            let xp = g.mul_all(&[&yi, x, &fy]);
                            if self.f_u_prime.contains(&xp) {
                                tilde.push(([*u, *nu, *k, *up], SigmaPoint { x: *x, x_prime: xp, y }));
                            }
                        }
                    }
                }
            }
        }
        let image: BTreeSet<SigmaPoint> = tilde.iter().map(|(_, p)| *p).collect();
        let target: BTreeSet<SigmaPoint> = self.sigma_w_points(sigma, w).into_iter().collect();
        let bijective = image.len() == tilde.len() && image == target;
        let mut equivariant = true;
        for (f, p) in &tilde {
            for t in &self.t_f {
                let ti = g.inv(t);
                for tp in &self.t_f {
                    let tpi = g.inv(tp);
                    let nf = [
                        g.mul_all(&[t, &f[0], &ti]),
                        g.mul_all(&[t, &f[1], &tpi]),
                        g.mul_all(&[tp, &f[2], &tpi]),
                        g.mul_all(&[tp, &f[3], &tpi]),
                    ];
                    let q = self.act(t, tp, p);
                    let in_sets = us.contains(&nf[0]) && nus.contains(&nf[1]) && ks.contains(&nf[2]) && ups.contains(&nf[3]);
                    if !in_sets || g.mul_all(&[&nf[0], &nf[1], &nf[2], &nf[3]]) != q.y || !self.is_sigma_point(&q) {
                        equivariant = false;
                    }
                }
            }
        }
        Ok(TildeReport { tilde_size: tilde.len(), sigma_w_size: target.len(), bijective, equivariant })
    }

    /// Sizes of the nonempty fibres of `(u, z, τ', u') ↦ u z ŵ τ' u'` over
    /// the points of `Σ_w`; `z` runs over `Z^1 = (U^-)^1 ∩ ŵ(U'^-)^1ŵ^{-1}`.
    pub fn hat_fibers(&self, w: usize, lift: &Mat, sigma: &[SigmaPoint], budget: Budget) -> Result<BTreeSet<usize>> {
        let g = &self.group;
        let dat = g.datum();
        let v = dat.weyl_mul(dat.weyl_mul(w, self.bruhat.v_prime()), dat.weyl_longest());
        let strat = StratFrame::new(g, dat.weyl_longest(), v);
        let zs = g.root_product_elements(strat.z_roots(), 1, budget)?;
        let pos: Vec<_> = dat.positive().collect();
        let vp = &dat.weyl()[self.bruhat.v_prime()].perm;
        let pos_prime: Vec<_> = pos.iter().map(|&a| vp[a]).collect();
        let us = g.root_product_elements(&pos, 0, budget)?;
        let ups = g.root_product_elements(&pos_prime, 0, budget)?;
        let ts = g.torus_elements(0, budget)?;
        budget.check((us.len() * zs.len() * ts.len() * ups.len()) as u64)?;
        let mut mult: BTreeMap<Mat, usize> = BTreeMap::new();
        for u in &us {
            for z in &zs {
                let uzw = g.mul_all(&[u, z, lift]);
                for t in &ts {
                    let a = g.mul(&uzw, t);
                    for up in &ups {
                        *mult.entry(g.mul(&a, up)).or_default() += 1;
                    }
                }
            }
        }
        let mut sizes = BTreeSet::new();
        for p in self.sigma_w_points(sigma, w) {
            let m = mult.get(&p.y).copied().unwrap_or(0);
            sizes.insert(m);
        }
        Ok(sizes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientReport {
    pub sigma_size: usize,
    pub image_size: usize,
    pub fiber_sizes: BTreeSet<usize>,
    pub fixed_group_order: usize,
}

impl QuotientReport {
    /// Every fibre over the image has exactly `|G^F|` points.
    pub fn fibers_are_orbits(&self) -> bool {
        self.fiber_sizes.len() == 1 && self.fiber_sizes.contains(&self.fixed_group_order)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TildeReport {
    pub tilde_size: usize,
    pub sigma_w_size: usize,
    pub bijective: bool,
    pub equivariant: bool,
}

/// `hat_sigma_fixed_count` with the closed form it is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HatCount {
    pub count: usize,
    pub closed_form: usize,
}

/// `#{τ' ∈ T' : F(ŵτ') = ŵτ'}`, searched in `T(R_L)` for `L = 2·period`,
/// beside `|T'^F|·[F(w) = w]`.
pub fn hat_sigma_fixed_count(t: &Torus, t_prime: &Torus, tf_prime: &FixedGroup, w: usize, lift: &Mat, budget: Budget) -> Result<HatCount> {
    if t.sigma() != t_prime.sigma() {
        return Err(Error::Precondition("T and T' must share the Frobenius of G".into()));
    }
    let level = 2 * t.period();
    let amb = t.ambient(level)?;
    let g = &amb.group;
    let m = g.mul(&g.weyl_rep(t.twist()), g.twist_rep());
    let mi = g.inv(&m);
    let wl = amb.embed(lift);
    let mut count = 0;
    for tau in g.torus_elements(0, budget)? {
        let x = g.mul(&wl, &tau);
        if g.mul_all(&[&m, &g.frob_std(&x, 1), &mi]) == x {
            count += 1;
        }
    }
    let fixed = intertwines(t, t_prime, w, 1);
    Ok(HatCount { count, closed_form: if fixed { tf_prime.order() } else { 0 } })
}

/// The inner product count with its witnesses `(w, ŵ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerProductReport {
    pub count: usize,
    pub witnesses: Vec<(usize, Mat)>,
}

/// One side of the inner product: a torus, its `T^F`, a character and the
/// regularity data of that torus.
pub struct TorusCharacter<'a> {
    pub torus: &'a Torus,
    pub fixed: &'a FixedGroup,
    pub theta: &'a Character,
    pub regularity: &'a RegularityTable,
}

/// `inner_product_rhs`: `#{w ∈ W(T_1, T'_1)^F : Ad(ŵ) carries θ to θ'}`,
/// that is `θ = θ'(ŵ^{-1} · ŵ)` on `T^F`.
pub fn inner_product_rhs(a: &TorusCharacter, b: &TorusCharacter, override_regularity: bool) -> Result<InnerProductReport> {
    if a.torus.group().ring().r() >= 2 && !override_regularity {
        let ra = a.regularity.is_regular(a.fixed, a.theta)?.regular;
        let rb = b.regularity.is_regular(b.fixed, b.theta)?.regular;
        if !ra && !rb {
            return Err(Error::Precondition("one of θ, θ' must be regular when r ≥ 2".into()));
        }
    }
    let mut witnesses = Vec::new();
    for class in weyl_transporter(a.torus, b.torus)? {
        if transport_character(a.fixed, b.fixed, &class.lift, b.theta)? == *a.theta {
            witnesses.push((class.w, class.lift));
        }
    }
    Ok(InnerProductReport { count: witnesses.len(), witnesses })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    NotApplicable,
}

/// `irreducibility_predicate`: irreducible iff only `w = 1` fixes `θ`.
pub fn irreducibility_predicate(a: &TorusCharacter) -> Result<Irreducibility> {
    if !a.regularity.is_regular(a.fixed, a.theta)?.regular {
        return Err(Error::Precondition("θ is not regular".into()));
    }
    let rep = inner_product_rhs(a, a, false)?;
    Ok(if rep.count == 1 { Irreducibility::Irreducible } else { Irreducibility::NotApplicable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, Preset};
    use crate::ring::{make_ring, RingKind};
    use crate::torus::make_torus;

    fn setup() -> (Group, Torus) {
        let g = build_group(Preset::SL2, make_ring(2, 2, 1, RingKind::Witt).unwrap(), 0).unwrap();
        let t = make_torus(&g, 0).unwrap();
        (g, t)
    }

    #[test]
    fn sigma_level_one() {
        let (g, t) = setup();
        let b = Budget::default();
        let vf = VarietyFrame::new(&t, &t, 0, 1, b).unwrap();
        assert_eq!(vf.elements().len(), 48);
        let sigma = vf.sigma_points(b).unwrap();
        let id = g.identity();
        assert!(sigma.contains(&SigmaPoint { x: id, x_prime: id, y: id }));
        for y in vf.fixed_elements() {
            assert!(sigma.contains(&SigmaPoint { x: id, x_prime: id, y }));
        }
        let parts: usize = (0..2).map(|w| vf.sigma_w_points(&sigma, w).len()).sum();
        assert_eq!(parts, sigma.len());
        assert!(vf.is_action_closed(&sigma));
        let q = vf.quotient_fibers(b).unwrap();
        assert!(q.fibers_are_orbits());
        for w in 0..2 {
            let rep = vf.sigma_tilde_check(w, &g.weyl_rep(w), &sigma, b).unwrap();
            assert!(rep.bijective && rep.equivariant, "{rep:?}");
            assert_eq!(vf.hat_fibers(w, &g.weyl_rep(w), &sigma, b).unwrap().len(), 1);
        }
    }

    #[test]
    fn inner_products_split_sl2() {
        let (g, t) = setup();
        let b = Budget::default();
        let tf = t.fixed_group(1, b).unwrap();
        let reg = RegularityTable::new(&t, &tf, 2, b).unwrap();
        let theta = tf.structure.character(1);
        let triv = tf.structure.character(0);
        let side = TorusCharacter { torus: &t, fixed: &tf, theta: &theta, regularity: &reg };
        let rep = inner_product_rhs(&side, &side, false).unwrap();
        assert_eq!(rep.count, 2);
        assert_eq!(rep.witnesses.iter().map(|w| w.0).collect::<Vec<_>>(), [0, 1]);
        let trivial = TorusCharacter { torus: &t, fixed: &tf, theta: &triv, regularity: &reg };
        assert_eq!(inner_product_rhs(&side, &trivial, true).unwrap().count, 0);
        assert!(inner_product_rhs(&trivial, &trivial, false).is_err());
        assert_eq!(irreducibility_predicate(&side).unwrap(), Irreducibility::NotApplicable);
        let ns = make_torus(&g, 1).unwrap();
        let nf = ns.fixed_group(1, b).unwrap();
        let nreg = RegularityTable::new(&ns, &nf, 2, b).unwrap();
        let nth = nf.structure.character(3);
        let other = TorusCharacter { torus: &ns, fixed: &nf, theta: &nth, regularity: &nreg };
        assert_eq!(inner_product_rhs(&side, &other, true).unwrap().count, 0);
        let h = hat_sigma_fixed_count(&t, &t, &tf, 1, &g.weyl_rep(1), b).unwrap();
        assert_eq!((h.count, h.closed_form), (2, 2));
    }
}
