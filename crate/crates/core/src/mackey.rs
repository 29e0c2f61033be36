//! Mackey functors for C_{p^n}: one abelian group per subgroup level with
//! adjacent restrictions, transfers and the action of the generator γ.

use crate::abgroup::{AbGroup, AbHom, Elem};
use crate::error::{Error, Result};
use crate::group::{GroupCtx, Level};
use crate::matrix::{Int, IntMatrix};
use num_traits::One;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub struct MackeyFunctor {
    pub ctx: GroupCtx,
    pub levels: Vec<AbGroup>,
    /// `res[h]`: level h+1 → level h
    pub res: Vec<IntMatrix>,
    /// `tr[h]`: level h → level h+1
    pub tr: Vec<IntMatrix>,
    /// `weyl[h]`: γ acting on level h
    pub weyl: Vec<IntMatrix>,
    /// Action of the generator of a larger ambient group, kept after restriction.
    pub ambient: Option<Vec<IntMatrix>>,
}

/// Outcome of an axiom check; an empty failure list means pass.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub failures: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    pub fn merge(&mut self, other: Report) {
        self.failures.extend(other.failures);
    }

    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(Error::Consistency(self.failures.join("; ")))
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "pass")
        } else {
            write!(f, "fail")?;
            for m in &self.failures {
                write!(f, "\n  {m}")?;
            }
            Ok(())
        }
    }
}

/// First generator on which two maps into `target` differ.
fn differ(a: &IntMatrix, b: &IntMatrix, target: &AbGroup) -> Option<usize> {
    (0..a.cols()).find(|&j| !target.elem_eq(&a.col(j), &b.col(j)))
}

impl MackeyFunctor {
    pub fn new(
        ctx: GroupCtx,
        levels: Vec<AbGroup>,
        res: Vec<IntMatrix>,
        tr: Vec<IntMatrix>,
        weyl: Vec<IntMatrix>,
    ) -> Result<Self> {
        let n = ctx.n() as usize;
        if levels.len() != n + 1 || weyl.len() != n + 1 || res.len() != n || tr.len() != n {
            return Err(Error::Shape(format!("a functor over {ctx} needs {} levels", n + 1)));
        }
        for h in 0..=n {
            let g = levels[h].gens();
            if weyl[h].rows() != g || weyl[h].cols() != g {
                return Err(Error::Shape(format!("weyl action at level {h} has the wrong shape")));
            }
        }
        for h in 0..n {
            let (lo, hi) = (levels[h].gens(), levels[h + 1].gens());
            if res[h].rows() != lo || res[h].cols() != hi {
                return Err(Error::Shape(format!("restriction from level {} has the wrong shape", h + 1)));
            }
            if tr[h].rows() != hi || tr[h].cols() != lo {
                return Err(Error::Shape(format!("transfer from level {h} has the wrong shape")));
            }
        }
        Ok(MackeyFunctor { ctx, levels, res, tr, weyl, ambient: None })
    }

    pub fn n(&self) -> usize {
        self.ctx.n() as usize
    }

    pub fn level(&self, h: usize) -> &AbGroup {
        &self.levels[h]
    }

    pub fn res_hom(&self, h: usize) -> AbHom {
        AbHom::unchecked(&self.levels[h + 1], &self.levels[h], self.res[h].clone())
    }

    pub fn tr_hom(&self, h: usize) -> AbHom {
        AbHom::unchecked(&self.levels[h], &self.levels[h + 1], self.tr[h].clone())
    }

    pub fn weyl_hom(&self, h: usize) -> AbHom {
        AbHom::unchecked(&self.levels[h], &self.levels[h], self.weyl[h].clone())
    }

    /// Restriction from level `k` down to level `h`, composed from adjacent steps.
    pub fn res_matrix(&self, k: usize, h: usize) -> IntMatrix {
        assert!(h <= k);
        let mut m = IntMatrix::identity(self.levels[k].gens());
        for j in (h..k).rev() {
            m = self.res[j].mul(&m);
        }
        m
    }

    pub fn tr_matrix(&self, h: usize, k: usize) -> IntMatrix {
        assert!(h <= k);
        let mut m = IntMatrix::identity(self.levels[h].gens());
        for j in h..k {
            m = self.tr[j].mul(&m);
        }
        m
    }

    pub fn res(&self, k: usize, h: usize, x: &[Int]) -> Elem {
        self.levels[h].reduce(&self.res_matrix(k, h).mul_vec(x))
    }

    pub fn tr(&self, h: usize, k: usize, x: &[Int]) -> Elem {
        self.levels[k].reduce(&self.tr_matrix(h, k).mul_vec(x))
    }

    /// γ^e acting on level `h`.
    pub fn weyl_pow(&self, h: usize, e: usize) -> IntMatrix {
        self.weyl[h].pow(e % self.ctx.index(Level(h)).max(1))
    }

    pub fn act(&self, h: usize, e: usize, x: &[Int]) -> Elem {
        self.levels[h].reduce(&self.weyl_pow(h, e).mul_vec(x))
    }

    /// Σ_{s} w^{s·step} over `count` terms at level `h`.
    pub fn weyl_trace(&self, h: usize, step: usize, count: usize) -> IntMatrix {
        let g = self.levels[h].gens();
        let w = self.weyl[h].pow(step);
        let mut acc = IntMatrix::zeros(g, g);
        let mut cur = IntMatrix::identity(g);
        for _ in 0..count {
            acc = acc.add(&cur);
            cur = w.mul(&cur);
        }
        acc
    }

    /// Forget to the subgroup at level `h`.
    pub fn restrict(&self, h: usize, remember_action: bool) -> Result<MackeyFunctor> {
        self.ctx.check(Level(h))?;
        let ctx = self.ctx.subgroup_ctx(Level(h))?;
        let idx = self.ctx.index(Level(h));
        let weyl = (0..=h).map(|j| self.weyl[j].pow(idx)).collect();
        let mut m = MackeyFunctor::new(
            ctx,
            self.levels[..=h].to_vec(),
            self.res[..h].to_vec(),
            self.tr[..h].to_vec(),
            weyl,
        )?;
        if remember_action {
            let amb = self.ambient.clone().unwrap_or_else(|| self.weyl.clone());
            m.ambient = Some(amb[..=h].to_vec());
        }
        Ok(m)
    }

    /// Levelwise diagonal presentations, with the comparison isomorphisms.
    pub fn simplified(&self) -> (MackeyFunctor, MackeyMorphism, MackeyMorphism) {
        let simp: Vec<_> = self.levels.iter().map(|g| g.simplify()).collect();
        let conj = |m: &IntMatrix, from: usize, to: usize| simp[to].proj.mul(m).mul(&simp[from].lift);
        let n = self.n();
        let out = MackeyFunctor {
            ctx: self.ctx,
            levels: simp.iter().map(|s| s.group.clone()).collect(),
            res: (0..n).map(|h| conj(&self.res[h], h + 1, h)).collect(),
            tr: (0..n).map(|h| conj(&self.tr[h], h, h + 1)).collect(),
            weyl: (0..=n).map(|h| conj(&self.weyl[h], h, h)).collect(),
            ambient: self.ambient.as_ref().map(|a| (0..a.len()).map(|h| conj(&a[h], h, h)).collect()),
        };
        let to = MackeyMorphism { maps: simp.iter().map(|s| s.proj.clone()).collect() };
        let from = MackeyMorphism { maps: simp.iter().map(|s| s.lift.clone()).collect() };
        (out, to, from)
    }

    /// True when every level is in diagonal form.
    pub fn is_diagonal(&self) -> bool {
        self.levels.iter().all(|g| g.diagonal().is_some())
    }
}

/// Check the Mackey functor axioms on generators.
pub fn verify_mackey(m: &MackeyFunctor) -> Report {
    let mut rep = Report::default();
    let n = m.n();
    let ctx = m.ctx;
    for h in 0..=n {
        let g = &m.levels[h];
        if let Err(e) = AbHom::new(g, g, m.weyl[h].clone()) {
            rep.fail(format!("weyl action at level {h} ill-defined: {e}"));
            continue;
        }
        if !m.weyl_hom(h).is_bijective() {
            rep.fail(format!("weyl action at level {h} is not an automorphism"));
        }
        let order = ctx.index(Level(h));
        if let Some(j) = differ(&m.weyl[h].pow(order), &IntMatrix::identity(g.gens()), g) {
            rep.fail(format!("weyl action at level {h} does not have order dividing {order} (generator {j})"));
        }
    }
    for h in 0..n {
        let (lo, hi) = (&m.levels[h], &m.levels[h + 1]);
        let res_ok = AbHom::new(hi, lo, m.res[h].clone());
        let tr_ok = AbHom::new(lo, hi, m.tr[h].clone());
        if let Err(e) = &res_ok {
            rep.fail(format!("restriction to level {h} ill-defined: {e}"));
        }
        if let Err(e) = &tr_ok {
            rep.fail(format!("transfer from level {h} ill-defined: {e}"));
        }
        if res_ok.is_err() || tr_ok.is_err() {
            continue;
        }
        let (r, t) = (&m.res[h], &m.tr[h]);
        let (wl, wh) = (&m.weyl[h], &m.weyl[h + 1]);
        if let Some(j) = differ(&r.mul(wh), &wl.mul(r), lo) {
            rep.fail(format!("restriction to level {h} is not equivariant (generator {j})"));
        }
        if let Some(j) = differ(&t.mul(wl), &wh.mul(t), hi) {
            rep.fail(format!("transfer from level {h} is not equivariant (generator {j})"));
        }
        let step = ctx.index(Level(h + 1));
        let trace = m.weyl_trace(h, step, ctx.p() as usize);
        if let Some(j) = differ(&r.mul(t), &trace, lo) {
            rep.fail(format!("double coset formula fails at level {h} (generator {j})"));
        }
        let sub = wl.pow(step);
        if let Some(j) = differ(&t.mul(&sub), t, hi) {
            rep.fail(format!("transfer from level {h} is not invariant under W_{}({h}) (generator {j})", h + 1));
        }
        if let Some(j) = differ(&sub.mul(r), r, lo) {
            rep.fail(format!("restriction to level {h} is not fixed by W_{}({h}) (generator {j})", h + 1));
        }
    }
    rep
}

/// Levelwise homomorphisms between two Mackey functors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MackeyMorphism {
    pub maps: Vec<IntMatrix>,
}

impl MackeyMorphism {
    pub fn identity(m: &MackeyFunctor) -> Self {
        MackeyMorphism { maps: m.levels.iter().map(|g| IntMatrix::identity(g.gens())).collect() }
    }

    /// `self ∘ first`
    pub fn compose(&self, first: &MackeyMorphism) -> Self {
        MackeyMorphism { maps: self.maps.iter().zip(&first.maps).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn apply(&self, target: &MackeyFunctor, h: usize, x: &[Int]) -> Elem {
        target.levels[h].reduce(&self.maps[h].mul_vec(x))
    }
}

/// Check that `phi` is a well-defined morphism `src → tgt`.
pub fn verify_morphism(src: &MackeyFunctor, tgt: &MackeyFunctor, phi: &MackeyMorphism) -> Report {
    let mut rep = Report::default();
    if src.ctx != tgt.ctx || phi.maps.len() != src.levels.len() {
        rep.fail("morphism shape does not match its functors");
        return rep;
    }
    for h in 0..=src.n() {
        if let Err(e) = AbHom::new(&src.levels[h], &tgt.levels[h], phi.maps[h].clone()) {
            rep.fail(format!("level {h} map ill-defined: {e}"));
            return rep;
        }
        if let Some(j) = differ(&phi.maps[h].mul(&src.weyl[h]), &tgt.weyl[h].mul(&phi.maps[h]), &tgt.levels[h]) {
            rep.fail(format!("level {h} map does not commute with the weyl action (generator {j})"));
        }
    }
    for h in 0..src.n() {
        if let Some(j) = differ(&phi.maps[h].mul(&src.res[h]), &tgt.res[h].mul(&phi.maps[h + 1]), &tgt.levels[h]) {
            rep.fail(format!("map does not commute with restriction to level {h} (generator {j})"));
        }
        if let Some(j) = differ(&phi.maps[h + 1].mul(&src.tr[h]), &tgt.tr[h].mul(&phi.maps[h]), &tgt.levels[h + 1]) {
            rep.fail(format!("map does not commute with transfer from level {h} (generator {j})"));
        }
    }
    rep
}

/// A morphism that is levelwise bijective (checked after verification).
pub fn is_isomorphism(src: &MackeyFunctor, tgt: &MackeyFunctor, phi: &MackeyMorphism) -> bool {
    verify_morphism(src, tgt, phi).passed()
        && (0..=src.n())
            .all(|h| AbHom::unchecked(&src.levels[h], &tgt.levels[h], phi.maps[h].clone()).is_bijective())
}

/// The Burnside Mackey functor: level h is free on the orbits C_{p^h}/C_{p^i}.
pub fn burnside(ctx: GroupCtx) -> MackeyFunctor {
    let n = ctx.n() as usize;
    let p = Int::from(ctx.p());
    let levels = (0..=n).map(|h| AbGroup::free(h + 1)).collect();
    let mut res = Vec::new();
    let mut tr = Vec::new();
    for h in 0..n {
        let mut r = IntMatrix::zeros(h + 1, h + 2);
        let mut t = IntMatrix::zeros(h + 2, h + 1);
        for i in 0..=h {
            r[(i, i)] = p.clone();
            t[(i, i)] = Int::one();
        }
        r[(h, h + 1)] = Int::one();
        res.push(r);
        tr.push(t);
    }
    let weyl = (0..=n).map(|h| IntMatrix::identity(h + 1)).collect();
    MackeyFunctor::new(ctx, levels, res, tr, weyl).unwrap()
}

/// Constant functor with restriction the identity and transfer multiplication by p.
pub fn fixed_point_functor(ctx: GroupCtx, a: &AbGroup) -> MackeyFunctor {
    let n = ctx.n() as usize;
    let g = a.gens();
    let p = Int::from(ctx.p());
    MackeyFunctor::new(
        ctx,
        vec![a.clone(); n + 1],
        vec![IntMatrix::identity(g); n],
        vec![IntMatrix::scalar(g, &p); n],
        vec![IntMatrix::identity(g); n + 1],
    )
    .unwrap()
}

/// An abelian group as a Mackey functor for the trivial group.
pub fn from_abelian_group(p: u64, a: &AbGroup) -> Result<MackeyFunctor> {
    let ctx = GroupCtx::trivial(p)?;
    MackeyFunctor::new(ctx, vec![a.clone()], vec![], vec![], vec![IntMatrix::identity(a.gens())])
}
