//! Comparisons between norms: strategy equivalence, functoriality,
//! composability and monoidality.

use super::{norm, Norm, NormOptions, Strategy};
use crate::abgroup::Elem;
use crate::boxprod::MultiBox;
use crate::error::{Error, Result};
use crate::group::{GroupCtx, Level};
use crate::iso::find_isomorphism;
use crate::mackey::{is_isomorphism, verify_morphism, MackeyFunctor, MackeyMorphism};
use crate::matrix::{vec_add, vec_sub, zero_vec, Int, IntMatrix};
use num_traits::Zero;

/// Build level maps out of `src` by giving images of raw tuple generators;
/// transfer generators go to the transfer of the previous level's image.
fn extend_on_generators(
    src: &Norm,
    tgt: &MackeyFunctor,
    image: &dyn Fn(usize, &[Elem]) -> Result<Elem>,
) -> Result<MackeyMorphism> {
    let mut maps: Vec<IntMatrix> = Vec::new();
    for j in 0..src.functor.levels.len() {
        let tuples = src.raw_tuples(j);
        let lift = src.raw_lift(j);
        let width = lift.rows();
        let mut raw = IntMatrix::zeros(tgt.levels[j].gens(), width);
        for (g, t) in tuples.iter().enumerate() {
            raw.set_col(g, &image(j, t)?);
        }
        if j > 0 {
            let below = tgt.tr[j - 1].mul(&maps[j - 1]);
            for x in 0..width - tuples.len() {
                raw.set_col(tuples.len() + x, &below.col(x));
            }
        }
        maps.push(raw.mul(lift));
    }
    Ok(MackeyMorphism { maps })
}

/// The comparison map between two computations of the same norm (for
/// example by different strategies): identity on symbols.
pub fn strategy_witness(a: &Norm, b: &Norm) -> Result<MackeyMorphism> {
    if a.ctx != b.ctx || a.h != b.h || a.input.levels != b.input.levels {
        return Err(Error::Invalid("norms of different inputs".into()));
    }
    let h = a.h;
    let phi = extend_on_generators(a, &b.functor, &|j, t| {
        if j > h {
            b.norm_element(j, t)
        } else {
            Ok(b.tensor_element(j, t))
        }
    })?;
    if !is_isomorphism(&a.functor, &b.functor, &phi) {
        let rep = verify_morphism(&a.functor, &b.functor, &phi);
        return Err(Error::Consistency(format!("strategy comparison is not an isomorphism: {rep}")));
    }
    Ok(phi)
}

/// Build the norm with both strategies and compare them.
pub fn oracle_check(ctx: &GroupCtx, h: usize, m: &MackeyFunctor, opts: &NormOptions) -> Result<MackeyMorphism> {
    let brute = norm(ctx, h, m, &NormOptions { strategy: Strategy::BruteForce, ..*opts })?;
    let rewrite = norm(ctx, h, m, &NormOptions { strategy: Strategy::Rewrite, ..*opts })?;
    strategy_witness(&rewrite, &brute)
}

/// The map N(φ): N(M) → N(L) induced by a morphism φ: M → L, where `src`
/// and `tgt` are the norms of M and L.
pub fn norm_on_morphism(src: &Norm, tgt: &Norm, phi: &MackeyMorphism) -> Result<MackeyMorphism> {
    if src.ctx != tgt.ctx || src.h != tgt.h {
        return Err(Error::ContextMismatch);
    }
    let h = src.h;
    // φ in the diagonal coordinates of both inputs
    let inner = tgt.to_input.compose(phi).compose(&src.from_input);
    let k = src.copies();
    let ident: Vec<usize> = (0..k).collect();
    let lower = src.lower.induced_map(&tgt.lower, &ident, &vec![inner.clone(); k]);
    let top = &inner.maps[h];
    let out = extend_on_generators(src, &tgt.functor, &|j, t| {
        if j > h {
            let mapped: Vec<Elem> = t.iter().map(|x| top.mul_vec(x)).collect();
            tgt.norm_element(j, &mapped)
        } else {
            let x = src.tensor_element(j, t);
            Ok(tgt.functor.levels[j].reduce(&lower.maps[j].mul_vec(&x)))
        }
    })?;
    let rep = verify_morphism(&src.functor, &tgt.functor, &out);
    if !rep.passed() {
        return Err(Error::Consistency(format!("induced map on norms is not a morphism: {rep}")));
    }
    Ok(out)
}

pub struct Composability {
    pub direct: Norm,
    pub inner: Norm,
    pub outer: Norm,
    pub witness: MackeyMorphism,
}

/// Compare N^G_H M with N^G_K N^K_H M.
pub fn check_composability(
    ctx: &GroupCtx,
    k: usize,
    h: usize,
    m: &MackeyFunctor,
    opts: &NormOptions,
    cap: usize,
) -> Result<Composability> {
    ctx.check(Level(k))?;
    if h >= k || k > ctx.n() as usize {
        return Err(Error::NotSubgroup { lower: h, upper: k });
    }
    let direct = norm(ctx, h, m, opts)?;
    let kctx = ctx.subgroup_ctx(Level(k))?;
    let inner = norm(&kctx, h, m, opts)?;
    let outer = norm(ctx, k, &inner.functor, opts)?;
    let witness = find_isomorphism(&direct.functor, &outer.functor, cap)?
        .ok_or_else(|| Error::Consistency("the two norms are not isomorphic".into()))?;
    Ok(Composability { direct, inner, outer, witness })
}

pub struct Monoidality {
    pub lhs: Norm,
    pub rhs: MultiBox,
    /// N(M) □ N(L) → N(M □ L)
    pub witness: MackeyMorphism,
    /// Whether the explicit reindexing map was used (rather than a search).
    pub explicit: bool,
}

/// A bilinear pairing of two norms' levels into a third functor, fixed by
/// its values on raw tuple generators and extended through Frobenius
/// reciprocity: `tr(u)·v = tr(u·res v)`.
pub(crate) struct Pairing<'a> {
    pub left: &'a Norm,
    pub right: &'a Norm,
    pub out: &'a MackeyFunctor,
    pub base: &'a dyn Fn(usize, &[Elem], &[Elem]) -> Result<Elem>,
}

impl Pairing<'_> {
    pub fn pair(&self, j: usize, u: &[Int], v: &[Int]) -> Result<Elem> {
        let out_level = &self.out.levels[j];
        let (tu, lu) = split(self.left, j, u);
        let (tv, lv) = split(self.right, j, v);
        let tuples_m = self.left.raw_tuples(j);
        let tuples_l = self.right.raw_tuples(j);
        let mut acc = zero_vec(out_level.gens());
        for (a, ca) in tu.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in tv.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let x = (self.base)(j, &tuples_m[a], &tuples_l[b])?;
                crate::matrix::add_scaled(&mut acc, &(ca * cb), &x);
            }
        }
        if j > 0 {
            let fm = &self.left.functor;
            let fl = &self.right.functor;
            // u = T_u + tr(u'), v = T_v + tr(v')
            let t_u = vec_sub(u, &fm.tr[j - 1].mul_vec(&lu));
            if lu.iter().any(|c| !c.is_zero()) {
                let low = self.pair(j - 1, &lu, &fl.res[j - 1].mul_vec(v))?;
                acc = vec_add(&acc, &self.out.tr[j - 1].mul_vec(&low));
            }
            if lv.iter().any(|c| !c.is_zero()) {
                let low = self.pair(j - 1, &fm.res[j - 1].mul_vec(&t_u), &lv)?;
                acc = vec_add(&acc, &self.out.tr[j - 1].mul_vec(&low));
            }
        }
        Ok(out_level.reduce(&acc))
    }
}

/// Raw coordinates of a level element: tuple coefficients and the part in the level below.
fn split(n: &Norm, j: usize, x: &[Int]) -> (Vec<Int>, Vec<Int>) {
    let raw = n.raw_lift(j).mul_vec(x);
    let t = n.raw_tuples(j).len();
    (raw[..t].to_vec(), raw[t..].to_vec())
}

/// Compare N^G_H(M □ L) with N^G_H M □ N^G_H L.
pub fn check_monoidality(
    ctx: &GroupCtx,
    h: usize,
    m: &MackeyFunctor,
    l: &MackeyFunctor,
    opts: &NormOptions,
    cap: usize,
) -> Result<Monoidality> {
    let nm = norm(ctx, h, m, opts)?;
    let nl = norm(ctx, h, l, opts)?;
    let inner = MultiBox::new(vec![nm.input.clone(), nl.input.clone()])?;
    let lhs = norm(ctx, h, &inner.functor, opts)?;
    let rhs = MultiBox::new(vec![nm.functor.clone(), nl.functor.clone()])?;
    let h_level = h;
    let base = |j: usize, t: &[Elem], s: &[Elem]| -> Result<Elem> {
        let level = j.min(h_level);
        let to = &lhs.to_input.maps[level];
        let word: Vec<Elem> =
            t.iter().zip(s).map(|(a, b)| to.mul_vec(&inner.pure_tensor(level, &[a.as_slice(), b.as_slice()]))).collect();
        if j > h_level {
            lhs.norm_element(j, &word)
        } else {
            Ok(lhs.tensor_element(j, &word))
        }
    };
    let pairing = Pairing { left: &nm, right: &nl, out: &lhs.functor, base: &base };
    let n = ctx.n() as usize;
    let mut maps: Vec<IntMatrix> = Vec::new();
    let mut explicit_ok = true;
    for j in 0..=n {
        let dims = rhs.tensor_dims(j);
        let tn: usize = dims.iter().product();
        let lift = rhs.raw_lift(j);
        let mut raw = IntMatrix::zeros(lhs.functor.levels[j].gens(), lift.rows());
        for g in 0..tn {
            let idx = crate::abgroup::tensor_multi_index(dims, g);
            let u = crate::matrix::unit_vec(dims[0], idx[0]);
            let v = crate::matrix::unit_vec(dims[1], idx[1]);
            match pairing.pair(j, &u, &v) {
                Ok(x) => raw.set_col(g, &x),
                Err(_) => explicit_ok = false,
            }
        }
        if j > 0 {
            let below = lhs.functor.tr[j - 1].mul(&maps[j - 1]);
            for x in 0..lift.rows() - tn {
                raw.set_col(tn + x, &below.col(x));
            }
        }
        maps.push(raw.mul(lift));
    }
    let psi = MackeyMorphism { maps };
    if explicit_ok && is_isomorphism(&rhs.functor, &lhs.functor, &psi) {
        return Ok(Monoidality { lhs, rhs, witness: psi, explicit: true });
    }
    let witness = find_isomorphism(&rhs.functor, &lhs.functor, cap)?
        .ok_or_else(|| Error::Consistency("norm is not monoidal on this example".into()))?;
    Ok(Monoidality { lhs, rhs, witness, explicit: false })
}
