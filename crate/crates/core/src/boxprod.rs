//! Box products of Mackey functors, built level by level: each level is the
//! tensor product of the factors' levels plus the coinvariants of the box
//! level below, modulo Frobenius reciprocity.

use crate::abgroup::{pure_tensor_coords, tensor_matrix, tensor_multi_index, tensor_product, AbGroup, Elem};
use crate::error::{Error, Result};
use crate::group::Level;
use crate::mackey::{MackeyFunctor, MackeyMorphism};
use crate::matrix::{unit_vec, zero_vec, Int, IntMatrix};

/// The box product of `k` factors, with the bookkeeping needed to map pure
/// tensors and induced maps into it.
#[derive(Clone, Debug)]
pub struct MultiBox {
    pub factors: Vec<MackeyFunctor>,
    pub functor: MackeyFunctor,
    /// per level, generator counts of each factor
    dims: Vec<Vec<usize>>,
    /// per level: tensor coordinates → box coordinates
    tensor_proj: Vec<IntMatrix>,
    /// per level: box coordinates → raw coordinates (tensor ⊕ lower box level)
    lift: Vec<IntMatrix>,
}

impl MultiBox {
    pub fn new(factors: Vec<MackeyFunctor>) -> Result<Self> {
        let first = factors.first().ok_or_else(|| Error::Invalid("empty box product".into()))?;
        let ctx = first.ctx;
        if factors.iter().any(|f| f.ctx != ctx) {
            return Err(Error::ContextMismatch);
        }
        let n = ctx.n() as usize;
        let p = ctx.p() as usize;
        let k = factors.len();
        let mut dims = Vec::new();
        let mut tensor_proj = Vec::new();
        let mut lift = Vec::new();
        let mut levels: Vec<AbGroup> = Vec::new();
        let mut res = Vec::new();
        let mut tr = Vec::new();
        let mut weyl = Vec::new();
        for j in 0..=n {
            let d: Vec<usize> = factors.iter().map(|f| f.levels[j].gens()).collect();
            let t = tensor_product(&factors.iter().map(|f| f.levels[j].clone()).collect::<Vec<_>>());
            let tn = t.gens();
            let tensor_weyl = tensor_matrix(&factors.iter().map(|f| &f.weyl[j]).collect::<Vec<_>>());
            if j == 0 {
                let s = t.simplify();
                weyl.push(s.proj.mul(&tensor_weyl).mul(&s.lift));
                levels.push(s.group);
                tensor_proj.push(s.proj);
                lift.push(s.lift);
                dims.push(d);
                continue;
            }
            let lower = &levels[j - 1];
            let ln = lower.gens();
            let rn = tn + ln;
            let mut rels: Vec<Elem> = Vec::new();
            for r in t.relations() {
                let mut v = r.clone();
                v.extend(zero_vec(ln));
                rels.push(v);
            }
            for r in lower.relations() {
                let mut v = zero_vec(tn);
                v.extend(r.iter().cloned());
                rels.push(v);
            }
            // coinvariants under the Weyl group of level j−1 inside level j
            let step = ctx.index(Level(j));
            let w_lower = weyl[j - 1].pow(step);
            for x in 0..ln {
                let mut v = zero_vec(tn);
                let mut c = w_lower.col(x);
                c[x] -= 1;
                v.extend(c);
                rels.push(v);
            }
            // Frobenius reciprocity, one slot at a time on generators
            let pd = &dims[j - 1];
            for i in 0..k {
                let mut others = d.clone();
                others[i] = 1;
                let count: usize = others.iter().product();
                for x in 0..pd[i] {
                    let trx = factors[i].tr[j - 1].col(x);
                    for c in 0..count {
                        let idx = tensor_multi_index(&others, c);
                        let mut hi: Vec<Elem> = Vec::with_capacity(k);
                        let mut lo: Vec<Elem> = Vec::with_capacity(k);
                        for s in 0..k {
                            if s == i {
                                hi.push(trx.clone());
                                lo.push(unit_vec(pd[s], x));
                            } else {
                                hi.push(unit_vec(d[s], idx[s]));
                                lo.push(factors[s].res[j - 1].col(idx[s]));
                            }
                        }
                        let mut v = pure_tensor_coords(&d, &hi.iter().map(|e| e.as_slice()).collect::<Vec<_>>());
                        let low = pure_tensor_coords(pd, &lo.iter().map(|e| e.as_slice()).collect::<Vec<_>>());
                        let low = tensor_proj[j - 1].mul_vec(&low);
                        v.extend(low.iter().map(|z| -z));
                        rels.push(v);
                    }
                }
            }
            let raw = AbGroup::new(rn, rels)?;
            let s = raw.simplify();
            let tp = s.proj.select_cols(&(0..tn).collect::<Vec<_>>());
            let trm = s.proj.select_cols(&(tn..rn).collect::<Vec<_>>());
            // restriction on raw generators
            let mut r_raw = IntMatrix::zeros(ln, rn);
            for g in 0..tn {
                let idx = tensor_multi_index(&d, g);
                let parts: Vec<Elem> = (0..k).map(|s| factors[s].res[j - 1].col(idx[s])).collect();
                let low = pure_tensor_coords(pd, &parts.iter().map(|e| e.as_slice()).collect::<Vec<_>>());
                r_raw.set_col(g, &tensor_proj[j - 1].mul_vec(&low));
            }
            let mut trace = IntMatrix::zeros(ln, ln);
            let mut cur = IntMatrix::identity(ln);
            for _ in 0..p {
                trace = trace.add(&cur);
                cur = w_lower.mul(&cur);
            }
            for x in 0..ln {
                r_raw.set_col(tn + x, &trace.col(x));
            }
            // weyl on raw generators
            let w_raw = tp.mul(&tensor_weyl).hstack(&trm.mul(&weyl[j - 1]));
            res.push(r_raw.mul(&s.lift));
            weyl.push(w_raw.mul(&s.lift));
            tr.push(trm);
            levels.push(s.group);
            tensor_proj.push(tp);
            lift.push(s.lift);
            dims.push(d);
        }
        let functor = MackeyFunctor::new(ctx, levels, res, tr, weyl)?;
        Ok(MultiBox { factors, functor, dims, tensor_proj, lift })
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    /// Image of `x_0 ⊗ … ⊗ x_{k−1}` at level `j` (each `x_i` in factor i's level j).
    pub fn pure_tensor(&self, j: usize, elems: &[&[Int]]) -> Elem {
        let raw = pure_tensor_coords(&self.dims[j], elems);
        self.functor.levels[j].reduce(&self.tensor_proj[j].mul_vec(&raw))
    }

    /// Matrix of the tensor-coordinate embedding at level `j`.
    pub fn tensor_embedding(&self, j: usize) -> &IntMatrix {
        &self.tensor_proj[j]
    }

    pub fn tensor_dims(&self, j: usize) -> &[usize] {
        &self.dims[j]
    }

    /// Box coordinates at level `j` back to raw generators: the first
    /// `tensor_dims(j).product()` coordinates are tuples, the rest lie in level j−1.
    pub fn raw_lift(&self, j: usize) -> &IntMatrix {
        &self.lift[j]
    }

    /// The morphism `self → target` sending slot `perm[i]` of a pure tensor to
    /// slot `i`, after applying `maps[i]`.
    pub fn induced_map(&self, target: &MultiBox, perm: &[usize], maps: &[MackeyMorphism]) -> MackeyMorphism {
        let n = self.functor.n();
        let k = self.arity();
        assert_eq!(perm.len(), k);
        assert_eq!(target.arity(), k);
        let mut out: Vec<IntMatrix> = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let d = &self.dims[j];
            let tn: usize = d.iter().product();
            let tgt_gens = target.functor.levels[j].gens();
            let raw_cols = self.lift[j].rows();
            let mut raw = IntMatrix::zeros(tgt_gens, raw_cols);
            for g in 0..tn {
                let idx = tensor_multi_index(d, g);
                let parts: Vec<Elem> = (0..k).map(|i| maps[i].maps[j].col(idx[perm[i]])).collect();
                let img = target.pure_tensor(j, &parts.iter().map(|e| e.as_slice()).collect::<Vec<_>>());
                raw.set_col(g, &img);
            }
            if j > 0 {
                let below = target.functor.tr[j - 1].mul(&out[j - 1]);
                for x in 0..raw_cols - tn {
                    raw.set_col(tn + x, &below.col(x));
                }
            }
            out.push(raw.mul(&self.lift[j]));
        }
        MackeyMorphism { maps: out }
    }
}

pub fn box_product(m: &MackeyFunctor, l: &MackeyFunctor) -> Result<MackeyFunctor> {
    Ok(MultiBox::new(vec![m.clone(), l.clone()])?.functor)
}

/// The k-fold box power; `k = 1` returns `m` unchanged.
pub fn box_power(m: &MackeyFunctor, k: usize) -> Result<MackeyFunctor> {
    match k {
        0 => Err(Error::Invalid("box power needs k ≥ 1".into())),
        1 => Ok(m.clone()),
        _ => Ok(MultiBox::new(vec![m.clone(); k])?.functor),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupCtx;
    use crate::iso::{find_isomorphism, DEFAULT_SEARCH_CAP};
    use crate::mackey::{burnside, fixed_point_functor, from_abelian_group, verify_mackey, verify_morphism};
    use crate::matrix::int;

    #[test]
    fn trivial_group_is_tensor() {
        let a = from_abelian_group(2, &AbGroup::cyclic(2)).unwrap();
        let b = from_abelian_group(2, &AbGroup::cyclic(3)).unwrap();
        assert!(box_product(&a, &b).unwrap().levels[0].is_trivial());
        let c = from_abelian_group(2, &AbGroup::cyclic(4)).unwrap();
        assert!(box_power(&c, 3).unwrap().levels[0].is_isomorphic(&AbGroup::cyclic(4)));
    }

    #[test]
    fn burnside_is_unit() {
        for (p, n) in [(2, 1), (2, 2), (3, 1)] {
            let ctx = GroupCtx::new(p, n).unwrap();
            let m = fixed_point_functor(ctx, &AbGroup::cyclic(2));
            let b = box_product(&burnside(ctx), &m).unwrap();
            assert!(verify_mackey(&b).passed());
            assert!(find_isomorphism(&b, &m, DEFAULT_SEARCH_CAP).unwrap().is_some());
        }
    }

    #[test]
    fn fixed_point_square() {
        let ctx = GroupCtx::new(2, 1).unwrap();
        let f = fixed_point_functor(ctx, &AbGroup::cyclic(2));
        let b = box_product(&f, &f).unwrap();
        assert!(verify_mackey(&b).passed());
        assert!(b.levels[0].is_isomorphic(&AbGroup::cyclic(2)));
        assert!(b.levels[0].elem_eq(&b.weyl[0].col(0), &[int(1)]));
    }

    #[test]
    fn swap_is_an_isomorphism() {
        let ctx = GroupCtx::new(2, 1).unwrap();
        let f = fixed_point_functor(ctx, &AbGroup::cyclic(2));
        let b = burnside(ctx);
        let ml = MultiBox::new(vec![f.clone(), b.clone()]).unwrap();
        let lm = MultiBox::new(vec![b.clone(), f.clone()]).unwrap();
        let ids = [MackeyMorphism::identity(&b), MackeyMorphism::identity(&f)];
        let swap = ml.induced_map(&lm, &[1, 0], &ids);
        assert!(crate::mackey::is_isomorphism(&ml.functor, &lm.functor, &swap));
        assert!(verify_morphism(&ml.functor, &lm.functor, &swap).passed());
    }

    #[test]
    fn box_power_one_is_identity() {
        let ctx = GroupCtx::new(2, 1).unwrap();
        let b = burnside(ctx);
        let p = box_power(&b, 1).unwrap();
        assert_eq!(p.res, b.res);
    }
}
