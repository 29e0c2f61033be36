//! The counit N_H^G i_H^* S → S of a G-Tambara functor, the change of
//! action on the norm that turns it into plain multiplication, and the
//! recovery of norms from the counit.

use super::{sample_elements, TambaraFunctor, VerifyOptions};
use crate::abgroup::{AbGroup, AbHom, Elem};
use crate::error::{Error, Result};
use crate::group::Level;
use crate::mackey::{verify_mackey, verify_morphism, MackeyFunctor, MackeyMorphism, Report};
use crate::matrix::IntMatrix;
use crate::norm::{norm, Norm, NormOptions, Strategy};

/// Class of a raw tuple at level `j`: a pure tensor at or below H, a norm symbol above.
fn class(nm: &Norm, j: usize, t: &[Elem]) -> Result<Elem> {
    if j > nm.h {
        nm.norm_element(j, t)
    } else {
        Ok(nm.tensor_element(j, t))
    }
}

/// The map on level `j` of a norm given by `images` on raw tuples and by
/// `below` on the transfer part, with a failure message unless it is well
/// defined: zero on the level's relations and agreeing with `images` on
/// every raw tuple, which together span all raw relations.
fn from_raw(nm: &Norm, j: usize, images: &[Elem], below: Option<IntMatrix>, target: &AbGroup) -> Result<(IntMatrix, Option<String>)> {
    let mut raw = IntMatrix::from_cols(target.gens(), images);
    if let Some(b) = below {
        raw = raw.hstack(&b);
    }
    let m = raw.mul(nm.raw_lift(j));
    let source = &nm.functor.levels[j];
    if let Err(e) = AbHom::new(source, target, m.clone()) {
        return Ok((m, Some(format!("level {j}: {e}"))));
    }
    for (t, img) in nm.raw_tuples(j).iter().zip(images) {
        if !target.elem_eq(&m.mul_vec(&class(nm, j, t)?), img) {
            return Ok((m, Some(format!("level {j}: not well defined on the raw relations"))));
        }
    }
    Ok((m, None))
}

/// A levelwise map out of a norm, fixed by its values on raw tuple
/// generators at each level and by `tr_target` on the transfer part.
fn extend(nm: &Norm, target: &MackeyFunctor, image: &dyn Fn(usize, &[Elem]) -> Result<Elem>) -> Result<(MackeyMorphism, Report)> {
    let mut maps: Vec<IntMatrix> = Vec::new();
    let mut rep = Report::default();
    for j in 0..target.levels.len() {
        let images = nm.raw_tuples(j).iter().map(|t| image(j, t)).collect::<Result<Vec<_>>>()?;
        let below = (j > 0).then(|| target.tr[j - 1].mul(&maps[j - 1]));
        let (m, err) = from_raw(nm, j, &images, below, &target.levels[j])?;
        if let Some(e) = err {
            rep.fail(e);
        }
        maps.push(m);
    }
    Ok((MackeyMorphism { maps }, rep))
}

fn invert(g: &AbGroup, m: &IntMatrix, what: &str) -> Result<IntMatrix> {
    let hom = AbHom::new(g, g, m.clone())?;
    Ok(hom.inverse().ok_or_else(|| Error::NotAutomorphism(what.to_string()))?.matrix)
}

pub struct TwistedNorm {
    /// Same groups as the norm, with γ shifting slots and acting on every entry.
    pub functor: MackeyFunctor,
    /// The norm → `functor`: 1 ⊗ γ ⊗ ⋯ ⊗ γ^{k−1} at and below H, the identity above
    /// (where a tuple (m_i) of the twisted functor stands for (γ^{−i} m_i)).
    pub chi: MackeyMorphism,
    /// Well-definedness of the twisted maps, the axioms, and χ being an isomorphism.
    pub report: Report,
}

/// The norm of a restricted functor with its alternate action, built from
/// the slot formulas; needs the input's ambient action.
pub fn twist_weyl(nm: &Norm) -> Result<TwistedNorm> {
    let amb = nm.input.ambient.as_ref().ok_or_else(|| Error::Invalid("the input carries no ambient action".into()))?;
    let f = &nm.functor;
    let n = f.n();
    let h = nm.h;
    let k = nm.copies();
    let p = nm.ctx.p() as usize;
    let amb_inv = (0..=h).map(|j| invert(&nm.input.levels[j], &amb[j], "ambient action")).collect::<Result<Vec<_>>>()?;
    let top = &nm.input.levels[h];
    let act = |e: usize, x: &Elem| top.reduce(&amb[h].pow(e).mul_vec(x));
    // slot i moved by γ^{±i}
    let twist = |t: &[Elem], inverse: bool| -> Vec<Elem> {
        let m = if inverse { &amb_inv[h] } else { &amb[h] };
        t.iter().enumerate().map(|(i, x)| top.reduce(&m.pow(i).mul_vec(x))).collect()
    };
    let slot = |i: usize| MackeyMorphism { maps: (0..=h).map(|j| amb[j].pow(i)).collect() };
    let ident: Vec<usize> = (0..k).collect();
    let shift: Vec<usize> = (0..k).map(|i| (i + k - 1) % k).collect();
    let chi_low = nm.lower.induced_map(&nm.lower, &ident, &(0..k).map(slot).collect::<Vec<_>>());
    let sigma_low = nm.lower.induced_map(&nm.lower, &shift, &vec![slot(1); k]);
    let mut chi = chi_low.maps.clone();
    chi.extend((h + 1..=n).map(|l| IntMatrix::identity(f.levels[l].gens())));
    let chi_inv = (0..=n)
        .map(|j| invert(&f.levels[j], &chi[j], &format!("χ at level {j}")))
        .collect::<Result<Vec<_>>>()?;
    let tr: Vec<IntMatrix> = (0..n).map(|j| chi[j + 1].mul(&f.tr[j]).mul(&chi_inv[j])).collect();
    let mut weyl = sigma_low.maps.clone();
    let mut res: Vec<IntMatrix> = (0..h).map(|j| f.res[j].clone()).collect();
    let mut report = Report::default();
    for l in h + 1..=n {
        let q = nm.ctx.index(Level(l));
        let tuples = nm.raw_tuples(l);
        let mut w_img = Vec::with_capacity(tuples.len());
        let mut r_img = Vec::with_capacity(tuples.len());
        for t in &tuples {
            let u = twist(t, false);
            // γ moves slot i to i+1; the entry wrapping around picks up γ^{k−q+1}
            let mut shifted: Vec<Elem> = (0..q).map(|i| act(1, &u[(i + q - 1) % q])).collect();
            shifted[0] = act(k - q + 1, &u[q - 1]);
            w_img.push(class(nm, l, &twist(&shifted, true))?);
            let blocks: Vec<Elem> = (0..q * p).map(|s| act(q * (s / q), &u[s % q])).collect();
            let below = class(nm, l - 1, &twist(&blocks, true))?;
            r_img.push(f.levels[l - 1].reduce(&chi[l - 1].mul_vec(&below)));
        }
        let w_below = tr[l - 1].mul(&weyl[l - 1]).mul(&chi[l - 1]);
        let (w, err) = from_raw(nm, l, &w_img, Some(w_below), &f.levels[l])?;
        report.failures.extend(err.map(|e| format!("twisted action, {e}")));
        // restriction of a transfer: the trace over K/K'
        let mut trace = IntMatrix::zeros(f.levels[l - 1].gens(), f.levels[l - 1].gens());
        for s in 0..p {
            trace = trace.add(&weyl[l - 1].pow(s * q));
        }
        let (r, err) = from_raw(nm, l, &r_img, Some(trace.mul(&chi[l - 1])), &f.levels[l - 1])?;
        report.failures.extend(err.map(|e| format!("twisted restriction, {e}")));
        weyl.push(w);
        res.push(r);
    }
    let functor = MackeyFunctor::new(f.ctx, f.levels.clone(), res, tr, weyl)?;
    let chi = MackeyMorphism { maps: chi };
    report.merge(verify_mackey(&functor));
    report.merge(verify_morphism(f, &functor, &chi));
    Ok(TwistedNorm { functor, chi, report })
}

pub struct Counit {
    pub norm: Norm,
    /// N_H^G i_H^* S → S
    pub theta: MackeyMorphism,
    /// Whether `theta` is a well-defined morphism of Mackey functors.
    pub report: Report,
}

/// θ(s_0 ⊗ … ⊗ s_{k−1}) = Π γ^i s_i below H, and θ(N(m)) = N_H^K(Π γ^i m_i) above.
pub fn counit(s: &TambaraFunctor, h: usize, opts: &NormOptions) -> Result<Counit> {
    let ctx = s.mackey.ctx;
    let l = s.mackey.restrict(h, true)?;
    let nm = norm(&ctx, h, &l, opts)?;
    let image = |j: usize, t: &[Elem]| -> Result<Elem> {
        let lvl = j.min(h);
        let conj: Vec<Elem> =
            t.iter().enumerate().map(|(i, x)| s.act(lvl, i, &nm.from_input.maps[lvl].mul_vec(x))).collect();
        let prod = s.product(lvl, &conj);
        if j > h {
            s.nm_up(h, j, &prod)
        } else {
            Ok(prod)
        }
    };
    let (theta, mut report) = extend(&nm, &s.mackey, &image)?;
    report.merge(verify_morphism(&nm.functor, &s.mackey, &theta));
    Ok(Counit { norm: nm, theta, report })
}

/// Recompute each adjacent norm as x ↦ θ(N(x)) through the counit of the
/// next level up, and compare with the stored norms on sampled elements.
/// The counit is built from generator tuples only, so a stored norm that
/// violates reciprocity shows up either as an ill-defined counit or as a
/// mismatch.
pub fn reconstruct_norms(s: &TambaraFunctor, opts: &VerifyOptions) -> Result<Report> {
    let mut rep = Report::default();
    let rewrite = NormOptions::with_strategy(Strategy::Rewrite);
    for h in 0..s.n() {
        let sk = s.restrict(h + 1)?;
        let c = counit(&sk, h, &rewrite)?;
        if !c.report.passed() {
            rep.fail(format!("counit from level {h} is not a morphism: {}", c.report.failures.join("; ")));
            continue;
        }
        for x in sample_elements(s.level(h), opts.radius, opts.sample_cap) {
            let sym = c.norm.norm_element(h + 1, &[c.norm.to_input.apply(&c.norm.input, h, &x)])?;
            let cand = c.theta.apply(&s.mackey, h + 1, &sym);
            if !s.level(h + 1).elem_eq(&cand, &s.nm(h, &x)?) {
                rep.fail(format!("norm from level {h} differs from its reconstruction at {}", crate::abgroup::fmt_vec(&x)));
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupCtx;
    use crate::matrix::{int, Int};
    use crate::tambara::{burnside_tambara, norm_tambara, ring_mod, NormFn, NormMap};
    use std::sync::Arc;

    #[test]
    fn burnside_counits_are_morphisms() {
        for (p, n) in [(2, 1), (2, 2), (3, 1)] {
            let t = burnside_tambara(GroupCtx::new(p, n).unwrap());
            for h in 0..n as usize {
                let c = counit(&t, h, &NormOptions::default()).unwrap();
                assert!(c.report.passed(), "C_{p}^{n}, h={h}: {}", c.report);
            }
        }
    }

    #[test]
    fn reconstruction_detects_corruption() {
        let t = burnside_tambara(GroupCtx::new(2, 2).unwrap());
        assert!(reconstruct_norms(&t, &VerifyOptions::default()).unwrap().passed());
        let mut bad = t.clone();
        let f: NormFn = Arc::new(|x: &[Int]| Ok(vec![int(0), x[0].clone()]));
        bad.norms[0] = NormMap::Eval(f);
        assert!(!reconstruct_norms(&bad, &VerifyOptions::default()).unwrap().passed());
    }

    #[test]
    fn twisted_action_and_counit() {
        let ctx = GroupCtx::new(2, 1).unwrap();
        let s = norm_tambara(&ctx, 0, &ring_mod(2, 2).unwrap(), &NormOptions::default()).unwrap().tambara;
        let c = counit(&s, 0, &NormOptions::default()).unwrap();
        assert!(c.report.passed(), "{}", c.report);
        let tw = twist_weyl(&c.norm).unwrap();
        assert!(tw.report.passed(), "{}", tw.report);
        // θ∘χ⁻¹ is the plain product at the bottom level
        let inv = AbHom::new(&c.norm.functor.levels[0], &c.norm.functor.levels[0], tw.chi.maps[0].clone())
            .unwrap()
            .inverse()
            .unwrap();
        for t in c.norm.raw_tuples(0) {
            let x = c.norm.tensor_element(0, &t);
            let got = c.theta.apply(&s.mackey, 0, &inv.apply(&x));
            let plain: Vec<Elem> = t.iter().map(|e| c.norm.from_input.maps[0].mul_vec(e)).collect();
            assert!(s.level(0).elem_eq(&got, &s.product(0, &plain)));
        }
    }

    #[test]
    fn twist_with_nontrivial_action() {
        use crate::abgroup::AbGroup;
        use crate::mackey::from_abelian_group;
        use crate::norm::norm_functor;
        for (p, n, h, a) in [(2, 1, 0, AbGroup::free(2)), (3, 1, 0, AbGroup::cyclic(3)), (2, 2, 1, AbGroup::cyclic(2))] {
            let ctx = GroupCtx::new(p, n).unwrap();
            let base = from_abelian_group(p, &a).unwrap();
            let m = norm_functor(&ctx, 0, &base, &NormOptions::default()).unwrap();
            let nm = norm(&ctx, h, &m.restrict(h, true).unwrap(), &NormOptions::default()).unwrap();
            let tw = twist_weyl(&nm).unwrap();
            assert!(tw.report.passed(), "p={p} n={n} h={h}: {}", tw.report);
        }
    }

    #[test]
    fn twist_of_sign_and_burnside() {
        use crate::abgroup::AbGroup;
        use crate::mackey::burnside;
        let c2 = GroupCtx::new(2, 1).unwrap();
        // Z with γ = −1 at the bottom and nothing on top
        let sign = MackeyFunctor::new(
            c2,
            vec![AbGroup::free(1), AbGroup::zero()],
            vec![IntMatrix::zeros(1, 0)],
            vec![IntMatrix::zeros(0, 1)],
            vec![IntMatrix::from_i64(&[&[-1]]), IntMatrix::zeros(0, 0)],
        )
        .unwrap();
        let nm = norm(&c2, 0, &sign.restrict(0, true).unwrap(), &NormOptions::default()).unwrap();
        let tw = twist_weyl(&nm).unwrap();
        assert!(tw.report.passed(), "{}", tw.report);
        // 1 ⊗ γ on Z ⊗ Z
        assert_eq!(tw.chi.maps[0], IntMatrix::from_i64(&[&[-1]]));
        let c4 = GroupCtx::new(2, 2).unwrap();
        let nm = norm(&c4, 1, &burnside(c4).restrict(1, true).unwrap(), &NormOptions::default()).unwrap();
        let tw = twist_weyl(&nm).unwrap();
        assert!(tw.report.passed(), "{}", tw.report);
        assert!(tw.chi.maps.iter().zip(&nm.functor.levels).all(|(m, g)| *m == IntMatrix::identity(g.gens())));
    }
}
