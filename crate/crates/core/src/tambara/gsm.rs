//! Finite G-sets acting on Mackey functors: an orbit G/H sends M to the norm
//! of its restriction to H, disjoint unions go to box products.

use crate::boxprod::MultiBox;
use crate::error::{Error, Result};
use crate::group::Level;
use crate::gset::GSet;
use crate::mackey::{burnside, MackeyFunctor};
use crate::norm::{norm_functor, NormOptions};

pub fn tensor_gset(x: &GSet, m: &MackeyFunctor, opts: &NormOptions) -> Result<MackeyFunctor> {
    if x.ctx != m.ctx {
        return Err(Error::ContextMismatch);
    }
    let ctx = m.ctx;
    let n = ctx.n() as usize;
    let mut parts = x
        .orbits
        .iter()
        .map(|&h| {
            ctx.check(Level(h))?;
            if h == n {
                Ok(m.clone())
            } else {
                norm_functor(&ctx, h, &m.restrict(h, false)?, opts)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    match parts.len() {
        0 => Ok(burnside(ctx)),
        1 => Ok(parts.pop().unwrap()),
        _ => Ok(MultiBox::new(parts)?.functor),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::AbGroup;
    use crate::boxprod::box_power;
    use crate::group::GroupCtx;
    use crate::mackey::{fixed_point_functor, from_abelian_group, verify_mackey};

    #[test]
    fn empty_and_point() {
        let ctx = GroupCtx::new(2, 1).unwrap();
        let m = fixed_point_functor(ctx, &AbGroup::cyclic(2));
        let opts = NormOptions::default();
        let e = tensor_gset(&GSet::empty(ctx), &m, &opts).unwrap();
        assert_eq!(e.levels, burnside(ctx).levels);
        let pt = tensor_gset(&GSet::orbit(ctx, 1).unwrap(), &m, &opts).unwrap();
        assert_eq!(pt.levels, m.levels);
        let two = tensor_gset(&GSet::new(ctx, vec![1, 1]).unwrap(), &m, &opts).unwrap();
        assert_eq!(two.levels, box_power(&m, 2).unwrap().levels);
    }

    #[test]
    fn free_orbit_is_norm_of_bottom() {
        let ctx = GroupCtx::new(2, 1).unwrap();
        let m = fixed_point_functor(ctx, &AbGroup::cyclic(2));
        let t = tensor_gset(&GSet::orbit(ctx, 0).unwrap(), &m, &NormOptions::default()).unwrap();
        let direct =
            norm_functor(&ctx, 0, &from_abelian_group(2, &AbGroup::cyclic(2)).unwrap(), &NormOptions::default()).unwrap();
        assert!(verify_mackey(&t).passed());
        for (a, b) in t.levels.iter().zip(&direct.levels) {
            assert!(a.is_isomorphic(b));
        }
    }
}
