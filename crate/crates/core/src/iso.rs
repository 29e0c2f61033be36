//! Morphism spaces between Mackey functors and bounded isomorphism search.
//!
//! Hom(M, L) is computed exactly as an abelian group by linear algebra on the
//! unknown matrix entries; candidate isomorphisms are then enumerated from it.

use crate::abgroup::AbGroup;
use crate::error::{Error, Result};
use crate::mackey::{is_isomorphism, MackeyFunctor, MackeyMorphism};
use crate::matrix::{kernel, zero_vec, Int, IntMatrix, Solver};
use num_traits::Zero;

pub const DEFAULT_SEARCH_CAP: usize = 100_000;

/// Hom(M, L) between diagonal presentations.
pub struct HomGroup {
    pub group: AbGroup,
    src: MackeyFunctor,
    tgt: MackeyFunctor,
    /// columns: lattice basis of solutions, in entry coordinates
    basis: IntMatrix,
    lift: IntMatrix,
    offsets: Vec<usize>,
}

fn divisors(g: &AbGroup) -> Vec<Int> {
    g.diagonal().expect("diagonal presentation expected")
}

impl HomGroup {
    /// Both functors must have diagonal levels (see `MackeyFunctor::simplified`).
    pub fn new(src: &MackeyFunctor, tgt: &MackeyFunctor) -> Result<Self> {
        if src.ctx != tgt.ctx {
            return Err(Error::ContextMismatch);
        }
        let n = src.n();
        let dims: Vec<(usize, usize)> = (0..=n).map(|h| (tgt.levels[h].gens(), src.levels[h].gens())).collect();
        let mut offsets = Vec::new();
        let mut total = 0;
        for (b, a) in &dims {
            offsets.push(total);
            total += a * b;
        }
        let var = |h: usize, i: usize, j: usize| offsets[h] + i * dims[h].1 + j;
        let dm: Vec<Vec<Int>> = src.levels.iter().map(divisors).collect();
        let dl: Vec<Vec<Int>> = tgt.levels.iter().map(divisors).collect();
        // each constraint: a linear form in the entries that must vanish mod a modulus
        let mut forms: Vec<(Vec<Int>, Int)> = Vec::new();
        for h in 0..=n {
            let (b, a) = dims[h];
            for i in 0..b {
                for j in 0..a {
                    if !dm[h][j].is_zero() {
                        let mut f = zero_vec(total);
                        f[var(h, i, j)] = dm[h][j].clone();
                        forms.push((f, dl[h][i].clone()));
                    }
                }
            }
            // φ_h W^M − W^L φ_h
            let (wm, wl) = (&src.weyl[h], &tgt.weyl[h]);
            for i in 0..b {
                for j in 0..a {
                    let mut f = zero_vec(total);
                    for k in 0..a {
                        f[var(h, i, k)] += &wm[(k, j)];
                    }
                    for k in 0..b {
                        f[var(h, k, j)] -= &wl[(i, k)];
                    }
                    forms.push((f, dl[h][i].clone()));
                }
            }
        }
        for h in 0..n {
            let (b_lo, a_lo) = dims[h];
            let (b_hi, a_hi) = dims[h + 1];
            // φ_h R^M − R^L φ_{h+1}, rows in level h, cols in src level h+1
            let (rm, rl) = (&src.res[h], &tgt.res[h]);
            for i in 0..b_lo {
                for j in 0..a_hi {
                    let mut f = zero_vec(total);
                    for k in 0..a_lo {
                        f[var(h, i, k)] += &rm[(k, j)];
                    }
                    for k in 0..b_hi {
                        f[var(h + 1, k, j)] -= &rl[(i, k)];
                    }
                    forms.push((f, dl[h][i].clone()));
                }
            }
            // φ_{h+1} T^M − T^L φ_h
            let (tm, tl) = (&src.tr[h], &tgt.tr[h]);
            for i in 0..b_hi {
                for j in 0..a_lo {
                    let mut f = zero_vec(total);
                    for k in 0..a_hi {
                        f[var(h + 1, i, k)] += &tm[(k, j)];
                    }
                    for k in 0..b_lo {
                        f[var(h, k, j)] -= &tl[(i, k)];
                    }
                    forms.push((f, dl[h + 1][i].clone()));
                }
            }
        }
        forms.retain(|(f, _)| f.iter().any(|x| !x.is_zero()));
        let slacks: Vec<usize> = (0..forms.len()).filter(|&r| !forms[r].1.is_zero()).collect();
        let mut sys = IntMatrix::zeros(forms.len(), total + slacks.len());
        for (r, (f, _)) in forms.iter().enumerate() {
            for (c, x) in f.iter().enumerate() {
                if !x.is_zero() {
                    sys[(r, c)] = x.clone();
                }
            }
        }
        for (s, &r) in slacks.iter().enumerate() {
            sys[(r, total + s)] = forms[r].1.clone();
        }
        let k = kernel(&sys);
        let sol_cols: Vec<Vec<Int>> = (0..k.cols()).map(|c| k.col(c)[..total].to_vec()).collect();
        let basis_rows = crate::matrix::row_lattice_basis(sol_cols, total);
        let basis = IntMatrix::from_cols(total, &basis_rows);
        // trivial homs: entries divisible by the target orders
        let solver = Solver::new(&basis);
        let mut rels = Vec::new();
        for h in 0..=n {
            let (b, a) = dims[h];
            for i in 0..b {
                if dl[h][i].is_zero() {
                    continue;
                }
                for j in 0..a {
                    let mut t = zero_vec(total);
                    t[var(h, i, j)] = dl[h][i].clone();
                    let y = solver
                        .solve(&t)
                        .ok_or_else(|| Error::Consistency("trivial hom outside the solution lattice".into()))?;
                    rels.push(y);
                }
            }
        }
        let raw = AbGroup::new(basis.cols(), rels)?;
        let simp = raw.simplify();
        Ok(HomGroup { group: simp.group, src: src.clone(), tgt: tgt.clone(), basis, lift: simp.lift, offsets })
    }

    /// The morphism with the given coordinates in `group`.
    pub fn morphism(&self, coords: &[Int]) -> MackeyMorphism {
        let entries = self.basis.mul_vec(&self.lift.mul_vec(coords));
        let maps = (0..self.src.levels.len())
            .map(|h| {
                let (b, a) = (self.tgt.levels[h].gens(), self.src.levels[h].gens());
                let mut m = IntMatrix::zeros(b, a);
                for i in 0..b {
                    for j in 0..a {
                        m[(i, j)] = entries[self.offsets[h] + i * a + j].clone();
                    }
                }
                m
            })
            .collect();
        MackeyMorphism { maps }
    }
}

/// Search for an isomorphism `M → L` that also satisfies `accept`.
pub fn find_isomorphism_with(
    m: &MackeyFunctor,
    l: &MackeyFunctor,
    cap: usize,
    accept: &dyn Fn(&MackeyMorphism) -> bool,
) -> Result<Option<MackeyMorphism>> {
    if m.ctx != l.ctx {
        return Err(Error::ContextMismatch);
    }
    for h in 0..=m.n() {
        if !m.levels[h].is_isomorphic(&l.levels[h]) {
            return Ok(None);
        }
    }
    let (ms, to_m, _) = m.simplified();
    let (ls, _, from_l) = l.simplified();
    let hom = HomGroup::new(&ms, &ls)?;
    let d = divisors(&hom.group);
    let free_range = 2i64;
    let mut idx: Vec<Int> = d.iter().map(|x| if x.is_zero() { Int::from(-free_range) } else { Int::zero() }).collect();
    let mut tried = 0usize;
    loop {
        if tried >= cap {
            return Err(Error::CapExceeded(cap));
        }
        tried += 1;
        let phi = hom.morphism(&idx);
        if is_levelwise_bijective(&ms, &ls, &phi) {
            let full = from_l.compose(&phi).compose(&to_m);
            if accept(&full) && is_isomorphism(m, l, &full) {
                return Ok(Some(full));
            }
        }
        // advance the mixed-radix counter
        let mut k = 0;
        loop {
            if k == d.len() {
                return Ok(None);
            }
            idx[k] += 1;
            let wrap = if d[k].is_zero() { idx[k] > Int::from(free_range) } else { idx[k] >= d[k] };
            if !wrap {
                break;
            }
            idx[k] = if d[k].is_zero() { Int::from(-free_range) } else { Int::zero() };
            k += 1;
        }
    }
}

fn is_levelwise_bijective(src: &MackeyFunctor, tgt: &MackeyFunctor, phi: &MackeyMorphism) -> bool {
    (0..src.levels.len()).all(|h| {
        crate::abgroup::AbHom::unchecked(&src.levels[h], &tgt.levels[h], phi.maps[h].clone()).is_bijective()
    })
}

pub fn find_isomorphism(m: &MackeyFunctor, l: &MackeyFunctor, cap: usize) -> Result<Option<MackeyMorphism>> {
    find_isomorphism_with(m, l, cap, &|_| true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupCtx;
    use crate::mackey::{burnside, fixed_point_functor, verify_morphism};
    use crate::matrix::int;

    #[test]
    fn identity_found() {
        let b = burnside(GroupCtx::new(2, 2).unwrap());
        let phi = find_isomorphism(&b, &b, DEFAULT_SEARCH_CAP).unwrap().unwrap();
        assert!(verify_morphism(&b, &b, &phi).passed());
    }

    #[test]
    fn non_isomorphic_levels() {
        let ctx = GroupCtx::new(2, 1).unwrap();
        let a = fixed_point_functor(ctx, &AbGroup::cyclic(4));
        let b = fixed_point_functor(ctx, &AbGroup::from_divisors(&[int(2), int(2)]));
        assert!(find_isomorphism(&a, &b, DEFAULT_SEARCH_CAP).unwrap().is_none());
    }

    #[test]
    fn same_groups_different_structure() {
        // constant Z/2 with tr = 0 versus a functor with tr = id and res = 0
        let ctx = GroupCtx::new(2, 1).unwrap();
        let a = fixed_point_functor(ctx, &AbGroup::cyclic(2));
        let mut b = a.clone();
        b.res[0] = IntMatrix::from_i64(&[&[0]]);
        b.tr[0] = IntMatrix::from_i64(&[&[1]]);
        assert!(crate::mackey::verify_mackey(&b).passed());
        assert!(find_isomorphism(&a, &b, DEFAULT_SEARCH_CAP).unwrap().is_none());
    }

    #[test]
    fn hom_from_burnside_is_top_level() {
        // Hom(A, M) ≅ M(G/G)
        let ctx = GroupCtx::new(2, 1).unwrap();
        let b = burnside(ctx);
        let m = fixed_point_functor(ctx, &AbGroup::cyclic(6));
        let (ms, _, _) = m.simplified();
        let hom = HomGroup::new(&b, &ms).unwrap();
        assert!(hom.group.is_isomorphic(&AbGroup::cyclic(6)));
    }
}
