//! Finitely generated abelian groups given by integer presentations.
//!
//! Elements are coordinate vectors over the generators. A vector `r` in the
//! relation list means `Σ r_i g_i = 0`.

use crate::error::{Error, Result};
use crate::matrix::{self, int, is_zero_vec, smith, zero_vec, Int, IntMatrix};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::sync::{Arc, OnceLock};

pub type Elem = Vec<Int>;

#[derive(Debug)]
struct Canon {
    /// Per SNF coordinate: 1 = killed, 0 = free, otherwise the cyclic order.
    divisors: Vec<Int>,
    /// `None` when the presentation is already diagonal.
    u: Option<IntMatrix>,
    u_inv: Option<IntMatrix>,
}

#[derive(Debug)]
struct Inner {
    gens: usize,
    rels: Vec<Elem>,
    canon: OnceLock<Canon>,
}

#[derive(Clone, Debug)]
pub struct AbGroup(Arc<Inner>);

/// A group in diagonal form with the maps relating it to the original.
#[derive(Clone, Debug)]
pub struct Simplified {
    pub group: AbGroup,
    /// original coordinates → simplified coordinates
    pub proj: IntMatrix,
    /// simplified coordinates → original coordinates
    pub lift: IntMatrix,
}

fn diagonal_divisors(gens: usize, rels: &[Elem]) -> Option<Vec<Int>> {
    let mut d = zero_vec(gens);
    for r in rels {
        let nz: Vec<usize> = (0..gens).filter(|&i| !r[i].is_zero()).collect();
        match nz.as_slice() {
            [] => {}
            [i] => d[*i] = d[*i].gcd(&r[*i]),
            _ => return None,
        }
    }
    Some(d)
}

impl AbGroup {
    pub fn new(gens: usize, rels: Vec<Elem>) -> Result<Self> {
        for r in &rels {
            if r.len() != gens {
                return Err(Error::Shape(format!("relation of length {} for {gens} generators", r.len())));
            }
        }
        let rels = rels.into_iter().filter(|r| !is_zero_vec(r)).collect();
        Ok(AbGroup(Arc::new(Inner { gens, rels, canon: OnceLock::new() })))
    }

    pub fn from_i64(gens: usize, rels: &[&[i64]]) -> Result<Self> {
        Self::new(gens, rels.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, vec![]).unwrap()
    }

    pub fn cyclic(order: u64) -> Self {
        Self::from_divisors(&[Int::from(order)])
    }

    /// `⊕ Z/d_i`, with `d_i = 0` meaning a free summand.
    pub fn from_divisors(d: &[Int]) -> Self {
        let n = d.len();
        let rels = d
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| {
                let mut r = zero_vec(n);
                r[i] = x.abs();
                r
            })
            .collect();
        Self::new(n, rels).unwrap()
    }

    pub fn gens(&self) -> usize {
        self.0.gens
    }

    pub fn relations(&self) -> &[Elem] {
        &self.0.rels
    }

    fn canon(&self) -> &Canon {
        self.0.canon.get_or_init(|| {
            let g = self.0.gens;
            if let Some(divisors) = diagonal_divisors(g, &self.0.rels) {
                if is_chain(&divisors) {
                    return Canon { divisors, u: None, u_inv: None };
                }
            }
            let basis = matrix::row_lattice_basis(self.0.rels.clone(), g);
            let b = IntMatrix::from_cols(g, &basis);
            let s = smith(&b, true, false);
            let mut divisors = zero_vec(g);
            for i in 0..s.rank {
                divisors[i] = s.diag[i].clone();
            }
            Canon { divisors, u: s.u, u_inv: s.u_inv }
        })
    }

    fn to_snf(&self, x: &[Int]) -> Elem {
        match &self.canon().u {
            Some(u) => u.mul_vec(x),
            None => x.to_vec(),
        }
    }

    fn out_of_snf(&self, y: &[Int]) -> Elem {
        match &self.canon().u_inv {
            Some(ui) => ui.mul_vec(y),
            None => y.to_vec(),
        }
    }

    /// Canonical representative of the class of `x`.
    pub fn reduce(&self, x: &[Int]) -> Elem {
        assert_eq!(x.len(), self.gens(), "element has wrong length");
        let c = self.canon();
        let mut y = self.to_snf(x);
        for (yi, d) in y.iter_mut().zip(&c.divisors) {
            if !d.is_zero() {
                *yi = yi.mod_floor(d);
            }
        }
        self.out_of_snf(&y)
    }

    pub fn is_zero_elem(&self, x: &[Int]) -> bool {
        is_zero_vec(&self.reduce(x))
    }

    pub fn elem_eq(&self, a: &[Int], b: &[Int]) -> bool {
        self.is_zero_elem(&matrix::vec_sub(a, b))
    }

    pub fn zero_elem(&self) -> Elem {
        zero_vec(self.gens())
    }

    pub fn gen(&self, i: usize) -> Elem {
        matrix::unit_vec(self.gens(), i)
    }

    /// Free rank and invariant factors (each > 1, in divisibility order).
    pub fn invariants(&self) -> (usize, Vec<Int>) {
        let c = self.canon();
        let rank = c.divisors.iter().filter(|d| d.is_zero()).count();
        let tors: Vec<Int> = c.divisors.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
        (rank, tors)
    }

    pub fn rank(&self) -> usize {
        self.invariants().0
    }

    pub fn is_finite(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_trivial(&self) -> bool {
        let (r, t) = self.invariants();
        r == 0 && t.is_empty()
    }

    /// Order of the group, `None` if infinite.
    pub fn order(&self) -> Option<Int> {
        let (r, t) = self.invariants();
        (r == 0).then(|| t.iter().fold(Int::one(), |a, b| a * b))
    }

    pub fn is_isomorphic(&self, other: &AbGroup) -> bool {
        self.invariants() == other.invariants()
    }

    /// Diagonal form with only nontrivial cyclic summands.
    pub fn simplify(&self) -> Simplified {
        let c = self.canon();
        let keep: Vec<usize> = (0..self.gens()).filter(|&i| !c.divisors[i].is_one()).collect();
        let group = AbGroup::from_divisors(&keep.iter().map(|&i| c.divisors[i].clone()).collect::<Vec<_>>());
        let n = self.gens();
        let proj = match &c.u {
            Some(u) => u.select_rows(&keep),
            None => IntMatrix::identity(n).select_rows(&keep),
        };
        let lift = match &c.u_inv {
            Some(ui) => ui.select_cols(&keep),
            None => IntMatrix::identity(n).select_cols(&keep),
        };
        Simplified { group, proj, lift }
    }

    /// Divisors of a diagonal presentation (0 = free), if the presentation is one.
    pub fn diagonal(&self) -> Option<Vec<Int>> {
        diagonal_divisors(self.gens(), self.relations())
    }

    pub fn quotient(&self, subgens: &[Elem]) -> (AbGroup, AbHom) {
        let mut rels = self.0.rels.clone();
        rels.extend(subgens.iter().cloned());
        let q = AbGroup::new(self.gens(), rels).unwrap();
        let proj = AbHom { source: self.clone(), target: q.clone(), matrix: IntMatrix::identity(self.gens()) };
        (q, proj)
    }

    /// Quotient by the image of `action − id`.
    pub fn coinvariants(&self, action: &AbHom) -> Result<(AbGroup, AbHom)> {
        if !action.is_bijective() {
            return Err(Error::NotAutomorphism("coinvariant action is not bijective".into()));
        }
        let d = action.matrix.sub(&IntMatrix::identity(self.gens()));
        let cols: Vec<Elem> = (0..self.gens()).map(|j| d.col(j)).collect();
        Ok(self.quotient(&cols))
    }

    pub fn direct_sum(&self, other: &AbGroup) -> DirectSum {
        direct_sum(&[self.clone(), other.clone()])
    }

    /// All elements in canonical coordinates (finite groups only).
    pub fn elements(&self) -> Result<Vec<Elem>> {
        self.elements_capped(usize::MAX)
    }

    pub fn elements_capped(&self, cap: usize) -> Result<Vec<Elem>> {
        let s = self.simplify();
        let d = s.group.diagonal().unwrap();
        if d.iter().any(Zero::is_zero) {
            return Err(Error::Infinite);
        }
        let mut total: usize = 1;
        for x in &d {
            let x = x.to_usize().ok_or(Error::CapExceeded(cap))?;
            total = total.checked_mul(x).ok_or(Error::CapExceeded(cap))?;
            if total > cap {
                return Err(Error::CapExceeded(cap));
            }
        }
        let mut out = Vec::with_capacity(total);
        let mut idx = zero_vec(d.len());
        loop {
            out.push(self.reduce(&s.lift.mul_vec(&idx)));
            let mut k = 0;
            loop {
                if k == d.len() {
                    return Ok(out);
                }
                idx[k] += 1;
                if idx[k] < d[k] {
                    break;
                }
                idx[k] = Int::zero();
                k += 1;
            }
        }
    }

    /// Isomorphism to `other` when the invariants agree.
    pub fn iso_witness(&self, other: &AbGroup) -> Option<AbHom> {
        if !self.is_isomorphic(other) {
            return None;
        }
        let a = self.simplify();
        let b = other.simplify();
        let ad = a.group.diagonal().unwrap();
        let bd = b.group.diagonal().unwrap();
        let mut mid = IntMatrix::zeros(bd.len(), ad.len());
        for (i, (x, y)) in ad.iter().zip(&bd).enumerate() {
            if x != y {
                return None;
            }
            mid[(i, i)] = Int::one();
        }
        let m = b.lift.mul(&mid).mul(&a.proj);
        AbHom::new(self, other, m).ok()
    }
}

/// Non-unit divisors form a divisibility chain with free summands last.
fn is_chain(d: &[Int]) -> bool {
    let mut prev: Option<&Int> = None;
    for x in d.iter().filter(|x| !x.is_one()) {
        if let Some(p) = prev {
            if p.is_zero() && !x.is_zero() {
                return false;
            }
            if !p.is_zero() && !x.is_zero() && !x.is_multiple_of(p) {
                return false;
            }
        }
        prev = Some(x);
    }
    true
}

impl PartialEq for AbGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.gens() == other.gens() && self.relations() == other.relations())
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, t) = self.invariants();
        let mut parts: Vec<String> = t.iter().map(|d| format!("Z/{d}")).collect();
        parts.extend(std::iter::repeat_n("Z".to_string(), r));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Homomorphism given by its matrix on generators (columns = images).
#[derive(Clone, Debug)]
pub struct AbHom {
    pub source: AbGroup,
    pub target: AbGroup,
    pub matrix: IntMatrix,
}

impl AbHom {
    /// Checked constructor: every source relation must map into the target relations.
    pub fn new(source: &AbGroup, target: &AbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.gens() || matrix.cols() != source.gens() {
            return Err(Error::Shape(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.gens(),
                source.gens()
            )));
        }
        for r in source.relations() {
            if !target.is_zero_elem(&matrix.mul_vec(r)) {
                return Err(Error::IllDefined(format!("relation {:?} does not map to zero", fmt_vec(r))));
            }
        }
        Ok(AbHom { source: source.clone(), target: target.clone(), matrix })
    }

    pub fn unchecked(source: &AbGroup, target: &AbGroup, matrix: IntMatrix) -> Self {
        AbHom { source: source.clone(), target: target.clone(), matrix }
    }

    pub fn identity(g: &AbGroup) -> Self {
        Self::unchecked(g, g, IntMatrix::identity(g.gens()))
    }

    pub fn zero(source: &AbGroup, target: &AbGroup) -> Self {
        Self::unchecked(source, target, IntMatrix::zeros(target.gens(), source.gens()))
    }

    pub fn apply(&self, x: &[Int]) -> Elem {
        self.target.reduce(&self.matrix.mul_vec(x))
    }

    /// `self ∘ first`
    pub fn compose(&self, first: &AbHom) -> AbHom {
        Self::unchecked(&first.source, &self.target, self.matrix.mul(&first.matrix))
    }

    pub fn add(&self, other: &AbHom) -> AbHom {
        Self::unchecked(&self.source, &self.target, self.matrix.add(&other.matrix))
    }

    pub fn sub(&self, other: &AbHom) -> AbHom {
        Self::unchecked(&self.source, &self.target, self.matrix.sub(&other.matrix))
    }

    pub fn pow(&self, e: usize) -> AbHom {
        Self::unchecked(&self.source, &self.target, self.matrix.pow(e))
    }

    pub fn is_zero(&self) -> bool {
        (0..self.source.gens()).all(|j| self.target.is_zero_elem(&self.matrix.col(j)))
    }

    /// Equality as maps (generator images agree in the target).
    pub fn same_map(&self, other: &AbHom) -> bool {
        self.matrix.rows() == other.matrix.rows()
            && self.matrix.cols() == other.matrix.cols()
            && self.sub(other).is_zero()
    }

    fn target_relation_cols(&self) -> IntMatrix {
        let t = &self.target;
        let basis = matrix::row_lattice_basis(t.relations().to_vec(), t.gens());
        IntMatrix::from_cols(t.gens(), &basis)
    }

    /// Elements of the source (as a generating set) whose image vanishes.
    pub fn kernel_gens(&self) -> Vec<Elem> {
        let b = self.target_relation_cols();
        let k = matrix::kernel(&self.matrix.hstack(&b));
        let n = self.source.gens();
        (0..k.cols())
            .map(|j| k.col(j)[..n].to_vec())
            .filter(|x| !is_zero_vec(x))
            .collect()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_gens().iter().all(|x| self.source.is_zero_elem(x))
    }

    /// Preimage of `y` if one exists.
    pub fn preimage(&self, y: &[Int]) -> Option<Elem> {
        let b = self.target_relation_cols();
        let sol = matrix::solve(&self.matrix.hstack(&b), y)?;
        Some(self.source.reduce(&sol[..self.source.gens()]))
    }

    pub fn is_surjective(&self) -> bool {
        let b = self.target_relation_cols();
        let solver = matrix::Solver::new(&self.matrix.hstack(&b));
        (0..self.target.gens()).all(|i| solver.solve(&self.target.gen(i)).is_some())
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Option<AbHom> {
        if !self.is_injective() {
            return None;
        }
        let b = self.target_relation_cols();
        let solver = matrix::Solver::new(&self.matrix.hstack(&b));
        let n = self.source.gens();
        let mut cols = Vec::new();
        for i in 0..self.target.gens() {
            let s = solver.solve(&self.target.gen(i))?;
            cols.push(self.source.reduce(&s[..n]));
        }
        Some(Self::unchecked(&self.target, &self.source, IntMatrix::from_cols(n, &cols)))
    }
}

pub fn fmt_vec(v: &[Int]) -> String {
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", s.join(","))
}

/// Direct sum with canonical inclusions and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: AbGroup,
    pub offsets: Vec<usize>,
    pub inclusions: Vec<AbHom>,
    pub projections: Vec<AbHom>,
}

pub fn direct_sum(parts: &[AbGroup]) -> DirectSum {
    let total: usize = parts.iter().map(|g| g.gens()).sum();
    let mut offsets = Vec::new();
    let mut rels = Vec::new();
    let mut off = 0;
    for g in parts {
        offsets.push(off);
        for r in g.relations() {
            let mut row = zero_vec(total);
            row[off..off + g.gens()].clone_from_slice(r);
            rels.push(row);
        }
        off += g.gens();
    }
    let group = AbGroup::new(total, rels).unwrap();
    let mut inclusions = Vec::new();
    let mut projections = Vec::new();
    for (g, &o) in parts.iter().zip(&offsets) {
        let mut inc = IntMatrix::zeros(total, g.gens());
        let mut pr = IntMatrix::zeros(g.gens(), total);
        for i in 0..g.gens() {
            inc[(o + i, i)] = Int::one();
            pr[(i, o + i)] = Int::one();
        }
        inclusions.push(AbHom::unchecked(g, &group, inc));
        projections.push(AbHom::unchecked(&group, g, pr));
    }
    DirectSum { group, offsets, inclusions, projections }
}

/// Mixed-radix index of a generator tuple in a tensor product.
pub fn tensor_index(dims: &[usize], idx: &[usize]) -> usize {
    let mut k = 0;
    for (d, i) in dims.iter().zip(idx) {
        k = k * d + i;
    }
    k
}

/// Inverse of [`tensor_index`].
pub fn tensor_multi_index(dims: &[usize], mut k: usize) -> Vec<usize> {
    let mut idx = vec![0; dims.len()];
    for (slot, d) in dims.iter().enumerate().rev() {
        idx[slot] = k % d;
        k /= d;
    }
    idx
}

/// Tensor product of several groups on generator tuples, with relations from
/// each factor's relations tensored with the other factors' generators.
pub fn tensor_product(parts: &[AbGroup]) -> AbGroup {
    let dims: Vec<usize> = parts.iter().map(|g| g.gens()).collect();
    let total: usize = dims.iter().product();
    let mut rels = Vec::new();
    if total > 0 {
        for (slot, g) in parts.iter().enumerate() {
            for r in g.relations() {
                let mut other_dims = dims.clone();
                other_dims[slot] = 1;
                let count: usize = other_dims.iter().product();
                for k in 0..count {
                    let mut idx = tensor_multi_index(&other_dims, k);
                    let mut row = zero_vec(total);
                    for (i, c) in r.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        idx[slot] = i;
                        row[tensor_index(&dims, &idx)] = c.clone();
                    }
                    rels.push(row);
                }
            }
        }
    }
    AbGroup::new(total, rels).unwrap()
}

/// Pure tensor `x_0 ⊗ … ⊗ x_{k−1}` in the tensor-product coordinates.
pub fn pure_tensor_coords(dims: &[usize], elems: &[&[Int]]) -> Elem {
    let total: usize = dims.iter().product();
    let mut out = zero_vec(total);
    let supports: Vec<Vec<usize>> =
        elems.iter().map(|e| (0..e.len()).filter(|&i| !e[i].is_zero()).collect()).collect();
    if supports.iter().any(|s| s.is_empty()) {
        return out;
    }
    let mut pos = vec![0usize; dims.len()];
    loop {
        let idx: Vec<usize> = pos.iter().zip(&supports).map(|(p, s)| s[*p]).collect();
        let mut c = Int::one();
        for (slot, &i) in idx.iter().enumerate() {
            c *= &elems[slot][i];
        }
        out[tensor_index(dims, &idx)] += c;
        let mut k = dims.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            pos[k] += 1;
            if pos[k] < supports[k].len() {
                break;
            }
            pos[k] = 0;
        }
    }
}

/// Tensor product of maps `f_0 ⊗ … ⊗ f_{k−1}` as a matrix on tuple coordinates.
pub fn tensor_matrix(maps: &[&IntMatrix]) -> IntMatrix {
    let mut m = IntMatrix::identity(1);
    for f in maps {
        m = m.kron(f);
    }
    m
}
