//! Finite-dimensional associative unital algebras given by structure
//! constants, with designated idempotents and a validated radical.

mod iso;
mod presets;

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::exactla::{quotient_structure, Mat, Prime};

pub use iso::{algebra_iso_search, AlgIso};
pub use presets::{preset, Preset};

/// Global dimension, when known for a named algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlobalDim {
    Finite(usize),
    Infinite,
    Unknown,
}

/// Raw data for [`make_algebra`]. Structure constants are indexed
/// `c[(i * dim + j) * dim + k]`, giving `b_i b_j = sum_k c_ijk b_k`.
#[derive(Debug, Clone)]
pub struct AlgData {
    pub p: Prime,
    pub labels: Vec<String>,
    pub structconst: Vec<u64>,
    pub unit: Vec<u64>,
    pub idempotents: Vec<Vec<u64>>,
    pub idempotent_labels: Vec<String>,
    /// Columns span the Jacobson radical.
    pub radical: Mat,
}

struct AlgInner {
    data: AlgData,
    dim: usize,
    preset: Option<Preset>,
    global_dim: GlobalDim,
    /// Right multiplication `x -> x * b_i` as a dim x dim matrix.
    right_reg: Vec<Mat>,
    radical_basis: Vec<Vec<u64>>,
    arrows: Vec<Arrow>,
    basic: bool,
    opposite: OnceLock<Alg>,
}

/// A radical element spanning (with the others) a complement of rad^2 in
/// rad, living in `e_from * A * e_to`.
#[derive(Debug, Clone)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub element: Vec<u64>,
}

/// A validated algebra; cheap to clone.
#[derive(Clone)]
pub struct Alg(Arc<AlgInner>);

impl fmt::Debug for Alg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alg({}, dim {}, p = {})", self.name(), self.dim(), self.prime())
    }
}

impl PartialEq for Alg {
    fn eq(&self, other: &Alg) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.prime() == other.prime()
                && self.0.data.structconst == other.0.data.structconst
                && self.0.data.unit == other.0.data.unit)
    }
}
impl Eq for Alg {}

pub fn make_algebra(data: AlgData) -> Result<Alg> {
    Alg::build(data, None, GlobalDim::Unknown)
}

impl Alg {
    pub(crate) fn build(data: AlgData, preset: Option<Preset>, global_dim: GlobalDim) -> Result<Alg> {
        let p = data.p;
        let dim = data.labels.len();
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        if data.structconst.len() != dim * dim * dim {
            return Err(Error::InvalidAlgebra(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                data.structconst.len()
            )));
        }
        if data.unit.len() != dim
            || data.idempotents.iter().any(|e| e.len() != dim)
            || data.radical.rows() != dim
        {
            return Err(Error::InvalidAlgebra("vector length differs from dimension".into()));
        }
        if data.idempotent_labels.len() != data.idempotents.len() {
            return Err(Error::InvalidAlgebra("one label per idempotent required".into()));
        }
        let mut data = data;
        data.structconst.iter_mut().for_each(|x| *x %= p.get());
        data.unit.iter_mut().for_each(|x| *x %= p.get());
        let right_reg = (0..dim)
            .map(|i| Mat::from_fn(p, dim, dim, |k, j| data.structconst[(j * dim + i) * dim + k]))
            .collect();
        let radical = data.radical.column_span();
        let radical_basis = (0..radical.cols()).map(|j| radical.col(j)).collect();
        data.radical = radical;
        let mut inner = AlgInner {
            data,
            dim,
            preset,
            global_dim,
            right_reg,
            radical_basis,
            arrows: Vec::new(),
            basic: false,
            opposite: OnceLock::new(),
        };
        let alg = {
            validate(&inner)?;
            inner.arrows = compute_arrows(&inner);
            inner.basic = dim - inner.radical_basis.len() == inner.data.idempotents.len();
            Alg(Arc::new(inner))
        };
        Ok(alg)
    }

    pub fn prime(&self) -> Prime {
        self.0.data.p
    }
    pub fn dim(&self) -> usize {
        self.0.dim
    }
    pub fn labels(&self) -> &[String] {
        &self.0.data.labels
    }
    pub fn preset(&self) -> Option<Preset> {
        self.0.preset
    }
    pub fn name(&self) -> String {
        self.0.preset.map_or_else(|| "custom".to_string(), |p| p.name())
    }
    pub fn global_dim(&self) -> GlobalDim {
        self.0.global_dim
    }
    pub fn structconst(&self, i: usize, j: usize, k: usize) -> u64 {
        let d = self.0.dim;
        self.0.data.structconst[(i * d + j) * d + k]
    }
    pub fn structconsts(&self) -> &[u64] {
        &self.0.data.structconst
    }
    pub fn unit(&self) -> &[u64] {
        &self.0.data.unit
    }
    pub fn idempotents(&self) -> &[Vec<u64>] {
        &self.0.data.idempotents
    }
    pub fn idempotent_labels(&self) -> &[String] {
        &self.0.data.idempotent_labels
    }
    pub fn num_idempotents(&self) -> usize {
        self.0.data.idempotents.len()
    }
    pub fn radical(&self) -> &Mat {
        &self.0.data.radical
    }
    pub fn radical_basis(&self) -> &[Vec<u64>] {
        &self.0.radical_basis
    }
    pub fn arrows(&self) -> &[Arrow] {
        &self.0.arrows
    }
    /// `A / rad A` is spanned by the designated idempotents.
    pub fn is_basic(&self) -> bool {
        self.0.basic
    }
    pub fn is_semisimple(&self) -> bool {
        self.0.radical_basis.is_empty()
    }
    pub fn data(&self) -> &AlgData {
        &self.0.data
    }
    pub fn right_regular(&self, i: usize) -> &Mat {
        &self.0.right_reg[i]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    pub fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        mul_raw(self.prime(), self.dim(), &self.0.data.structconst, x, y)
    }

    /// Elements which, together with the idempotents when the algebra is
    /// basic, generate it as an algebra. Module maps only need to commute
    /// with these.
    pub fn generators(&self) -> Vec<Vec<u64>> {
        if self.is_basic() {
            let mut g: Vec<Vec<u64>> = self.idempotents().to_vec();
            g.extend(self.arrows().iter().map(|a| a.element.clone()));
            g
        } else {
            (0..self.dim()).map(|i| self.basis_vector(i)).collect()
        }
    }

    /// Structure constants transposed; same unit, idempotents, radical.
    pub fn opposite(&self) -> Alg {
        self.0
            .opposite
            .get_or_init(|| {
                let d = self.dim();
                let c = &self.0.data.structconst;
                let mut sc = vec![0; d * d * d];
                for i in 0..d {
                    for j in 0..d {
                        for k in 0..d {
                            sc[(i * d + j) * d + k] = c[(j * d + i) * d + k];
                        }
                    }
                }
                let data = AlgData {
                    structconst: sc,
                    ..self.0.data.clone()
                };
                let preset = self.0.preset.map(Preset::opposite);
                Alg::build(data, preset, self.0.global_dim).expect("opposite of a valid algebra is valid")
            })
            .clone()
    }

    /// The corner algebra `e A e` for `e` the sum of the designated
    /// idempotents with the given indices, together with the matrix whose
    /// columns embed its basis into `A`.
    pub fn corner(&self, which: &[usize]) -> Result<(Alg, Mat)> {
        let p = self.prime();
        let d = self.dim();
        if which.is_empty() || which.iter().any(|&j| j >= self.num_idempotents()) {
            return Err(Error::InvalidAlgebra(format!("bad idempotent selection {which:?}")));
        }
        let mut e = vec![0u64; d];
        for &j in which {
            for (x, y) in e.iter_mut().zip(&self.idempotents()[j]) {
                *x = p.add(*x, *y);
            }
        }
        let sandwich = Mat::from_cols(
            p,
            d,
            &(0..d)
                .map(|k| self.mul(&self.mul(&e, &self.basis_vector(k)), &e))
                .collect::<Vec<_>>(),
        );
        let (_, pivots) = sandwich.rref();
        let emb = sandwich.select_cols(&pivots);
        let n = emb.cols();
        let coords = emb.left_inverse().ok_or_else(|| Error::Internal("corner basis".into()))?;
        let to_local = |v: &[u64]| coords.mul(&Mat::column_vector(p, v)).col(0);
        let cols: Vec<Vec<u64>> = (0..n).map(|j| emb.col(j)).collect();
        let mut sc = vec![0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = to_local(&self.mul(&cols[i], &cols[j]));
                for k in 0..n {
                    sc[(i * n + j) * n + k] = prod[k];
                }
            }
        }
        let labels = pivots.iter().map(|&k| self.labels()[k].clone()).collect();
        let idempotents = which.iter().map(|&j| to_local(&self.idempotents()[j])).collect();
        let idempotent_labels = which.iter().map(|&j| self.idempotent_labels()[j].clone()).collect();
        let rad_cols: Vec<Vec<u64>> = self
            .radical_basis()
            .iter()
            .map(|r| to_local(&self.mul(&self.mul(&e, r), &e)))
            .collect();
        let radical = Mat::from_cols(p, n, &rad_cols);
        let data = AlgData {
            p,
            labels,
            structconst: sc,
            unit: to_local(&e),
            idempotents,
            idempotent_labels,
            radical,
        };
        Ok((Alg::build(data, None, GlobalDim::Unknown)?, emb))
    }
}

fn mul_raw(p: Prime, d: usize, c: &[u64], x: &[u64], y: &[u64]) -> Vec<u64> {
    let pm = p.get();
    let mut out = vec![0u64; d];
    for i in 0..d {
        if x[i] == 0 {
            continue;
        }
        for j in 0..d {
            if y[j] == 0 {
                continue;
            }
            let s = x[i] * y[j] % pm;
            let row = &c[(i * d + j) * d..(i * d + j + 1) * d];
            for k in 0..d {
                if row[k] != 0 {
                    out[k] = (out[k] + s * row[k]) % pm;
                }
            }
        }
    }
    out
}

fn validate(a: &AlgInner) -> Result<()> {
    let p = a.data.p;
    let d = a.dim;
    let c = &a.data.structconst;
    let mul = |x: &[u64], y: &[u64]| mul_raw(p, d, c, x, y);
    let basis: Vec<Vec<u64>> = (0..d)
        .map(|i| {
            let mut v = vec![0; d];
            v[i] = 1;
            v
        })
        .collect();
    let label = |i: usize| &a.data.labels[i];

    for i in 0..d {
        for j in 0..d {
            let ij = mul(&basis[i], &basis[j]);
            for k in 0..d {
                if mul(&ij, &basis[k]) != mul(&basis[i], &mul(&basis[j], &basis[k])) {
                    return Err(Error::InvalidAlgebra(format!(
                        "not associative on ({}, {}, {})",
                        label(i),
                        label(j),
                        label(k)
                    )));
                }
            }
        }
    }
    let u = &a.data.unit;
    for i in 0..d {
        if mul(u, &basis[i]) != basis[i] || mul(&basis[i], u) != basis[i] {
            return Err(Error::InvalidAlgebra(format!("unit fails on {}", label(i))));
        }
    }
    let es = &a.data.idempotents;
    let mut sum = vec![0u64; d];
    for (s, e) in es.iter().enumerate() {
        if mul(e, e) != *e || e.iter().all(|&x| x == 0) {
            return Err(Error::InvalidAlgebra(format!(
                "{} is not a nonzero idempotent",
                a.data.idempotent_labels[s]
            )));
        }
        for (t, f) in es.iter().enumerate() {
            if s != t && mul(e, f).iter().any(|&x| x != 0) {
                return Err(Error::InvalidAlgebra(format!(
                    "idempotents {} and {} are not orthogonal",
                    a.data.idempotent_labels[s], a.data.idempotent_labels[t]
                )));
            }
        }
        for (x, y) in sum.iter_mut().zip(e) {
            *x = p.add(*x, *y);
        }
    }
    if sum != *u {
        return Err(Error::InvalidAlgebra("idempotents do not sum to the unit".into()));
    }

    let rad = &a.data.radical;
    for (r_idx, r) in a.radical_basis.iter().enumerate() {
        for i in 0..d {
            for prod in [mul(r, &basis[i]), mul(&basis[i], r)] {
                if !rad.spans(&Mat::column_vector(p, &prod)) {
                    return Err(Error::InvalidAlgebra(format!(
                        "radical is not a two-sided ideal (radical vector {r_idx} times {})",
                        label(i)
                    )));
                }
            }
        }
    }
    // Nilpotency: J^k shrinks to zero within dim steps.
    let mut power = rad.clone();
    let mut steps = 0;
    while power.cols() > 0 {
        steps += 1;
        if steps > d + 1 {
            return Err(Error::InvalidAlgebra("radical is not nilpotent".into()));
        }
        let mut prods = Vec::new();
        for x in 0..power.cols() {
            for r in &a.radical_basis {
                prods.push(mul(&power.col(x), r));
            }
        }
        let next = Mat::from_cols(p, d, &prods).column_span();
        if next.cols() == power.cols() && power.cols() > 0 {
            return Err(Error::InvalidAlgebra("radical is not nilpotent".into()));
        }
        power = next;
    }
    // A / J must be semisimple: nondegenerate trace form of its regular
    // representation.
    let (proj, section) = quotient_structure(p, d, rad)?;
    let q = proj.rows();
    let lift = |j: usize| section.col(j);
    let reduce = |v: &[u64]| proj.mul(&Mat::column_vector(p, v)).col(0);
    let reg: Vec<Mat> = (0..q)
        .map(|i| {
            // right multiplication by the i-th quotient basis element
            let cols: Vec<Vec<u64>> = (0..q).map(|j| reduce(&mul(&lift(j), &lift(i)))).collect();
            Mat::from_cols(p, q, &cols)
        })
        .collect();
    let trace = |m: &Mat| (0..m.rows()).fold(0, |acc, i| p.add(acc, m.get(i, i)));
    let form = Mat::from_fn(p, q, q, |i, j| trace(&reg[i].mul(&reg[j])));
    if form.rank() < q {
        return Err(Error::InvalidAlgebra("radical quotient not semisimple".into()));
    }
    Ok(())
}

fn compute_arrows(a: &AlgInner) -> Vec<Arrow> {
    let p = a.data.p;
    let d = a.dim;
    let c = &a.data.structconst;
    let mul = |x: &[u64], y: &[u64]| mul_raw(p, d, c, x, y);
    let rad = &a.radical_basis;
    let mut rad2 = Vec::new();
    for x in rad {
        for y in rad {
            rad2.push(mul(x, y));
        }
    }
    let es = &a.data.idempotents;
    let mut arrows = Vec::new();
    for (i, ei) in es.iter().enumerate() {
        for (j, ej) in es.iter().enumerate() {
            let sandwich = |v: &Vec<u64>| mul(&mul(ei, v), ej);
            let mut span = Mat::from_cols(p, d, &rad2.iter().map(sandwich).collect::<Vec<_>>()).column_span();
            for r in rad {
                let v = sandwich(r);
                let vm = Mat::column_vector(p, &v);
                if v.iter().any(|&x| x != 0) && !span.spans(&vm) {
                    span = Mat::hstack(p, d, &[&span, &vm]);
                    arrows.push(Arrow {
                        from: i,
                        to: j,
                        element: v,
                    });
                }
            }
        }
    }
    arrows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn ground_field_is_valid() {
        let data = AlgData {
            p: p(5),
            labels: vec!["1".into()],
            structconst: vec![1],
            unit: vec![1],
            idempotents: vec![vec![1]],
            idempotent_labels: vec!["1".into()],
            radical: Mat::zeros(p(5), 1, 0),
        };
        let a = make_algebra(data).unwrap();
        assert_eq!(a.dim(), 1);
        assert!(a.is_semisimple());
    }

    #[test]
    fn wrong_radical_is_rejected() {
        let l1 = preset(Preset::Lambda1, p(101)).unwrap();
        let mut data = l1.data().clone();
        // Drop E23 (basis index 4): keep E12, E13.
        let cols = vec![l1.basis_vector(1), l1.basis_vector(2)];
        data.radical = Mat::from_cols(p(101), 6, &cols);
        let err = make_algebra(data).unwrap_err();
        assert_eq!(err, Error::InvalidAlgebra("radical quotient not semisimple".into()));
    }

    #[test]
    fn non_associative_is_rejected_with_witness() {
        let l1 = preset(Preset::Lambda1, p(7)).unwrap();
        let mut data = l1.data().clone();
        // E12 * E23 := 2 E13 breaks nothing alone, but E11 * E12 := 0 does.
        let d = 6;
        data.structconst[d + 1] = 0;
        let err = make_algebra(data).unwrap_err();
        assert!(matches!(err, Error::InvalidAlgebra(ref m) if m.contains("associative") || m.contains("unit")));
    }

    #[test]
    fn radical_must_be_an_ideal() {
        let l1 = preset(Preset::Lambda1, p(7)).unwrap();
        let mut data = l1.data().clone();
        // span{E12} alone: E12 * E23 = E13 escapes.
        data.radical = Mat::from_cols(p(7), 6, &[l1.basis_vector(1)]);
        let err = make_algebra(data).unwrap_err();
        assert!(matches!(err, Error::InvalidAlgebra(ref m) if m.contains("ideal")));
    }

    #[test]
    fn opposite_is_an_involution() {
        for pre in [Preset::Lambda1, Preset::Lambda2, Preset::Lambda3, Preset::TruncPoly(3), Preset::GroundField] {
            let a = preset(pre, p(3)).unwrap();
            let oo = a.opposite().opposite();
            assert_eq!(oo.structconsts(), a.structconsts());
        }
        let t = preset(Preset::TruncPoly(4), p(5)).unwrap();
        assert_eq!(t.opposite().structconsts(), t.structconsts());
        let k = preset(Preset::GroundField, p(5)).unwrap();
        assert_eq!(k.opposite(), k);
    }

    #[test]
    fn arrows_of_the_presets() {
        let l1 = preset(Preset::Lambda1, p(101)).unwrap();
        let arrows: Vec<(usize, usize)> = l1.arrows().iter().map(|a| (a.from, a.to)).collect();
        assert_eq!(arrows, vec![(0, 1), (1, 2)]);
        assert!(l1.is_basic());
        let t = preset(Preset::TruncPoly(3), p(2)).unwrap();
        assert_eq!(t.arrows().len(), 1);
    }

    #[test]
    fn corner_algebra() {
        let l1 = preset(Preset::Lambda1, p(101)).unwrap();
        let (g, emb) = l1.corner(&[0]).unwrap();
        assert_eq!(g.dim(), 1);
        assert_eq!(emb.col(0), l1.basis_vector(0));
        let (g, _) = l1.corner(&[0, 1, 2]).unwrap();
        assert_eq!(g.dim(), 6);
        let (g, _) = l1.corner(&[0, 2]).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.radical_basis().len(), 1);
    }
}
