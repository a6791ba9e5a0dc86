//! Finite-dimensional right modules over an [`Alg`], their homomorphisms,
//! and the abelian structure of the module category.
//!
//! A module of dimension `d` is stored as one `d x d` matrix per algebra
//! basis element: column vectors `v` are acted on by `v . b_i = A_i v`.
//! Right-action compatibility then reads `A_j A_i = sum_k c_ijk A_k`.

mod classify;
mod decompose;
mod hom;
mod quiver;
mod structure;

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::algebra::Alg;
use crate::error::{Error, Result};
use crate::exactla::{quotient_structure, Mat, Prime};

pub use classify::{classify_indecomposables, indecomposables, module_label, nakayama_indecomposables, submodules};
pub use decompose::{
    decompose, decompose_seeded, is_indecomposable, is_isomorphic, is_isomorphic_seeded, split_fully, Summand,
};
pub use hom::{hom_basis, hom_space, HomBasis};
pub use quiver::{ar_quiver, rad_hom, Quiver, QuiverArrow, QuiverVertex};
pub(crate) use quiver::{quiver_from_radical, radical_table};
pub use structure::{
    direct_sum, injective_envelope, is_injective, is_projective, kci, lift, projective_cover, socle, top, DirectSum,
    Kci,
};

struct ModInner {
    alg: Alg,
    dim: usize,
    action: Vec<Mat>,
    frame: OnceLock<hom::Frame>,
}

/// A finite-dimensional right module; cheap to clone.
#[derive(Clone)]
pub struct Mod(Arc<ModInner>);

impl fmt::Debug for Mod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mod(dim {} over {}, dimvec {:?})", self.dim(), self.alg().name(), self.dim_vector())
    }
}

impl PartialEq for Mod {
    fn eq(&self, other: &Mod) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.dim() == other.dim() && self.0.action == other.0.action && self.alg() == other.alg())
    }
}
impl Eq for Mod {}

/// Validates and builds a module from one action matrix per basis element.
pub fn make_module(alg: &Alg, action: Vec<Mat>) -> Result<Mod> {
    let m = Mod::from_action_unchecked(alg, action)?;
    m.validate()?;
    Ok(m)
}

impl Mod {
    pub(crate) fn from_action_unchecked(alg: &Alg, action: Vec<Mat>) -> Result<Mod> {
        if action.len() != alg.dim() {
            return Err(Error::InvalidModule(format!(
                "{} action matrices for an algebra of dimension {}",
                action.len(),
                alg.dim()
            )));
        }
        let dim = action.first().map_or(0, |a| a.rows());
        if action.iter().any(|a| a.shape() != (dim, dim) || a.prime() != alg.prime()) {
            return Err(Error::InvalidModule("action matrices must be square of equal size".into()));
        }
        Ok(Mod(Arc::new(ModInner {
            alg: alg.clone(),
            dim,
            action,
            frame: OnceLock::new(),
        })))
    }

    fn validate(&self) -> Result<()> {
        let a = self.alg();
        let d = a.dim();
        if self.act(a.unit()) != Mat::identity(a.prime(), self.dim()) {
            return Err(Error::InvalidModule("unit does not act as the identity".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let lhs = self.0.action[j].mul(&self.0.action[i]);
                let mut rhs = Mat::zeros(a.prime(), self.dim(), self.dim());
                for k in 0..d {
                    rhs.axpy(a.structconst(i, j, k), &self.0.action[k]);
                }
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!(
                        "action incompatible with the product {} * {}",
                        a.labels()[i],
                        a.labels()[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn alg(&self) -> &Alg {
        &self.0.alg
    }
    pub fn prime(&self) -> Prime {
        self.0.alg.prime()
    }
    pub fn dim(&self) -> usize {
        self.0.dim
    }
    pub fn is_zero(&self) -> bool {
        self.0.dim == 0
    }
    pub fn action(&self) -> &[Mat] {
        &self.0.action
    }

    pub(crate) fn frame(&self) -> &hom::Frame {
        self.0.frame.get_or_init(|| hom::Frame::new(self))
    }

    pub(crate) fn ptr_id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Matrix of the action of an algebra element given in coordinates.
    pub fn act(&self, x: &[u64]) -> Mat {
        let mut m = Mat::zeros(self.prime(), self.dim(), self.dim());
        for (k, &c) in x.iter().enumerate() {
            if c != 0 {
                m.axpy(c, &self.0.action[k]);
            }
        }
        m
    }

    /// `dim M e_j` for each designated idempotent.
    pub fn dim_vector(&self) -> Vec<usize> {
        self.alg().idempotents().iter().map(|e| self.act(e).rank()).collect()
    }

    pub fn same_alg(&self, other: &Mod) -> Result<()> {
        if self.alg() == other.alg() {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// The vector-space dual, a right module over the opposite algebra.
    pub fn dual(&self) -> Mod {
        let op = self.alg().opposite();
        let action = self.0.action.iter().map(Mat::transpose).collect();
        Mod::from_action_unchecked(&op, action).expect("dual shapes")
    }

    /// Dual of a module over the opposite algebra, read back over `alg`.
    pub(crate) fn dual_over(&self, alg: &Alg) -> Mod {
        let action = self.0.action.iter().map(Mat::transpose).collect();
        Mod::from_action_unchecked(alg, action).expect("dual shapes")
    }

    /// Restriction of the action to an invariant subspace spanned by the
    /// (independent) columns of `basis`, with the inclusion map.
    pub fn submodule(&self, basis: &Mat) -> Result<(Mod, MMap)> {
        if basis.rows() != self.dim() {
            return Err(Error::Dimension("submodule basis".into()));
        }
        self.submodule_with_basis(&basis.column_span())
    }

    /// Quotient by the invariant subspace spanned by the columns of `sub`,
    /// with the projection.
    pub fn quotient(&self, sub: &Mat) -> Result<(Mod, MMap)> {
        let (proj, section) = quotient_structure(self.prime(), self.dim(), sub)?;
        let mut action = Vec::with_capacity(self.0.action.len());
        for a in &self.0.action {
            if sub.cols() > 0 && !proj.mul(&a.mul(sub)).is_zero() {
                return Err(Error::InvalidModule("subspace is not invariant".into()));
            }
            action.push(proj.mul(a).mul(&section));
        }
        let q = Mod::from_action_unchecked(self.alg(), action)?;
        let pi = MMap::new_unchecked(self, &q, proj);
        Ok((q, pi))
    }

    /// Smallest submodule containing the columns of `gens`, as a basis.
    pub fn generated_by(&self, gens: &Mat) -> Mat {
        let p = self.prime();
        let mut span = gens.column_span();
        loop {
            let mut parts = vec![span.clone()];
            for a in &self.0.action {
                parts.push(a.mul(&span));
            }
            let refs: Vec<&Mat> = parts.iter().collect();
            let next = Mat::hstack(p, self.dim(), &refs).column_span();
            if next.cols() == span.cols() {
                return span;
            }
            span = next;
        }
    }
}

/// A homomorphism of right modules; `matrix` is `dim(dst) x dim(src)`.
#[derive(Clone, PartialEq, Eq)]
pub struct MMap {
    src: Mod,
    dst: Mod,
    matrix: Mat,
}

impl fmt::Debug for MMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MMap({} -> {}) {:?}", self.src.dim(), self.dst.dim(), self.matrix)
    }
}

impl MMap {
    pub fn new(src: &Mod, dst: &Mod, matrix: Mat) -> Result<MMap> {
        src.same_alg(dst)?;
        if matrix.shape() != (dst.dim(), src.dim()) {
            return Err(Error::InvalidMap(format!(
                "matrix is {:?}, expected {}x{}",
                matrix.shape(),
                dst.dim(),
                src.dim()
            )));
        }
        for g in src.alg().generators() {
            if matrix.mul(&src.act(&g)) != dst.act(&g).mul(&matrix) {
                return Err(Error::InvalidMap("does not commute with the action".into()));
            }
        }
        Ok(MMap::new_unchecked(src, dst, matrix))
    }

    pub(crate) fn new_unchecked(src: &Mod, dst: &Mod, matrix: Mat) -> MMap {
        debug_assert_eq!(matrix.shape(), (dst.dim(), src.dim()));
        MMap {
            src: src.clone(),
            dst: dst.clone(),
            matrix,
        }
    }

    pub fn identity(m: &Mod) -> MMap {
        MMap::new_unchecked(m, m, Mat::identity(m.prime(), m.dim()))
    }

    pub fn zero(src: &Mod, dst: &Mod) -> MMap {
        MMap::new_unchecked(src, dst, Mat::zeros(src.prime(), dst.dim(), src.dim()))
    }

    pub fn src(&self) -> &Mod {
        &self.src
    }
    pub fn dst(&self) -> &Mod {
        &self.dst
    }
    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }
    pub fn into_matrix(self) -> Mat {
        self.matrix
    }
    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &MMap) -> MMap {
        assert_eq!(first.dst.dim(), self.src.dim(), "composable");
        MMap::new_unchecked(&first.src, &self.dst, self.matrix.mul(&first.matrix))
    }

    pub fn add(&self, other: &MMap) -> MMap {
        MMap::new_unchecked(&self.src, &self.dst, self.matrix.add(&other.matrix))
    }

    pub fn sub(&self, other: &MMap) -> MMap {
        MMap::new_unchecked(&self.src, &self.dst, self.matrix.sub(&other.matrix))
    }

    pub fn scale(&self, c: u64) -> MMap {
        MMap::new_unchecked(&self.src, &self.dst, self.matrix.scale(c))
    }

    pub fn is_iso(&self) -> bool {
        self.matrix.is_invertible()
    }

    pub fn inverse(&self) -> Option<MMap> {
        self.matrix
            .inverse()
            .map(|inv| MMap::new_unchecked(&self.dst, &self.src, inv))
    }

    /// Dual map between the duals, over the opposite algebra.
    pub fn dual(&self) -> MMap {
        MMap::new_unchecked(&self.dst.dual(), &self.src.dual(), self.matrix.transpose())
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

pub fn zero(alg: &Alg) -> Mod {
    let p = alg.prime();
    Mod::from_action_unchecked(alg, vec![Mat::zeros(p, 0, 0); alg.dim()]).expect("zero module")
}

pub fn regular(alg: &Alg) -> Mod {
    let action = (0..alg.dim()).map(|i| alg.right_regular(i).clone()).collect();
    Mod::from_action_unchecked(alg, action).expect("regular module")
}

/// Columns spanning `e_j A` inside the regular module: the nonzero products
/// `e_j b_k` at pivot positions (for matrix-unit algebras these are basis
/// elements of row `j`).
pub fn proj_basis(alg: &Alg, j: usize) -> Mat {
    let e = &alg.idempotents()[j];
    let cols: Vec<Vec<u64>> = (0..alg.dim()).map(|k| alg.mul(e, &alg.basis_vector(k))).collect();
    Mat::from_cols(alg.prime(), alg.dim(), &cols).image_basis()
}

/// Indecomposable projective `e_j A`.
pub fn proj(alg: &Alg, j: usize) -> Mod {
    let basis = proj_basis(alg, j);
    regular(alg).submodule_keep_basis(&basis)
}

/// Simple top of `proj(alg, j)`.
pub fn simple(alg: &Alg, j: usize) -> Mod {
    top(&proj(alg, j)).0
}

/// Indecomposable injective: the dual of the projective `A e_j` of the
/// opposite algebra.
pub fn injective(alg: &Alg, j: usize) -> Mod {
    proj(&alg.opposite(), j).dual_over(alg)
}

impl Mod {
    /// Like [`Mod::submodule`] but keeps the given independent columns as
    /// the basis.
    pub fn submodule_with_basis(&self, basis: &Mat) -> Result<(Mod, MMap)> {
        if basis.cols() == 0 {
            let z = zero(self.alg());
            return Ok((z.clone(), MMap::zero(&z, self)));
        }
        let left = basis
            .left_inverse()
            .ok_or_else(|| Error::InvalidModule("basis columns are dependent".into()))?;
        let mut action = Vec::with_capacity(self.0.action.len());
        for a in &self.0.action {
            let img = a.mul(basis);
            let restricted = left.mul(&img);
            if basis.mul(&restricted) != img {
                return Err(Error::InvalidModule("subspace is not invariant".into()));
            }
            action.push(restricted);
        }
        let sub = Mod::from_action_unchecked(self.alg(), action)?;
        let inc = MMap::new_unchecked(&sub, self, basis.clone());
        Ok((sub, inc))
    }

    pub(crate) fn submodule_keep_basis(&self, basis: &Mat) -> Mod {
        self.submodule_with_basis(basis).expect("invariant subspace").0
    }
}
