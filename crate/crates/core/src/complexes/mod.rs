//! Bounded cochain complexes of modules, chain maps and homotopies, the
//! Hom complex, and the triangulated structure of the homotopy category.
//!
//! Sign conventions: `d` of `Σ^k X` is `(-1)^k d_X` with `(Σ^k X)^n =
//! X^(n+k)`; the cone of `f: X -> Y` is `X^(n+1) ⊕ Y^n` with differential
//! `[[-d_X, 0], [f, d_Y]]`; the Hom complex differential is
//! `D(f) = d ∘ f - (-1)^n f ∘ d`.

mod homcx;
mod maps;
mod random;
mod split;
mod tri;

use std::fmt;
use std::sync::Arc;

use crate::algebra::Alg;
use crate::error::{Error, Result};
use crate::exactla::{quotient_structure, Mat, Prime};
use crate::modcat::{direct_sum, zero, MMap, Mod};

pub use homcx::{factor_through, hom_complex, k_inverse, null_homotopy, HomCohomology, HomComplex};
pub use maps::{CMap, GMap, Htp, KIso};
pub use random::{random_chain_map, random_complex, random_cocycle, RandomSpec};
pub use split::{semisimple_split, SemisimpleSplit};
pub use tri::{
    ambiguity_triangle, certify_against_cone, cone, fill_in, fillin_ambiguity, octahedron, rotate, split_seq_to_triangle, sum_triangles,
    ConeIso, FillIn, Oct, SplitTriangle, Tri, TriCert,
};

struct CxInner {
    alg: Alg,
    lo: i64,
    objects: Vec<Mod>,
    /// `diffs[k]` is `d^(lo+k)`, a `dim X^(lo+k+1) x dim X^(lo+k)` matrix.
    diffs: Vec<Mat>,
    zero: Mod,
}

/// A bounded complex, zero outside `[lo, hi]`; cheap to clone.
#[derive(Clone)]
pub struct Cx(Arc<CxInner>);

impl fmt::Debug for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cx[{}..={}] dims {:?}", self.lo(), self.hi(), self.dims())
    }
}

impl PartialEq for Cx {
    fn eq(&self, other: &Cx) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.lo() == other.lo() && self.0.objects == other.0.objects && self.0.diffs == other.0.diffs)
    }
}
impl Eq for Cx {}

/// Builds and validates a complex with `objects[k]` in degree `lo + k` and
/// `diffs[k] = d^(lo+k)`; the last differential may be omitted.
pub fn make_complex(alg: &Alg, lo: i64, objects: Vec<Mod>, diffs: Vec<Mat>) -> Result<Cx> {
    let x = Cx::build(alg, lo, objects, diffs)?;
    x.validate()?;
    Ok(x)
}

/// `m` placed in degree `deg`.
pub fn stalk(m: &Mod, deg: i64) -> Cx {
    Cx::build(m.alg(), deg, vec![m.clone()], vec![]).expect("stalk")
}

impl Cx {
    pub(crate) fn build(alg: &Alg, lo: i64, objects: Vec<Mod>, mut diffs: Vec<Mat>) -> Result<Cx> {
        let p = alg.prime();
        if objects.iter().any(|m| m.alg() != alg) {
            return Err(Error::AlgebraMismatch);
        }
        if diffs.len() + 1 == objects.len() {
            // d^hi = 0 is implicit.
        } else if diffs.len() == objects.len() && !objects.is_empty() {
            if !diffs.last().expect("nonempty").is_zero() {
                return Err(Error::InvalidComplex("last differential leaves the support".into()));
            }
            diffs.pop();
        } else if !(objects.is_empty() && diffs.is_empty()) {
            return Err(Error::InvalidComplex(format!(
                "{} objects need {} differentials, got {}",
                objects.len(),
                objects.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.shape() != (objects[k + 1].dim(), objects[k].dim()) || d.prime() != p {
                return Err(Error::InvalidComplex(format!("differential in degree {} has wrong shape", lo + k as i64)));
            }
        }
        Ok(Cx(Arc::new(CxInner {
            alg: alg.clone(),
            lo,
            objects,
            diffs,
            zero: zero(alg),
        })))
    }

    pub fn zero_complex(alg: &Alg) -> Cx {
        Cx::build(alg, 0, vec![], vec![]).expect("zero complex")
    }

    /// Checks module maps and `d ∘ d = 0`, reporting the first bad degree.
    pub fn validate(&self) -> Result<()> {
        for n in self.lo()..self.hi() {
            MMap::new(self.obj(n), self.obj(n + 1), self.d(n))
                .map_err(|e| Error::InvalidComplex(format!("d^{n} is not a module map: {e}")))?;
        }
        for n in self.lo()..self.hi() - 1 {
            if !self.d(n + 1).mul(&self.d(n)).is_zero() {
                return Err(Error::InvalidComplex(format!("d^{} ∘ d^{n} ≠ 0", n + 1)));
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
    pub fn lo(&self) -> i64 {
        self.0.lo
    }
    /// Top of the support; `lo - 1` for the empty complex.
    pub fn hi(&self) -> i64 {
        self.0.lo + self.0.objects.len() as i64 - 1
    }
    pub fn len(&self) -> usize {
        self.0.objects.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.objects.is_empty()
    }
    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo()..=self.hi()
    }

    pub fn obj(&self, n: i64) -> &Mod {
        if n < self.lo() || n > self.hi() {
            &self.0.zero
        } else {
            &self.0.objects[(n - self.lo()) as usize]
        }
    }

    pub fn dim(&self, n: i64) -> usize {
        self.obj(n).dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.0.objects.iter().map(Mod::dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims().iter().sum()
    }

    /// `d^n : X^n -> X^(n+1)`.
    pub fn d(&self, n: i64) -> Mat {
        if n >= self.lo() && n < self.hi() {
            self.0.diffs[(n - self.lo()) as usize].clone()
        } else {
            Mat::zeros(self.prime(), self.dim(n + 1), self.dim(n))
        }
    }

    pub fn d_map(&self, n: i64) -> MMap {
        MMap::new_unchecked(self.obj(n), self.obj(n + 1), self.d(n))
    }

    /// True when every component is zero.
    pub fn is_zero(&self) -> bool {
        self.0.objects.iter().all(Mod::is_zero)
    }

    /// Drops zero components at both ends.
    pub fn trimmed(&self) -> Cx {
        let degs: Vec<i64> = self.degrees().filter(|&n| self.dim(n) > 0).collect();
        match (degs.first(), degs.last()) {
            (Some(&a), Some(&b)) if a != self.lo() || b != self.hi() => self.window(a, b),
            (None, _) => Cx::zero_complex(self.alg()),
            _ => self.clone(),
        }
    }

    /// Brutal restriction to degrees `[a, b]` (differentials leaving the
    /// window are dropped; callers must ensure this is a complex).
    pub(crate) fn window(&self, a: i64, b: i64) -> Cx {
        if a > b {
            return Cx::zero_complex(self.alg());
        }
        let objects = (a..=b).map(|n| self.obj(n).clone()).collect();
        let diffs = (a..b).map(|n| self.d(n)).collect();
        Cx::build(self.alg(), a, objects, diffs).expect("window")
    }

    /// `Σ^k X`: `(Σ^k X)^n = X^(n+k)`, differential times `(-1)^k`.
    pub fn shift(&self, k: i64) -> Cx {
        if k == 0 {
            return self.clone();
        }
        let sign = self.prime().sign(k);
        let diffs = self.0.diffs.iter().map(|d| d.scale(sign)).collect();
        Cx::build(self.alg(), self.lo() - k, self.0.objects.clone(), diffs).expect("shift")
    }

    /// Degreewise direct sum with the canonical inclusions and projections.
    pub fn direct_sum(alg: &Alg, parts: &[Cx]) -> Result<(Cx, Vec<CMap>, Vec<CMap>)> {
        let p = alg.prime();
        let nonempty: Vec<&Cx> = parts.iter().filter(|x| !x.is_empty()).collect();
        let (lo, hi) = match (nonempty.iter().map(|x| x.lo()).min(), nonempty.iter().map(|x| x.hi()).max()) {
            (Some(a), Some(b)) => (a, b),
            _ => (0, -1),
        };
        let mut objects = Vec::new();
        let mut sums = Vec::new();
        for n in lo..=hi {
            let mods: Vec<Mod> = parts.iter().map(|x| x.obj(n).clone()).collect();
            let s = direct_sum(alg, &mods)?;
            objects.push(s.module.clone());
            sums.push(s);
        }
        let diffs = (lo..hi)
            .map(|n| {
                let blocks: Vec<Mat> = parts.iter().map(|x| x.d(n)).collect();
                let refs: Vec<&Mat> = blocks.iter().collect();
                Mat::block_diag(p, &refs)
            })
            .collect();
        let total = Cx::build(alg, lo, objects, diffs)?;
        let mut incs = Vec::new();
        let mut projs = Vec::new();
        for (k, x) in parts.iter().enumerate() {
            let inc: Vec<Mat> = (lo..=hi).map(|n| sums[(n - lo) as usize].injections[k].matrix().clone()).collect();
            let pr: Vec<Mat> = (lo..=hi).map(|n| sums[(n - lo) as usize].projections[k].matrix().clone()).collect();
            incs.push(CMap::from_fn(x, &total, |n| inc[(n - lo) as usize].clone()));
            projs.push(CMap::from_fn(&total, x, |n| pr[(n - lo) as usize].clone()));
        }
        Ok((total, incs, projs))
    }

    /// Cohomology in degree `n` with the data needed for induced maps.
    pub fn cohomology_at(&self, n: i64) -> Cohom {
        let p = self.prime();
        let x = self.obj(n);
        let cycles = self.d(n).kernel_basis();
        let (z, _) = x.submodule_with_basis(&cycles).expect("cycles form a submodule");
        let left = if cycles.cols() > 0 {
            cycles.left_inverse().expect("basis")
        } else {
            Mat::zeros(p, 0, x.dim())
        };
        let bounds = left.mul(&self.d(n - 1)).image_basis();
        let (proj, section) = quotient_structure(p, cycles.cols(), &bounds).expect("shapes");
        let (h, _) = z.quotient(&bounds).expect("boundaries form a submodule");
        Cohom {
            degree: n,
            module: h,
            cycles,
            cycle_coords: left,
            proj,
            section,
        }
    }

    /// `H^n` in every degree of the support.
    pub fn cohomology(&self) -> Vec<(i64, Mod)> {
        self.degrees().map(|n| (n, self.cohomology_at(n).module)).collect()
    }

    pub fn cohomology_dims(&self) -> Vec<(i64, usize)> {
        self.degrees().map(|n| (n, self.cohomology_at(n).module.dim())).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees().all(|n| self.cohomology_at(n).module.dim() == 0)
    }

    /// Smart truncation `τ≤n`: unchanged below `n`, `ker d^n` in degree `n`,
    /// zero above.
    pub fn truncate(&self, n: i64) -> Cx {
        if n >= self.hi() {
            return self.clone();
        }
        if n < self.lo() {
            return Cx::zero_complex(self.alg());
        }
        let cycles = self.d(n).kernel_basis();
        let (z, inc) = self.obj(n).submodule_with_basis(&cycles).expect("cycles");
        let mut objects: Vec<Mod> = (self.lo()..n).map(|k| self.obj(k).clone()).collect();
        objects.push(z);
        let mut diffs: Vec<Mat> = (self.lo()..n - 1).map(|k| self.d(k)).collect();
        if n > self.lo() {
            let left = inc.matrix().left_inverse().unwrap_or_else(|| Mat::zeros(self.prime(), 0, self.dim(n)));
            diffs.push(left.mul(&self.d(n - 1)));
        }
        Cx::build(self.alg(), self.lo(), objects, diffs).expect("truncation")
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|n| if n.rem_euclid(2) == 0 { self.dim(n) as i64 } else { -(self.dim(n) as i64) })
            .sum()
    }
}

/// `H^n X = Z^n / B^n`, with the coordinates needed to push maps through.
#[derive(Debug, Clone)]
pub struct Cohom {
    pub degree: i64,
    pub module: Mod,
    /// Columns: a basis of `Z^n` inside `X^n`.
    pub cycles: Mat,
    /// Left inverse of `cycles`.
    pub cycle_coords: Mat,
    /// `Z^n -> H^n` in cycle coordinates.
    pub proj: Mat,
    /// A section `H^n -> Z^n`.
    pub section: Mat,
}

impl Cohom {
    /// Representatives in `X^n` of the basis of `H^n`.
    pub fn representatives(&self) -> Mat {
        self.cycles.mul(&self.section)
    }

    /// Class of a cycle given in `X^n` coordinates.
    pub fn class_of(&self, v: &Mat) -> Mat {
        self.proj.mul(&self.cycle_coords.mul(v))
    }
}

/// Matrix of `H^n(f)`.
pub fn induced_map(f: &CMap, n: i64) -> Mat {
    let hs = f.src().cohomology_at(n);
    let ht = f.dst().cohomology_at(n);
    ht.class_of(&f.comp(n).mul(&hs.representatives()))
}

/// True when `f` induces isomorphisms on all cohomology.
pub fn is_quasi_iso(f: &CMap) -> bool {
    let lo = f.src().lo().min(f.dst().lo());
    let hi = f.src().hi().max(f.dst().hi());
    (lo..=hi).all(|n| {
        let m = induced_map(f, n);
        m.rows() == m.cols() && m.is_invertible()
    })
}
