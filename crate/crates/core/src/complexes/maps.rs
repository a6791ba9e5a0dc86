use std::fmt;

use crate::error::{Error, Result};
use crate::exactla::Mat;
use crate::modcat::MMap;

use super::Cx;

/// A graded map of degree `deg`: components `X^i -> Y^(i+deg)` for `i` in
/// the support of `X`. These are the elements of the Hom complex.
#[derive(Clone)]
pub struct GMap {
    src: Cx,
    dst: Cx,
    deg: i64,
    comps: Vec<Mat>,
}

impl fmt::Debug for GMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GMap(deg {}, {:?} -> {:?})", self.deg, self.src, self.dst)
    }
}

impl PartialEq for GMap {
    fn eq(&self, other: &GMap) -> bool {
        self.deg == other.deg && self.src == other.src && self.dst == other.dst && self.comps == other.comps
    }
}

impl GMap {
    pub fn from_fn(src: &Cx, dst: &Cx, deg: i64, mut f: impl FnMut(i64) -> Mat) -> GMap {
        let comps = src
            .degrees()
            .map(|i| {
                let m = f(i);
                debug_assert_eq!(m.shape(), (dst.dim(i + deg), src.dim(i)), "component {i}");
                m
            })
            .collect();
        GMap {
            src: src.clone(),
            dst: dst.clone(),
            deg,
            comps,
        }
    }

    pub fn zero(src: &Cx, dst: &Cx, deg: i64) -> GMap {
        let p = src.prime();
        GMap::from_fn(src, dst, deg, |i| Mat::zeros(p, dst.dim(i + deg), src.dim(i)))
    }

    pub fn src(&self) -> &Cx {
        &self.src
    }
    pub fn dst(&self) -> &Cx {
        &self.dst
    }
    pub fn degree(&self) -> i64 {
        self.deg
    }

    /// Component `X^i -> Y^(i+deg)`, zero outside the support.
    pub fn comp(&self, i: i64) -> Mat {
        if i < self.src.lo() || i > self.src.hi() {
            Mat::zeros(self.src.prime(), self.dst.dim(i + self.deg), self.src.dim(i))
        } else {
            self.comps[(i - self.src.lo()) as usize].clone()
        }
    }

    pub fn comps(&self) -> &[Mat] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Mat::is_zero)
    }

    /// `self ∘ first`, with `(a ∘ b)_i = a_(i+|b|) b_i`.
    pub fn compose(&self, first: &GMap) -> GMap {
        let db = first.deg;
        GMap::from_fn(&first.src, &self.dst, self.deg + db, |i| self.comp(i + db).mul(&first.comp(i)))
    }

    fn zip(&self, other: &GMap, f: impl Fn(&Mat, &Mat) -> Mat) -> GMap {
        assert_eq!(self.deg, other.deg, "degrees differ");
        GMap {
            src: self.src.clone(),
            dst: self.dst.clone(),
            deg: self.deg,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &GMap) -> GMap {
        self.zip(other, Mat::add)
    }
    pub fn sub(&self, other: &GMap) -> GMap {
        self.zip(other, Mat::sub)
    }
    pub fn neg(&self) -> GMap {
        self.scale(self.src.prime().neg(1))
    }
    pub fn scale(&self, c: u64) -> GMap {
        GMap {
            src: self.src.clone(),
            dst: self.dst.clone(),
            deg: self.deg,
            comps: self.comps.iter().map(|m| m.scale(c)).collect(),
        }
    }

    /// `D(f) = d ∘ f - (-1)^deg f ∘ d`.
    pub fn differential(&self) -> GMap {
        let p = self.src.prime();
        let n = self.deg;
        let sign = p.sign(n);
        GMap::from_fn(&self.src, &self.dst, n + 1, |i| {
            let a = self.dst.d(i + n).mul(&self.comp(i));
            let b = self.comp(i + 1).mul(&self.src.d(i));
            a.sub(&b.scale(sign))
        })
    }

    /// `Σ^k f : Σ^k X -> Σ^k Y`, components `(-1)^(k deg) f_(i+k)`.
    pub fn shift(&self, k: i64) -> GMap {
        let sign = self.src.prime().sign(k * self.deg);
        let (sx, sy) = (self.src.shift(k), self.dst.shift(k));
        GMap::from_fn(&sx, &sy, self.deg, |i| self.comp(i + k).scale(sign))
    }

    /// Blockwise direct sum of graded maps between direct-sum complexes.
    pub(crate) fn block_diag(src: &Cx, dst: &Cx, deg: i64, parts: &[&GMap]) -> GMap {
        let p = src.prime();
        GMap::from_fn(src, dst, deg, |i| {
            let blocks: Vec<Mat> = parts.iter().map(|g| g.comp(i)).collect();
            let refs: Vec<&Mat> = blocks.iter().collect();
            Mat::block_diag(p, &refs)
        })
    }

    fn check_module_maps(&self) -> Result<()> {
        for i in self.src.degrees() {
            MMap::new(self.src.obj(i), self.dst.obj(i + self.deg), self.comp(i))
                .map_err(|e| Error::InvalidChainMap(format!("component {i}: {e}")))?;
        }
        Ok(())
    }
}

/// A chain map (degree-0 cocycle of the Hom complex).
#[derive(Clone, PartialEq)]
pub struct CMap(GMap);

impl fmt::Debug for CMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CMap({:?} -> {:?})", self.0.src, self.0.dst)
    }
}

impl CMap {
    /// Validated chain map from components indexed by the source support.
    pub fn new(src: &Cx, dst: &Cx, comps: Vec<Mat>) -> Result<CMap> {
        if src.alg() != dst.alg() {
            return Err(Error::AlgebraMismatch);
        }
        if comps.len() != src.len() {
            return Err(Error::InvalidChainMap(format!("{} components for support of length {}", comps.len(), src.len())));
        }
        for (k, c) in comps.iter().enumerate() {
            let i = src.lo() + k as i64;
            if c.shape() != (dst.dim(i), src.dim(i)) {
                return Err(Error::InvalidChainMap(format!("component {i} has shape {:?}", c.shape())));
            }
        }
        let g = GMap {
            src: src.clone(),
            dst: dst.clone(),
            deg: 0,
            comps,
        };
        let f = CMap(g);
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        self.0.check_module_maps()?;
        let lo = self.src().lo().min(self.dst().lo()) - 1;
        let hi = self.src().hi().max(self.dst().hi());
        for n in lo..=hi {
            if self.dst().d(n).mul(&self.comp(n)) != self.comp(n + 1).mul(&self.src().d(n)) {
                return Err(Error::InvalidChainMap(format!("square at degree {n} does not commute")));
            }
        }
        Ok(())
    }

    pub fn from_fn(src: &Cx, dst: &Cx, f: impl FnMut(i64) -> Mat) -> CMap {
        CMap(GMap::from_fn(src, dst, 0, f))
    }

    /// Wraps a degree-0 graded map already known to be a cocycle.
    pub(crate) fn from_graded(g: GMap) -> CMap {
        assert_eq!(g.deg, 0);
        CMap(g)
    }

    pub fn identity(x: &Cx) -> CMap {
        CMap::from_fn(x, x, |i| Mat::identity(x.prime(), x.dim(i)))
    }

    pub fn zero(x: &Cx, y: &Cx) -> CMap {
        CMap(GMap::zero(x, y, 0))
    }

    pub fn src(&self) -> &Cx {
        &self.0.src
    }
    pub fn dst(&self) -> &Cx {
        &self.0.dst
    }
    pub fn comp(&self, n: i64) -> Mat {
        self.0.comp(n)
    }
    pub fn graded(&self) -> &GMap {
        &self.0
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn compose(&self, first: &CMap) -> CMap {
        CMap(self.0.compose(&first.0))
    }
    pub fn add(&self, other: &CMap) -> CMap {
        CMap(self.0.add(&other.0))
    }
    pub fn sub(&self, other: &CMap) -> CMap {
        CMap(self.0.sub(&other.0))
    }
    pub fn neg(&self) -> CMap {
        CMap(self.0.neg())
    }
    pub fn scale(&self, c: u64) -> CMap {
        CMap(self.0.scale(c))
    }
    pub fn shift(&self, k: i64) -> CMap {
        CMap(self.0.shift(k))
    }
}

/// A verified homotopy `phi - psi = d h + h d`.
#[derive(Debug, Clone)]
pub struct Htp {
    pub phi: CMap,
    pub psi: CMap,
    pub h: GMap,
}

impl Htp {
    pub fn new(phi: &CMap, psi: &CMap, h: GMap) -> Result<Htp> {
        let t = Htp {
            phi: phi.clone(),
            psi: psi.clone(),
            h,
        };
        t.verify()?;
        Ok(t)
    }

    /// The zero homotopy between equal maps.
    pub fn reflexive(phi: &CMap) -> Htp {
        Htp {
            phi: phi.clone(),
            psi: phi.clone(),
            h: GMap::zero(phi.src(), phi.dst(), -1),
        }
    }

    pub fn verify(&self) -> Result<()> {
        if self.h.degree() != -1 {
            return Err(Error::Certificate("homotopy must have degree -1".into()));
        }
        let lhs = self.phi.graded().sub(self.psi.graded());
        if lhs.comps() != self.h.differential().comps() {
            return Err(Error::Certificate("phi - psi ≠ d h + h d".into()));
        }
        Ok(())
    }

    pub fn neg(&self) -> Htp {
        Htp {
            phi: self.phi.neg(),
            psi: self.psi.neg(),
            h: self.h.neg(),
        }
    }

    pub fn shift(&self, k: i64) -> Htp {
        Htp {
            phi: self.phi.shift(k),
            psi: self.psi.shift(k),
            h: self.h.shift(k),
        }
    }
}

/// An isomorphism in the homotopy category with verified round trips.
#[derive(Debug, Clone)]
pub struct KIso {
    pub fwd: CMap,
    pub bwd: CMap,
    /// `bwd ∘ fwd ~ id`.
    pub left: Htp,
    /// `fwd ∘ bwd ~ id`.
    pub right: Htp,
}

impl KIso {
    pub fn identity(x: &Cx) -> KIso {
        let id = CMap::identity(x);
        KIso {
            fwd: id.clone(),
            bwd: id.clone(),
            left: Htp::reflexive(&id),
            right: Htp::reflexive(&id),
        }
    }

    pub fn verify(&self) -> Result<()> {
        self.fwd.validate()?;
        self.bwd.validate()?;
        self.left.verify()?;
        self.right.verify()?;
        let ok = self.left.phi == self.bwd.compose(&self.fwd)
            && self.left.psi == CMap::identity(self.fwd.src())
            && self.right.phi == self.fwd.compose(&self.bwd)
            && self.right.psi == CMap::identity(self.fwd.dst());
        if ok {
            Ok(())
        } else {
            Err(Error::Certificate("round-trip homotopies do not match the maps".into()))
        }
    }
}
