use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::algebra::{preset, Alg, Preset};
use crate::error::{Error, Result};
use crate::exactla::{quotient_structure, Mat};
use crate::modcat::{hom_basis, make_module, HomBasis, Mod};

use super::maps::{CMap, GMap, Htp, KIso};
use super::Cx;

struct Degree {
    /// `(i, Hom(X^i, Y^(i+n)), offset)` for the nonzero blocks.
    blocks: Vec<(i64, Arc<HomBasis>, usize)>,
    dim: usize,
}

/// The Hom complex `Hom•(X, Y)` with explicit coordinates: degree `n` is
/// `⊕_i Hom(X^i, Y^(i+n))` in the concatenated Hom-space bases.
pub struct HomComplex {
    x: Cx,
    y: Cx,
    degrees: Mutex<HashMap<i64, Arc<Degree>>>,
    diffs: Mutex<HashMap<i64, Arc<Mat>>>,
}

/// Cocycles, coboundaries and a chosen basis of `H^n` in coordinates.
#[derive(Debug, Clone)]
pub struct HomCohomology {
    pub cocycles: Mat,
    pub cocycle_coords: Mat,
    pub proj: Mat,
    pub section: Mat,
}

impl HomCohomology {
    pub fn dim(&self) -> usize {
        self.section.cols()
    }
    /// Representatives of the `H^n` basis, as coordinate columns.
    pub fn representatives(&self) -> Mat {
        self.cocycles.mul(&self.section)
    }
    /// Class of a cocycle given by coordinates.
    pub fn class_of(&self, v: &Mat) -> Mat {
        self.proj.mul(&self.cocycle_coords.mul(v))
    }
}

impl HomComplex {
    pub fn new(x: &Cx, y: &Cx) -> Result<HomComplex> {
        if x.alg() != y.alg() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(HomComplex {
            x: x.clone(),
            y: y.clone(),
            degrees: Mutex::new(HashMap::new()),
            diffs: Mutex::new(HashMap::new()),
        })
    }

    pub fn src(&self) -> &Cx {
        &self.x
    }
    pub fn dst(&self) -> &Cx {
        &self.y
    }

    /// Degrees that can be nonzero.
    pub fn range(&self) -> (i64, i64) {
        (self.y.lo() - self.x.hi(), self.y.hi() - self.x.lo())
    }

    fn degree(&self, n: i64) -> Arc<Degree> {
        if let Some(d) = self.degrees.lock().expect("degree cache").get(&n) {
            return d.clone();
        }
        let mut blocks = Vec::new();
        let mut off = 0;
        for i in self.x.degrees() {
            let (a, b) = (self.x.obj(i), self.y.obj(i + n));
            if a.dim() == 0 || b.dim() == 0 {
                continue;
            }
            let hb = hom_basis(a, b).expect("same algebra");
            if hb.dim() == 0 {
                continue;
            }
            let dim = hb.dim();
            blocks.push((i, hb, off));
            off += dim;
        }
        let d = Arc::new(Degree { blocks, dim: off });
        self.degrees.lock().expect("degree cache").insert(n, d.clone());
        d
    }

    pub fn dim(&self, n: i64) -> usize {
        self.degree(n).dim
    }

    /// The graded map with the given coordinates.
    pub fn element(&self, n: i64, coeffs: &[u64]) -> GMap {
        let deg = self.degree(n);
        let mut comps: HashMap<i64, Mat> = HashMap::new();
        for (i, hb, off) in &deg.blocks {
            comps.insert(*i, hb.combine(&coeffs[*off..*off + hb.dim()]));
        }
        let p = self.x.prime();
        GMap::from_fn(&self.x, &self.y, n, |i| {
            comps
                .remove(&i)
                .unwrap_or_else(|| Mat::zeros(p, self.y.dim(i + n), self.x.dim(i)))
        })
    }

    /// Coordinates of a degree-`n` graded map whose components are module
    /// maps.
    pub fn coords(&self, g: &GMap) -> Option<Vec<u64>> {
        let n = g.degree();
        let deg = self.degree(n);
        let mut v = vec![0; deg.dim];
        let mut covered = 0;
        for (i, hb, off) in &deg.blocks {
            let c = hb.coords(&g.comp(*i))?;
            v[*off..*off + c.len()].copy_from_slice(&c);
            covered += 1;
        }
        // Components outside the blocks must vanish.
        if covered < g.src().len() {
            let listed: Vec<i64> = deg.blocks.iter().map(|b| b.0).collect();
            for i in g.src().degrees() {
                if !listed.contains(&i) && !g.comp(i).is_zero() {
                    return None;
                }
            }
        }
        Some(v)
    }

    fn block_coords(&self, n: i64, i: i64, m: &Mat, out: &mut [u64]) {
        if m.is_zero() {
            return;
        }
        let deg = self.degree(n);
        let (_, hb, off) = deg
            .blocks
            .iter()
            .find(|b| b.0 == i)
            .expect("nonzero component lies in a nonzero Hom block");
        let c = hb.coords(m).expect("component is a module map");
        for (k, x) in c.into_iter().enumerate() {
            out[off + k] = x;
        }
    }

    /// Matrix of `D : Hom^n -> Hom^(n+1)`.
    pub fn d_matrix(&self, n: i64) -> Mat {
        if let Some(d) = self.diffs.lock().expect("diff cache").get(&n) {
            return (**d).clone();
        }
        let p = self.x.prime();
        let src = self.degree(n);
        let dst = self.degree(n + 1);
        let sign = p.sign(n);
        let mut cols = Vec::with_capacity(src.dim);
        for (i, hb, _) in &src.blocks {
            let dy = self.y.d(i + n);
            let dx = self.x.d(i - 1);
            for b in hb.matrices() {
                let mut col = vec![0; dst.dim];
                self.block_coords(n + 1, *i, &dy.mul(b), &mut col);
                self.block_coords(n + 1, i - 1, &b.mul(&dx).scale(p.neg(sign)), &mut col);
                cols.push(col);
            }
        }
        let m = Mat::from_cols(p, dst.dim, &cols);
        self.diffs.lock().expect("diff cache").insert(n, Arc::new(m.clone()));
        m
    }

    pub fn cohomology(&self, n: i64) -> HomCohomology {
        let p = self.x.prime();
        let z = self.d_matrix(n).kernel_basis();
        let zc = if z.cols() > 0 {
            z.left_inverse().expect("basis")
        } else {
            Mat::zeros(p, 0, self.dim(n))
        };
        let b = zc.mul(&self.d_matrix(n - 1)).image_basis();
        let (proj, section) = quotient_structure(p, z.cols(), &b).expect("shapes");
        HomCohomology {
            cocycles: z,
            cocycle_coords: zc,
            proj,
            section,
        }
    }

    pub fn h_dim(&self, n: i64) -> usize {
        let z = self.dim(n) - self.d_matrix(n).rank();
        z - self.d_matrix(n - 1).rank()
    }

    /// Matrix of the linear map `Hom^n(X, Y) -> target^m` given by `op`.
    pub fn operator(&self, n: i64, target: &HomComplex, m: i64, op: impl Fn(&GMap) -> GMap) -> Mat {
        let dim = self.dim(n);
        let cols: Vec<Vec<u64>> = (0..dim)
            .map(|j| {
                let mut e = vec![0; dim];
                e[j] = 1;
                let img = op(&self.element(n, &e));
                debug_assert_eq!(img.degree(), m);
                target.coords(&img).expect("operator lands in module maps")
            })
            .collect();
        Mat::from_cols(self.x.prime(), target.dim(m), &cols)
    }

    /// Coordinates as a column vector.
    pub fn column(&self, g: &GMap) -> Mat {
        Mat::column_vector(self.x.prime(), &self.coords(g).expect("module maps"))
    }

    /// The Hom complex as a complex of vector spaces.
    pub fn to_cx(&self) -> Cx {
        let p = self.x.prime();
        let k = preset(Preset::GroundField, p).expect("ground field");
        let (lo, hi) = self.range();
        if lo > hi {
            return Cx::zero_complex(&k);
        }
        let objects = (lo..=hi).map(|n| vector_space(&k, self.dim(n))).collect();
        let diffs = (lo..hi).map(|n| self.d_matrix(n)).collect();
        Cx::build(&k, lo, objects, diffs).expect("hom complex")
    }
}

/// `F_p^n` as a module over the ground field.
pub(crate) fn vector_space(k: &Alg, n: usize) -> Mod {
    make_module(k, vec![Mat::identity(k.prime(), n)]).expect("vector space")
}

/// `Hom•(x, y)` as a complex over the ground field.
pub fn hom_complex(x: &Cx, y: &Cx) -> Result<Cx> {
    Ok(HomComplex::new(x, y)?.to_cx())
}

/// A homotopy `phi ~ psi`, or `None` when none exists.
pub fn null_homotopy(phi: &CMap, psi: &CMap) -> Result<Option<Htp>> {
    if phi.src() != psi.src() || phi.dst() != psi.dst() {
        return Err(Error::InvalidChainMap("homotopy between maps with different endpoints".into()));
    }
    if phi == psi {
        return Ok(Some(Htp::reflexive(phi)));
    }
    let hc = HomComplex::new(phi.src(), phi.dst())?;
    null_homotopy_in(&hc, phi, psi)
}

pub(crate) fn null_homotopy_in(hc: &HomComplex, phi: &CMap, psi: &CMap) -> Result<Option<Htp>> {
    let target = hc.column(&phi.graded().sub(psi.graded()));
    let Some(c) = hc.d_matrix(-1).solve(&target)? else {
        return Ok(None);
    };
    let h = hc.element(-1, &c.col(0));
    Ok(Some(Htp::new(phi, psi, h)?))
}

/// A chain map `g: A -> B` with `post ∘ g ~ target`, where
/// `target: A -> C` and `post: B -> C`, with the homotopy.
pub fn factor_through(target: &CMap, post: &CMap) -> Result<Option<(CMap, Htp)>> {
    if target.dst() != post.dst() {
        return Err(Error::InvalidChainMap("factorization through a map with another target".into()));
    }
    let p = target.src().prime();
    let (a, b, c) = (target.src(), post.src(), post.dst());
    let ab = HomComplex::new(a, b)?;
    let ac = HomComplex::new(a, c)?;
    // Unknowns (g, h): D g = 0 and post ∘ g - D h = target.
    let (ng, nh) = (ab.dim(0), ac.dim(-1));
    let top = Mat::hstack(p, ab.dim(1), &[&ab.d_matrix(0), &Mat::zeros(p, ab.dim(1), nh)]);
    let comp = ab.operator(0, &ac, 0, |g| post.graded().compose(g));
    let bottom = Mat::hstack(p, ac.dim(0), &[&comp, &ac.d_matrix(-1).neg()]);
    let sys = Mat::vstack(p, ng + nh, &[&top, &bottom]);
    let rhs = Mat::vstack(p, 1, &[&Mat::zeros(p, ab.dim(1), 1), &ac.column(target.graded())]);
    let Some(sol) = sys.solve(&rhs)? else {
        return Ok(None);
    };
    let s = sol.col(0);
    let g = CMap::from_graded(ab.element(0, &s[..ng]));
    g.validate()?;
    let htp = Htp::new(&post.compose(&g), target, ac.element(-1, &s[ng..]))?;
    Ok(Some((g, htp)))
}

/// An inverse of `w` in the homotopy category, with both round trips
/// certified, or `None` if `w` is not a homotopy equivalence.
pub fn k_inverse(w: &CMap) -> Result<Option<KIso>> {
    let p = w.src().prime();
    let (x, y) = (w.src(), w.dst());
    let yx = HomComplex::new(y, x)?;
    let xx = HomComplex::new(x, x)?;
    // Unknowns (u, h): D u = 0 and u ∘ w - D h = id_X.
    let (a, b) = (yx.dim(0), xx.dim(-1));
    let top = Mat::hstack(p, yx.dim(1), &[&yx.d_matrix(0), &Mat::zeros(p, yx.dim(1), b)]);
    let comp = yx.operator(0, &xx, 0, |u| u.compose(w.graded()));
    let bottom = Mat::hstack(p, xx.dim(0), &[&comp, &xx.d_matrix(-1).neg()]);
    let sys = Mat::vstack(p, a + b, &[&top, &bottom]);
    let id = CMap::identity(x);
    let rhs = Mat::vstack(p, 1, &[&Mat::zeros(p, yx.dim(1), 1), &xx.column(id.graded())]);
    let Some(sol) = sys.solve(&rhs)? else {
        return Ok(None);
    };
    let s = sol.col(0);
    let u = CMap::from_graded(yx.element(0, &s[..a]));
    u.validate()?;
    let left = Htp::new(&u.compose(w), &id, xx.element(-1, &s[a..]))?;
    let Some(right) = null_homotopy(&w.compose(&u), &CMap::identity(y))? else {
        return Ok(None);
    };
    let iso = KIso {
        fwd: w.clone(),
        bwd: u,
        left,
        right,
    };
    iso.verify()?;
    Ok(Some(iso))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::preset;
    use crate::complexes::{make_complex, stalk};
    use crate::exactla::Prime;
    use crate::modcat::{hom_space, proj, regular, simple};

    #[test]
    fn stalk_hom_complex_is_the_hom_space() {
        let a = preset(Preset::Lambda1, Prime::new(101).unwrap()).unwrap();
        let (m, n) = (proj(&a, 2), proj(&a, 0));
        let hc = hom_complex(&stalk(&m, 0), &stalk(&n, 0)).unwrap();
        assert_eq!(hc.dims(), vec![1]);
        assert_eq!(hc.lo(), 0);
    }

    #[test]
    fn resolution_of_s1_against_s2() {
        let a = preset(Preset::Lambda1, Prime::new(101).unwrap()).unwrap();
        let inc = hom_space(&proj(&a, 1), &proj(&a, 0)).unwrap().remove(0);
        let ps1 = make_complex(&a, -1, vec![proj(&a, 1), proj(&a, 0)], vec![inc.matrix().clone()]).unwrap();
        let hc = HomComplex::new(&ps1, &stalk(&simple(&a, 1), 0)).unwrap();
        assert_eq!(hc.h_dim(1), 1);
        assert_eq!(hc.h_dim(0), 0);
        let hc1 = HomComplex::new(&ps1, &stalk(&simple(&a, 1), -1)).unwrap();
        assert_eq!(hc1.h_dim(0), 1);
        assert_eq!(hc.cohomology(1).dim(), 1);
    }

    #[test]
    fn homotopies_on_contractible_and_stalk_complexes() {
        let t = preset(Preset::TruncPoly(2), Prime::new(5).unwrap()).unwrap();
        let r = regular(&t);
        let id2 = Mat::identity(t.prime(), 2);
        let c = make_complex(&t, 0, vec![r.clone(), r.clone()], vec![id2]).unwrap();
        let h = null_homotopy(&CMap::identity(&c), &CMap::zero(&c, &c)).unwrap().unwrap();
        h.verify().unwrap();
        let s = stalk(&simple(&t, 0), 0);
        assert!(null_homotopy(&CMap::identity(&s), &CMap::zero(&s, &s)).unwrap().is_none());
        let same = null_homotopy(&CMap::identity(&s), &CMap::identity(&s)).unwrap().unwrap();
        assert!(same.h.is_zero());
        let zero = Cx::zero_complex(&t);
        assert!(k_inverse(&CMap::zero(&c, &zero)).unwrap().is_some());
        assert!(k_inverse(&CMap::zero(&s, &zero)).unwrap().is_none());
    }

    #[test]
    fn leibniz_for_composition() {
        let t = preset(Preset::TruncPoly(3), Prime::new(7).unwrap()).unwrap();
        let r = regular(&t);
        let tm = r.act(&t.basis_vector(1));
        let t2 = r.act(&t.basis_vector(2));
        let x = make_complex(&t, 0, vec![r.clone(), r.clone(), r.clone()], vec![tm.clone(), t2]).unwrap();
        let hc = HomComplex::new(&x, &x).unwrap();
        let p = t.prime();
        for n in -2..=2 {
            for m in -2..=2 {
                for i in 0..hc.dim(n).min(3) {
                    for j in 0..hc.dim(m).min(3) {
                        let mut ea = vec![0; hc.dim(n)];
                        ea[i] = 1;
                        let mut eb = vec![0; hc.dim(m)];
                        eb[j] = 1;
                        let (a, b) = (hc.element(n, &ea), hc.element(m, &eb));
                        let lhs = a.compose(&b).differential();
                        let rhs = a.differential().compose(&b).add(&a.compose(&b.differential()).scale(p.sign(n)));
                        assert_eq!(lhs.comps(), rhs.comps());
                    }
                }
            }
        }
    }
}
