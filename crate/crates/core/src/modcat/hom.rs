use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Result;
use crate::exactla::{LinSys, Mat};

use super::{MMap, Mod};

/// A module rewritten in a basis adapted to the designated idempotents:
/// `basis` has the columns of `M e_1`, `M e_2`, ... side by side, and every
/// generator acts by a block matrix.
pub(crate) struct Frame {
    pub basis: Mat,
    pub inverse: Mat,
    pub sizes: Vec<usize>,
    pub offsets: Vec<usize>,
    /// Generators other than the idempotents, in the adapted basis.
    pub gens: Vec<Mat>,
}

impl Frame {
    pub(crate) fn new(m: &Mod) -> Frame {
        let p = m.prime();
        let alg = m.alg();
        let blocks: Vec<Mat> = alg.idempotents().iter().map(|e| m.act(e).image_basis()).collect();
        let sizes: Vec<usize> = blocks.iter().map(Mat::cols).collect();
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for s in &sizes {
            offsets.push(acc);
            acc += s;
        }
        let refs: Vec<&Mat> = blocks.iter().collect();
        let basis = Mat::hstack(p, m.dim(), &refs);
        let inverse = basis.inverse().expect("idempotents sum to the unit");
        let idem = alg.idempotents();
        let gens = alg
            .generators()
            .into_iter()
            .filter(|g| !idem.contains(g))
            .map(|g| inverse.mul(&m.act(&g)).mul(&basis))
            .collect();
        Frame {
            basis,
            inverse,
            sizes,
            offsets,
            gens,
        }
    }

    fn block(&self, g: &Mat, r: usize, c: usize) -> Mat {
        g.block(self.offsets[r], self.offsets[c], self.sizes[r], self.sizes[c])
    }
}

/// A basis of `Hom(src, dst)` with coordinate extraction.
pub struct HomBasis {
    src: Mod,
    dst: Mod,
    maps: Vec<Mat>,
    extractor: OnceLock<Option<Mat>>,
}

impl HomBasis {
    pub fn src(&self) -> &Mod {
        &self.src
    }
    pub fn dst(&self) -> &Mod {
        &self.dst
    }
    pub fn dim(&self) -> usize {
        self.maps.len()
    }
    pub fn matrices(&self) -> &[Mat] {
        &self.maps
    }
    pub fn maps(&self) -> Vec<MMap> {
        self.maps
            .iter()
            .map(|m| MMap::new_unchecked(&self.src, &self.dst, m.clone()))
            .collect()
    }

    /// Linear combination of the basis.
    pub fn combine(&self, coeffs: &[u64]) -> Mat {
        let p = self.src.prime();
        let mut acc = Mat::zeros(p, self.dst.dim(), self.src.dim());
        for (c, m) in coeffs.iter().zip(&self.maps) {
            if *c != 0 {
                acc.axpy(*c, m);
            }
        }
        acc
    }

    /// Coordinates of `f` in the basis, or `None` if `f` is not a module map.
    pub fn coords(&self, f: &Mat) -> Option<Vec<u64>> {
        if self.maps.is_empty() {
            return f.is_zero().then(Vec::new);
        }
        let ext = self
            .extractor
            .get_or_init(|| {
                let cols: Vec<Vec<u64>> = self.maps.iter().map(Mat::flatten).collect();
                Mat::from_cols(self.src.prime(), self.dst.dim() * self.src.dim(), &cols).left_inverse()
            })
            .as_ref()?;
        let v = Mat::column_vector(f.prime(), &f.flatten());
        let c = ext.mul(&v).col(0);
        (self.combine(&c) == *f).then_some(c)
    }
}

type CacheKey = (usize, usize);
static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<HomBasis>>>> = OnceLock::new();
const CACHE_LIMIT: usize = 50_000;

/// Basis of `Hom(m, n)`, cached per pair of module objects.
pub fn hom_basis(m: &Mod, n: &Mod) -> Result<Arc<HomBasis>> {
    m.same_alg(n)?;
    let key = (m.ptr_id(), n.ptr_id());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("hom cache").get(&key) {
        return Ok(hit.clone());
    }
    let basis = Arc::new(HomBasis {
        src: m.clone(),
        dst: n.clone(),
        maps: compute(m, n),
        extractor: OnceLock::new(),
    });
    let mut guard = cache.lock().expect("hom cache");
    if guard.len() >= CACHE_LIMIT {
        guard.clear();
    }
    guard.insert(key, basis.clone());
    Ok(basis)
}

/// A basis of the module maps `m -> n`.
pub fn hom_space(m: &Mod, n: &Mod) -> Result<Vec<MMap>> {
    Ok(hom_basis(m, n)?.maps())
}

// In adapted bases a map is block diagonal, `X_j : M e_j -> N e_j`, and
// commuting with a generator g splits into the block equations
// `X_r G^M[r,c] = G^N[r,c] X_c`.
fn compute(m: &Mod, n: &Mod) -> Vec<Mat> {
    let p = m.prime();
    if m.dim() == 0 || n.dim() == 0 {
        return Vec::new();
    }
    let (fm, fn_) = (m.frame(), n.frame());
    let k = fm.sizes.len();
    let mut sys = LinSys::new(p);
    let vars: Vec<_> = (0..k)
        .map(|j| (fn_.sizes[j] * fm.sizes[j] > 0).then(|| sys.free(fn_.sizes[j], fm.sizes[j])))
        .collect();
    for (gm, gn) in fm.gens.iter().zip(&fn_.gens) {
        for r in 0..k {
            for c in 0..k {
                let (rows, cols) = (fn_.sizes[r], fm.sizes[c]);
                if rows * cols == 0 {
                    continue;
                }
                let bm = fm.block(gm, r, c);
                let bn = fn_.block(gn, r, c);
                if bm.is_zero() && bn.is_zero() {
                    continue;
                }
                let eq = sys.equation(rows, cols);
                if let Some(x) = vars[r] {
                    sys.term(eq, None, x, Some(&bm));
                }
                if let Some(x) = vars[c] {
                    sys.term(eq, Some(&bn.neg()), x, None);
                }
            }
        }
    }
    sys.homogeneous()
        .into_iter()
        .map(|blocks| {
            let mut f = Mat::zeros(p, n.dim(), m.dim());
            let mut it = blocks.into_iter();
            for j in 0..k {
                if vars[j].is_some() {
                    let x = it.next().expect("one block per variable");
                    f.set_block(fn_.offsets[j], fm.offsets[j], &x);
                }
            }
            fn_.basis.mul(&f).mul(&fm.inverse)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{preset, Preset};
    use crate::exactla::Prime;
    use crate::modcat::{proj, regular, simple};

    #[test]
    fn hom_dimensions_over_lambda1() {
        let a = preset(Preset::Lambda1, Prime::new(101).unwrap()).unwrap();
        let s: Vec<Mod> = (0..3).map(|j| simple(&a, j)).collect();
        let pr: Vec<Mod> = (0..3).map(|j| proj(&a, j)).collect();
        assert_eq!(hom_space(&s[0], &s[0]).unwrap().len(), 1);
        assert_eq!(hom_space(&pr[0], &s[0]).unwrap().len(), 1);
        assert_eq!(hom_space(&pr[2], &pr[0]).unwrap().len(), 1);
        assert_eq!(hom_space(&pr[0], &pr[2]).unwrap().len(), 0);
        assert_eq!(hom_space(&s[0], &s[1]).unwrap().len(), 0);
        // End(A) = A as a vector space.
        assert_eq!(hom_space(&regular(&a), &regular(&a)).unwrap().len(), 6);
        for f in hom_space(&pr[1], &pr[0]).unwrap() {
            MMap::new(f.src(), f.dst(), f.matrix().clone()).unwrap();
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let a = preset(Preset::TruncPoly(3), Prime::new(7).unwrap()).unwrap();
        let r = regular(&a);
        let hb = hom_basis(&r, &r).unwrap();
        assert_eq!(hb.dim(), 3);
        let f = hb.combine(&[1, 2, 3]);
        assert_eq!(hb.coords(&f).unwrap(), vec![1, 2, 3]);
        assert!(hb.coords(&Mat::from_fn(a.prime(), 3, 3, |i, j| u64::from(i == 0 && j == 2))).is_none());
    }
}
