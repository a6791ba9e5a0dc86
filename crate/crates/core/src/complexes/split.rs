use crate::error::{Error, Result};
use crate::exactla::Mat;
use crate::modcat::Mod;

use super::homcx::null_homotopy;
use super::maps::{CMap, Htp, KIso};
use super::Cx;

/// `X ≅ ⊕_n Σ^(-n) H^n(X)` over a semisimple algebra.
#[derive(Debug, Clone)]
pub struct SemisimpleSplit {
    /// `H^n` in degree `n`, zero differential.
    pub target: Cx,
    /// `fwd: X -> target`, `bwd: target -> X`.
    pub iso: KIso,
}

/// Columns completing `sub` (inside `within`) to a basis of `within`, chosen
/// inside each Peirce block so that the span is a submodule.
fn complement(m: &Mod, within: &Mat, sub: &Mat) -> Mat {
    let p = m.prime();
    let mut cols: Vec<Vec<u64>> = Vec::new();
    for e in m.alg().idempotents() {
        let ae = m.act(e);
        let (w, s) = (ae.mul(within).image_basis(), ae.mul(sub).image_basis());
        let mut cur = s.clone();
        for j in 0..w.cols() {
            let c = w.select_cols(&[j]);
            let next = Mat::hstack(p, m.dim(), &[&cur, &c]);
            if next.rank() > cur.rank() {
                cur = next;
                cols.push(c.col(0));
            }
        }
    }
    Mat::from_cols(p, m.dim(), &cols)
}

/// Splits a complex over a basic semisimple algebra into its cohomology.
pub fn semisimple_split(x: &Cx) -> Result<SemisimpleSplit> {
    let alg = x.alg();
    if !alg.is_semisimple() || !alg.is_basic() {
        return Err(Error::Refused(format!("{} is not a basic semisimple algebra", alg.name())));
    }
    let p = x.prime();
    let mut objects = Vec::new();
    let mut incs = Vec::new();
    let mut projs = Vec::new();
    for n in x.degrees() {
        let m = x.obj(n);
        let z = x.d(n).kernel_basis();
        let b = x.d(n - 1).image_basis();
        let hcols = complement(m, &z, &b);
        let w = complement(m, &Mat::identity(p, m.dim()), &z);
        let (h, _) = m.submodule_with_basis(&hcols)?;
        let basis = Mat::hstack(p, m.dim(), &[&hcols, &b, &w]);
        let coords = basis.inverse().ok_or_else(|| Error::Internal("cohomology splitting is not a basis".into()))?;
        let rows: Vec<usize> = (0..hcols.cols()).collect();
        projs.push(coords.select_rows(&rows));
        incs.push(hcols);
        objects.push(h);
    }
    let diffs = x.degrees().skip(1).map(|n| Mat::zeros(p, objects[(n - x.lo()) as usize].dim(), objects[(n - 1 - x.lo()) as usize].dim())).collect();
    let target = Cx::build(alg, x.lo(), objects, diffs)?;
    let at = |n: i64| (n - x.lo()) as usize;
    let fwd = CMap::new(x, &target, x.degrees().map(|n| projs[at(n)].clone()).collect())?;
    let bwd = CMap::new(&target, x, x.degrees().map(|n| incs[at(n)].clone()).collect())?;
    let left = null_homotopy(&bwd.compose(&fwd), &CMap::identity(x))?
        .ok_or_else(|| Error::Internal("splitting is not a homotopy inverse".into()))?;
    let right = Htp::new(&fwd.compose(&bwd), &CMap::identity(&target), super::GMap::zero(&target, &target, -1))?;
    let iso = KIso { fwd, bwd, left, right };
    iso.verify()?;
    Ok(SemisimpleSplit { target, iso })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{preset, Preset};
    use crate::complexes::{make_complex, stalk};
    use crate::exactla::Prime;
    use crate::modcat::{regular, simple};

    #[test]
    fn stalks_and_contractible() {
        let k = preset(Preset::GroundField, Prime::new(7).unwrap()).unwrap();
        let s = stalk(&simple(&k, 0), 2);
        let sp = semisimple_split(&s).unwrap();
        assert_eq!(sp.target.dims(), vec![1]);
        let r = regular(&k);
        let c = make_complex(&k, 0, vec![r.clone(), r], vec![Mat::identity(k.prime(), 1)]).unwrap();
        let sp = semisimple_split(&c).unwrap();
        assert!(sp.target.is_zero());
    }

    #[test]
    fn refuses_non_semisimple() {
        let t = preset(Preset::TruncPoly(2), Prime::new(7).unwrap()).unwrap();
        assert!(matches!(semisimple_split(&stalk(&regular(&t), 0)), Err(Error::Refused(_))));
    }
}
