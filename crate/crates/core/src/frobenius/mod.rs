//! Stable module categories of self-injective algebras.

use rayon::prelude::*;

use crate::algebra::Alg;
use crate::complexes::{Cx, HomComplex};
use crate::error::{Error, Result};
use crate::exactla::{quotient_structure, Mat};
use crate::modcat::{
    indecomposables, decompose, direct_sum, hom_basis, injective, injective_envelope, is_isomorphic,
    is_projective, kci, module_label, proj, projective_cover, quiver_from_radical, radical_table, MMap, Mod,
    Quiver,
};

/// Every indecomposable injective is projective: `I_j ≅ P_nakayama[j]`.
#[derive(Debug, Clone)]
pub struct SelfInjective {
    pub alg: Alg,
    pub nakayama: Vec<usize>,
}

pub fn assert_self_injective(alg: &Alg) -> Result<SelfInjective> {
    let r = alg.num_idempotents();
    let mut nakayama = Vec::with_capacity(r);
    for j in 0..r {
        let i = injective(alg, j);
        let k = (0..r)
            .find(|&k| is_isomorphic(&i, &proj(alg, k)).is_some())
            .ok_or_else(|| {
                Error::NotSelfInjective(format!(
                    "injective envelope {} of S{} is not projective",
                    module_label(&i),
                    j + 1
                ))
            })?;
        nakayama.push(k);
    }
    Ok(SelfInjective { alg: alg.clone(), nakayama })
}

impl SelfInjective {
    fn check(&self, m: &Mod) -> Result<()> {
        if m.alg() != &self.alg {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }
}

/// `Hom(m, n)` modulo maps factoring through a projective.
#[derive(Debug, Clone)]
pub struct StableHom {
    pub dim: usize,
    pub hom_dim: usize,
    /// Representatives of a basis of the quotient.
    pub basis: Vec<MMap>,
    /// Columns span the projectively trivial maps inside `Hom(m, n)`, in
    /// hom-basis coordinates.
    pub trivial: Mat,
}

/// Maps `m -> n` factoring through the projective cover of `n`, in
/// coordinates of `hom_basis(m, n)`.
fn projectively_trivial(m: &Mod, n: &Mod) -> Result<Mat> {
    let hb = hom_basis(m, n)?;
    let (pn, pi) = projective_cover(n)?;
    let cols: Vec<Vec<u64>> = hom_basis(m, &pn)?
        .matrices()
        .iter()
        .map(|g| hb.coords(&pi.matrix().mul(g)).expect("composite is a module map"))
        .collect();
    Ok(Mat::from_cols(m.prime(), hb.dim(), &cols).image_basis())
}

pub fn stable_hom(cert: &SelfInjective, m: &Mod, n: &Mod) -> Result<StableHom> {
    cert.check(m)?;
    cert.check(n)?;
    let hb = hom_basis(m, n)?;
    let trivial = projectively_trivial(m, n)?;
    let (_, section) = quotient_structure(m.prime(), hb.dim(), &trivial)?;
    let basis = (0..section.cols())
        .map(|j| MMap::new(m, n, hb.combine(&section.col(j))))
        .collect::<Result<_>>()?;
    Ok(StableHom {
        dim: section.cols(),
        hom_dim: hb.dim(),
        basis,
        trivial,
    })
}

/// `dim` of stable Homs between all pairs, row `i` from `mods[i]`.
pub fn stable_hom_table(cert: &SelfInjective, mods: &[Mod]) -> Result<Vec<Vec<usize>>> {
    mods.par_iter()
        .map(|m| mods.iter().map(|n| Ok(stable_hom(cert, m, n)?.dim)).collect())
        .collect()
}

/// `Ω m`, the kernel of the projective cover.
pub fn syzygy(cert: &SelfInjective, m: &Mod) -> Result<Mod> {
    cert.check(m)?;
    Ok(kci(&projective_cover(m)?.1).ker.0)
}

/// `Ω⁻ m`, the cokernel of the injective envelope.
pub fn cosyzygy(cert: &SelfInjective, m: &Mod) -> Result<Mod> {
    cert.check(m)?;
    Ok(kci(&injective_envelope(m)?.1).coker.0)
}

/// The sum of the non-projective indecomposable summands.
pub fn projective_free_part(m: &Mod) -> Result<Mod> {
    let mut parts = Vec::new();
    for s in decompose(m)? {
        if !is_projective(&s.module) {
            parts.extend(std::iter::repeat_n(s.module, s.multiplicity));
        }
    }
    Ok(direct_sum(m.alg(), &parts)?.module)
}

/// A window `[lo, hi]` of the complete resolution of a projective-free
/// module, with `Z^0 ≅ module`.
#[derive(Debug, Clone)]
pub struct CompleteRes {
    pub module: Mod,
    pub window: (i64, i64),
    pub cx: Cx,
    /// `module -> Z^0(cx)`.
    pub z0_iso: MMap,
}

fn check_window(window: (i64, i64)) -> Result<()> {
    if window.0 > -2 || window.1 < 2 {
        return Err(Error::Usage(format!(
            "window [{}, {}] needs at least two degrees on each side of 0",
            window.0, window.1
        )));
    }
    Ok(())
}

pub fn complete_resolution(cert: &SelfInjective, m: &Mod, window: (i64, i64)) -> Result<CompleteRes> {
    cert.check(m)?;
    check_window(window)?;
    if let Some(s) = decompose(m)?.into_iter().find(|s| is_projective(&s.module)) {
        return Err(Error::Refused(format!("module has projective summand {}", module_label(&s.module))));
    }
    let (lo, hi) = window;
    let (i0, iota0) = injective_envelope(m)?;
    // Degrees 0..=hi: envelopes of cosyzygies.
    let mut pos = vec![i0];
    let mut pos_d = Vec::new();
    let mut prev = iota0.clone();
    for _ in 0..hi {
        let q = kci(&prev).coker.1;
        let (i, iota) = injective_envelope(q.dst())?;
        pos_d.push(iota.matrix().mul(q.matrix()));
        pos.push(i);
        prev = iota;
    }
    // Degrees -1..=lo: covers of syzygies.
    let mut neg = Vec::new();
    let mut neg_d = Vec::new();
    let mut into = iota0.clone();
    let mut cur = m.clone();
    for _ in 0..-lo {
        let (p, pi) = projective_cover(&cur)?;
        neg_d.push(into.matrix().mul(pi.matrix()));
        let ker = kci(&pi).ker;
        neg.push(p);
        cur = ker.0;
        into = ker.1;
    }
    neg.reverse();
    neg_d.reverse();
    let objects: Vec<Mod> = neg.into_iter().chain(pos).collect();
    let diffs: Vec<Mat> = neg_d.into_iter().chain(pos_d).collect();
    let cx = Cx::build(m.alg(), lo, objects, diffs)?;
    for n in cx.degrees() {
        if !is_projective(cx.obj(n)) {
            return Err(Error::Certificate(format!("component in degree {n} is not projective")));
        }
    }
    for n in lo + 1..hi {
        if cx.cohomology_at(n).module.dim() != 0 {
            return Err(Error::Certificate(format!("complete resolution not acyclic in degree {n}")));
        }
    }
    let (z, inc) = z0_with_inclusion(&cx)?;
    let coords = inc
        .matrix()
        .left_inverse()
        .ok_or_else(|| Error::Internal("cycle basis".into()))?;
    let z0_iso = MMap::new(m, &z, coords.mul(iota0.matrix()))?;
    if !z0_iso.is_iso() {
        return Err(Error::Certificate("Z^0 is not isomorphic to the module".into()));
    }
    Ok(CompleteRes {
        module: m.clone(),
        window,
        cx,
        z0_iso,
    })
}

fn z0_with_inclusion(x: &Cx) -> Result<(Mod, MMap)> {
    x.obj(0).submodule(&x.d(0).kernel_basis())
}

/// `Z^0 = ker d^0` of a complex of projectives that is acyclic strictly
/// inside its support and has 0 in its support.
pub fn z0(x: &Cx) -> Result<Mod> {
    if x.is_empty() || x.lo() > 0 || x.hi() < 0 {
        return Err(Error::InvalidComplex("degree 0 lies outside the support".into()));
    }
    for n in x.degrees() {
        if !is_projective(x.obj(n)) {
            return Err(Error::InvalidComplex(format!("component in degree {n} is not projective")));
        }
    }
    for n in x.lo() + 1..x.hi() {
        if x.cohomology_at(n).module.dim() != 0 {
            return Err(Error::InvalidComplex(format!("not acyclic in degree {n}")));
        }
    }
    Ok(z0_with_inclusion(x)?.0)
}

/// `dim Hom_K(X, Y)` for the complete resolutions `X`, `Y` of the
/// projective-free parts of `m`, `n`.
///
/// For `b >= a`, `Hom_K(X, Y) ≅ Hom_K(Σ^-1 σ≤b X, σ≥a Y)`, whose degree-0
/// cohomology only sees `X` in `[a-2, b]` and `Y` in `[a, b+2]`. Here
/// `a = lo + 2`, `b = hi - 2`; the value is recomputed on the window widened
/// by 2 and must agree.
pub fn stable_hom_via_cr(cert: &SelfInjective, m: &Mod, n: &Mod, window: (i64, i64)) -> Result<usize> {
    check_window(window)?;
    let (m, n) = (projective_free_part(m)?, projective_free_part(n)?);
    if m.is_zero() || n.is_zero() {
        return Ok(0);
    }
    let at = |(lo, hi): (i64, i64)| -> Result<usize> {
        let x = complete_resolution(cert, &m, (lo, hi))?.cx;
        let y = complete_resolution(cert, &n, (lo, hi))?.cx;
        let (a, b) = (lo + 2, hi - 2);
        let s = x.window(lo, b).shift(-1);
        let t = y.window(a, hi);
        Ok(HomComplex::new(&s, &t)?.h_dim(0))
    };
    let d = at(window)?;
    let d2 = at((window.0 - 2, window.1 + 2))?;
    if d != d2 {
        return Err(Error::Unstable((window.1 - window.0) as usize, d, d2));
    }
    Ok(d)
}

/// The non-projective indecomposables and the quiver of irreducible maps
/// of the stable category.
#[derive(Debug, Clone)]
pub struct StableCategory {
    pub modules: Vec<Mod>,
    pub quiver: Quiver,
}

pub fn stable_indecomposables(cert: &SelfInjective) -> Result<StableCategory> {
    let modules: Vec<Mod> = indecomposables(&cert.alg)?
        .into_iter()
        .filter(|m| !is_projective(m))
        .collect();
    let rad = radical_table(&modules)?;
    let ideal = modules
        .iter()
        .map(|x| {
            modules
                .iter()
                .map(|y| {
                    let hb = hom_basis(x, y)?;
                    let t = projectively_trivial(x, y)?;
                    Ok((0..t.cols()).map(|j| hb.combine(&t.col(j))).collect())
                })
                .collect::<Result<Vec<Vec<Mat>>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let quiver = quiver_from_radical(&format!("{} stable", cert.alg.name()), &modules, &rad, &ideal);
    Ok(StableCategory { modules, quiver })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{preset, Preset};
    use crate::complexes::make_complex;
    use crate::exactla::Prime;
    use crate::modcat::{regular, simple};

    fn tp(n: usize) -> (Alg, SelfInjective) {
        let a = preset(Preset::TruncPoly(n), Prime::new(3).unwrap()).unwrap();
        let c = assert_self_injective(&a).unwrap();
        (a, c)
    }

    /// `k[T]/(T^j)` for `1 <= j <= n`.
    fn uni(a: &Alg, j: usize) -> Mod {
        indecomposables(a).unwrap()[j - 1].clone()
    }

    #[test]
    fn certification() {
        tp(3);
        assert!(assert_self_injective(&preset(Preset::GroundField, Prime::new(5).unwrap()).unwrap()).is_ok());
        let l1 = preset(Preset::Lambda1, Prime::new(5).unwrap()).unwrap();
        assert!(matches!(assert_self_injective(&l1), Err(Error::NotSelfInjective(_))));
    }

    #[test]
    fn stable_homs() {
        let (a, c) = tp(2);
        let k = simple(&a, 0);
        assert_eq!(stable_hom(&c, &k, &k).unwrap().dim, 1);
        assert_eq!(stable_hom(&c, &regular(&a), &k).unwrap().dim, 0);
        assert_eq!(stable_hom(&c, &k, &regular(&a)).unwrap().dim, 0);
    }

    #[test]
    fn syzygies() {
        let (a, c) = tp(4);
        for j in 1..=4 {
            assert_eq!(syzygy(&c, &uni(&a, j)).unwrap().dim(), 4 - j);
        }
        let (a, c) = tp(3);
        let k = simple(&a, 0);
        let back = cosyzygy(&c, &syzygy(&c, &k).unwrap()).unwrap();
        assert!(is_isomorphic(&back, &k).is_some());
    }

    #[test]
    fn complete_resolutions() {
        let (a, c) = tp(2);
        let k = simple(&a, 0);
        let cr = complete_resolution(&c, &k, (-3, 3)).unwrap();
        assert_eq!(cr.cx.dims(), vec![2; 7]);
        for n in -3..3 {
            assert_eq!(cr.cx.d(n).rank(), 1);
        }
        assert!(is_isomorphic(&z0(&cr.cx).unwrap(), &k).is_some());
        assert!(is_isomorphic(&z0(&cr.cx.shift(-1)).unwrap(), &k).is_some());

        let (a, c) = tp(4);
        let m = uni(&a, 2);
        let cr = complete_resolution(&c, &m, (-2, 2)).unwrap();
        assert_eq!(cr.cx.dims(), vec![4; 5]);
        for n in -2..2 {
            assert_eq!(cr.cx.d(n).rank(), 2);
        }
        let k = simple(&a, 0);
        let cr = complete_resolution(&c, &k, (-3, 3)).unwrap();
        assert!(is_isomorphic(&z0(&cr.cx.shift(-1)).unwrap(), &syzygy(&c, &k).unwrap()).is_some());
        assert!(is_isomorphic(&z0(&cr.cx.shift(1)).unwrap(), &cosyzygy(&c, &k).unwrap()).is_some());

        let with_proj = direct_sum(&a, &[k.clone(), regular(&a)]).unwrap().module;
        assert!(matches!(complete_resolution(&c, &with_proj, (-2, 2)), Err(Error::Refused(_))));
        assert!(complete_resolution(&c, &k, (-1, 2)).is_err());
    }

    #[test]
    fn z0_of_contractible() {
        let (a, _) = tp(3);
        let r = regular(&a);
        let x = make_complex(&a, -1, vec![r.clone(), r.clone()], vec![Mat::identity(a.prime(), 3)]).unwrap();
        assert!(is_projective(&z0(&x).unwrap()));
        assert!(z0(&make_complex(&a, 1, vec![r], vec![]).unwrap()).is_err());
    }

    #[test]
    fn stable_hom_routes_agree() {
        for n in 2..=5 {
            let (_, c) = tp(n);
            let cat = stable_indecomposables(&c).unwrap();
            let table = stable_hom_table(&c, &cat.modules).unwrap();
            for (i, m) in cat.modules.iter().enumerate() {
                for (j, x) in cat.modules.iter().enumerate() {
                    assert_eq!(stable_hom_via_cr(&c, m, x, (-2, 2)).unwrap(), table[i][j], "n={n} {i} {j}");
                }
            }
        }
        let (a, c) = tp(3);
        let z = crate::modcat::zero(&a);
        assert_eq!(stable_hom_via_cr(&c, &simple(&a, 0), &z, (-2, 2)).unwrap(), 0);
    }

    #[test]
    fn stable_quivers() {
        let (_, c) = tp(2);
        let s = stable_indecomposables(&c).unwrap();
        assert_eq!((s.modules.len(), s.quiver.arrow_count()), (1, 0));
        let (_, c) = tp(3);
        let s = stable_indecomposables(&c).unwrap();
        assert_eq!((s.modules.len(), s.quiver.arrow_count()), (2, 2));
        let k = preset(Preset::GroundField, Prime::new(2).unwrap()).unwrap();
        let s = stable_indecomposables(&assert_self_injective(&k).unwrap()).unwrap();
        assert!(s.modules.is_empty());
    }
}
