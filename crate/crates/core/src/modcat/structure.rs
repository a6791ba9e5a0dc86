use crate::algebra::Alg;
use crate::error::{Error, Result};
use crate::exactla::Mat;

use super::{hom_basis, proj, MMap, Mod};

/// Kernel, cokernel and image of a module map, each with its canonical map.
#[derive(Debug, Clone)]
pub struct Kci {
    pub ker: (Mod, MMap),
    pub coker: (Mod, MMap),
    pub image: (Mod, MMap),
}

pub fn kci(f: &MMap) -> Kci {
    let ker_basis = f.matrix().kernel_basis();
    let ker = f.src().submodule(&ker_basis).expect("kernels are submodules");
    let coker = f
        .dst()
        .quotient(&f.matrix().image_basis())
        .expect("images are submodules");
    let image_basis = coker.1.matrix().kernel_basis();
    let image = f.dst().submodule(&image_basis).expect("images are submodules");
    debug_assert_eq!(ker.0.dim() + image.0.dim(), f.src().dim());
    Kci { ker, coker, image }
}

/// A biproduct with its injections and projections.
#[derive(Debug, Clone)]
pub struct DirectSum {
    pub module: Mod,
    pub injections: Vec<MMap>,
    pub projections: Vec<MMap>,
}

pub fn direct_sum(alg: &Alg, mods: &[Mod]) -> Result<DirectSum> {
    let p = alg.prime();
    for m in mods {
        if m.alg() != alg {
            return Err(Error::AlgebraMismatch);
        }
    }
    let action = (0..alg.dim())
        .map(|i| {
            let parts: Vec<&Mat> = mods.iter().map(|m| &m.action()[i]).collect();
            Mat::block_diag(p, &parts)
        })
        .collect();
    let module = Mod::from_action_unchecked(alg, action)?;
    let total = module.dim();
    let mut injections = Vec::with_capacity(mods.len());
    let mut projections = Vec::with_capacity(mods.len());
    let mut off = 0;
    for m in mods {
        let mut inj = Mat::zeros(p, total, m.dim());
        inj.set_block(off, 0, &Mat::identity(p, m.dim()));
        projections.push(MMap::new_unchecked(&module, m, inj.transpose()));
        injections.push(MMap::new_unchecked(m, &module, inj));
        off += m.dim();
    }
    Ok(DirectSum {
        module,
        injections,
        projections,
    })
}

/// Columns spanning `M . rad`.
pub(crate) fn radical_of(m: &Mod) -> Mat {
    let p = m.prime();
    let parts: Vec<Mat> = m.alg().radical_basis().iter().map(|r| m.act(r)).collect();
    if parts.is_empty() {
        return Mat::zeros(p, m.dim(), 0);
    }
    let refs: Vec<&Mat> = parts.iter().collect();
    Mat::hstack(p, m.dim(), &refs).column_span()
}

/// `M / M rad` with the quotient map.
pub fn top(m: &Mod) -> (Mod, MMap) {
    m.quotient(&radical_of(m)).expect("radical is a submodule")
}

/// `{x : x rad = 0}` with the inclusion.
pub fn socle(m: &Mod) -> (Mod, MMap) {
    let p = m.prime();
    let parts: Vec<Mat> = m.alg().radical_basis().iter().map(|r| m.act(r)).collect();
    let basis = if parts.is_empty() {
        Mat::identity(p, m.dim())
    } else {
        let refs: Vec<&Mat> = parts.iter().collect();
        Mat::vstack(p, m.dim(), &refs).kernel_basis()
    };
    m.submodule(&basis).expect("socle is a submodule")
}

/// Minimal projective cover `P -> M`, with `P` a direct sum of the
/// indecomposable projectives in idempotent order.
pub fn projective_cover(m: &Mod) -> Result<(Mod, MMap)> {
    let p = m.prime();
    let alg = m.alg();
    let (_, pi) = top(m);
    let mut summands = Vec::new();
    let mut columns: Vec<Mat> = Vec::new();
    for (j, e) in alg.idempotents().iter().enumerate() {
        let block = m.act(e).image_basis();
        let mut chosen = Mat::zeros(p, m.dim(), 0);
        let mut rank = 0;
        for c in 0..block.cols() {
            let v = block.select_cols(&[c]);
            let trial = Mat::hstack(p, m.dim(), &[&chosen, &v]);
            let r = pi.matrix().mul(&trial).rank();
            if r > rank {
                rank = r;
                chosen = trial;
            }
        }
        if chosen.cols() == 0 {
            continue;
        }
        let pj = proj(alg, j);
        let pbasis = super::proj_basis(alg, j);
        for c in 0..chosen.cols() {
            let x = chosen.select_cols(&[c]);
            // e_j b -> x b
            let cols: Vec<Vec<u64>> = (0..pbasis.cols()).map(|k| m.act(&pbasis.col(k)).mul(&x).col(0)).collect();
            columns.push(Mat::from_cols(p, m.dim(), &cols));
            summands.push(pj.clone());
        }
    }
    let sum = direct_sum(alg, &summands)?;
    let refs: Vec<&Mat> = columns.iter().collect();
    let epi = Mat::hstack(p, m.dim(), &refs);
    if epi.rank() != m.dim() {
        return Err(Error::Internal("projective cover is not surjective".into()));
    }
    let ker = epi.kernel_basis();
    if !radical_of(&sum.module).spans(&ker) {
        return Err(Error::Internal("projective cover is not minimal".into()));
    }
    let epi = MMap::new_unchecked(&sum.module, m, epi);
    Ok((sum.module, epi))
}

/// Injective envelope `M -> I`, dual to the projective cover of the dual
/// over the opposite algebra.
pub fn injective_envelope(m: &Mod) -> Result<(Mod, MMap)> {
    let (q, epi) = projective_cover(&m.dual())?;
    let i = q.dual_over(m.alg());
    let mono = MMap::new_unchecked(m, &i, epi.matrix().transpose());
    Ok((i, mono))
}

/// A module map `l: P -> M` with `epi ∘ l = g`, if one exists.
pub fn lift(g: &MMap, epi: &MMap) -> Result<Option<MMap>> {
    let p = g.src().prime();
    let hb = hom_basis(g.src(), epi.src())?;
    let cols: Vec<Vec<u64>> = hb.matrices().iter().map(|b| epi.matrix().mul(b).flatten()).collect();
    let sys = Mat::from_cols(p, g.matrix().rows() * g.matrix().cols(), &cols);
    let Some(c) = sys.solve(&Mat::column_vector(p, &g.matrix().flatten()))? else {
        return Ok(None);
    };
    Ok(Some(MMap::new_unchecked(g.src(), epi.src(), hb.combine(&c.col(0)))))
}

pub fn is_projective(m: &Mod) -> bool {
    projective_cover(m).map(|(p, _)| p.dim() == m.dim()).unwrap_or(false)
}

pub fn is_injective(m: &Mod) -> bool {
    injective_envelope(m).map(|(i, _)| i.dim() == m.dim()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{preset, Preset};
    use crate::exactla::Prime;
    use crate::modcat::{hom_space, injective, is_isomorphic, regular, simple, zero};

    fn l1() -> Alg {
        preset(Preset::Lambda1, Prime::new(101).unwrap()).unwrap()
    }

    #[test]
    fn kernels_cokernels_images() {
        let a = l1();
        let p2 = proj(&a, 1);
        let s2 = simple(&a, 1);
        let f = hom_space(&p2, &s2).unwrap().remove(0);
        let k = kci(&f);
        assert_eq!(k.ker.0.dim(), 1);
        assert!(is_isomorphic(&k.ker.0, &simple(&a, 2)).is_some());
        assert_eq!(k.coker.0.dim(), 0);
        assert_eq!(k.image.0.dim(), 1);
        let id = kci(&MMap::identity(&p2));
        assert_eq!((id.ker.0.dim(), id.coker.0.dim(), id.image.0.dim()), (0, 0, 2));
        let z = kci(&MMap::zero(&p2, &s2));
        assert_eq!((z.ker.0.dim(), z.coker.0.dim()), (2, 1));
        for (m, f) in [&k.ker, &k.coker, &k.image] {
            let _ = m;
            MMap::new(f.src(), f.dst(), f.matrix().clone()).unwrap();
        }
    }

    #[test]
    fn sums() {
        let a = l1();
        assert_eq!(direct_sum(&a, &[]).unwrap().module.dim(), 0);
        let one = direct_sum(&a, &[proj(&a, 0)]).unwrap();
        assert_eq!(one.module, proj(&a, 0));
        // B = P1 + P2 + P2/soc
        let p2 = proj(&a, 1);
        let (soc, inc) = socle(&p2);
        assert_eq!(soc.dim(), 1);
        let q = p2.quotient(inc.matrix()).unwrap().0;
        let b = direct_sum(&a, &[proj(&a, 0), p2.clone(), q]).unwrap();
        assert_eq!(b.module.dim(), 6);
        let p = a.prime();
        for (i, inj) in b.injections.iter().enumerate() {
            for (j, pr) in b.projections.iter().enumerate() {
                let c = pr.compose(inj);
                let expect = if i == j { Mat::identity(p, c.src().dim()) } else { Mat::zeros(p, c.dst().dim(), c.src().dim()) };
                assert_eq!(*c.matrix(), expect);
            }
        }
    }

    #[test]
    fn tops_and_socles() {
        let a = l1();
        let s = simple(&a, 0);
        assert_eq!(top(&s).0.dim(), 1);
        assert_eq!(socle(&s).0.dim(), 1);
        assert!(is_isomorphic(&top(&proj(&a, 0)).0, &simple(&a, 0)).is_some());
        let t = preset(Preset::TruncPoly(3), Prime::new(101).unwrap()).unwrap();
        assert_eq!(socle(&regular(&t)).0.dim(), 1);
    }

    #[test]
    fn covers_and_envelopes() {
        let a = l1();
        let (p, epi) = projective_cover(&simple(&a, 0)).unwrap();
        assert_eq!(p.dim(), 3);
        let k = kci(&epi);
        assert_eq!(k.ker.0.dim(), 2);
        assert!(is_isomorphic(&k.ker.0, &proj(&a, 1)).is_some());
        let (p1, _) = projective_cover(&proj(&a, 0)).unwrap();
        assert_eq!(p1.dim(), 3);
        let (i, mono) = injective_envelope(&simple(&a, 2)).unwrap();
        assert_eq!(i.dim(), 3);
        MMap::new(mono.src(), mono.dst(), mono.matrix().clone()).unwrap();
        assert_eq!(mono.rank(), 1);
        assert_eq!(injective_envelope(&zero(&a)).unwrap().0.dim(), 0);
        let t = preset(Preset::TruncPoly(2), Prime::new(2).unwrap()).unwrap();
        assert_eq!(projective_cover(&simple(&t, 0)).unwrap().0.dim(), 2);
        assert_eq!(injective_envelope(&regular(&t)).unwrap().0.dim(), 2);
        assert!(is_injective(&injective(&a, 0)));
        assert!(!is_projective(&injective(&a, 0)));
        assert!(is_projective(&injective(&a, 2)));
    }
}
