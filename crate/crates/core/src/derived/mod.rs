//! Derived-category computations: projective and injective resolutions,
//! `Hom_D` and `Ext`, invertibility in `D`, dg endomorphism algebras, the
//! idempotent slice functor and tilting checks.

mod dg;
mod slice;
mod tilt;

use crate::algebra::{Alg, GlobalDim};
use crate::complexes::{factor_through, is_quasi_iso, null_homotopy, stalk, CMap, Cx, HomComplex, Htp};
use crate::error::{Error, Result};
use crate::exactla::Mat;
use crate::modcat::{direct_sum, injective_envelope, is_injective, is_projective, kci, lift, projective_cover, Mod};

pub use dg::{dg_cohomology_dims, dg_end, DGAlg};
pub use slice::{idempotent_slice, Slice};
pub use tilt::{end_algebra, tilting_check, tilting_module, EndAlg, Side, TiltRow, TiltReport, TiltingModule};

/// Which kind of components a resolution has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Projective,
    Injective,
}

/// A resolution with its comparison map: `res -> target` for projective
/// resolutions, `target -> res` for injective ones.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub kind: Kind,
    pub target: Cx,
    pub res: Cx,
    pub comparison: CMap,
    pub cap: usize,
    /// Dimension of the surviving syzygy when the cap cut the resolution.
    pub exhausted: Option<usize>,
}

impl Resolution {
    /// Number of degrees beyond the target's support.
    pub fn length(&self) -> usize {
        match self.kind {
            Kind::Projective => (self.target.lo() - self.res.lo()).max(0) as usize,
            Kind::Injective => (self.res.hi() - self.target.hi()).max(0) as usize,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.exhausted.is_none()
    }
}

fn has_finite_global_dim(alg: &Alg) -> bool {
    matches!(alg.global_dim(), GlobalDim::Finite(_))
}

/// Projective resolution of a bounded complex, cut after `cap` degrees
/// below its support.
///
/// Built from the top: with `P^m` known for `m > n`, the degree-`n` cycles
/// `Z` of the partial cone `P^(n+1) ⊕ X^n` modulo `d X^(n-1)` are covered
/// by a projective `P^n`, lifted into `Z`, and split into `-d_P` and the
/// comparison map. The cone is then exact in degree `n`.
pub fn resolve_truncated(x: &Cx, cap: usize) -> Result<Resolution> {
    let alg = x.alg();
    let p = x.prime();
    let x = x.trimmed();
    let zero_mod = crate::modcat::zero(alg);
    // (n, P^n, d_P^n : P^n -> P^(n+1), phi^n : P^n -> X^n), top down.
    let mut built: Vec<(i64, Mod, Mat, Mat)> = Vec::new();
    let mut exhausted = None;
    let stop = x.lo() - cap as i64;
    let mut n = x.hi();
    while n >= x.lo() || !built.is_empty() {
        let (p1, dp1, phi1) = match built.last() {
            Some((m, pm, d, f)) if *m == n + 1 => (pm.clone(), d.clone(), f.clone()),
            _ => (zero_mod.clone(), Mat::zeros(p, 0, 0), Mat::zeros(p, x.dim(n + 1), 0)),
        };
        let p2dim = dp1.rows();
        let amb = direct_sum(alg, &[p1.clone(), x.obj(n).clone()])?.module;
        let dmat = Mat::hstack(
            p,
            p2dim + x.dim(n + 1),
            &[
                &Mat::vstack(p, p1.dim(), &[&dp1.neg(), &phi1]),
                &Mat::vstack(p, x.dim(n), &[&Mat::zeros(p, p2dim, x.dim(n)), &x.d(n)]),
            ],
        );
        let zb = dmat.kernel_basis();
        let (z, _) = amb.submodule_with_basis(&zb)?;
        let zc = if zb.cols() > 0 {
            zb.left_inverse().expect("basis")
        } else {
            Mat::zeros(p, 0, amb.dim())
        };
        let bd = Mat::vstack(p, x.dim(n - 1), &[&Mat::zeros(p, p1.dim(), x.dim(n - 1)), &x.d(n - 1)]);
        let (q, qmap) = z.quotient(&zc.mul(&bd).image_basis())?;
        if q.dim() == 0 && n < x.lo() {
            break;
        }
        if n < stop {
            exhausted = Some(q.dim());
            break;
        }
        let (pn, pi) = projective_cover(&q)?;
        let l = lift(&pi, &qmap)?.ok_or_else(|| Error::Internal("projective does not lift".into()))?;
        let into_amb = zb.mul(l.matrix());
        let rows_top: Vec<usize> = (0..p1.dim()).collect();
        let rows_bot: Vec<usize> = (p1.dim()..amb.dim()).collect();
        let dpn = into_amb.select_rows(&rows_top).neg();
        let phin = into_amb.select_rows(&rows_bot);
        built.push((n, pn, dpn, phin));
        n -= 1;
    }
    built.reverse();
    // Drop zero components at the top.
    while built.last().is_some_and(|b| b.1.dim() == 0) {
        built.pop();
    }
    while built.first().is_some_and(|b| b.1.dim() == 0) {
        built.remove(0);
    }
    let lo = built.first().map(|b| b.0).unwrap_or(0);
    let objects: Vec<Mod> = built.iter().map(|b| b.1.clone()).collect();
    // d_P^n is stored with the object in degree n.
    let diffs: Vec<Mat> = built.iter().take(built.len().saturating_sub(1)).map(|b| b.2.clone()).collect();
    let res = Cx::build(alg, lo, objects, diffs)?;
    res.validate()?;
    let comps = built.iter().map(|b| b.3.clone()).collect();
    let comparison = CMap::new(&res, &x, comps)?;
    if res.degrees().any(|n| !is_projective(res.obj(n))) {
        return Err(Error::Internal("resolution has a non-projective component".into()));
    }
    if exhausted.is_none() && !is_quasi_iso(&comparison) {
        return Err(Error::Internal("resolution comparison is not a quasi-isomorphism".into()));
    }
    Ok(Resolution {
        kind: Kind::Projective,
        target: x,
        res,
        comparison,
        cap,
        exhausted,
    })
}

/// Projective resolution `P -> X` of a bounded complex; fails when `cap`
/// degrees below the support do not suffice.
pub fn resolve_complex(x: &Cx, cap: usize) -> Result<Resolution> {
    let r = resolve_truncated(x, cap)?;
    match r.exhausted {
        Some(d) => Err(Error::CapExhausted { cap, syzygy_dim: d }),
        None => Ok(r),
    }
}

/// Minimal projective resolution of a module. A cut resolution is returned
/// (flagged) only for algebras of infinite or unknown global dimension.
pub fn proj_resolution(m: &Mod, cap: usize) -> Result<Resolution> {
    if cap == 0 {
        return Err(Error::Usage("cap must be at least 1".into()));
    }
    let r = resolve_truncated(&stalk(m, 0), cap)?;
    match r.exhausted {
        Some(d) if has_finite_global_dim(m.alg()) => Err(Error::CapExhausted { cap, syzygy_dim: d }),
        _ => Ok(r),
    }
}

/// Minimal injective resolution `M -> I^0 -> I^1 -> ...` by iterated
/// injective envelopes of cosyzygies.
pub fn inj_resolution(m: &Mod, cap: usize) -> Result<Resolution> {
    if cap == 0 {
        return Err(Error::Usage("cap must be at least 1".into()));
    }
    let alg = m.alg();
    let (i0, mono0) = injective_envelope(m)?;
    let mut objects = vec![i0];
    let mut diffs = Vec::new();
    let mut cur = mono0.clone();
    let mut exhausted = None;
    loop {
        let coker = kci(&cur).coker;
        if coker.0.dim() == 0 {
            break;
        }
        if objects.len() > cap {
            exhausted = Some(coker.0.dim());
            break;
        }
        let (next, mono) = injective_envelope(&coker.0)?;
        diffs.push(mono.matrix().mul(coker.1.matrix()));
        cur = mono.compose(&coker.1);
        objects.push(next);
    }
    let res = Cx::build(alg, 0, objects, diffs)?;
    res.validate()?;
    let target = stalk(m, 0);
    let comparison = CMap::new(&target, &res, vec![mono0.into_matrix()])?;
    if let Some(d) = exhausted.filter(|_| has_finite_global_dim(alg)) {
        return Err(Error::CapExhausted { cap, syzygy_dim: d });
    }
    if exhausted.is_none() && !is_quasi_iso(&comparison) {
        return Err(Error::Internal("injective resolution is not a quasi-isomorphism".into()));
    }
    Ok(Resolution {
        kind: Kind::Injective,
        target,
        res,
        comparison,
        cap,
        exhausted,
    })
}

fn h_dim_of(x: &Cx, y: &Cx, n: i64, cap: usize) -> Result<(usize, bool)> {
    let r = resolve_truncated(x, cap)?;
    Ok((HomComplex::new(&r.res, y)?.h_dim(n), r.exhausted.is_some()))
}

/// `dim Hom_D(x, Σ^n y)`, computed as `H^n Hom•(P, y)` for a projective
/// resolution `P` of `x`. Cut resolutions are recomputed at `cap + 2`, and
/// the two answers must agree.
pub fn hom_derived(x: &Cx, y: &Cx, n: i64, cap: usize) -> Result<usize> {
    let (d, cut) = h_dim_of(x, y, n, cap)?;
    if !cut {
        return Ok(d);
    }
    if has_finite_global_dim(x.alg()) {
        let r = resolve_truncated(x, cap)?;
        return Err(Error::CapExhausted {
            cap,
            syzygy_dim: r.exhausted.unwrap_or(0),
        });
    }
    let (d2, _) = h_dim_of(x, y, n, cap + 2)?;
    if d != d2 {
        return Err(Error::Unstable(cap, d, d2));
    }
    Ok(d)
}

/// `dim Ext^degree(m, n)` from a projective resolution of `m`.
pub fn ext(m: &Mod, n: &Mod, degree: usize, cap: usize) -> Result<usize> {
    let r = proj_resolution(m, cap)?;
    let y = stalk(n, 0);
    let d = HomComplex::new(&r.res, &y)?.h_dim(degree as i64);
    if r.is_complete() {
        return Ok(d);
    }
    let r2 = proj_resolution(m, cap + 2)?;
    let d2 = HomComplex::new(&r2.res, &y)?.h_dim(degree as i64);
    if d != d2 {
        return Err(Error::Unstable(cap, d, d2));
    }
    Ok(d)
}

/// The inverse of a quasi-isomorphism `f: X -> Y` in `D`: a map
/// `g: P_Y -> X` from a resolution of `Y` with `f g ~ π_Y`, a lift
/// `f̃: P_X -> P_Y` with `π_Y f̃ ~ f π_X`, and `g f̃ ~ π_X`.
#[derive(Debug, Clone)]
pub struct DInverse {
    pub src_res: Resolution,
    pub dst_res: Resolution,
    pub g: CMap,
    pub lift: CMap,
    pub htps: [Htp; 3],
}

impl DInverse {
    pub fn verify(&self, f: &CMap) -> Result<()> {
        let (px, py) = (&self.src_res.comparison, &self.dst_res.comparison);
        let expected = [
            (f.compose(&self.g), py.clone()),
            (py.compose(&self.lift), f.compose(px)),
            (self.g.compose(&self.lift), px.clone()),
        ];
        for (h, (l, r)) in self.htps.iter().zip(&expected) {
            h.verify()?;
            if h.phi != *l || h.psi != *r {
                return Err(Error::Certificate("inverse-in-D homotopy does not match its maps".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct DIso {
    pub is_iso: bool,
    pub cert: Option<DInverse>,
}

/// Whether `f` is invertible in `D` (a quasi-isomorphism), with an
/// inverse certificate when it is.
pub fn is_iso_in_d(f: &CMap, cap: usize) -> Result<DIso> {
    if !is_quasi_iso(f) {
        return Ok(DIso {
            is_iso: false,
            cert: None,
        });
    }
    let rx = resolve_complex(f.src(), cap)?;
    let ry = resolve_complex(f.dst(), cap)?;
    let fail = |what: &str| Error::Certificate(format!("quasi-isomorphism without {what}"));
    let (g, h1) = factor_through(&ry.comparison, f)?.ok_or_else(|| fail("a factorization through f"))?;
    let (lift, h2) = factor_through(&f.compose(&rx.comparison), &ry.comparison)?.ok_or_else(|| fail("a lift"))?;
    let h3 = null_homotopy(&g.compose(&lift), &rx.comparison)?.ok_or_else(|| fail("a round trip"))?;
    let cert = DInverse {
        src_res: rx,
        dst_res: ry,
        g,
        lift,
        htps: [h1, h2, h3],
    };
    cert.verify(f)?;
    Ok(DIso {
        is_iso: true,
        cert: Some(cert),
    })
}

/// `(dim H^0 Hom•(I, x), dim H^0 Hom•(m, x))` for the injective resolution
/// `I` of `m` and a complex `x` of injectives.
pub fn khom_agreement(m: &Mod, x: &Cx, cap: usize) -> Result<(usize, usize)> {
    for n in x.degrees() {
        if !is_injective(x.obj(n)) {
            return Err(Error::InvalidComplex(format!("component in degree {n} is not injective")));
        }
    }
    let r = inj_resolution(m, cap)?;
    let from_res = HomComplex::new(&r.res, x)?.h_dim(0);
    let from_stalk = HomComplex::new(&stalk(m, 0), x)?.h_dim(0);
    Ok((from_res, from_stalk))
}
