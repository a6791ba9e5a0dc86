use rayon::prelude::*;

use crate::algebra::{algebra_iso_search, make_algebra, Alg, AlgData, AlgIso, Preset};
use crate::complexes::{factor_through, stalk, CMap, Cx, HomComplex};
use crate::error::{Error, Result};
use crate::exactla::Mat;
use crate::modcat::{
    direct_sum, hom_basis, indecomposables, is_isomorphic, make_module, module_label, proj, rad_hom,
    simple, DirectSum, Mod,
};

use super::{proj_resolution, Resolution};

/// A module given with its indecomposable summands.
#[derive(Debug, Clone)]
pub struct TiltingModule {
    pub name: String,
    pub summands: Vec<Mod>,
}

impl TiltingModule {
    pub fn new(name: &str, summands: Vec<Mod>) -> Result<TiltingModule> {
        if summands.is_empty() {
            return Err(Error::Usage("a tilting module needs at least one summand".into()));
        }
        Ok(TiltingModule { name: name.into(), summands })
    }

    pub fn alg(&self) -> &Alg {
        self.summands[0].alg()
    }

    pub fn module(&self) -> Result<Mod> {
        Ok(direct_sum(self.alg(), &self.summands)?.module)
    }
}

/// `B = P1 + P2 + S2` and `C = S1 + P1 + P3` over Λ1, or the regular module
/// `P1 + P2 + P3` over any basic algebra.
pub fn tilting_module(alg: &Alg, which: &str) -> Result<TiltingModule> {
    let need_lambda1 = || {
        if alg.preset() != Some(Preset::Lambda1) {
            return Err(Error::Usage(format!("module {which} is defined over lambda1 only")));
        }
        Ok(())
    };
    match which {
        "B" | "b" => {
            need_lambda1()?;
            TiltingModule::new("B", vec![proj(alg, 0), proj(alg, 1), simple(alg, 1)])
        }
        "C" | "c" => {
            need_lambda1()?;
            TiltingModule::new("C", vec![simple(alg, 0), proj(alg, 0), proj(alg, 2)])
        }
        "regular" | "R" => TiltingModule::new("regular", (0..alg.num_idempotents()).map(|j| proj(alg, j)).collect()),
        other => Err(Error::Usage(format!("unknown tilting module {other}"))),
    }
}

/// `End(T)` as an algebra with product `a b = a ∘ b`.
#[derive(Debug, Clone)]
pub struct EndAlg {
    pub alg: Alg,
    pub sum: DirectSum,
    /// Basis endomorphisms of `T`, in algebra basis order.
    pub basis: Vec<Mat>,
}

impl EndAlg {
    /// Coordinates of an endomorphism of `T`.
    pub fn coords(&self, f: &Mat) -> Option<Vec<u64>> {
        let p = f.prime();
        let n = self.sum.module.dim();
        let cols: Vec<Vec<u64>> = self.basis.iter().map(Mat::flatten).collect();
        let a = Mat::from_cols(p, n * n, &cols);
        let x = a.solve(&Mat::column_vector(p, &f.flatten())).ok()??;
        Some(x.col(0))
    }
}

pub fn end_algebra(t: &TiltingModule) -> Result<EndAlg> {
    let alg = t.alg();
    let p = alg.prime();
    let sum = direct_sum(alg, &t.summands)?;
    let r = t.summands.len();
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    let mut rad_local: Vec<(usize, Mat)> = Vec::new();
    for k in 0..r {
        for l in 0..r {
            let hb = hom_basis(&t.summands[k], &t.summands[l])?;
            let start = basis.len();
            for (i, m) in hb.matrices().iter().enumerate() {
                let full = sum.injections[l].matrix().mul(m).mul(sum.projections[k].matrix());
                basis.push(full);
                labels.push(format!("f{}{}.{}", k + 1, l + 1, i));
            }
            for g in rad_hom(&t.summands[k], &t.summands[l])? {
                let c = hb.coords(g.matrix()).ok_or_else(|| Error::Internal("radical map outside hom basis".into()))?;
                let mut v = Mat::zeros(p, hb.dim(), 1);
                for (i, x) in c.iter().enumerate() {
                    v.set(i, 0, *x);
                }
                rad_local.push((start, v));
            }
        }
    }
    let d = basis.len();
    let proto = EndAlg {
        alg: alg.clone(),
        sum,
        basis,
    };
    let coords = |f: &Mat| proto.coords(f).ok_or_else(|| Error::Internal("composite outside End(T)".into()));
    let mut sc = vec![0; d * d * d];
    for i in 0..d {
        for j in 0..d {
            let c = coords(&proto.basis[i].mul(&proto.basis[j]))?;
            sc[(i * d + j) * d..(i * d + j + 1) * d].copy_from_slice(&c);
        }
    }
    let idempotents: Vec<Vec<u64>> = (0..r)
        .map(|k| coords(&proto.sum.injections[k].matrix().mul(proto.sum.projections[k].matrix())))
        .collect::<Result<_>>()?;
    let mut unit = vec![0; d];
    for e in &idempotents {
        for (x, y) in unit.iter_mut().zip(e) {
            *x = p.add(*x, *y);
        }
    }
    let rad_cols: Vec<Vec<u64>> = rad_local
        .iter()
        .map(|(start, v)| {
            let mut col = vec![0; d];
            for i in 0..v.rows() {
                col[start + i] = v.get(i, 0);
            }
            col
        })
        .collect();
    let data = AlgData {
        p,
        labels,
        structconst: sc,
        unit,
        idempotents,
        idempotent_labels: t.summands.iter().map(module_label).collect(),
        radical: Mat::from_cols(p, d, &rad_cols),
    };
    Ok(EndAlg {
        alg: make_algebra(data)?,
        ..proto
    })
}

/// Which algebra matched the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    End,
    Opposite,
}

/// `dim H^degree RHom(T, Σ^shift src)` with its dimension vector over `End(T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TiltRow {
    pub src: String,
    pub shift: i64,
    pub degree: i64,
    pub dim: usize,
    pub dim_vector: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct TiltReport {
    pub module: String,
    pub target: String,
    pub end_dim: usize,
    pub side: Option<Side>,
    pub iso: Option<AlgIso>,
    pub rows: Vec<TiltRow>,
    /// Distinct (indecomposable, shift) pairs give non-isomorphic images.
    pub injective: bool,
    pub collisions: Vec<((String, i64), (String, i64))>,
}

/// Lifts of a basis of `End(T)` along the comparison `P_T -> T`.
fn lift_basis(e: &EndAlg, res: &Resolution) -> Result<Vec<CMap>> {
    let t = &res.target;
    e.basis
        .iter()
        .map(|phi| {
            let phi = CMap::new(t, t, vec![phi.clone()])?;
            let (g, _) = factor_through(&phi.compose(&res.comparison), &res.comparison)?
                .ok_or_else(|| Error::Internal("endomorphism does not lift to the resolution".into()))?;
            Ok(g)
        })
        .collect()
}

/// `H^n Hom•(P_T, x)` as a right `End(T)`-module, `u · a = u ∘ lift(a)`.
fn hom_module(e: &EndAlg, pt: &Cx, lifts: &[CMap], x: &Cx, n: i64) -> Result<Mod> {
    let hc = HomComplex::new(pt, x)?;
    let coh = hc.cohomology(n);
    let action = lifts
        .iter()
        .map(|g| {
            let op = hc.operator(n, &hc, n, |u| u.compose(g.graded()));
            coh.proj.mul(&coh.cocycle_coords).mul(&op).mul(&coh.cocycles).mul(&coh.section)
        })
        .collect();
    make_module(&e.alg, action)
}

/// The images `RHom(T, Σ^s x)` of all classified indecomposables `x` of the
/// base algebra for `s` in `window`, with the iso search of `End(T)` against
/// `target`.
pub fn tilting_check(t: &TiltingModule, target: &Alg, window: (i64, i64), cap: usize) -> Result<TiltReport> {
    let e = end_algebra(t)?;
    let (side, iso) = match algebra_iso_search(&e.alg, target) {
        Some(f) => (Some(Side::End), Some(f)),
        None => match algebra_iso_search(&e.alg.opposite(), target) {
            Some(f) => (Some(Side::Opposite), Some(f)),
            None => (None, None),
        },
    };
    let res = proj_resolution(&t.module()?, cap)?;
    let lifts = lift_basis(&e, &res)?;
    let indecs = indecomposables(t.alg())?;
    let jobs: Vec<(usize, i64)> = (0..indecs.len())
        .flat_map(|i| (window.0..=window.1).map(move |s| (i, s)))
        .collect();
    let images: Vec<Vec<(i64, Mod)>> = jobs
        .par_iter()
        .map(|&(i, s)| {
            let x = stalk(&indecs[i], -s);
            let hc = HomComplex::new(&res.res, &x)?;
            let (lo, hi) = hc.range();
            (lo..=hi)
                .filter(|&n| hc.h_dim(n) > 0)
                .map(|n| Ok((n, hom_module(&e, &res.res, &lifts, &x, n)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let label = |i: usize| module_label(&indecs[i]);
    let mut rows = Vec::new();
    for (&(i, s), img) in jobs.iter().zip(&images) {
        for (n, m) in img {
            rows.push(TiltRow {
                src: label(i),
                shift: s,
                degree: *n,
                dim: m.dim(),
                dim_vector: m.dim_vector(),
            });
        }
    }
    let same = |a: &[(i64, Mod)], b: &[(i64, Mod)]| {
        a.len() == b.len()
            && a.iter().zip(b).all(|((n, x), (m, y))| {
                n == m && x.dim_vector() == y.dim_vector() && is_isomorphic(x, y).is_some()
            })
    };
    let mut collisions = Vec::new();
    for a in 0..jobs.len() {
        for b in a + 1..jobs.len() {
            if same(&images[a], &images[b]) {
                collisions.push(((label(jobs[a].0), jobs[a].1), (label(jobs[b].0), jobs[b].1)));
            }
        }
    }
    Ok(TiltReport {
        module: t.name.clone(),
        target: target.name(),
        end_dim: e.alg.dim(),
        side,
        iso,
        rows,
        injective: collisions.is_empty(),
        collisions,
    })
}
