use crate::algebra::Alg;
use crate::complexes::{make_complex, CMap, Cx};
use crate::error::{Error, Result};
use crate::exactla::Mat;
use crate::modcat::{make_module, MMap, Mod};

/// The functor `X -> X e` from `Λ`-modules to `Γ = eΛe`-modules, where `e`
/// is a sum of designated idempotents.
#[derive(Debug, Clone)]
pub struct Slice {
    pub source: Alg,
    pub gamma: Alg,
    /// Columns embed the basis of `Γ` into `Λ`.
    pub embed: Mat,
    pub e: Vec<u64>,
}

impl Slice {
    pub fn new(alg: &Alg, which: &[usize]) -> Result<Slice> {
        let (gamma, embed) = alg.corner(which)?;
        let p = alg.prime();
        let mut e = vec![0; alg.dim()];
        for &j in which {
            for (x, y) in e.iter_mut().zip(&alg.idempotents()[j]) {
                *x = p.add(*x, *y);
            }
        }
        Ok(Slice { source: alg.clone(), gamma, embed, e })
    }

    /// `(X e, B, L)`: the sliced module, the columns `B` spanning `X e`
    /// inside `X`, and a left inverse `L` of `B`.
    fn frame(&self, m: &Mod) -> Result<(Mod, Mat, Mat)> {
        let b = m.act(&self.e).image_basis();
        let l = b.left_inverse().unwrap_or_else(|| Mat::zeros(m.prime(), 0, m.dim()));
        let action = (0..self.gamma.dim())
            .map(|k| l.mul(&m.act(&self.embed.col(k))).mul(&b))
            .collect();
        Ok((make_module(&self.gamma, action)?, b, l))
    }

    pub fn module(&self, m: &Mod) -> Result<Mod> {
        self.check(m.alg())?;
        Ok(self.frame(m)?.0)
    }

    pub fn map(&self, f: &MMap) -> Result<MMap> {
        self.check(f.src().alg())?;
        let (s, bs, _) = self.frame(f.src())?;
        let (t, _, lt) = self.frame(f.dst())?;
        MMap::new(&s, &t, lt.mul(f.matrix()).mul(&bs))
    }

    pub fn complex(&self, x: &Cx) -> Result<Cx> {
        self.check(x.alg())?;
        if x.is_empty() {
            return Ok(Cx::zero_complex(&self.gamma));
        }
        let frames: Vec<_> = x.degrees().map(|n| self.frame(x.obj(n))).collect::<Result<_>>()?;
        let diffs = x
            .degrees()
            .skip(1)
            .map(|n| {
                let i = (n - x.lo()) as usize;
                frames[i].2.mul(&x.d(n - 1)).mul(&frames[i - 1].1)
            })
            .collect();
        make_complex(&self.gamma, x.lo(), frames.into_iter().map(|f| f.0).collect(), diffs)
    }

    pub fn chain_map(&self, f: &CMap) -> Result<CMap> {
        let (s, t) = (self.complex(f.src())?, self.complex(f.dst())?);
        let comps = f
            .src()
            .degrees()
            .map(|n| {
                let bs = self.frame(f.src().obj(n))?.1;
                let lt = self.frame(f.dst().obj(n))?.2;
                Ok(lt.mul(&f.comp(n)).mul(&bs))
            })
            .collect::<Result<_>>()?;
        CMap::new(&s, &t, comps)
    }

    fn check(&self, alg: &Alg) -> Result<()> {
        if alg != &self.source {
            return Err(Error::Usage("slice applied to a module over another algebra".into()));
        }
        Ok(())
    }
}

/// `X e` for the sum `e` of the designated idempotents in `which`.
pub fn idempotent_slice(which: &[usize], x: &Cx) -> Result<Cx> {
    Slice::new(x.alg(), which)?.complex(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{preset, Preset};
    use crate::complexes::{cone, stalk};
    use crate::exactla::Prime;
    use crate::modcat::{is_isomorphic, proj, regular, simple};

    fn lambda1() -> Alg {
        preset(Preset::Lambda1, Prime::new(101).unwrap()).unwrap()
    }

    #[test]
    fn unit_slice_is_the_identity() {
        let a = lambda1();
        let sl = Slice::new(&a, &[0, 1, 2]).unwrap();
        assert_eq!(sl.gamma.dim(), a.dim());
        let m = sl.module(&proj(&a, 0)).unwrap();
        assert_eq!(m.dim(), 3);
    }

    #[test]
    fn corner_of_the_regular_module() {
        let a = lambda1();
        let sl = Slice::new(&a, &[0]).unwrap();
        assert_eq!(sl.gamma.dim(), 1);
        let x = idempotent_slice(&[0], &stalk(&regular(&a), 0)).unwrap();
        assert_eq!(x.dims(), vec![1]);
        for j in 0..3 {
            let s = sl.module(&simple(&a, j)).unwrap();
            assert_eq!(s.dim(), usize::from(j == 0));
        }
        let p = sl.module(&proj(&a, 0)).unwrap();
        assert!(is_isomorphic(&p, &regular(&sl.gamma)).is_some());
    }

    #[test]
    fn slices_commute_with_cohomology() {
        let a = lambda1();
        let sl = Slice::new(&a, &[1, 2]).unwrap();
        let id = CMap::identity(&stalk(&proj(&a, 0), 0));
        let (c, _) = cone(&id);
        let sc = sl.complex(&c).unwrap();
        assert!(sc.is_acyclic());
        let f = crate::modcat::projective_cover(&simple(&a, 1)).unwrap().1;
        let fx = CMap::new(&stalk(f.src(), 0), &stalk(f.dst(), 0), vec![f.matrix().clone()]).unwrap();
        let (cf, _) = cone(&fx);
        let s = sl.complex(&cf).unwrap();
        for (n, h) in cf.cohomology() {
            assert_eq!(s.cohomology_at(n).module.dim(), sl.module(&h).unwrap().dim());
        }
        let g = sl.chain_map(&fx).unwrap();
        g.validate().unwrap();
    }
}
