use rand::Rng;

use crate::algebra::Alg;
use crate::error::{Error, Result};
use crate::exactla::Mat;
use crate::modcat::{direct_sum, hom_basis, Mod};

use super::homcx::HomComplex;
use super::maps::{CMap, GMap};
use super::{make_complex, Cx};

/// Shape bounds for random complexes.
#[derive(Debug, Clone)]
pub struct RandomSpec {
    /// Maximal number of degrees.
    pub max_len: usize,
    /// Maximal dimension of each component.
    pub max_dim: usize,
    /// Lowest degree is drawn from `lo_range`.
    pub lo_range: (i64, i64),
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            max_len: 5,
            max_dim: 6,
            lo_range: (-2, 0),
        }
    }
}

fn random_coeffs(rng: &mut impl Rng, p: u64, n: usize) -> Vec<u64> {
    (0..n).map(|_| rng.random_range(0..p)).collect()
}

/// A random direct sum of catalog modules of dimension at most `max_dim`.
fn random_object(alg: &Alg, catalog: &[Mod], max_dim: usize, rng: &mut impl Rng) -> Result<Mod> {
    let mut parts = Vec::new();
    let mut dim = 0;
    for _ in 0..4 {
        let m = &catalog[rng.random_range(0..catalog.len())];
        if dim + m.dim() <= max_dim {
            dim += m.dim();
            parts.push(m.clone());
        }
        if rng.random_range(0..3) == 0 {
            break;
        }
    }
    Ok(direct_sum(alg, &parts)?.module)
}

/// A random element of `{ d in Hom(a, b) : d prev = 0 }`.
fn random_differential(a: &Mod, b: &Mod, prev: &Mat, rng: &mut impl Rng) -> Result<Mat> {
    let p = a.prime();
    let hb = hom_basis(a, b)?;
    if hb.dim() == 0 {
        return Ok(Mat::zeros(p, b.dim(), a.dim()));
    }
    let cols: Vec<Vec<u64>> = hb.matrices().iter().map(|m| m.mul(prev).flatten()).collect();
    let ker = Mat::from_cols(p, b.dim() * prev.cols(), &cols).kernel_basis();
    let c = ker.mul(&Mat::column_vector(p, &random_coeffs(rng, p.get(), ker.cols())));
    Ok(hb.combine(&c.col(0)))
}

/// A random bounded complex whose components are sums of catalog modules
/// and whose differentials are random among those with `d d = 0`.
pub fn random_complex(alg: &Alg, catalog: &[Mod], spec: &RandomSpec, rng: &mut impl Rng) -> Result<Cx> {
    if catalog.is_empty() || spec.max_len == 0 {
        return Err(Error::Usage("random complexes need a catalog and a positive length".into()));
    }
    let p = alg.prime();
    let len = rng.random_range(1..=spec.max_len);
    let lo = rng.random_range(spec.lo_range.0..=spec.lo_range.1);
    let objects: Vec<Mod> = (0..len).map(|_| random_object(alg, catalog, spec.max_dim, rng)).collect::<Result<_>>()?;
    let mut diffs = Vec::new();
    let mut prev = Mat::zeros(p, objects[0].dim(), 0);
    for k in 0..len - 1 {
        let d = random_differential(&objects[k], &objects[k + 1], &prev, rng)?;
        prev = d.clone();
        diffs.push(d);
    }
    make_complex(alg, lo, objects, diffs)
}

/// A random degree-`n` cocycle of `hc`.
pub fn random_cocycle(hc: &HomComplex, n: i64, rng: &mut impl Rng) -> GMap {
    let p = hc.src().prime();
    let z = hc.d_matrix(n).kernel_basis();
    let c = z.mul(&Mat::column_vector(p, &random_coeffs(rng, p.get(), z.cols())));
    hc.element(n, &c.col(0))
}

/// A random chain map `x -> y`.
pub fn random_chain_map(x: &Cx, y: &Cx, rng: &mut impl Rng) -> Result<CMap> {
    let hc = HomComplex::new(x, y)?;
    let f = CMap::new(x, y, random_cocycle(&hc, 0, rng).comps().to_vec())?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{preset, Preset};
    use crate::exactla::Prime;
    use crate::modcat::{proj, simple};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_complexes_are_valid_and_reproducible() {
        let a = preset(Preset::Lambda1, Prime::new(101).unwrap()).unwrap();
        let cat: Vec<Mod> = (0..3).flat_map(|j| [proj(&a, j), simple(&a, j)]).collect();
        let spec = RandomSpec::default();
        for seed in 0..10 {
            let x = random_complex(&a, &cat, &spec, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            let y = random_complex(&a, &cat, &spec, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert_eq!(x, y);
            assert!(x.len() <= 5 && x.dims().iter().all(|&d| d <= 6));
            let f = random_chain_map(&x, &x, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            f.validate().unwrap();
        }
    }
}
