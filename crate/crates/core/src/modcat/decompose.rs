use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactla::Mat;

use super::hom::hom_basis;
use super::{MMap, Mod};

/// Enumerate every combination when the coefficient space has at most this
/// many points; sample otherwise.
const EXHAUSTIVE_LIMIT: u64 = 4096;
const RANDOM_TRIES: usize = 256;

/// An indecomposable summand with its multiplicity.
#[derive(Debug, Clone)]
pub struct Summand {
    pub module: Mod,
    pub multiplicity: usize,
}

/// Candidate coefficient vectors: unit vectors, then either all of
/// `F_p^h` or seeded random vectors.
fn sweep(p: u64, h: usize, seed: u64, mut visit: impl FnMut(&[u64]) -> bool) -> bool {
    for i in 0..h {
        let mut c = vec![0; h];
        c[i] = 1;
        if visit(&c) {
            return true;
        }
    }
    let total = (h as u32 <= 64).then(|| p.checked_pow(h as u32)).flatten();
    match total {
        Some(t) if t <= EXHAUSTIVE_LIMIT => {
            let mut c = vec![0u64; h];
            for mut idx in 1..t {
                for slot in c.iter_mut() {
                    *slot = idx % p;
                    idx /= p;
                }
                if visit(&c) {
                    return true;
                }
            }
            false
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..RANDOM_TRIES {
                let c: Vec<u64> = (0..h).map(|_| rng.random_range(0..p)).collect();
                if visit(&c) {
                    return true;
                }
            }
            false
        }
    }
}

/// Cheap isomorphism invariants: dimension vector and the ranks of the
/// generator actions.
pub(crate) fn signature(m: &Mod) -> Vec<usize> {
    let mut sig = vec![m.dim()];
    sig.extend(m.dim_vector());
    let gens: Vec<Mat> = m.alg().arrows().iter().map(|a| m.act(&a.element)).collect();
    for g in &gens {
        sig.push(g.rank());
        for h in &gens {
            sig.push(g.mul(h).rank());
        }
    }
    sig.push(super::structure::radical_of(m).cols());
    sig
}

/// An isomorphism `m -> n` if one exists.
pub fn is_isomorphic(m: &Mod, n: &Mod) -> Option<MMap> {
    is_isomorphic_seeded(m, n, 0)
}

pub fn is_isomorphic_seeded(m: &Mod, n: &Mod, seed: u64) -> Option<MMap> {
    if m.alg() != n.alg() || m.dim() != n.dim() || signature(m) != signature(n) {
        return None;
    }
    if m.dim() == 0 {
        return Some(MMap::zero(m, n));
    }
    let hb = hom_basis(m, n).ok()?;
    if hb.dim() == 0 {
        return None;
    }
    let mut found = None;
    sweep(m.prime().get(), hb.dim(), seed, |c| {
        let f = hb.combine(c);
        if f.is_invertible() {
            found = Some(MMap::new_unchecked(m, n, f));
            true
        } else {
            false
        }
    });
    found
}

fn is_nilpotent(f: &Mat) -> bool {
    f.pow(f.rows() as u32).is_zero()
}

/// A scalar `l` with `f - l` nilpotent, if there is one.
pub(crate) fn local_residue(f: &Mat) -> Option<u64> {
    let p = f.prime();
    let d = f.rows();
    if d == 0 {
        return Some(0);
    }
    let candidates: Vec<u64> = if !(d as u64).is_multiple_of(p.get()) {
        let tr = (0..d).fold(0, |acc, i| p.add(acc, f.get(i, i)));
        vec![p.mul(tr, p.inv(d as u64 % p.get()))]
    } else {
        (0..p.get()).collect()
    };
    candidates
        .into_iter()
        .find(|&l| is_nilpotent(&f.sub(&Mat::scalar(p, d, l))))
}

/// A non-nilpotent, non-invertible endomorphism, which splits `m` by
/// Fitting's lemma, or a certificate that `End(m)` is local.
fn splitting_endomorphism(m: &Mod, seed: u64) -> Result<Option<Mat>> {
    let p = m.prime();
    let d = m.dim();
    let hb = hom_basis(m, m)?;
    let id = Mat::identity(p, d);
    let splits = |f: &Mat| {
        let r = f.pow(d as u32).rank();
        r > 0 && r < d
    };
    let eigen_split = |f: &Mat| -> Option<Mat> {
        if splits(f) {
            return Some(f.clone());
        }
        (0..p.get())
            .map(|l| f.sub(&Mat::scalar(p, d, l)))
            .find(|g| splits(g))
    };
    let mut nil_parts = Vec::with_capacity(hb.dim());
    for f in hb.matrices() {
        if let Some(g) = eigen_split(f) {
            return Ok(Some(g));
        }
        match local_residue(f) {
            Some(l) => nil_parts.push(f.sub(&id.scale(l))),
            None => break,
        }
    }
    if nil_parts.len() == hb.dim() && generates_nilpotent(&nil_parts, d) {
        return Ok(None);
    }
    let mut found = None;
    sweep(p.get(), hb.dim(), seed, |c| {
        found = eigen_split(&hb.combine(c));
        found.is_some()
    });
    if found.is_none() {
        'outer: for a in &nil_parts {
            for b in &nil_parts {
                if let Some(g) = eigen_split(&a.mul(b)) {
                    found = Some(g);
                    break 'outer;
                }
            }
        }
    }
    match found {
        Some(g) => Ok(Some(g)),
        None => Err(Error::Internal(format!(
            "no splitting endomorphism found for a module of dimension {d}"
        ))),
    }
}

/// True when the associative algebra generated by `parts` is nilpotent,
/// that is every product of `d` factors vanishes.
fn generates_nilpotent(parts: &[Mat], d: usize) -> bool {
    if parts.is_empty() {
        return true;
    }
    let p = parts[0].prime();
    let flat = |ms: &[Mat]| -> Mat {
        let cols: Vec<Vec<u64>> = ms.iter().map(Mat::flatten).collect();
        Mat::from_cols(p, d * d, &cols).image_basis()
    };
    let unflat = |m: &Mat| -> Vec<Mat> { (0..m.cols()).map(|j| Mat::unflatten(p, d, d, &m.col(j))).collect() };
    let mut layer = unflat(&flat(parts));
    for _ in 0..=d {
        if layer.is_empty() {
            return true;
        }
        let prods: Vec<Mat> = layer
            .iter()
            .flat_map(|x| parts.iter().map(move |y| x.mul(y)))
            .filter(|m| !m.is_zero())
            .collect();
        if prods.is_empty() {
            return true;
        }
        layer = unflat(&flat(&prods));
    }
    false
}

/// Indecomposable summands `X` of `m`, each with its inclusion and
/// projection (`pr ∘ inc = id`, and the inclusions give a direct sum
/// decomposition).
pub fn split_fully(m: &Mod, seed: u64) -> Result<Vec<(Mod, MMap, MMap)>> {
    if m.dim() == 0 {
        return Ok(Vec::new());
    }
    let Some(g) = splitting_endomorphism(m, seed)? else {
        return Ok(vec![(m.clone(), MMap::identity(m), MMap::identity(m))]);
    };
    let p = m.prime();
    let d = m.dim();
    let gd = g.pow(d as u32);
    let kb = gd.kernel_basis();
    let ib = gd.image_basis();
    let change = Mat::hstack(p, d, &[&kb, &ib]);
    let inv = change.inverse().ok_or_else(|| Error::Internal("Fitting decomposition".into()))?;
    let mut out = Vec::new();
    for (basis, r0) in [(kb.clone(), 0), (ib.clone(), kb.cols())] {
        let (sub, inc) = m.submodule_with_basis(&basis)?;
        let pr = MMap::new_unchecked(m, &sub, inv.block(r0, 0, basis.cols(), d));
        for (x, i, q) in split_fully(&sub, seed)? {
            out.push((x, inc.compose(&i), q.compose(&pr)));
        }
    }
    Ok(out)
}

/// Indecomposable summands grouped into isomorphism classes.
pub fn decompose(m: &Mod) -> Result<Vec<Summand>> {
    decompose_seeded(m, 0)
}

pub fn decompose_seeded(m: &Mod, seed: u64) -> Result<Vec<Summand>> {
    let mut classes: Vec<Summand> = Vec::new();
    for (x, _, _) in split_fully(m, seed)? {
        match classes.iter_mut().find(|s| is_isomorphic_seeded(&s.module, &x, seed).is_some()) {
            Some(s) => s.multiplicity += 1,
            None => classes.push(Summand {
                module: x,
                multiplicity: 1,
            }),
        }
    }
    Ok(classes)
}

pub fn is_indecomposable(m: &Mod) -> bool {
    m.dim() > 0 && matches!(splitting_endomorphism(m, 0), Ok(None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{preset, Preset};
    use crate::exactla::Prime;
    use crate::modcat::{direct_sum, proj, regular, simple, socle};

    #[test]
    fn regular_module_splits_into_projectives() {
        for q in [2, 3, 101] {
            let a = preset(Preset::Lambda1, Prime::new(q).unwrap()).unwrap();
            let parts = decompose(&regular(&a)).unwrap();
            assert_eq!(parts.len(), 3);
            for j in 0..3 {
                assert!(parts.iter().any(|s| s.multiplicity == 1 && is_isomorphic(&s.module, &proj(&a, j)).is_some()));
            }
        }
    }

    #[test]
    fn simple_and_repeated_summands() {
        let a = preset(Preset::Lambda2, Prime::new(3).unwrap()).unwrap();
        let s = simple(&a, 1);
        let parts = decompose(&s).unwrap();
        assert_eq!((parts.len(), parts[0].multiplicity), (1, 1));
        let sum = direct_sum(&a, &[s.clone(), proj(&a, 0), s.clone(), s]).unwrap().module;
        let mut mult: Vec<usize> = decompose(&sum).unwrap().iter().map(|s| s.multiplicity).collect();
        mult.sort();
        assert_eq!(mult, vec![1, 3]);
    }

    #[test]
    fn radical_of_p1_is_p2() {
        let a = preset(Preset::Lambda1, Prime::new(101).unwrap()).unwrap();
        let p1 = proj(&a, 0);
        let rad = p1.submodule(&super::super::structure::radical_of(&p1)).unwrap().0;
        let iso = is_isomorphic(&proj(&a, 1), &rad).unwrap();
        assert!(iso.is_iso());
        assert!(is_isomorphic(&simple(&a, 0), &simple(&a, 1)).is_none());
        assert!(is_indecomposable(&p1));
        let (soc, _) = socle(&p1);
        assert!(is_indecomposable(&soc));
    }

    #[test]
    fn fitting_pieces_reassemble() {
        let a = preset(Preset::TruncPoly(3), Prime::new(5).unwrap()).unwrap();
        let m = direct_sum(&a, &[regular(&a), simple(&a, 0)]).unwrap().module;
        let pieces = split_fully(&m, 7).unwrap();
        assert_eq!(pieces.len(), 2);
        let p = a.prime();
        let mut total = Mat::zeros(p, m.dim(), m.dim());
        for (_, inc, pr) in &pieces {
            assert_eq!(*pr.compose(inc).matrix(), Mat::identity(p, inc.src().dim()));
            total = total.add(inc.compose(pr).matrix());
        }
        assert_eq!(total, Mat::identity(p, m.dim()));
    }
}
