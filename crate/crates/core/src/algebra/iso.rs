use crate::exactla::Mat;

use super::Alg;

/// A verified algebra isomorphism `A -> B` with its inverse, as matrices in
/// the structure-constant bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgIso {
    pub forward: Mat,
    pub backward: Mat,
}

impl AlgIso {
    /// Checks that both maps preserve the unit and all basis products and
    /// are mutually inverse.
    pub fn verify(&self, a: &Alg, b: &Alg) -> bool {
        let p = a.prime();
        self.forward.shape() == (b.dim(), a.dim())
            && self.backward.shape() == (a.dim(), b.dim())
            && self.forward.mul(&self.backward) == Mat::identity(p, b.dim())
            && self.backward.mul(&self.forward) == Mat::identity(p, a.dim())
            && is_algebra_map(&self.forward, a, b)
            && is_algebra_map(&self.backward, b, a)
    }
}

fn apply(m: &Mat, v: &[u64]) -> Vec<u64> {
    m.mul(&Mat::column_vector(m.prime(), v)).col(0)
}

fn is_algebra_map(f: &Mat, a: &Alg, b: &Alg) -> bool {
    if apply(f, a.unit()) != b.unit() {
        return false;
    }
    let imgs: Vec<Vec<u64>> = (0..a.dim()).map(|i| f.col(i)).collect();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let lhs = apply(f, &a.mul(&a.basis_vector(i), &a.basis_vector(j)));
            if lhs != b.mul(&imgs[i], &imgs[j]) {
                return false;
            }
        }
    }
    true
}

fn cartan(a: &Alg) -> Vec<Vec<usize>> {
    let es = a.idempotents();
    es.iter()
        .map(|ei| {
            es.iter()
                .map(|ej| {
                    let cols: Vec<Vec<u64>> =
                        (0..a.dim()).map(|k| a.mul(&a.mul(ei, &a.basis_vector(k)), ej)).collect();
                    Mat::from_cols(a.prime(), a.dim(), &cols).rank()
                })
                .collect()
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out.sort();
    out
}

/// Searches for an isomorphism `a -> b`.
///
/// Idempotents are matched up to a permutation preserving the Cartan
/// matrices `dim e_i A e_j`; arrows (a complement of rad^2 in rad, chosen in
/// Peirce blocks) are sent to arrows of the matching block, and the map is
/// extended multiplicatively along words in idempotents and arrows. Every
/// returned isomorphism is verified. The search is complete when each
/// Peirce block of rad/rad^2 has dimension at most one and the relations
/// are monomial, which covers all named presets.
pub fn algebra_iso_search(a: &Alg, b: &Alg) -> Option<AlgIso> {
    if a.prime() != b.prime() || a.dim() != b.dim() {
        return None;
    }
    let p = a.prime();
    let d = a.dim();
    if a.structconsts() == b.structconsts() && a.unit() == b.unit() {
        let id = Mat::identity(p, d);
        let iso = AlgIso {
            forward: id.clone(),
            backward: id,
        };
        if iso.verify(a, b) {
            return Some(iso);
        }
    }
    if !a.is_basic() || !b.is_basic() || a.num_idempotents() != b.num_idempotents() {
        return None;
    }
    let n = a.num_idempotents();
    let (ca, cb) = (cartan(a), cartan(b));
    for sigma in permutations(n) {
        if (0..n).any(|i| (0..n).any(|j| ca[i][j] != cb[sigma[i]][sigma[j]])) {
            continue;
        }
        for images in arrow_assignments(a, b, &sigma) {
            if let Some(iso) = extend(a, b, &sigma, &images) {
                return Some(iso);
            }
        }
    }
    None
}

/// For each arrow of `a`, an image arrow of `b` in the block matched by
/// `sigma`; all bijections within each block are tried.
fn arrow_assignments(a: &Alg, b: &Alg, sigma: &[usize]) -> Vec<Vec<Vec<u64>>> {
    let mut choices: Vec<Vec<Vec<u64>>> = vec![vec![]];
    let mut blocks: Vec<(usize, usize)> = a.arrows().iter().map(|x| (x.from, x.to)).collect();
    blocks.dedup();
    let mut order: Vec<usize> = Vec::new();
    let mut per_block: Vec<Vec<Vec<Vec<u64>>>> = Vec::new();
    for &(i, j) in &blocks {
        let src: Vec<usize> = (0..a.arrows().len())
            .filter(|&k| (a.arrows()[k].from, a.arrows()[k].to) == (i, j))
            .collect();
        let tgt: Vec<Vec<u64>> = b
            .arrows()
            .iter()
            .filter(|x| (x.from, x.to) == (sigma[i], sigma[j]))
            .map(|x| x.element.clone())
            .collect();
        if src.len() != tgt.len() {
            return vec![];
        }
        order.extend(&src);
        per_block.push(
            permutations(tgt.len())
                .into_iter()
                .map(|perm| perm.iter().map(|&t| tgt[t].clone()).collect())
                .collect(),
        );
    }
    for options in per_block {
        let mut next = Vec::new();
        for prefix in &choices {
            for opt in &options {
                let mut v = prefix.clone();
                v.extend(opt.iter().cloned());
                next.push(v);
            }
        }
        choices = next;
    }
    // Reorder to the arrow order of `a`.
    choices
        .into_iter()
        .map(|flat| {
            let mut out = vec![vec![]; a.arrows().len()];
            for (slot, img) in order.iter().zip(flat) {
                out[*slot] = img;
            }
            out
        })
        .collect()
}

fn extend(a: &Alg, b: &Alg, sigma: &[usize], arrow_images: &[Vec<u64>]) -> Option<AlgIso> {
    let p = a.prime();
    let d = a.dim();
    let mut words: Vec<(Vec<u64>, Vec<u64>)> = a
        .idempotents()
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), b.idempotents()[sigma[i]].clone()))
        .collect();
    let mut span = Mat::from_cols(p, d, &words.iter().map(|w| w.0.clone()).collect::<Vec<_>>());
    let mut frontier = words.clone();
    while !frontier.is_empty() && span.rank() < d {
        let mut next = Vec::new();
        for (w, img) in &frontier {
            for (arrow, aimg) in a.arrows().iter().zip(arrow_images) {
                let v = a.mul(w, &arrow.element);
                if v.iter().all(|&x| x == 0) {
                    continue;
                }
                let vm = Mat::column_vector(p, &v);
                if span.spans(&vm) {
                    continue;
                }
                span = Mat::hstack(p, d, &[&span, &vm]);
                let pair = (v, b.mul(img, aimg));
                words.push(pair.clone());
                next.push(pair);
            }
        }
        frontier = next;
    }
    if span.rank() < d {
        return None;
    }
    let (wa, wb): (Vec<_>, Vec<_>) = words.into_iter().unzip();
    let wa = Mat::from_cols(p, d, &wa);
    let wb = Mat::from_cols(p, d, &wb);
    let forward = wb.mul(&wa.inverse()?);
    let backward = forward.inverse()?;
    let iso = AlgIso { forward, backward };
    iso.verify(a, b).then_some(iso)
}
