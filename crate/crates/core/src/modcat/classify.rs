use std::collections::{HashSet, VecDeque};

use crate::algebra::{Alg, Preset};
use crate::error::{Error, Result};
use crate::exactla::{quotient_structure, Mat};

use super::decompose::{decompose, signature};
use super::structure::{direct_sum, radical_of, socle};
use super::{is_isomorphic, proj, Mod};

const SUBMODULE_LIMIT: usize = 200_000;
const MAX_TRUNCPOLY: usize = 6;

/// Canonical key of a column span: its reduced row echelon form.
fn span_key(basis: &Mat) -> (Mat, Vec<u64>) {
    let (r, piv) = basis.transpose().rref();
    let rows: Vec<usize> = (0..piv.len()).collect();
    let canon = r.select_rows(&rows);
    let key = canon.data().to_vec();
    (canon.transpose(), key)
}

/// Nonzero vectors of `F_p^s` with leading coordinate 1, one per line.
fn projective_points(p: u64, s: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for lead in 0..s {
        let free = s - lead - 1;
        let count = p.pow(free as u32);
        for mut idx in 0..count {
            let mut v = vec![0; s];
            v[lead] = 1;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = idx % p;
                idx /= p;
            }
            out.push(v);
        }
    }
    out
}

/// Every submodule of `m`, as canonical column bases.
///
/// Submodules are reached along composition series: from `U`, each simple
/// submodule of `M/U` (a line in one Peirce block of its socle) gives a
/// larger submodule.
pub fn submodules(m: &Mod) -> Result<Vec<Mat>> {
    let p = m.prime();
    let d = m.dim();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut queue = VecDeque::new();
    let (z, key) = span_key(&Mat::zeros(p, d, 0));
    seen.insert(key);
    queue.push_back(z);
    let mut out = Vec::new();
    while let Some(u) = queue.pop_front() {
        if u.cols() < d {
            let (_, section) = quotient_structure(p, d, &u)?;
            let (q, _) = m.quotient(&u)?;
            let (soc, inc) = socle(&q);
            for e in m.alg().idempotents() {
                let block = soc.act(e).image_basis();
                if block.cols() == 0 {
                    continue;
                }
                let lift = section.mul(inc.matrix()).mul(&block);
                for c in projective_points(p.get(), block.cols()) {
                    let v = lift.mul(&Mat::column_vector(p, &c));
                    let (next, key) = span_key(&Mat::hstack(p, d, &[&u, &v]));
                    if seen.insert(key) {
                        if seen.len() > SUBMODULE_LIMIT {
                            return Err(Error::Refused(format!(
                                "more than {SUBMODULE_LIMIT} submodules in dimension {d}"
                            )));
                        }
                        queue.push_back(next);
                    }
                }
            }
        }
        out.push(u);
    }
    Ok(out)
}

/// Adds `x` to `list` unless an isomorphic module is already there.
fn insert_class(list: &mut Vec<(Vec<usize>, Mod)>, x: Mod) -> bool {
    let sig = signature(&x);
    if list.iter().any(|(s, y)| *s == sig && is_isomorphic(y, &x).is_some()) {
        return false;
    }
    list.push((sig, x));
    true
}

fn check_classifiable(alg: &Alg) -> Result<()> {
    let p = alg.prime().get();
    if p != 2 && p != 3 {
        return Err(Error::Refused(format!("classification runs over F_2 or F_3, not F_{p}")));
    }
    match alg.preset() {
        Some(Preset::TruncPoly(n)) if n > MAX_TRUNCPOLY => Err(Error::Refused(format!(
            "truncpoly({n}) exceeds the enumeration guard {MAX_TRUNCPOLY}"
        ))),
        Some(pre) if pre.is_classifiable() => Ok(()),
        _ => Err(Error::Refused(format!("{} is not a classifiable preset", alg.name()))),
    }
}

/// Representatives of the indecomposable modules up to isomorphism, found
/// among the summands of subquotients of `P_i + P_j`.
///
/// Sorted by dimension, then dimension vector, then label.
pub fn classify_indecomposables(alg: &Alg) -> Result<Vec<Mod>> {
    check_classifiable(alg)?;
    let n = alg.num_idempotents();
    let projs: Vec<Mod> = (0..n).map(|j| proj(alg, j)).collect();
    let mut found: Vec<(Vec<usize>, Mod)> = Vec::new();
    for i in 0..n {
        for j in i..n {
            let x = direct_sum(alg, &[projs[i].clone(), projs[j].clone()])?.module;
            let mut subs: Vec<(Vec<usize>, Mod)> = Vec::new();
            for u in submodules(&x)? {
                insert_class(&mut subs, x.submodule_with_basis(&u)?.0);
            }
            for (_, v) in &subs {
                let mut quotients: Vec<(Vec<usize>, Mod)> = Vec::new();
                for u in submodules(v)? {
                    let q = v.quotient(&u)?.0;
                    if q.dim() == 0 || !insert_class(&mut quotients, q.clone()) {
                        continue;
                    }
                    for s in decompose(&q)? {
                        insert_class(&mut found, s.module);
                    }
                }
            }
        }
    }
    let mut mods: Vec<Mod> = found.into_iter().map(|(_, m)| m).collect();
    sort_modules(&mut mods);
    Ok(mods)
}

/// The indecomposables of a Nakayama algebra, over any prime: the
/// quotients `P_j / P_j rad^k`. Refuses algebras with a projective or
/// injective indecomposable that is not uniserial.
pub fn nakayama_indecomposables(alg: &Alg) -> Result<Vec<Mod>> {
    let uniserial = |m: &Mod| radical_layers(m).iter().all(|l| l.iter().sum::<usize>() == 1);
    for j in 0..alg.num_idempotents() {
        if !uniserial(&proj(alg, j)) || !uniserial(&super::injective(alg, j)) {
            return Err(Error::Refused(format!("{} is not a Nakayama algebra", alg.name())));
        }
    }
    let mut found: Vec<(Vec<usize>, Mod)> = Vec::new();
    for j in 0..alg.num_idempotents() {
        let pj = proj(alg, j);
        let mut cur = Mat::identity(alg.prime(), pj.dim());
        while cur.cols() > 0 {
            let parts: Vec<Mat> = alg.radical_basis().iter().map(|r| pj.act(r).mul(&cur)).collect();
            let refs: Vec<&Mat> = parts.iter().collect();
            cur = if refs.is_empty() {
                Mat::zeros(alg.prime(), pj.dim(), 0)
            } else {
                Mat::hstack(alg.prime(), pj.dim(), &refs).column_span()
            };
            insert_class(&mut found, pj.quotient(&cur)?.0);
        }
    }
    let mut mods: Vec<Mod> = found.into_iter().map(|(_, m)| m).collect();
    sort_modules(&mut mods);
    Ok(mods)
}

/// The classified indecomposables at `p` in {2, 3}; at other primes the
/// Nakayama quotients, which need no enumeration.
pub fn indecomposables(alg: &Alg) -> Result<Vec<Mod>> {
    match classify_indecomposables(alg) {
        Err(Error::Refused(why)) => nakayama_indecomposables(alg).map_err(|_| Error::Refused(why)),
        r => r,
    }
}

pub(crate) fn sort_modules(mods: &mut [Mod]) {
    mods.sort_by_cached_key(|m| (m.dim(), m.dim_vector(), module_label(m)));
}

/// Dimension vectors of the radical layers `M rad^k / M rad^(k+1)`.
pub(crate) fn radical_layers(m: &Mod) -> Vec<Vec<usize>> {
    let idem = m.alg().idempotents();
    let block_dims = |r: &Mat| -> Vec<usize> { idem.iter().map(|e| m.act(e).mul(r).rank()).collect() };
    let mut layers = Vec::new();
    let mut cur = Mat::identity(m.prime(), m.dim());
    while cur.cols() > 0 {
        let next = {
            let parts: Vec<Mat> = m.alg().radical_basis().iter().map(|r| m.act(r).mul(&cur)).collect();
            if parts.is_empty() {
                Mat::zeros(m.prime(), m.dim(), 0)
            } else {
                let refs: Vec<&Mat> = parts.iter().collect();
                Mat::hstack(m.prime(), m.dim(), &refs).column_span()
            }
        };
        let (a, b) = (block_dims(&cur), block_dims(&next));
        layers.push(a.iter().zip(&b).map(|(x, y)| x - y).collect());
        cur = next;
    }
    debug_assert!(radical_of(m).cols() <= m.dim());
    layers
}

/// A short name from the radical layers: `S2` for a simple, `[123]` for a
/// uniserial module with top S1, `[13/2]` when a layer has several
/// composition factors.
pub fn module_label(m: &Mod) -> String {
    if m.dim() == 0 {
        return "0".into();
    }
    let layers = radical_layers(m);
    let names: Vec<String> = layers
        .iter()
        .map(|l| {
            l.iter()
                .enumerate()
                .flat_map(|(j, &c)| std::iter::repeat_n((j + 1).to_string(), c))
                .collect::<String>()
        })
        .collect();
    if m.dim() == 1 {
        return format!("S{}", names[0]);
    }
    if layers.iter().all(|l| l.iter().sum::<usize>() == 1) {
        format!("[{}]", names.concat())
    } else {
        format!("[{}]", names.join("/"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::preset;
    use crate::exactla::Prime;
    use crate::modcat::{regular, simple};

    #[test]
    fn submodule_counts() {
        let a = preset(Preset::TruncPoly(3), Prime::new(2).unwrap()).unwrap();
        // k[T]/T^3 is uniserial: 0, T^2, T, everything.
        assert_eq!(submodules(&regular(&a)).unwrap().len(), 4);
        let l1 = preset(Preset::Lambda1, Prime::new(3).unwrap()).unwrap();
        let s = direct_sum(&l1, &[simple(&l1, 0), simple(&l1, 0)]).unwrap().module;
        // Subspaces of F_3^2: 1 + 4 + 1.
        assert_eq!(submodules(&s).unwrap().len(), 6);
    }

    #[test]
    fn labels() {
        let a = preset(Preset::Lambda1, Prime::new(2).unwrap()).unwrap();
        assert_eq!(module_label(&proj(&a, 0)), "[123]");
        assert_eq!(module_label(&simple(&a, 1)), "S2");
        let b = preset(Preset::Lambda2, Prime::new(2).unwrap()).unwrap();
        let i2 = crate::modcat::injective(&b, 1);
        assert_eq!(module_label(&i2), "[13/2]");
    }

    #[test]
    fn truncpoly_classification() {
        for q in [2, 3] {
            for n in 1..=5 {
                let a = preset(Preset::TruncPoly(n), Prime::new(q).unwrap()).unwrap();
                let mods = classify_indecomposables(&a).unwrap();
                assert_eq!(mods.iter().map(Mod::dim).collect::<Vec<_>>(), (1..=n).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn counts_for_the_triangular_presets() {
        for q in [2, 3] {
            let p = Prime::new(q).unwrap();
            for (pre, count, dims) in [
                (Preset::Lambda1, 6, vec![1, 1, 1, 2, 2, 3]),
                (Preset::Lambda2, 6, vec![1, 1, 1, 2, 2, 3]),
                (Preset::Lambda3, 5, vec![1, 1, 1, 2, 2]),
            ] {
                let mods = classify_indecomposables(&preset(pre, p).unwrap()).unwrap();
                assert_eq!(mods.len(), count, "{pre} at p = {q}");
                assert_eq!(mods.iter().map(Mod::dim).collect::<Vec<_>>(), dims);
            }
        }
    }

    #[test]
    fn guards() {
        let big = preset(Preset::Lambda1, Prime::new(101).unwrap()).unwrap();
        assert!(matches!(classify_indecomposables(&big), Err(Error::Refused(_))));
        let op = preset(Preset::Lambda1, Prime::new(2).unwrap()).unwrap().opposite();
        assert!(matches!(classify_indecomposables(&op), Err(Error::Refused(_))));
    }

    #[test]
    fn nakayama_list_matches_classification() {
        for pre in [Preset::Lambda1, Preset::Lambda3, Preset::TruncPoly(4)] {
            let a = crate::algebra::preset(pre, crate::exactla::Prime::new(3).unwrap()).unwrap();
            let n = nakayama_indecomposables(&a).unwrap();
            let c = classify_indecomposables(&a).unwrap();
            assert_eq!(n.len(), c.len());
            for (x, y) in n.iter().zip(&c) {
                assert!(is_isomorphic(x, y).is_some());
            }
        }
        let big = crate::algebra::preset(Preset::Lambda1, crate::exactla::Prime::new(101).unwrap()).unwrap();
        assert_eq!(nakayama_indecomposables(&big).unwrap().len(), 6);
        let l2 = crate::algebra::preset(Preset::Lambda2, crate::exactla::Prime::new(3).unwrap()).unwrap();
        assert!(nakayama_indecomposables(&l2).is_err());
    }
}
