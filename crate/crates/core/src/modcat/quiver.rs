use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::Alg;
use crate::error::Result;
use crate::exactla::{Mat, Prime};

use super::classify::{indecomposables, module_label};
use super::decompose::local_residue;
use super::hom::hom_basis;
use super::{is_isomorphic, MMap, Mod};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuiverVertex {
    pub label: String,
    pub dim: usize,
    pub dim_vector: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuiverArrow {
    pub from: usize,
    pub to: usize,
    pub multiplicity: usize,
}

/// A labelled multigraph, used for (stable) Auslander-Reiten quivers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quiver {
    pub name: String,
    pub vertices: Vec<QuiverVertex>,
    pub arrows: Vec<QuiverArrow>,
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl Quiver {
    /// Total number of arrows counted with multiplicity.
    pub fn arrow_count(&self) -> usize {
        self.arrows.iter().map(|a| a.multiplicity).sum()
    }

    pub fn multiplicity(&self, from: usize, to: usize) -> usize {
        self.arrows
            .iter()
            .filter(|a| a.from == from && a.to == to)
            .map(|a| a.multiplicity)
            .sum()
    }

    /// Graphviz source: one node per vertex labelled `name (dim)` and one
    /// edge per arrow, repeated by multiplicity.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", dot_escape(&self.name));
        let _ = writeln!(s, "  rankdir=LR;");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{} ({})\"];", dot_escape(&v.label), v.dim);
        }
        for a in &self.arrows {
            for _ in 0..a.multiplicity {
                let _ = writeln!(s, "  v{} -> v{};", a.from, a.to);
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("quiver serializes");
        s.push('\n');
        s
    }
}

fn span_rank(p: Prime, rows: usize, cols: usize, maps: &[Mat]) -> usize {
    if maps.is_empty() {
        return 0;
    }
    let flat: Vec<Vec<u64>> = maps.iter().map(Mat::flatten).collect();
    Mat::from_cols(p, rows * cols, &flat).rank()
}

/// Basis of the radical of the local ring `End(x)`: the nilpotent parts of
/// the basis endomorphisms.
pub(crate) fn local_radical(x: &Mod) -> Result<Vec<Mat>> {
    let p = x.prime();
    let hb = hom_basis(x, x)?;
    let id = Mat::identity(p, x.dim());
    let mut parts = Vec::with_capacity(hb.dim());
    for f in hb.matrices() {
        let l = local_residue(f)
            .ok_or_else(|| crate::error::Error::Internal("endomorphism ring is not local".into()))?;
        parts.push(f.sub(&id.scale(l)));
    }
    let flat: Vec<Vec<u64>> = parts.iter().map(Mat::flatten).collect();
    if flat.is_empty() {
        return Ok(parts);
    }
    let span = Mat::from_cols(p, x.dim() * x.dim(), &flat).image_basis();
    Ok((0..span.cols())
        .map(|j| Mat::unflatten(p, x.dim(), x.dim(), &span.col(j)))
        .collect())
}

/// The non-isomorphisms `x -> y` between indecomposables.
pub fn rad_hom(x: &Mod, y: &Mod) -> Result<Vec<MMap>> {
    let mats = match is_isomorphic(x, y) {
        None => hom_basis(x, y)?.matrices().to_vec(),
        Some(u) => local_radical(x)?.iter().map(|r| u.matrix().mul(r)).collect(),
    };
    Ok(mats.into_iter().map(|m| MMap::new_unchecked(x, y, m)).collect())
}

/// Arrow counts `dim (rad + I) / (rad^2 + I)` for a list of pairwise
/// non-isomorphic indecomposables, where `rad[i][j]` spans the radical
/// morphisms and `ideal[i][j]` spans an ideal to divide out (empty for the
/// module category itself).
pub(crate) fn quiver_from_radical(
    name: &str,
    mods: &[Mod],
    rad: &[Vec<Vec<Mat>>],
    ideal: &[Vec<Vec<Mat>>],
) -> Quiver {
    let n = mods.len();
    let vertices = mods
        .iter()
        .map(|m| QuiverVertex {
            label: module_label(m),
            dim: m.dim(),
            dim_vector: m.dim_vector(),
        })
        .collect();
    let mut arrows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (rows, cols) = (mods[j].dim(), mods[i].dim());
            if rows * cols == 0 {
                continue;
            }
            let p = mods[i].prime();
            let mut top: Vec<Mat> = rad[i][j].clone();
            top.extend(ideal[i][j].iter().cloned());
            let mut sq: Vec<Mat> = ideal[i][j].clone();
            for z in 0..n {
                for f in &rad[i][z] {
                    for g in &rad[z][j] {
                        sq.push(g.mul(f));
                    }
                }
            }
            let mult = span_rank(p, rows, cols, &top) - span_rank(p, rows, cols, &sq);
            if mult > 0 {
                arrows.push(QuiverArrow {
                    from: i,
                    to: j,
                    multiplicity: mult,
                });
            }
        }
    }
    Quiver {
        name: name.to_string(),
        vertices,
        arrows,
    }
}

pub(crate) fn radical_table(mods: &[Mod]) -> Result<Vec<Vec<Vec<Mat>>>> {
    let n = mods.len();
    let mut rad = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            rad[i][j] = if i == j {
                local_radical(&mods[i])?
            } else {
                hom_basis(&mods[i], &mods[j])?.matrices().to_vec()
            };
        }
    }
    Ok(rad)
}

/// The Auslander-Reiten quiver of a classifiable preset.
pub fn ar_quiver(alg: &Alg) -> Result<Quiver> {
    let mods = indecomposables(alg)?;
    let rad = radical_table(&mods)?;
    let none = vec![vec![Vec::new(); mods.len()]; mods.len()];
    Ok(quiver_from_radical(&alg.name(), &mods, &rad, &none))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{preset, Preset};

    fn arrows_by_label(q: &Quiver) -> Vec<(String, String, usize)> {
        let mut v: Vec<_> = q
            .arrows
            .iter()
            .map(|a| (q.vertices[a.from].label.clone(), q.vertices[a.to].label.clone(), a.multiplicity))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn lambda1_quiver() {
        for q in [2, 3] {
            let a = preset(Preset::Lambda1, Prime::new(q).unwrap()).unwrap();
            let quiver = ar_quiver(&a).unwrap();
            assert_eq!(quiver.vertices.len(), 6);
            assert_eq!(quiver.arrow_count(), 6);
            let expect = [
                ("S3", "[23]"),
                ("[23]", "S2"),
                ("S2", "[12]"),
                ("[12]", "S1"),
                ("[23]", "[123]"),
                ("[123]", "[12]"),
            ];
            let got = arrows_by_label(&quiver);
            for (f, t) in expect {
                assert!(got.contains(&(f.to_string(), t.to_string(), 1)), "{f} -> {t} missing in {got:?}");
            }
            let dot = quiver.to_dot();
            assert_eq!(dot.matches("->").count(), 6);
            assert_eq!(dot.matches("[label=").count(), 6);
        }
    }

    #[test]
    fn small_quivers() {
        let k = preset(Preset::GroundField, Prime::new(2).unwrap()).unwrap();
        let q = ar_quiver(&k).unwrap();
        assert_eq!((q.vertices.len(), q.arrow_count()), (1, 0));
        let t = preset(Preset::TruncPoly(3), Prime::new(3).unwrap()).unwrap();
        let q = ar_quiver(&t).unwrap();
        assert_eq!((q.vertices.len(), q.arrow_count()), (3, 4));
    }
}
