use std::collections::BTreeMap;

use crate::complexes::{CMap, Cx, HomComplex};
use crate::error::{Error, Result};
use crate::exactla::{Mat, Prime};
use crate::modcat::is_projective;

/// The dg algebra `End•(P) = Hom•(P, P)` with composition as product.
pub struct DGAlg {
    hc: HomComplex,
    /// The underlying complex of vector spaces.
    pub cx: Cx,
    /// `table[(n, m)]` has one column per basis pair `(a, b)`, index
    /// `a * dim m + b`, holding the coordinates of `a ∘ b` in degree `n + m`.
    pub table: BTreeMap<(i64, i64), Mat>,
    /// Coordinates of the identity in degree 0.
    pub unit: Vec<u64>,
}

/// The endomorphism dg algebra of a bounded complex of projectives.
pub fn dg_end(p: &Cx) -> Result<DGAlg> {
    for n in p.degrees() {
        if !is_projective(p.obj(n)) {
            return Err(Error::InvalidComplex(format!("component in degree {n} is not projective")));
        }
    }
    let hc = HomComplex::new(p, p)?;
    let cx = hc.to_cx();
    let (lo, hi) = hc.range();
    let prime = p.prime();
    let mut table = BTreeMap::new();
    for n in lo..=hi {
        for m in lo..=hi {
            let (dn, dm) = (hc.dim(n), hc.dim(m));
            if dn == 0 || dm == 0 {
                continue;
            }
            let target = hc.dim(n + m);
            let mut cols = Vec::with_capacity(dn * dm);
            let basis_m: Vec<_> = (0..dm).map(|b| hc.element(m, &unit_vec(dm, b))).collect();
            for a in 0..dn {
                let ea = hc.element(n, &unit_vec(dn, a));
                for eb in &basis_m {
                    cols.push(hc.coords(&ea.compose(eb)).expect("composite of module maps"));
                }
            }
            table.insert((n, m), Mat::from_cols(prime, target, &cols));
        }
    }
    let unit = hc.coords(CMap::identity(p).graded()).expect("identity");
    Ok(DGAlg { hc, cx, table, unit })
}

fn unit_vec(n: usize, k: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[k] = 1;
    v
}

impl DGAlg {
    pub fn prime(&self) -> Prime {
        self.cx.prime()
    }

    pub fn range(&self) -> (i64, i64) {
        self.hc.range()
    }

    pub fn dim(&self, n: i64) -> usize {
        self.hc.dim(n)
    }

    /// Product of `a` (degree `n`) and `b` (degree `m`) in coordinates.
    pub fn mul(&self, n: i64, a: &[u64], m: i64, b: &[u64]) -> Vec<u64> {
        let p = self.prime();
        let target = self.dim(n + m);
        let Some(t) = self.table.get(&(n, m)) else {
            return vec![0; target];
        };
        let dm = b.len();
        let mut coeffs = vec![0; a.len() * dm];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                coeffs[i * dm + j] = p.mul(x, y);
            }
        }
        t.mul(&Mat::column_vector(p, &coeffs)).col(0)
    }

    fn d(&self, n: i64, a: &[u64]) -> Vec<u64> {
        self.hc.d_matrix(n).mul(&Mat::column_vector(self.prime(), a)).col(0)
    }

    fn degrees(&self) -> Vec<i64> {
        let (lo, hi) = self.range();
        (lo..=hi).filter(|&n| self.dim(n) > 0).collect()
    }

    /// `D(ab) = D(a) b + (-1)^|a| a D(b)` on all basis pairs.
    pub fn check_leibniz(&self) -> Result<()> {
        let p = self.prime();
        for &n in &self.degrees() {
            for &m in &self.degrees() {
                for i in 0..self.dim(n) {
                    let a = unit_vec(self.dim(n), i);
                    let da = self.d(n, &a);
                    for j in 0..self.dim(m) {
                        let b = unit_vec(self.dim(m), j);
                        let lhs = self.d(n + m, &self.mul(n, &a, m, &b));
                        let r1 = self.mul(n + 1, &da, m, &b);
                        let r2 = self.mul(n, &a, m + 1, &self.d(m, &b));
                        let s = p.sign(n);
                        let rhs: Vec<u64> = r1.iter().zip(&r2).map(|(x, y)| p.add(*x, p.mul(s, *y))).collect();
                        if lhs != rhs {
                            return Err(Error::Certificate(format!("Leibniz rule fails in degrees ({n}, {m})")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `(ab)c = a(bc)` on all basis triples.
    pub fn check_associativity(&self) -> Result<()> {
        let degs = self.degrees();
        for &n in &degs {
            for &m in &degs {
                for &l in &degs {
                    for i in 0..self.dim(n) {
                        let a = unit_vec(self.dim(n), i);
                        for j in 0..self.dim(m) {
                            let b = unit_vec(self.dim(m), j);
                            let ab = self.mul(n, &a, m, &b);
                            for k in 0..self.dim(l) {
                                let c = unit_vec(self.dim(l), k);
                                let left = self.mul(n + m, &ab, l, &c);
                                let right = self.mul(n, &a, m + l, &self.mul(m, &b, l, &c));
                                if left != right {
                                    return Err(Error::Certificate(format!(
                                        "product is not associative in degrees ({n}, {m}, {l})"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The unit is a cocycle and a two-sided identity.
    pub fn check_unit(&self) -> Result<()> {
        if self.d(0, &self.unit).iter().any(|&x| x != 0) {
            return Err(Error::Certificate("unit is not a cocycle".into()));
        }
        for &n in &self.degrees() {
            for i in 0..self.dim(n) {
                let a = unit_vec(self.dim(n), i);
                if self.mul(0, &self.unit, n, &a) != a || self.mul(n, &a, 0, &self.unit) != a {
                    return Err(Error::Certificate(format!("unit fails on a degree-{n} basis element")));
                }
            }
        }
        Ok(())
    }

    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        let (lo, hi) = self.range();
        (lo..=hi).map(|n| (n, self.hc.h_dim(n))).collect()
    }
}

/// `dim H^n` of a dg algebra in every degree of its range.
pub fn dg_cohomology_dims(a: &DGAlg) -> BTreeMap<i64, usize> {
    a.cohomology_dims()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{preset, Preset};
    use crate::complexes::stalk;
    use crate::derived::{ext, proj_resolution};
    use crate::exactla::Prime;
    use crate::modcat::{direct_sum, simple};

    #[test]
    fn stalk_of_a_projective() {
        let a = preset(Preset::Lambda1, Prime::new(101).unwrap()).unwrap();
        let r = crate::modcat::regular(&a);
        let dg = dg_end(&stalk(&r, 0)).unwrap();
        assert_eq!(dg.cohomology_dims(), BTreeMap::from([(0, 6)]));
        dg.check_unit().unwrap();
        assert!(dg_end(&stalk(&simple(&a, 0), 0)).is_err());
    }

    #[test]
    fn ext_algebra_of_the_simples() {
        let a = preset(Preset::Lambda1, Prime::new(101).unwrap()).unwrap();
        let s = direct_sum(&a, &[simple(&a, 0), simple(&a, 1), simple(&a, 2)]).unwrap().module;
        let ps = proj_resolution(&s, 4).unwrap();
        let dg = dg_end(&ps.res).unwrap();
        dg.check_leibniz().unwrap();
        dg.check_associativity().unwrap();
        dg.check_unit().unwrap();
        let dims = dg.cohomology_dims();
        for n in 0..=3i64 {
            let want: usize = (0..3)
                .flat_map(|i| (0..3).map(move |j| (i, j)))
                .map(|(i, j)| ext(&simple(&a, i), &simple(&a, j), n as usize, 4).unwrap())
                .sum();
            assert_eq!(dims.get(&n).copied().unwrap_or(0), want, "degree {n}");
        }
        assert_eq!(dims[&0], 3);
        assert_eq!(dims[&1], 2);
    }
}
