//! Block linear systems whose unknowns are matrices.
//!
//! Each unknown is either a free `m x n` matrix or a linear combination of
//! a fixed list of `m x n` matrices (for instance a basis of a Hom-space).
//! Equations are matrix-valued: `sum_t L_t X_{v_t} R_t = C`.

use super::field::Prime;
use super::mat::Mat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarId(usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EqId(usize);

#[derive(Debug, Clone)]
enum VarKind {
    Free { rows: usize, cols: usize },
    Span { rows: usize, cols: usize, basis: Vec<Mat> },
}

impl VarKind {
    fn dim(&self) -> usize {
        match self {
            VarKind::Free { rows, cols } => rows * cols,
            VarKind::Span { basis, .. } => basis.len(),
        }
    }
    fn shape(&self) -> (usize, usize) {
        match self {
            VarKind::Free { rows, cols } | VarKind::Span { rows, cols, .. } => (*rows, *cols),
        }
    }
}

struct Term {
    eq: EqId,
    left: Option<Mat>,
    var: VarId,
    right: Option<Mat>,
}

pub struct LinSys {
    p: Prime,
    vars: Vec<VarKind>,
    eqs: Vec<(usize, usize)>,
    rhs: Vec<Option<Mat>>,
    terms: Vec<Term>,
}

impl LinSys {
    pub fn new(p: Prime) -> Self {
        LinSys {
            p,
            vars: Vec::new(),
            eqs: Vec::new(),
            rhs: Vec::new(),
            terms: Vec::new(),
        }
    }

    pub fn free(&mut self, rows: usize, cols: usize) -> VarId {
        self.vars.push(VarKind::Free { rows, cols });
        VarId(self.vars.len() - 1)
    }

    pub fn span(&mut self, rows: usize, cols: usize, basis: Vec<Mat>) -> VarId {
        debug_assert!(basis.iter().all(|b| b.shape() == (rows, cols)));
        self.vars.push(VarKind::Span { rows, cols, basis });
        VarId(self.vars.len() - 1)
    }

    pub fn equation(&mut self, rows: usize, cols: usize) -> EqId {
        self.eqs.push((rows, cols));
        self.rhs.push(None);
        EqId(self.eqs.len() - 1)
    }

    /// Adds `left * X * right` to the left-hand side of `eq`.
    pub fn term(&mut self, eq: EqId, left: Option<&Mat>, var: VarId, right: Option<&Mat>) {
        let (vr, vc) = self.vars[var.0].shape();
        let (er, ec) = self.eqs[eq.0];
        let lr = left.map_or(vr, |l| {
            assert_eq!(l.cols(), vr, "left factor width");
            l.rows()
        });
        let rc = right.map_or(vc, |r| {
            assert_eq!(r.rows(), vc, "right factor height");
            r.cols()
        });
        assert_eq!((lr, rc), (er, ec), "term shape");
        self.terms.push(Term {
            eq,
            left: left.cloned(),
            var,
            right: right.cloned(),
        });
    }

    /// Adds `c` to the right-hand side of `eq`.
    pub fn rhs(&mut self, eq: EqId, c: &Mat) {
        assert_eq!(c.shape(), self.eqs[eq.0], "rhs shape");
        let slot = &mut self.rhs[eq.0];
        *slot = Some(match slot.take() {
            Some(prev) => prev.add(c),
            None => c.clone(),
        });
    }

    fn offsets(&self) -> (Vec<usize>, usize, Vec<usize>, usize) {
        let mut voff = Vec::with_capacity(self.vars.len());
        let mut n = 0;
        for v in &self.vars {
            voff.push(n);
            n += v.dim();
        }
        let mut eoff = Vec::with_capacity(self.eqs.len());
        let mut m = 0;
        for &(r, c) in &self.eqs {
            eoff.push(m);
            m += r * c;
        }
        (voff, n, eoff, m)
    }

    /// Coefficient matrix and right-hand side vector of the flattened system.
    pub fn assemble(&self) -> (Mat, Mat) {
        let p = self.p;
        let pm = p.get();
        let (voff, n, eoff, m) = self.offsets();
        let mut a = Mat::zeros(p, m, n);
        for t in &self.terms {
            let (er, ec) = self.eqs[t.eq.0];
            let e0 = eoff[t.eq.0];
            let v0 = voff[t.var.0];
            match &self.vars[t.var.0] {
                VarKind::Free { rows, cols } => {
                    // Column (a,b) of the block is vec(L[:,a] R[b,:]).
                    for ia in 0..*rows {
                        for ib in 0..*cols {
                            let col = v0 + ia * cols + ib;
                            for i in 0..er {
                                let l = t.left.as_ref().map_or(u64::from(i == ia), |l| l.get(i, ia));
                                if l == 0 {
                                    continue;
                                }
                                for j in 0..ec {
                                    let r = t.right.as_ref().map_or(u64::from(j == ib), |r| r.get(ib, j));
                                    if r == 0 {
                                        continue;
                                    }
                                    let row = e0 + i * ec + j;
                                    let cur = a.get(row, col);
                                    a.set(row, col, (cur + l * r) % pm);
                                }
                            }
                        }
                    }
                }
                VarKind::Span { basis, .. } => {
                    for (k, b) in basis.iter().enumerate() {
                        let mut img = b.clone();
                        if let Some(l) = &t.left {
                            img = l.mul(&img);
                        }
                        if let Some(r) = &t.right {
                            img = img.mul(r);
                        }
                        let col = v0 + k;
                        for (idx, &x) in img.data().iter().enumerate() {
                            if x != 0 {
                                let row = e0 + idx;
                                let cur = a.get(row, col);
                                a.set(row, col, (cur + x) % pm);
                            }
                        }
                    }
                }
            }
        }
        let mut b = Mat::zeros(p, m, 1);
        for (k, c) in self.rhs.iter().enumerate() {
            if let Some(c) = c {
                for (idx, &x) in c.data().iter().enumerate() {
                    b.set(eoff[k] + idx, 0, x);
                }
            }
        }
        (a, b)
    }

    /// Converts a flat coefficient vector back into one matrix per unknown.
    pub fn unpack(&self, x: &[u64]) -> Vec<Mat> {
        let (voff, _, _, _) = self.offsets();
        self.vars
            .iter()
            .zip(voff)
            .map(|(v, off)| match v {
                VarKind::Free { rows, cols } => {
                    Mat::unflatten(self.p, *rows, *cols, &x[off..off + rows * cols])
                }
                VarKind::Span { rows, cols, basis } => {
                    let mut acc = Mat::zeros(self.p, *rows, *cols);
                    for (k, b) in basis.iter().enumerate() {
                        acc.axpy(x[off + k], b);
                    }
                    acc
                }
            })
            .collect()
    }

    /// One solution of the inhomogeneous system, if any.
    pub fn solve(&self) -> Option<Vec<Mat>> {
        let (a, b) = self.assemble();
        let x = a.solve(&b).expect("assembled shapes agree")?;
        Some(self.unpack(&x.col(0)))
    }

    /// Basis of the solution space of the homogeneous system, as raw
    /// coefficient vectors (columns).
    pub fn homogeneous_coefficients(&self) -> Mat {
        let (a, _) = self.assemble();
        a.kernel_basis()
    }

    /// Basis of the solution space of the homogeneous system.
    pub fn homogeneous(&self) -> Vec<Vec<Mat>> {
        let k = self.homogeneous_coefficients();
        (0..k.cols()).map(|j| self.unpack(&k.col(j))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutant_of_a_jordan_block() {
        let p = Prime::new(5).unwrap();
        let j = Mat::from_rows(p, &[vec![0, 1], vec![0, 0]]).unwrap();
        let mut sys = LinSys::new(p);
        let x = sys.free(2, 2);
        let eq = sys.equation(2, 2);
        sys.term(eq, None, x, Some(&j));
        sys.term(eq, Some(&j.neg()), x, None);
        let sols = sys.homogeneous();
        assert_eq!(sols.len(), 2);
        for s in sols {
            assert_eq!(s[0].mul(&j), j.mul(&s[0]));
        }
    }

    #[test]
    fn span_unknowns_and_rhs() {
        let p = Prime::new(7).unwrap();
        let basis = vec![Mat::identity(p, 2), Mat::from_rows(p, &[vec![0, 1], vec![0, 0]]).unwrap()];
        let mut sys = LinSys::new(p);
        let x = sys.span(2, 2, basis);
        let eq = sys.equation(2, 2);
        sys.term(eq, None, x, None);
        let target = Mat::from_rows(p, &[vec![3, 4], vec![0, 3]]).unwrap();
        sys.rhs(eq, &target);
        assert_eq!(sys.solve().unwrap()[0], target);
        let mut bad = LinSys::new(p);
        let y = bad.span(2, 2, vec![Mat::identity(p, 2)]);
        let e = bad.equation(2, 2);
        bad.term(e, None, y, None);
        bad.rhs(e, &target);
        assert!(bad.solve().is_none());
    }
}
