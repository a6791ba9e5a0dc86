use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exactla::{Mat, Prime};

use super::{Alg, AlgData, GlobalDim};

/// The named algebras.
///
/// `Lambda1` is the upper triangular 3x3 matrices, `Lambda2` the matrices
/// supported on E11, E12, E22, E32, E33, and `Lambda3` is `Lambda1` modulo
/// the ideal spanned by E13. `TruncPoly(n)` is `k[T]/(T^n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    Lambda1,
    Lambda2,
    Lambda3,
    TruncPoly(usize),
    GroundField,
    Opposite(OppositeOf),
}

/// Presets whose opposite is tracked by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OppositeOf {
    Lambda1,
    Lambda2,
    Lambda3,
}

impl Preset {
    pub fn name(self) -> String {
        match self {
            Preset::Lambda1 => "lambda1".into(),
            Preset::Lambda2 => "lambda2".into(),
            Preset::Lambda3 => "lambda3".into(),
            Preset::TruncPoly(n) => format!("truncpoly({n})"),
            Preset::GroundField => "ground_field".into(),
            Preset::Opposite(o) => format!("{}^op", Preset::from(o).name()),
        }
    }

    pub(crate) fn opposite(self) -> Preset {
        match self {
            Preset::Lambda1 => Preset::Opposite(OppositeOf::Lambda1),
            Preset::Lambda2 => Preset::Opposite(OppositeOf::Lambda2),
            Preset::Lambda3 => Preset::Opposite(OppositeOf::Lambda3),
            Preset::Opposite(o) => o.into(),
            commutative => commutative,
        }
    }

    /// True for the representation-finite presets the classifier accepts.
    pub fn is_classifiable(self) -> bool {
        !matches!(self, Preset::Opposite(_))
    }
}

impl From<OppositeOf> for Preset {
    fn from(o: OppositeOf) -> Preset {
        match o {
            OppositeOf::Lambda1 => Preset::Lambda1,
            OppositeOf::Lambda2 => Preset::Lambda2,
            OppositeOf::Lambda3 => Preset::Lambda3,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Preset> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "lambda1" => return Ok(Preset::Lambda1),
            "lambda2" => return Ok(Preset::Lambda2),
            "lambda3" => return Ok(Preset::Lambda3),
            "ground_field" | "k" | "field" => return Ok(Preset::GroundField),
            _ => {}
        }
        let n = t
            .strip_prefix("truncpoly")
            .map(|r| r.trim_start_matches('(').trim_end_matches(')'))
            .and_then(|r| r.parse::<usize>().ok());
        match n {
            Some(n) if n >= 1 => Ok(Preset::TruncPoly(n)),
            _ => Err(Error::UnknownPreset(s.to_string())),
        }
    }
}

/// Subalgebra-by-basis of the 3x3 matrix units: products `E_ij E_jl = E_il`
/// when `E_il` is in the basis, zero otherwise.
fn matrix_units(p: Prime, units: &[(usize, usize)]) -> AlgData {
    let d = units.len();
    let mut sc = vec![0u64; d * d * d];
    for (a, &(i, j)) in units.iter().enumerate() {
        for (b, &(k, l)) in units.iter().enumerate() {
            if j == k {
                if let Some(c) = units.iter().position(|&u| u == (i, l)) {
                    sc[(a * d + b) * d + c] = 1;
                }
            }
        }
    }
    let vec_of = |idx: usize| {
        let mut v = vec![0; d];
        v[idx] = 1;
        v
    };
    let diag: Vec<usize> = (0..d).filter(|&a| units[a].0 == units[a].1).collect();
    let off: Vec<usize> = (0..d).filter(|&a| units[a].0 != units[a].1).collect();
    let mut unit = vec![0; d];
    for &a in &diag {
        unit[a] = 1;
    }
    AlgData {
        p,
        labels: units.iter().map(|(i, j)| format!("E{}{}", i + 1, j + 1)).collect(),
        structconst: sc,
        unit,
        idempotents: diag.iter().map(|&a| vec_of(a)).collect(),
        idempotent_labels: diag.iter().map(|&a| format!("E{}{}", units[a].0 + 1, units[a].1 + 1)).collect(),
        radical: Mat::from_cols(p, d, &off.iter().map(|&a| vec_of(a)).collect::<Vec<_>>()),
    }
}

fn truncpoly(p: Prime, n: usize) -> AlgData {
    let mut sc = vec![0u64; n * n * n];
    for a in 0..n {
        for b in 0..n {
            if a + b < n {
                sc[(a * n + b) * n + a + b] = 1;
            }
        }
    }
    let vec_of = |idx: usize| {
        let mut v = vec![0; n];
        v[idx] = 1;
        v
    };
    AlgData {
        p,
        labels: (0..n)
            .map(|a| match a {
                0 => "1".to_string(),
                1 => "T".to_string(),
                _ => format!("T^{a}"),
            })
            .collect(),
        structconst: sc,
        unit: vec_of(0),
        idempotents: vec![vec_of(0)],
        idempotent_labels: vec!["1".into()],
        radical: Mat::from_cols(p, n, &(1..n).map(vec_of).collect::<Vec<_>>()),
    }
}

/// Builds a named algebra over `F_p`.
pub fn preset(name: Preset, p: Prime) -> Result<Alg> {
    let (data, gd) = match name {
        Preset::Lambda1 => (
            matrix_units(p, &[(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]),
            GlobalDim::Finite(1),
        ),
        Preset::Lambda2 => (
            matrix_units(p, &[(0, 0), (0, 1), (1, 1), (2, 1), (2, 2)]),
            GlobalDim::Finite(1),
        ),
        Preset::Lambda3 => (
            matrix_units(p, &[(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)]),
            GlobalDim::Finite(2),
        ),
        Preset::TruncPoly(0) => return Err(Error::UnknownPreset("truncpoly(0)".into())),
        Preset::TruncPoly(1) => (truncpoly(p, 1), GlobalDim::Finite(0)),
        Preset::TruncPoly(n) => (truncpoly(p, n), GlobalDim::Infinite),
        Preset::GroundField => (truncpoly(p, 1), GlobalDim::Finite(0)),
        Preset::Opposite(o) => return Ok(preset(o.into(), p)?.opposite()),
    };
    Alg::build(data, Some(name), gd)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_dimensions_and_radicals() {
        for q in [2, 3, 101] {
            let p = Prime::new(q).unwrap();
            let cases = [
                (Preset::Lambda1, 6, 3),
                (Preset::Lambda2, 5, 2),
                (Preset::Lambda3, 5, 2),
                (Preset::TruncPoly(1), 1, 0),
                (Preset::TruncPoly(2), 2, 1),
                (Preset::TruncPoly(5), 5, 4),
                (Preset::GroundField, 1, 0),
            ];
            for (name, dim, rad) in cases {
                let a = preset(name, p).unwrap();
                assert_eq!(a.dim(), dim, "{name}");
                assert_eq!(a.radical_basis().len(), rad, "{name}");
            }
        }
    }

    #[test]
    fn lambda2_idempotents() {
        let a = preset(Preset::Lambda2, Prime::new(101).unwrap()).unwrap();
        assert_eq!(a.idempotent_labels(), ["E11", "E22", "E33"]);
        assert_eq!(a.labels(), ["E11", "E12", "E22", "E32", "E33"]);
    }

    #[test]
    fn names_round_trip() {
        for name in ["lambda1", "lambda2", "lambda3", "truncpoly(4)", "ground_field"] {
            assert_eq!(name.parse::<Preset>().unwrap().name(), name);
        }
        assert_eq!("truncpoly3".parse::<Preset>().unwrap(), Preset::TruncPoly(3));
        assert!(matches!("bogus".parse::<Preset>(), Err(Error::UnknownPreset(_))));
    }
}
