//! Deterministic DOT and JSON artifacts.

use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{preset, Alg, Preset};
use crate::derived::{ext, tilting_check, tilting_module, Side, TiltReport};
use crate::error::{Error, Result};
use crate::exactla::Prime;
use crate::frobenius::{assert_self_injective, stable_indecomposables};
use crate::modcat::{ar_quiver, indecomposables, module_label};

/// What `emit` writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Artifact {
    ArQuiver,
    StableArQuiver,
    ExtTable,
    TiltingReport,
}

impl Artifact {
    pub fn name(self) -> &'static str {
        match self {
            Artifact::ArQuiver => "ar-quiver",
            Artifact::StableArQuiver => "stable-ar-quiver",
            Artifact::ExtTable => "ext-table",
            Artifact::TiltingReport => "tilting-report",
        }
    }
}

impl FromStr for Artifact {
    type Err = Error;
    fn from_str(s: &str) -> Result<Artifact> {
        match s {
            "ar-quiver" => Ok(Artifact::ArQuiver),
            "stable-ar-quiver" => Ok(Artifact::StableArQuiver),
            "ext-table" => Ok(Artifact::ExtTable),
            "tilting-report" => Ok(Artifact::TiltingReport),
            other => Err(Error::Usage(format!(
                "unknown artifact `{other}`; expected ar-quiver, stable-ar-quiver, ext-table or tilting-report"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Dot,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Format> {
        match s {
            "dot" => Ok(Format::Dot),
            "json" => Ok(Format::Json),
            other => Err(Error::Usage(format!("unknown format `{other}`; expected dot or json"))),
        }
    }
}

/// Guards surfaced to `emit`.
#[derive(Debug, Clone)]
pub struct EmitOptions {
    /// Defaults to 2, where every preset can be classified.
    pub prime: Option<u64>,
    pub window: (i64, i64),
    pub cap: usize,
}

impl Default for EmitOptions {
    fn default() -> Self {
        EmitOptions {
            prime: None,
            window: (-6, 6),
            cap: 12,
        }
    }
}

/// Highest Ext degree in an Ext table.
pub const EXT_TABLE_MAX_DEGREE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtRow {
    pub src: String,
    pub dst: String,
    pub degree: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    pub algebra: String,
    pub prime: u64,
    pub rows: Vec<ExtRow>,
}

/// `dim Ext^n(X, Y)` for all indecomposable pairs and `0 <= n <= 4`.
pub fn ext_table(alg: &Alg, cap: usize) -> Result<ExtTable> {
    let ind = indecomposables(alg)?;
    let mut rows = Vec::new();
    for x in &ind {
        for y in &ind {
            for degree in 0..=EXT_TABLE_MAX_DEGREE {
                rows.push(ExtRow {
                    src: module_label(x),
                    dst: module_label(y),
                    degree,
                    dim: ext(x, y, degree, cap)?,
                });
            }
        }
    }
    Ok(ExtTable {
        algebra: alg.name(),
        prime: alg.prime().get(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TiltJsonRow {
    pub src: String,
    pub dst: String,
    pub shift: i64,
    pub degree: i64,
    pub dim: usize,
    pub dim_vector: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TiltJson {
    pub module: String,
    pub target: String,
    pub end_dim: usize,
    pub iso_found: bool,
    /// `end` or `opposite`: which of `End(T)`, `End(T)^op` matched.
    pub side: Option<String>,
    pub injective: bool,
    pub rows: Vec<TiltJsonRow>,
}

impl From<&TiltReport> for TiltJson {
    fn from(r: &TiltReport) -> TiltJson {
        TiltJson {
            module: r.module.clone(),
            target: r.target.clone(),
            end_dim: r.end_dim,
            iso_found: r.iso.is_some(),
            side: r.side.map(|s| match s {
                Side::End => "end".into(),
                Side::Opposite => "opposite".into(),
            }),
            injective: r.injective,
            rows: r
                .rows
                .iter()
                .map(|t| TiltJsonRow {
                    src: t.src.clone(),
                    dst: r.module.clone(),
                    shift: t.shift,
                    degree: t.degree,
                    dim: t.dim,
                    dim_vector: t.dim_vector.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TiltingJson {
    pub algebra: String,
    pub prime: u64,
    pub window: (i64, i64),
    pub reports: Vec<TiltJson>,
}

/// The B and C reports over `lambda1`.
pub fn tilting_json(alg: &Alg, window: (i64, i64), cap: usize) -> Result<TiltingJson> {
    if alg.preset() != Some(Preset::Lambda1) {
        return Err(Error::Usage("tilting reports are defined over lambda1".into()));
    }
    let p = alg.prime();
    let mut reports = Vec::new();
    for (name, target) in [("B", Preset::Lambda2), ("C", Preset::Lambda3)] {
        let r = tilting_check(&tilting_module(alg, name)?, &preset(target, p)?, window, cap)?;
        reports.push(TiltJson::from(&r));
    }
    Ok(TiltingJson {
        algebra: alg.name(),
        prime: p.get(),
        window,
        reports,
    })
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// The artifact as text.
pub fn render(what: Artifact, alg: &Alg, format: Format, opts: &EmitOptions) -> Result<String> {
    match (what, format) {
        (Artifact::ArQuiver, Format::Dot) => Ok(ar_quiver(alg)?.to_dot()),
        (Artifact::ArQuiver, Format::Json) => Ok(ar_quiver(alg)?.to_json()),
        (Artifact::StableArQuiver, f) => {
            let q = stable_indecomposables(&assert_self_injective(alg)?)?.quiver;
            Ok(if f == Format::Dot { q.to_dot() } else { q.to_json() })
        }
        (Artifact::ExtTable, Format::Json) => to_json(&ext_table(alg, opts.cap)?),
        (Artifact::TiltingReport, Format::Json) => to_json(&tilting_json(alg, opts.window, opts.cap)?),
        (w, Format::Dot) => Err(Error::Usage(format!("{} is a table; only json output is available", w.name()))),
    }
}

/// Writes `what` for the preset `algebra` to `out`.
pub fn emit(what: Artifact, algebra: &str, out: &Path, format: Format, opts: &EmitOptions) -> Result<()> {
    let p = Prime::new(opts.prime.unwrap_or(2))?;
    let alg = preset(algebra.parse()?, p)?;
    let text = render(what, &alg, format, opts)?;
    std::fs::write(out, text).map_err(|e| Error::Io(format!("{}: {e}", out.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(p: Preset) -> Alg {
        preset(p, Prime::new(2).unwrap()).unwrap()
    }

    #[test]
    fn ext_table_rows() {
        let t = ext_table(&alg(Preset::Lambda3), 8).unwrap();
        assert!(t.rows.contains(&ExtRow {
            src: "S1".into(),
            dst: "S3".into(),
            degree: 2,
            dim: 1
        }));
    }

    #[test]
    fn combinations() {
        let a = alg(Preset::Lambda1);
        let o = EmitOptions::default();
        assert!(matches!(render(Artifact::ExtTable, &a, Format::Dot, &o), Err(Error::Usage(_))));
        let dot = render(Artifact::ArQuiver, &a, Format::Dot, &o).unwrap();
        assert_eq!(dot, render(Artifact::ArQuiver, &a, Format::Dot, &o).unwrap());
        assert!("table".parse::<Artifact>().is_err());
        assert!("svg".parse::<Format>().is_err());
    }
}
