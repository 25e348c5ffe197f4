//! TOML experiment configuration.
//!
//! ```toml
//! [map]
//! kind = "sft"              # "sft" | "circle" | "toral"
//! matrix = [[1, 1], [1, 0]] # sft / toral; or matrix_file, or preset
//!
//! [params]
//! order = 12
//! eps = "1/64"
//! format = "json"          # "text" | "json" | "csv"
//! ```

use std::path::{Path, PathBuf};

use num_rational::BigRational;
use serde::Deserialize;

use crate::exactmat::SignedIntMatrix;
use crate::expmap::{make_circle_map, make_toral_map, CircleMap, ShiftMap, ToralMap};
use crate::sft::SubshiftOfFiniteType;
use crate::{Error, Result};

use super::report::Format;
use super::text::parse_rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Sft,
    Circle,
    Toral,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub kind: Option<MapKind>,
    pub k: Option<u32>,
    pub matrix: Option<Vec<Vec<i64>>>,
    pub matrix_file: Option<PathBuf>,
    /// `fibonacci` / `golden-mean`, `full` (with `k`), `cat`, `doubling-torus`.
    pub preset: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub order: Option<usize>,
    pub mesh: Option<String>,
    pub eps: Option<String>,
    pub n_max: Option<usize>,
    pub seed: Option<u64>,
    pub orbit: Option<PathBuf>,
    pub beta: Option<f64>,
    pub format: Option<Format>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub map: MapSpec,
    #[serde(default)]
    pub params: Params,
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

/// A validated map.
#[derive(Clone, Debug)]
pub enum BuiltMap {
    Sft(SubshiftOfFiniteType),
    Circle(CircleMap),
    /// The matrix always; the expanding map when the matrix is expanding.
    Toral(SignedIntMatrix, Option<ToralMap>),
}

impl BuiltMap {
    pub fn label(&self) -> String {
        match self {
            BuiltMap::Sft(s) => format!("sft {}", rows_label(s.transition())),
            BuiltMap::Circle(c) => format!("circle k={}", c.k()),
            BuiltMap::Toral(m, _) => format!("toral {}", rows_label(m)),
        }
    }

    pub fn shift_map(&self) -> Result<ShiftMap> {
        match self {
            BuiltMap::Sft(s) => ShiftMap::new(s.clone()),
            _ => Err(Error::Config("not a shift".into())),
        }
    }
}

fn rows_label(m: &SignedIntMatrix) -> String {
    format!("{:?}", m.to_i64_rows().unwrap_or_default()).replace(' ', "")
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.build()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut cfg: Self = toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        cfg.build()?;
        Ok(cfg)
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        match &self.base_dir {
            Some(b) if p.is_relative() => b.join(p),
            _ => p.to_path_buf(),
        }
    }

    pub fn orbit_path(&self) -> Option<PathBuf> {
        self.params.orbit.as_deref().map(|p| self.resolve(p))
    }

    fn matrix(&self) -> Result<Option<SignedIntMatrix>> {
        let spec = &self.map;
        match (&spec.matrix, &spec.matrix_file) {
            (Some(_), Some(_)) => Err(Error::Config("give matrix or matrix_file, not both".into())),
            (Some(rows), None) => SignedIntMatrix::from_rows(rows).map(Some),
            (None, Some(f)) => {
                let path = self.resolve(f);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                SignedIntMatrix::parse(&text).map(Some)
            }
            (None, None) => Ok(None),
        }
    }

    pub fn build(&self) -> Result<BuiltMap> {
        let spec = &self.map;
        if let Some(p) = &spec.preset {
            if spec.matrix.is_some() || spec.matrix_file.is_some() {
                return Err(Error::Config("preset excludes matrix and matrix_file".into()));
            }
            let rows = |r: &[[i64; 2]; 2]| SignedIntMatrix::from_rows(r).unwrap();
            let built = match p.as_str() {
                "fibonacci" | "golden-mean" => BuiltMap::Sft(SubshiftOfFiniteType::golden_mean()),
                "full" => BuiltMap::Sft(SubshiftOfFiniteType::full(
                    spec.k.ok_or_else(|| Error::Config("preset full needs k".into()))? as usize,
                )),
                "cat" => BuiltMap::Toral(rows(&[[2, 1], [1, 1]]), None),
                "doubling-torus" => {
                    let m = rows(&[[2, 0], [0, 2]]);
                    let t = make_toral_map(&m)?;
                    BuiltMap::Toral(m, Some(t))
                }
                other => return Err(Error::Config(format!("unknown preset {other:?}"))),
            };
            if let Some(kind) = spec.kind {
                let matches = matches!(
                    (kind, &built),
                    (MapKind::Sft, BuiltMap::Sft(_)) | (MapKind::Toral, BuiltMap::Toral(..))
                );
                if !matches {
                    return Err(Error::Config(format!("preset {p:?} is not of kind {kind:?}")));
                }
            }
            return Ok(built);
        }
        let kind = spec
            .kind
            .ok_or_else(|| Error::Config("map.kind is required without a preset".into()))?;
        match kind {
            MapKind::Circle => {
                if spec.matrix.is_some() || spec.matrix_file.is_some() {
                    return Err(Error::Config("circle maps take k, not a matrix".into()));
                }
                let k = spec.k.ok_or_else(|| Error::Config("circle map needs k".into()))?;
                Ok(BuiltMap::Circle(make_circle_map(k)?))
            }
            MapKind::Sft => {
                let m = match (self.matrix()?, spec.k) {
                    (Some(m), None) => m,
                    (None, Some(k)) => SignedIntMatrix::all_ones(k as usize),
                    (Some(_), Some(_)) => return Err(Error::Config("sft takes matrix or k, not both".into())),
                    (None, None) => return Err(Error::Config("sft needs matrix, matrix_file or k".into())),
                };
                Ok(BuiltMap::Sft(SubshiftOfFiniteType::new(m)?))
            }
            MapKind::Toral => {
                let m = self
                    .matrix()?
                    .ok_or_else(|| Error::Config("toral map needs a 2x2 matrix".into()))?;
                if m.dim() != 2 {
                    return Err(Error::Config("toral map needs a 2x2 matrix".into()));
                }
                let t = make_toral_map(&m).ok();
                Ok(BuiltMap::Toral(m, t))
            }
        }
    }

    pub fn mesh(&self) -> Result<Option<BigRational>> {
        self.params.mesh.as_deref().map(parse_rational).transpose()
    }

    pub fn eps(&self) -> Result<Option<BigRational>> {
        self.params.eps.as_deref().map(parse_rational).transpose()
    }
}
