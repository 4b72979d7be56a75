//! JSON run configuration. Relative file paths resolve against the directory
//! holding the config file.
//!
//! ```json
//! {
//!   "instance": "ssm",
//!   "generators": ["a1.txt", "a2.txt"],
//!   "workers": 4,
//!   "seed": 7,
//!   "tolerance": { "rel": 1e-9, "abs": 1e-12 }
//! }
//! ```
//!
//! | field        | used by            | meaning                                              |
//! |--------------|--------------------|------------------------------------------------------|
//! | `instance`   | all                | `sum max product ssm iss iis mat abelian2d glimage`  |
//! | `level`      | `iss`, `iis`       | truncation level                                     |
//! | `generators` | `ssm`              | matrix files `A_1 .. A_d`                            |
//! | `semiring`   | `mat`              | `real` (default) or `tropical`                       |
//! | `dims`       | `mat`              | object dimensions `n_0 .. n_T`, one more than values |
//! | `dim`        | `mat`              | constant dimension when `dims` is absent             |
//! | `templates`  | `mat`              | matrix files used as `E` in `x * E`, keyed by shape  |
//! | `op`         | `abelian2d`        | `sum` (default) or `max`                             |
//! | `image`      | `glimage`          | `{ "a": [3 files], "q": [3 files], "s": [3 numbers] }` |
//! | `gl_dims`    | `glimage` checks   | `[n, p, q]`, default `[2, 1, 3]`                     |
//! | `threshold`  | `check`            | axiom violation threshold, default `1e-8`            |
//! | `workers`    | scans              | used when neither `--workers` nor `FSCAN_WORKERS` is set |
//! | `seed`       | `mat`, `check`     | seed for generated templates and samples             |
//! | `tolerance`  | `mat`              | comparison tolerance                                 |

use std::path::{Path, PathBuf};

use fscan::numeric::parse_matrix_literal;
use fscan::{DenseMatrix, Tolerance};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Sum,
    Max,
    Product,
    Ssm,
    Iss,
    Iis,
    Mat,
    Abelian2d,
    Glimage,
}

impl InstanceKind {
    pub fn is_two_dimensional(self) -> bool {
        matches!(self, InstanceKind::Abelian2d | InstanceKind::Glimage)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SemiringKind {
    #[default]
    Real,
    Tropical,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    #[default]
    Sum,
    Max,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageConfig {
    pub a: [PathBuf; 3],
    pub q: [PathBuf; 3],
    pub s: [f64; 3],
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    pub rel: f64,
    pub abs: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub instance: InstanceKind,
    #[serde(default)]
    pub level: Option<usize>,
    #[serde(default)]
    pub generators: Vec<PathBuf>,
    #[serde(default)]
    pub semiring: SemiringKind,
    #[serde(default)]
    pub dims: Option<Vec<usize>>,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub templates: Vec<PathBuf>,
    #[serde(default)]
    pub op: OpKind,
    #[serde(default)]
    pub image: Option<ImageConfig>,
    #[serde(default)]
    pub gl_dims: Option<[usize; 3]>,
    #[serde(default)]
    pub threshold: Option<f64>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerance: Option<ToleranceConfig>,
    /// Directory relative paths resolve against.
    #[serde(skip)]
    pub base: PathBuf,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = read_text(path)?;
        let mut cfg = Self::from_json(&text).map_err(|e| e.in_file(path))?;
        cfg.base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.check_files()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        cfg.check_fields()?;
        Ok(cfg)
    }

    fn check_fields(&self) -> CliResult<()> {
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(CliError::Validation(format!(
                    "instance {:?} needs {what}",
                    self.instance
                )))
            }
        };
        match self.instance {
            InstanceKind::Iss | InstanceKind::Iis => need(self.level.is_some(), "\"level\"")?,
            InstanceKind::Ssm => need(
                !self.generators.is_empty(),
                "at least one entry in \"generators\"",
            )?,
            InstanceKind::Mat => need(
                self.dims.is_some() || self.dim.is_some(),
                "\"dims\" or \"dim\"",
            )?,
            _ => {}
        }
        if self.workers == Some(0) {
            return Err(CliError::Validation(
                "\"workers\" must be at least 1".into(),
            ));
        }
        if let Some(t) = self.tolerance {
            if !(t.rel >= 0.0 && t.abs >= 0.0) {
                return Err(CliError::Validation(
                    "tolerances must be non-negative".into(),
                ));
            }
        }
        Ok(())
    }

    fn check_files(&self) -> CliResult<()> {
        let image_files = self.image.iter().flat_map(|i| i.a.iter().chain(&i.q));
        for p in self
            .generators
            .iter()
            .chain(&self.templates)
            .chain(image_files)
        {
            self.matrix(p)?;
        }
        Ok(())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        self.base.join(p)
    }

    pub fn matrix(&self, p: &Path) -> CliResult<DenseMatrix> {
        let path = self.resolve(p);
        parse_matrix_literal(&read_text(&path)?).map_err(|e| CliError::from(e).in_file(&path))
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tolerance
            .map_or_else(Tolerance::default, |t| Tolerance::new(t.rel, t.abs))
    }
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}
