//! On-disk format of system specification files.
//!
//! The file is strict JSON: unknown keys anywhere are rejected. See
//! `docs/spec-file.md` for a field-by-field description.

use defect_core::classifier::{Symmetry, SystemSpec};
use defect_core::homotopy::{Arrangement, DefectSet, Manifold, SpaceSpec};
use defect_core::spherical::BinaryKind;
use defect_core::{IntMat, PointGroup2D};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SUPPORTED_MAJOR: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub version: String,
    pub system: SystemFile,
    #[serde(default)]
    pub options: OptionsFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub space: SpaceFile,
    pub symmetry: SymmetryFile,
    #[serde(default = "one")]
    pub vacua_count: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub manifold: ManifoldFile,
    pub defect: DefectFile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ManifoldFile {
    Euclidean { dim: u32 },
    Sphere { dim: u32 },
    Cylinder,
    Torus2d,
    FlatTorus { dim: u32 },
    Annulus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DefectFile {
    Points { count: u32 },
    Arrangement { hyperplanes: u32, counts: Vec<Vec<u32>> },
    Circle,
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymmetryFile {
    PlanarLattice {
        lattice: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<IntMat>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        has_reflection: Option<bool>,
    },
    SpatialLattice {
        has_reflection: bool,
    },
    Spherical {
        group: BinaryKind,
        has_reflection: bool,
    },
    TorusFamily {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p_gv: Option<Vec<IntMat>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        aut_lattice: Option<Vec<IntMat>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputFormat>,
    /// Classify textures instead of defects; the defect set must be empty.
    #[serde(default)]
    pub textures: bool,
    /// Replace `R^n` by its one-point compactification (textures only).
    #[serde(default)]
    pub compactify: bool,
}

/// Parses a spec file, reporting syntax and schema errors with positions.
pub fn parse_spec(path: &str, text: &str) -> Result<SpecFile, CliError> {
    let spec: SpecFile = serde_json::from_str(text)
        .map_err(|e| CliError::Parse { message: format!("{path}:{}:{}: {e}", e.line(), e.column()) })?;
    let major = spec.version.split('.').next().unwrap_or_default();
    if major != SUPPORTED_MAJOR {
        return Err(CliError::Parse {
            message: format!("{path}: unsupported version {:?}; this tool reads {SUPPORTED_MAJOR}.x", spec.version),
        });
    }
    Ok(spec)
}

fn unsupported(field: &str, reason: impl Into<String>) -> CliError {
    CliError::Unsupported { field: field.to_string(), reason: reason.into() }
}

impl SystemFile {
    pub fn to_spec(&self) -> Result<SystemSpec, CliError> {
        let manifold = match self.space.manifold {
            ManifoldFile::Euclidean { dim } => Manifold::EuclideanRn(dim),
            ManifoldFile::Sphere { dim } => Manifold::SphereSn(dim),
            ManifoldFile::Cylinder => Manifold::Cylinder2D,
            ManifoldFile::Torus2d => Manifold::Torus2D,
            ManifoldFile::FlatTorus { dim } => Manifold::FlatTorus(dim),
            ManifoldFile::Annulus => Manifold::Annulus2D,
        };
        let defect = match &self.space.defect {
            DefectFile::Points { count } => DefectSet::Points(*count),
            DefectFile::Arrangement { hyperplanes, counts } => {
                DefectSet::AffineArrangement(Arrangement { hyperplanes: *hyperplanes, counts: counts.clone() })
            }
            DefectFile::Circle => DefectSet::CircleInR3,
            DefectFile::Empty => DefectSet::Empty,
        };
        let symmetry = match &self.symmetry {
            SymmetryFile::PlanarLattice { lattice, matrix, has_reflection } => {
                Symmetry::PlanarLattice(planar_group(lattice, matrix.as_ref(), *has_reflection)?)
            }
            SymmetryFile::SpatialLattice { has_reflection } => {
                Symmetry::SpatialLattice { has_reflection: *has_reflection }
            }
            SymmetryFile::Spherical { group, has_reflection } => {
                Symmetry::Spherical { kind: *group, has_reflection: *has_reflection }
            }
            SymmetryFile::TorusFamily { p_gv, aut_lattice } => {
                Symmetry::TorusFamily { p_gv: p_gv.clone(), aut_lattice: aut_lattice.clone() }
            }
        };
        Ok(SystemSpec { space: SpaceSpec::new(manifold, defect), symmetry, vacua_count: self.vacua_count })
    }
}

/// Named lattice, or `"custom"` with an explicit generator.
pub fn planar_group(
    lattice: &str,
    matrix: Option<&IntMat>,
    has_reflection: Option<bool>,
) -> Result<PointGroup2D, CliError> {
    const FIELD: &str = "system.symmetry";
    if lattice == "custom" {
        let m = matrix.ok_or_else(|| unsupported(FIELD, "a custom lattice needs `matrix`"))?;
        return PointGroup2D::custom(m.clone(), has_reflection.unwrap_or(false))
            .map_err(|e| unsupported(&format!("{FIELD}.matrix"), e.to_string()));
    }
    if matrix.is_some() || has_reflection.is_some() {
        return Err(unsupported(FIELD, "`matrix` and `has_reflection` apply only to custom lattices"));
    }
    PointGroup2D::from_name(lattice).map_err(|e| unsupported(&format!("{FIELD}.lattice"), e.to_string()))
}
