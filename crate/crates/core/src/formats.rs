//! JSON file forms of the toolkit's inputs, with validating conversions.
//!
//! Every `*File` type deserializes leniently and is checked by `into_*`;
//! `from_*` produces a file that converts back to an equal value.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bundles::FiniteBundle;
use crate::embed::{EmbeddingProblem, LiftingData};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::groups::{FiniteGroup, GroupHom};
use crate::stone::{BooleanRing, FiniteSpace};

pub use crate::freeprod::Presentation as PresentationFile;
pub use crate::graded::Snapshot as SnapshotFile;

/// `{"points": n, "opens": [[indices]...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub points: usize,
    pub opens: Vec<Vec<usize>>,
}

impl SpaceFile {
    pub fn into_space(&self) -> Result<FiniteSpace> {
        FiniteSpace::from_point_lists(self.points, &self.opens)
    }

    /// Lists every open set.
    pub fn from_space(x: &FiniteSpace) -> Self {
        SpaceFile {
            points: x.points(),
            opens: x.open_point_lists(),
        }
    }
}

/// `{"dim": n, "labels": [...], "one": bits, "mult": [[bits]...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingFile {
    pub dim: usize,
    #[serde(default)]
    pub labels: Vec<String>,
    pub one: BitVec,
    pub mult: Vec<Vec<BitVec>>,
}

impl RingFile {
    pub fn into_ring(&self) -> Result<BooleanRing> {
        if self.mult.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: self.mult.len(),
            });
        }
        let labels = if self.labels.is_empty() {
            (0..self.dim).map(|i| format!("b{i}")).collect()
        } else {
            self.labels.clone()
        };
        BooleanRing::new(labels, self.mult.clone(), self.one.clone())
    }

    pub fn from_ring(r: &BooleanRing) -> Self {
        RingFile {
            dim: r.dim(),
            labels: r.labels().to_vec(),
            one: r.one().clone(),
            mult: r.mult_table().to_vec(),
        }
    }
}

/// `{"order": n, "table": [[...]], "labels": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl GroupFile {
    pub fn into_group(&self) -> Result<Arc<FiniteGroup>> {
        if self.table.len() != self.order {
            return Err(Error::DimensionMismatch {
                expected: self.order,
                found: self.table.len(),
            });
        }
        Ok(Arc::new(FiniteGroup::new(self.table.clone(), self.labels.clone())?))
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupFile {
            order: g.order(),
            table: g.table_rows(),
            labels: g.labels().map(<[String]>::to_vec),
        }
    }
}

/// `{"source": group, "target": group, "map": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomFile {
    pub source: GroupFile,
    pub target: GroupFile,
    pub map: Vec<usize>,
}

impl HomFile {
    pub fn into_hom(&self) -> Result<GroupHom> {
        GroupHom::new(self.source.into_group()?, self.target.into_group()?, self.map.clone())
    }

    pub fn from_hom(f: &GroupHom) -> Self {
        HomFile {
            source: GroupFile::from_group(f.source()),
            target: GroupFile::from_group(f.target()),
            map: f.map().to_vec(),
        }
    }
}

/// `{"group": group, "Y": n, "X": m, "proj": [...], "action": [[...]...]}`
/// with `action[g][y] = g·y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    pub group: GroupFile,
    #[serde(rename = "Y")]
    pub total: usize,
    #[serde(rename = "X")]
    pub base: usize,
    pub proj: Vec<usize>,
    pub action: Vec<Vec<usize>>,
}

impl BundleFile {
    pub fn into_bundle(&self) -> Result<FiniteBundle> {
        FiniteBundle::new(
            self.group.into_group()?,
            self.total,
            self.base,
            self.proj.clone(),
            self.action.clone(),
        )
    }

    pub fn from_bundle(b: &FiniteBundle) -> Self {
        BundleFile {
            group: GroupFile::from_group(b.group()),
            total: b.total(),
            base: b.base(),
            proj: b.projection().to_vec(),
            action: b.action_table().to_vec(),
        }
    }
}

/// `{"images": {"label": element index}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImagesFile {
    pub images: BTreeMap<String, usize>,
}

/// `{"G", "A", "B": group, "phi", "alpha": map, "lifting": {class rep in G: class rep in B}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(rename = "G")]
    pub g: GroupFile,
    #[serde(rename = "A")]
    pub a: GroupFile,
    #[serde(rename = "B")]
    pub b: GroupFile,
    pub phi: Vec<usize>,
    pub alpha: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifting: Option<BTreeMap<String, usize>>,
}

impl ProblemFile {
    pub fn into_problem(&self) -> Result<(EmbeddingProblem, Option<LiftingData>)> {
        let g = self.g.into_group()?;
        let a = self.a.into_group()?;
        let b = self.b.into_group()?;
        let phi = GroupHom::new(g, a.clone(), self.phi.clone())?;
        let alpha = GroupHom::new(b, a, self.alpha.clone())?;
        let e = EmbeddingProblem::new(phi, alpha)?;
        let lifting = match &self.lifting {
            None => None,
            Some(m) => {
                let map = m
                    .iter()
                    .map(|(k, &v)| {
                        k.parse::<usize>()
                            .map(|k| (k, v))
                            .map_err(|_| Error::invalid("lifting", format!("key `{k}` is not an element index")))
                    })
                    .collect::<Result<BTreeMap<_, _>>>()?;
                let l = LiftingData { map };
                l.validate(&e)?;
                Some(l)
            }
        };
        Ok((e, lifting))
    }

    pub fn from_problem(e: &EmbeddingProblem, lifting: Option<&LiftingData>) -> Self {
        ProblemFile {
            g: GroupFile::from_group(e.g()),
            a: GroupFile::from_group(e.a()),
            b: GroupFile::from_group(e.b()),
            phi: e.phi().map().to_vec(),
            alpha: e.alpha().map().to_vec(),
            lifting: lifting.map(|l| l.map.iter().map(|(k, v)| (k.to_string(), *v)).collect()),
        }
    }
}
