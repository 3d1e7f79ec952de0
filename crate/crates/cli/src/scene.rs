use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use quadtangent::grassmann::{FlatRepr, ProjFlat};
use quadtangent::quadrics::{Quadric, QuadricJson};
use quadtangent::tracker::{Condition, TangencySystem};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneFlat {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub flat: FlatRepr,
}

/// Quadrics and flats in a common `Pⁿ`. Quadrics come before flats when the
/// scene is read as a list of conditions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub n: usize,
    #[serde(default)]
    pub quadrics: Vec<QuadricJson>,
    #[serde(default)]
    pub flats: Vec<SceneFlat>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl Scene {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            quadrics: Vec::new(),
            flats: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_quadric(mut self, q: &Quadric) -> Self {
        self.quadrics.push(q.into());
        self
    }

    pub fn with_line(mut self, label: impl Into<String>, f: &ProjFlat) -> Self {
        self.flats.push(SceneFlat {
            label: Some(label.into()),
            flat: FlatRepr::Span {
                matrix: f.span().clone(),
            },
        });
        self
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read scene {}: {e}", path.display())))?;
        let scene: Scene = serde_json::from_str(&text)?;
        scene.validate()?;
        Ok(scene)
    }

    /// All dimensions equal `n`, labels unique, every entry well formed.
    pub fn validate(&self) -> CliResult<()> {
        let mut labels = BTreeSet::new();
        for q in &self.quadrics {
            if q.n != self.n {
                return Err(CliError::Input(format!(
                    "quadric in P^{} inside a P^{} scene",
                    q.n, self.n
                )));
            }
            Quadric::try_from(q)?;
            if let Some(l) = &q.label {
                if !labels.insert(l.clone()) {
                    return Err(CliError::Input(format!("duplicate label {l:?}")));
                }
            }
        }
        for f in &self.flats {
            if f.flat.n() != self.n {
                return Err(CliError::Input(format!(
                    "flat in P^{} inside a P^{} scene",
                    f.flat.n(),
                    self.n
                )));
            }
            f.flat.dual_flat()?;
            if let Some(l) = &f.label {
                if !labels.insert(l.clone()) {
                    return Err(CliError::Input(format!("duplicate label {l:?}")));
                }
            }
        }
        Ok(())
    }

    pub fn quadric_list(&self) -> CliResult<Vec<Quadric>> {
        Ok(self.quadrics.iter().map(Quadric::try_from).collect::<Result<_, _>>()?)
    }

    pub fn line_list(&self) -> CliResult<Vec<ProjFlat>> {
        self.flats
            .iter()
            .map(|f| {
                let p = f.flat.dual_flat()?.kernel()?;
                if p.k() != 1 {
                    return Err(CliError::Input("only lines are supported as flats".into()));
                }
                Ok(p)
            })
            .collect()
    }

    /// Quadrics as tangency conditions, then flats as incidence conditions.
    pub fn tangency_system(&self) -> CliResult<TangencySystem> {
        if self.n != 3 {
            return Err(CliError::Input(format!(
                "tracking needs n = 3, scene has n = {}",
                self.n
            )));
        }
        let mut conditions: Vec<Condition> = self.quadric_list()?.into_iter().map(Condition::TangentTo).collect();
        for f in &self.flats {
            let d = f.flat.dual_flat()?;
            if d.k() != 1 {
                return Err(CliError::Input("incidence conditions need lines".into()));
            }
            conditions.push(Condition::Meets(d));
        }
        if conditions.len() != 4 {
            return Err(CliError::Input(format!(
                "need exactly 4 quadrics and lines in total, scene has {}",
                conditions.len()
            )));
        }
        Ok(TangencySystem::new(conditions)?)
    }

    /// SHA-256 of the canonical JSON serialization (metadata excluded).
    pub fn hash(&self) -> String {
        let canonical = Scene {
            metadata: BTreeMap::new(),
            ..self.clone()
        };
        let bytes = serde_json::to_vec(&canonical).expect("scene serializes");
        hex::encode(Sha256::digest(bytes))
    }
}
