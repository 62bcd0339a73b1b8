//! Versioned JSON schema for oracle instances.
//!
//! One schema with a type tag covers all six backends, so a single parser
//! serves every command. Outcome labels are arbitrary strings mapped to
//! dense indices at parse time; backends with derived outcomes (positional,
//! bargaining) dictate their own labels and preferences must use them.

use serde::{Deserialize, Serialize};

use crate::bargaining::MbScheme;
use crate::error::{Error, Result};
use crate::explicit::ExplicitGameForm;
use crate::jordan::JordanMap;
use crate::monotone::MonotonePropertyForm;
use crate::oracle::{Backend, OracleInstance};
use crate::outcomes::OutcomeSet;
use crate::positional::{Owner, PositionalMode, PositionalStructure};
use crate::prefs::Preference;
use crate::veto::VetoScheme;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema_version: u32,
    pub oracle: OracleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preferences: Option<PreferenceSpec>,
    #[serde(default, skip_serializing_if = "OptionsSpec::is_default")]
    pub options: OptionsSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum OracleSpec {
    /// Matrix of outcome labels; the universe is the set of distinct labels
    /// in row-major first-appearance order.
    Explicit { matrix: Vec<Vec<String>> },
    /// Generators (minimal satisfying sets) of a monotone property.
    MonotoneProperty {
        outcomes: Vec<String>,
        generators: Vec<Vec<String>>,
    },
    /// Digraph with owner tags; outcomes are terminals plus non-transient
    /// components (msdggs) or the merged cycle outcome (dggs).
    Positional {
        mode: String,
        vertices: Vec<VertexSpec>,
        arcs: Vec<[String; 2]>,
        start: String,
    },
    /// Areas of a square map with adjacency and side contacts.
    Jordan {
        areas: Vec<String>,
        adjacency: Vec<[String; 2]>,
        sides: SidesSpec,
    },
    /// Monotone bargaining scheme; outcomes are labelled `a{i}b{j}`.
    Bargaining { m: usize, n: usize },
    /// Veto voting scheme under the budget identity.
    Veto {
        mu_a: u64,
        mu_b: u64,
        candidates: Vec<CandidateSpec>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexSpec {
    pub name: String,
    pub owner: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SidesSpec {
    pub n: Vec<String>,
    pub e: Vec<String>,
    pub s: Vec<String>,
    pub w: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CandidateSpec {
    pub name: String,
    pub resistance: u64,
}

/// Worst-to-best outcome label listings for the two players.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreferenceSpec {
    pub alice: Vec<String>,
    pub bob: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptionsSpec {
    pub dichotomy: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expansion_limit: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tight_limit: Option<u32>,
}

impl OptionsSpec {
    fn is_default(&self) -> bool {
        *self == OptionsSpec::default()
    }
}

/// A parsed instance: the oracle, optional preferences, and options.
#[derive(Debug, Clone)]
pub struct ParsedInstance {
    pub oracle: OracleInstance,
    pub preferences: Option<(Preference, Preference)>,
    pub options: OptionsSpec,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<InstanceFile> {
        let file: InstanceFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInstance(format!("malformed instance file: {e}")))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidInstance(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        Ok(file)
    }

    pub fn parse(&self) -> Result<ParsedInstance> {
        let oracle = build_oracle(&self.oracle)?;
        let preferences = match &self.preferences {
            None => None,
            Some(spec) => Some((
                validate_preference(&spec.alice, &oracle)?,
                validate_preference(&spec.bob, &oracle)?,
            )),
        };
        Ok(ParsedInstance {
            oracle,
            preferences,
            options: self.options.clone(),
        })
    }
}

/// Maps a worst-to-best label listing onto a strict total order over the
/// oracle's outcomes. Rejects repeats, gaps and unknown labels, naming the
/// offending label.
pub fn validate_preference(raw: &[String], oracle: &OracleInstance) -> Result<Preference> {
    let mut order = Vec::with_capacity(raw.len());
    for label in raw {
        match oracle.index_of_label(label) {
            Some(i) => order.push(i),
            None => {
                return Err(Error::InvalidPreference(format!(
                    "unknown outcome label {label:?}"
                )))
            }
        }
    }
    let p = oracle.outcome_count();
    Preference::new(order, p).map_err(|e| match e {
        Error::InvalidPreference(msg) => {
            // translate index talk back into labels where possible
            Error::InvalidPreference(
                raw.iter()
                    .enumerate()
                    .find(|(i, l)| raw[..*i].contains(l))
                    .map(|(_, l)| format!("outcome label {l:?} listed twice"))
                    .unwrap_or(msg),
            )
        }
        other => other,
    })
}

fn resolve(labels: &[String], universe: &[String]) -> Result<Vec<usize>> {
    labels
        .iter()
        .map(|l| {
            universe
                .iter()
                .position(|u| u == l)
                .ok_or_else(|| Error::InvalidInstance(format!("unknown outcome label {l:?}")))
        })
        .collect()
}

fn build_oracle(spec: &OracleSpec) -> Result<OracleInstance> {
    match spec {
        OracleSpec::Explicit { matrix } => {
            if matrix.is_empty() || matrix[0].is_empty() {
                return Err(Error::InvalidInstance("matrix must be nonempty".into()));
            }
            let cols = matrix[0].len();
            let mut labels: Vec<String> = Vec::new();
            let mut cells = Vec::new();
            for row in matrix {
                if row.len() != cols {
                    return Err(Error::InvalidInstance(
                        "all matrix rows must have the same length".into(),
                    ));
                }
                for label in row {
                    let idx = match labels.iter().position(|l| l == label) {
                        Some(i) => i,
                        None => {
                            labels.push(label.clone());
                            labels.len() - 1
                        }
                    };
                    cells.push(idx);
                }
            }
            let form = ExplicitGameForm::new(matrix.len(), cols, cells, labels.len())?;
            OracleInstance::new(Backend::Explicit(form), Some(labels))
        }
        OracleSpec::MonotoneProperty {
            outcomes,
            generators,
        } => {
            let p = outcomes.len();
            let sets = generators
                .iter()
                .map(|g| Ok(OutcomeSet::from_indices(p, &resolve(g, outcomes)?)))
                .collect::<Result<Vec<_>>>()?;
            let form = MonotonePropertyForm::new(p, sets)?;
            OracleInstance::new(Backend::MonotoneProperty(form), Some(outcomes.clone()))
        }
        OracleSpec::Positional {
            mode,
            vertices,
            arcs,
            start,
        } => {
            let mode = match mode.as_str() {
                "dggs" => PositionalMode::Dggs,
                "msdggs" => PositionalMode::Msdggs,
                other => {
                    return Err(Error::InvalidInstance(format!(
                        "unknown mode {other:?} (expected \"dggs\" or \"msdggs\"; cyclic \
                         structures with per-dicycle outcomes are not supported)"
                    )))
                }
            };
            let names: Vec<String> = vertices.iter().map(|v| v.name.clone()).collect();
            let owners = vertices
                .iter()
                .map(|v| match v.owner.as_str() {
                    "A" | "a" | "alice" => Ok(Owner::Alice),
                    "B" | "b" | "bob" => Ok(Owner::Bob),
                    "T" | "t" | "terminal" => Ok(Owner::Terminal),
                    other => Err(Error::InvalidInstance(format!(
                        "unknown owner tag {other:?} for vertex {:?}",
                        v.name
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            let vertex_index = |name: &String| {
                names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| Error::InvalidInstance(format!("unknown vertex {name:?}")))
            };
            let arcs = arcs
                .iter()
                .map(|[from, to]| Ok((vertex_index(from)?, vertex_index(to)?)))
                .collect::<Result<Vec<_>>>()?;
            let start = vertex_index(start)?;
            let structure = PositionalStructure::new(names, owners, arcs, start, mode)?;
            OracleInstance::new(Backend::Positional(structure), None)
        }
        OracleSpec::Jordan {
            areas,
            adjacency,
            sides,
        } => {
            let p = areas.len();
            let pairs = adjacency
                .iter()
                .map(|[a, b]| {
                    let ra = resolve(std::slice::from_ref(a), areas)?[0];
                    let rb = resolve(std::slice::from_ref(b), areas)?[0];
                    Ok((ra, rb))
                })
                .collect::<Result<Vec<_>>>()?;
            let side = |labels: &Vec<String>| -> Result<OutcomeSet> {
                Ok(OutcomeSet::from_indices(p, &resolve(labels, areas)?))
            };
            let map = JordanMap::new(
                p,
                &pairs,
                [side(&sides.n)?, side(&sides.e)?, side(&sides.s)?, side(&sides.w)?],
            )?;
            OracleInstance::new(Backend::Jordan(map), Some(areas.clone()))
        }
        OracleSpec::Bargaining { m, n } => {
            let scheme = MbScheme::new(*m, *n)?;
            OracleInstance::new(Backend::Bargaining(scheme), None)
        }
        OracleSpec::Veto {
            mu_a,
            mu_b,
            candidates,
        } => {
            let labels: Vec<String> = candidates.iter().map(|c| c.name.clone()).collect();
            let lambda = candidates.iter().map(|c| c.resistance).collect();
            let scheme = VetoScheme::new(*mu_a, *mu_b, lambda)?;
            OracleInstance::new(Backend::Veto(scheme), Some(labels))
        }
    }
}

/// Renders an explicit expansion of any backend as an instance file, so the
/// output of an expansion can be re-ingested directly.
pub fn expansion_to_instance(
    form: &ExplicitGameForm,
    labels: &[String],
    preferences: Option<&PreferenceSpec>,
) -> InstanceFile {
    let matrix = (0..form.rows())
        .map(|r| {
            (0..form.cols())
                .map(|c| labels[form.cell(r, c)].clone())
                .collect()
        })
        .collect();
    InstanceFile {
        schema_version: SCHEMA_VERSION,
        oracle: OracleSpec::Explicit { matrix },
        preferences: preferences.cloned(),
        options: OptionsSpec::default(),
    }
}
