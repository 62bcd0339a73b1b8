//! Machine-readable solve reports and their verification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{OptionsSpec, ParsedInstance, SCHEMA_VERSION};
use crate::lex::{certify_ne, lexsafe_ne, LexsafeNe};
use crate::oracle::{OracleInstance, Player, StrategyHandle};
use crate::outcomes::{OutcomeId, OutcomeSet};

/// Serialized lexsafe equilibrium of one player's box. Strategies stay in
/// backend-native encoding; outcome sets are spelled as label lists, and
/// the report embeds the full label table, so indices inside payloads stay
/// interpretable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeReport {
    pub player: Player,
    pub x_strategy: StrategyHandle,
    pub y_strategy: StrategyHandle,
    pub ne_outcome: String,
    pub support_own: Vec<String>,
    pub support_other: Vec<String>,
    pub queries_used: u64,
    pub certified: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxReports {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alice: Option<NeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bob: Option<NeReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub schema_version: u32,
    pub labels: Vec<String>,
    pub boxes: BoxReports,
}

fn labels_of(set: &OutcomeSet, oracle: &OracleInstance) -> Vec<String> {
    set.iter().map(|i| oracle.label_of(i).to_string()).collect()
}

pub fn ne_report(ne: &LexsafeNe, oracle: &OracleInstance, certified: bool) -> NeReport {
    NeReport {
        player: ne.player,
        x_strategy: ne.x_strategy.clone(),
        y_strategy: ne.y_strategy.clone(),
        ne_outcome: oracle.label_of(ne.ne_outcome.0).to_string(),
        support_own: labels_of(&ne.support_own, oracle),
        support_other: labels_of(&ne.support_other, oracle),
        queries_used: ne.queries_used,
        certified,
    }
}

impl SolveReport {
    pub fn new(labels: Vec<String>, alice: Option<NeReport>, bob: Option<NeReport>) -> Self {
        SolveReport {
            schema_version: SCHEMA_VERSION,
            labels,
            boxes: BoxReports { alice, bob },
        }
    }

    pub fn from_json(text: &str) -> Result<SolveReport> {
        let report: SolveReport = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInstance(format!("malformed report: {e}")))?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidInstance(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                report.schema_version
            )));
        }
        Ok(report)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Recomputes both boxes from the instance and checks the report against
/// them field by field (query counts aside, which depend on options), then
/// re-certifies the recomputed records. Returns the list of discrepancies;
/// empty means the report verifies.
pub fn verify_report(report: &SolveReport, instance: &ParsedInstance) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    let oracle = &instance.oracle;
    if report.labels != oracle.labels() {
        problems.push("label table differs from the instance".to_string());
        return Ok(problems);
    }
    let Some((pref_a, pref_b)) = &instance.preferences else {
        return Err(Error::InvalidInstance(
            "instance file lacks preferences; cannot verify a solve report".into(),
        ));
    };
    let boxes = [
        (Player::Alice, report.boxes.alice.as_ref()),
        (Player::Bob, report.boxes.bob.as_ref()),
    ];
    for (player, reported) in boxes {
        let Some(reported) = reported else { continue };
        let (own, other) = match player {
            Player::Alice => (pref_a, pref_b),
            Player::Bob => (pref_b, pref_a),
        };
        let recomputed = lexsafe_ne(oracle, own, other, player, instance.options.dichotomy)?;
        let certified = certify_ne(&recomputed, pref_a, pref_b);
        let expected = ne_report(&recomputed, oracle, certified);
        let tag = match player {
            Player::Alice => "alice",
            Player::Bob => "bob",
        };
        if reported.player != player {
            problems.push(format!("{tag}: player tag mismatch"));
        }
        if reported.x_strategy != expected.x_strategy {
            problems.push(format!("{tag}: x_strategy differs from recomputation"));
        }
        if reported.y_strategy != expected.y_strategy {
            problems.push(format!("{tag}: y_strategy differs from recomputation"));
        }
        if reported.ne_outcome != expected.ne_outcome {
            problems.push(format!("{tag}: ne_outcome differs from recomputation"));
        }
        if reported.support_own != expected.support_own {
            problems.push(format!("{tag}: support_own differs from recomputation"));
        }
        if reported.support_other != expected.support_other {
            problems.push(format!("{tag}: support_other differs from recomputation"));
        }
        if !reported.certified || !expected.certified {
            problems.push(format!("{tag}: certification flag is not set"));
        }
        // independent re-check of the reported record itself
        let reconstructed = reported_to_ne(reported, oracle)?;
        if !certify_ne(&reconstructed, pref_a, pref_b) {
            problems.push(format!("{tag}: reported record fails certification"));
        }
    }
    Ok(problems)
}

fn reported_to_ne(report: &NeReport, oracle: &OracleInstance) -> Result<LexsafeNe> {
    let p = oracle.outcome_count();
    let resolve_set = |labels: &[String]| -> Result<OutcomeSet> {
        let mut set = OutcomeSet::empty(p);
        for l in labels {
            set.insert(oracle.index_of_label(l).ok_or_else(|| {
                Error::InvalidInstance(format!("report references unknown label {l:?}"))
            })?);
        }
        Ok(set)
    };
    Ok(LexsafeNe {
        player: report.player,
        x_strategy: report.x_strategy.clone(),
        y_strategy: report.y_strategy.clone(),
        support_own: resolve_set(&report.support_own)?,
        support_other: resolve_set(&report.support_other)?,
        ne_outcome: OutcomeId(oracle.index_of_label(&report.ne_outcome).ok_or_else(|| {
            Error::InvalidInstance(format!(
                "report references unknown label {:?}",
                report.ne_outcome
            ))
        })?),
        queries_used: report.queries_used,
    })
}

/// Runs the full solve for the requested players and assembles the report.
pub fn solve_to_report(
    instance: &ParsedInstance,
    alice_box: bool,
    bob_box: bool,
) -> Result<SolveReport> {
    let oracle = &instance.oracle;
    let Some((pref_a, pref_b)) = &instance.preferences else {
        return Err(Error::InvalidInstance(
            "instance file lacks preferences; solving needs both players' orders".into(),
        ));
    };
    let OptionsSpec { dichotomy, .. } = instance.options;
    let mut alice = None;
    let mut bob = None;
    if alice_box {
        let ne = lexsafe_ne(oracle, pref_a, pref_b, Player::Alice, dichotomy)?;
        let certified = certify_ne(&ne, pref_a, pref_b);
        alice = Some(ne_report(&ne, oracle, certified));
    }
    if bob_box {
        let ne = lexsafe_ne(oracle, pref_b, pref_a, Player::Bob, dichotomy)?;
        let certified = certify_ne(&ne, pref_a, pref_b);
        bob = Some(ne_report(&ne, oracle, certified));
    }
    Ok(SolveReport::new(oracle.labels().to_vec(), alice, bob))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::InstanceFile;

    fn g1_instance() -> ParsedInstance {
        let text = r#"{
            "schema_version": 1,
            "oracle": {"type": "explicit", "matrix": [["w1","w1"],["w2","w3"]]},
            "preferences": {"alice": ["w3","w1","w2"], "bob": ["w1","w3","w2"]}
        }"#;
        InstanceFile::from_json(text).unwrap().parse().unwrap()
    }

    #[test]
    fn report_roundtrip_and_verify() {
        let instance = g1_instance();
        let report = solve_to_report(&instance, true, true).unwrap();
        let json = report.to_json();
        let back = SolveReport::from_json(&json).unwrap();
        assert_eq!(report, back);
        assert!(verify_report(&back, &instance).unwrap().is_empty());
        let alice = back.boxes.alice.as_ref().unwrap();
        assert_eq!(alice.ne_outcome, "w1");
        assert!(alice.certified);
        let bob = back.boxes.bob.as_ref().unwrap();
        assert_eq!(bob.ne_outcome, "w2");
    }

    #[test]
    fn tampered_report_fails_verification() {
        let instance = g1_instance();
        let mut report = solve_to_report(&instance, true, false).unwrap();
        report.boxes.alice.as_mut().unwrap().ne_outcome = "w2".into();
        let problems = verify_report(&report, &instance).unwrap();
        assert!(!problems.is_empty());
    }
}
