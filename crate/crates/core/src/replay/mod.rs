//! Replay of case-by-case arguments encoded as data.
//!
//! The bundled catalog (`data/scenarios.txt`) encodes every case of the
//! three-step argument that, on small rich domains, a rule satisfying Pareto,
//! anonymity, neutrality and resistance to small-coalition manipulation must
//! agree with Borda on the three-cycle and with Condorcet elsewhere. Each
//! scenario lists its preconditions, profile templates, outcome claims,
//! misreport steps and chains; [`verify_scenario`] re-derives all of them
//! exactly at a parameter point.

pub mod catalog;
pub mod expr;
pub mod sample;
pub mod verify;

use std::sync::OnceLock;

pub use catalog::{parse_catalog, CatalogError, Scenario};
pub use expr::{epsilon_partition, Env};
pub use sample::sample_params;
pub use verify::{verify_induction_chain, verify_scenario, Check, CheckKind, ReplayError, ScenarioReport};

const CATALOG_TEXT: &str = include_str!("../../data/scenarios.txt");

/// Case ids in reading order, one per line.
pub const CASE_INDEX: &str = include_str!("../../data/case_index.txt");

/// The bundled scenarios, parsed once.
pub fn scenario_catalog() -> &'static [Scenario] {
    static CATALOG: OnceLock<Vec<Scenario>> = OnceLock::new();
    CATALOG.get_or_init(|| parse_catalog(CATALOG_TEXT).expect("bundled catalog parses"))
}

pub fn find_scenario(id: &str) -> Result<&'static Scenario, ReplayError> {
    scenario_catalog().iter().find(|s| s.id == id).ok_or_else(|| ReplayError::UnknownScenario(id.to_string()))
}

/// Ids listed in [`CASE_INDEX`].
pub fn indexed_case_ids() -> Vec<&'static str> {
    CASE_INDEX.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect()
}
