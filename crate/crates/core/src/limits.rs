//! Enumeration guardrails.
//!
//! `CTXLAB_GUARDRAIL`, when set to an integer, replaces the default caps on
//! deterministic assignments and generated vertices. The vertex-enumeration
//! edge cap is fixed.

/// Default cap on enumerated deterministic assignments.
pub const DEFAULT_ASSIGNMENTS: usize = 1 << 20;
/// Default cap on generated contextual vertices.
pub const DEFAULT_GENERATED: usize = 1 << 16;
/// Largest edge count accepted by vertex enumeration.
pub const MAX_DD_EDGES: usize = 12;

pub const ENV_VAR: &str = "CTXLAB_GUARDRAIL";

fn env_override() -> Option<usize> {
    std::env::var(ENV_VAR).ok()?.trim().parse().ok()
}

pub fn assignment_limit() -> usize {
    env_override().unwrap_or(DEFAULT_ASSIGNMENTS)
}

pub fn generated_limit() -> usize {
    env_override().unwrap_or(DEFAULT_GENERATED)
}
