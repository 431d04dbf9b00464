//! Property audits: executable checks of the algebraic laws the pipeline
//! relies on, run over the configured fixtures and seeded random systems.
//! Every audit returns a machine-readable pass/fail with counterexample
//! details instead of panicking.

use crate::config::NeighbourhoodSpec;
use crate::conley::{audit_independence, compute_bundle, distinct_invariants};
use crate::dynamics::{invariant_parts, oracle_invariant};
use crate::error::ConleyError;
use crate::grid::CubicalSet;
use crate::homology::FieldSpec;
use crate::isolation::{check_isolation, f_boundary, grow_isolating_neighbourhood};
use crate::pairs::{
    check_pair, construct_weak_index_pair, find_strict_pair, g_step, mixed_pairs,
    pair_intersection, squeeze, CubicalPair,
};
use crate::sampling::{verify_dmds_axioms, MvMap};
use crate::testgen::{random_neighbourhood, random_system};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub pass: bool,
    pub details: String,
}

impl PropertyResult {
    fn pass(name: &str, details: String) -> PropertyResult {
        PropertyResult { name: name.into(), pass: true, details }
    }
    fn fail(name: &str, details: String) -> PropertyResult {
        PropertyResult { name: name.into(), pass: false, details }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub seed: u64,
    pub properties: Vec<PropertyResult>,
    pub pass: bool,
}

impl AuditReport {
    pub fn new(seed: u64, properties: Vec<PropertyResult>) -> AuditReport {
        let pass = properties.iter().all(|p| p.pass);
        AuditReport { seed, properties, pass }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("audit report serializes");
        s.push('\n');
        s
    }
}

/// Dynamics axioms of the sampled map: zero-step identity, the semigroup
/// law, forward/backward symmetry; plus detection of an injected table
/// fault by the same checks.
pub fn audit_dmds(map: &MvMap, trials: u32, seed: u64) -> Vec<PropertyResult> {
    let name = "dmds-axioms";
    let rep = verify_dmds_axioms(map, trials, seed);
    let base = if rep.all_ok() {
        PropertyResult::pass(name, format!("{} trials", rep.trials))
    } else {
        PropertyResult::fail(name, rep.witnesses.join("; "))
    };
    // fault injection: corrupting one table entry must break the axioms
    let fault_name = "dmds-fault-detection";
    let fault = if trials == 0 {
        PropertyResult::pass(fault_name, "vacuous (zero trials)".into())
    } else {
        let mut broken = map.clone();
        match broken.inject_table_fault() {
            Some((cube, dropped)) => {
                let rep2 = verify_dmds_axioms(&broken, trials, seed);
                if rep2.all_ok() {
                    PropertyResult::fail(
                        fault_name,
                        format!(
                            "dropping {} from the value of {} went undetected",
                            broken.grid.cube_label(&dropped),
                            broken.grid.cube_label(&cube)
                        ),
                    )
                } else {
                    PropertyResult::pass(fault_name, rep2.witnesses.join("; "))
                }
            }
            None => PropertyResult::fail(fault_name, "no entry available to corrupt".into()),
        }
    };
    vec![base, fault]
}

/// Trimming versus the bounded-horizon oracle on seeded random systems.
pub fn audit_oracle(systems: u32, seed: u64) -> PropertyResult {
    let name = "invariant-part-oracle";
    for i in 0..systems {
        let dim = 1 + (i % 2) as usize;
        let map = random_system(seed.wrapping_add(i as u64), dim);
        let n = random_neighbourhood(&map, seed.wrapping_add(1000 + i as u64));
        let parts = invariant_parts(&map, &n);
        let horizon = n.len();
        let oracle = oracle_invariant(&map, &n, horizon);
        if !oracle.horizon_sound {
            return PropertyResult::fail(
                name,
                format!("system {i}: horizon {horizon} not sound"),
            );
        }
        if parts.inv.cells != oracle.parts.inv.cells {
            return PropertyResult::fail(
                name,
                format!(
                    "system {i}: trimming gives {} cells, oracle {}",
                    parts.inv.len(),
                    oracle.parts.inv.len()
                ),
            );
        }
    }
    PropertyResult::pass(name, format!("{systems} random systems, zero discrepancies"))
}

/// Check a pair against all weak axioms, tagging failures with a context
/// label.
fn expect_weak(
    map: &MvMap,
    n: &CubicalSet,
    parts: &crate::dynamics::InvariantParts,
    pair: &CubicalPair,
    label: &str,
    errors: &mut Vec<String>,
) {
    match check_pair(map, n, parts, pair) {
        Ok(rep) if rep.is_weak_pair() => {}
        Ok(rep) => errors.push(format!("{label}: axioms failed: {}", rep.witnesses.join("; "))),
        Err(e) => errors.push(format!("{label}: {e}")),
    }
}

/// Pair-algebra laws on seeded random systems: escape boundaries stay on
/// the topological boundary, intersections and mixed pairs are again weak
/// index pairs, one interpolation step stays nested and weak, and the
/// squeeze terminates within the cell-count bound.
pub fn audit_pair_algebra(systems: u32, seed: u64) -> PropertyResult {
    let name = "pair-algebra";
    let mut done = 0u32;
    let mut attempt = 0u64;
    let mut errors: Vec<String> = Vec::new();
    while done < systems && attempt < 20 * systems as u64 + 20 {
        attempt += 1;
        let dim = 1 + (attempt % 2) as usize;
        let map = random_system(seed.wrapping_add(7000 + attempt), dim);
        let seed_cell = random_neighbourhood(&map, seed.wrapping_add(9000 + attempt));
        let Ok((n, _, parts)) = grow_isolating_neighbourhood(&map, &seed_cell, 3) else {
            continue;
        };
        let Ok(pair_a) = construct_weak_index_pair(&map, &n, &parts, None, 0) else {
            continue;
        };
        let Ok(pair_b) = construct_weak_index_pair(&map, &n, &parts, None, 1) else {
            continue;
        };
        done += 1;
        let tag = |s: &str| format!("system {attempt} ({dim}d): {s}");

        // escape boundary of each pair stays on the boundary of N
        for (i, p) in [&pair_a, &pair_b].into_iter().enumerate() {
            match f_boundary(&map, &p.p1) {
                Ok(fb) => {
                    if !fb.is_subset(&n.boundary()) {
                        errors.push(tag(&format!("pair {i}: escape set leaves bd N")));
                    }
                }
                Err(e) => errors.push(tag(&format!("pair {i}: {e}"))),
            }
        }

        // intersection law
        let r = match pair_intersection(&pair_a, &pair_b) {
            Ok(r) => r,
            Err(e) => {
                errors.push(tag(&format!("intersection: {e}")));
                continue;
            }
        };
        expect_weak(&map, &n, &parts, &r, &tag("intersection"), &mut errors);

        // mixed pairs over the nesting r <= pair_a
        match mixed_pairs(&r, &pair_a) {
            Ok((m1, m2)) => {
                expect_weak(&map, &n, &parts, &m1, &tag("mixed-1"), &mut errors);
                expect_weak(&map, &n, &parts, &m2, &tag("mixed-2"), &mut errors);

                // one interpolation step from m1 toward r stays nested
                match g_step(&map, &n, &r, &m1) {
                    Ok(g) => {
                        expect_weak(&map, &n, &parts, &g, &tag("g-step"), &mut errors);
                        if !r.p1.is_subset(&g.p1) || !r.p2.is_subset(&g.p2) {
                            errors.push(tag("g-step not above the lower pair"));
                        }
                        if !g.p1.is_subset(&m1.p1) {
                            errors.push(tag("g-step left the upper pair"));
                        }
                    }
                    Err(e) => errors.push(tag(&format!("g-step: {e}"))),
                }

                // squeeze m1 down to r through weak pairs
                match squeeze(&map, &n, &r, &m1) {
                    Ok(chain) => {
                        if chain.len() > 2 * n.len() + 2 {
                            errors.push(tag("squeeze exceeded the cell-count bound"));
                        }
                        for (k, q) in chain.iter().enumerate() {
                            expect_weak(
                                &map,
                                &n,
                                &parts,
                                q,
                                &tag(&format!("squeeze step {k}")),
                                &mut errors,
                            );
                        }
                    }
                    Err(e) => errors.push(tag(&format!("squeeze: {e}"))),
                }
            }
            Err(e) => errors.push(tag(&format!("mixed: {e}"))),
        }
    }
    if !errors.is_empty() {
        return PropertyResult::fail(name, errors.join(" | "));
    }
    if done < systems {
        return PropertyResult::fail(
            name,
            format!("only {done} of {systems} random systems yielded two pairs"),
        );
    }
    PropertyResult::pass(name, format!("{done} random systems, all laws hold"))
}

/// Index independence of the construction on one neighbourhood.
pub fn audit_independence_property(
    map: &MvMap,
    name_suffix: &str,
    n_set: &CubicalSet,
    field: FieldSpec,
) -> PropertyResult {
    let name = format!("index-independence/{name_suffix}");
    match audit_independence(map, n_set, field) {
        Ok(combos) => PropertyResult::pass(
            &name,
            format!(
                "{} combinations agree: {}",
                combos.len(),
                combos.iter().map(|(t, _)| t.as_str()).collect::<Vec<_>>().join(", ")
            ),
        ),
        Err(e) => PropertyResult::fail(&name, e.to_string()),
    }
}

/// Strict/weak consistency on one neighbourhood: when a strict pair exists
/// both pipelines must report the same invariant; when none exists the
/// neighbourhood must not be strongly isolating.
pub fn audit_strong_consistency(
    map: &MvMap,
    name_suffix: &str,
    n_set: &CubicalSet,
    field: FieldSpec,
) -> PropertyResult {
    let name = format!("strong-consistency/{name_suffix}");
    let (iso, parts) = match check_isolation(map, n_set) {
        Ok(v) => v,
        Err(e) => return PropertyResult::fail(&name, e.to_string()),
    };
    let weak_pair = match construct_weak_index_pair(map, n_set, &parts, None, 0) {
        Ok(p) => p,
        Err(e) => return PropertyResult::fail(&name, format!("weak pipeline: {e}")),
    };
    let weak_bundle = match compute_bundle(map, n_set, &weak_pair, field) {
        Ok(b) => b,
        Err(e) => return PropertyResult::fail(&name, format!("weak pipeline: {e}")),
    };
    match find_strict_pair(map, n_set, &parts) {
        Ok(strict_pair) => match compute_bundle(map, n_set, &strict_pair, field) {
            Ok(strict_bundle) => {
                let distinct = distinct_invariants(&[weak_bundle, strict_bundle]);
                if distinct.len() == 1 {
                    PropertyResult::pass(&name, "strict and weak pipelines agree".into())
                } else {
                    PropertyResult::fail(&name, "strict and weak invariants differ".into())
                }
            }
            Err(e) => PropertyResult::fail(&name, format!("strict pipeline: {e}")),
        },
        Err(ConleyError::NoStrictPairFound) => {
            if iso.strong_setwise {
                PropertyResult::fail(
                    &name,
                    "strongly isolating neighbourhood without a strict pair".into(),
                )
            } else {
                PropertyResult::pass(
                    &name,
                    "no strict pair, and the neighbourhood is not strongly isolating".into(),
                )
            }
        }
        Err(e) => PropertyResult::fail(&name, e.to_string()),
    }
}

/// The full audit over a configured map and its neighbourhoods.
#[allow(clippy::too_many_arguments)]
pub fn run_audit(
    map: &MvMap,
    neighbourhoods: &[(String, NeighbourhoodSpec)],
    field: FieldSpec,
    dmds_trials: u32,
    oracle_systems: u32,
    pair_systems: u32,
    seed: u64,
) -> AuditReport {
    let mut props = audit_dmds(map, dmds_trials, seed);
    props.push(audit_oracle(oracle_systems, seed));
    props.push(audit_pair_algebra(pair_systems, seed));
    for (name, spec) in neighbourhoods {
        let n_set = match spec {
            NeighbourhoodSpec::Explicit(set) => set.clone(),
            NeighbourhoodSpec::Auto { .. } => continue,
        };
        match check_isolation(map, &n_set) {
            Ok((iso, _)) if iso.weak => {
                props.push(audit_independence_property(map, name, &n_set, field));
                props.push(audit_strong_consistency(map, name, &n_set, field));
            }
            _ => props.push(PropertyResult::pass(
                &format!("index-independence/{name}"),
                "skipped: neighbourhood does not isolate".into(),
            )),
        }
    }
    AuditReport::new(seed, props)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testgen;

    #[test]
    fn dmds_audit_on_fixture() {
        let map = testgen::doubling_map().unwrap();
        let res = audit_dmds(&map, 50, 1);
        assert!(res.iter().all(|p| p.pass), "{res:?}");
    }

    #[test]
    fn zero_trials_vacuous() {
        let map = testgen::doubling_map().unwrap();
        let res = audit_dmds(&map, 0, 1);
        assert!(res.iter().all(|p| p.pass));
        let oracle = audit_oracle(0, 1);
        assert!(oracle.pass);
        let pairs = audit_pair_algebra(0, 1);
        assert!(pairs.pass, "{}", pairs.details);
    }

    #[test]
    fn oracle_audit_small() {
        let res = audit_oracle(10, 42);
        assert!(res.pass, "{}", res.details);
    }

    #[test]
    fn pair_algebra_small() {
        let res = audit_pair_algebra(5, 42);
        assert!(res.pass, "{}", res.details);
    }

    #[test]
    fn strong_consistency_on_contracting_fixture() {
        let map = testgen::contracting_map().unwrap();
        let n = map.effective_domain();
        let res = audit_strong_consistency(&map, "contracting", &n, FieldSpec::Rational);
        assert!(res.pass, "{}", res.details);
    }

    #[test]
    fn strong_consistency_on_period_two() {
        let map = testgen::doubling_map().unwrap();
        let n = testgen::doubling_period_two_neighbourhood(&map.grid);
        let res = audit_strong_consistency(&map, "p2", &n, FieldSpec::Rational);
        // no strict pair exists, and the neighbourhood is not strongly
        // isolating: a legal outcome
        assert!(res.pass, "{}", res.details);
    }
}
