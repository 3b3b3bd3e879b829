use kg_core::bound::{find_bound_states, pole_denominator};
use kg_core::kinematics::{critical_potentials, interior_q_squared};
use kg_core::scatter::{coefficients, linear_grid, resonance_energies, sweep_transmission, transmission};
use kg_core::table::{Cell, SweepTable};
use kg_core::{PotentialConfig, SolutionClass};
use proptest::prelude::*;

fn cfg(v0: f64, a: f64, g_t: f64) -> PotentialConfig {
    PotentialConfig::new(v0, a, g_t).unwrap()
}

#[test]
fn sweep_records_equal_single_calls() {
    let grid = linear_grid(-10.0, 2.0, 240);
    let sweep = sweep_transmission(1.1, 0.25, 3.0, &grid).unwrap();
    assert_eq!(sweep.records.len(), grid.len());
    for r in &sweep.records {
        let (refl, t) = coefficients(1.1, &cfg(r.v0, 3.0, 0.25)).unwrap();
        assert_eq!(r.transmission, t);
        assert_eq!(r.reflection, refl);
        assert_eq!(r.class, SolutionClass::C);
    }
}

#[test]
fn sweep_table_survives_text() {
    let sweep = sweep_transmission(1.1, 1.0, 1.0, &linear_grid(0.0, 10.0, 100)).unwrap();
    let mut t = SweepTable::new(["v0", "T"]);
    for r in &sweep.records {
        t.push(vec![Cell::Real(r.v0), Cell::Real(r.transmission)]).unwrap();
    }
    let back = SweepTable::from_csv(&t.to_csv()).unwrap();
    for (row, r) in back.rows().iter().zip(&sweep.records) {
        assert_eq!(row[1], Cell::Real(r.transmission));
    }
}

#[test]
fn level_dives_into_lower_continuum_for_pure_vector_well() {
    // the ground level of a narrow vector well crosses E = 0 and keeps falling
    let energies: Vec<f64> = [-0.5, -1.0, -1.5, -2.0]
        .iter()
        .map(|&v| find_bound_states(&cfg(v, 0.5, 1.0))[0].energy)
        .collect();
    assert!(energies.windows(2).all(|w| w[1] < w[0]), "{energies:?}");
    assert!(energies[0] > 0.0 && energies[3] < 0.0);
}

#[test]
fn resonances_sit_above_both_critical_potentials() {
    let c = cfg(3.0, 1.0, 1.0);
    let (v1, v2) = critical_potentials(1.1, 1.0).unwrap();
    assert!(c.v0() > v1 && c.v0() > v2.unwrap());
    for r in resonance_energies(&c, 4).unwrap() {
        assert!(interior_q_squared(r.value, &c) > 0.0);
        assert!((transmission(r.value, &c).unwrap() - 1.0).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn every_level_is_a_transmission_pole(v0 in -4.0f64..-0.05, a in 0.3f64..4.0, g in 0.0f64..=1.0) {
        let c = cfg(v0, a, g);
        for s in find_bound_states(&c) {
            prop_assert!(pole_denominator(s.energy, &c) < 1e-8);
        }
    }

    #[test]
    fn reflection_and_transmission_are_probabilities(e in 1.0001f64..6.0, v0 in -20.0f64..20.0, a in 0.05f64..6.0, g in 0.0f64..=1.0) {
        let (r, t) = coefficients(e, &cfg(v0, a, g)).unwrap();
        prop_assert!((0.0..=1.0).contains(&r) && (0.0..=1.0).contains(&t));
        prop_assert!((r + t - 1.0).abs() < 1e-12);
    }
}
