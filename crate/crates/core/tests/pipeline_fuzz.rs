mod common;

use std::collections::BTreeMap;

use common::{sample, Family};
use gstruct_core::pipeline::tables::{rule_by_id, Verdict};
use gstruct_core::pipeline::tables::{Cond, Facts};
use gstruct_core::pipeline::{rrb_checked, table_crosscheck};
use gstruct_core::su3::Su3Type;

const FAMILIES: [Family; 5] = [Family::Parallel, Family::X1, Family::X2, Family::X3, Family::X4];

#[test]
fn rrb_consistency_on_random_inputs() {
    let mut rng = common::rng(11);
    for i in 0..200 {
        let s = sample(FAMILIES[i % 5], &mut rng, true);
        let induced = rrb_checked(&s.ambient, &s.slice, &s.phase, &s.dtheta).expect("consistent");
        assert!(induced.residuals.all_zero());
    }
}

#[test]
fn table_rows_hold_on_random_inputs() {
    let mut rng = common::rng(12);
    let mut conflicts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut hits: BTreeMap<&str, [usize; 2]> = BTreeMap::new();
    for family in FAMILIES {
        for _ in 0..150 {
            let s = sample(family, &mut rng, true);
            let induced = rrb_checked(&s.ambient, &s.slice, &s.phase, &s.dtheta).unwrap();
            for c in table_crosscheck(&s.ambient, &induced, &s.slice, &s.phase, &s.dtheta) {
                if rule_by_id(c.rule).unwrap().ambiguous {
                    continue;
                }
                hits.entry(c.rule).or_default()[c.predicate as usize] += 1;
                // The printed factor 2 in this row only matches for constant θ.
                if c.rule == "X2.1" && !s.dtheta.is_zero() {
                    continue;
                }
                if c.verdict == Verdict::Conflict {
                    *conflicts.entry(c.rule).or_default() += 1;
                }
            }
        }
    }
    println!("rule hits [false, true]: {hits:?}");
    assert!(conflicts.is_empty(), "conflicts: {conflicts:?}");
}

#[test]
fn no_w5_for_x2_ambient_is_dtheta_equal_to_rbar_tn() {
    let mut rng = common::rng(13);
    let (mut printed_fails, mut checked) = (0, 0);
    for _ in 0..120 {
        let s = sample(Family::X2, &mut rng, true);
        if s.dtheta.is_zero() {
            continue;
        }
        let induced = rrb_checked(&s.ambient, &s.slice, &s.phase, &s.dtheta).unwrap();
        let facts = Facts::evaluate(&s.ambient, &induced, &s.slice, &s.phase, &s.dtheta);
        let no_w5 = !induced.class.contains(Su3Type::W5);
        assert_eq!(no_w5, facts.holds.contains(&Cond::DthetaEqV));
        if no_w5 != facts.holds.contains(&Cond::DthetaEqTwoV) {
            printed_fails += 1;
        }
        checked += 1;
    }
    assert!(checked > 20);
    assert!(printed_fails > 0);
}

/// The `(idem)` rows of the constant-θ X3 table admit two readings at `θ = π/2`:
/// fixed bound with the parenthesized condition, or the θ = 0 condition with the
/// bound rotated. Both hold.
#[test]
fn x3_constant_theta_rows_hold_under_both_readings() {
    use gstruct_core::pipeline::tables::ThetaKind;
    let mut rng = common::rng(14);
    let mut half_pi_seen = 0;
    for _ in 0..300 {
        let s = sample(Family::X3, &mut rng, false);
        let induced = rrb_checked(&s.ambient, &s.slice, &s.phase, &s.dtheta).unwrap();
        let facts = Facts::evaluate(&s.ambient, &induced, &s.slice, &s.phase, &s.dtheta);
        if facts.theta == ThetaKind::Other {
            continue;
        }
        for id in ["X3c.3", "X3c.4", "X3c.5", "X3c.6"] {
            let rule = rule_by_id(id).unwrap();
            let (predicate, bound) = facts.instantiate(rule);
            assert_eq!(predicate, induced.class.within(&bound), "{id}");
            if facts.theta == ThetaKind::HalfPi {
                half_pi_seen += 1;
                let rotated: Vec<Su3Type> = rule.bound.iter().map(|t| t.quarter_turn_partner()).collect();
                let at_zero = rule.when.iter().all(|c| facts.holds.contains(c));
                assert_eq!(at_zero, induced.class.within(&rotated), "{id} rotated reading");
            }
        }
    }
    assert!(half_pi_seen > 0);
}
