//! Team performance metrics over member utilities.

/// Utility of the least benefited member.
pub fn metric_min(member_utilities: &[f64]) -> f64 {
    assert!(!member_utilities.is_empty(), "metric over an empty team");
    member_utilities.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Mean member utility.
pub fn metric_avg(member_utilities: &[f64]) -> f64 {
    assert!(!member_utilities.is_empty(), "metric over an empty team");
    member_utilities.iter().sum::<f64>() / member_utilities.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(metric_min(&[0.2, 0.8]), 0.2);
        assert_eq!(metric_avg(&[0.2, 0.8]), 0.5);
        assert_eq!(metric_min(&[0.4; 4]), 0.4);
        assert!((metric_avg(&[0.4; 4]) - 0.4).abs() < 1e-15);
        assert_eq!(metric_min(&[0.0; 4]), 0.0);
        assert_eq!(metric_avg(&[0.0; 4]), 0.0);
    }

    #[test]
    #[should_panic]
    fn empty_team_is_a_contract_violation() {
        metric_min(&[]);
    }

    proptest::proptest! {
        #[test]
        fn min_never_exceeds_avg(us in proptest::collection::vec(0.0f64..=1.0, 1..16)) {
            proptest::prop_assert!(metric_min(&us) <= metric_avg(&us) + 1e-15);
        }
    }
}
