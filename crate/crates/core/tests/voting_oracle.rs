mod common;

#[test]
fn voting_rules_match_counting_oracles() {
    let cases = common::check_voting_rules(4, 4).unwrap();
    assert!(cases > 300_000);
}

#[test]
fn oracle_helpers() {
    assert_eq!(common::permutations(3).len(), 6);
    assert_eq!(common::all_matrices(2, 2, 2).len(), 16);
    assert_eq!(common::plurality_tie_set(&[vec![1, 1, 0], vec![0, 1, 1], vec![0, 1, 1]]), vec![1]);
    assert_eq!(common::majority_verdict(&[true, false]), None);
}
