mod common;

#[test]
fn concession_and_acceptance_properties() {
    let checks = common::check_concession_properties(10_000, 0xC0).unwrap();
    assert!(checks > 10_000);
}
