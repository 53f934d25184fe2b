use influence_bench::{populated_store, reference_time, snapshot};
use influence_core::metrics::compute_profile;

#[test]
fn synthetic_inputs_are_valid() {
    let snap = snapshot("probe", &["a".into()]);
    assert_eq!(snap.timeline.len(), 100);
    snap.validate().unwrap();
    assert!(compute_profile(&snap, reference_time()).unwrap().quality.influence_metric > 0.0);
    assert!(populated_store(10).len() > 10 * 23);
}
