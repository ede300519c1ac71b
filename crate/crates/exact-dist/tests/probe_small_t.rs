#[test]
fn probe_small_t() {
    use exact_dist::{joint_mellin, JointMellinQuery};
    let (q1, q2) = (1.0, 2.0);
    for &t in &[0.08, 0.04, 0.02, 0.01, 0.005] {
        let jm = joint_mellin(&JointMellinQuery { j: 1, t, qs: vec![q1, q2], k_max: 20_000 }).unwrap();
        println!("t={t:6}: v/t = {:.8} tail={:.2e}", jm.value / t, jm.tail_bound);
    }
}
