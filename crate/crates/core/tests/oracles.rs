//! `A(p, m)` against values computed independently in 40-digit arithmetic.

use landen_kdv::{a_constant, LandenMap};

const FROZEN: [(usize, f64, f64); 7] = [
    (3, 0.4, -0.51430014399557291),
    (3, 0.5, -0.46788982501387056),
    (3, 0.6, -0.41617141696309653),
    (3, 0.7, -0.35704602681014429),
    (3, 0.8, -0.2865062431792152),
    (3, 0.9, -0.19458101828867695),
    (4, 0.3, -1.6733200530681511),
];

#[test]
fn velocity_constant_matches_high_precision_values() {
    for (p, m, expected) in FROZEN {
        let closed = LandenMap::new(p, m).unwrap().velocity_constant();
        let checked = a_constant(p, m).unwrap();
        assert!((closed - expected).abs() < 1e-12, "p={p} m={m}: {closed} vs {expected}");
        assert_eq!(closed, checked);
    }
}

#[test]
fn p2_has_no_velocity_correction() {
    for m in [0.1, 0.5, 0.9, 0.99] {
        assert!(a_constant(2, m).unwrap().abs() < 1e-12, "m={m}");
    }
}
