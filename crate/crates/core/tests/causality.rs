//! Property tests for the light-cone order and the protocol geometry.

use proptest::prelude::*;

use relbc_core::spacetime::{
    can_signal, causal_relation, deliver, interval, standard_geometry, CausalRelation, EventPoint,
    Message,
};

fn coordinate() -> impl Strategy<Value = f64> {
    -50.0..50.0f64
}

fn event() -> impl Strategy<Value = EventPoint> {
    (coordinate(), coordinate(), coordinate(), coordinate())
        .prop_map(|(x, y, z, t)| EventPoint::new(x, y, z, t).unwrap())
}

/// Sixteenths of a unit: a grid on which every coordinate, sum, and
/// squared interval below is exactly representable, so constructed
/// lightlike legs have interval exactly zero.
fn grid(lo: i32, hi: i32) -> impl Strategy<Value = f64> {
    (lo..=hi).prop_map(|i| f64::from(i) / 16.0)
}

fn grid_event() -> impl Strategy<Value = EventPoint> {
    (grid(-800, 800), grid(-800, 800), grid(-800, 800), grid(-800, 800))
        .prop_map(|(x, y, z, t)| EventPoint::new(x, y, z, t).unwrap())
}

/// Future-directed displacement on the grid: strictly timelike (the time
/// component beats the 1-norm of the space part), exactly lightlike along
/// an axis, or zero.
fn future_step() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    prop_oneof![
        (grid(-640, 640), grid(-640, 640), grid(-640, 640), grid(1, 160)).prop_map(
            |(x, y, z, pad)| (x, y, z, x.abs() + y.abs() + z.abs() + pad)
        ),
        (grid(1, 640), 0..3usize).prop_map(|(d, axis)| match axis {
            0 => (d, 0.0, 0.0, d),
            1 => (0.0, d, 0.0, d),
            _ => (0.0, 0.0, d, d),
        }),
        Just((0.0, 0.0, 0.0, 0.0)),
    ]
}

fn translate(p: &EventPoint, step: &(f64, f64, f64, f64)) -> EventPoint {
    EventPoint::new(p.x() + step.0, p.y() + step.1, p.z() + step.2, p.t() + step.3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn interval_is_symmetric(a in event(), b in event()) {
        prop_assert_eq!(interval(&a, &b), interval(&b, &a));
    }

    #[test]
    fn relation_is_antisymmetric(a in event(), b in event()) {
        let forward = causal_relation(&a, &b);
        let backward = causal_relation(&b, &a);
        let expected = match forward {
            CausalRelation::CausallyPrecedes => CausalRelation::CausallyFollows,
            CausalRelation::CausallyFollows => CausalRelation::CausallyPrecedes,
            CausalRelation::Spacelike => CausalRelation::Spacelike,
            CausalRelation::Coincident => CausalRelation::Coincident,
        };
        prop_assert_eq!(backward, expected);
    }

    #[test]
    fn signalling_is_transitive(a in grid_event(), ab in future_step(), bc in future_step()) {
        let b = translate(&a, &ab);
        let c = translate(&b, &bc);
        prop_assert!(can_signal(&a, &b));
        prop_assert!(can_signal(&b, &c));
        prop_assert!(can_signal(&a, &c));
    }

    #[test]
    fn joint_future_point_is_reachable_from_both_wings(x in 1e-6..1e6f64) {
        let geometry = standard_geometry(x).unwrap();
        let meet = geometry.joint_future_point();
        prop_assert!(can_signal(&geometry.q0(), &meet));
        prop_assert!(can_signal(&geometry.q1(), &meet));
        prop_assert_eq!(
            causal_relation(&geometry.p(), &geometry.q0()),
            CausalRelation::CausallyPrecedes
        );
        prop_assert_eq!(
            causal_relation(&geometry.q0(), &geometry.q1()),
            CausalRelation::Spacelike
        );
    }

    #[test]
    fn delivery_agrees_with_the_relation(a in event(), b in event()) {
        let message = Message::new("alice@P", "bob@Q0", vec![1u8]);
        let delivered = deliver(&message, &a, &b).unwrap().is_delivered();
        prop_assert_eq!(delivered, can_signal(&a, &b));
    }
}

#[test]
fn a_point_coincides_with_itself() {
    let p = EventPoint::new(3.0, -1.0, 2.5, 7.0).unwrap();
    assert_eq!(causal_relation(&p, &p), CausalRelation::Coincident);
    assert!(can_signal(&p, &p));
}
