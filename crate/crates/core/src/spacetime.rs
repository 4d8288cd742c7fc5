//! Minkowski geometry and a causality-enforcing message layer: the
//! light-cone partial order on events and the delivery rule for classical
//! messages between stations.

use serde::Serialize;

use crate::error::{Error, Result};

/// Width of the band around zero interval treated as lightlike, so the
/// exactly-light-speed routes the protocol relies on survive rounding.
pub const LIGHTLIKE_TOL: f64 = 1e-12;

/// An event in units where the signal speed is 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EventPoint {
    x: f64,
    y: f64,
    z: f64,
    t: f64,
}

impl EventPoint {
    pub fn new(x: f64, y: f64, z: f64, t: f64) -> Result<Self> {
        for c in [x, y, z, t] {
            if !c.is_finite() {
                return Err(Error::NonFinite {
                    context: "event coordinate",
                });
            }
        }
        Ok(Self { x, y, z, t })
    }

    pub fn origin() -> Self {
        Self {
            x: 0.0,
            y: 0.0,
            z: 0.0,
            t: 0.0,
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

/// Squared invariant separation (Δt)² − (Δx)² − (Δy)² − (Δz)².
pub fn interval(a: &EventPoint, b: &EventPoint) -> f64 {
    let dt = b.t - a.t;
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let dz = b.z - a.z;
    dt * dt - dx * dx - dy * dy - dz * dz
}

/// Light-cone relation between two events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CausalRelation {
    CausallyPrecedes,
    CausallyFollows,
    Spacelike,
    Coincident,
}

/// Classifies the pair: lightlike separation (interval within ±1e-12 of
/// zero) counts as causal, matching exactly-light-speed signalling.
pub fn causal_relation(a: &EventPoint, b: &EventPoint) -> CausalRelation {
    if a == b {
        return CausalRelation::Coincident;
    }
    let s = interval(a, b);
    if s < -LIGHTLIKE_TOL {
        return CausalRelation::Spacelike;
    }
    if b.t > a.t {
        CausalRelation::CausallyPrecedes
    } else if b.t < a.t {
        CausalRelation::CausallyFollows
    } else {
        // Distinct simultaneous events inside the tolerance band are still
        // unreachable from each other.
        CausalRelation::Spacelike
    }
}

/// Whether a signal emitted at `a` can arrive at `b`.
pub fn can_signal(a: &EventPoint, b: &EventPoint) -> bool {
    matches!(
        causal_relation(a, b),
        CausalRelation::CausallyPrecedes | CausalRelation::Coincident
    )
}

/// The protocol's arena: a commitment point P at the origin and two
/// verification wings on its forward light cone, spacelike to each other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Geometry {
    separation: f64,
    p: EventPoint,
    q0: EventPoint,
    q1: EventPoint,
}

/// The symmetric configuration: P = (0,0,0,0), Q0 = (x,0,0,x),
/// Q1 = (−x,0,0,x).
pub fn standard_geometry(x: f64) -> Result<Geometry> {
    if !x.is_finite() {
        return Err(Error::NonFinite {
            context: "geometry separation",
        });
    }
    if x <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "wing separation must be positive, got {x}"
        )));
    }
    let p = EventPoint::origin();
    let q0 = EventPoint::new(x, 0.0, 0.0, x)?;
    let q1 = EventPoint::new(-x, 0.0, 0.0, x)?;
    let geometry = Geometry {
        separation: x,
        p,
        q0,
        q1,
    };
    debug_assert_eq!(causal_relation(&p, &q0), CausalRelation::CausallyPrecedes);
    debug_assert_eq!(causal_relation(&p, &q1), CausalRelation::CausallyPrecedes);
    debug_assert_eq!(causal_relation(&q0, &q1), CausalRelation::Spacelike);
    Ok(geometry)
}

impl Geometry {
    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn p(&self) -> EventPoint {
        self.p
    }

    pub fn q0(&self) -> EventPoint {
        self.q0
    }

    pub fn q1(&self) -> EventPoint {
        self.q1
    }

    /// Canonical point in the intersection of both wings' future light
    /// cones, where the two unveiled records can be compared.
    pub fn joint_future_point(&self) -> EventPoint {
        EventPoint {
            x: 0.0,
            y: 0.0,
            z: 0.0,
            t: 2.0 * self.separation,
        }
    }
}

/// A classical message between named stations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Message {
    pub sender: String,
    pub receiver: String,
    pub payload: Vec<u8>,
}

impl Message {
    pub fn new(
        sender: impl Into<String>,
        receiver: impl Into<String>,
        payload: Vec<u8>,
    ) -> Self {
        Self {
            sender: sender.into(),
            receiver: receiver.into(),
            payload,
        }
    }
}

/// Outcome of a delivery attempt. A refusal is data, not an error: the
/// simulation records the attempt and the offending relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeliveryResult {
    Delivered,
    CausalityViolation { relation: CausalRelation },
}

impl DeliveryResult {
    pub fn is_delivered(&self) -> bool {
        matches!(self, DeliveryResult::Delivered)
    }
}

/// Attempts to carry `message` from `emitted_at` to `received_at`,
/// refusing routes the light cone does not permit.
pub fn deliver(
    message: &Message,
    emitted_at: &EventPoint,
    received_at: &EventPoint,
) -> Result<DeliveryResult> {
    if message.sender.is_empty() || message.receiver.is_empty() {
        return Err(Error::MalformedMessage(
            "sender and receiver must be named".into(),
        ));
    }
    if message.payload.is_empty() {
        return Err(Error::MalformedMessage("empty payload".into()));
    }
    let relation = causal_relation(emitted_at, received_at);
    match relation {
        CausalRelation::CausallyPrecedes | CausalRelation::Coincident => {
            Ok(DeliveryResult::Delivered)
        }
        _ => Ok(DeliveryResult::CausalityViolation { relation }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn wing_points_sit_on_the_light_cone() {
        let g = standard_geometry(1.0).unwrap();
        assert_abs_diff_eq!(interval(&g.p(), &g.q0()), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(interval(&g.p(), &g.q1()), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn wings_are_spacelike_with_known_interval() {
        let g = standard_geometry(1.0).unwrap();
        assert_abs_diff_eq!(interval(&g.q0(), &g.q1()), -4.0, epsilon = 1e-15);
        assert_eq!(causal_relation(&g.q0(), &g.q1()), CausalRelation::Spacelike);
        assert_eq!(causal_relation(&g.q1(), &g.q0()), CausalRelation::Spacelike);
    }

    #[test]
    fn interval_of_an_event_with_itself_vanishes() {
        let e = EventPoint::new(0.3, -1.2, 7.0, 2.5).unwrap();
        assert_eq!(interval(&e, &e), 0.0);
        assert_eq!(causal_relation(&e, &e), CausalRelation::Coincident);
    }

    #[test]
    fn pure_time_translation_is_causal() {
        let a = EventPoint::origin();
        let b = EventPoint::new(0.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(causal_relation(&a, &b), CausalRelation::CausallyPrecedes);
        assert_eq!(causal_relation(&b, &a), CausalRelation::CausallyFollows);
    }

    #[test]
    fn lightlike_routes_are_causal_in_both_labels() {
        for x in [0.5, 1.0, 3.0, 1e6] {
            let g = standard_geometry(x).unwrap();
            assert_eq!(causal_relation(&g.p(), &g.q0()), CausalRelation::CausallyPrecedes);
            assert_eq!(causal_relation(&g.q0(), &g.p()), CausalRelation::CausallyFollows);
        }
    }

    #[test]
    fn joint_future_point_is_above_both_wings() {
        for x in [0.25, 1.0, 40.0] {
            let g = standard_geometry(x).unwrap();
            let f = g.joint_future_point();
            assert!(can_signal(&g.q0(), &f));
            assert!(can_signal(&g.q1(), &f));
            assert_abs_diff_eq!(interval(&g.q0(), &f), 0.0, epsilon = 1e-9 * x * x);
        }
    }

    #[test]
    fn equal_time_distinct_events_are_spacelike() {
        let a = EventPoint::origin();
        let b = EventPoint::new(1e-9, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(causal_relation(&a, &b), CausalRelation::Spacelike);
        assert_eq!(causal_relation(&b, &a), CausalRelation::Spacelike);
    }

    #[test]
    fn geometry_rejects_bad_separations() {
        assert!(standard_geometry(0.0).is_err());
        assert!(standard_geometry(-1.0).is_err());
        assert!(standard_geometry(f64::NAN).is_err());
    }

    #[test]
    fn event_constructor_rejects_non_finite_coordinates() {
        assert!(EventPoint::new(f64::INFINITY, 0.0, 0.0, 0.0).is_err());
        assert!(EventPoint::new(0.0, f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn delivery_follows_the_light_cone() {
        let g = standard_geometry(1.0).unwrap();
        let m = Message::new("alice-p", "alice-q0", vec![1, 2, 3]);
        assert!(deliver(&m, &g.p(), &g.q0()).unwrap().is_delivered());
        assert!(deliver(&m, &g.p(), &g.p()).unwrap().is_delivered());
        match deliver(&m, &g.q0(), &g.q1()).unwrap() {
            DeliveryResult::CausalityViolation { relation } => {
                assert_eq!(relation, CausalRelation::Spacelike);
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn malformed_messages_are_rejected() {
        let g = standard_geometry(1.0).unwrap();
        let unnamed = Message::new("", "bob", vec![1]);
        assert!(deliver(&unnamed, &g.p(), &g.q0()).is_err());
        let empty = Message::new("alice", "bob", vec![]);
        assert!(deliver(&empty, &g.p(), &g.q0()).is_err());
    }
}
