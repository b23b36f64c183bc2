use crate::error::{domain, Result};
use crate::outage::feasible_k;
use crate::outage::{rate_offset_k, AntennaConfig, OutageTarget};
use crate::scalar::{pow2_m1, Real};

use super::points::{Point, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RouteNode {
    Source,
    /// Index into the point set.
    Relay(usize),
    Destination,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint<T> {
    pub node: RouteNode,
    pub position: Point<T>,
}

/// Ordered source-to-destination path with its hop lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct Route<T> {
    waypoints: Vec<Waypoint<T>>,
    hop_distances: Vec<T>,
}

impl<T: Real> Route<T> {
    fn from_waypoints(waypoints: Vec<Waypoint<T>>) -> Self {
        let hop_distances = waypoints
            .windows(2)
            .map(|w| w[0].position.distance(&w[1].position))
            .collect();
        Self {
            waypoints,
            hop_distances,
        }
    }

    pub fn waypoints(&self) -> &[Waypoint<T>] {
        &self.waypoints
    }

    pub fn hop_distances(&self) -> &[T] {
        &self.hop_distances
    }

    pub fn hops(&self) -> usize {
        self.hop_distances.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = RouteNode> + '_ {
        self.waypoints.iter().map(|w| w.node)
    }

    /// Point-set indices of the relays, in route order.
    pub fn relay_indices(&self) -> Vec<usize> {
        self.nodes()
            .filter_map(|n| match n {
                RouteNode::Relay(i) => Some(i),
                _ => None,
            })
            .collect()
    }

    pub fn total_length(&self) -> T {
        self.hop_distances.iter().fold(T::zero(), |a, &d| a + d)
    }
}

/// Where Strategy A's search sector is anchored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SectorAnchor {
    /// Re-centred at every hop on the ray from the current node to the
    /// destination.
    #[default]
    Reanchored,
    /// One fixed sector about the source-destination line.
    Source,
}

/// Strategy A with a re-anchored sector of angle `phi`.
pub fn route_strategy_a<T: Real>(points: &PointSet<T>, phi: T) -> Route<T> {
    route_strategy_a_anchored(points, phi, SectorAnchor::Reanchored)
}

/// Strategy A: from the current node, hop to the nearest node inside the
/// sector that strictly reduces the x-distance to the destination; go
/// straight to the destination once it is nearer than every such node.
pub fn route_strategy_a_anchored<T: Real>(
    points: &PointSet<T>,
    phi: T,
    anchor: SectorAnchor,
) -> Route<T> {
    let dest = points.region.destination();
    let source = points.region.source();
    let half = T::lit(0.5) * phi;
    let mut waypoints = vec![Waypoint {
        node: RouteNode::Source,
        position: source,
    }];
    let mut cur = source;
    loop {
        let (apex, axis) = match anchor {
            SectorAnchor::Reanchored => (cur, Point::new(dest.x - cur.x, dest.y - cur.y)),
            SectorAnchor::Source => (source, Point::new(dest.x, dest.y)),
        };
        let mut best: Option<(usize, T)> = None;
        for (i, p) in points.points.iter().enumerate() {
            if !(p.x > cur.x) {
                continue;
            }
            let v = Point::new(p.x - apex.x, p.y - apex.y);
            let cross = v.x * axis.y - v.y * axis.x;
            let dot = v.x * axis.x + v.y * axis.y;
            if cross.abs().atan2(dot) > half {
                continue;
            }
            let dist = cur.distance(p);
            if best.is_none_or(|(_, b)| dist < b) {
                best = Some((i, dist));
            }
        }
        match best {
            Some((i, dist)) if dist <= cur.distance(&dest) => {
                cur = points.points[i];
                waypoints.push(Waypoint {
                    node: RouteNode::Relay(i),
                    position: cur,
                });
            }
            _ => break,
        }
    }
    waypoints.push(Waypoint {
        node: RouteNode::Destination,
        position: dest,
    });
    Route::from_waypoints(waypoints)
}

/// Strategy B: keep relays `n, 2n, ...` of a Strategy A route and the
/// destination.
pub fn route_strategy_b<T: Real>(route_a: &Route<T>, n: u32) -> Result<Route<T>> {
    if n == 0 {
        return domain("n", 0.0, ">= 1");
    }
    let wp = route_a.waypoints();
    let last = wp.len() - 1;
    let mut kept = vec![wp[0]];
    kept.extend(
        wp[1..last]
            .iter()
            .enumerate()
            .filter(|(i, _)| (i + 1) % n as usize == 0)
            .map(|(_, w)| *w),
    );
    kept.push(wp[last]);
    Ok(Route::from_waypoints(kept))
}

/// `sum_i d_i^alpha (2^k - 1)` with `k` at the given per-hop failure
/// probability; the `N_0 N_t/N_r` scale is normalized out.
pub fn route_energy<T: Real>(
    route: &Route<T>,
    alpha: T,
    ant: AntennaConfig,
    per_hop_failure: T,
    rate: T,
) -> Result<T> {
    let target = OutageTarget::new(rate, per_hop_failure)?;
    let k = feasible_k(rate_offset_k(ant, &target))?;
    let path = route
        .hop_distances
        .iter()
        .fold(T::zero(), |acc, &d| acc + d.powf(alpha));
    Ok(path * pow2_m1(k))
}
