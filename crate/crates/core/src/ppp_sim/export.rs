//! CSV dumps of point sets and routes.
//!
//! Points: `index,x,y`. Routes: `hop,from,to,from_x,from_y,to_x,to_y,distance`,
//! where `from`/`to` are `source`, `destination`, or a point index.

use std::io::{self, Write};

use crate::scalar::Real;

use super::points::PointSet;
use super::route::{Route, RouteNode};

fn label(node: RouteNode) -> String {
    match node {
        RouteNode::Source => "source".to_string(),
        RouteNode::Relay(i) => i.to_string(),
        RouteNode::Destination => "destination".to_string(),
    }
}

pub fn write_points_csv<T: Real, W: Write>(mut w: W, points: &PointSet<T>) -> io::Result<()> {
    writeln!(w, "index,x,y")?;
    for (i, p) in points.points.iter().enumerate() {
        writeln!(w, "{i},{:.16e},{:.16e}", p.x, p.y)?;
    }
    Ok(())
}

pub fn write_route_csv<T: Real, W: Write>(mut w: W, route: &Route<T>) -> io::Result<()> {
    writeln!(w, "hop,from,to,from_x,from_y,to_x,to_y,distance")?;
    for (i, (pair, d)) in route
        .waypoints()
        .windows(2)
        .zip(route.hop_distances())
        .enumerate()
    {
        let (a, b) = (pair[0], pair[1]);
        writeln!(
            w,
            "{i},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            label(a.node),
            label(b.node),
            a.position.x,
            a.position.y,
            b.position.x,
            b.position.y,
            d
        )?;
    }
    Ok(())
}
