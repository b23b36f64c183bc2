use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{domain, Result};
use crate::rng::StreamId;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn distance(&self, other: &Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Circular sector with apex at the source (origin), radius `radius`, and
/// half-angle `phi/2` about the positive x-axis. The destination sits on the
/// arc at `(radius, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorRegion<T> {
    radius: T,
    phi: T,
}

impl<T: Real> SectorRegion<T> {
    pub fn new(radius: T, phi: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return domain("sector radius", radius.to_f64_lossy(), "(0, inf)");
        }
        if !(phi > T::zero() && phi <= T::PI()) {
            return domain("sector angle", phi.to_f64_lossy(), "(0, pi]");
        }
        Ok(Self { radius, phi })
    }

    /// Sector whose area equals `count`, i.e. unit node density.
    pub fn with_unit_density(count: usize, phi: T) -> Result<Self> {
        let area = T::from_usize(count.max(1)).unwrap();
        Self::new((T::lit(2.0) * area / phi).sqrt(), phi)
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    pub fn area(&self) -> T {
        T::lit(0.5) * self.phi * self.radius * self.radius
    }

    pub fn source(&self) -> Point<T> {
        Point::origin()
    }

    pub fn destination(&self) -> Point<T> {
        Point::new(self.radius, T::zero())
    }

    /// Sector membership, with a few ulps of slack on the boundary.
    pub fn contains(&self, p: &Point<T>) -> bool {
        let slack = T::one() + T::epsilon() * T::lit(16.0);
        let r = p.x.hypot(p.y);
        if r > self.radius * slack {
            return false;
        }
        r == T::zero() || p.y.atan2(p.x).abs() <= T::lit(0.5) * self.phi * slack
    }

    /// Analytic mean of the x-coordinate of a uniform point:
    /// `(2R/3) sin(phi/2) / (phi/2)`.
    pub fn centroid_x(&self) -> T {
        let h = T::lit(0.5) * self.phi;
        T::lit(2.0) / T::lit(3.0) * self.radius * h.sin() / h
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point<T> {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        let r = self.radius * T::lit(u).sqrt();
        let theta = self.phi * (T::lit(v) - T::lit(0.5));
        Point::new(r * theta.cos(), r * theta.sin())
    }
}

/// Realized node positions together with the region and stream they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<T> {
    pub points: Vec<Point<T>>,
    pub region: SectorRegion<T>,
    pub stream: StreamId,
}

impl<T: Real> PointSet<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Poisson point process of the given intensity on the region: a
/// Poisson(`intensity * area`) count of i.i.d. uniform points.
pub fn generate_ppp<T: Real>(
    region: SectorRegion<T>,
    intensity: T,
    stream: StreamId,
) -> Result<PointSet<T>> {
    if !(intensity > T::zero()) || !intensity.is_finite() {
        return domain("intensity", intensity.to_f64_lossy(), "(0, inf)");
    }
    let mean = (intensity * region.area()).to_f64_lossy();
    let dist = Poisson::new(mean)
        .map_err(|_| crate::error::Error::Config(format!("invalid Poisson mean {mean}")))?;
    let mut rng = stream.rng();
    let count = dist.sample(&mut rng) as usize;
    let points = (0..count).map(|_| region.sample(&mut rng)).collect();
    Ok(PointSet {
        points,
        region,
        stream,
    })
}

/// Exactly `count` i.i.d. uniform points in the region.
pub fn generate_uniform_count<T: Real>(
    region: SectorRegion<T>,
    count: usize,
    stream: StreamId,
) -> PointSet<T> {
    let mut rng = stream.rng();
    let points = (0..count).map(|_| region.sample(&mut rng)).collect();
    PointSet {
        points,
        region,
        stream,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn uniform_points_stay_in_sector() {
        let region = SectorRegion::with_unit_density(30, PI / 2.0).unwrap();
        assert!((region.area() - 30.0).abs() < 1e-12);
        for s in 0..50 {
            let set = generate_uniform_count(region, 30, StreamId::new(1, s));
            assert_eq!(set.len(), 30);
            assert!(set.points.iter().all(|p| region.contains(p)));
        }
        assert!(generate_uniform_count(region, 0, StreamId::new(1, 0)).is_empty());
    }

    #[test]
    fn membership_predicate() {
        let region = SectorRegion::new(2.0, PI / 2.0).unwrap();
        assert!(region.contains(&Point::new(1.0, 0.0)));
        assert!(region.contains(&region.destination()));
        assert!(!region.contains(&Point::new(1.0, 1.5)));
        assert!(!region.contains(&Point::new(-0.1, 0.0)));
        assert!(!region.contains(&Point::new(2.5, 0.0)));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(SectorRegion::new(0.0, 1.0).is_err());
        assert!(SectorRegion::new(1.0, 4.0).is_err());
        let region = SectorRegion::new(1.0, 1.0).unwrap();
        assert!(generate_ppp(region, 0.0, StreamId::new(0, 0)).is_err());
    }

    #[test]
    fn replay_is_bit_identical() {
        let region = SectorRegion::new(5.0, 1.2).unwrap();
        let a = generate_ppp(region, 1.0, StreamId::new(4, 2)).unwrap();
        let b = generate_ppp(region, 1.0, StreamId::new(4, 2)).unwrap();
        assert_eq!(a, b);
    }
}
