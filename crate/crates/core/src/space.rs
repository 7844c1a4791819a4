//! The two compact spaces everything runs on: the unit circle `[0,1)` with
//! the wrap-around metric and the unit interval `[0,1]`.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rat, frac, half, int, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Circle,
    Interval,
}

impl SpaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::Circle => "circle",
            SpaceKind::Interval => "interval",
        }
    }

    pub fn parse(s: &str) -> Result<SpaceKind> {
        match s {
            "circle" => Ok(SpaceKind::Circle),
            "interval" => Ok(SpaceKind::Interval),
            other => Err(Error::Parse(format!("unknown space {other:?}"))),
        }
    }

    /// Distance between two real numbers read as coordinates in this space.
    pub fn coord_dist(self, a: &Rat, b: &Rat) -> Rat {
        let d = a - b;
        match self {
            SpaceKind::Circle => circle_norm(&d),
            SpaceKind::Interval => d.abs(),
        }
    }
}

/// Distance from `d` to the nearest integer.
pub(crate) fn circle_norm(d: &Rat) -> Rat {
    let f = frac(d);
    let g = int(1) - &f;
    if f <= g {
        f
    } else {
        g
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDescriptor {
    pub kind: SpaceKind,
    /// Grid pitch used when the space is sampled.
    pub resolution: Rat,
}

impl SpaceDescriptor {
    pub fn new(kind: SpaceKind, resolution: Rat) -> Result<Self> {
        if !resolution.is_positive() {
            return Err(Error::Precondition("resolution must be positive".into()));
        }
        Ok(SpaceDescriptor { kind, resolution })
    }

    pub fn circle() -> Self {
        SpaceDescriptor { kind: SpaceKind::Circle, resolution: crate::rational::rat(1, 1000) }
    }

    pub fn interval() -> Self {
        SpaceDescriptor { kind: SpaceKind::Interval, resolution: crate::rational::rat(1, 1000) }
    }
}

/// A point of the space, held either exactly (`lo == hi`) or as an enclosure
/// `[lo, hi]` with rational endpoints.
///
/// On the circle `lo` is reduced into `[0,1)` and `hi` is the lifted upper end,
/// so `hi` may exceed 1 for an enclosure straddling 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    kind: SpaceKind,
    lo: Rat,
    hi: Rat,
}

impl Point {
    pub fn on(kind: SpaceKind, x: Rat) -> Result<Point> {
        Point::enclosure(kind, x.clone(), x)
    }

    /// Exact circle point; the coordinate is reduced mod 1.
    pub fn circle(x: Rat) -> Point {
        let lo = frac(&x);
        Point { kind: SpaceKind::Circle, hi: lo.clone(), lo }
    }

    pub fn interval(x: Rat) -> Result<Point> {
        Point::on(SpaceKind::Interval, x)
    }

    pub fn enclosure(kind: SpaceKind, lo: Rat, hi: Rat) -> Result<Point> {
        if lo > hi {
            return Err(Error::Precondition("enclosure with lo > hi".into()));
        }
        match kind {
            SpaceKind::Circle => {
                if &hi - &lo >= int(1) {
                    return Err(Error::Imprecise("enclosure covers the whole circle".into()));
                }
                let shift = lo.floor();
                Ok(Point { kind, lo: lo - &shift, hi: hi - shift })
            }
            SpaceKind::Interval => {
                if lo.is_negative() || hi > int(1) {
                    return Err(Error::OutOfSpace(format!("[{}, {}]", format_rat(&lo), format_rat(&hi))));
                }
                Ok(Point { kind, lo, hi })
            }
        }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    /// Upper end in lifted coordinates.
    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn value(&self) -> Option<&Rat> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn exact_value(&self) -> Result<&Rat> {
        self.value().ok_or(Error::InexactPoint)
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) * half()
    }

    pub fn contains_value(&self, x: &Rat) -> bool {
        match self.kind {
            SpaceKind::Interval => &self.lo <= x && x <= &self.hi,
            SpaceKind::Circle => {
                let t = frac(&(x - &self.lo));
                t <= self.width()
            }
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", format_rat(&self.lo))
        } else {
            write!(f, "[{}, {}]", format_rat(&self.lo), format_rat(&self.hi))
        }
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        if self.is_exact() {
            s.serialize_str(&format_rat(&self.lo))
        } else {
            let mut m = s.serialize_map(Some(1))?;
            m.serialize_entry("enclosure", &[format_rat(&self.lo), format_rat(&self.hi)])?;
            m.end()
        }
    }
}

fn check_same(a: SpaceKind, b: SpaceKind) -> Result<()> {
    if a != b {
        return Err(Error::SpaceMismatch(format!("{} vs {}", a.name(), b.name())));
    }
    Ok(())
}

/// Geodesic distance between two exact points.
pub fn dist(a: &Point, b: &Point) -> Result<Rat> {
    check_same(a.kind, b.kind)?;
    Ok(a.kind.coord_dist(a.exact_value()?, b.exact_value()?))
}

/// Smallest and largest distance between any point of `a` and any point of
/// `b`.
pub fn dist_bounds(a: &Point, b: &Point) -> Result<(Rat, Rat)> {
    check_same(a.kind, b.kind)?;
    let lo = &a.lo - &b.hi;
    let hi = &a.hi - &b.lo;
    Ok(match a.kind {
        SpaceKind::Interval => {
            let (l, h) = (lo.abs(), hi.abs());
            let max = if l > h { l.clone() } else { h.clone() };
            let min = if !lo.is_positive() && !hi.is_negative() {
                Rat::zero()
            } else if l < h {
                l
            } else {
                h
            };
            (min, max)
        }
        SpaceKind::Circle => {
            let (l, h) = (circle_norm(&lo), circle_norm(&hi));
            let contains_int = lo.ceil() <= hi;
            let contains_half = (&lo - half()).ceil() <= &hi - half();
            let min = if contains_int { Rat::zero() } else if l < h { l.clone() } else { h.clone() };
            let max = if contains_half { half() } else if l > h { l } else { h };
            (min, max)
        }
    })
}

/// Largest distance from any point of `a` to any point of `b`.
pub fn max_dist(a: &Point, b: &Point) -> Result<Rat> {
    dist_bounds(a, b).map(|(_, max)| max)
}

/// Uniform grid whose points are within `eps` of every point of the space.
///
/// The circle uses `2⌈1/(2 eps)⌉` points, the interval `⌈1/eps⌉ + 1` points
/// including both endpoints.
pub fn eps_net(space: &SpaceDescriptor, eps: &Rat) -> Result<Vec<Point>> {
    if !eps.is_positive() {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    let count = |x: Rat| -> usize {
        let c = x.ceil().to_integer();
        usize::try_from(c).unwrap_or(usize::MAX)
    };
    Ok(match space.kind {
        SpaceKind::Circle => {
            let n = 2 * count(int(1) / (int(2) * eps));
            (0..n).map(|i| Point::circle(crate::rational::rat(i as i64, n as i64))).collect()
        }
        SpaceKind::Interval => {
            let n = count(int(1) / eps).max(1);
            (0..=n)
                .map(|i| Point { kind: SpaceKind::Interval, lo: crate::rational::rat(i as i64, n as i64), hi: crate::rational::rat(i as i64, n as i64) })
                .collect()
        }
    })
}

pub(crate) fn floor_i64(x: &Rat) -> i64 {
    use num_traits::ToPrimitive;
    x.floor().to_integer().to_i64().expect("lift index fits in i64")
}
