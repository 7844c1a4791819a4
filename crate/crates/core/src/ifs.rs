//! Parameterized iterated function systems: maps, symbol words, orbits and
//! pseudo-orbits, and the uniform contraction/expansion ratios.
//!
//! A map is evaluated as a chain of stages. Exact stages are piecewise-linear
//! lifts; a stage with an uncertain offset (an irrational rotation angle known
//! only through a rational enclosure) is kept separate so that images can be
//! bounded from outside and from inside. Outer images are used to refute,
//! inner images to certify.

use num_traits::{One, Signed, Zero};

use crate::arcset::ArcSet;
use crate::error::{Error, Result};
use crate::pl::PlLift;
use crate::rational::{format_rat, int, Rat};
use crate::space::{max_dist, Point, SpaceDescriptor, SpaceKind};

/// A real parameter: exact, or `θ + shift` where the unknown `θ` is only known
/// to lie in `[lo, hi]`. Enclosed parameters of one system with the same
/// `[lo, hi]` denote the same unknown.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    Exact(Rat),
    Enclosed { lo: Rat, hi: Rat, shift: Rat },
}

impl Param {
    pub fn enclosed(lo: Rat, hi: Rat) -> Result<Param> {
        if lo > hi {
            return Err(Error::Precondition("enclosure with lo > hi".into()));
        }
        if lo == hi {
            return Ok(Param::Exact(lo));
        }
        Ok(Param::Enclosed { lo, hi, shift: Rat::zero() })
    }

    pub fn bounds(&self) -> (Rat, Rat) {
        match self {
            Param::Exact(v) => (v.clone(), v.clone()),
            Param::Enclosed { lo, hi, shift } => (lo + shift, hi + shift),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Param::Exact(_))
    }

    pub fn width(&self) -> Rat {
        let (lo, hi) = self.bounds();
        hi - lo
    }

    pub fn plus(&self, t: &Rat) -> Param {
        match self {
            Param::Exact(v) => Param::Exact(v + t),
            Param::Enclosed { lo, hi, shift } => Param::Enclosed { lo: lo.clone(), hi: hi.clone(), shift: shift + t },
        }
    }

    fn neg(&self) -> Param {
        match self {
            Param::Exact(v) => Param::Exact(-v),
            Param::Enclosed { lo, hi, shift } => Param::Enclosed { lo: -hi, hi: -lo, shift: -shift },
        }
    }

    /// `self − other` when it is known exactly: both exact, or both built on
    /// the same unknown.
    pub fn exact_difference(&self, other: &Param) -> Option<Rat> {
        match (self, other) {
            (Param::Exact(a), Param::Exact(b)) => Some(a - b),
            (Param::Enclosed { lo: l1, hi: h1, shift: s1 }, Param::Enclosed { lo: l2, hi: h2, shift: s2 }) => {
                (l1 == l2 && h1 == h2).then(|| s1 - s2)
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    Pl(PlLift),
    /// `x ↦ slope·x + offset` with an enclosed offset.
    Affine { slope: Rat, offset: Param },
}

/// `(a, c)` when the stage is an exact affine map `x ↦ ax + c`.
fn as_affine(stage: &Stage) -> Option<(Rat, Rat)> {
    match stage {
        Stage::Pl(f) if f.knots().len() == 2 => {
            let (x0, x1) = (&f.knots()[0], &f.knots()[1]);
            Some((&x1.1 - &x0.1, x0.1.clone()))
        }
        _ => None,
    }
}

/// Like [`as_affine`], restricted to slopes `±1`.
fn unit_affine(f: &PlLift) -> Option<(Rat, Rat)> {
    as_affine(&Stage::Pl(f.clone())).filter(|(a, _)| a.abs().is_one())
}

type Lifted = (Rat, Rat);

impl Stage {
    fn outer(&self, lo: &Rat, hi: &Rat) -> Lifted {
        match self {
            Stage::Pl(f) => f.image_interval(lo, hi),
            Stage::Affine { slope, offset } => {
                let (a, b) = offset.bounds();
                if slope.is_positive() {
                    (slope * lo + a, slope * hi + b)
                } else if slope.is_negative() {
                    (slope * hi + a, slope * lo + b)
                } else {
                    (a, b)
                }
            }
        }
    }

    fn inner(&self, lo: &Rat, hi: &Rat) -> Option<Lifted> {
        match self {
            Stage::Pl(f) => Some(f.image_interval(lo, hi)),
            Stage::Affine { slope, offset } => {
                let (a, b) = offset.bounds();
                let (x, y) = if slope.is_positive() {
                    (slope * lo + b, slope * hi + a)
                } else if slope.is_negative() {
                    (slope * hi + b, slope * lo + a)
                } else {
                    (b, a)
                };
                (x <= y).then_some((x, y))
            }
        }
    }

    fn image_set(&self, kind: SpaceKind, set: &ArcSet, outer: bool) -> ArcSet {
        if set.is_empty() {
            return set.clone();
        }
        let arcs = set.lifted_arcs();
        let images = arcs.iter().filter_map(|a| if outer { Some(self.outer(&a.lo, &a.hi)) } else { self.inner(&a.lo, &a.hi) });
        ArcSet::from_lifted(kind, images)
    }

    /// A lifted interval `x` inside `target` whose inner image covers `z`
    /// (up to an integer lift on the circle).
    fn pull(&self, kind: SpaceKind, z: &Lifted, target: &ArcSet) -> Option<Lifted> {
        let windows: Vec<Lifted> = if target.is_full() && kind == SpaceKind::Circle {
            (-2..=2).map(|k| (Rat::new(k.into(), 2.into()), Rat::new((k + 2).into(), 2.into()))).collect()
        } else {
            target.lifted_arcs().into_iter().map(|a| (a.lo, a.hi)).collect()
        };
        let free = target.is_full() && kind == SpaceKind::Circle;
        for (t1, t2) in &windows {
            if let Some(x) = self.pull_into(kind, z, t1, t2, free) {
                return Some(x);
            }
        }
        None
    }

    fn pull_into(&self, kind: SpaceKind, z: &Lifted, t1: &Rat, t2: &Rat, free: bool) -> Option<Lifted> {
        let (z1, z2) = z;
        let circle = kind == SpaceKind::Circle;
        match self {
            Stage::Affine { slope, offset } => {
                let (a, b) = offset.bounds();
                if slope.is_zero() {
                    return (z1 == z2 && a == b && (&a - z1).is_integer()).then(|| (t1.clone(), t1.clone()));
                }
                let (j_min, j_max) = if slope.is_positive() {
                    (slope * t1 + &b - z1, slope * t2 + &a - z2)
                } else {
                    (slope * t2 + &b - z1, slope * t1 + &a - z2)
                };
                let j = if free {
                    Rat::zero()
                } else if circle {
                    let j = j_min.ceil();
                    if j > j_max {
                        return None;
                    }
                    j
                } else {
                    if j_min.is_positive() || j_max.is_negative() {
                        return None;
                    }
                    Rat::zero()
                };
                let (x1, x2) = if slope.is_positive() {
                    ((z1 + &j - &b) / slope, (z2 + &j - &a) / slope)
                } else {
                    ((z2 + &j - &a) / slope, (z1 + &j - &b) / slope)
                };
                Some((x1, x2))
            }
            Stage::Pl(f) => {
                let (m, big_m) = f.image_interval(t1, t2);
                let j = if circle { (&m - z1).ceil() } else { Rat::zero() };
                let (w1, w2) = (z1 + &j, z2 + &j);
                if w1 < m || w2 > big_m {
                    return None;
                }
                let u = f.solve(&w1, t1, t2)?;
                let v = f.solve(&w2, t1, t2)?;
                let (x1, x2) = if u <= v { (u, v) } else { (v, u) };
                if circle && &x2 - &x1 >= int(1) {
                    return None;
                }
                Some((x1, x2))
            }
        }
    }

    fn invertible(&self, kind: SpaceKind) -> bool {
        match self {
            Stage::Pl(f) => f.is_homeomorphism(),
            Stage::Affine { slope, .. } => kind == SpaceKind::Circle && slope.abs().is_one(),
        }
    }

    fn inverse(&self) -> Result<Stage> {
        match self {
            Stage::Pl(f) => Ok(Stage::Pl(f.inverse()?)),
            Stage::Affine { slope, offset } => {
                if !slope.abs().is_one() {
                    return Err(Error::NotInvertible("uncertain affine stage with slope other than ±1".into()));
                }
                // x = s(y − θ) for s = ±1
                let offset = if slope.is_positive() { offset.neg() } else { offset.clone() };
                Ok(Stage::Affine { slope: slope.clone(), offset })
            }
        }
    }

    fn lipschitz(&self) -> (Rat, Rat) {
        match self {
            Stage::Pl(f) => (f.max_abs_slope(), f.min_abs_slope()),
            Stage::Affine { slope, .. } => (slope.abs(), slope.abs()),
        }
    }

    fn surjective(&self, kind: SpaceKind) -> bool {
        match self {
            Stage::Pl(f) => f.is_surjective(),
            Stage::Affine { slope, .. } => kind == SpaceKind::Circle && !slope.is_zero(),
        }
    }
}

/// Descriptor-level shape of a map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapKind {
    Affine { slope: Rat, offset: Param },
    PiecewiseLinear(PlLift),
    Composite(Vec<MapKind>),
}

#[derive(Clone, Debug)]
pub struct MapSpec {
    space: SpaceKind,
    kind: MapKind,
    stages: Vec<Stage>,
    lipschitz_upper: Rat,
    lipschitz_lower: Rat,
    invertible: bool,
    surjective: bool,
    ratio_exact: bool,
}

/// Two maps are equal when they act identically stage by stage; the
/// descriptive [`MapKind`] is not compared.
impl PartialEq for MapSpec {
    fn eq(&self, other: &MapSpec) -> bool {
        self.space == other.space && self.stages == other.stages
    }
}

impl Eq for MapSpec {}

impl MapSpec {
    /// `x ↦ slope·x + offset`, mod 1 on the circle (slope must be an integer
    /// there), and required to map `[0,1]` into itself on the interval.
    pub fn affine(space: SpaceKind, slope: Rat, offset: Param) -> Result<MapSpec> {
        match space {
            SpaceKind::Circle => {
                if !slope.is_integer() {
                    return Err(Error::InvalidMap(format!("circle map slope {} is not an integer", format_rat(&slope))));
                }
            }
            SpaceKind::Interval => {
                let (a, b) = offset.bounds();
                for v in [a.clone(), b.clone(), &slope + &a, &slope + &b] {
                    if v.is_negative() || v > int(1) {
                        return Err(Error::InvalidMap(format!("affine map leaves [0,1] (value {})", format_rat(&v))));
                    }
                }
            }
        }
        let stage = match &offset {
            Param::Exact(b) => Stage::Pl(PlLift::affine(space, &slope, b)?),
            Param::Enclosed { .. } => Stage::Affine { slope: slope.clone(), offset: offset.clone() },
        };
        Ok(MapSpec::build(space, MapKind::Affine { slope, offset }, vec![stage]))
    }

    pub fn rotation(angle: Param) -> MapSpec {
        MapSpec::affine(SpaceKind::Circle, int(1), angle).expect("rotations are valid circle maps")
    }

    pub fn piecewise_linear(lift: PlLift) -> MapSpec {
        let space = lift.kind();
        MapSpec::build(space, MapKind::PiecewiseLinear(lift.clone()), vec![Stage::Pl(lift)])
    }

    pub fn identity(space: SpaceKind) -> MapSpec {
        MapSpec::piecewise_linear(PlLift::identity(space))
    }

    /// Chain of stages applied in order; adjacent exact stages are merged.
    pub fn from_stages(space: SpaceKind, stages: Vec<Stage>) -> Result<MapSpec> {
        let mut out: Vec<Stage> = Vec::with_capacity(stages.len());
        for s in stages {
            let s = match s {
                Stage::Affine { slope, offset: Param::Exact(b) } => Stage::Pl(PlLift::affine(space, &slope, &b)?),
                other => other,
            };
            match (out.last_mut(), s) {
                (Some(Stage::Pl(prev)), Stage::Pl(next)) => {
                    *prev = PlLift::compose(&next, prev)?;
                }
                (Some(last), Stage::Affine { slope, offset }) if as_affine(last).is_some() => {
                    // s(ax + c) + β
                    let (a, c) = as_affine(last).expect("checked");
                    *last = Stage::Affine { slope: &slope * a, offset: offset.plus(&(&slope * c)) };
                }
                (Some(Stage::Affine { slope, offset }), Stage::Pl(next)) if unit_affine(&next).is_some() => {
                    // a(sx + β) + c with a = ±1
                    let (a, c) = unit_affine(&next).expect("checked");
                    let turned = if a.is_one() { offset.clone() } else { offset.neg() };
                    *offset = turned.plus(&c);
                    *slope *= a;
                }
                (_, s) => out.push(s),
            }
        }
        if out.len() > 1 {
            out.retain(|s| !matches!(s, Stage::Pl(f) if f.is_identity()));
        }
        if out.is_empty() {
            out.push(Stage::Pl(PlLift::identity(space)));
        }
        let kind = match out.as_slice() {
            [Stage::Pl(f)] => MapKind::PiecewiseLinear(f.clone()),
            [Stage::Affine { slope, offset }] => MapKind::Affine { slope: slope.clone(), offset: offset.clone() },
            many => MapKind::Composite(
                many.iter()
                    .map(|s| match s {
                        Stage::Pl(f) => MapKind::PiecewiseLinear(f.clone()),
                        Stage::Affine { slope, offset } => MapKind::Affine { slope: slope.clone(), offset: offset.clone() },
                    })
                    .collect(),
            ),
        };
        Ok(MapSpec::build(space, kind, out))
    }

    fn build(space: SpaceKind, kind: MapKind, mut stages: Vec<Stage>) -> MapSpec {
        if space == SpaceKind::Circle {
            for s in &mut stages {
                if let Stage::Affine { offset: Param::Enclosed { lo, shift, .. }, .. } = s {
                    let turns = (&*lo + &*shift).floor();
                    *shift -= turns;
                }
            }
        }
        let mut upper = int(1);
        let mut lower = int(1);
        let mut non_isometric = 0;
        for s in &stages {
            let (u, l) = s.lipschitz();
            if !(u.is_one() && l.is_one()) {
                non_isometric += 1;
            }
            upper *= u;
            lower *= l;
        }
        let invertible = stages.iter().all(|s| s.invertible(space));
        let surjective = stages.iter().all(|s| s.surjective(space));
        MapSpec {
            space,
            kind,
            stages,
            lipschitz_upper: upper,
            lipschitz_lower: lower,
            invertible,
            surjective,
            ratio_exact: non_isometric <= 1,
        }
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: &MapSpec, inner: &MapSpec) -> Result<MapSpec> {
        if outer.space != inner.space {
            return Err(Error::SpaceMismatch("cannot compose maps on different spaces".into()));
        }
        let mut stages = inner.stages.clone();
        stages.extend(outer.stages.iter().cloned());
        MapSpec::from_stages(outer.space, stages)
    }

    pub fn inverse(&self) -> Result<MapSpec> {
        if !self.invertible {
            return Err(Error::NotInvertible(format!("{:?}", self.kind)));
        }
        let stages = self.stages.iter().rev().map(Stage::inverse).collect::<Result<Vec<_>>>()?;
        MapSpec::from_stages(self.space, stages)
    }

    pub fn space(&self) -> SpaceKind {
        self.space
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn lipschitz_upper(&self) -> &Rat {
        &self.lipschitz_upper
    }

    pub fn lipschitz_lower(&self) -> &Rat {
        &self.lipschitz_lower
    }

    pub fn is_invertible(&self) -> bool {
        self.invertible
    }

    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    /// Whether the Lipschitz bounds are the exact sup/inf of the local slopes.
    pub fn ratio_exact(&self) -> bool {
        self.ratio_exact
    }

    pub fn is_exact(&self) -> bool {
        self.stages.iter().all(|s| matches!(s, Stage::Pl(_)))
    }

    /// The map as a single exact lift, when it has one.
    pub fn as_pl(&self) -> Option<&PlLift> {
        match self.stages.as_slice() {
            [Stage::Pl(f)] => Some(f),
            _ => None,
        }
    }

    /// Angle of a circle rotation `x ↦ x + θ`.
    pub fn as_rotation(&self) -> Option<Param> {
        if self.space != SpaceKind::Circle {
            return None;
        }
        match self.stages.as_slice() {
            [Stage::Affine { slope, offset }] if slope.is_one() => Some(offset.clone()),
            [Stage::Pl(f)] if f.knots().len() == 2 && f.degree() == 1 => Some(Param::Exact(f.knots()[0].1.clone())),
            _ => None,
        }
    }

    /// Outer enclosure of the image of a point.
    pub fn apply(&self, x: &Point) -> Result<Point> {
        if x.kind() != self.space {
            return Err(Error::SpaceMismatch("point and map live on different spaces".into()));
        }
        let mut cur: Lifted = (x.lo().clone(), x.hi().clone());
        for s in &self.stages {
            cur = s.outer(&cur.0, &cur.1);
        }
        if self.space == SpaceKind::Interval {
            // exact self-maps never leave [0,1]; clip rounding of enclosures only
            if cur.0.is_negative() {
                cur.0 = int(0);
            }
            if cur.1 > int(1) {
                cur.1 = int(1);
            }
        }
        Point::enclosure(self.space, cur.0, cur.1)
    }

    /// Inner image of a point enclosure: points that are images of the
    /// enclosure for every admissible parameter value.
    pub fn apply_inner(&self, x: &Point) -> Option<(Rat, Rat)> {
        let mut cur: Lifted = (x.lo().clone(), x.hi().clone());
        for s in &self.stages {
            cur = s.inner(&cur.0, &cur.1)?;
        }
        Some(cur)
    }

    pub fn image(&self, set: &ArcSet) -> ArcSet {
        self.stages.iter().fold(set.clone(), |acc, s| s.image_set(self.space, &acc, true))
    }

    pub fn inner_image(&self, set: &ArcSet) -> ArcSet {
        self.stages.iter().fold(set.clone(), |acc, s| s.image_set(self.space, &acc, false))
    }

    /// A point enclosure inside `source` whose inner image covers `z`.
    pub fn pullback(&self, z: &Point, source: &ArcSet) -> Option<Point> {
        let mut sets = vec![source.clone()];
        for s in &self.stages[..self.stages.len() - 1] {
            let next = s.image_set(self.space, sets.last().expect("non-empty"), false);
            sets.push(next);
        }
        let mut cur: Lifted = (z.lo().clone(), z.hi().clone());
        for (s, target) in self.stages.iter().zip(&sets).rev() {
            cur = s.pull(self.space, &cur, target)?;
        }
        let p = Point::enclosure(self.space, cur.0, cur.1).ok()?;
        source.contains_point(&p).then_some(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IFSystem {
    space: SpaceDescriptor,
    alphabet: Vec<String>,
    maps: Vec<MapSpec>,
}

pub type Symbol = usize;

impl IFSystem {
    pub fn new(space: SpaceDescriptor, alphabet: Vec<String>, maps: Vec<MapSpec>) -> Result<IFSystem> {
        if alphabet.is_empty() {
            return Err(Error::InvalidSystem("alphabet is empty".into()));
        }
        if alphabet.len() != maps.len() {
            return Err(Error::InvalidSystem("one map per symbol is required".into()));
        }
        let mut sorted = alphabet.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != alphabet.len() {
            return Err(Error::InvalidSystem("duplicate symbol in alphabet".into()));
        }
        if let Some(m) = maps.iter().find(|m| m.space != space.kind) {
            return Err(Error::SpaceMismatch(format!("map on {} in a {} system", m.space.name(), space.kind.name())));
        }
        Ok(IFSystem { space, alphabet, maps })
    }

    /// Symbols named "1", "2", ... in map order.
    pub fn numbered(space: SpaceDescriptor, maps: Vec<MapSpec>) -> Result<IFSystem> {
        let alphabet = (1..=maps.len()).map(|i| i.to_string()).collect();
        IFSystem::new(space, alphabet, maps)
    }

    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    pub fn kind(&self) -> SpaceKind {
        self.space.kind
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn maps(&self) -> &[MapSpec] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn map(&self, symbol: Symbol) -> Result<&MapSpec> {
        self.maps.get(symbol).ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    pub fn symbol(&self, id: &str) -> Result<Symbol> {
        self.alphabet.iter().position(|a| a == id).ok_or_else(|| Error::UnknownSymbol(id.to_string()))
    }

    pub fn symbol_id(&self, s: Symbol) -> &str {
        &self.alphabet[s]
    }

    /// Membership in the space of systems of homeomorphisms.
    pub fn all_invertible(&self) -> bool {
        self.maps.iter().all(MapSpec::is_invertible)
    }

    pub fn is_exact(&self) -> bool {
        self.maps.iter().all(MapSpec::is_exact)
    }

    pub fn with_maps(&self, maps: Vec<MapSpec>) -> Result<IFSystem> {
        IFSystem::new(self.space.clone(), self.alphabet.clone(), maps)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// One-sided time `n = 0, 1, 2, ...`.
    Forward,
    /// A finite window of two-sided time starting at `offset`.
    Window { offset: i64 },
}

/// Eventually periodic symbol sequence `head · cycle^∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolWord {
    pub head: Vec<Symbol>,
    pub cycle: Vec<Symbol>,
    pub direction: Direction,
}

impl SymbolWord {
    pub fn finite(head: Vec<Symbol>) -> SymbolWord {
        SymbolWord { head, cycle: Vec::new(), direction: Direction::Forward }
    }

    pub fn periodic(head: Vec<Symbol>, cycle: Vec<Symbol>) -> Result<SymbolWord> {
        if cycle.is_empty() {
            return Err(Error::Precondition("cycle must be non-empty".into()));
        }
        Ok(SymbolWord { head, cycle, direction: Direction::Forward })
    }

    pub fn constant(symbol: Symbol) -> SymbolWord {
        SymbolWord { head: Vec::new(), cycle: vec![symbol], direction: Direction::Forward }
    }

    pub fn get(&self, i: usize) -> Option<Symbol> {
        if i < self.head.len() {
            Some(self.head[i])
        } else if self.cycle.is_empty() {
            None
        } else {
            Some(self.cycle[(i - self.head.len()) % self.cycle.len()])
        }
    }

    pub fn prefix(&self, n: usize) -> Result<Vec<Symbol>> {
        (0..n).map(|i| self.get(i).ok_or(Error::WordExhausted(self.head.len()))).collect()
    }

    fn check(&self, system: &IFSystem) -> Result<()> {
        if let Some(s) = self.head.iter().chain(&self.cycle).find(|&&s| s >= system.len()) {
            return Err(Error::UnknownSymbol(s.to_string()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSegment {
    pub points: Vec<Point>,
    pub word: Vec<Symbol>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoOrbit {
    pub points: Vec<Point>,
    pub delta: Rat,
    pub witness: Vec<Symbol>,
    pub index_offset: i64,
}

impl PseudoOrbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of steps (`points.len() - 1`).
    pub fn steps(&self) -> usize {
        self.points.len().saturating_sub(1)
    }
}

pub fn apply(system: &IFSystem, symbol: Symbol, x: &Point) -> Result<Point> {
    system.map(symbol)?.apply(x)
}

/// `[x0, f_{λ0}(x0), f_{λ1} f_{λ0}(x0), ...]`, `n + 1` points.
pub fn orbit(system: &IFSystem, word: &SymbolWord, x0: &Point, n: usize) -> Result<OrbitSegment> {
    word.check(system)?;
    let symbols = word.prefix(n)?;
    let mut points = Vec::with_capacity(n + 1);
    points.push(x0.clone());
    for &s in &symbols {
        let next = apply(system, s, points.last().expect("non-empty"))?;
        points.push(next);
    }
    Ok(OrbitSegment { points, word: symbols })
}

/// `F_{σ_n} = f_{λ_{n-1}} ∘ ... ∘ f_{λ_0}` as a closure; `λ_0` acts first.
pub fn compose_word<'a>(system: &'a IFSystem, word: &SymbolWord, n: usize) -> Result<impl Fn(&Point) -> Result<Point> + 'a> {
    word.check(system)?;
    let symbols = word.prefix(n)?;
    Ok(move |x: &Point| symbols.iter().try_fold(x.clone(), |acc, &s| apply(system, s, &acc)))
}

/// Whether `next` is within `delta` of `f(x)` (strictly), or equal to it
/// when `delta` is zero.
pub fn step_ok(map: &MapSpec, x: &Point, next: &Point, delta: &Rat) -> Result<bool> {
    let image = map.apply(x)?;
    if delta.is_zero() {
        return Ok(image.is_exact() && &image == next);
    }
    Ok(&max_dist(&image, next)? < delta)
}

/// Lexicographically least witness word for the pseudo-orbit condition, or
/// `None` if some step admits no symbol. `delta = 0` checks for an exact
/// orbit.
pub fn validate_pseudo_orbit(system: &IFSystem, points: &[Point], delta: &Rat) -> Result<Option<Vec<Symbol>>> {
    if points.len() < 2 {
        return Err(Error::Precondition("a pseudo-orbit needs at least two points".into()));
    }
    if delta.is_negative() {
        return Err(Error::Precondition("delta must be non-negative".into()));
    }
    let mut word = Vec::with_capacity(points.len() - 1);
    for w in points.windows(2) {
        let mut found = None;
        for (s, m) in system.maps().iter().enumerate() {
            if step_ok(m, &w[0], &w[1], delta)? {
                found = Some(s);
                break;
            }
        }
        match found {
            Some(s) => word.push(s),
            None => return Ok(None),
        }
    }
    Ok(Some(word))
}

/// Whether `word` witnesses the pseudo-orbit condition for `points`.
pub fn check_witness(system: &IFSystem, points: &[Point], word: &[Symbol], delta: &Rat) -> Result<bool> {
    if word.len() + 1 != points.len() {
        return Ok(false);
    }
    for (w, &s) in points.windows(2).zip(word) {
        if !step_ok(system.map(s)?, &w[0], &w[1], delta)? {
            return Ok(false);
        }
    }
    Ok(true)
}

impl PseudoOrbit {
    pub fn new(system: &IFSystem, points: Vec<Point>, delta: Rat) -> Result<PseudoOrbit> {
        match validate_pseudo_orbit(system, &points, &delta)? {
            Some(witness) => Ok(PseudoOrbit { points, delta, witness, index_offset: 0 }),
            None => Err(Error::NotPseudoOrbit(format!("no symbol fits some step at delta {}", format_rat(&delta)))),
        }
    }
}

/// The orbit of `generator` from `x0`, validated as a `delta`-pseudo-orbit.
pub fn make_pseudo_orbit_from_generator(system: &IFSystem, generator: &MapSpec, x0: &Point, n: usize, delta: &Rat) -> Result<PseudoOrbit> {
    let mut points = Vec::with_capacity(n + 1);
    points.push(x0.clone());
    for _ in 0..n {
        let next = generator.apply(points.last().expect("non-empty"))?;
        points.push(next);
    }
    PseudoOrbit::new(system, points, delta.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ratios {
    /// Sup over symbols of the Lipschitz upper bound.
    pub beta: Rat,
    /// Inf over symbols of the local expansion lower bound.
    pub alpha: Rat,
    pub contracting: bool,
    pub expanding: bool,
    /// False when some bound is a product over a composite chain.
    pub exact: bool,
}

pub fn ratios(system: &IFSystem) -> Ratios {
    let beta = system.maps().iter().map(|m| m.lipschitz_upper().clone()).max().expect("non-empty alphabet");
    let alpha = system.maps().iter().map(|m| m.lipschitz_lower().clone()).min().expect("non-empty alphabet");
    let contracting = beta < int(1);
    let expanding = alpha > int(1) && system.maps().iter().all(MapSpec::is_surjective);
    Ratios { beta, alpha, contracting, expanding, exact: system.maps().iter().all(MapSpec::ratio_exact) }
}

pub fn contraction_ratio(system: &IFSystem) -> Rat {
    ratios(system).beta
}

pub fn expansion_ratio(system: &IFSystem) -> Rat {
    ratios(system).alpha
}
