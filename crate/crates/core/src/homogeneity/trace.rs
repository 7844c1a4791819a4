//! Open arc covers and the families of cover indices met by single orbits.

use std::collections::{BTreeSet, HashSet};

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::ifs::IFSystem;
use crate::rational::{format_rat, half, int, rat, Rat};
use crate::space::{eps_net, Point, SpaceDescriptor, SpaceKind};

/// Cover by open arcs `(lo, hi)` given in lifted coordinates. On the
/// interval an arc reaching past an endpoint contains that endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenCover {
    kind: SpaceKind,
    arcs: Vec<(Rat, Rat)>,
    epsilon: Rat,
}

impl OpenCover {
    pub fn new(kind: SpaceKind, arcs: Vec<(Rat, Rat)>, epsilon: Rat) -> Result<OpenCover> {
        if arcs.is_empty() || arcs.len() > 64 {
            return Err(Error::Precondition("a cover needs between 1 and 64 arcs".into()));
        }
        for (lo, hi) in &arcs {
            if lo >= hi {
                return Err(Error::Precondition("cover arc with lo >= hi".into()));
            }
            let diameter = match kind {
                SpaceKind::Circle => {
                    let len = hi - lo;
                    if len > half() {
                        half()
                    } else {
                        len
                    }
                }
                SpaceKind::Interval => {
                    let a = if lo.is_negative() { int(0) } else { lo.clone() };
                    let b = if hi > &int(1) { int(1) } else { hi.clone() };
                    b - a
                }
            };
            if diameter >= epsilon {
                return Err(Error::Precondition(format!("cover arc diameter {} is not below eps", format_rat(&diameter))));
            }
        }
        let cover = OpenCover { kind, arcs, epsilon };
        if !cover.covers_space() {
            return Err(Error::Precondition("arcs do not cover the space".into()));
        }
        Ok(cover)
    }

    /// `k` arcs centred at `j/k` (circle) or `(j + 1/2)/k` (interval) with
    /// half-width `1/(2k) + overlap`.
    pub fn uniform(kind: SpaceKind, k: usize, overlap: &Rat, epsilon: Rat) -> Result<OpenCover> {
        let k_i = k as i64;
        let half_width = rat(1, 2 * k_i) + overlap;
        let arcs = (0..k_i)
            .map(|j| {
                let c = match kind {
                    SpaceKind::Circle => rat(j, k_i),
                    SpaceKind::Interval => rat(2 * j + 1, 2 * k_i),
                };
                (&c - &half_width, c + &half_width)
            })
            .collect();
        OpenCover::new(kind, arcs, epsilon)
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn arcs(&self) -> &[(Rat, Rat)] {
        &self.arcs
    }

    pub fn epsilon(&self) -> &Rat {
        &self.epsilon
    }

    /// Whether the whole enclosure `p` lies inside arc `j`.
    pub fn contains(&self, j: usize, p: &Point) -> bool {
        let (lo, hi) = &self.arcs[j];
        match self.kind {
            SpaceKind::Interval => {
                let left_ok = if lo.is_negative() { true } else { lo < p.lo() };
                let right_ok = if hi > &int(1) { true } else { p.hi() < hi };
                left_ok && right_ok
            }
            SpaceKind::Circle => {
                let shift = (p.lo() - lo).floor();
                let (a, b) = (p.lo() - &shift, p.hi() - &shift);
                (lo < &a && &b < hi) || (lo < &(&a + int(1)) && &(&b + int(1)) < hi)
            }
        }
    }

    /// Bitmask of arcs containing `p`.
    pub fn mask(&self, p: &Point) -> u64 {
        (0..self.arcs.len()).filter(|&j| self.contains(j, p)).fold(0, |m, j| m | (1 << j))
    }

    fn covers_space(&self) -> bool {
        // every arc endpoint and one interior point per gap must be covered;
        // checking all endpoints and midpoints between sorted endpoints suffices
        let mut marks: Vec<Rat> = Vec::new();
        for (lo, hi) in &self.arcs {
            marks.push(lo.clone());
            marks.push(hi.clone());
        }
        marks.push(int(0));
        marks.push(int(1));
        let norm = |x: &Rat| match self.kind {
            SpaceKind::Circle => x - x.floor(),
            SpaceKind::Interval => x.clone(),
        };
        let mut m: Vec<Rat> = marks.iter().map(norm).filter(|x| !x.is_negative() && x <= &int(1)).collect();
        m.sort();
        m.dedup();
        let mut probes = m.clone();
        for w in m.windows(2) {
            probes.push((&w[0] + &w[1]) * half());
        }
        probes.iter().all(|x| {
            let Ok(p) = Point::on(self.kind, x.clone()) else { return true };
            self.mask(&p) != 0
        })
    }
}

/// Downward-closed family of index sets, stored by its maximal elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceFamily {
    pub k: usize,
    maximal: BTreeSet<u64>,
    pub horizon: usize,
    /// Set when the node budget stopped the enumeration early.
    pub truncated: bool,
    pub nodes: u64,
}

impl TraceFamily {
    pub fn from_masks(k: usize, masks: impl IntoIterator<Item = u64>, horizon: usize) -> TraceFamily {
        let mut sorted: Vec<u64> = masks.into_iter().collect();
        sorted.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
        let mut maximal: BTreeSet<u64> = BTreeSet::new();
        for m in sorted {
            if !maximal.iter().any(|&big| m & !big == 0) {
                maximal.insert(m);
            }
        }
        TraceFamily { k, maximal, horizon, truncated: false, nodes: 0 }
    }

    pub fn maximal(&self) -> impl Iterator<Item = u64> + '_ {
        self.maximal.iter().copied()
    }

    /// Index sets as sorted 1-based index lists.
    pub fn maximal_sets(&self) -> Vec<Vec<usize>> {
        self.maximal.iter().map(|&m| (0..self.k).filter(|j| m >> j & 1 == 1).map(|j| j + 1).collect()).collect()
    }

    pub fn contains(&self, set: u64) -> bool {
        self.maximal.iter().any(|&big| set & !big == 0)
    }

    pub fn is_subset(&self, other: &TraceFamily) -> bool {
        self.maximal.iter().all(|&m| other.contains(m))
    }

    pub fn full_set(&self) -> u64 {
        if self.k == 64 {
            u64::MAX
        } else {
            (1u64 << self.k) - 1
        }
    }

    /// Every member of the family, for small `k`.
    pub fn members(&self) -> Vec<u64> {
        assert!(self.k <= 20, "family too large to enumerate");
        (0..=self.full_set()).filter(|&m| self.contains(m)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceConfig {
    pub horizon: usize,
    /// Total node budget, split evenly over the initial points.
    pub budget: u64,
    /// Pitch of the net of initial points; defaults to `eps/4`.
    pub net_eps: Option<Rat>,
}

impl TraceConfig {
    pub fn new(horizon: usize) -> TraceConfig {
        TraceConfig { horizon, budget: 1_000_000, net_eps: None }
    }
}

/// Index sets met by orbit segments of length `horizon` started on a net of
/// initial points. A lower bound of the true family: only enumerated orbits
/// count, and an enclosure counts for an arc only when it lies inside it.
pub fn trace_family(system: &IFSystem, cover: &OpenCover, cfg: &TraceConfig) -> Result<TraceFamily> {
    if cover.kind() != system.kind() {
        return Err(Error::SpaceMismatch("cover and system on different spaces".into()));
    }
    let net_eps = cfg.net_eps.clone().unwrap_or_else(|| cover.epsilon() / int(4));
    let desc = SpaceDescriptor { kind: system.kind(), resolution: net_eps.clone() };
    let net = eps_net(&desc, &net_eps)?;
    let share = (cfg.budget / net.len() as u64).max(1);

    let run = |x0: &Point| explore(system, cover, x0, cfg.horizon, share);
    #[cfg(feature = "parallel")]
    let results: Vec<Result<(Vec<u64>, bool, u64)>> = {
        use rayon::prelude::*;
        net.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<(Vec<u64>, bool, u64)>> = net.iter().map(run).collect();

    let mut masks = Vec::new();
    let mut truncated = false;
    let mut nodes = 0;
    for r in results {
        let (m, t, n) = r?;
        masks.extend(m);
        truncated |= t;
        nodes += n;
    }
    let mut fam = TraceFamily::from_masks(cover.len(), masks, cfg.horizon);
    fam.truncated = truncated;
    fam.nodes = nodes;
    Ok(fam)
}

/// Depth-first enumeration of orbits from `x0`; returns leaf masks, whether
/// the budget ran out, and the node count.
fn explore(system: &IFSystem, cover: &OpenCover, x0: &Point, horizon: usize, budget: u64) -> Result<(Vec<u64>, bool, u64)> {
    let full = if cover.len() == 64 { u64::MAX } else { (1u64 << cover.len()) - 1 };
    let mut seen: HashSet<(usize, Point, u64)> = HashSet::new();
    let mut leaves: BTreeSet<u64> = BTreeSet::new();
    let mut stack = vec![(0usize, x0.clone(), cover.mask(x0))];
    let mut nodes = 0u64;
    while let Some((depth, p, mask)) = stack.pop() {
        if !seen.insert((depth, p.clone(), mask)) {
            continue;
        }
        nodes += 1;
        if depth == horizon || mask == full {
            leaves.insert(mask);
            if mask == full {
                return Ok((vec![full], false, nodes));
            }
            continue;
        }
        if nodes >= budget {
            leaves.insert(mask);
            return Ok((leaves.into_iter().collect(), true, nodes));
        }
        for m in system.maps().iter().rev() {
            let q = match m.apply(&p) {
                Ok(q) => q,
                Err(Error::Imprecise(_)) => {
                    leaves.insert(mask);
                    continue;
                }
                Err(e) => return Err(e),
            };
            let qm = mask | cover.mask(&q);
            stack.push((depth + 1, q, qm));
        }
    }
    Ok((leaves.into_iter().collect(), false, nodes))
}
