//! FK loops around the origin read off the word: the nested o_f intervals,
//! the times ι_j, θ̃_j, θ_j and the areas and boundary lengths of the loop
//! regions and their complementary components.

use crate::error::{Error, Result};
use crate::matching::{Dir, FlexIndex, FlexRecord, MatchTable, Partner};
use crate::walk::{maximal_in, ConeRecord};
use crate::word::{Symbol, Word};
use serde::Serialize;

/// One loop ℓ_j around the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RootLoop {
    pub j: u32,
    pub dir: Dir,
    pub iota: i64,
    pub iota_phi: i64,
    pub theta_tilde: Option<i64>,
    pub theta: Option<i64>,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootLoopSequence {
    pub origin: i64,
    /// Matched o_f intervals containing the origin, innermost first.
    pub chain: Vec<FlexRecord>,
    pub loops: Vec<RootLoop>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoopComponents {
    /// Maximal bubbles in (θ̃_j, θ_j) that stick out of the loop region.
    pub outer: Vec<ConeRecord>,
    /// Bounded complementary components of ℓ_j, largest area first.
    pub bounded: Vec<ConeRecord>,
    pub u_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoopStats {
    pub component_areas: Vec<i64>,
    pub component_boundary_lens: Vec<u64>,
    pub full_area: i64,
    pub interior_area: i64,
    pub outer_boundary_len: i64,
}

/// The nested chain of matched o_f intervals containing `origin`, grouped into
/// runs of equal direction. Run labels start at 1 when the innermost run is
/// Left and at 2 otherwise, so j is odd exactly for Left runs.
pub fn nested_f_intervals(w: &Word, mt: &MatchTable, origin: i64) -> Result<RootLoopSequence> {
    if !w.contains(origin) {
        return Err(Error::Range(format!("origin {origin} outside the window")));
    }
    let fx = FlexIndex::new(w, mt);
    nested_with(w, mt, &fx, origin)
}

pub(crate) fn nested_with(w: &Word, mt: &MatchTable, fx: &FlexIndex, origin: i64) -> Result<RootLoopSequence> {
    let chain: Vec<FlexRecord> = (origin..=w.end())
        .filter(|&i| w.at(i) == Symbol::OF)
        .filter_map(|i| fx.record(w, mt, i))
        .filter(|r| r.phi <= origin)
        .collect();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for (k, r) in chain.iter().enumerate() {
        match runs.last_mut() {
            Some(run) if chain[run.0].dir == r.dir => run.1 = k,
            _ => runs.push((k, k)),
        }
    }
    let offset = match chain.first() {
        Some(r) if r.dir == Dir::Right => 2,
        _ => 1,
    };
    let loops = runs
        .iter()
        .enumerate()
        .map(|(r, &(_, last))| {
            let iota = chain[last];
            let theta = runs.get(r + 1).map(|&(first, _)| chain[first]);
            RootLoop {
                j: r as u32 + offset,
                dir: iota.dir,
                iota: iota.i,
                iota_phi: iota.phi,
                theta_tilde: theta.map(|t| t.phi),
                theta: theta.map(|t| t.i),
                truncated: theta.is_none(),
            }
        })
        .collect();
    Ok(RootLoopSequence { origin, chain, loops })
}

/// Splits the maximal o_f times in (θ̃_j, θ_j) into the bubbles leaving the
/// loop region and the bounded complementary components, and counts U_j.
pub fn classify_components(w: &Word, mt: &MatchTable, entry: &RootLoop) -> Result<LoopComponents> {
    let fx = FlexIndex::new(w, mt);
    classify_with(w, mt, &fx, entry)
}

pub(crate) fn classify_with(w: &Word, mt: &MatchTable, fx: &FlexIndex, entry: &RootLoop) -> Result<LoopComponents> {
    let (Some(tt), Some(th)) = (entry.theta_tilde, entry.theta) else {
        return Err(Error::Precondition(format!("loop {} is truncated", entry.j)));
    };
    let out_dir = entry.dir.opposite();
    let mut outer = Vec::new();
    let mut bounded = Vec::new();
    for rec in maximal_in(w, mt, fx, tt + 1, th - 1) {
        // Orders matched before the window are matched before θ̃_j as well.
        let before = match rec.phi_star {
            Partner::At(k) => k < tt,
            Partner::OutsideWindow => true,
        };
        if before && rec.dir == out_dir {
            outer.push(rec);
        } else {
            bounded.push(rec);
        }
    }
    bounded.sort_by(|a, b| b.area().cmp(&a.area()).then(a.i.cmp(&b.i)));
    let counted = match entry.dir {
        Dir::Left => Symbol::OC,
        Dir::Right => Symbol::OH,
    };
    let mut u_count = 0;
    let mut next = 0;
    for i in tt..=th {
        while next < outer.len() && outer[next].i < i {
            next += 1;
        }
        let covered = next < outer.len() && outer[next].phi <= i;
        if covered || w.at(i) != counted {
            continue;
        }
        let early = match mt.phi(i) {
            Partner::At(k) => k < tt,
            Partner::OutsideWindow => true,
        };
        if early {
            u_count += 1;
        }
    }
    Ok(LoopComponents { outer, bounded, u_count })
}

pub fn loop_stats(w: &Word, mt: &MatchTable, entry: &RootLoop, comps: &LoopComponents) -> Result<LoopStats> {
    let fx = FlexIndex::new(w, mt);
    stats_with(w, mt, &fx, entry, comps)
}

pub(crate) fn stats_with(
    w: &Word,
    mt: &MatchTable,
    fx: &FlexIndex,
    entry: &RootLoop,
    comps: &LoopComponents,
) -> Result<LoopStats> {
    let th = entry.theta.ok_or_else(|| Error::Precondition(format!("loop {} is truncated", entry.j)))?;
    let outer_rec = fx.record(w, mt, th).ok_or(Error::Unmatched(th))?;
    let full_area = outer_rec.area() - comps.outer.iter().map(|r| r.area()).sum::<i64>();
    let outer_boundary_len = -(outer_rec.len as i64)
        + comps.outer.iter().map(|r| r.boundary_len() as i64).sum::<i64>()
        + 2 * comps.u_count as i64
        + 1;
    let interior_area = full_area
        - comps.bounded.iter().filter(|r| r.dir != entry.dir).map(|r| r.area()).sum::<i64>();
    Ok(LoopStats {
        component_areas: comps.bounded.iter().map(|r| r.area()).collect(),
        component_boundary_lens: comps.bounded.iter().map(|r| r.boundary_len()).collect(),
        full_area,
        interior_area,
        outer_boundary_len,
    })
}

/// One row of the loops readout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoopReport {
    pub entry: RootLoop,
    pub components: Option<LoopComponents>,
    pub stats: Option<LoopStats>,
}

/// All loops around `origin` with their components and statistics.
pub fn root_loops(w: &Word, mt: &MatchTable, origin: i64) -> Result<Vec<LoopReport>> {
    if !w.contains(origin) {
        return Err(Error::Range(format!("origin {origin} outside the window")));
    }
    let fx = FlexIndex::new(w, mt);
    let seq = nested_with(w, mt, &fx, origin)?;
    seq.loops
        .iter()
        .map(|e| {
            if e.truncated {
                return Ok(LoopReport { entry: *e, components: None, stats: None });
            }
            let c = classify_with(w, mt, &fx, e)?;
            let s = stats_with(w, mt, &fx, e, &c)?;
            Ok(LoopReport { entry: *e, components: Some(c), stats: Some(s) })
        })
        .collect()
}

/// Whether the boundary cycles of two nested bubbles of one direction share an edge.
pub fn nesting_touch(w: &Word, mt: &MatchTable, i: i64, i_prime: i64) -> Result<bool> {
    let fx = FlexIndex::new(w, mt);
    let rec = |k: i64| {
        if !w.contains(k) || w.at(k) != Symbol::OF {
            return Err(Error::Precondition(format!("X_{k} is not an o_f")));
        }
        fx.record(w, mt, k).ok_or(Error::Unmatched(k))
    };
    let (a, b) = (rec(i)?, rec(i_prime)?);
    if a.dir != b.dir || i == i_prime || a.phi < b.phi || a.i > b.i {
        return Err(Error::Precondition(format!("[φ({i}), {i}] is not nested in [φ({i_prime}), {i_prime}] with the same direction")));
    }
    Ok(match a.phi_star {
        Partner::At(k) => k <= b.phi,
        Partner::OutsideWindow => true,
    })
}
