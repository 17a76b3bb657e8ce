//! The finite-volume bijection: a balanced word becomes a rooted planar map M
//! with an edge set S, stored through its quadrangulation Q as a rotation
//! system. The graph-level routines here compute clusters, loops and cycle
//! regions without using any word formula, and serve as oracles for `loops`.

use crate::error::{Error, Result};
use crate::matching::{compute_matches, resolve_y, Partner};
use crate::params::ModelParams;
use crate::rng::SymbolSampler;
use crate::word::{reduce, Reducer, Symbol, Word};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::RngCore;
use serde::Serialize;
use std::collections::{HashMap, VecDeque};

/// A face of Q, crossed by λ at the burger step and again at the order step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quad {
    pub burger: i64,
    pub order: i64,
    /// Kind of the burger in Y (BH or BC).
    pub kind: Symbol,
    pub flexible: bool,
    /// The primal diagonal is in S; otherwise the dual diagonal is in S*.
    pub primal_in_s: bool,
    /// Q-edges in face order.
    pub sides: [usize; 4],
    /// Q-vertices at the start of each side: primal, dual, primal, dual.
    pub corners: [usize; 4],
}

/// Q-darts: 2e runs from the primal to the dual end of Q-edge e = λ(e), 2e+1 back.
#[derive(Debug, Clone, Serialize)]
pub struct PlanarMapRecord {
    /// Word index of the first step.
    pub start: i64,
    pub primal_parent: Vec<Option<usize>>,
    pub dual_parent: Vec<Option<usize>>,
    /// Quad whose primal (dual) diagonal is the tree edge above each vertex.
    pub primal_tree_quad: Vec<Option<usize>>,
    pub dual_tree_quad: Vec<Option<usize>>,
    /// (primal, dual) endpoints of λ(s), s = 0..=2n.
    pub lambda: Vec<(usize, usize)>,
    pub quads: Vec<Quad>,
    /// Quad crossed at step s (index s − 1).
    pub step_quad: Vec<usize>,
    pub sigma: Vec<usize>,
    pub alpha: Vec<usize>,
    pub phi: Vec<usize>,
}

impl PlanarMapRecord {
    pub fn num_primal(&self) -> usize {
        self.primal_parent.len()
    }

    pub fn num_dual(&self) -> usize {
        self.dual_parent.len()
    }

    /// Edges of M, one per quad.
    pub fn num_edges(&self) -> usize {
        self.quads.len()
    }

    pub fn num_q_edges(&self) -> usize {
        2 * self.quads.len()
    }

    /// Q-vertex id of a dual vertex.
    pub fn dual_id(&self, v: usize) -> usize {
        self.num_primal() + v
    }

    /// Q-edge λ(t) for a word index t (t = start − 1 is time 0).
    pub fn edge_at(&self, t: i64) -> usize {
        let m = self.num_q_edges() as i64;
        (t - self.start + 1).rem_euclid(m.max(1)) as usize
    }

    /// Q-vertex ids of the endpoints of a Q-edge.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        let (p, q) = self.lambda[e];
        (p, self.dual_id(q))
    }

    pub fn dart_tail(&self, d: usize) -> usize {
        let (p, q) = self.endpoints(d / 2);
        if d % 2 == 0 {
            p
        } else {
            q
        }
    }

    /// Q-edges λ(a), ..., λ(b) for word indices a ≤ b.
    pub fn edges_between(&self, a: i64, b: i64) -> Vec<usize> {
        (a..=b).map(|t| self.edge_at(t)).collect()
    }

    pub fn quad_of(&self, t: i64) -> usize {
        self.step_quad[(t - self.start) as usize]
    }

    /// Endpoints of the diagonal of `q` that belongs to S ∪ S*.
    pub fn chosen_diagonal(&self, q: usize) -> (usize, usize) {
        let c = self.quads[q].corners;
        if self.quads[q].primal_in_s {
            (c[0], c[2])
        } else {
            (c[1], c[3])
        }
    }

    /// Triangle (0 or 1) of `q` holding face position `pos`.
    pub fn triangle_of(&self, q: usize, pos: usize) -> usize {
        if self.quads[q].primal_in_s {
            pos / 2
        } else {
            usize::from(pos == 0 || pos == 3)
        }
    }

    /// Checks the rotation system: quadrilateral faces, consistent vertex
    /// orbits and Euler's formula.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Precondition(m));
        let nd = 2 * self.num_q_edges();
        for d in 0..nd {
            if self.alpha[self.alpha[d]] != d || self.alpha[d] == d {
                return bad(format!("alpha is not a fixed-point-free involution at {d}"));
            }
            if self.sigma[d] != self.phi[self.alpha[d]] {
                return bad(format!("sigma != phi∘alpha at {d}"));
            }
            if self.dart_tail(self.phi[d]) != self.dart_tail(self.alpha[d]) {
                return bad(format!("face step from dart {d} does not continue at its head"));
            }
            if self.dart_tail(self.sigma[d]) != self.dart_tail(d) {
                return bad(format!("vertex rotation at dart {d} changes vertex"));
            }
            let mut x = d;
            for _ in 0..4 {
                x = self.phi[x];
            }
            if x != d || self.phi[d] == d {
                return bad(format!("face of dart {d} is not a quadrilateral"));
            }
        }
        let v = if self.quads.is_empty() { 2 } else { orbits(&self.sigma) };
        if v != self.num_primal() + self.num_dual() {
            return bad(format!("{v} vertex orbits for {} vertices", self.num_primal() + self.num_dual()));
        }
        let f = orbits(&self.phi);
        if v as i64 - self.num_q_edges() as i64 + f as i64 != 2 {
            return bad("Euler characteristic is not 2".into());
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map records serialize")
    }
}

fn orbits(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut n = 0;
    for d in 0..perm.len() {
        if !seen[d] {
            n += 1;
            let mut x = d;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
            }
        }
    }
    n
}

/// Builds (M, e_0, S) from a balanced word.
pub fn build_map(w: &Word) -> Result<PlanarMapRecord> {
    if !reduce(w).is_empty() {
        return Err(Error::NotBalanced);
    }
    let mt = compute_matches(w);
    let y = resolve_y(w, &mt)?;
    let m = w.len();
    let mut primal_parent = vec![None];
    let mut dual_parent = vec![None];
    let mut created_at: Vec<(bool, usize, usize)> = Vec::new();
    let (mut p, mut q) = (0usize, 0usize);
    let mut lambda = Vec::with_capacity(m + 1);
    lambda.push((0, 0));
    for (k, &s) in y.symbols.iter().enumerate() {
        match s {
            Symbol::BH => {
                primal_parent.push(Some(p));
                p = primal_parent.len() - 1;
                created_at.push((true, p, k));
            }
            Symbol::BC => {
                dual_parent.push(Some(q));
                q = dual_parent.len() - 1;
                created_at.push((false, q, k));
            }
            Symbol::OH => p = primal_parent[p].expect("balanced word stays in the tree"),
            Symbol::OC => q = dual_parent[q].expect("balanced word stays in the tree"),
            Symbol::OF => unreachable!("resolved"),
        }
        lambda.push((p, q));
    }
    let edge = |s: usize| if m == 0 { 0 } else { s % m };
    let mut quads = Vec::with_capacity(m / 2);
    let mut step_quad = vec![0; m];
    for (k, &s) in w.symbols.iter().enumerate() {
        if !s.is_order() {
            continue;
        }
        let Partner::At(jw) = mt.phi[k] else { unreachable!("balanced") };
        let (sj, si) = ((jw - w.start) as usize + 1, k + 1);
        let kind = w.symbols[sj - 1];
        let flexible = s == Symbol::OF;
        let (pj, cj, pi, ci) = (edge(sj - 1), edge(sj), edge(si - 1), edge(si));
        let (sides, corners) = if kind == Symbol::BH {
            ([pj, cj, pi, ci], [lambda[sj - 1].0, lambda[sj - 1].1, lambda[sj].0, lambda[si].1])
        } else {
            ([pj, ci, pi, cj], [lambda[sj - 1].0, lambda[sj - 1].1, lambda[si].0, lambda[sj].1])
        };
        let np = primal_parent.len();
        let corners = [corners[0], corners[1] + np, corners[2], corners[3] + np];
        step_quad[sj - 1] = quads.len();
        step_quad[si - 1] = quads.len();
        quads.push(Quad {
            burger: jw,
            order: w.start + k as i64,
            kind,
            flexible,
            primal_in_s: (kind == Symbol::BH) ^ flexible,
            sides,
            corners,
        });
    }
    let mut primal_tree_quad = vec![None; primal_parent.len()];
    let mut dual_tree_quad = vec![None; dual_parent.len()];
    for &(is_primal, v, k) in &created_at {
        if is_primal {
            primal_tree_quad[v] = Some(step_quad[k]);
        } else {
            dual_tree_quad[v] = Some(step_quad[k]);
        }
    }
    let nd = 2 * m;
    let alpha: Vec<usize> = (0..nd).map(|d| d ^ 1).collect();
    let mut phi = vec![0; nd];
    for qd in &quads {
        let darts: Vec<usize> = (0..4).map(|k| 2 * qd.sides[k] + (k % 2)).collect();
        for k in 0..4 {
            phi[darts[k]] = darts[(k + 1) % 4];
        }
    }
    let sigma = (0..nd).map(|d| phi[alpha[d]]).collect();
    Ok(PlanarMapRecord {
        start: w.start,
        primal_parent,
        dual_parent,
        primal_tree_quad,
        dual_tree_quad,
        lambda,
        quads,
        step_quad,
        sigma,
        alpha,
        phi,
    })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let nx = self.0[x];
            self.0[x] = r;
            x = nx;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a] = b;
        }
    }

    fn count(&mut self) -> usize {
        (0..self.0.len()).filter(|&x| self.find(x) == x).count()
    }
}

/// Clusters of S and S* and the interface loops.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapLoops {
    pub primal_clusters: usize,
    pub dual_clusters: usize,
    /// Each loop as the cyclic sequence of Q-edges it crosses.
    pub loops: Vec<Vec<usize>>,
    pub edge_loop: Vec<usize>,
}

impl MapLoops {
    /// The convention K(S) = #clusters(S) + #clusters(S*) − 1.
    pub fn k_of_s(&self) -> usize {
        self.primal_clusters + self.dual_clusters - 1
    }
}

/// Positions of each Q-edge in the quads: two (quad, position) slots per edge.
fn edge_slots(m: &PlanarMapRecord) -> Vec<[(usize, usize); 2]> {
    let mut slots = vec![[(usize::MAX, 0); 2]; m.num_q_edges()];
    for (qi, qd) in m.quads.iter().enumerate() {
        for pos in 0..4 {
            let s = &mut slots[qd.sides[pos]];
            if s[0].0 == usize::MAX {
                s[0] = (qi, pos);
            } else {
                s[1] = (qi, pos);
            }
        }
    }
    slots
}

/// The other face position in the same triangle.
fn tri_partner(m: &PlanarMapRecord, q: usize, pos: usize) -> usize {
    if m.quads[q].primal_in_s {
        pos ^ 1
    } else {
        match pos {
            1 => 2,
            2 => 1,
            3 => 0,
            _ => 3,
        }
    }
}

pub fn map_loops(m: &PlanarMapRecord) -> MapLoops {
    let np = m.num_primal();
    let mut pu = UnionFind::new(np);
    let mut du = UnionFind::new(m.num_dual());
    for qi in 0..m.quads.len() {
        let (a, b) = m.chosen_diagonal(qi);
        if m.quads[qi].primal_in_s {
            pu.union(a, b);
        } else {
            du.union(a - np, b - np);
        }
    }
    let slots = edge_slots(m);
    let ne = m.num_q_edges();
    let mut edge_loop = vec![usize::MAX; ne];
    let mut loops = Vec::new();
    for e0 in 0..ne {
        if edge_loop[e0] != usize::MAX {
            continue;
        }
        let id = loops.len();
        let mut seq = Vec::new();
        let start = slots[e0][0];
        let mut slot = start;
        // Leave each edge through one triangle and re-enter the next edge.
        loop {
            let e = m.quads[slot.0].sides[slot.1];
            edge_loop[e] = id;
            seq.push(e);
            let out = (slot.0, tri_partner(m, slot.0, slot.1));
            let s2 = slots[m.quads[out.0].sides[out.1]];
            let next = if s2[0] == out { s2[1] } else { s2[0] };
            if next == start {
                break;
            }
            slot = next;
        }
        loops.push(seq);
    }
    MapLoops { primal_clusters: pu.count(), dual_clusters: du.count(), loops, edge_loop }
}

/// A region of Q bounded by a loop or a cycle of S ∪ S*.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Region {
    /// Q-edges in the region, sorted.
    pub edges: Vec<usize>,
    /// Quads whose chosen diagonal bounds the region.
    pub boundary: Vec<usize>,
    /// The loop has primal vertices on its inner side.
    pub surrounds_primal: bool,
}

impl Region {
    pub fn area(&self) -> usize {
        self.edges.len()
    }
}

/// The loop plus everything its triangles cut off from the root edge λ(0).
/// `None` when the loop crosses λ(0).
pub fn loop_region(m: &PlanarMapRecord, ml: &MapLoops, id: usize) -> Option<Region> {
    if ml.edge_loop[0] == id {
        return None;
    }
    let nq = m.quads.len();
    let slots = edge_slots(m);
    let tri = |s: (usize, usize)| 2 * s.0 + m.triangle_of(s.0, s.1);
    let mut on_loop = vec![false; 2 * nq];
    for (e, s) in slots.iter().enumerate() {
        if ml.edge_loop[e] == id {
            on_loop[tri(s[0])] = true;
            on_loop[tri(s[1])] = true;
        }
    }
    let mut uf = UnionFind::new(2 * nq);
    for q in 0..nq {
        if !on_loop[2 * q] && !on_loop[2 * q + 1] {
            uf.union(2 * q, 2 * q + 1);
        }
    }
    for s in &slots {
        uf.union(tri(s[0]), tri(s[1]));
    }
    let root = uf.find(tri(slots[0][0]));
    let in_region: Vec<bool> = slots.iter().map(|s| uf.find(tri(s[0])) != root).collect();
    // Which side of the Jordan curve the primal endpoints of the loop lie on.
    let mut vf = UnionFind::new(m.num_primal() + m.num_dual());
    for e in 0..m.num_q_edges() {
        if ml.edge_loop[e] != id {
            let (a, b) = m.endpoints(e);
            vf.union(a, b);
        }
    }
    for qi in 0..nq {
        let (a, b) = m.chosen_diagonal(qi);
        vf.union(a, b);
    }
    let surrounds_primal = vf.find(m.endpoints(ml.loops[id][0]).0) != vf.find(m.endpoints(0).0);
    Some(region_from_edges(m, in_region, surrounds_primal))
}

fn region_from_edges(m: &PlanarMapRecord, in_region: Vec<bool>, surrounds_primal: bool) -> Region {
    let boundary = (0..m.quads.len())
        .filter(|&qi| {
            let qd = &m.quads[qi];
            let mut side = [None, None];
            for pos in 0..4 {
                side[m.triangle_of(qi, pos)] = Some(in_region[qd.sides[pos]]);
            }
            side[0] != side[1]
        })
        .collect();
    let edges = (0..in_region.len()).filter(|&e| in_region[e]).collect();
    Region { edges, boundary, surrounds_primal }
}

/// The Q-edges separated from λ(0) by a cycle of chosen diagonals, found by
/// flooding the triangles with the cycle's diagonals blocked. Returns `None`
/// unless the cycle splits the triangles into exactly two pieces.
pub fn cycle_region(m: &PlanarMapRecord, cycle: &[usize]) -> Option<Region> {
    let nq = m.quads.len();
    let mut blocked = vec![false; nq];
    for &q in cycle {
        blocked[q] = true;
    }
    let mut uf = UnionFind::new(2 * nq);
    for (q, &b) in blocked.iter().enumerate() {
        if !b {
            uf.union(2 * q, 2 * q + 1);
        }
    }
    let slots = edge_slots(m);
    for s in &slots {
        let t0 = 2 * s[0].0 + m.triangle_of(s[0].0, s[0].1);
        let t1 = 2 * s[1].0 + m.triangle_of(s[1].0, s[1].1);
        uf.union(t0, t1);
    }
    if uf.count() != 2 {
        return None;
    }
    let root = {
        let s = slots[0][0];
        uf.find(2 * s.0 + m.triangle_of(s.0, s.1))
    };
    let in_region: Vec<bool> = slots
        .iter()
        .map(|s| uf.find(2 * s[0].0 + m.triangle_of(s[0].0, s[0].1)) != root)
        .collect();
    let surrounds_primal = cycle.first().is_some_and(|&q| m.quads[q].primal_in_s);
    Some(region_from_edges(m, in_region, surrounds_primal))
}

fn tree_path(parent: &[Option<usize>], tree_quad: &[Option<usize>], a: usize, b: usize) -> Vec<usize> {
    let depth = |mut v: usize| {
        let mut d = 0;
        while let Some(p) = parent[v] {
            v = p;
            d += 1;
        }
        d
    };
    let (mut a, mut b) = (a, b);
    let (mut da, mut db) = (depth(a), depth(b));
    let mut out = Vec::new();
    while da > db {
        out.push(tree_quad[a].unwrap());
        a = parent[a].unwrap();
        da -= 1;
    }
    while db > da {
        out.push(tree_quad[b].unwrap());
        b = parent[b].unwrap();
        db -= 1;
    }
    while a != b {
        out.push(tree_quad[a].unwrap());
        out.push(tree_quad[b].unwrap());
        a = parent[a].unwrap();
        b = parent[b].unwrap();
    }
    out
}

/// The cycle closed by the chosen diagonal of the flexible quad ordered at
/// word index `i`: its tree path in T (Left) or T* (Right) plus the quad itself.
pub fn fundamental_cycle(m: &PlanarMapRecord, i: i64) -> Result<Vec<usize>> {
    let qi = m.quad_of(i);
    let qd = &m.quads[qi];
    if !qd.flexible || qd.order != i {
        return Err(Error::Precondition(format!("X_{i} is not a matched o_f")));
    }
    let (a, b) = m.chosen_diagonal(qi);
    let mut path = if qd.primal_in_s {
        tree_path(&m.primal_parent, &m.primal_tree_quad, a, b)
    } else {
        let np = m.num_primal();
        tree_path(&m.dual_parent, &m.dual_tree_quad, a - np, b - np)
    };
    path.push(qi);
    Ok(path)
}

/// Graph-level bubble of a flexible order: the fundamental cycle, whether all
/// of it lies in S (or S*), and the region it separates from λ(0).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bubble {
    pub cycle: Vec<usize>,
    pub cycle_chosen: bool,
    pub region: Option<Region>,
}

pub fn bubble(m: &PlanarMapRecord, i: i64) -> Result<Bubble> {
    let cycle = fundamental_cycle(m, i)?;
    let side = m.quads[m.quad_of(i)].primal_in_s;
    let cycle_chosen = cycle.iter().all(|&q| m.quads[q].primal_in_s == side);
    let region = cycle_region(m, &cycle);
    Ok(Bubble { cycle, cycle_chosen, region })
}

/// Loop sizes of the map around the Q-edge λ(t): each loop separating λ(t)
/// from λ(0) or crossing λ(t), with its region, innermost first.
pub fn loops_around(m: &PlanarMapRecord, ml: &MapLoops, t: i64) -> Vec<(usize, Region)> {
    let e = m.edge_at(t);
    let mut out: Vec<(usize, Region)> = (0..ml.loops.len())
        .filter_map(|id| loop_region(m, ml, id).map(|r| (id, r)))
        .filter(|(_, r)| r.edges.binary_search(&e).is_ok())
        .collect();
    out.sort_by_key(|(_, r)| r.area());
    out
}

/// Canonical code of the rooted map (M, e_0), with the S flag of each edge
/// appended when `with_s` is set. M-darts are the primal corners of the
/// quads, labelled in breadth-first order from the root corner.
pub fn canonical_code(m: &PlanarMapRecord, with_s: bool) -> Vec<u32> {
    let nq = m.quads.len();
    if nq == 0 {
        return Vec::new();
    }
    let mut partner = vec![0usize; 4 * nq];
    let mut corner_quad = vec![0usize; 4 * nq];
    for (qi, qd) in m.quads.iter().enumerate() {
        let (a, b) = (2 * qd.sides[0], 2 * qd.sides[2]);
        partner[a] = b;
        partner[b] = a;
        corner_quad[a] = qi;
        corner_quad[b] = qi;
    }
    let mut label = vec![u32::MAX; 4 * nq];
    let mut order = Vec::with_capacity(2 * nq);
    let mut queue = VecDeque::from([0usize]);
    label[0] = 0;
    let mut next = 1;
    while let Some(d) = queue.pop_front() {
        order.push(d);
        for nb in [m.sigma[d], partner[d]] {
            if label[nb] == u32::MAX {
                label[nb] = next;
                next += 1;
                queue.push_back(nb);
            }
        }
    }
    let mut code = Vec::with_capacity(3 * order.len());
    for &d in &order {
        code.push(label[m.sigma[d]]);
        code.push(label[partner[d]]);
        if with_s {
            code.push(u32::from(m.quads[corner_quad[d]].primal_in_s));
        }
    }
    code
}

/// Draws a balanced word of length 2n by rejection, abandoning a draw as soon
/// as an order finds nothing to eat.
pub fn sample_balanced<R: RngCore>(params: &ModelParams, n: usize, rng: &mut R, max_tries: u64) -> Result<Word> {
    let sampler = SymbolSampler::new(params);
    'outer: for _ in 0..max_tries {
        let mut r = Reducer::new();
        let mut symbols = Vec::with_capacity(2 * n);
        for k in 0..2 * n {
            let s = sampler.symbol(rng.next_u64());
            let eaten = r.push(k as i64, s);
            if (s.is_order() && eaten.is_none()) || r.burger_count() > 2 * n - k - 1 {
                continue 'outer;
            }
            symbols.push(s);
        }
        if !r.has_burger() {
            return Ok(Word::new(1, symbols));
        }
    }
    Err(Error::Exhausted(max_tries))
}

/// All balanced words of length 2n.
pub fn balanced_words(n: usize) -> Vec<Vec<Symbol>> {
    fn rec(n2: usize, cur: &mut Vec<Symbol>, stack: &mut Vec<Symbol>, out: &mut Vec<Vec<Symbol>>) {
        let left = n2 - cur.len();
        if left == 0 {
            if stack.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        for s in crate::word::ALPHABET {
            if s.is_burger() {
                if stack.len() + 1 > left - 1 {
                    continue;
                }
                stack.push(s);
                cur.push(s);
                rec(n2, cur, stack, out);
                cur.pop();
                stack.pop();
            } else {
                let pos = match s {
                    Symbol::OF => stack.len().checked_sub(1),
                    _ => stack.iter().rposition(|&b| s.eats(b)),
                };
                let Some(pos) = pos else { continue };
                let b = stack.remove(pos);
                cur.push(s);
                rec(n2, cur, stack, out);
                cur.pop();
                stack.insert(pos, b);
            }
        }
    }
    let mut out = Vec::new();
    rec(2 * n, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

/// Exact check that the word measure, pushed to (M, e_0, S), is proportional
/// to q^{K(S)/2}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightReport {
    pub n: usize,
    pub p: String,
    pub words: usize,
    pub classes: usize,
    pub rooted_maps: usize,
    /// Classes holding more than one word.
    pub collisions: usize,
    /// Words with #loops ≠ K(S).
    pub loop_count_mismatches: usize,
    pub k_convention: String,
    /// max |w / w_0 − 1| over classes, w = P(class) / q^{K/2}.
    pub max_rel_deviation: String,
    pub ok: bool,
}

/// `p` is given as an exact fraction num/den in (0, 1/2).
pub fn weight_check(n: usize, p_num: i64, p_den: i64) -> Result<WeightReport> {
    if n > 4 {
        return Err(Error::Resource(format!("weight_check enumerates 5^{} words; n ≤ 4", 2 * n)));
    }
    if p_num <= 0 || p_den <= 0 || 2 * p_num >= p_den {
        return Err(Error::Domain(format!("p = {p_num}/{p_den} is outside (0, 1/2)")));
    }
    let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let p = r(p_num, p_den);
    let one = BigRational::one();
    let quarter = r(1, 4);
    let prob = |s: Symbol| match s {
        Symbol::BH | Symbol::BC => quarter.clone(),
        Symbol::OH | Symbol::OC => (&one - &p) / BigInt::from(4),
        Symbol::OF => &p / BigInt::from(2),
    };
    let sqrt_q = (&p * BigInt::from(2)) / (&one - &p);
    let words = balanced_words(n);
    let mut classes: HashMap<Vec<u32>, (usize, BigRational, usize)> = HashMap::new();
    let mut maps: HashMap<Vec<u32>, ()> = HashMap::new();
    let mut mismatches = 0;
    for syms in &words {
        let w = Word::new(1, syms.clone());
        let m = build_map(&w)?;
        m.validate()?;
        let ml = map_loops(&m);
        if ml.loops.len() != ml.k_of_s() && !m.quads.is_empty() {
            mismatches += 1;
        }
        let pr = syms.iter().fold(one.clone(), |acc, &s| acc * prob(s));
        let entry = classes.entry(canonical_code(&m, true)).or_insert((0, BigRational::zero(), ml.k_of_s()));
        entry.0 += 1;
        entry.1 += pr;
        maps.insert(canonical_code(&m, false), ());
    }
    let mut ratios = classes.values().map(|(_, pr, k)| pr / num_traits::pow(sqrt_q.clone(), *k));
    let first = ratios.next().unwrap_or_else(|| one.clone());
    let dev = ratios.fold(BigRational::zero(), |acc, x| {
        let d = (x / &first - &one).abs();
        if d > acc {
            d
        } else {
            acc
        }
    });
    let collisions = classes.values().filter(|c| c.0 > 1).count();
    Ok(WeightReport {
        n,
        p: format!("{p_num}/{p_den}"),
        words: words.len(),
        classes: classes.len(),
        rooted_maps: maps.len(),
        collisions,
        loop_count_mismatches: mismatches,
        k_convention: "K(S) = #clusters(S) + #clusters(S*) - 1".into(),
        max_rel_deviation: dev.to_string(),
        ok: dev.is_zero() && collisions == 0 && mismatches == 0,
    })
}
