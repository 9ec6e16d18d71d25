use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use crate::{LatticeConfig, LatticeWindow, TripleCube};

/// Generation gap |g1 - g2|, the log of the sidelength ratio.
pub fn log_ratio(a: &TripleCube, b: &TripleCube) -> u32 {
    a.generation.abs_diff(b.generation)
}

/// All lattice neighbours of `q`: its parent, its 2^d children, and the
/// 3^d - 1 cubes of the same generation whose underlying cells touch it.
pub fn neighbors(q: &TripleCube) -> Vec<TripleCube> {
    let d = q.index.len();
    let mut out = Vec::with_capacity(1 + (1 << d) + 3usize.pow(d as u32) - 1);
    out.push(q.parent());
    let mut child = vec![0i64; d];
    for bits in 0..(1u32 << d) {
        for (j, c) in child.iter_mut().enumerate() {
            *c = 2 * q.index[j] + ((bits >> j) & 1) as i64;
        }
        out.push(TripleCube::new(q.generation + 1, child.clone()));
    }
    let mut offset = vec![-1i64; d];
    'shifts: loop {
        if offset.iter().any(|&o| o != 0) {
            let idx: Vec<i64> = q.index.iter().zip(&offset).map(|(i, o)| i + o).collect();
            out.push(TripleCube::new(q.generation, idx));
        }
        for j in (0..d).rev() {
            if offset[j] < 1 {
                offset[j] += 1;
                continue 'shifts;
            }
            offset[j] = -1;
        }
        break;
    }
    out
}

/// Lower bound on the graph distance. A path whose coarsest generation is G
/// spends at least (g1 - G) + (g2 - G) steps changing generation, and each of
/// its steps displaces the center by at most one cell at generation G.
fn distance_lower_bound(a: &TripleCube, b: &TripleCube) -> u32 {
    let g1 = a.generation;
    let g2 = b.generation;
    let g_top = g1.min(g2);
    // L-inf center separation in units of the generation-g_top cell.
    let mut sep: f64 = 0.0;
    for (ia, ib) in a.index.iter().zip(&b.index) {
        let ca = (*ia as f64 + 0.5) * 0.5f64.powi(g1 - g_top);
        let cb = (*ib as f64 + 0.5) * 0.5f64.powi(g2 - g_top);
        sep = sep.max((ca - cb).abs());
    }
    let mut best = u32::MAX;
    for drop in 0..64 {
        let climb = (g1 - (g_top - drop)) as u32 + (g2 - (g_top - drop)) as u32;
        let span = (sep * 0.5f64.powi(drop)).ceil() as u32;
        best = best.min(climb.max(span));
        if span == 0 {
            break;
        }
    }
    best
}

/// Graph distance between two cubes, or None if it exceeds `max_dist`.
pub fn graph_distance(a: &TripleCube, b: &TripleCube, max_dist: u32) -> Option<u32> {
    if a == b {
        return Some(0);
    }
    if a.index.len() != b.index.len() {
        return None;
    }
    if distance_lower_bound(a, b) > max_dist {
        return None;
    }
    // A* over the infinite lattice; the bound above is admissible but not
    // consistent, so improved costs reopen nodes.
    let mut dist: HashMap<TripleCube, u32> = HashMap::new();
    let mut heap = BinaryHeap::new();
    dist.insert(a.clone(), 0);
    heap.push(Reverse((distance_lower_bound(a, b), 0u32, a.clone())));
    while let Some(Reverse((_, cost, node))) = heap.pop() {
        if node == *b {
            return Some(cost);
        }
        if dist.get(&node).is_some_and(|&c| c < cost) {
            continue;
        }
        if cost == max_dist {
            continue;
        }
        for next in neighbors(&node) {
            let c = cost + 1;
            if dist.get(&next).is_none_or(|&old| c < old) {
                let h = distance_lower_bound(&next, b);
                if c + h > max_dist {
                    continue;
                }
                dist.insert(next.clone(), c);
                heap.push(Reverse((c + h, c, next)));
            }
        }
    }
    None
}

/// Breadth-first reference distance, restricted to window members. Exact on
/// pairs whose connecting paths stay inside the window.
pub fn graph_distance_bfs_in_box(
    config: &LatticeConfig,
    window: &LatticeWindow,
    a: &TripleCube,
    b: &TripleCube,
    max_dist: u32,
) -> Option<u32> {
    let in_window = |q: &TripleCube| -> bool {
        if !window.contains_generation(q.generation) {
            return false;
        }
        window
            .index_ranges(config, q.generation)
            .iter()
            .zip(&q.index)
            .all(|((lo, hi), i)| lo <= i && i <= hi)
    };
    if !in_window(a) || !in_window(b) {
        return None;
    }
    if a == b {
        return Some(0);
    }
    let mut seen: HashMap<TripleCube, u32> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(a.clone(), 0);
    queue.push_back(a.clone());
    while let Some(node) = queue.pop_front() {
        let cost = seen[&node];
        if cost == max_dist {
            continue;
        }
        for next in neighbors(&node) {
            if !in_window(&next) || seen.contains_key(&next) {
                continue;
            }
            if next == *b {
                return Some(cost + 1);
            }
            seen.insert(next.clone(), cost + 1);
            queue.push_back(next);
        }
    }
    None
}
