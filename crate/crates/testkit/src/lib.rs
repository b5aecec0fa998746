//! Slow, obviously correct reference computations for the test suites.
//!
//! Nothing here depends on the library under test. Graphs are plain vertex
//! counts with edge lists and values are `BigRational`.

use num_rational::BigRational;
use num_traits::Zero;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    adj
}

/// The empty set counts as connected.
pub fn is_connected(adj: &[Vec<bool>], set: &[usize]) -> bool {
    let Some(&start) = set.first() else { return true };
    let mut seen = vec![start];
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in set {
            if adj[v][w] && !seen.contains(&w) {
                seen.push(w);
                stack.push(w);
            }
        }
    }
    seen.len() == set.len()
}

fn value(u: &[Q], set: &[usize]) -> Q {
    set.iter().fold(Q::zero(), |acc, &v| acc + u[v].clone())
}

/// Every set partition of `0..n` into at most `max_blocks` blocks.
pub fn set_partitions(n: usize, max_blocks: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(v: usize, n: usize, max: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if v == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(v);
            rec(v + 1, n, max, cur, out);
            cur[b].pop();
        }
        if cur.len() < max {
            cur.push(vec![v]);
            rec(v + 1, n, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, max_blocks, &mut Vec::new(), &mut out);
    out
}

/// Max over partitions of all vertices into `bundles` connected (possibly
/// empty) parts of the least part value. `None` if no such partition exists.
pub fn naive_mms(n: usize, edges: &[(usize, usize)], u: &[Q], bundles: usize) -> Option<Q> {
    let adj = adjacency(n, edges);
    set_partitions(n, bundles)
        .into_iter()
        .filter(|p| p.iter().all(|b| is_connected(&adj, b)))
        .map(|p| if p.len() < bundles { Q::zero() } else { p.iter().map(|b| value(u, b)).min().expect("nonempty") })
        .max()
}

/// Every way to give each vertex one of `labels` labels, as label vectors.
fn labellings(n: usize, labels: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = labels.pow(n as u32);
    (0..total).map(move |mut code| {
        (0..n)
            .map(|_| {
                let l = code % labels;
                code /= labels;
                l
            })
            .collect()
    })
}

fn groups(label: &[usize], count: usize) -> Vec<Vec<usize>> {
    let mut g = vec![Vec::new(); count];
    for (v, &l) in label.iter().enumerate() {
        g[l].push(v);
    }
    g
}

/// Max over `bundles` disjoint connected bundles (not necessarily covering)
/// of the least bundle value.
pub fn naive_pmms(n: usize, edges: &[(usize, usize)], u: &[Q], bundles: usize) -> Q {
    let adj = adjacency(n, edges);
    labellings(n, bundles + 1)
        .filter_map(|label| {
            let g = groups(&label, bundles + 1);
            g[1..]
                .iter()
                .all(|b| is_connected(&adj, b))
                .then(|| g[1..].iter().map(|b| value(u, b)).min().expect("at least one bundle"))
        })
        .max()
        .expect("the all-unassigned labelling is valid")
}

/// Max over partitions into one connected part per agent of the least
/// `u_i(A_i) / t_i`; agents with zero target are left out.
pub fn naive_max_min_ratio(n: usize, edges: &[(usize, usize)], agents: &[(Vec<Q>, Q)]) -> Q {
    let adj = adjacency(n, edges);
    let active: Vec<&(Vec<Q>, Q)> = agents.iter().filter(|(_, t)| !t.is_zero()).collect();
    if active.is_empty() {
        return q(1, 1);
    }
    labellings(n, active.len())
        .filter_map(|label| {
            let g = groups(&label, active.len());
            g.iter().all(|b| is_connected(&adj, b)).then(|| {
                g.iter().zip(&active).map(|(b, (u, t))| value(u, b) / t.clone()).min().expect("at least one agent")
            })
        })
        .max()
        .expect("some labelling is connected")
}

/// `(K, I)` with `K` a clique, `I` independent, `|I|` largest and then `K`
/// lexicographically least; `None` if the graph is not split.
pub fn naive_split_pair(n: usize, edges: &[(usize, usize)]) -> Option<(Vec<usize>, Vec<usize>)> {
    let adj = adjacency(n, edges);
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for mask in 0u32..1 << n {
        let k: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        let i: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 0).collect();
        let clique = k.iter().all(|&a| k.iter().all(|&b| a == b || adj[a][b]));
        let indep = i.iter().all(|&a| i.iter().all(|&b| !adj[a][b]));
        if !clique || !indep {
            continue;
        }
        let better = match &best {
            None => true,
            Some((bk, _)) => k.len() < bk.len() || (k.len() == bk.len() && k < *bk),
        };
        if better {
            best = Some((k, i));
        }
    }
    best
}

/// Maximal vertex sets inducing a biconnected subgraph (an edge counts),
/// plus isolated vertices, each sorted; found by checking every subset.
pub fn naive_blocks(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let adj = adjacency(n, edges);
    let biconnected = |set: &[usize]| match set.len() {
        0 => false,
        1 => (0..n).all(|w| !adj[set[0]][w]),
        2 => adj[set[0]][set[1]],
        _ => {
            is_connected(&adj, set)
                && set.iter().all(|&x| {
                    let rest: Vec<usize> = set.iter().copied().filter(|&y| y != x).collect();
                    is_connected(&adj, &rest)
                })
        }
    };
    let candidates: Vec<Vec<usize>> = (1u32..1 << n)
        .map(|mask| (0..n).filter(|v| mask >> v & 1 == 1).collect::<Vec<_>>())
        .filter(|s| biconnected(s))
        .collect();
    let mut out: Vec<Vec<usize>> = candidates
        .iter()
        .filter(|s| !candidates.iter().any(|t| t.len() > s.len() && s.iter().all(|v| t.contains(v))))
        .cloned()
        .collect();
    out.sort();
    out
}

/// Complete multipartite iff non-adjacency is transitive; returns the
/// classes of non-adjacency, each sorted.
pub fn naive_multipartite_parts(n: usize, edges: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    let adj = adjacency(n, edges);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if a != b && b != c && a != c && !adj[a][b] && !adj[b][c] && adj[a][c] {
                    return None;
                }
            }
        }
    }
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        match parts.iter_mut().find(|p| !adj[p[0]][v]) {
            Some(p) => p.push(v),
            None => parts.push(vec![v]),
        }
    }
    (n > 0).then_some(parts)
}

fn canonical(n: usize, adj: &[Vec<bool>]) -> Vec<bool> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<bool>> = None;
    loop {
        let code: Vec<bool> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).map(|(a, b)| adj[perm[a]][perm[b]]).collect();
        if best.as_ref().is_none_or(|b| code > *b) {
            best = Some(code);
        }
        // Next permutation in lexicographic order.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).expect("a larger element exists");
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    best.unwrap_or_default()
}

/// One representative of every isomorphism class of connected graphs on
/// exactly `n` vertices.
pub fn connected_graphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let adj = adjacency(n, &edges);
        if !is_connected(&adj, &(0..n).collect::<Vec<_>>()) {
            continue;
        }
        if seen.insert(canonical(n, &adj)) {
            out.push(edges);
        }
    }
    out
}
