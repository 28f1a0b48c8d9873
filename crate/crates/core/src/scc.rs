//! Strongly connected components by an iterative Tarjan search.

/// Component index of every node; components are numbered in reverse
/// topological order of the condensation (sinks first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scc {
    pub component: Vec<u32>,
    pub count: usize,
}

impl Scc {
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, &c) in self.component.iter().enumerate() {
            out[c as usize].push(v);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.count];
        for &c in &self.component {
            out[c as usize] += 1;
        }
        out
    }
}

const UNSEEN: u32 = u32::MAX;

/// Tarjan's algorithm with an explicit call stack; runs in `O(V + E)`.
pub fn tarjan(adj: &[Vec<u32>]) -> Scc {
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut component = vec![UNSEEN; n];
    let mut stack: Vec<u32> = Vec::new();
    // (node, next edge position)
    let mut calls: Vec<(u32, usize)> = Vec::new();
    let mut next_index = 0u32;
    let mut count = 0u32;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        calls.push((root as u32, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root as u32);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = calls.last_mut() {
            let vu = v as usize;
            if *pos < adj[vu].len() {
                let w = adj[vu][*pos] as usize;
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    calls.push((w as u32, 0));
                } else if on_stack[w] {
                    low[vu] = low[vu].min(index[w]);
                }
            } else {
                calls.pop();
                if let Some(&(parent, _)) = calls.last() {
                    let p = parent as usize;
                    low[p] = low[p].min(low[vu]);
                }
                if low[vu] == index[vu] {
                    loop {
                        let w = stack.pop().expect("stack holds the component") as usize;
                        on_stack[w] = false;
                        component[w] = count;
                        if w == vu {
                            break;
                        }
                    }
                    count += 1;
                }
            }
        }
    }
    Scc {
        component,
        count: count as usize,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reach(adj: &[Vec<u32>]) -> Vec<Vec<bool>> {
        let n = adj.len();
        let mut r = vec![vec![false; n]; n];
        for (s, row) in r.iter_mut().enumerate() {
            let mut todo = vec![s];
            row[s] = true;
            while let Some(v) = todo.pop() {
                for &w in &adj[v] {
                    if !row[w as usize] {
                        row[w as usize] = true;
                        todo.push(w as usize);
                    }
                }
            }
        }
        r
    }

    #[test]
    fn long_path_does_not_overflow() {
        let n = 200_000;
        let adj: Vec<Vec<u32>> = (0..n).map(|i| vec![((i + 1) % n) as u32]).collect();
        let s = tarjan(&adj);
        assert_eq!(s.count, 1);
        let line: Vec<Vec<u32>> = (0..n).map(|i| if i + 1 < n { vec![(i + 1) as u32] } else { vec![] }).collect();
        assert_eq!(tarjan(&line).count, n);
    }

    proptest! {
        #[test]
        fn matches_mutual_reachability(edges in prop::collection::vec((0u32..12, 0u32..12), 0..40)) {
            let n = 12;
            let mut adj = vec![Vec::new(); n];
            for (a, b) in edges {
                adj[a as usize].push(b);
            }
            let s = tarjan(&adj);
            let r = reach(&adj);
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(s.component[i] == s.component[j], r[i][j] && r[j][i]);
                }
            }
            // sinks first: an edge never goes to a later-numbered component
            for (i, row) in adj.iter().enumerate() {
                for &j in row {
                    prop_assert!(s.component[j as usize] <= s.component[i]);
                }
            }
        }
    }
}
