//! Girth of an explicit Tanner graph by breadth-first search.
//!
//! This works on the expanded binary matrix and knows nothing about
//! exponent matrices, which makes it an independent check of the
//! exponent-domain cycle search.

use std::collections::VecDeque;

use crate::cycles::Girth;
use crate::error::{Error, Result};
use crate::parity::ParityCheckMatrix;

/// Exact girth of the bipartite graph of `h`, truncated at `cap`.
///
/// Nodes `0..cols` are variable nodes and `cols..cols + rows` check nodes. A
/// BFS is run from every variable node; whenever it reaches an already
/// labelled node through a non-tree edge, the two depths bound a closed walk
/// through the root. The minimum over all roots is the girth because every
/// cycle contains a variable node.
pub fn tanner_girth_oracle(h: &ParityCheckMatrix, cap: usize) -> Result<Girth> {
    if !cap.is_multiple_of(2) || cap < 4 {
        return Err(Error::param(format!("girth cap must be even and >= 4, got {cap}")));
    }
    let nv = h.cols();
    let total = nv + h.rows();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; total];
    let mut parent = vec![usize::MAX; total];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();

    for root in 0..nv {
        for &t in &touched {
            dist[t] = usize::MAX;
            parent[t] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        dist[root] = 0;
        touched.push(root);
        queue.push_back(root);
        'bfs: while let Some(u) = queue.pop_front() {
            // Anything found from here on is at least 2 * dist[u] + 1 long.
            if 2 * dist[u] + 1 >= best.min(cap + 1) {
                break;
            }
            let neighbours: Box<dyn Iterator<Item = usize>> = if u < nv {
                Box::new(h.col_rows(u).map(|r| nv + r))
            } else {
                Box::new(h.row_cols(u - nv).iter().copied())
            };
            for w in neighbours {
                if w == parent[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else {
                    let len = dist[u] + dist[w] + 1;
                    if len < best {
                        best = len;
                    }
                    if best <= 4 {
                        break 'bfs;
                    }
                }
            }
        }
        if best == 4 {
            break;
        }
    }
    Ok(if best <= cap { Girth::Exactly(best) } else { Girth::GreaterThan(cap) })
}
