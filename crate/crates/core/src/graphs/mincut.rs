//! Stoer–Wagner global minimum cut.

/// Minimum cut of the graph with symmetric adjacency weights `adj`, as
/// (value, indicator of one side). `None` for fewer than two vertices.
/// A disconnected graph has minimum cut 0.
pub fn stoer_wagner(adj: &[Vec<u64>]) -> Option<(u64, Vec<bool>)> {
    let n = adj.len();
    if n < 2 {
        return None;
    }
    let mut w: Vec<Vec<u64>> = adj.to_vec();
    // members[v]: original vertices merged into v
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best: Option<(u64, Vec<usize>)> = None;
    while active.len() > 1 {
        let mut added = vec![false; n];
        let mut key = vec![0u64; n];
        let mut prev = active[0];
        let mut last = active[0];
        for step in 0..active.len() {
            let next = *active
                .iter()
                .filter(|&&v| !added[v])
                .max_by(|&&a, &&b| key[a].cmp(&key[b]).then(b.cmp(&a)))
                .expect("vertex remains");
            added[next] = true;
            if step + 1 == active.len() {
                if best.as_ref().is_none_or(|(v, _)| key[next] < *v) {
                    best = Some((key[next], members[next].clone()));
                }
                prev = last;
                last = next;
                break;
            }
            last = next;
            for &v in &active {
                if !added[v] {
                    key[v] += w[next][v];
                }
            }
        }
        // merge last into prev
        let (s, t) = (prev, last);
        let moved = std::mem::take(&mut members[t]);
        members[s].extend(moved);
        for &v in &active {
            let add = w[t][v];
            w[s][v] += add;
            w[v][s] = w[s][v];
        }
        w[s][s] = 0;
        active.retain(|&v| v != t);
    }
    best.map(|(value, side_members)| {
        let mut side = vec![false; n];
        for v in side_members {
            side[v] = true;
        }
        (value, side)
    })
}
