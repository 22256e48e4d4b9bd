use crate::constrain::LabeledConstraint;
use crate::solve::{grow_mss, SliceResult};
use crate::types::TVar;
use std::collections::BTreeSet;

/// Orders the MUS into a path through the graph in which two constraints are
/// adjacent when they share a type variable under the solution of the
/// constraints outside the MUS. If that graph is not a simple path the
/// constraints are ordered by the position of their left span.
pub fn build_chain(sr: &SliceResult, cs: &[LabeledConstraint]) -> Vec<usize> {
    let mus = &sr.mus;
    let by_position = || {
        let mut ids = mus.clone();
        ids.sort_by_key(|&id| (cs[id].lhs_span, id));
        ids
    };
    if mus.len() <= 2 {
        return by_position();
    }
    let background = sr.background(cs.len());
    let (_, solution) = grow_mss(&[], &background, cs).expect("the empty seed is satisfiable");
    let vars: Vec<BTreeSet<TVar>> = mus
        .iter()
        .map(|&id| {
            let c = &cs[id];
            let mut vs: BTreeSet<TVar> = solution.apply(&c.lhs).vars().into_iter().collect();
            vs.extend(solution.apply(&c.rhs).vars());
            vs
        })
        .collect();
    let n = mus.len();
    let adjacent: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && !vars[i].is_disjoint(&vars[j])).collect())
        .collect();

    let edges: usize = adjacent.iter().map(Vec::len).sum::<usize>() / 2;
    let endpoints: Vec<usize> = (0..n).filter(|&i| adjacent[i].len() == 1).collect();
    let is_path = edges == n - 1 && endpoints.len() == 2 && adjacent.iter().all(|a| a.len() <= 2);
    if !is_path {
        return by_position();
    }
    let start = *endpoints
        .iter()
        .min_by_key(|&&i| (cs[mus[i]].lhs_span, mus[i]))
        .expect("a path has two endpoints");
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while order.len() < n {
        let Some(&next) = adjacent[cur].iter().find(|&&j| j != prev) else {
            return by_position();
        };
        order.push(next);
        prev = cur;
        cur = next;
    }
    order.into_iter().map(|i| mus[i]).collect()
}
