use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Longest-processing-time-first list scheduling: jobs in descending size,
/// each to the least-loaded processor. Equal loads go to the processor with
/// fewer jobs, then the lowest id, so zero-size jobs are spread out rather
/// than piled on one processor. Returns the job indices assigned to each processor.
pub fn lpt_schedule(sizes: &[u64], p: usize) -> Vec<Vec<usize>> {
    assert!(p >= 1, "P must be >= 1");
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by_key(|&j| Reverse(sizes[j]));
    let mut heap: BinaryHeap<Reverse<(u64, usize, usize)>> = (0..p).map(|i| Reverse((0, 0, i))).collect();
    let mut out = vec![Vec::new(); p];
    for j in order {
        let Reverse((load, n, i)) = heap.pop().unwrap();
        out[i].push(j);
        heap.push(Reverse((load + sizes[j], n + 1, i)));
    }
    out
}

pub fn loads(sizes: &[u64], assignment: &[Vec<usize>]) -> Vec<u64> {
    assignment.iter().map(|js| js.iter().map(|&j| sizes[j]).sum()).collect()
}

pub fn makespan(sizes: &[u64], assignment: &[Vec<usize>]) -> u64 {
    loads(sizes, assignment).into_iter().max().unwrap_or(0)
}
