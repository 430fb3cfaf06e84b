use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::net::{Msg, SimNet};
use crate::itemset::Item;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceStats {
    pub rounds: u64,
    pub steals: u64,
    pub jobs_per_worker: Vec<u64>,
    pub token_passes: u64,
}

#[derive(Default)]
struct WorkerState {
    queue: VecDeque<Item>,
    waiting: bool,
    polled: usize,
    passive: bool,
    black: bool,
    token: Option<bool>,
}

/// Initial 1-item-prefix split: item `b_j` (1-based position in `items`) goes
/// to worker `ceil(j·P/|B|)` (1-based).
pub fn static_split(items: &[Item], p: usize) -> Vec<VecDeque<Item>> {
    let mut q = vec![VecDeque::new(); p];
    let n = items.len();
    for (k, &b) in items.iter().enumerate() {
        let j = k + 1;
        let w = (j * p).div_ceil(n);
        q[w - 1].push_back(b);
    }
    q
}

/// Runs 1-item-prefix jobs on `p` simulated workers, one job per worker per
/// round. With `dynamic`, an idle worker polls the others cyclically (its
/// successor first) and a donor with at least two unstarted jobs yields its
/// last one. A refusal is final: a worker's queue never grows back. Termination
/// is detected with a coloured token travelling 0 → 1 → … → P-1 → 0.
pub fn run_balanced(
    net: &mut SimNet,
    queues: Vec<VecDeque<Item>>,
    dynamic: bool,
    mut job: impl FnMut(usize, Item),
) -> BalanceStats {
    let p = net.p();
    let mut ws: Vec<WorkerState> = queues
        .into_iter()
        .map(|queue| WorkerState {
            queue,
            ..WorkerState::default()
        })
        .collect();
    let mut stats = BalanceStats {
        jobs_per_worker: vec![0; p],
        ..BalanceStats::default()
    };
    let mut token_started = false;
    loop {
        stats.rounds += 1;
        for w in 0..p {
            while let Some((from, msg)) = net.recv(w) {
                match msg {
                    Msg::StealRequest => {
                        // The job about to run next is never given away.
                        let give = if ws[w].queue.len() >= 2 { ws[w].queue.pop_back() } else { None };
                        if give.is_some() {
                            ws[w].black = true;
                            stats.steals += 1;
                        }
                        net.send(w, from, Msg::StealReply(give));
                    }
                    Msg::StealReply(Some(b)) => {
                        ws[w].waiting = false;
                        ws[w].queue.push_back(b);
                    }
                    Msg::StealReply(None) => {
                        ws[w].waiting = false;
                        ws[w].polled += 1;
                    }
                    Msg::Token { black } => ws[w].token = Some(black),
                    m => panic!("worker {w}: unexpected message {m:?}"),
                }
            }
            if let Some(b) = ws[w].queue.pop_front() {
                stats.jobs_per_worker[w] += 1;
                job(w, b);
            } else if !ws[w].waiting && !ws[w].passive {
                if dynamic && p > 1 && ws[w].polled < p - 1 {
                    let victim = (w + 1 + ws[w].polled) % p;
                    net.send(w, victim, Msg::StealRequest);
                    ws[w].waiting = true;
                } else {
                    ws[w].passive = true;
                }
            }
            let idle = ws[w].passive && ws[w].queue.is_empty() && !ws[w].waiting;
            if w == 0 && idle && !token_started {
                token_started = true;
                ws[0].token = Some(false);
                ws[0].black = false;
                if p == 1 {
                    return stats;
                }
                net.send(0, 1 % p, Msg::Token { black: false });
                ws[0].token = None;
                stats.token_passes += 1;
                continue;
            }
            if idle {
                if let Some(black) = ws[w].token.take() {
                    if w == 0 {
                        if !black && !ws[0].black {
                            debug_assert!(net.quiet());
                            return stats;
                        }
                        ws[0].black = false;
                        net.send(0, 1, Msg::Token { black: false });
                    } else {
                        let colour = black || ws[w].black;
                        ws[w].black = false;
                        net.send(w, (w + 1) % p, Msg::Token { black: colour });
                    }
                    stats.token_passes += 1;
                }
            }
        }
        net.rounds += 1;
    }
}
