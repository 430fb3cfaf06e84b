use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::itemset::{Item, Itemset, Transaction};
use crate::scheduler::PbecPlan;

#[derive(Clone, Debug)]
pub enum Msg {
    Transactions(Vec<Transaction>),
    Counts(Vec<u64>),
    Itemsets(Vec<Itemset>),
    Weight(f64),
    Plan(Box<PbecPlan>),
    StealRequest,
    StealReply(Option<Item>),
    Token { black: bool },
}

impl Msg {
    /// Payload size estimate: 8 bytes per integer, plus an 8-byte header.
    pub fn bytes(&self) -> u64 {
        8 + match self {
            Msg::Transactions(ts) => ts.iter().map(|t| 8 * (t.items.len() as u64 + 2)).sum(),
            Msg::Counts(c) => 8 * c.len() as u64,
            Msg::Itemsets(v) => v.iter().map(|u| 8 * (u.len() as u64 + 1)).sum(),
            Msg::Weight(_) => 8,
            Msg::Plan(p) => {
                let pbecs: u64 = p.pbecs.iter().map(|b| 8 * (b.prefix.len() + b.extensions.len() + 3) as u64).sum();
                let internal: u64 = p.internal_prefixes.iter().map(|u| 8 * (u.len() as u64 + 1)).sum();
                pbecs + internal + 8 * p.pbecs.len() as u64
            }
            Msg::StealRequest => 0,
            Msg::StealReply(_) => 8,
            Msg::Token { .. } => 8,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetCounters {
    pub messages_sent: Vec<u64>,
    pub messages_received: Vec<u64>,
    pub bytes_sent: Vec<u64>,
}

impl NetCounters {
    pub fn total_messages(&self) -> u64 {
        self.messages_sent.iter().sum()
    }

    pub fn total_bytes(&self) -> u64 {
        self.bytes_sent.iter().sum()
    }
}

/// Per-worker FIFO inboxes with message and byte accounting. Workers only
/// interact through `send` and `recv`.
#[derive(Debug)]
pub struct SimNet {
    inboxes: Vec<VecDeque<(usize, Msg)>>,
    pub counters: NetCounters,
    pub rounds: u64,
}

impl SimNet {
    pub fn new(p: usize) -> Self {
        SimNet {
            inboxes: vec![VecDeque::new(); p],
            counters: NetCounters {
                messages_sent: vec![0; p],
                messages_received: vec![0; p],
                bytes_sent: vec![0; p],
            },
            rounds: 0,
        }
    }

    pub fn p(&self) -> usize {
        self.inboxes.len()
    }

    pub fn send(&mut self, from: usize, to: usize, msg: Msg) {
        self.counters.messages_sent[from] += 1;
        self.counters.bytes_sent[from] += msg.bytes();
        self.inboxes[to].push_back((from, msg));
    }

    pub fn recv(&mut self, to: usize) -> Option<(usize, Msg)> {
        let m = self.inboxes[to].pop_front();
        if m.is_some() {
            self.counters.messages_received[to] += 1;
        }
        m
    }

    /// Receives the next message, which the protocol guarantees is present.
    pub fn expect(&mut self, to: usize) -> (usize, Msg) {
        self.recv(to)
            .unwrap_or_else(|| panic!("worker {to}: expected a message, inbox empty"))
    }

    pub fn quiet(&self) -> bool {
        self.inboxes.iter().all(|q| q.is_empty())
    }
}
