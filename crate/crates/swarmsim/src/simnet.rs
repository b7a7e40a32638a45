//! Deterministic synchronous-round message passing.
//!
//! Every distributed algorithm in this crate exchanges state through this
//! harness: agents enqueue payloads for their communication-graph neighbors
//! during an open round, every agent seals, the round advances, and inboxes
//! become readable. Sending across a non-edge is an error, so communication
//! locality is enforced mechanically rather than by convention.
//!
//! Delivery order inside an inbox is sorted by source id, which makes a full
//! run transcript a pure function of (scenario, seed).

use crate::graph::WeightedGraph;
use crate::numerics::Vec3;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NetError {
    #[error("agent {src} attempted to send to non-neighbor {dst}")]
    NotANeighbor { src: usize, dst: usize },
    #[error("agent id {0} out of range")]
    BadAgent(usize),
    #[error("round already advanced; agent {0} has not sealed")]
    Unsealed(usize),
}

/// Message payloads exchanged by the distributed modules.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Payload {
    /// Position/velocity estimate plus scale estimate of the sender.
    StateEstimate {
        pos: [f64; 3],
        vel: [f64; 3],
        scale: f64,
    },
    /// Scale estimate alone.
    ScaleEstimate(f64),
    /// A trajectory block: accelerations of `origin`'s trajectory as known
    /// to the sender, tagged with a version counter for most-updated-copy
    /// relaying.
    TrajectoryBlock {
        origin: usize,
        version: u64,
        accel: Vec<[f64; 3]>,
    },
    /// Preprocessed relative measurement of `target` taken by the sender.
    Measurement { target: usize, value: [f64; 3] },
}

impl Payload {
    pub fn state_estimate(pos: Vec3, vel: Vec3, scale: f64) -> Self {
        Payload::StateEstimate {
            pos: [pos.x, pos.y, pos.z],
            vel: [vel.x, vel.y, vel.z],
            scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Message {
    pub src: usize,
    pub dst: usize,
    pub round: u64,
    pub payload: Payload,
}

/// Synchronous round buffers over a fixed communication graph.
#[derive(Debug)]
pub struct SimNet {
    neighbors: Vec<Vec<usize>>,
    round: u64,
    outbox: Vec<Vec<Message>>,
    inbox: Vec<Vec<Message>>,
    sealed: Vec<bool>,
    transcript: Option<Vec<Message>>,
}

impl SimNet {
    pub fn new(g_comm: &WeightedGraph) -> Self {
        let n = g_comm.node_count();
        let neighbors = (0..n).map(|i| g_comm.neighbors(i)).collect();
        Self {
            neighbors,
            round: 0,
            outbox: vec![Vec::new(); n],
            inbox: vec![Vec::new(); n],
            sealed: vec![false; n],
            transcript: None,
        }
    }

    /// Records every delivered message for debugging dumps.
    pub fn with_transcript(mut self) -> Self {
        self.transcript = Some(Vec::new());
        self
    }

    pub fn n_agents(&self) -> usize {
        self.neighbors.len()
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// Enqueues `payload` to every neighbor of `agent` for the next round.
    pub fn broadcast_to_neighbors(
        &mut self,
        agent: usize,
        payload: &Payload,
    ) -> Result<(), NetError> {
        if agent >= self.n_agents() {
            return Err(NetError::BadAgent(agent));
        }
        let targets = self.neighbors[agent].clone();
        for dst in targets {
            self.send(agent, dst, payload.clone())?;
        }
        Ok(())
    }

    /// Point-to-point send, restricted to communication-graph edges.
    pub fn send(&mut self, src: usize, dst: usize, payload: Payload) -> Result<(), NetError> {
        if src >= self.n_agents() {
            return Err(NetError::BadAgent(src));
        }
        if dst >= self.n_agents() {
            return Err(NetError::BadAgent(dst));
        }
        if !self.neighbors[src].contains(&dst) {
            return Err(NetError::NotANeighbor { src, dst });
        }
        self.outbox[src].push(Message {
            src,
            dst,
            round: self.round,
            payload,
        });
        Ok(())
    }

    /// Marks an agent done with the current round.
    pub fn seal(&mut self, agent: usize) -> Result<(), NetError> {
        if agent >= self.n_agents() {
            return Err(NetError::BadAgent(agent));
        }
        self.sealed[agent] = true;
        Ok(())
    }

    pub fn seal_all(&mut self) {
        self.sealed.iter_mut().for_each(|s| *s = true);
    }

    /// Delivers all sealed outboxes: inboxes for the new round become
    /// readable, ordered by source id. Errors if any agent has not sealed.
    pub fn advance_round(&mut self) -> Result<u64, NetError> {
        if let Some(unsealed) = self.sealed.iter().position(|&s| !s) {
            return Err(NetError::Unsealed(unsealed));
        }
        let n = self.n_agents();
        let mut fresh: Vec<Vec<Message>> = vec![Vec::new(); n];
        for agent_out in &mut self.outbox {
            for msg in agent_out.drain(..) {
                fresh[msg.dst].push(msg);
            }
        }
        for inbox in &mut fresh {
            inbox.sort_by_key(|m| m.src);
        }
        if let Some(t) = &mut self.transcript {
            for inbox in &fresh {
                t.extend(inbox.iter().cloned());
            }
        }
        self.inbox = fresh;
        self.sealed.iter_mut().for_each(|s| *s = false);
        self.round += 1;
        Ok(self.round)
    }

    /// Messages delivered to `agent` in the current round.
    pub fn inbox(&self, agent: usize) -> &[Message] {
        &self.inbox[agent]
    }

    pub fn transcript(&self) -> Option<&[Message]> {
        self.transcript.as_deref()
    }

    /// JSON-lines dump of the transcript, one message per line.
    pub fn transcript_jsonl(&self) -> String {
        let mut out = String::new();
        if let Some(t) = &self.transcript {
            for m in t {
                out.push_str(&serde_json::to_string(m).expect("message serializes"));
                out.push('\n');
            }
        }
        out
    }
}
