//! The CON/NON edge game: CON offers an edge, NON either deletes it or
//! explodes it (removing both endpoints and all their neighbors). The value
//! is the number of explosions when the graph empties, or infinity the moment
//! an isolated vertex appears; both players play optimally.

mod interactive;
mod strategy;
mod transcript;

pub use interactive::{interactive_game, HumanSide, InteractiveOutcome};
pub use strategy::{
    con_strategy_play, explore_all_adversaries, Adversary, DeleteUntilForced, OptimalAdversary,
    PublicState, RandomAdversary, ScriptedAdversary,
};
pub use transcript::{
    audit_transcript, AuditCheck, AuditReport, CaseTag, CheckStatus, GameMove, NonMove, Offer,
    Outcome, PosTag, SequenceRecord, SideName, StrategyInfo, Transcript,
};

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};

pub const DEFAULT_PSI_VERTEX_CAP: usize = 12;

/// Value of the game: explosion count, or infinity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum GameValue {
    Finite(u32),
    Infinity,
}

impl GameValue {
    pub fn plus_one(self) -> GameValue {
        match self {
            GameValue::Finite(t) => GameValue::Finite(t + 1),
            GameValue::Infinity => GameValue::Infinity,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, GameValue::Finite(_))
    }
}

impl fmt::Display for GameValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameValue::Finite(t) => write!(f, "{t}"),
            GameValue::Infinity => write!(f, "inf"),
        }
    }
}

/// Exact game solver with a transposition table over (vertex set, edge set)
/// states of one root graph. Entries are write-once; recomputation is
/// idempotent, so independent solvers over the same root agree.
pub struct PsiSolver {
    memo: HashMap<(u128, u128), GameValue>,
    cap: usize,
}

impl PsiSolver {
    pub fn new(cap: usize) -> PsiSolver {
        PsiSolver {
            memo: HashMap::new(),
            cap,
        }
    }

    /// The game value of `g`. States reached from different root graphs must
    /// not share one solver unless they share the edge-slot table.
    pub fn psi(&mut self, g: &Graph) -> Result<GameValue> {
        g.require_simple("psi")?;
        if g.active_count() > self.cap {
            return Err(Error::budget(format!(
                "psi is exact and capped at {} vertices, got {}",
                self.cap,
                g.active_count()
            )));
        }
        if g.edge_slots() > 128 {
            return Err(Error::budget("psi supports at most 128 edge slots"));
        }
        Ok(self.value(g))
    }

    fn value(&mut self, g: &Graph) -> GameValue {
        if g.active_count() == 0 {
            return GameValue::Finite(0);
        }
        if !g.isolated_active_vertices().is_empty() {
            return GameValue::Infinity;
        }
        let key = state_key(g);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let mut best = GameValue::Finite(0);
        for e in g.edge_ids().collect::<Vec<_>>() {
            let deleted = self.value(&g.delete_edge(e).expect("edge present"));
            let exploded = self
                .value(&g.explode_edge(e).expect("edge present"))
                .plus_one();
            best = best.max(deleted.min(exploded));
        }
        self.memo.insert(key, best);
        best
    }
}

fn state_key(g: &Graph) -> (u128, u128) {
    let mut mask = 0u128;
    for e in g.edge_ids() {
        mask |= 1u128 << e;
    }
    (g.active_vertices().0, mask)
}

/// NON's optimal reply to an offer of edge `e` in `g`: delete when the
/// deletion value is no worse, explode otherwise (deletion wins ties, which
/// keeps transcripts reproducible).
pub fn non_best_response(solver: &mut PsiSolver, g: &Graph, e: EdgeId) -> Result<NonMove> {
    let deleted = solver.psi(&g.delete_edge(e)?)?;
    let exploded = solver.psi(&g.explode_edge(e)?)?.plus_one();
    Ok(if deleted <= exploded {
        NonMove::Delete
    } else {
        NonMove::Explode
    })
}

/// CON's optimal offer: the edge maximizing NON's best reply value, lowest
/// edge id on ties. `None` when the graph has no edges.
pub fn con_best_offer(solver: &mut PsiSolver, g: &Graph) -> Result<Option<(EdgeId, GameValue)>> {
    let mut best: Option<(EdgeId, GameValue)> = None;
    for e in g.edge_ids().collect::<Vec<_>>() {
        let deleted = solver.psi(&g.delete_edge(e)?)?;
        let exploded = solver.psi(&g.explode_edge(e)?)?.plus_one();
        let value = deleted.min(exploded);
        if best.as_ref().is_none_or(|&(_, v)| value > v) {
            best = Some((e, value));
        }
    }
    Ok(best)
}
