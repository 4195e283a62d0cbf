//! Extensive-form game model and structural validation.
//!
//! Games are stored as an arena of nodes indexed by `usize`. Decision nodes
//! carry the acting player and an information-set id (a string, unique per
//! player); chance nodes carry outcome probabilities; leaves carry one payoff
//! per strategic player.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod json;
pub mod seqform;

pub use seqform::{PurePlan, RealizationPlan, SequenceForm};

/// Tolerance for chance probabilities summing to one.
pub const CHANCE_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("invalid game: {0}")]
    Invalid(String),
    #[error("unknown node id {0}")]
    UnknownNode(u64),
    #[error("duplicate node id {0}")]
    DuplicateNode(u64),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("plan references unknown infoset `{0}`")]
    UnknownInfoset(String),
    #[error("plan references unknown action `{action}` at infoset `{infoset}`")]
    UnknownAction { infoset: String, action: String },
    #[error("plan missing an action for reachable infoset `{0}`")]
    MissingAction(String),
}

/// An outgoing edge of a decision or chance node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Action {
    pub label: String,
    pub child: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Decision {
        player: usize,
        infoset: String,
        actions: Vec<Action>,
    },
    Chance {
        actions: Vec<Action>,
        probs: Vec<f64>,
    },
    Leaf {
        payoffs: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
}

impl Node {
    pub fn decision(player: usize, infoset: impl Into<String>, actions: Vec<Action>) -> Self {
        Node {
            kind: NodeKind::Decision {
                player,
                infoset: infoset.into(),
                actions,
            },
        }
    }

    pub fn chance(actions: Vec<Action>, probs: Vec<f64>) -> Self {
        Node {
            kind: NodeKind::Chance { actions, probs },
        }
    }

    pub fn leaf(payoffs: Vec<f64>) -> Self {
        Node {
            kind: NodeKind::Leaf { payoffs },
        }
    }

    pub fn actions(&self) -> &[Action] {
        match &self.kind {
            NodeKind::Decision { actions, .. } | NodeKind::Chance { actions, .. } => actions,
            NodeKind::Leaf { .. } => &[],
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf { .. })
    }
}

/// An extensive-form game: a tree of decision/chance/leaf nodes with
/// `players` strategic players (chance excluded).
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensiveFormGame {
    pub players: usize,
    pub root: usize,
    pub nodes: Vec<Node>,
}

/// One structural violation found by [`validate_game`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub code: &'static str,
    pub message: String,
}

/// Outcome of [`validate_game`]; empty iff the game is well-formed.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, code: &'static str, message: String) {
        self.violations.push(Violation { code, message });
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            write!(f, "valid")
        } else {
            for v in &self.violations {
                writeln!(f, "{}: {}", v.code, v.message)?;
            }
            Ok(())
        }
    }
}

impl ExtensiveFormGame {
    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    /// Leaf node ids in depth-first preorder (the canonical leaf indexing).
    pub fn leaf_ids(&self) -> Vec<usize> {
        let mut leaves = Vec::new();
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id];
            if node.is_leaf() {
                leaves.push(id);
            } else {
                for action in node.actions().iter().rev() {
                    stack.push(action.child);
                }
            }
        }
        leaves
    }

    pub fn num_leaves(&self) -> usize {
        self.leaf_ids().len()
    }
}

/// Checks every structural invariant and reports all violations.
///
/// Total: never fails, never panics on a structurally connected arena.
/// Downstream operations (sequence form, generators' output contracts)
/// require an empty report.
pub fn validate_game(game: &ExtensiveFormGame) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n_nodes = game.nodes.len();

    if game.players < 2 {
        report.push("players", format!("need at least 2 players, got {}", game.players));
    }
    if game.root >= n_nodes {
        report.push("root", format!("root id {} out of range", game.root));
        return report;
    }

    // Tree shape: every reachable non-root node has exactly one parent, no cycles.
    let mut parent_count = vec![0usize; n_nodes];
    let mut visited = vec![false; n_nodes];
    // Stack entries: (node, per-player (infoset, action-index) history).
    let mut stack: Vec<(usize, Vec<Vec<(String, usize)>>)> =
        vec![(game.root, vec![Vec::new(); game.players])];
    // First-seen own-history per (player, infoset id), for perfect recall.
    let mut recall: std::collections::BTreeMap<(usize, String), Vec<(String, usize)>> =
        std::collections::BTreeMap::new();
    // First-seen (player, action labels) per infoset id, for consistency.
    let mut infoset_shape: std::collections::BTreeMap<(usize, String), Vec<String>> =
        std::collections::BTreeMap::new();

    while let Some((id, hist)) = stack.pop() {
        if visited[id] {
            // Revisit means a node has two parents or the graph has a cycle.
            report.push("tree", format!("node {id} reached more than once (shared child or cycle)"));
            continue;
        }
        visited[id] = true;
        let node = &game.nodes[id];
        match &node.kind {
            NodeKind::Leaf { payoffs } => {
                if payoffs.len() != game.players {
                    report.push(
                        "payoffs",
                        format!("leaf {id} has {} payoffs, expected {}", payoffs.len(), game.players),
                    );
                }
            }
            NodeKind::Chance { actions, probs } => {
                if actions.is_empty() {
                    report.push("actions", format!("chance node {id} has no actions"));
                }
                if probs.len() != actions.len() {
                    report.push(
                        "chance",
                        format!("chance node {id} has {} probs for {} actions", probs.len(), actions.len()),
                    );
                } else {
                    if probs.iter().any(|p| *p < 0.0) {
                        report.push("chance", format!("chance node {id} has a negative probability"));
                    }
                    let sum: f64 = probs.iter().sum();
                    if (sum - 1.0).abs() > CHANCE_SUM_TOL {
                        report.push("chance", format!("chance node {id} probabilities sum to {sum}"));
                    }
                }
            }
            NodeKind::Decision { player, infoset, actions } => {
                if *player >= game.players {
                    report.push("player", format!("node {id} acted by unknown player {player}"));
                }
                if actions.is_empty() {
                    report.push("actions", format!("decision node {id} has no actions"));
                }
                let labels: Vec<String> = actions.iter().map(|a| a.label.clone()).collect();
                {
                    let mut sorted = labels.clone();
                    sorted.sort();
                    sorted.dedup();
                    if sorted.len() != labels.len() {
                        report.push("actions", format!("node {id} has duplicate action labels"));
                    }
                }
                let key = (*player, infoset.clone());
                match infoset_shape.get(&key) {
                    None => {
                        infoset_shape.insert(key.clone(), labels);
                    }
                    Some(first) => {
                        if *first != labels {
                            report.push(
                                "infoset",
                                format!("infoset `{infoset}` of player {player} has mismatched action lists"),
                            );
                        }
                    }
                }
                if *player < game.players {
                    let own = hist[*player].clone();
                    match recall.get(&key) {
                        None => {
                            recall.insert(key, own);
                        }
                        Some(first) => {
                            if *first != own {
                                report.push(
                                    "recall",
                                    format!(
                                        "infoset `{infoset}` of player {player} violates perfect recall"
                                    ),
                                );
                            }
                        }
                    }
                }
            }
        }
        for (a_idx, action) in node.actions().iter().enumerate() {
            if action.child >= n_nodes {
                report.push("child", format!("node {id} action `{}` points at unknown node", action.label));
                continue;
            }
            parent_count[action.child] += 1;
            if parent_count[action.child] > 1 {
                // Reported as a revisit when popped; nothing more to do here.
            }
            let mut child_hist = hist.clone();
            if let NodeKind::Decision { player, infoset, .. } = &node.kind {
                if *player < game.players {
                    child_hist[*player].push((infoset.clone(), a_idx));
                }
            }
            if !visited[action.child] {
                stack.push((action.child, child_hist));
            } else {
                report.push("tree", format!("node {} reached more than once (shared child or cycle)", action.child));
            }
        }
    }

    for (id, seen) in visited.iter().enumerate() {
        if !seen {
            report.push("unreachable", format!("node {id} is not reachable from the root"));
        }
    }
    if parent_count[game.root] > 0 {
        report.push("tree", format!("root node {} has a parent", game.root));
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_leaf() -> ExtensiveFormGame {
        ExtensiveFormGame {
            players: 2,
            root: 0,
            nodes: vec![Node::leaf(vec![1.0, 2.0])],
        }
    }

    #[test]
    fn single_leaf_game_is_valid() {
        assert!(validate_game(&single_leaf()).is_valid());
    }

    #[test]
    fn infoset_action_mismatch_is_flagged() {
        // Two nodes in P2's infoset with different action counts.
        let game = ExtensiveFormGame {
            players: 2,
            root: 0,
            nodes: vec![
                Node::decision(
                    0,
                    "h1",
                    vec![
                        Action { label: "L".into(), child: 1 },
                        Action { label: "R".into(), child: 2 },
                    ],
                ),
                Node::decision(
                    1,
                    "h2",
                    vec![
                        Action { label: "a".into(), child: 3 },
                        Action { label: "b".into(), child: 4 },
                    ],
                ),
                Node::decision(1, "h2", vec![Action { label: "a".into(), child: 5 }]),
                Node::leaf(vec![0.0, 0.0]),
                Node::leaf(vec![0.0, 0.0]),
                Node::leaf(vec![0.0, 0.0]),
            ],
        };
        let report = validate_game(&game);
        assert!(report.violations.iter().any(|v| v.code == "infoset"), "{report}");
    }

    #[test]
    fn cycle_is_flagged() {
        let game = ExtensiveFormGame {
            players: 2,
            root: 0,
            nodes: vec![
                Node::decision(0, "h", vec![Action { label: "a".into(), child: 1 }]),
                Node::decision(1, "g", vec![Action { label: "b".into(), child: 0 }]),
            ],
        };
        assert!(!validate_game(&game).is_valid());
    }

    #[test]
    fn bad_chance_probabilities_are_flagged() {
        let game = ExtensiveFormGame {
            players: 2,
            root: 0,
            nodes: vec![
                Node::chance(
                    vec![
                        Action { label: "x".into(), child: 1 },
                        Action { label: "y".into(), child: 2 },
                    ],
                    vec![0.7, 0.7],
                ),
                Node::leaf(vec![0.0, 0.0]),
                Node::leaf(vec![0.0, 0.0]),
            ],
        };
        let report = validate_game(&game);
        assert!(report.violations.iter().any(|v| v.code == "chance"));
    }

    #[test]
    fn imperfect_recall_is_flagged() {
        // P1 moves, then P1 moves again but forgets its own first move.
        let game = ExtensiveFormGame {
            players: 2,
            root: 0,
            nodes: vec![
                Node::decision(
                    0,
                    "first",
                    vec![
                        Action { label: "L".into(), child: 1 },
                        Action { label: "R".into(), child: 2 },
                    ],
                ),
                Node::decision(
                    0,
                    "second",
                    vec![
                        Action { label: "l".into(), child: 3 },
                        Action { label: "r".into(), child: 4 },
                    ],
                ),
                Node::decision(
                    0,
                    "second",
                    vec![
                        Action { label: "l".into(), child: 5 },
                        Action { label: "r".into(), child: 6 },
                    ],
                ),
                Node::leaf(vec![0.0, 0.0]),
                Node::leaf(vec![0.0, 0.0]),
                Node::leaf(vec![0.0, 0.0]),
                Node::leaf(vec![0.0, 0.0]),
            ],
        };
        let report = validate_game(&game);
        assert!(report.violations.iter().any(|v| v.code == "recall"), "{report}");
    }
}
