//! Game JSON schema.
//!
//! ```json
//! {"players": 2, "root": 0, "nodes": [
//!   {"id": 0, "kind": "decision", "player": 0, "infoset": "h", "actions": [{"label": "H", "child": 1}, ...]},
//!   {"id": 3, "kind": "chance", "actions": [...], "probs": [0.5, 0.5]},
//!   {"id": 1, "kind": "leaf", "payoffs": [1, -1]}
//! ]}
//! ```
//!
//! Node ids may be arbitrary (they are remapped to array positions on read);
//! emitted files use positional ids. Players are 0-based. Payoffs and
//! probabilities accept either JSON numbers or decimal strings such as "0.5".

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Action, ExtensiveFormGame, GameError, Node, NodeKind};

/// A real number that tolerates decimal-string encodings on input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Real(pub f64);

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::Num(x) => Ok(Real(x)),
            Raw::Text(s) => s
                .trim()
                .parse::<f64>()
                .map(Real)
                .map_err(|_| serde::de::Error::custom(format!("not a decimal number: `{s}`"))),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ActionJson {
    label: String,
    child: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeJson {
    id: u64,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    player: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    infoset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    actions: Option<Vec<ActionJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    probs: Option<Vec<Real>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    payoffs: Option<Vec<Real>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GameJson {
    players: usize,
    root: u64,
    nodes: Vec<NodeJson>,
}

/// Parses a game from its JSON encoding. Structural invariants beyond the
/// schema itself (tree shape, recall, probabilities) are checked separately
/// by [`super::validate_game`].
pub fn game_from_json(text: &str) -> Result<ExtensiveFormGame, GameError> {
    let raw: GameJson = serde_json::from_str(text)?;
    let mut index: HashMap<u64, usize> = HashMap::with_capacity(raw.nodes.len());
    for (pos, node) in raw.nodes.iter().enumerate() {
        if index.insert(node.id, pos).is_some() {
            return Err(GameError::DuplicateNode(node.id));
        }
    }
    let resolve = |id: u64| index.get(&id).copied().ok_or(GameError::UnknownNode(id));

    let mut nodes = Vec::with_capacity(raw.nodes.len());
    for node in &raw.nodes {
        let actions = |list: &Option<Vec<ActionJson>>| -> Result<Vec<Action>, GameError> {
            list.as_deref()
                .unwrap_or(&[])
                .iter()
                .map(|a| {
                    Ok(Action {
                        label: a.label.clone(),
                        child: resolve(a.child)?,
                    })
                })
                .collect()
        };
        let kind = match node.kind.as_str() {
            "decision" => NodeKind::Decision {
                player: node
                    .player
                    .ok_or_else(|| GameError::Invalid(format!("decision node {} lacks a player", node.id)))?,
                infoset: node
                    .infoset
                    .clone()
                    .ok_or_else(|| GameError::Invalid(format!("decision node {} lacks an infoset", node.id)))?,
                actions: actions(&node.actions)?,
            },
            "chance" => NodeKind::Chance {
                actions: actions(&node.actions)?,
                probs: node.probs.as_deref().unwrap_or(&[]).iter().map(|r| r.0).collect(),
            },
            "leaf" => NodeKind::Leaf {
                payoffs: node.payoffs.as_deref().unwrap_or(&[]).iter().map(|r| r.0).collect(),
            },
            other => {
                return Err(GameError::Invalid(format!("node {} has unknown kind `{other}`", node.id)))
            }
        };
        nodes.push(Node { kind });
    }

    Ok(ExtensiveFormGame {
        players: raw.players,
        root: resolve(raw.root)?,
        nodes,
    })
}

/// Serializes a game in the schema above with positional node ids.
/// Deterministic: identical games yield byte-identical text.
pub fn game_to_json(game: &ExtensiveFormGame) -> String {
    let nodes = game
        .nodes
        .iter()
        .enumerate()
        .map(|(id, node)| {
            let actions = |list: &[Action]| {
                Some(
                    list.iter()
                        .map(|a| ActionJson {
                            label: a.label.clone(),
                            child: a.child as u64,
                        })
                        .collect(),
                )
            };
            match &node.kind {
                NodeKind::Decision { player, infoset, actions: acts } => NodeJson {
                    id: id as u64,
                    kind: "decision".into(),
                    player: Some(*player),
                    infoset: Some(infoset.clone()),
                    actions: actions(acts),
                    probs: None,
                    payoffs: None,
                },
                NodeKind::Chance { actions: acts, probs } => NodeJson {
                    id: id as u64,
                    kind: "chance".into(),
                    player: None,
                    infoset: None,
                    actions: actions(acts),
                    probs: Some(probs.iter().map(|p| Real(*p)).collect()),
                    payoffs: None,
                },
                NodeKind::Leaf { payoffs } => NodeJson {
                    id: id as u64,
                    kind: "leaf".into(),
                    player: None,
                    infoset: None,
                    actions: None,
                    probs: None,
                    payoffs: Some(payoffs.iter().map(|p| Real(*p)).collect()),
                },
            }
        })
        .collect();
    let out = GameJson {
        players: game.players,
        root: game.root as u64,
        nodes,
    };
    serde_json::to_string_pretty(&out).expect("game serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efg::validate_game;

    #[test]
    fn round_trip_preserves_game() {
        let game = ExtensiveFormGame {
            players: 2,
            root: 0,
            nodes: vec![
                Node::chance(
                    vec![
                        Action { label: "x".into(), child: 1 },
                        Action { label: "y".into(), child: 2 },
                    ],
                    vec![0.25, 0.75],
                ),
                Node::leaf(vec![1.0, -1.0]),
                Node::decision(
                    1,
                    "h",
                    vec![
                        Action { label: "a".into(), child: 3 },
                        Action { label: "b".into(), child: 4 },
                    ],
                ),
                Node::leaf(vec![0.5, 0.5]),
                Node::leaf(vec![-2.0, 3.0]),
            ],
        };
        let text = game_to_json(&game);
        let back = game_from_json(&text).unwrap();
        assert_eq!(game, back);
        assert!(validate_game(&back).is_valid());
    }

    #[test]
    fn decimal_string_payoffs_parse() {
        let text = r#"{"players": 2, "root": 0, "nodes": [
            {"id": 0, "kind": "leaf", "payoffs": ["0.5", -1]}
        ]}"#;
        let game = game_from_json(text).unwrap();
        match &game.nodes[0].kind {
            NodeKind::Leaf { payoffs } => assert_eq!(payoffs, &vec![0.5, -1.0]),
            _ => panic!(),
        }
    }

    #[test]
    fn unknown_child_is_rejected() {
        let text = r#"{"players": 2, "root": 0, "nodes": [
            {"id": 0, "kind": "decision", "player": 0, "infoset": "h",
             "actions": [{"label": "a", "child": 99}]}
        ]}"#;
        assert!(game_from_json(text).is_err());
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let text = r#"{"players": 2, "root": 7, "nodes": [
            {"id": 7, "kind": "leaf", "payoffs": [0, 0]},
            {"id": 7, "kind": "leaf", "payoffs": [1, 1]}
        ]}"#;
        assert!(matches!(game_from_json(text), Err(GameError::DuplicateNode(7))));
    }
}
