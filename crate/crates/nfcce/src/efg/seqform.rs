//! Sequence-form compilation: per-player sequence sets, flow constraints,
//! chance-marginalized sparse utilities, and pure/mixed realization plans.
//!
//! Sequence indices are deterministic: depth-first preorder over the tree,
//! actions in declared order, the empty sequence always at index 0. The flow
//! system `F_i r = f_i` has `1 + |H_i|` rows; row 0 pins the empty sequence
//! to 1 and row `1 + h` encodes `-r(q_h) + sum_a r(q_h a) = 0`.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{validate_game, ExtensiveFormGame, GameError, NodeKind};

/// Componentwise tolerance below which a realization value counts as zero.
pub const PLAN_ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("player {0} out of range")]
    BadPlayer(usize),
    #[error("infoset index {0} out of range")]
    BadInfoset(usize),
    #[error("action {action} out of range at infoset {infoset}")]
    BadAction { infoset: usize, action: usize },
    #[error("plan missing an action for reachable infoset {0}")]
    MissingAction(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("empty mixture")]
    EmptyMixture,
    #[error("mixture weights invalid: {0}")]
    BadWeights(String),
    #[error("no playable action at infoset {0} (empty support)")]
    EmptySupport(usize),
}

/// One sequence of a player: the empty sequence (index 0) or an
/// (infoset, action) extension of `parent_seq`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqInfo {
    pub parent_infoset: Option<usize>,
    pub action: usize,
    /// The player's previous sequence (0 for extensions of the empty one).
    pub parent_seq: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfosetInfo {
    pub id: String,
    /// The player's own sequence leading to this infoset.
    pub parent_seq: usize,
    pub actions: Vec<String>,
    /// Sequences of this infoset occupy `seq_start..seq_start + actions.len()`.
    pub seq_start: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlayerSequences {
    pub player: usize,
    pub infosets: Vec<InfosetInfo>,
    pub seqs: Vec<SeqInfo>,
    /// Per sequence: leads to some leaf (member of the terminal set).
    pub is_terminal: Vec<bool>,
    /// Per sequence: infosets whose parent sequence it is, ascending.
    pub infosets_after: Vec<Vec<usize>>,
    pub infoset_index: BTreeMap<String, usize>,
}

impl PlayerSequences {
    pub fn num_seqs(&self) -> usize {
        self.seqs.len()
    }

    pub fn num_infosets(&self) -> usize {
        self.infosets.len()
    }

    pub fn num_flow_rows(&self) -> usize {
        1 + self.infosets.len()
    }

    pub fn seq_of(&self, infoset: usize, action: usize) -> usize {
        self.infosets[infoset].seq_start + action
    }

    /// Row `k` of the flow matrix as sparse (column, coefficient) pairs.
    pub fn flow_row(&self, k: usize) -> Vec<(usize, f64)> {
        if k == 0 {
            return vec![(0, 1.0)];
        }
        let h = &self.infosets[k - 1];
        let mut row = Vec::with_capacity(1 + h.actions.len());
        row.push((h.parent_seq, -1.0));
        for a in 0..h.actions.len() {
            row.push((h.seq_start + a, 1.0));
        }
        row
    }

    /// Column `q` of the flow matrix as sparse (row, coefficient) pairs.
    pub fn flow_col(&self, q: usize) -> Vec<(usize, f64)> {
        let mut col = Vec::new();
        if q == 0 {
            col.push((0, 1.0));
        } else {
            let seq = &self.seqs[q];
            col.push((1 + seq.parent_infoset.unwrap(), 1.0));
        }
        for &h in &self.infosets_after[q] {
            col.push((1 + h, -1.0));
        }
        col
    }

    /// `max_k |F_i r - f_i|_k`.
    pub fn flow_residual(&self, r: &[f64]) -> f64 {
        let mut worst = (r[0] - 1.0).abs();
        for (h, info) in self.infosets.iter().enumerate() {
            let mut acc = -r[info.parent_seq];
            for a in 0..info.actions.len() {
                acc += r[self.seq_of(h, a)];
            }
            let _ = h;
            worst = worst.max(acc.abs());
        }
        worst
    }

    /// Ancestor chain of `q` including itself and the empty sequence.
    pub fn prefix_chain(&self, q: usize) -> Vec<usize> {
        let mut chain = vec![q];
        let mut cur = q;
        while cur != 0 {
            cur = self.seqs[cur].parent_seq;
            chain.push(cur);
        }
        chain.reverse();
        chain
    }

    /// The (infoset, action) pairs along sequence `q`, root-first.
    pub fn forced_choices(&self, q: usize) -> BTreeMap<usize, usize> {
        let mut forced = BTreeMap::new();
        let mut cur = q;
        while cur != 0 {
            let seq = &self.seqs[cur];
            forced.insert(seq.parent_infoset.unwrap(), seq.action);
            cur = seq.parent_seq;
        }
        forced
    }
}

/// Chance treated as a non-strategic player: one "infoset" per chance node,
/// realization probabilities fixed by the game.
#[derive(Debug, Clone, PartialEq)]
pub struct ChanceSequences {
    /// Index 0 is the empty chance sequence with realization 1.
    pub realization: Vec<f64>,
    pub parent_seq: Vec<usize>,
    /// Terminal chance sequences, ascending.
    pub terminal: Vec<usize>,
}

impl ChanceSequences {
    pub fn num_seqs(&self) -> usize {
        self.realization.len()
    }
}

/// Per-leaf bookkeeping: the sequence profile and chance weight.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafInfo {
    /// Node id in the game arena.
    pub node: usize,
    /// Player i's sequence at this leaf.
    pub seq: Vec<usize>,
    pub chance_seq: usize,
    /// Realization probability of the chance sequence (1 when no chance).
    pub chance_prob: f64,
    pub payoffs: Vec<f64>,
}

/// Sparse utilities over terminal sequence profiles, marginalized over
/// chance: `values[k][i] = U_i(profile k)` summed over chance paths weighted
/// by their realization probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityTensor {
    pub profiles: Vec<Vec<usize>>,
    pub values: Vec<Vec<f64>>,
}

impl UtilityTensor {
    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceForm {
    pub num_players: usize,
    pub players: Vec<PlayerSequences>,
    pub chance: Option<ChanceSequences>,
    /// Leaves in depth-first preorder; the canonical leaf indexing.
    pub leaves: Vec<LeafInfo>,
    pub utility: UtilityTensor,
}

impl SequenceForm {
    pub fn num_leaves(&self) -> usize {
        self.leaves.len()
    }

    /// Total sequences across players, the paper's "cumulative sequences".
    pub fn total_seqs(&self) -> usize {
        self.players.iter().map(|p| p.num_seqs()).sum()
    }
}

/// Compiles a validated game into sequence form.
pub fn build_sequence_form(game: &ExtensiveFormGame) -> Result<SequenceForm, GameError> {
    let report = validate_game(game);
    if !report.is_valid() {
        return Err(GameError::Invalid(report.to_string()));
    }

    let n = game.players;
    let mut players: Vec<PlayerSequences> = (0..n)
        .map(|player| PlayerSequences {
            player,
            infosets: Vec::new(),
            seqs: vec![SeqInfo { parent_infoset: None, action: 0, parent_seq: 0 }],
            is_terminal: Vec::new(),
            infosets_after: Vec::new(),
            infoset_index: BTreeMap::new(),
        })
        .collect();
    let mut chance_realization = vec![1.0];
    let mut chance_parent = vec![0usize];
    let mut chance_terminal: Vec<usize> = Vec::new();
    let mut saw_chance = false;
    let mut leaves: Vec<LeafInfo> = Vec::new();
    let mut tensor: BTreeMap<Vec<usize>, Vec<f64>> = BTreeMap::new();

    // Depth-first preorder; each frame carries the current sequence profile.
    struct Frame {
        node: usize,
        seqs: Vec<usize>,
        chance_seq: usize,
    }
    let mut stack = vec![Frame { node: game.root, seqs: vec![0; n], chance_seq: 0 }];
    while let Some(frame) = stack.pop() {
        let node = &game.nodes[frame.node];
        match &node.kind {
            NodeKind::Leaf { payoffs } => {
                let entry = tensor
                    .entry(frame.seqs.clone())
                    .or_insert_with(|| vec![0.0; n]);
                let weight = chance_realization[frame.chance_seq];
                for i in 0..n {
                    entry[i] += weight * payoffs[i];
                }
                for i in 0..n {
                    let q = frame.seqs[i];
                    if let Some(flag) = players[i].is_terminal.get_mut(q) {
                        *flag = true;
                    }
                }
                if saw_chance {
                    chance_terminal.push(frame.chance_seq);
                }
                leaves.push(LeafInfo {
                    node: frame.node,
                    seq: frame.seqs.clone(),
                    chance_seq: frame.chance_seq,
                    chance_prob: weight,
                    payoffs: payoffs.clone(),
                });
            }
            NodeKind::Chance { actions, probs } => {
                saw_chance = true;
                let base = chance_realization.len();
                for prob in probs {
                    chance_realization.push(chance_realization[frame.chance_seq] * prob);
                    chance_parent.push(frame.chance_seq);
                }
                for (a, action) in actions.iter().enumerate().rev() {
                    stack.push(Frame {
                        node: action.child,
                        seqs: frame.seqs.clone(),
                        chance_seq: base + a,
                    });
                }
            }
            NodeKind::Decision { player, infoset, actions } => {
                let ps = &mut players[*player];
                let h = match ps.infoset_index.get(infoset) {
                    Some(&h) => h,
                    None => {
                        let h = ps.infosets.len();
                        ps.infosets.push(InfosetInfo {
                            id: infoset.clone(),
                            parent_seq: frame.seqs[*player],
                            actions: actions.iter().map(|a| a.label.clone()).collect(),
                            seq_start: ps.seqs.len(),
                        });
                        ps.infoset_index.insert(infoset.clone(), h);
                        for a in 0..actions.len() {
                            ps.seqs.push(SeqInfo {
                                parent_infoset: Some(h),
                                action: a,
                                parent_seq: frame.seqs[*player],
                            });
                        }
                        h
                    }
                };
                let seq_start = ps.infosets[h].seq_start;
                for (a, action) in actions.iter().enumerate().rev() {
                    let mut seqs = frame.seqs.clone();
                    seqs[*player] = seq_start + a;
                    stack.push(Frame { node: action.child, seqs, chance_seq: frame.chance_seq });
                }
            }
        }
    }

    for ps in &mut players {
        ps.is_terminal.resize(ps.seqs.len(), false);
        ps.infosets_after = vec![Vec::new(); ps.seqs.len()];
        for (h, info) in ps.infosets.iter().enumerate() {
            ps.infosets_after[info.parent_seq].push(h);
        }
    }
    // Terminal flags were set while leaves streamed in; sequences created
    // after a leaf touched them are covered because indices only grow.
    for leaf in &leaves {
        for i in 0..n {
            players[i].is_terminal[leaf.seq[i]] = true;
        }
    }
    chance_terminal.sort_unstable();
    chance_terminal.dedup();

    let (profiles, values) = tensor.into_iter().unzip();
    Ok(SequenceForm {
        num_players: n,
        players,
        chance: saw_chance.then_some(ChanceSequences {
            realization: chance_realization,
            parent_seq: chance_parent,
            terminal: chance_terminal,
        }),
        leaves,
        utility: UtilityTensor { profiles, values },
    })
}

/// A (possibly mixed) sequence-form strategy for one player.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationPlan {
    pub player: usize,
    pub r: Vec<f64>,
}

impl RealizationPlan {
    pub fn is_pure(&self) -> bool {
        self.r
            .iter()
            .all(|&x| x.abs() <= PLAN_ZERO_TOL || (x - 1.0).abs() <= PLAN_ZERO_TOL)
    }
}

/// A reduced normal-form plan: one action per own-reachable infoset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PurePlan {
    pub player: usize,
    /// infoset index -> action index, reachable infosets only.
    pub actions: BTreeMap<usize, usize>,
}

impl PurePlan {
    pub fn new(player: usize) -> Self {
        PurePlan { player, actions: BTreeMap::new() }
    }

    /// Canonical key for deduplication.
    pub fn key(&self) -> Vec<(usize, usize)> {
        self.actions.iter().map(|(&h, &a)| (h, a)).collect()
    }

    /// Drops entries at infosets unreachable under the plan's own choices
    /// and checks that every reachable infoset has an action.
    pub fn reduce(&self, ps: &PlayerSequences) -> Result<PurePlan, PlanError> {
        let mut reduced = PurePlan::new(self.player);
        let mut stack = vec![0usize];
        while let Some(q) = stack.pop() {
            for &h in &ps.infosets_after[q] {
                let &a = self.actions.get(&h).ok_or(PlanError::MissingAction(h))?;
                if a >= ps.infosets[h].actions.len() {
                    return Err(PlanError::BadAction { infoset: h, action: a });
                }
                reduced.actions.insert(h, a);
                stack.push(ps.seq_of(h, a));
            }
        }
        Ok(reduced)
    }

    /// Readable form: infoset id -> action label.
    pub fn to_labels(&self, ps: &PlayerSequences) -> BTreeMap<String, String> {
        self.actions
            .iter()
            .map(|(&h, &a)| (ps.infosets[h].id.clone(), ps.infosets[h].actions[a].clone()))
            .collect()
    }

    pub fn from_labels(
        player: usize,
        labels: &BTreeMap<String, String>,
        ps: &PlayerSequences,
    ) -> Result<PurePlan, GameError> {
        let mut plan = PurePlan::new(player);
        for (id, label) in labels {
            let &h = ps
                .infoset_index
                .get(id)
                .ok_or_else(|| GameError::UnknownInfoset(id.clone()))?;
            let a = ps.infosets[h]
                .actions
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| GameError::UnknownAction { infoset: id.clone(), action: label.clone() })?;
            plan.actions.insert(h, a);
        }
        Ok(plan)
    }
}

/// The unique pure realization plan realization-equivalent to `plan`.
/// Exact 0/1 arithmetic; `F_i r = f_i` holds by construction.
pub fn plan_to_realization(plan: &PurePlan, sf: &SequenceForm) -> Result<RealizationPlan, PlanError> {
    let ps = sf.players.get(plan.player).ok_or(PlanError::BadPlayer(plan.player))?;
    for (&h, &a) in &plan.actions {
        let info = ps.infosets.get(h).ok_or(PlanError::BadInfoset(h))?;
        if a >= info.actions.len() {
            return Err(PlanError::BadAction { infoset: h, action: a });
        }
    }
    let mut r = vec![0.0; ps.num_seqs()];
    r[0] = 1.0;
    // Infoset indices ascend along own-play, so one forward pass suffices.
    for (h, info) in ps.infosets.iter().enumerate() {
        if r[info.parent_seq] == 1.0 {
            let &a = plan.actions.get(&h).ok_or(PlanError::MissingAction(h))?;
            r[info.seq_start + a] = 1.0;
        }
    }
    Ok(RealizationPlan { player: plan.player, r })
}

/// Expected utility of player `i` under a full profile of realization plans:
/// the chance-marginalized tensor contracted with all players' plans
/// (the bilinear form `r_1^T U_i r_2` for two players).
pub fn realization_expected_utility(
    profile: &[&RealizationPlan],
    sf: &SequenceForm,
    i: usize,
) -> Result<f64, PlanError> {
    if profile.len() != sf.num_players {
        return Err(PlanError::Dimension(format!(
            "profile has {} plans for {} players",
            profile.len(),
            sf.num_players
        )));
    }
    for (j, plan) in profile.iter().enumerate() {
        if plan.r.len() != sf.players[j].num_seqs() {
            return Err(PlanError::Dimension(format!(
                "plan {j} has {} entries, expected {}",
                plan.r.len(),
                sf.players[j].num_seqs()
            )));
        }
    }
    if i >= sf.num_players {
        return Err(PlanError::BadPlayer(i));
    }
    let mut total = 0.0;
    for (profile_key, values) in sf.utility.profiles.iter().zip(&sf.utility.values) {
        let mut weight = values[i];
        for (j, &q) in profile_key.iter().enumerate() {
            weight *= profile[j].r[q];
        }
        total += weight;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptSense {
    Min,
    Max,
}

/// Best pure plan for one player against fixed per-sequence coefficients.
///
/// Optimizes `sum_q coeff[q] * r_p(q)` over pure plans `p` by dynamic
/// programming on the player's sequence tree. `forced` pins actions at the
/// given infosets; `support` (if set) restricts choices to sequences with
/// weight above [`PLAN_ZERO_TOL`]. Ties break toward the lowest action index.
pub fn best_plan(
    ps: &PlayerSequences,
    coeff: &[f64],
    sense: OptSense,
    forced: &BTreeMap<usize, usize>,
    support: Option<&[f64]>,
) -> Result<(f64, PurePlan), PlanError> {
    if coeff.len() != ps.num_seqs() {
        return Err(PlanError::Dimension(format!(
            "coeff has {} entries, expected {}",
            coeff.len(),
            ps.num_seqs()
        )));
    }
    let mut choice: Vec<Option<usize>> = vec![None; ps.num_infosets()];

    fn seq_value(
        ps: &PlayerSequences,
        coeff: &[f64],
        sense: OptSense,
        forced: &BTreeMap<usize, usize>,
        support: Option<&[f64]>,
        q: usize,
        choice: &mut Vec<Option<usize>>,
    ) -> Result<f64, PlanError> {
        let mut value = coeff[q];
        for &h in &ps.infosets_after[q] {
            let info = &ps.infosets[h];
            let picked = if let Some(&a) = forced.get(&h) {
                let v = seq_value(ps, coeff, sense, forced, support, info.seq_start + a, choice)?;
                (a, v)
            } else {
                let mut best: Option<(usize, f64)> = None;
                for a in 0..info.actions.len() {
                    let seq = info.seq_start + a;
                    if let Some(r) = support {
                        if r[seq] <= PLAN_ZERO_TOL {
                            continue;
                        }
                    }
                    let v = seq_value(ps, coeff, sense, forced, support, seq, choice)?;
                    let better = match best {
                        None => true,
                        Some((_, cur)) => match sense {
                            OptSense::Min => v < cur,
                            OptSense::Max => v > cur,
                        },
                    };
                    if better {
                        best = Some((a, v));
                    }
                }
                best.ok_or(PlanError::EmptySupport(h))?
            };
            choice[h] = Some(picked.0);
            value += picked.1;
        }
        Ok(value)
    }

    let value = seq_value(ps, coeff, sense, forced, support, 0, &mut choice)?;

    let mut plan = PurePlan::new(ps.player);
    let mut stack = vec![0usize];
    while let Some(q) = stack.pop() {
        for &h in &ps.infosets_after[q] {
            let a = choice[h].expect("reachable infoset was evaluated");
            plan.actions.insert(h, a);
            stack.push(ps.seq_of(h, a));
        }
    }
    Ok((value, plan))
}

/// Value of player `i`'s best ex-ante response against a correlated mixture
/// of the other players' pure plans (entries are full opponent profiles in
/// player order, skipping `i`).
pub fn best_response_value(
    i: usize,
    mixture: &[(Vec<&PurePlan>, f64)],
    sf: &SequenceForm,
) -> Result<f64, PlanError> {
    if i >= sf.num_players {
        return Err(PlanError::BadPlayer(i));
    }
    if mixture.is_empty() {
        return Err(PlanError::EmptyMixture);
    }
    let total: f64 = mixture.iter().map(|(_, w)| *w).sum();
    if mixture.iter().any(|(_, w)| *w < -PLAN_ZERO_TOL) || (total - 1.0).abs() > PLAN_ZERO_TOL {
        return Err(PlanError::BadWeights(format!("sum {total}")));
    }
    let others: Vec<usize> = (0..sf.num_players).filter(|&j| j != i).collect();
    let ps = &sf.players[i];
    let mut coeff = vec![0.0; ps.num_seqs()];
    for (plans, weight) in mixture {
        if plans.len() != others.len() {
            return Err(PlanError::Dimension(format!(
                "mixture entry has {} plans, expected {}",
                plans.len(),
                others.len()
            )));
        }
        let mut realized = Vec::with_capacity(others.len());
        for (slot, &j) in others.iter().enumerate() {
            let plan = plans[slot];
            if plan.player != j {
                return Err(PlanError::Dimension(format!(
                    "mixture entry slot {slot} holds player {} plan, expected player {j}",
                    plan.player
                )));
            }
            realized.push(plan_to_realization(plan, sf)?);
        }
        for leaf in &sf.leaves {
            let mut reach = *weight * leaf.chance_prob;
            for (slot, &j) in others.iter().enumerate() {
                reach *= realized[slot].r[leaf.seq[j]];
            }
            if reach != 0.0 {
                coeff[leaf.seq[i]] += reach * leaf.payoffs[i];
            }
        }
    }
    let (value, _) = best_plan(ps, &coeff, OptSense::Max, &BTreeMap::new(), None)?;
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efg::{Action, Node};

    pub fn matching_pennies() -> ExtensiveFormGame {
        // P1 picks H/T, P2 picks H/T unobserved; payoffs +/-1, zero-sum.
        ExtensiveFormGame {
            players: 2,
            root: 0,
            nodes: vec![
                Node::decision(
                    0,
                    "p1",
                    vec![
                        Action { label: "H".into(), child: 1 },
                        Action { label: "T".into(), child: 2 },
                    ],
                ),
                Node::decision(
                    1,
                    "p2",
                    vec![
                        Action { label: "H".into(), child: 3 },
                        Action { label: "T".into(), child: 4 },
                    ],
                ),
                Node::decision(
                    1,
                    "p2",
                    vec![
                        Action { label: "H".into(), child: 5 },
                        Action { label: "T".into(), child: 6 },
                    ],
                ),
                Node::leaf(vec![1.0, -1.0]),
                Node::leaf(vec![-1.0, 1.0]),
                Node::leaf(vec![-1.0, 1.0]),
                Node::leaf(vec![1.0, -1.0]),
            ],
        }
    }

    fn dense_flow(ps: &PlayerSequences) -> Vec<Vec<f64>> {
        (0..ps.num_flow_rows())
            .map(|k| {
                let mut row = vec![0.0; ps.num_seqs()];
                for (q, v) in ps.flow_row(k) {
                    row[q] = v;
                }
                row
            })
            .collect()
    }

    #[test]
    fn matching_pennies_sequence_form() {
        let sf = build_sequence_form(&matching_pennies()).unwrap();
        assert_eq!(sf.players[0].num_seqs(), 3);
        assert_eq!(sf.players[1].num_seqs(), 3);
        assert_eq!(
            dense_flow(&sf.players[0]),
            vec![vec![1.0, 0.0, 0.0], vec![-1.0, 1.0, 1.0]]
        );
        assert_eq!(sf.leaves.len(), 4);
        assert!(sf.chance.is_none());
    }

    #[test]
    fn single_leaf_sequence_form() {
        let game = ExtensiveFormGame {
            players: 2,
            root: 0,
            nodes: vec![Node::leaf(vec![3.0, 4.0])],
        };
        let sf = build_sequence_form(&game).unwrap();
        assert_eq!(sf.players[0].num_seqs(), 1);
        assert_eq!(sf.players[1].num_seqs(), 1);
        let plan = PurePlan::new(0);
        let r = plan_to_realization(&plan, &sf).unwrap();
        assert_eq!(r.r, vec![1.0]);
        let r2 = RealizationPlan { player: 1, r: vec![1.0] };
        assert_eq!(realization_expected_utility(&[&r, &r2], &sf, 0).unwrap(), 3.0);
    }

    #[test]
    fn pennies_plan_and_expected_utility() {
        let sf = build_sequence_form(&matching_pennies()).unwrap();
        let mut plan = PurePlan::new(0);
        plan.actions.insert(0, 0); // H
        let r = plan_to_realization(&plan, &sf).unwrap();
        assert_eq!(r.r, vec![1.0, 1.0, 0.0]);
        assert!(r.is_pure());

        let mixed = RealizationPlan { player: 0, r: vec![1.0, 0.5, 0.5] };
        let mixed2 = RealizationPlan { player: 1, r: vec![1.0, 0.5, 0.5] };
        let u = realization_expected_utility(&[&mixed, &mixed2], &sf, 0).unwrap();
        assert!(u.abs() < 1e-12);
    }

    #[test]
    fn build_is_deterministic() {
        let a = build_sequence_form(&matching_pennies()).unwrap();
        let b = build_sequence_form(&matching_pennies()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pennies_best_response_against_uniform_is_zero() {
        let sf = build_sequence_form(&matching_pennies()).unwrap();
        let mut h = PurePlan::new(1);
        h.actions.insert(0, 0);
        let mut t = PurePlan::new(1);
        t.actions.insert(0, 1);
        let mixture = vec![(vec![&h], 0.5), (vec![&t], 0.5)];
        let v = best_response_value(0, &mixture, &sf).unwrap();
        assert!(v.abs() < 1e-12, "{v}");
    }

    #[test]
    fn best_response_rejects_empty_mixture() {
        let sf = build_sequence_form(&matching_pennies()).unwrap();
        assert!(matches!(
            best_response_value(0, &[], &sf),
            Err(PlanError::EmptyMixture)
        ));
    }

    #[test]
    fn leaf_incidence_counts_player_sequences() {
        let sf = build_sequence_form(&matching_pennies()).unwrap();
        for leaf in &sf.leaves {
            for i in 0..2 {
                // Chain includes the empty sequence and one bid.
                assert_eq!(sf.players[i].prefix_chain(leaf.seq[i]).len(), 2);
            }
        }
    }
}
