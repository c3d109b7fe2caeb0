//! Extended T-chains and T-trains: blow-up moves, the ample condition and the
//! budgeted P-admissibility search.
//!
//! A train state is a chain that may contain 1-entries ((-1)-curves). The
//! three blow-up moves are all "insert a 1 at a node and increment both
//! neighbors"; which classical operation that is depends on whether a
//! neighbor is a (-1)-curve. Blowing every 1 back down recovers the base
//! chain, independently of contraction order.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::chain::{self, Chain};
use crate::rat::Rat;
use num_traits::One;

pub const DEFAULT_BUDGET: usize = 24;
pub const DEFAULT_MAX_STATES: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrainError {
    #[error("blow-up position {0} is out of range")]
    Position(usize),
    #[error("entry at position {0} is not a (-1)-curve")]
    NotJunction(usize),
    #[error("junction move at position {0} is missing its neighbor")]
    MissingNeighbor(usize),
    #[error("state does not contract to a valid chain")]
    InvalidState,
    #[error("malformed train literal: {0}")]
    Parse(String),
    #[error("train does not blow down to the given chain")]
    WrongBase,
    #[error("vehicle {0} is not a T-chain")]
    NotTVehicle(usize),
}

/// A chain with interleaved 1-entries and the move log that produced it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TrainState {
    entries: Vec<u32>,
    origins: Vec<Option<u16>>,
    moves: Vec<u16>,
}

impl TrainState {
    pub fn from_chain(c: &Chain) -> TrainState {
        TrainState {
            entries: c.entries().to_vec(),
            origins: (0..c.len()).map(|i| Some(i as u16)).collect(),
            moves: Vec::new(),
        }
    }

    /// A state from raw entries (no provenance); used for literals.
    pub fn from_entries(entries: Vec<u32>) -> Result<TrainState, TrainError> {
        if entries.is_empty() || entries.iter().any(|&e| e == 0) {
            return Err(TrainError::InvalidState);
        }
        let n = entries.len();
        Ok(TrainState {
            origins: vec![None; n],
            entries,
            moves: Vec::new(),
        })
    }

    /// Parses `[a,...]-1-[b,...]-1-...`.
    pub fn parse(text: &str) -> Result<TrainState, TrainError> {
        let mut entries = Vec::new();
        for part in text.split("-1-") {
            let c = Chain::parse(part.trim()).map_err(|e| TrainError::Parse(e.to_string()))?;
            if !entries.is_empty() {
                entries.push(1);
            }
            entries.extend_from_slice(c.entries());
        }
        TrainState::from_entries(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Node positions of the moves that produced this state, in order.
    pub fn moves(&self) -> &[u16] {
        &self.moves
    }

    /// Base positions of the original curves (`None` for inserted ones).
    pub fn origins(&self) -> &[Option<u16>] {
        &self.origins
    }

    fn apply(&self, node: usize) -> TrainState {
        let mut entries = Vec::with_capacity(self.entries.len() + 1);
        entries.extend_from_slice(&self.entries[..=node]);
        entries.push(1);
        entries.extend_from_slice(&self.entries[node + 1..]);
        entries[node] += 1;
        entries[node + 2] += 1;
        let mut origins = Vec::with_capacity(self.origins.len() + 1);
        origins.extend_from_slice(&self.origins[..=node]);
        origins.push(None);
        origins.extend_from_slice(&self.origins[node + 1..]);
        let mut moves = self.moves.clone();
        moves.push(node as u16);
        TrainState {
            entries,
            origins,
            moves,
        }
    }

    /// Blow-up between positions `node` and `node + 1`:
    /// `[..., e_i + 1, 1, e_{i+1} + 1, ...]`.
    pub fn blow_up_between(&self, node: usize) -> Result<TrainState, TrainError> {
        if node + 1 >= self.entries.len() {
            return Err(TrainError::Position(node));
        }
        Ok(self.apply(node))
    }

    /// Left blow-up at a 1-entry: `[a...]R_1 - 1 - L_2[b...]`.
    pub fn left_blow_up(&self, junction: usize) -> Result<TrainState, TrainError> {
        if junction >= self.entries.len() || self.entries[junction] != 1 {
            return Err(TrainError::NotJunction(junction));
        }
        if junction == 0 {
            return Err(TrainError::MissingNeighbor(junction));
        }
        Ok(self.apply(junction - 1))
    }

    /// Right blow-up at a 1-entry: `[a...]R_2 - 1 - L_1[b...]`.
    pub fn right_blow_up(&self, junction: usize) -> Result<TrainState, TrainError> {
        if junction >= self.entries.len() || self.entries[junction] != 1 {
            return Err(TrainError::NotJunction(junction));
        }
        if junction + 1 >= self.entries.len() {
            return Err(TrainError::MissingNeighbor(junction));
        }
        Ok(self.apply(junction))
    }

    /// Contracts 1-entries until none remain. The result is independent of
    /// contraction order; an invalid state (final entry below 2) is an error.
    pub fn blow_down(&self) -> Result<Chain, TrainError> {
        blow_down_entries(&self.entries)
    }

    /// Maximal segments between 1-entries, as index ranges.
    pub fn segments(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut start = 0usize;
        for (i, &e) in self.entries.iter().enumerate() {
            if e == 1 {
                out.push((start, i));
                start = i + 1;
            }
        }
        out.push((start, self.entries.len()));
        out
    }

    pub fn to_literal(&self) -> String {
        let parts: Vec<String> = self
            .segments()
            .iter()
            .map(|&(s, e)| {
                let body: Vec<String> =
                    self.entries[s..e].iter().map(|x| x.to_string()).collect();
                format!("[{}]", body.join(","))
            })
            .collect();
        parts.join("-1-")
    }
}

impl fmt::Display for TrainState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

impl fmt::Debug for TrainState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

pub(crate) fn blow_down_entries(entries: &[u32]) -> Result<Chain, TrainError> {
    let mut v: Vec<i64> = entries.iter().map(|&e| e as i64).collect();
    while let Some(i) = v.iter().position(|&e| e == 1) {
        if i > 0 {
            v[i - 1] -= 1;
        }
        if i + 1 < v.len() {
            v[i + 1] -= 1;
        }
        v.remove(i);
    }
    if v.is_empty() || v.iter().any(|&e| e < 2) {
        return Err(TrainError::InvalidState);
    }
    Chain::new(v.into_iter().map(|e| e as u32).collect()).map_err(|_| TrainError::InvalidState)
}

/// A segmentation of a train state into T-chain vehicles with the boundary
/// log discrepancies at each junction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TTrain {
    pub vehicles: Vec<Chain>,
    /// `(alpha_{i, r_i}, alpha_{i+1, 1})` per junction.
    pub junction_alphas: Vec<(Rat, Rat)>,
}

impl TTrain {
    /// The ample condition: every junction sum is strictly below 1.
    pub fn is_ample(&self) -> bool {
        self.junction_alphas
            .iter()
            .all(|(l, r)| l + r < Rat::one())
    }

    pub fn to_literal(&self) -> String {
        let parts: Vec<String> = self.vehicles.iter().map(|v| v.to_string()).collect();
        parts.join("-1-")
    }

    /// The state whose segments are these vehicles.
    pub fn to_state(&self) -> TrainState {
        let mut entries = Vec::new();
        for (i, v) in self.vehicles.iter().enumerate() {
            if i > 0 {
                entries.push(1);
            }
            entries.extend_from_slice(v.entries());
        }
        TrainState::from_entries(entries).expect("vehicles are non-empty")
    }

    /// Total core count over all vehicles.
    pub fn core_count(&self) -> usize {
        self.vehicles
            .iter()
            .map(|v| {
                chain::tchain_derivation(v)
                    .expect("vehicles of a TTrain are T-chains")
                    .d
            })
            .sum()
    }

    /// Sum of the vehicles' Milnor numbers `d_i - 1`.
    pub fn milnor_sum(&self) -> usize {
        self.core_count() - self.vehicles.len()
    }
}

/// Cached per-vehicle data used by the search.
#[derive(Clone)]
struct VehicleInfo {
    first_alpha: Rat,
    last_alpha: Rat,
}

type VehicleCache = HashMap<Vec<u32>, Option<VehicleInfo>>;

fn vehicle_info<'a>(cache: &'a mut VehicleCache, entries: &[u32]) -> &'a Option<VehicleInfo> {
    if !cache.contains_key(entries) {
        let info = Chain::new(entries.to_vec()).ok().and_then(|c| {
            let alphas = chain::log_discrepancies_recursive(&c).ok()?;
            Some(VehicleInfo {
                first_alpha: alphas.first().unwrap().clone(),
                last_alpha: alphas.last().unwrap().clone(),
            })
        });
        cache.insert(entries.to_vec(), info);
    }
    &cache[entries]
}

fn accept_state(
    state: &TrainState,
    cache: &mut VehicleCache,
    require_ample: bool,
) -> Option<TTrain> {
    let segs = state.segments();
    if segs.iter().any(|&(s, e)| s == e) {
        return None;
    }
    let mut vehicles = Vec::with_capacity(segs.len());
    let mut infos: Vec<VehicleInfo> = Vec::with_capacity(segs.len());
    for &(s, e) in &segs {
        let info = vehicle_info(cache, &state.entries()[s..e]).clone()?;
        vehicles.push(Chain::new(state.entries()[s..e].to_vec()).expect("validated"));
        infos.push(info);
    }
    let mut junction_alphas = Vec::with_capacity(segs.len().saturating_sub(1));
    for k in 0..segs.len().saturating_sub(1) {
        let left = infos[k].last_alpha.clone();
        let right = infos[k + 1].first_alpha.clone();
        if require_ample && &left + &right >= Rat::one() {
            return None;
        }
        junction_alphas.push((left, right));
    }
    Some(TTrain {
        vehicles,
        junction_alphas,
    })
}

/// Checks that a state is segmented into T-chains with the ample condition at
/// every junction.
pub fn is_ample_train(state: &TrainState) -> Option<TTrain> {
    let mut cache = VehicleCache::new();
    accept_state(state, &mut cache, true)
}

/// The train identity `r - d + 2 = sum (b_k - 2)` over the base chain, where
/// `d` is the total core count of the train.
pub fn check_length_relation(c: &Chain, t: &TTrain) -> Result<bool, TrainError> {
    let down = t.to_state().blow_down()?;
    if &down != c {
        return Err(TrainError::WrongBase);
    }
    for (i, v) in t.vehicles.iter().enumerate() {
        if chain::tchain_derivation(v).is_none() {
            return Err(TrainError::NotTVehicle(i));
        }
    }
    let r = c.len() as i64;
    let d = t.core_count() as i64;
    let w: i64 = c.entries().iter().map(|&b| b as i64 - 2).sum();
    Ok(r - d + 2 == w)
}

/// Search configuration. The budget bounds the number of blow-up moves; the
/// state cap bounds exploration effort (hitting it makes the outcome
/// inconclusive rather than wrong).
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub budget: usize,
    pub max_states: usize,
    /// Restrict to left/right blow-ups at (-1)-curves.
    pub junction_moves_only: bool,
    /// Require the ample condition (vehicles must be T-chains either way).
    pub require_ample: bool,
    /// Keep collecting accepted trains up to the budget instead of stopping
    /// at the minimal move count.
    pub collect_all: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_BUDGET,
            max_states: DEFAULT_MAX_STATES,
            junction_moves_only: false,
            require_ample: true,
            collect_all: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FoundTrain {
    pub state: TrainState,
    pub train: TTrain,
    pub moves: usize,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub found: Vec<FoundTrain>,
    /// Exploration hit the state cap; absence of a train is inconclusive.
    pub capped: bool,
    /// The pruned move space was exhausted strictly below the budget.
    pub exhausted: bool,
    pub explored: usize,
}

/// The budgeted decision for "admits an associated ample T-train".
#[derive(Clone, Debug)]
pub enum Verdict {
    /// All ample trains at the minimal move count, canonically ordered.
    Admissible(Vec<FoundTrain>),
    /// No train found; `exhausted` records whether the (pruned) search space
    /// was fully explored below the budget.
    NotWithinBudget { exhausted: bool },
}

impl Verdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Verdict::Admissible(_))
    }
}

struct RegionSpec {
    /// Boundary 2-run length (the number of pinned junction moves).
    alpha: usize,
    /// Original node positions `(i, i+1)` with `lo <= i <= hi` form the region.
    lo: u16,
    hi: u16,
}

struct SearchCtx {
    len0: usize,
    lead_run: usize,
    trail_run: usize,
    left_region: Option<RegionSpec>,
    right_region: Option<RegionSpec>,
    d_total: i64,
    palindrome: bool,
}

impl SearchCtx {
    fn new(base: &Chain) -> SearchCtx {
        let e = base.entries();
        let len0 = e.len();
        let lead_run = e.iter().take_while(|&&x| x == 2).count();
        let trail_run = if lead_run == len0 {
            len0
        } else {
            e.iter().rev().take_while(|&&x| x == 2).count()
        };
        let d_total = len0 as i64 + 2 - e.iter().map(|&b| b as i64 - 2).sum::<i64>();
        let left_region = if lead_run < len0 && e[lead_run] == 3 {
            let mut q = lead_run + 1;
            while q < len0 && e[q] == 2 {
                q += 1;
            }
            (q < len0).then(|| RegionSpec {
                alpha: lead_run,
                lo: lead_run as u16,
                hi: (q - 1) as u16,
            })
        } else {
            None
        };
        let right_region = if trail_run < len0 && e[len0 - 1 - trail_run] == 3 {
            let p = len0 - 1 - trail_run;
            let mut q = p as i64 - 1;
            while q >= 0 && e[q as usize] == 2 {
                q -= 1;
            }
            (q >= 0).then(|| RegionSpec {
                alpha: trail_run,
                lo: q as u16,
                hi: (p - 1) as u16,
            })
        } else {
            None
        };
        SearchCtx {
            len0,
            lead_run,
            trail_run,
            d_total,
            left_region,
            right_region,
            palindrome: base.is_palindrome(),
        }
    }
}

/// Per-state pruning bookkeeping.
#[derive(Clone, Copy, Default)]
struct Pins {
    left_used: bool,
    left_remaining: u8,
    right_used: bool,
    right_remaining: u8,
}

struct Node {
    state: TrainState,
    pins: Pins,
}

fn dedup_key(ctx: &SearchCtx, st: &TrainState) -> Vec<u32> {
    let enc = |entries: Vec<u32>, origins: Vec<Option<u16>>| {
        let mut key = entries;
        key.extend(origins.iter().map(|o| o.map_or(u32::MAX, |p| p as u32)));
        key
    };
    let fwd = enc(st.entries.clone(), st.origins.clone());
    if !ctx.palindrome {
        return fwd;
    }
    let rev_entries: Vec<u32> = st.entries.iter().rev().copied().collect();
    let rev_origins: Vec<Option<u16>> = st
        .origins
        .iter()
        .rev()
        .map(|o| o.map(|p| (ctx.len0 - 1) as u16 - p))
        .collect();
    let rev = enc(rev_entries, rev_origins);
    fwd.min(rev)
}

enum MoveKind {
    Interior,
    LeftAtJunction(usize),
    RightAtJunction(usize),
}

fn classify_move(entries: &[u32], node: usize) -> MoveKind {
    if entries[node] == 1 {
        MoveKind::RightAtJunction(node)
    } else if entries[node + 1] == 1 {
        MoveKind::LeftAtJunction(node + 1)
    } else {
        MoveKind::Interior
    }
}

/// Breadth-first search over blow-up move sequences with the pruning rules:
/// boundary 2-run nodes are never blown up, a prefix `[2^a, 3, 2^b, a_1]`
/// admits at most one interior move (whose follow-up junction moves are
/// pinned), and the junction count is capped by the core-count invariant
/// `d = r + 2 - sum(b - 2)`.
pub fn search_trains(base: &Chain, cfg: &SearchConfig) -> SearchOutcome {
    let ctx = SearchCtx::new(base);
    let mut cache = VehicleCache::new();
    let mut outcome = SearchOutcome {
        found: Vec::new(),
        capped: false,
        exhausted: false,
        explored: 1,
    };
    if ctx.d_total < 1 {
        outcome.exhausted = true;
        return outcome;
    }
    let root = Node {
        state: TrainState::from_chain(base),
        pins: Pins::default(),
    };
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    seen.insert(dedup_key(&ctx, &root.state));
    let mut frontier = vec![root];
    for depth in 0..=cfg.budget {
        for node in &frontier {
            if let Some(train) = accept_state(&node.state, &mut cache, cfg.require_ample) {
                outcome.found.push(FoundTrain {
                    state: node.state.clone(),
                    train,
                    moves: depth,
                });
            }
        }
        if !outcome.found.is_empty() && !cfg.collect_all {
            break;
        }
        if depth == cfg.budget {
            break;
        }
        let mut next: Vec<Node> = Vec::new();
        'expand: for parent in &frontier {
            for mv in 0..parent.state.len() - 1 {
                let Some(child) = expand(&ctx, cfg, parent, mv) else {
                    continue;
                };
                if outcome.explored >= cfg.max_states {
                    outcome.capped = true;
                    break 'expand;
                }
                if seen.insert(dedup_key(&ctx, &child.state)) {
                    outcome.explored += 1;
                    next.push(child);
                }
            }
        }
        if outcome.capped {
            break;
        }
        if next.is_empty() {
            outcome.exhausted = true;
            break;
        }
        frontier = next;
    }
    outcome
        .found
        .sort_by(|a, b| (a.moves, a.state.entries()).cmp(&(b.moves, b.state.entries())));
    outcome
}

fn expand(ctx: &SearchCtx, cfg: &SearchConfig, parent: &Node, node: usize) -> Option<Node> {
    let st = &parent.state;
    let entries = st.entries();
    let mut pins = parent.pins;
    match classify_move(entries, node) {
        MoveKind::Interior => {
            if cfg.junction_moves_only {
                return None;
            }
            // original-pair node, if both neighbors are original curves
            let orig = match (st.origins[node], st.origins[node + 1]) {
                (Some(p), Some(q)) => {
                    debug_assert_eq!(q, p + 1);
                    Some(p as usize)
                }
                _ => None,
            };
            if let Some(p) = orig {
                // boundary 2-run nodes, including the node joining the run to
                // its first non-2 neighbor, are never blown up
                if p + 1 <= ctx.lead_run {
                    return None;
                }
                if ctx.trail_run < ctx.len0 && p + 1 + ctx.trail_run >= ctx.len0 {
                    return None;
                }
                if let Some(reg) = &ctx.left_region {
                    if (reg.lo as usize..=reg.hi as usize).contains(&p) {
                        if pins.left_used {
                            return None;
                        }
                        pins.left_used = true;
                        pins.left_remaining = reg.alpha as u8;
                    }
                }
                if let Some(reg) = &ctx.right_region {
                    if (reg.lo as usize..=reg.hi as usize).contains(&p) {
                        if pins.right_used {
                            return None;
                        }
                        pins.right_used = true;
                        pins.right_remaining = reg.alpha as u8;
                    }
                }
            }
            // the junction count can only grow and is bounded by d_total - 1
            let junctions = entries.iter().filter(|&&e| e == 1).count() as i64;
            if junctions + 1 > ctx.d_total - 1 {
                return None;
            }
        }
        MoveKind::LeftAtJunction(jpos) => {
            if pins.left_used && is_leftmost_junction(entries, jpos) {
                if pins.left_remaining == 0 {
                    return None;
                }
                pins.left_remaining -= 1;
            }
            if pins.right_used && is_rightmost_junction(entries, jpos) {
                // the pinned rightmost vehicle accepts right blow-ups only
                return None;
            }
        }
        MoveKind::RightAtJunction(jpos) => {
            if pins.left_used && is_leftmost_junction(entries, jpos) {
                return None;
            }
            if pins.right_used && is_rightmost_junction(entries, jpos) {
                if pins.right_remaining == 0 {
                    return None;
                }
                pins.right_remaining -= 1;
            }
        }
    }
    Some(Node {
        state: st.apply(node),
        pins,
    })
}

fn is_leftmost_junction(entries: &[u32], jpos: usize) -> bool {
    entries.iter().position(|&e| e == 1) == Some(jpos)
}

fn is_rightmost_junction(entries: &[u32], jpos: usize) -> bool {
    entries.iter().rposition(|&e| e == 1) == Some(jpos)
}

/// Depth-bounded decision for P-admissibility: the returned trains are the
/// ample trains at the minimal move count.
pub fn is_p_admissible(base: &Chain, budget: usize) -> Verdict {
    is_p_admissible_with(base, budget, DEFAULT_MAX_STATES)
}

pub fn is_p_admissible_with(base: &Chain, budget: usize, max_states: usize) -> Verdict {
    let cfg = SearchConfig {
        budget,
        max_states,
        ..SearchConfig::default()
    };
    let outcome = search_trains(base, &cfg);
    if outcome.found.is_empty() {
        Verdict::NotWithinBudget {
            exhausted: outcome.exhausted,
        }
    } else {
        Verdict::Admissible(outcome.found)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Chain;
    use crate::rat::rat;

    fn ch(s: &str) -> Chain {
        Chain::parse(s).unwrap()
    }

    fn st(s: &str) -> TrainState {
        TrainState::parse(s).unwrap()
    }

    #[test]
    fn moves_follow_the_blowup_rules() {
        let s = TrainState::from_chain(&ch("[3,3]"));
        assert_eq!(s.blow_up_between(0).unwrap().entries(), &[4, 1, 4]);
        let s = TrainState::from_chain(&ch("[2,5]"));
        assert_eq!(s.blow_up_between(0).unwrap().entries(), &[3, 1, 6]);
        assert!(TrainState::from_chain(&ch("[4]")).blow_up_between(0).is_err());

        let s = st("[4]-1-[4]");
        assert_eq!(s.left_blow_up(1).unwrap().entries(), &[5, 1, 2, 4]);
        assert_eq!(s.right_blow_up(1).unwrap().entries(), &[4, 2, 1, 5]);
        assert!(s.left_blow_up(0).is_err());
        let lone = TrainState::from_entries(vec![1]).unwrap();
        assert!(lone.left_blow_up(0).is_err());
        assert!(lone.right_blow_up(0).is_err());
    }

    #[test]
    fn blow_down_examples() {
        let s = TrainState::from_entries(vec![3, 3, 1, 3, 5, 2, 1, 3, 5, 3, 2]).unwrap();
        assert_eq!(s.blow_down().unwrap(), ch("[3,2,2,3,4,3,2]"));
        let s = TrainState::from_entries(vec![4, 1, 4]).unwrap();
        assert_eq!(s.blow_down().unwrap(), ch("[3,3]"));
        let s = TrainState::from_entries(vec![5, 2]).unwrap();
        assert_eq!(s.blow_down().unwrap(), ch("[5,2]"));
        // contracting down to an invalid chain is an error
        let s = TrainState::from_entries(vec![2, 1, 2]).unwrap();
        assert!(s.blow_down().is_err());
    }

    #[test]
    fn blow_down_inverts_single_moves() {
        let base = ch("[3,2,2,3,4,3,2]");
        let s = TrainState::from_chain(&base);
        for node in 0..base.len() - 1 {
            let child = s.blow_up_between(node).unwrap();
            assert_eq!(child.blow_down().unwrap(), base);
        }
    }

    #[test]
    fn ample_examples() {
        let t = is_ample_train(&st("[2,5]-1-[3,3]-1-[5,2]")).unwrap();
        assert!(t.is_ample());
        assert_eq!(t.junction_alphas[0], (rat(1, 3), rat(1, 2)));
        assert_eq!(t.junction_alphas[1], (rat(1, 2), rat(1, 3)));

        assert!(is_ample_train(&st("[4]-1-[4]")).is_none());

        let t = is_ample_train(&st("[3,3]-1-[3,5,2]-1-[3,5,3,2]")).unwrap();
        assert_eq!(t.junction_alphas[0], (rat(1, 2), rat(2, 5)));
        assert_eq!(t.junction_alphas[1], (rat(3, 5), rat(3, 8)));

        // vehicles must be T-chains
        assert!(is_ample_train(&st("[3,2]-1-[4]")).is_none());
    }

    #[test]
    fn length_relation() {
        let t = is_ample_train(&st("[3,3]-1-[3,5,2]-1-[3,5,3,2]")).unwrap();
        assert_eq!(t.core_count(), 4);
        assert!(check_length_relation(&ch("[3,2,2,3,4,3,2]"), &t).unwrap());
        assert!(check_length_relation(&ch("[5,2]"), &t).is_err());

        let t = is_ample_train(&st("[4]")).unwrap();
        assert!(check_length_relation(&ch("[4]"), &t).unwrap());
        let t = is_ample_train(&st("[5,2]")).unwrap();
        assert!(check_length_relation(&ch("[5,2]"), &t).unwrap());
    }

    #[test]
    fn admissibility_examples() {
        // already a T-chain: admissible with zero moves
        match is_p_admissible(&ch("[4]"), 8) {
            Verdict::Admissible(found) => {
                assert_eq!(found[0].moves, 0);
                assert_eq!(found[0].train.vehicles, vec![ch("[4]")]);
            }
            v => panic!("unexpected {v:?}"),
        }

        // the worked example: admissible, and the known witness appears among
        // the trains within budget (a shorter one exists at three moves)
        assert!(is_p_admissible(&ch("[3,2,2,3,4,3,2]"), 8).is_admissible());
        let cfg = SearchConfig {
            budget: 5,
            collect_all: true,
            ..SearchConfig::default()
        };
        let out = search_trains(&ch("[3,2,2,3,4,3,2]"), &cfg);
        let want = st("[3,3]-1-[3,5,2]-1-[3,5,3,2]");
        assert!(out.found.iter().any(|f| f.state.entries() == want.entries()));
        let shorter = st("[4]-1-[3,2,3,5,2]-1-[5,2]");
        assert!(out
            .found
            .iter()
            .any(|f| f.moves == 3 && f.state.entries() == shorter.entries()));

        // [2,6,2] admits no train for any budget: the pruned space is empty
        match is_p_admissible(&ch("[2,6,2]"), 24) {
            Verdict::NotWithinBudget { exhausted } => assert!(exhausted),
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn admissibility_two_junction_family() {
        // base [2,4,2^n,4,2] has the three-vehicle witness
        for n in 1..=4usize {
            let lit = format!("[2,4,2^{n},4,2]");
            let base = Chain::parse(&lit).unwrap();
            let mid = if n == 1 {
                "[4]".to_string()
            } else {
                format!("[3,2^{},3]", n - 2)
            };
            let want = TrainState::parse(&format!("[2,5]-1-{mid}-1-[5,2]")).unwrap();
            match is_p_admissible(&base, 24) {
                Verdict::Admissible(found) => {
                    assert!(
                        found.iter().any(|f| f.state.entries() == want.entries()),
                        "n={n}: {found:?}"
                    );
                }
                v => panic!("n={n}: unexpected {v:?}"),
            }
        }
    }

    #[test]
    fn wormhole_chain_has_two_trains() {
        // [4,5,5,2,2,2,3,2,2] carries both known trains, at depths 3 and 6
        let base = ch("[4,5,5,2,2,2,3,2,2]");
        let cfg = SearchConfig {
            budget: 7,
            collect_all: true,
            max_states: 400_000,
            ..SearchConfig::default()
        };
        let out = search_trains(&base, &cfg);
        let t1 = st("[4,5,5,2,2,3,2,2]-1-[6,2,2]");
        let t2 = st("[4,6,2,3,2,2]-1-[4,8,2,2,2,3,2,2]");
        for want in [&t1, &t2] {
            assert!(
                out.found.iter().any(|f| f.state.entries() == want.entries()),
                "missing {want}"
            );
        }
    }

    #[test]
    fn cores_of_accepted_trains_are_original_and_sharp() {
        let base = ch("[3,2,2,3,4,3,2]");
        let cfg = SearchConfig {
            budget: 6,
            collect_all: true,
            ..SearchConfig::default()
        };
        let out = search_trains(&base, &cfg);
        assert!(!out.found.is_empty());
        for f in &out.found {
            let segs = f.state.segments();
            let mut core_positions = Vec::new();
            for (veh, &(s, _)) in f.train.vehicles.iter().zip(&segs) {
                for c in chain::cores(veh).unwrap() {
                    core_positions.push(s + c);
                }
            }
            // cores are never contracted: they map to base positions
            for &p in &core_positions {
                assert!(
                    f.state.origins()[p].is_some(),
                    "core not original in {}",
                    f.state
                );
            }
            // the leftmost and rightmost cores sit over base entries > 2
            for &p in [core_positions.first(), core_positions.last()]
                .iter()
                .flatten()
            {
                let orig = f.state.origins()[*p].unwrap() as usize;
                assert!(base.entries()[orig] > 2);
            }
        }
    }
}
