//! P-resolution enumeration and the lambda invariant.
//!
//! By the train correspondence, P-resolutions of a cyclic quotient point are
//! tuples of ample trains over pairwise disjoint, non-adjacent subchains of
//! the exceptional chain. Du Val clusters `[2^k]` (boundary log discrepancy 1)
//! take part as standalone contractions; a `(-1)`-curve junction against a
//! Du Val vehicle would have non-positive K-degree, so Du Val vehicles never
//! occur inside multi-vehicle trains.

use crate::chain::{self, Chain};
use crate::rat::{rat_int, Rat};
use crate::trains::{search_trains, FoundTrain, SearchConfig};
use num_traits::{One, Zero};

/// One contracted cluster of a P-resolution.
#[derive(Clone, Debug)]
pub enum Cluster {
    /// A Du Val singularity `A_k` from a 2-run of length `k`.
    DuVal { len: usize },
    /// A contracted ample T-train.
    Train(FoundTrain),
}

impl Cluster {
    pub fn literal(&self) -> String {
        match self {
            Cluster::DuVal { len } => {
                let body = vec!["2"; *len].join(",");
                format!("[{body}]")
            }
            Cluster::Train(f) => f.state.to_literal(),
        }
    }
}

/// A choice of disjoint subchains plus ample trains over them.
#[derive(Clone, Debug)]
pub struct PResolution {
    /// Inclusive index intervals into the base chain, left to right.
    pub intervals: Vec<(usize, usize)>,
    /// One cluster per interval.
    pub clusters: Vec<Cluster>,
    /// Count of non-contracted curves over the singular point.
    pub rho: u64,
    /// Total Milnor number of the contracted singularities.
    pub mu: u64,
}

#[derive(Clone, Debug)]
pub struct PResolutionSet {
    pub resolutions: Vec<PResolution>,
    /// Subchains whose train search hit the exploration cap: deeper trains
    /// over these intervals may be missing.
    pub inconclusive_intervals: Vec<(usize, usize)>,
}

impl PResolutionSet {
    pub fn is_exact(&self) -> bool {
        self.inconclusive_intervals.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaResult {
    /// Minimum of `rho + mu` over the enumerated P-resolutions.
    pub value: u64,
    /// False when budget exhaustion makes the value an upper bound only.
    pub exact: bool,
}

struct ClusterOption {
    cluster: Cluster,
    alpha_left: Rat,
    alpha_right: Rat,
    rho: u64,
    mu: u64,
}

/// All P-resolutions of the chain's singularity, found within the given train
/// search budget. The empty selection (the minimal resolution) is always
/// included; every other selection is filtered by K-ampleness: each
/// non-contracted curve needs `(e - 2) + sum (1 - boundary alpha) > 0` over
/// its adjacent contracted clusters.
pub fn enumerate_p_resolutions(c: &Chain, budget: usize, max_states: usize) -> PResolutionSet {
    let n = c.len();
    let entries = c.entries();
    let mut options: Vec<Vec<Vec<ClusterOption>>> = Vec::new();
    for i in 0..n {
        options.push(Vec::new());
        for _ in 0..n {
            options[i].push(Vec::new());
        }
    }
    let mut inconclusive = Vec::new();
    for i in 0..n {
        for j in i..n {
            let sub = Chain::new(entries[i..=j].to_vec()).expect("subchain of a valid chain");
            if sub.is_a_chain() {
                options[i][j].push(ClusterOption {
                    cluster: Cluster::DuVal { len: j - i + 1 },
                    alpha_left: Rat::one(),
                    alpha_right: Rat::one(),
                    rho: 0,
                    // a Du Val singularity of type A_k has Milnor number k
                    mu: (j - i + 1) as u64,
                });
                continue;
            }
            // minimal-move trains per interval: every train over a fixed
            // subchain contributes the same rho + mu (the core-count
            // invariant), and the K-filter depends only on the cluster kind,
            // so deeper alternatives never change the enumeration's invariants
            let cfg = SearchConfig {
                budget,
                max_states,
                ..SearchConfig::default()
            };
            let out = search_trains(&sub, &cfg);
            // a found train settles the interval (rho + mu over a fixed
            // subchain is the same for every train, and the K-filter only
            // distinguishes Du Val clusters from train clusters), and so does
            // an exhausted search; a truncated search without a find leaves
            // the interval open
            if out.found.is_empty() && !(out.exhausted && !out.capped) {
                inconclusive.push((i, j));
            }
            for f in out.found {
                let first = f.train.vehicles.first().expect("non-empty train");
                let last = f.train.vehicles.last().expect("non-empty train");
                let fa = chain::log_discrepancies_recursive(first).expect("T-chain vehicle");
                let la = chain::log_discrepancies_recursive(last).expect("T-chain vehicle");
                options[i][j].push(ClusterOption {
                    alpha_left: fa.first().unwrap().clone(),
                    alpha_right: la.last().unwrap().clone(),
                    rho: (f.train.vehicles.len() - 1) as u64,
                    mu: f.train.milnor_sum() as u64,
                    cluster: Cluster::Train(f),
                });
            }
        }
    }

    let mut resolutions = Vec::new();
    let mut selection: Vec<(usize, usize, usize)> = Vec::new(); // (i, j, option index)
    enumerate_selections(n, &options, 0, &mut selection, &mut |sel| {
        if let Some(res) = build_resolution(entries, &options, sel) {
            resolutions.push(res);
        }
    });
    resolutions.sort_by_key(|r| (r.rho + r.mu, r.rho, r.intervals.clone()));
    PResolutionSet {
        resolutions,
        inconclusive_intervals: inconclusive,
    }
}

fn enumerate_selections(
    n: usize,
    options: &[Vec<Vec<ClusterOption>>],
    from: usize,
    selection: &mut Vec<(usize, usize, usize)>,
    emit: &mut dyn FnMut(&[(usize, usize, usize)]),
) {
    if from >= n {
        emit(selection);
        return;
    }
    // position `from` stays uncontracted
    enumerate_selections(n, options, from + 1, selection, emit);
    // or an interval starts here; the next interval needs a gap of one curve
    for j in from..n {
        for k in 0..options[from][j].len() {
            selection.push((from, j, k));
            enumerate_selections(n, options, j + 2, selection, emit);
            selection.pop();
        }
    }
}

fn build_resolution(
    entries: &[u32],
    options: &[Vec<Vec<ClusterOption>>],
    sel: &[(usize, usize, usize)],
) -> Option<PResolution> {
    let n = entries.len();
    let mut covered = vec![false; n];
    let mut rho: u64 = 0;
    let mut mu: u64 = 0;
    for &(i, j, k) in sel {
        for cov in covered.iter_mut().take(j + 1).skip(i) {
            *cov = true;
        }
        let opt = &options[i][j][k];
        rho += opt.rho;
        mu += opt.mu;
    }
    if !sel.is_empty() {
        // K-ampleness on every non-contracted base curve
        for u in 0..n {
            if covered[u] {
                continue;
            }
            let mut k_deg = rat_int(entries[u] as i64 - 2);
            for &(i, j, k) in sel {
                let opt = &options[i][j][k];
                if j + 1 == u {
                    k_deg += Rat::one() - opt.alpha_right.clone();
                }
                if u + 1 == i {
                    k_deg += Rat::one() - opt.alpha_left.clone();
                }
            }
            if k_deg <= Rat::zero() {
                return None;
            }
        }
    }
    rho += covered.iter().filter(|&&c| !c).count() as u64;
    Some(PResolution {
        intervals: sel.iter().map(|&(i, j, _)| (i, j)).collect(),
        clusters: sel
            .iter()
            .map(|&(i, j, k)| options[i][j][k].cluster.clone())
            .collect(),
        rho,
        mu,
    })
}

/// `lambda = min (rho + mu)` over P-resolutions; zero exactly on Wahl chains.
pub fn lambda_invariant(c: &Chain, budget: usize, max_states: usize) -> LambdaResult {
    let set = enumerate_p_resolutions(c, budget, max_states);
    let value = set
        .resolutions
        .iter()
        .map(|r| r.rho + r.mu)
        .min()
        .expect("the minimal resolution is always present");
    LambdaResult {
        value,
        exact: set.is_exact(),
    }
}
