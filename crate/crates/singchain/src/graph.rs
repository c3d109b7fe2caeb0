//! Dual graphs of resolutions: exact Gram matrices, negative definiteness,
//! log discrepancy solves and the strictly lc fork shapes.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::chain::Chain;
use crate::rat::{Rat, rat_int};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must be non-empty")]
    Empty,
    #[error("vertex weight {0} is smaller than 2")]
    WeightTooSmall(u32),
    #[error("invalid edge ({0}, {1})")]
    BadEdge(usize, usize),
    #[error("graph shape does not match its edge set")]
    ShapeMismatch,
    #[error("intersection form is not negative definite; the graph is not contractible")]
    NotContractible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphShape {
    Chain,
    Cycle,
    Tree,
}

/// Log canonicity read off from the discrepancy profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcStatus {
    /// All log discrepancies positive.
    Klt,
    /// Minimum log discrepancy exactly zero.
    StrictlyLc,
    /// Some log discrepancy negative.
    NotLc,
}

impl LcStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            LcStatus::Klt => "klt",
            LcStatus::StrictlyLc => "strictly lc",
            LcStatus::NotLc => "not lc",
        }
    }
}

/// Exact solution of the canonical-cycle system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogDiscProfile {
    /// One log discrepancy per vertex.
    pub alphas: Vec<Rat>,
    /// `K_p^2 + K_p.E = sum alpha_i (w_i - 2)`.
    pub kp_invariant: Rat,
    pub lc: LcStatus,
}

/// A weighted dual graph of rational curves.
///
/// For `shape = Cycle` the cyclic adjacency is implied by vertex order: the
/// two-component cycle has intersection 2 and the one-component cycle is a
/// nodal curve labeled by `b + 2` as usual.
#[derive(Clone, Debug)]
pub struct DualGraph {
    weights: Vec<u32>,
    edges: Vec<(usize, usize)>,
    shape: GraphShape,
}

impl DualGraph {
    pub fn from_chain(c: &Chain) -> DualGraph {
        let weights = c.entries().to_vec();
        let edges = (1..weights.len()).map(|i| (i - 1, i)).collect();
        DualGraph {
            weights,
            edges,
            shape: GraphShape::Chain,
        }
    }

    /// Cycle graph from label entries. For `r = 1` the label is `b + 2` for a
    /// nodal curve of self-intersection `-b`, so the label must be at least 3.
    pub fn cycle(labels: &[u32]) -> Result<DualGraph, GraphError> {
        if labels.is_empty() {
            return Err(GraphError::Empty);
        }
        if labels.len() == 1 {
            if labels[0] < 3 {
                return Err(GraphError::WeightTooSmall(labels[0]));
            }
        } else {
            for &w in labels {
                if w < 2 {
                    return Err(GraphError::WeightTooSmall(w));
                }
            }
        }
        let r = labels.len();
        let edges = match r {
            1 => vec![],
            2 => vec![(0, 1)],
            _ => (0..r).map(|i| (i, (i + 1) % r)).collect(),
        };
        Ok(DualGraph {
            weights: labels.to_vec(),
            edges,
            shape: GraphShape::Cycle,
        })
    }

    pub fn tree(weights: Vec<u32>, edges: Vec<(usize, usize)>) -> Result<DualGraph, GraphError> {
        let n = weights.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        for &w in &weights {
            if w < 2 {
                return Err(GraphError::WeightTooSmall(w));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &edges {
            if u >= n || v >= n || u == v {
                return Err(GraphError::BadEdge(u, v));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::BadEdge(u, v));
            }
        }
        if edges.len() + 1 != n || !is_connected(n, &edges) {
            return Err(GraphError::ShapeMismatch);
        }
        Ok(DualGraph {
            weights,
            edges,
            shape: GraphShape::Tree,
        })
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn shape(&self) -> GraphShape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Gram matrix of the configuration: `diag(-w_i)` plus intersection numbers.
    ///
    /// Cycle conventions: `r = 2` components meet twice; the `r = 1` nodal curve
    /// absorbs its node into the diagonal, giving the 1x1 matrix `[-(w - 2)]`.
    pub fn gram(&self) -> Vec<Vec<BigInt>> {
        let n = self.len();
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            m[i][i] = -BigInt::from(self.weights[i]);
        }
        if self.shape == GraphShape::Cycle && n == 1 {
            m[0][0] = -BigInt::from(self.weights[0] - 2);
            return m;
        }
        let mult = if self.shape == GraphShape::Cycle && n == 2 {
            2
        } else {
            1
        };
        for &(u, v) in &self.edges {
            m[u][v] = BigInt::from(mult);
            m[v][u] = BigInt::from(mult);
        }
        m
    }

    /// Exact negative definiteness via the leading principal minors of the
    /// negated Gram matrix (fraction-free Bareiss elimination).
    pub fn is_negative_definite(&self) -> bool {
        let g = self.gram();
        let n = self.len();
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| -g[i][j].clone()).collect())
            .collect();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() || m[k][k].is_negative() {
                // Bareiss keeps m[k][k] equal to the k-th leading minor; a zero
                // or negative pivot refutes positive definiteness.
                return false;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    let (q, r) = num_integer::Integer::div_rem(&num, &prev);
                    debug_assert!(r.is_zero());
                    m[i][j] = q;
                }
            }
            prev = m[k][k].clone();
        }
        true
    }

    /// Solves the canonical-cycle system `sum_j (a_j - 1)(E_j . E_i) = w_i - 2`
    /// exactly and reports the profile.
    pub fn log_discrepancies(&self) -> Result<LogDiscProfile, GraphError> {
        if !self.is_negative_definite() {
            return Err(GraphError::NotContractible);
        }
        let g = self.gram();
        let n = self.len();
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Rat::from_integer(g[i][j].clone()))
                    .collect()
            })
            .collect();
        let mut rhs: Vec<Rat> = (0..n).map(|i| rat_int(self.weights[i] as i64 - 2)).collect();
        // Gaussian elimination with exact pivoting; the matrix is invertible.
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .expect("negative definite matrices are invertible");
            a.swap(col, pivot_row);
            rhs.swap(col, pivot_row);
            let pivot = a[col][col].clone();
            for j in col..n {
                a[col][j] = &a[col][j] / &pivot;
            }
            rhs[col] = &rhs[col] / &pivot;
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in col..n {
                        let sub = &a[col][j] * &f;
                        a[r][j] = &a[r][j] - &sub;
                    }
                    let sub = &rhs[col] * &f;
                    rhs[r] = &rhs[r] - &sub;
                }
            }
        }
        let alphas: Vec<Rat> = rhs.iter().map(|x| x + Rat::one()).collect();
        let kp_invariant = alphas
            .iter()
            .zip(&self.weights)
            .map(|(a, &w)| a * rat_int(w as i64 - 2))
            .fold(Rat::zero(), |acc, x| acc + x);
        let min = alphas.iter().min().expect("non-empty").clone();
        let lc = if min > Rat::zero() {
            LcStatus::Klt
        } else if min.is_zero() {
            LcStatus::StrictlyLc
        } else {
            LcStatus::NotLc
        };
        Ok(LogDiscProfile {
            alphas,
            kp_invariant,
            lc,
        })
    }
}

fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// The four dual-graph shapes of Q-Gorenstein smoothable strictly lc rational
/// singularities, with their smoothability side conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrictLcClass {
    /// Central chain `[b_1..b_n]` with two 2-leaves at each end; smoothable iff
    /// `sum (b_i - 3) <= 3`.
    TwoTwoTwoTwo { bs: Vec<u32>, smoothable: bool },
    /// Center `b` with three 3-leaves; smoothable iff `b` is 2, 3 or 4.
    ThreeThreeThree { b: u32, smoothable: bool },
    /// Center `b` with leaves 2, 4, 4; smoothable iff `b` is 2 or 3.
    TwoFourFour { b: u32, smoothable: bool },
    /// Center `b` with leaves 2, 3, 6; smoothable iff `b` is 2.
    TwoThreeSix { b: u32, smoothable: bool },
    NotStrictlyLcRational,
}

#[derive(Clone, Debug)]
pub struct StrictLcReport {
    pub class: StrictLcClass,
    pub kp_invariant: Rat,
    pub profile: LogDiscProfile,
}

/// Matches a contractible dual graph against the strictly lc fork shapes.
///
/// Chains and other non-fork graphs classify as `NotStrictlyLcRational`;
/// a non-contractible graph is an error.
pub fn classify_strictly_lc(g: &DualGraph) -> Result<StrictLcReport, GraphError> {
    let profile = g.log_discrepancies()?;
    let report = |class: StrictLcClass, profile: LogDiscProfile| StrictLcReport {
        class,
        kp_invariant: profile.kp_invariant.clone(),
        profile,
    };
    if g.shape() != GraphShape::Tree {
        return Ok(report(StrictLcClass::NotStrictlyLcRational, profile));
    }
    let n = g.len();
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in g.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    if !adj.iter().any(|nb| nb.len() >= 3) {
        return Ok(report(StrictLcClass::NotStrictlyLcRational, profile));
    }
    let leaves: Vec<usize> = (0..n).filter(|&v| adj[v].len() == 1).collect();
    let spine: Vec<usize> = (0..n).filter(|&v| adj[v].len() > 1).collect();

    // Star with three leaves: shapes (ii)-(iv).
    if spine.len() == 1 && leaves.len() == 3 {
        let b = g.weights()[spine[0]];
        let mut lw: Vec<u32> = leaves.iter().map(|&v| g.weights()[v]).collect();
        lw.sort_unstable();
        let class = match lw.as_slice() {
            [3, 3, 3] => Some(StrictLcClass::ThreeThreeThree {
                b,
                smoothable: (2..=4).contains(&b),
            }),
            [2, 4, 4] => Some(StrictLcClass::TwoFourFour {
                b,
                smoothable: b == 2 || b == 3,
            }),
            [2, 3, 6] => Some(StrictLcClass::TwoThreeSix {
                b,
                smoothable: b == 2,
            }),
            _ => None,
        };
        if let Some(class) = class {
            return Ok(report(class, profile));
        }
    }

    // Shape (i): spine path with two 2-leaves at each end.
    if leaves.len() == 4 && leaves.iter().all(|&v| g.weights()[v] == 2) {
        let matches = if spine.len() == 1 {
            adj[spine[0]].len() == 4
        } else {
            // The spine must be a path whose ends carry the leaves.
            let spine_set: std::collections::HashSet<usize> = spine.iter().copied().collect();
            let spine_deg = |v: usize| adj[v].iter().filter(|u| spine_set.contains(u)).count();
            let ends: Vec<usize> = spine.iter().copied().filter(|&v| spine_deg(v) == 1).collect();
            ends.len() == 2
                && spine.iter().all(|&v| spine_deg(v) <= 2)
                && spine.iter().all(|&v| {
                    let leaf_count = adj[v].iter().filter(|u| !spine_set.contains(u)).count();
                    if ends.contains(&v) {
                        leaf_count == 2
                    } else {
                        leaf_count == 0
                    }
                })
        };
        if matches {
            let bs = spine_path_weights(g, &spine, &adj);
            let excess: i64 = bs.iter().map(|&b| b as i64 - 3).sum();
            return Ok(report(
                StrictLcClass::TwoTwoTwoTwo {
                    bs,
                    smoothable: excess <= 3,
                },
                profile,
            ));
        }
    }

    Ok(report(StrictLcClass::NotStrictlyLcRational, profile))
}

fn spine_path_weights(g: &DualGraph, spine: &[usize], adj: &[Vec<usize>]) -> Vec<u32> {
    if spine.len() == 1 {
        return vec![g.weights()[spine[0]]];
    }
    let spine_set: std::collections::HashSet<usize> = spine.iter().copied().collect();
    let start = *spine
        .iter()
        .find(|&&v| adj[v].iter().filter(|u| spine_set.contains(u)).count() == 1)
        .expect("path has an end");
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while order.len() < spine.len() {
        let next = adj[cur]
            .iter()
            .copied()
            .find(|&v| spine_set.contains(&v) && v != prev)
            .expect("path continues");
        order.push(next);
        prev = cur;
        cur = next;
    }
    order.into_iter().map(|v| g.weights()[v]).collect()
}

/// Builds the type (i) fork graph `(2,2,2,2)[b_1..b_n]`.
pub fn fork_2222(bs: &[u32]) -> Result<DualGraph, GraphError> {
    let n = bs.len();
    assert!(n >= 1);
    let mut weights = bs.to_vec();
    weights.extend_from_slice(&[2, 2, 2, 2]);
    let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    edges.push((0, n));
    edges.push((0, n + 1));
    edges.push((n - 1, n + 2));
    edges.push((n - 1, n + 3));
    DualGraph::tree(weights, edges)
}

/// Builds the star fork with center `b` and three leaf weights.
pub fn fork_star(b: u32, leaves: [u32; 3]) -> Result<DualGraph, GraphError> {
    DualGraph::tree(
        vec![b, leaves[0], leaves[1], leaves[2]],
        vec![(0, 1), (0, 2), (0, 3)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Chain;
    use crate::rat::{rat, rat_int};

    fn ch(s: &str) -> Chain {
        Chain::parse(s).unwrap()
    }

    #[test]
    fn chain_profiles() {
        let p = DualGraph::from_chain(&ch("[4]")).log_discrepancies().unwrap();
        assert_eq!(p.alphas, vec![rat(1, 2)]);
        assert_eq!(p.kp_invariant, rat_int(1));
        assert_eq!(p.lc, LcStatus::Klt);

        let p = DualGraph::from_chain(&ch("[2,4,3,3]"))
            .log_discrepancies()
            .unwrap();
        assert_eq!(p.alphas, vec![rat(3, 5), rat(1, 5), rat(1, 5), rat(2, 5)]);
        assert_eq!(p.kp_invariant, rat_int(1));
    }

    #[test]
    fn du_val_chains_have_trivial_canonical_cycle() {
        for k in 1..=6 {
            let p = DualGraph::from_chain(&Chain::new(vec![2; k]).unwrap())
                .log_discrepancies()
                .unwrap();
            assert!(p.alphas.iter().all(|a| a.is_integer() && *a == rat_int(1)));
            assert_eq!(p.kp_invariant, rat_int(0));
        }
    }

    #[test]
    fn cusp_cycles_are_strictly_lc_with_zero_invariant() {
        let g = DualGraph::cycle(&[5, 2, 2]).unwrap();
        let p = g.log_discrepancies().unwrap();
        assert!(p.alphas.iter().all(|a| a == &rat_int(0)));
        assert_eq!(p.kp_invariant, rat_int(0));
        assert_eq!(p.lc, LcStatus::StrictlyLc);

        // two-component and nodal cycles use the adjusted conventions
        for g in [
            DualGraph::cycle(&[3, 2]).unwrap(),
            DualGraph::cycle(&[4]).unwrap(),
        ] {
            let p = g.log_discrepancies().unwrap();
            assert!(p.alphas.iter().all(|a| a == &rat_int(0)));
            assert_eq!(p.kp_invariant, rat_int(0));
        }
    }

    #[test]
    fn all_two_cycle_is_not_contractible() {
        let g = DualGraph::cycle(&[2, 2, 2]).unwrap();
        assert!(!g.is_negative_definite());
        assert!(g.log_discrepancies().is_err());
        assert!(DualGraph::cycle(&[2]).is_err());
    }

    #[test]
    fn classify_fork_shapes() {
        let r = classify_strictly_lc(&fork_2222(&[4]).unwrap()).unwrap();
        assert_eq!(
            r.class,
            StrictLcClass::TwoTwoTwoTwo {
                bs: vec![4],
                smoothable: true
            }
        );
        assert_eq!(r.kp_invariant, rat_int(0));
        assert_eq!(r.profile.lc, LcStatus::StrictlyLc);

        let r = classify_strictly_lc(&fork_star(5, [3, 3, 3]).unwrap()).unwrap();
        assert_eq!(
            r.class,
            StrictLcClass::ThreeThreeThree {
                b: 5,
                smoothable: false
            }
        );
        assert_eq!(r.kp_invariant, rat_int(1));

        let r = classify_strictly_lc(&fork_star(2, [2, 3, 6]).unwrap()).unwrap();
        assert_eq!(
            r.class,
            StrictLcClass::TwoThreeSix {
                b: 2,
                smoothable: true
            }
        );
        assert_eq!(r.kp_invariant, rat_int(1));

        let r = classify_strictly_lc(&DualGraph::from_chain(&ch("[3,2,3]"))).unwrap();
        assert_eq!(r.class, StrictLcClass::NotStrictlyLcRational);

        // (2,2,2,2)[2] is the affine D4 graph: not contractible
        assert!(classify_strictly_lc(&fork_2222(&[2]).unwrap()).is_err());
    }

    #[test]
    fn classify_long_spine() {
        let r = classify_strictly_lc(&fork_2222(&[4, 2, 3]).unwrap()).unwrap();
        match r.class {
            StrictLcClass::TwoTwoTwoTwo { bs, smoothable } => {
                assert!(bs == vec![4, 2, 3] || bs == vec![3, 2, 4]);
                assert!(smoothable); // 1 + (-1) + 0 = 0 <= 3
            }
            other => panic!("unexpected class {other:?}"),
        }
        assert_eq!(r.kp_invariant, rat_int(0));
    }
}
