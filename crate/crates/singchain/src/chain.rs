//! Chains of rational curves, Hirzebruch-Jung continued fractions and T-chain
//! arithmetic.
//!
//! A chain `[b_1,...,b_r]` records the exceptional curves of the minimal
//! resolution of a cyclic quotient singularity, `b_i = -E_i^2 >= 2`. The
//! continued fraction `n/a = b_1 - 1/(b_2 - 1/(...))` links it to the
//! singularity type `1/n(1,a)`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::rat::{rat, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("chain must be non-empty")]
    Empty,
    #[error("entry {0} is smaller than 2")]
    EntryTooSmall(i64),
    #[error("malformed chain literal: {0}")]
    Parse(String),
    #[error("splice 2^-1 is missing a neighbor")]
    SpliceNeighbor,
    #[error("exponent {0} is not allowed (only 2^k with k >= -1)")]
    BadExponent(i64),
    #[error("not a valid cyclic type: need 0 < a < n and gcd(a, n) = 1")]
    BadCyclicType,
    #[error("chain is not a T-chain")]
    NotTChain,
}

/// A token of an expanded chain literal: a concrete entry or a `2^-1` splice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainItem {
    Entry(i64),
    Splice,
}

/// Finite sequence of integers `>= 2`; entry `b_i = -E_i^2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain(Vec<u32>);

impl Chain {
    pub fn new(entries: Vec<u32>) -> Result<Self, ChainError> {
        if entries.is_empty() {
            return Err(ChainError::Empty);
        }
        for &e in &entries {
            if e < 2 {
                return Err(ChainError::EntryTooSmall(e as i64));
            }
        }
        Ok(Chain(entries))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entry_sum(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn reversed(&self) -> Chain {
        let mut v = self.0.clone();
        v.reverse();
        Chain(v)
    }

    pub fn is_palindrome(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    /// The smaller of the chain and its reversal in lexicographic order.
    ///
    /// Reversal equivalence is exposed explicitly, never applied silently:
    /// orientation matters for the train calculus.
    pub fn normalized(&self) -> Chain {
        let rev = self.reversed();
        if rev.0 < self.0 {
            rev
        } else {
            self.clone()
        }
    }

    /// True exactly for the Du Val chains `[2^k]` (type A_k).
    pub fn is_a_chain(&self) -> bool {
        self.0.iter().all(|&e| e == 2)
    }

    /// Resolves `2^-1` splice tokens and validates entries.
    pub fn from_items(items: &[ChainItem]) -> Result<Self, ChainError> {
        let mut out: Vec<i64> = Vec::with_capacity(items.len());
        let mut pending = false;
        for item in items {
            match item {
                ChainItem::Entry(v) => {
                    if pending {
                        let a = out.pop().expect("pending splice has a left neighbor");
                        out.push(a + v - 2);
                        pending = false;
                    } else {
                        out.push(*v);
                    }
                }
                ChainItem::Splice => {
                    if pending || out.is_empty() {
                        return Err(ChainError::SpliceNeighbor);
                    }
                    pending = true;
                }
            }
        }
        if pending {
            return Err(ChainError::SpliceNeighbor);
        }
        if out.is_empty() {
            return Err(ChainError::Empty);
        }
        let mut entries = Vec::with_capacity(out.len());
        for v in out {
            if v < 2 {
                return Err(ChainError::EntryTooSmall(v));
            }
            entries.push(v as u32);
        }
        Ok(Chain(entries))
    }

    /// Parses a chain literal like `[3,2^3,3]`, `[3,2^-1,3]` or `[2^0,5,2]`.
    pub fn parse(text: &str) -> Result<Self, ChainError> {
        Chain::from_items(&parse_items(text)?)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Tokenizes the body of a chain literal (shared with the cycle grammar).
pub(crate) fn parse_items(text: &str) -> Result<Vec<ChainItem>, ChainError> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| ChainError::Parse(format!("expected [...] around `{t}`")))?;
    let mut items = Vec::new();
    if inner.trim().is_empty() {
        return Err(ChainError::Empty);
    }
    for raw in inner.split(',') {
        let term = raw.trim();
        if let Some((base, exp)) = term.split_once('^') {
            let base = base.trim();
            if base != "2" {
                return Err(ChainError::Parse(format!(
                    "exponent sugar is only defined for base 2, got `{term}`"
                )));
            }
            let k: i64 = exp
                .trim()
                .parse()
                .map_err(|_| ChainError::Parse(format!("bad exponent in `{term}`")))?;
            if k < -1 {
                return Err(ChainError::BadExponent(k));
            }
            if k == -1 {
                items.push(ChainItem::Splice);
            } else {
                for _ in 0..k {
                    items.push(ChainItem::Entry(2));
                }
            }
        } else {
            let v: i64 = term
                .parse()
                .map_err(|_| ChainError::Parse(format!("bad entry `{term}`")))?;
            items.push(ChainItem::Entry(v));
        }
    }
    Ok(items)
}

/// The type `1/n(1,a)` of a cyclic quotient singularity, `0 < a < n`, `gcd(a,n)=1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicType {
    pub n: BigInt,
    pub a: BigInt,
}

impl CyclicType {
    pub fn new(n: BigInt, a: BigInt) -> Result<Self, ChainError> {
        if a <= BigInt::zero() || a >= n || !a.gcd(&n).is_one() {
            return Err(ChainError::BadCyclicType);
        }
        Ok(CyclicType { n, a })
    }

    /// The inverse of `a` modulo `n`; reversing the chain maps `(n,a)` to `(n,a^-1)`.
    pub fn a_inverse(&self) -> BigInt {
        let e = self.a.extended_gcd(&self.n);
        debug_assert!(e.gcd.is_one());
        let mut x = e.x % &self.n;
        if x.is_negative() {
            x += &self.n;
        }
        x
    }

    /// Canonical representative of `a` under reversal: `min(a, a^-1 mod n)`.
    pub fn canonical_a(&self) -> BigInt {
        self.a.clone().min(self.a_inverse())
    }
}

impl fmt::Display for CyclicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}(1,{})", self.n, self.a)
    }
}

/// Evaluates the negative continued fraction `b_1 - 1/(b_2 - 1/(...))` exactly.
pub fn chain_to_frac(c: &Chain) -> CyclicType {
    let mut num = BigInt::one();
    let mut den = BigInt::zero();
    for &b in c.entries().iter().rev() {
        // b - den/num = (b*num - den)/num
        let new_num = BigInt::from(b) * &num - den;
        den = num;
        num = new_num;
    }
    debug_assert!(num.gcd(&den).is_one());
    CyclicType { n: num, a: den }
}

/// The unique chain with all entries `>= 2` whose expansion equals `n/a`.
pub fn frac_to_chain(t: &CyclicType) -> Result<Chain, ChainError> {
    if t.a <= BigInt::zero() || t.a >= t.n || !t.a.gcd(&t.n).is_one() {
        return Err(ChainError::BadCyclicType);
    }
    let mut entries = Vec::new();
    let mut n = t.n.clone();
    let mut a = t.a.clone();
    while !a.is_zero() {
        // b = ceil(n/a)
        let b = (&n + &a - BigInt::one()).div_floor(&a);
        entries.push(b.to_u32().ok_or(ChainError::BadCyclicType)?);
        let next_a = &b * &a - &n;
        n = a;
        a = next_a;
    }
    Chain::new(entries)
}

/// The arithmetic class of a non-Du Val T-singularity `1/(dn^2)(1, adn-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TClass {
    pub d: BigInt,
    pub n: BigInt,
    pub a: BigInt,
}

impl TClass {
    /// Milnor number `d - 1`; Wahl singularities are exactly the `d = 1` case.
    pub fn milnor(&self) -> BigInt {
        &self.d - BigInt::one()
    }

    pub fn is_wahl(&self) -> bool {
        self.d.is_one()
    }
}

/// Recognizes non-Du Val T-chains by the arithmetic test: the cyclic type must
/// factor as `(d*n^2, a*d*n - 1)` with `1 <= a <= n-1` and `gcd(a,n) = 1`.
///
/// Pure A-chains `[2^k]` are Du Val and rejected.
pub fn is_tchain(c: &Chain) -> Option<TClass> {
    let t = chain_to_frac(c);
    if let (Some(nn), Some(aa)) = (t.n.to_u128(), t.a.to_u128()) {
        return tclass_scan_u128(nn, aa).map(|(d, n, a)| TClass {
            d: BigInt::from(d),
            n: BigInt::from(n),
            a: BigInt::from(a),
        });
    }
    tclass_scan_big(&t.n, &t.a)
}

fn tclass_scan_u128(nn: u128, aa: u128) -> Option<(u128, u128, u128)> {
    let mut n: u128 = 2;
    while n * n <= nn {
        if nn % (n * n) == 0 {
            let d = nn / (n * n);
            let dn = d * n;
            if (aa + 1) % dn == 0 {
                let a = (aa + 1) / dn;
                if a >= 1 && a <= n - 1 && gcd_u128(a, n) == 1 {
                    return Some((d, n, a));
                }
            }
        }
        n += 1;
    }
    None
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn tclass_scan_big(nn: &BigInt, aa: &BigInt) -> Option<TClass> {
    let one = BigInt::one();
    let mut n = BigInt::from(2);
    while &n * &n <= *nn {
        let sq = &n * &n;
        if (nn % &sq).is_zero() {
            let d = nn / &sq;
            let dn = &d * &n;
            let a1 = aa + &one;
            if (&a1 % &dn).is_zero() {
                let a = a1 / &dn;
                if a >= one && a <= &n - &one && a.gcd(&n).is_one() {
                    return Some(TClass { d, n, a });
                }
            }
        }
        n += 1;
    }
    None
}

/// One step of the T-chain generator: `A` is the pair `L_1 .. R_2`, `B` is `L_2 .. R_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StripOp {
    A,
    B,
}

/// A T-chain written as paired operations over the seed `L_1[2^d]R_1`.
pub struct TDerivation {
    /// Number of seed entries; equals the number of cores and the Milnor number plus one.
    pub d: usize,
    /// Position of the first seed entry in the chain.
    pub seed_offset: usize,
    /// Operations applied to the seed, outermost last.
    pub ops: Vec<StripOp>,
}

/// Strips the paired `L_i`/`R_{3-i}` operations down to the seed, if possible.
///
/// This is the structural route to T-chain-ness, independent of [`is_tchain`]'s
/// arithmetic test; the two are compared against each other in tests.
pub fn tchain_derivation(c: &Chain) -> Option<TDerivation> {
    let mut v: VecDeque<u32> = c.entries().iter().copied().collect();
    let mut ops = Vec::new();
    let mut offset = 0usize;
    loop {
        let first = *v.front().expect("non-empty");
        let last = *v.back().expect("non-empty");
        // Seed forms: [4] or [3,2,...,2,3].
        if v.len() == 1 {
            return if first == 4 {
                Some(TDerivation {
                    d: 1,
                    seed_offset: offset,
                    ops,
                })
            } else {
                None
            };
        }
        if first >= 3 && last >= 3 {
            let is_seed =
                first == 3 && last == 3 && v.iter().skip(1).take(v.len() - 2).all(|&e| e == 2);
            return if is_seed {
                Some(TDerivation {
                    d: v.len(),
                    seed_offset: offset,
                    ops,
                })
            } else {
                None
            };
        }
        if first == 2 && last >= 3 {
            // c = L_2 [inner] R_1
            v.pop_front();
            *v.back_mut().unwrap() -= 1;
            offset += 1;
            ops.push(StripOp::B);
        } else if last == 2 && first >= 3 {
            // c = L_1 [inner] R_2
            v.pop_back();
            *v.front_mut().unwrap() -= 1;
            ops.push(StripOp::A);
        } else {
            // both ends are 2: only Du Val chains do this, and they are not T-chains
            return None;
        }
        if *v.front().unwrap() < 2 || *v.back().unwrap() < 2 {
            return None;
        }
    }
}

/// Log discrepancies of a T-chain by the inductive rule
/// `a'_0 = 1/(1+a_r)`, `a'_i = a_i/(1+a_r)` for `L_2[..]R_1`, mirrored for `L_1[..]R_2`.
///
/// The seed `L_1[2^d]R_1` has all log discrepancies `1/2`.
pub fn log_discrepancies_recursive(c: &Chain) -> Result<Vec<Rat>, ChainError> {
    let deriv = tchain_derivation(c).ok_or(ChainError::NotTChain)?;
    let mut alphas: Vec<Rat> = vec![rat(1, 2); deriv.d];
    for op in deriv.ops.iter().rev() {
        match op {
            StripOp::B => {
                let scale = (Rat::one() + alphas.last().unwrap().clone()).recip();
                let mut next = Vec::with_capacity(alphas.len() + 1);
                next.push(scale.clone());
                next.extend(alphas.iter().map(|a| a * &scale));
                alphas = next;
            }
            StripOp::A => {
                let scale = (Rat::one() + alphas.first().unwrap().clone()).recip();
                let mut next: Vec<Rat> = alphas.iter().map(|a| a * &scale).collect();
                next.push(scale);
                alphas = next;
            }
        }
    }
    Ok(alphas)
}

/// Indices attaining the smallest log discrepancy of a T-chain.
///
/// Their cardinality equals `d` of the [`TClass`].
pub fn cores(c: &Chain) -> Result<Vec<usize>, ChainError> {
    let alphas = log_discrepancies_recursive(c)?;
    let min = alphas.iter().min().expect("non-empty").clone();
    Ok(alphas
        .iter()
        .enumerate()
        .filter(|(_, a)| **a == min)
        .map(|(i, _)| i)
        .collect())
}

/// All T-chains with `len <= max_length` and entry sum `<= max_entry_sum`,
/// generated as the closure of the seeds `L_1[2^d]R_1` under the paired
/// operations, in a deterministic canonical order.
pub fn generate_tchains(max_length: usize, max_entry_sum: u32) -> Vec<Chain> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue: VecDeque<Vec<u32>> = VecDeque::new();
    // Seeds: [4] (d=1) and [3,2^{d-2},3] (d>=2).
    if max_length >= 1 && max_entry_sum >= 4 {
        queue.push_back(vec![4]);
    }
    let mut d = 2usize;
    while d <= max_length && (2 * d + 2) as u32 <= max_entry_sum {
        let mut seed = vec![2u32; d];
        seed[0] = 3;
        seed[d - 1] = 3;
        queue.push_back(seed);
        d += 1;
    }
    while let Some(v) = queue.pop_front() {
        if !seen.insert(v.clone()) {
            continue;
        }
        if v.len() + 1 <= max_length && v.iter().sum::<u32>() + 3 <= max_entry_sum {
            // A: L_1 .. R_2
            let mut a = v.clone();
            a[0] += 1;
            a.push(2);
            queue.push_back(a);
            // B: L_2 .. R_1
            let mut b = Vec::with_capacity(v.len() + 1);
            b.push(2);
            b.extend_from_slice(&v);
            *b.last_mut().unwrap() += 1;
            queue.push_back(b);
        }
    }
    let mut out: Vec<Chain> = seen.into_iter().map(Chain).collect();
    out.sort_by(|x, y| (x.len(), x.entries()).cmp(&(y.len(), y.entries())));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use num_bigint::BigInt;

    fn ch(s: &str) -> Chain {
        Chain::parse(s).unwrap()
    }

    #[test]
    fn parse_sugar_and_splice() {
        assert_eq!(ch("[3,2^3,3]").entries(), &[3, 2, 2, 2, 3]);
        assert_eq!(ch("[3,2^-1,3]").entries(), &[4]);
        assert_eq!(ch("[2^0,5,2]").entries(), &[5, 2]);
        assert_eq!(ch("[ 3 , 2^2 ]").entries(), &[3, 2, 2]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Chain::parse("[2^-1,3]"), Err(ChainError::SpliceNeighbor)));
        assert!(matches!(Chain::parse("[3,2^-1]"), Err(ChainError::SpliceNeighbor)));
        assert_eq!(ch("[2,2^-1,2]").entries(), &[2]);
        assert!(matches!(Chain::parse("[3,2^-1,0]"), Err(ChainError::EntryTooSmall(1))));
        assert!(matches!(Chain::parse("[2^-2]"), Err(ChainError::BadExponent(-2))));
        assert!(matches!(Chain::parse("[3^2]"), Err(ChainError::Parse(_))));
        assert!(matches!(Chain::parse("[]"), Err(ChainError::Empty)));
        assert!(matches!(Chain::parse("[1]"), Err(ChainError::EntryTooSmall(1))));
        assert!(Chain::parse("3,2").is_err());
    }

    #[test]
    fn display_is_expanded() {
        assert_eq!(ch("[3,2^2,3]").to_string(), "[3,2,2,3]");
    }

    #[test]
    fn frac_examples() {
        let t = chain_to_frac(&ch("[5,2]"));
        assert_eq!((t.n, t.a), (BigInt::from(9), BigInt::from(2)));
        let t = chain_to_frac(&ch("[4]"));
        assert_eq!((t.n, t.a), (BigInt::from(4), BigInt::from(1)));
        let t = chain_to_frac(&ch("[2,4,3,3]"));
        assert_eq!((t.n, t.a), (BigInt::from(50), BigInt::from(29)));
    }

    #[test]
    fn frac_to_chain_examples() {
        let t = CyclicType::new(BigInt::from(9), BigInt::from(2)).unwrap();
        assert_eq!(frac_to_chain(&t).unwrap(), ch("[5,2]"));
        let t = CyclicType::new(BigInt::from(4), BigInt::from(1)).unwrap();
        assert_eq!(frac_to_chain(&t).unwrap(), ch("[4]"));
        let t = CyclicType::new(BigInt::from(12), BigInt::from(5)).unwrap();
        assert_eq!(frac_to_chain(&t).unwrap(), ch("[3,2,3]"));
    }

    #[test]
    fn bad_cyclic_types() {
        assert!(CyclicType::new(BigInt::from(4), BigInt::from(2)).is_err());
        assert!(CyclicType::new(BigInt::from(4), BigInt::from(4)).is_err());
        assert!(CyclicType::new(BigInt::from(4), BigInt::from(0)).is_err());
    }

    #[test]
    fn reversal_inverts_a() {
        let c = ch("[2,4,3,3]");
        let t = chain_to_frac(&c);
        let tr = chain_to_frac(&c.reversed());
        assert_eq!(tr.n, t.n);
        assert_eq!(tr.a, t.a_inverse());
    }

    #[test]
    fn tchain_examples() {
        let t = is_tchain(&ch("[5,2]")).unwrap();
        assert_eq!(
            (t.d.clone(), t.n.clone(), t.a.clone()),
            (BigInt::from(1), BigInt::from(3), BigInt::from(1))
        );
        assert!(t.is_wahl());

        let t = is_tchain(&ch("[2,4,3,3]")).unwrap();
        assert_eq!(
            (t.d.clone(), t.n.clone(), t.a.clone()),
            (BigInt::from(2), BigInt::from(5), BigInt::from(3))
        );
        assert_eq!(t.milnor(), BigInt::from(1));

        assert!(is_tchain(&ch("[3,2]")).is_none());
        assert!(is_tchain(&ch("[2,2,2]")).is_none());
        assert!(is_tchain(&ch("[6]")).is_none());
    }

    #[test]
    fn recursive_log_discrepancies() {
        assert_eq!(log_discrepancies_recursive(&ch("[4]")).unwrap(), vec![rat(1, 2)]);
        assert_eq!(
            log_discrepancies_recursive(&ch("[2,5]")).unwrap(),
            vec![rat(2, 3), rat(1, 3)]
        );
        assert_eq!(
            log_discrepancies_recursive(&ch("[3,3]")).unwrap(),
            vec![rat(1, 2), rat(1, 2)]
        );
        assert_eq!(
            log_discrepancies_recursive(&ch("[2,4,3,3]")).unwrap(),
            vec![rat(3, 5), rat(1, 5), rat(1, 5), rat(2, 5)]
        );
        assert!(log_discrepancies_recursive(&ch("[3,2]")).is_err());
    }

    #[test]
    fn cores_examples() {
        assert_eq!(cores(&ch("[4]")).unwrap(), vec![0]);
        assert_eq!(cores(&ch("[2,4,3,3]")).unwrap(), vec![1, 2]);
        assert_eq!(cores(&ch("[3,2,3]")).unwrap(), vec![0, 1, 2]);
        assert!(cores(&ch("[3,2]")).is_err());
    }

    #[test]
    fn cores_match_derivation_seed() {
        for c in generate_tchains(7, 24) {
            let deriv = tchain_derivation(&c).unwrap();
            let by_alpha = cores(&c).unwrap();
            let by_seed: Vec<usize> = (deriv.seed_offset..deriv.seed_offset + deriv.d).collect();
            assert_eq!(by_alpha, by_seed, "chain {c}");
            let t = is_tchain(&c).unwrap();
            assert_eq!(t.d, BigInt::from(deriv.d), "chain {c}");
        }
    }

    #[test]
    fn generator_small_bounds() {
        let set = generate_tchains(1, 4);
        assert_eq!(set, vec![ch("[4]")]);
        let set = generate_tchains(2, 7);
        assert_eq!(set, vec![ch("[4]"), ch("[2,5]"), ch("[3,3]"), ch("[5,2]")]);
        assert!(generate_tchains(3, 10).contains(&ch("[6,2,2]")));
    }
}
