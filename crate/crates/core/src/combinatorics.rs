//! The unit-mass, ±1-velocity problem: how likely is it that `n` particles
//! with independent fair-coin velocities end up as a single cluster?
//!
//! A sequence forms one cluster exactly when its momentum diagram (a simple
//! random walk) stays strictly above the chord from the origin to its
//! endpoint. For each endpoint `c` those walks are counted either directly
//! (a DP over heights) or as North-East lattice paths inside a Young
//! diagram, whose number is a binomial determinant.
//!
//! Walk conventions: a walk of length `n` ending at `c` has `(n + c) / 2` up
//! steps and `(n - c) / 2` down steps. In the lattice picture an up step is a
//! North move and a down step an East move.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::predict_clusters;
use crate::error::{Error, Result};
use crate::numerics::{binom_plus, pow2, Rational};
use crate::system::ParticleSystem;

/// Exhaustive routines enumerate `2^n` sequences; this is their ceiling.
pub const ENUMERATION_LIMIT: u32 = 22;
/// Exact closed-form evaluation budget for the trend table.
pub const TREND_LIMIT: u32 = 30;
/// Tractability guard for the lattice-path DP (rows and first-row width).
pub const BRUTEFORCE_SHAPE_LIMIT: usize = 12;

/// Weakly decreasing tuple of non-negative row lengths, top row first.
/// Zero rows are allowed and stand for a vertical run of single points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct YoungShape(Vec<u64>);

impl YoungShape {
    pub fn new(rows: Vec<u64>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Validation("a shape needs at least one row".into()));
        }
        if let Some(i) = rows.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::Validation(format!(
                "rows must be weakly decreasing: row {} = {} < row {} = {}",
                i + 1,
                rows[i],
                i + 2,
                rows[i + 1]
            )));
        }
        Ok(YoungShape(rows))
    }

    pub fn rows(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Length `n` and endpoint `c` of a ±1 walk, with `c` reachable from 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WalkSpec {
    n: u32,
    c: i64,
}

impl WalkSpec {
    pub fn new(n: u32, c: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("walk length must be positive".into()));
        }
        if c.abs() > n as i64 || (n as i64 - c).is_odd() {
            return Err(Error::Domain(format!(
                "endpoint {c} is not reachable in {n} steps"
            )));
        }
        Ok(WalkSpec { n, c })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn ups(&self) -> u64 {
        ((self.n as i64 + self.c) / 2) as u64
    }

    pub fn downs(&self) -> u64 {
        ((self.n as i64 - self.c) / 2) as u64
    }
}

/// Every reachable endpoint `n, n - 2, ..., -n`.
pub fn endpoints(n: u32) -> impl Iterator<Item = i64> {
    let n = n as i64;
    (0..=n).map(move |k| n - 2 * k)
}

/// Shape of the largest Young diagram inside the `downs x ups` box lying
/// strictly above the chord, for interior endpoints `|c| <= n - 4`.
///
/// Row `j` (from the top, `j = 1 .. ups - 1`) has length
/// `ceil((downs / ups) * (ups - j) - 1)`.
pub fn young_shape_for(n: u32, c: i64) -> Result<YoungShape> {
    let spec = WalkSpec::new(n, c)?;
    if c.abs() > n as i64 - 4 {
        return Err(Error::Domain(format!(
            "endpoint {c} is a boundary case for n = {n}; need |c| <= n - 4"
        )));
    }
    let (ups, downs) = (spec.ups() as i64, spec.downs() as i64);
    let ratio = Rational::new(downs, ups)?;
    let rows = (1..ups)
        .map(|j| {
            let len = (&ratio * Rational::from(ups - j) - Rational::one()).ceil();
            u64::try_from(len).map_err(|_| Error::Domain(format!("negative row length at j = {j}")))
        })
        .collect::<Result<Vec<_>>>()?;
    YoungShape::new(rows)
}

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination. Every intermediate division is exact.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let size = m.len();
    if size == 0 {
        return BigInt::one();
    }
    let mut sign_flip = false;
    let mut prev_pivot = BigInt::one();
    for k in 0..size - 1 {
        if m[k][k].is_zero() {
            match (k + 1..size).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev_pivot;
            }
        }
        prev_pivot = m[k][k].clone();
    }
    let det = m[size - 1][size - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Number of North-East lattice paths from the south-west to the north-east
/// corner of the diagram, as `det( binom_+(row_j + 1, j - i + 1) )`.
pub fn count_paths(shape: &YoungShape) -> BigInt {
    let rows = shape.rows();
    let k = rows.len();
    let matrix = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| binom_plus(rows[j] + 1, j as i64 - i as i64 + 1))
                .collect()
        })
        .collect();
    bareiss_determinant(matrix)
}

/// Direct count of the same lattice paths by dynamic programming over the
/// lattice points of the diagram.
///
/// With `k` rows, the row occupying heights `[y, y + 1]` is row `k - y`
/// (1-based from the top), so the points available at height `y < k` are
/// `x = 0 ..= rows[k - y]`, and at the top `x = 0 ..= rows[1]`. A North
/// move from `(x, y)` needs `x <= rows[k - y]`.
pub fn count_paths_bruteforce(shape: &YoungShape) -> Result<BigInt> {
    let rows = shape.rows();
    let k = rows.len();
    if k > BRUTEFORCE_SHAPE_LIMIT {
        return Err(Error::Guard {
            what: "rows",
            value: k as u64,
            limit: BRUTEFORCE_SHAPE_LIMIT as u64,
        });
    }
    if rows[0] > BRUTEFORCE_SHAPE_LIMIT as u64 {
        return Err(Error::Guard {
            what: "first row length",
            value: rows[0],
            limit: BRUTEFORCE_SHAPE_LIMIT as u64,
        });
    }
    let width_at = |y: usize| -> usize {
        if y < k {
            rows[k - 1 - y] as usize
        } else {
            rows[0] as usize
        }
    };

    // ways[x] at the current height
    let mut ways = vec![BigInt::zero(); width_at(0) + 1];
    ways[0] = BigInt::one();
    for x in 1..ways.len() {
        ways[x] = ways[x - 1].clone();
    }
    for y in 1..=k {
        let below = width_at(y - 1);
        let mut next = vec![BigInt::zero(); width_at(y) + 1];
        for x in 0..next.len() {
            let north = if x <= below { ways[x].clone() } else { BigInt::zero() };
            let east = if x > 0 { next[x - 1].clone() } else { BigInt::zero() };
            next[x] = north + east;
        }
        ways = next;
    }
    Ok(ways[rows[0] as usize].clone())
}

/// Number of ±1 walks from 0 to `c` in `n` steps with `S_j > (c / n) j` for
/// every `0 < j < n`. Heights are compared as `n S_j > c j`, exactly.
pub fn ssrw_strict_above_count(spec: WalkSpec) -> BigInt {
    let (n, c) = (spec.n as i64, spec.c);
    // heights -n..=n, offset by n
    let offset = n;
    let mut ways = vec![BigInt::zero(); (2 * n + 1) as usize];
    ways[offset as usize] = BigInt::one();
    for j in 1..=n {
        let mut next = vec![BigInt::zero(); ways.len()];
        for (h_idx, w) in ways.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let h = h_idx as i64 - offset;
            for step in [-1i64, 1] {
                let s = h + step;
                if s.abs() > n {
                    continue;
                }
                let allowed = if j < n { n * s > c * j } else { s == c };
                if allowed {
                    next[(s + offset) as usize] += w;
                }
            }
        }
        ways = next;
    }
    ways[(c + offset) as usize].clone()
}

fn check_enumeration_guard(n: u32) -> Result<()> {
    if n > ENUMERATION_LIMIT {
        return Err(Error::Guard {
            what: "n",
            value: n as u64,
            limit: ENUMERATION_LIMIT as u64,
        });
    }
    Ok(())
}

/// Sum over `c` of the strict-above walk counts, divided by `2^n`.
pub fn one_cluster_probability_by_walks(n: u32) -> Result<Rational> {
    if n < 1 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let total: BigInt = endpoints(n)
        .map(|c| ssrw_strict_above_count(WalkSpec::new(n, c).expect("endpoint from endpoints()")))
        .sum();
    Rational::new(total, pow2(n))
}

/// Exact probability that `n` unit masses with fair ±1 velocities form a
/// single cluster, assembled from boundary terms plus determinant terms.
///
/// Endpoints `c = ±n` never qualify and `c = ±(n - 2)` contribute one walk
/// each. Interior endpoints pair up under `c -> -c` (the box is transposed
/// and the path counts agree), so only `ups = 2 ..` up to the midpoint are
/// evaluated, doubled, with the `c = 0` term counted once when `n` is even.
pub fn one_cluster_probability(n: u32) -> Result<Rational> {
    if n < 2 {
        return Err(Error::Domain(format!("n must be at least 2, got {n}")));
    }
    if n == 2 {
        // only (+, -) collides
        return Rational::new(1, 4);
    }
    let mut walks = BigInt::from(2);
    let det_term = |ups: u32| -> Result<BigInt> {
        let c = 2 * ups as i64 - n as i64;
        Ok(count_paths(&young_shape_for(n, c)?))
    };
    let half = n / 2;
    if n.is_even() {
        walks += det_term(half)?;
        for ups in 2..half {
            walks += det_term(ups)? * 2;
        }
    } else {
        for ups in 2..=half {
            walks += det_term(ups)? * 2;
        }
    }
    Rational::new(walks, pow2(n))
}

/// Every ±1 sequence of length `n` as bits (bit `i` set = particle `i + 1`
/// moves right), counted in parallel by predicted cluster count.
fn cluster_count_histogram(n: u32) -> BTreeMap<usize, u64> {
    const CHUNK: u64 = 1 << 12;
    let total = 1u64 << n;
    let chunks = total.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut hist = BTreeMap::new();
            for bits in chunk * CHUNK..((chunk + 1) * CHUNK).min(total) {
                let system = ParticleSystem::unit_pm_one((0..n).map(|i| bits >> i & 1 == 1))
                    .expect("unit positions are increasing");
                *hist.entry(predict_clusters(&system).len()).or_insert(0u64) += 1;
            }
            hist
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        })
}

/// Fraction of the `2^n` sequences predicted to form exactly one cluster.
pub fn one_cluster_probability_bruteforce(n: u32) -> Result<Rational> {
    if n < 2 {
        return Err(Error::Domain(format!("n must be at least 2, got {n}")));
    }
    check_enumeration_guard(n)?;
    let hist = cluster_count_histogram(n);
    Rational::new(hist.get(&1).copied().unwrap_or(0), pow2(n))
}

/// Exact distribution of the number of clusters over all `2^n` sequences.
pub fn cluster_count_distribution_exact(n: u32) -> Result<BTreeMap<usize, Rational>> {
    if n < 1 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    check_enumeration_guard(n)?;
    let denom = pow2(n);
    cluster_count_histogram(n)
        .into_iter()
        .map(|(k, count)| Ok((k, Rational::new(count, denom.clone())?)))
        .collect()
}

/// `C_k = binom(2k, k) / (k + 1)`.
pub fn catalan(k: u64) -> BigInt {
    binom_plus(2 * k, k as i64) / (k + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BridgeProbability {
    /// P(walk of length 2n is a bridge and strictly positive in between).
    pub joint: Rational,
    /// The same event conditioned on being a bridge.
    pub conditional: Rational,
}

/// Strictly positive bridges of length `2n`: `C_{n-1}` of them, out of
/// `4^n` walks and `binom(2n, n)` bridges.
pub fn positive_bridge_probability(n: u64) -> Result<BridgeProbability> {
    if n < 1 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let count = catalan(n - 1);
    Ok(BridgeProbability {
        joint: Rational::new(count.clone(), num_traits::pow(BigInt::from(4), n as usize))?,
        conditional: Rational::new(count, binom_plus(2 * n, n as i64))?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrendRow {
    pub n: u32,
    pub p: Rational,
    pub n_times_p: Rational,
}

/// `p_n` and `n p_n` for `n = 2 ..= n_max`, exact.
pub fn asymptotic_trend_report(n_max: u32) -> Result<Vec<TrendRow>> {
    if n_max > TREND_LIMIT {
        return Err(Error::Guard {
            what: "n_max",
            value: n_max as u64,
            limit: TREND_LIMIT as u64,
        });
    }
    (2..=n_max)
        .map(|n| {
            let p = one_cluster_probability(n)?;
            Ok(TrendRow {
                n,
                n_times_p: &p * Rational::from(n as i64),
                p,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(rows: &[u64]) -> YoungShape {
        YoungShape::new(rows.to_vec()).unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn walks(n: u32, c: i64) -> BigInt {
        ssrw_strict_above_count(WalkSpec::new(n, c).unwrap())
    }

    /// Enumerates all 2^n step sequences directly.
    fn walks_by_enumeration(n: u32, c: i64) -> u64 {
        (0u64..1 << n)
            .filter(|bits| {
                let mut s = 0i64;
                for j in 1..=n as i64 {
                    s += if bits >> (j - 1) & 1 == 1 { 1 } else { -1 };
                    if j < n as i64 && n as i64 * s <= c * j {
                        return false;
                    }
                }
                s == c
            })
            .count() as u64
    }

    #[test]
    fn shape_validation() {
        assert!(YoungShape::new(vec![1, 2]).is_err());
        assert!(YoungShape::new(vec![]).is_err());
        assert!(YoungShape::new(vec![0, 0, 0]).is_ok());
    }

    #[test]
    fn young_shapes() {
        assert_eq!(young_shape_for(6, 0).unwrap(), shape(&[1, 0]));
        assert_eq!(young_shape_for(8, 0).unwrap(), shape(&[2, 1, 0]));
        // ups = 2, downs = 4: one row, ceil(2 * 1 - 1) = 1
        assert_eq!(young_shape_for(6, -2).unwrap(), shape(&[1]));
        assert_eq!(count_paths(&young_shape_for(6, -2).unwrap()), walks(6, -2));
        assert!(young_shape_for(6, 4).is_err());
        assert!(young_shape_for(6, 1).is_err());
        assert!(young_shape_for(6, -6).is_err());
    }

    #[test]
    fn determinant_path_counts() {
        assert_eq!(count_paths(&shape(&[4, 2, 1, 0, 0])), BigInt::from(19));
        assert_eq!(count_paths(&shape(&[0, 0, 0, 0])), BigInt::one());
        assert_eq!(count_paths(&shape(&[1])), BigInt::from(2));
        assert_eq!(count_paths(&shape(&[0])), BigInt::one());
    }

    #[test]
    fn dp_path_counts() {
        assert_eq!(count_paths_bruteforce(&shape(&[4, 2, 1, 0, 0])).unwrap(), BigInt::from(19));
        assert_eq!(count_paths_bruteforce(&shape(&[0])).unwrap(), BigInt::one());
        // 2x2 block of boxes: binom(4, 2)
        assert_eq!(count_paths_bruteforce(&shape(&[2, 2])).unwrap(), BigInt::from(6));
        assert_eq!(count_paths(&shape(&[2, 2])), BigInt::from(6));
        assert!(matches!(
            count_paths_bruteforce(&shape(&[13])),
            Err(Error::Guard { .. })
        ));
        assert!(count_paths_bruteforce(&YoungShape::new(vec![0; 13]).unwrap()).is_err());
    }

    #[test]
    fn bareiss_handles_pivoting() {
        let m = |rows: &[&[i64]]| -> Vec<Vec<BigInt>> {
            rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
        };
        assert_eq!(bareiss_determinant(m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(bareiss_determinant(m(&[&[2, 3, 1], &[4, 1, -3], &[0, 5, 2]])), BigInt::from(30));
        assert_eq!(bareiss_determinant(m(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(bareiss_determinant(vec![]), BigInt::one());
    }

    #[test]
    fn walk_counts() {
        assert_eq!(walks(2, 0), BigInt::one());
        assert_eq!(walks(4, 2), BigInt::one());
        assert_eq!(walks(3, 3), BigInt::zero());
        assert!(WalkSpec::new(4, 1).is_err());
        assert!(WalkSpec::new(4, 6).is_err());
        for n in 1..=12u32 {
            for c in endpoints(n) {
                assert_eq!(walks(n, c), BigInt::from(walks_by_enumeration(n, c)), "n={n} c={c}");
            }
        }
    }

    #[test]
    fn transpose_symmetry() {
        for n in 1..=20u32 {
            for c in endpoints(n) {
                assert_eq!(walks(n, c), walks(n, -c));
            }
        }
    }

    #[test]
    fn interior_endpoints_match_determinants() {
        for n in 4..=24u32 {
            for c in endpoints(n).filter(|c| c.abs() <= n as i64 - 4) {
                let lam = young_shape_for(n, c).unwrap();
                assert_eq!(count_paths(&lam), walks(n, c), "n={n} c={c} shape={lam:?}");
            }
        }
    }

    #[test]
    fn small_probabilities() {
        assert_eq!(one_cluster_probability(2).unwrap(), q("1/4"));
        assert_eq!(one_cluster_probability(3).unwrap(), q("1/4"));
        assert_eq!(one_cluster_probability(4).unwrap(), q("3/16"));
        // c = ±1 each admit two walks, plus the two boundary walks
        assert_eq!(one_cluster_probability(5).unwrap(), q("3/16"));
        assert!(one_cluster_probability(1).is_err());
        assert_eq!(one_cluster_probability_bruteforce(2).unwrap(), q("1/4"));
        assert_eq!(one_cluster_probability_bruteforce(4).unwrap(), q("3/16"));
        assert!(one_cluster_probability_bruteforce(23).is_err());
    }

    #[test]
    fn three_routes_agree() {
        for n in 2..=12u32 {
            let closed = one_cluster_probability(n).unwrap();
            assert_eq!(closed, one_cluster_probability_bruteforce(n).unwrap(), "n={n}");
            assert_eq!(closed, one_cluster_probability_by_walks(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn distributions() {
        let d2 = cluster_count_distribution_exact(2).unwrap();
        assert_eq!(d2, BTreeMap::from([(1, q("1/4")), (2, q("3/4"))]));
        let d1 = cluster_count_distribution_exact(1).unwrap();
        assert_eq!(d1, BTreeMap::from([(1, q("1"))]));
        for n in 1..=12u32 {
            let d = cluster_count_distribution_exact(n).unwrap();
            assert_eq!(d.values().sum::<Rational>(), Rational::one());
            if n >= 2 {
                assert_eq!(d[&1], one_cluster_probability(n).unwrap());
            }
            // n clusters iff no collision: all -1 before all +1
            assert_eq!(d[&(n as usize)], Rational::new(n + 1, pow2(n)).unwrap());
        }
        assert!(cluster_count_distribution_exact(0).is_err());
        assert!(cluster_count_distribution_exact(23).is_err());
    }

    #[test]
    fn catalan_numbers() {
        assert_eq!(catalan(0), BigInt::one());
        assert_eq!(catalan(3), BigInt::from(5));
        assert_eq!(catalan(10), BigInt::from(16796));
        // convolution recurrence C_{k+1} = sum C_i C_{k-i}
        for k in 0..25u64 {
            let conv: BigInt = (0..=k).map(|i| catalan(i) * catalan(k - i)).sum();
            assert_eq!(catalan(k + 1), conv);
        }
    }

    #[test]
    fn bridge_probabilities() {
        let b1 = positive_bridge_probability(1).unwrap();
        assert_eq!((b1.joint, b1.conditional), (q("1/4"), q("1/2")));
        let b2 = positive_bridge_probability(2).unwrap();
        assert_eq!((b2.joint, b2.conditional), (q("1/16"), q("1/6")));
        for n in 1..=12u64 {
            let b = positive_bridge_probability(n).unwrap();
            let bridges = Rational::new(binom_plus(2 * n, n as i64), num_traits::pow(BigInt::from(4), n as usize)).unwrap();
            assert_eq!(b.joint, &b.conditional * &bridges);
            assert_eq!(walks(2 * n as u32, 0), catalan(n - 1));
        }
        assert!(positive_bridge_probability(0).is_err());
    }

    #[test]
    fn trend_table() {
        let rows = asymptotic_trend_report(10).unwrap();
        assert_eq!(rows.len(), 9);
        assert_eq!(rows[0].p, q("1/4"));
        assert_eq!(rows[1].p, q("1/4"));
        assert_eq!(rows[2].p, q("3/16"));
        for r in &rows {
            assert_eq!(r.n_times_p, &r.p * Rational::from(r.n as i64));
        }
        assert!(asymptotic_trend_report(31).is_err());
    }
}
