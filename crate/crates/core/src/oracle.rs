//! Brute-force verifiers. Each one recomputes a module result along an
//! independent route (enumeration, direct iteration, a different algorithm)
//! so that disagreements surface as test failures.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::modular::{mod_pow, primitive_roots_mod_p};
use crate::exactnum::{FiniteAbelianGroup, IntegerMatrix, PrimeModulus};
use crate::lens::{kernel_patterns, tangential_with, CoefficientPattern, LensSpace};
use crate::repring::{KRingPresentation, VirtualRep};

pub const MAX_ENUM_P: u64 = 13;
pub const MAX_ENUM_N: u64 = 8;
pub const MAX_COKERNEL: u128 = 10_000;

/// All lens spaces L(p; a₁…aₙ) with sorted weights in 1 … (p-1)/2.
pub fn enumerate_lens_spaces(p: u64, n: u64) -> Result<Vec<LensSpace>> {
    if p > MAX_ENUM_P || n > MAX_ENUM_N {
        return Err(Error::EnumerationBound { p, n });
    }
    enumerate_lens_spaces_unbounded(PrimeModulus::new(p)?, n)
}

pub fn enumerate_lens_spaces_unbounded(p: PrimeModulus, n: u64) -> Result<Vec<LensSpace>> {
    if n == 0 {
        return Err(Error::NoWeights);
    }
    let top = p.half() as i64;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n as usize);
    fn rec(
        p: PrimeModulus,
        start: i64,
        top: i64,
        left: u64,
        current: &mut Vec<i64>,
        out: &mut Vec<LensSpace>,
    ) -> Result<()> {
        if left == 0 {
            out.push(LensSpace::with_prime(p, current)?);
            return Ok(());
        }
        for a in start..=top {
            current.push(a);
            rec(p, a, top, left - 1, current, out)?;
            current.pop();
        }
        Ok(())
    }
    rec(p, 1, top, n, &mut current, &mut out)?;
    Ok(out)
}

/// Folded, sorted s·a, computed without the library's normalization.
fn scaled_weights(p: u64, weights: &[u64], s: u64) -> Vec<u64> {
    let mut w: Vec<u64> = weights
        .iter()
        .map(|&a| {
            let r = a * s % p;
            r.min(p - r)
        })
        .collect();
    w.sort_unstable();
    w
}

/// Explicit s-search isometry test; returns the smallest unit s.
pub fn isometric_by_search(l1: &LensSpace, l2: &LensSpace) -> Option<u64> {
    let p = l1.prime().get();
    if p != l2.prime().get() || l1.n() != l2.n() {
        return None;
    }
    (1..p).find(|&s| scaled_weights(p, l1.weights(), s) == l2.weights())
}

/// Partition of all spaces for (p, n) into isometry classes, each class and
/// the list of classes ordered lexicographically by weights.
pub fn exhaustive_isometry_classes(p: u64, n: u64) -> Result<Vec<Vec<LensSpace>>> {
    classes_of(enumerate_lens_spaces(p, n)?)
}

pub fn classes_of(spaces: Vec<LensSpace>) -> Result<Vec<Vec<LensSpace>>> {
    let mut classes: BTreeMap<Vec<u64>, Vec<LensSpace>> = BTreeMap::new();
    for l in spaces {
        let p = l.prime().get();
        let key = (1..p)
            .map(|s| scaled_weights(p, l.weights(), s))
            .min()
            .expect("p > 1");
        classes.entry(key).or_default().push(l);
    }
    Ok(classes.into_values().collect())
}

/// Result of the exhaustive check on tangentially equivalent pairs in the
/// range p - 1 ≤ n ≤ 2(p - 1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub p: u64,
    pub n_min: u64,
    pub n_max: u64,
    pub spaces: usize,
    pub pairs: usize,
    pub tangential_pairs: usize,
    /// Tangential pairs with no isometry; any entry is a counterexample to rigidity.
    pub non_isometric: Vec<(LensSpace, LensSpace)>,
    /// Swap patterns seen among kernel alignments of distinct tangential pairs.
    pub swaps: Vec<(LensSpace, LensSpace, u64, CoefficientPattern)>,
    pub pattern_violations: Vec<(LensSpace, LensSpace, u64, CoefficientPattern)>,
}

impl RigidityReport {
    pub fn ok(&self) -> bool {
        self.non_isometric.is_empty() && self.pattern_violations.is_empty()
    }
}

pub fn verify_prop41(p: u64) -> Result<RigidityReport> {
    if ![3, 5, 7].contains(&p) {
        return Err(Error::PrimeBeyondBound { p, bound: 7 });
    }
    let pm = PrimeModulus::new(p)?;
    let (n_min, n_max) = (p - 1, 2 * (p - 1));
    let mut report = RigidityReport {
        p,
        n_min,
        n_max,
        spaces: 0,
        pairs: 0,
        tangential_pairs: 0,
        non_isometric: Vec::new(),
        swaps: Vec::new(),
        pattern_violations: Vec::new(),
    };
    for n in n_min..=n_max {
        let k = KRingPresentation::shared(pm, n)?;
        let spaces = enumerate_lens_spaces_unbounded(pm, n)?;
        report.spaces += spaces.len();
        for (i, a) in spaces.iter().enumerate() {
            for b in &spaces[i..] {
                report.pairs += 1;
                if !tangential_with(a, b, &k)?.equivalent {
                    continue;
                }
                report.tangential_pairs += 1;
                if isometric_by_search(a, b).is_none() {
                    report.non_isometric.push((a.clone(), b.clone()));
                }
                if a.weights() == b.weights() {
                    continue;
                }
                for (s, pat) in kernel_patterns(a, b, &k)? {
                    let entry = (a.clone(), b.clone(), s, pat);
                    if !pat.conforms() {
                        report.pattern_violations.push(entry);
                    } else if matches!(pat, CoefficientPattern::Swap { .. }) {
                        report.swaps.push(entry);
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Upper-triangular row echelon form with positive pivots and reduced
/// entries above them (rows of the result span the same lattice).
fn hermite(m: &IntegerMatrix<i64>) -> Vec<(usize, Vec<i128>)> {
    let cols = m.cols();
    let mut a: Vec<Vec<i128>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|&x| x as i128).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        loop {
            let best = (r..a.len())
                .filter(|&i| a[i][c] != 0)
                .min_by_key(|&i| a[i][c].abs());
            let Some(b) = best else { break };
            a.swap(r, b);
            let mut done = true;
            for i in r + 1..a.len() {
                let q = a[i][c].div_euclid(a[r][c]);
                let src = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&src) {
                    *x -= q * y;
                }
                done &= a[i][c] == 0;
            }
            if done {
                break;
            }
        }
        if r >= a.len() || a[r][c] == 0 {
            continue;
        }
        if a[r][c] < 0 {
            a[r].iter_mut().for_each(|x| *x = -*x);
        }
        for i in 0..r {
            let q = a[i][c].div_euclid(a[r][c]);
            let src = a[r].clone();
            for (x, y) in a[i].iter_mut().zip(&src) {
                *x -= q * y;
            }
        }
        pivots.push((c, a[r].clone()));
        r += 1;
    }
    pivots
}

fn in_lattice(h: &[(usize, Vec<i128>)], x: &[i128]) -> bool {
    let mut x = x.to_vec();
    for (c, row) in h {
        if x[*c] % row[*c] != 0 {
            return false;
        }
        let q = x[*c] / row[*c];
        for (xi, ri) in x.iter_mut().zip(row) {
            *xi -= q * ri;
        }
    }
    x.iter().all(|&v| v == 0)
}

fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Structure of the cokernel Z^cols / rowspace(m) by coset enumeration.
///
/// Coset representatives are the points of the box spanned by the Hermite
/// pivots; the p-primary structure comes from counting p^i-torsion points.
pub fn brute_cokernel(m: &IntegerMatrix<i64>) -> Result<FiniteAbelianGroup<i64>> {
    let h = hermite(m);
    if h.len() < m.cols() {
        return Err(Error::InfiniteCokernel);
    }
    let order: u128 = h.iter().map(|(c, row)| row[*c] as u128).product();
    if order > MAX_COKERNEL {
        return Err(Error::CokernelTooLarge(order));
    }
    let sizes: Vec<i128> = h.iter().map(|(c, row)| row[*c]).collect();
    let mut points: Vec<Vec<i128>> = vec![Vec::new()];
    for &s in &sizes {
        points = points
            .into_iter()
            .flat_map(|pt| {
                (0..s).map(move |x| {
                    let mut v = pt.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }

    // per prime q: exponents of the cyclic q-factors
    let mut per_prime: Vec<Vec<u32>> = Vec::new();
    for q in prime_factors(order) {
        let q = q as i128;
        let mut counts = vec![1u128];
        let mut qi = 1i128;
        loop {
            qi *= q;
            let c = points
                .iter()
                .filter(|pt| in_lattice(&h, &pt.iter().map(|x| x * qi).collect::<Vec<_>>()))
                .count() as u128;
            counts.push(c);
            if c == *counts.iter().rev().nth(1).expect("two entries") && counts.len() > 2 {
                break;
            }
        }
        let logs: Vec<u32> = counts.iter().map(|&c| c.ilog(q as u128)).collect();
        // number of cyclic factors of exponent ≥ i is logs[i] - logs[i-1]
        let mut exps = Vec::new();
        for i in 1..logs.len() {
            let at_least_i = logs[i] - logs[i - 1];
            let at_least_next = logs.get(i + 1).map_or(0, |l| l - logs[i]);
            for _ in 0..at_least_i - at_least_next {
                exps.push(i as u32);
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        per_prime.push(exps.into_iter().map(|e| (q as u32, e)).map(|(q, e)| q.pow(e)).collect());
    }
    let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
    let mut factors: Vec<i64> = (0..len)
        .map(|i| {
            per_prime
                .iter()
                .map(|v| v.get(i).copied().unwrap_or(1) as i64)
                .product()
        })
        .collect();
    factors.reverse();
    Ok(FiniteAbelianGroup::new(factors).expect("constructed as a divisibility chain"))
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det_i128(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut with_last: Vec<Vec<usize>> = subsets(n - 1, k - 1);
    with_last.iter_mut().for_each(|s| s.push(n - 1));
    let mut out = subsets(n - 1, k);
    out.extend(with_last);
    out
}

/// Invariant factors (those ≠ 1) and free rank of the cokernel via
/// determinantal divisors: d_k = gcd of all k×k minors, s_k = d_k / d_{k-1}.
pub fn determinantal_invariants(m: &IntegerMatrix<i64>) -> (Vec<i64>, usize) {
    let (r, c) = (m.rows(), m.cols());
    let mut d = vec![1i128];
    for k in 1..=r.min(c) {
        let mut g = 0i128;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let sub: Vec<Vec<i128>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| m[(i, j)] as i128).collect())
                    .collect();
                g = g.gcd(&det_i128(&sub));
            }
        }
        if g == 0 {
            break;
        }
        d.push(g);
    }
    let rank = d.len() - 1;
    let factors = d
        .windows(2)
        .map(|w| (w[1] / w[0]) as i64)
        .filter(|&s| s != 1)
        .collect();
    (factors, c - rank)
}

/// Truncated polynomial coordinates of (1 + σ)^j - 1 by repeated
/// multiplication.
fn character_by_multiplication(j: u64, gens: usize) -> Vec<BigInt> {
    let mut poly = vec![BigInt::zero(); gens + 1];
    poly[0] = BigInt::one();
    for _ in 0..j {
        for k in (1..=gens).rev() {
            let prev = poly[k - 1].clone();
            poly[k] += prev;
        }
    }
    poly[1..].to_vec()
}

/// Kernel test by lattice membership of the complex class in the relation
/// lattice, in place of Smith-form reduction.
pub fn in_kernel_by_lattice(v: &VirtualRep, n: u64) -> Result<bool> {
    if v.dim() != 0 {
        return Err(Error::NonzeroVirtualDimension(v.dim()));
    }
    let p = v.prime();
    let k = KRingPresentation::shared(p, n)?;
    let gens = k.generator_count();
    let mut x = vec![BigInt::zero(); gens];
    for j in 1..p.get() {
        let m = v.coefficient(j as i64);
        if m == 0 {
            continue;
        }
        for (xi, c) in x.iter_mut().zip(character_by_multiplication(j, gens)) {
            *xi += c * m;
        }
    }
    let rel = k.relations();
    let small = IntegerMatrix::from_rows(
        gens,
        rel.row_vec()
            .into_iter()
            .map(|r| r.iter().map(|b| i64::try_from(b).expect("small relation")).collect())
            .collect(),
    );
    let h = hermite(&small);
    let xs: Vec<i128> = x
        .iter()
        .map(|b| i128::try_from(b).expect("small coordinates"))
        .collect();
    Ok(in_lattice(&h, &xs))
}

/// Tangential test rebuilt from the pieces: for each unit e with
/// ∏a ≡ ±eⁿ∏b, fold e⁻¹·a by hand and test the difference by lattice
/// membership.
pub fn tangential_by_lattice(l1: &LensSpace, l2: &LensSpace) -> Result<bool> {
    let p = l1.prime().get();
    if p != l2.prime().get() || l1.n() != l2.n() {
        return Ok(false);
    }
    let n = l1.n();
    let prod = |l: &LensSpace| {
        let raw = l.weights().iter().fold(1u64, |acc, &a| acc * a % p);
        if l.orientation() < 0 { (p - raw) % p } else { raw }
    };
    let (pa, pb) = (prod(l1), prod(l2));
    let pm = l1.prime();
    for e in 1..p {
        let rhs = mod_pow(e, n, p) * pb % p;
        if rhs != pa && (p - rhs) % p != pa {
            continue;
        }
        let e_inv = (1..p).find(|&x| x * e % p == 1).expect("unit");
        let v = VirtualRep::from_weights(pm, &scaled_weights(p, l1.weights(), e_inv))?;
        let w = VirtualRep::from_weights(pm, l2.weights())?;
        if in_kernel_by_lattice(&v.sub(&w), n)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// p^{n-1}: one Z/p per even cell in dimensions 2 … 2n-2.
pub fn cell_count_order(p: u64, n: u64) -> BigInt {
    BigInt::from(p).pow((n - 1) as u32)
}

/// Smallest residue of multiplicative order p(p-1) mod p², found by
/// iterating powers.
pub fn primitive_root_by_orders(p: u64) -> u64 {
    let sq = p * p;
    (2..sq)
        .find(|&g| {
            if g % p == 0 {
                return false;
            }
            let mut x = g;
            let mut ord = 1;
            while x != 1 {
                x = x * g % sq;
                ord += 1;
            }
            ord == p * (p - 1)
        })
        .expect("exists")
}

/// Loop and circle orders by direct iteration of y ↦ y + x and y ↦ y∘x.
pub fn circle_order_by_iteration(p: u64, m: u32, x: u64) -> (u64, u64) {
    let modulus = (p as u128).pow(m + 1);
    let x = x as u128 % modulus;
    let (mut y, mut add) = (x, 1u64);
    while y != 0 {
        y = (y + x) % modulus;
        add += 1;
    }
    let (mut y, mut circ) = (x, 1u64);
    while y != 0 {
        y = (y + x + y * x) % modulus;
        circ += 1;
    }
    (add, circ)
}

/// Determinant by fraction-free elimination.
fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// h⁻(p) from the determinant of multiplication by Σ_{i<h} (2rᵢ - p) xⁱ on
/// Z[x]/(x^h + 1), h = (p-1)/2, rᵢ = gⁱ mod p for the second-smallest
/// primitive root g (the only one when p = 3).
pub fn h_minus_maillet(p: u64) -> Result<BigInt> {
    let pm = PrimeModulus::new(p)?;
    let mut roots = primitive_roots_mod_p(pm);
    let first = roots.next().expect("primitive root");
    let g = roots.next().unwrap_or(first);
    let h = ((p - 1) / 2) as usize;
    let q: Vec<BigInt> = (0..h)
        .map(|i| BigInt::from(2 * mod_pow(g, i as u64, p) as i64 - p as i64))
        .collect();
    // row e, column j: coefficient of x^e in x^j·Q reduced by x^h = -1
    let mat: Vec<Vec<BigInt>> = (0..h)
        .map(|e| {
            (0..h)
                .map(|j| if e >= j { q[e - j].clone() } else { -&q[e + h - j] })
                .collect()
        })
        .collect();
    let det = bareiss(mat);
    let value = BigRational::from_integer(det)
        * BigRational::new(BigInt::from(-1), BigInt::from(2 * p)).pow(h as i32)
        * BigRational::from_integer(BigInt::from(2 * p));
    if !value.is_integer() || !value.is_positive() {
        return Err(Error::Inconsistency(format!("Maillet evaluation for p = {p} gave {value}")));
    }
    Ok(value.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_lens_spaces(5, 1).unwrap().len(), 2);
        assert_eq!(enumerate_lens_spaces(5, 2).unwrap().len(), 3);
        assert_eq!(enumerate_lens_spaces(7, 2).unwrap().len(), 6);
        assert_eq!(enumerate_lens_spaces(17, 2), Err(Error::EnumerationBound { p: 17, n: 2 }));
    }

    #[test]
    fn isometry_class_counts() {
        assert_eq!(exhaustive_isometry_classes(5, 1).unwrap().len(), 1);
        assert_eq!(exhaustive_isometry_classes(5, 2).unwrap().len(), 2);
        for n in 1..=6 {
            assert_eq!(exhaustive_isometry_classes(3, n).unwrap().len(), 1);
        }
    }

    #[test]
    fn cokernel_examples() {
        assert!(brute_cokernel(&IntegerMatrix::<i64>::identity(3)).unwrap().is_trivial());
        let g = brute_cokernel(&IntegerMatrix::from_rows(1, vec![vec![7i64]])).unwrap();
        assert_eq!(g.invariant_factors(), &[7]);
        let g = brute_cokernel(&IntegerMatrix::from_rows(2, vec![vec![2i64, 0], vec![0, 6]])).unwrap();
        assert_eq!(g.invariant_factors(), &[2, 6]);
        let g = brute_cokernel(&IntegerMatrix::from_rows(2, vec![vec![4i64, 0], vec![0, 6]])).unwrap();
        assert_eq!(g.invariant_factors(), &[2, 12]);
        assert_eq!(
            brute_cokernel(&IntegerMatrix::<i64>::zeros(1, 2)),
            Err(Error::InfiniteCokernel)
        );
        assert_eq!(determinantal_invariants(&IntegerMatrix::<i64>::zeros(1, 2)), (vec![], 2));
    }

    #[test]
    fn maillet_small_primes() {
        for p in [3u64, 5, 7, 11, 13, 17, 19] {
            assert_eq!(h_minus_maillet(p).unwrap(), BigInt::one(), "p = {p}");
        }
        assert_eq!(h_minus_maillet(23).unwrap(), BigInt::from(3));
    }

    #[test]
    fn primitive_roots_by_orders() {
        assert_eq!(primitive_root_by_orders(3), 2);
        assert_eq!(primitive_root_by_orders(5), 2);
        assert_eq!(primitive_root_by_orders(7), 3);
    }

    #[test]
    fn circle_iteration() {
        assert_eq!(circle_order_by_iteration(5, 2, 5), (25, 25));
        assert_eq!(circle_order_by_iteration(5, 2, 0), (1, 1));
    }
}
