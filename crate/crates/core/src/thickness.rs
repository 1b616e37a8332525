//! Tangential thickness: the θ_k filtration of the normal invariants of a
//! lens space, desuspension orders, the circle-operation model, and
//! per-pair thickness reports.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{p_adic_valuation, PrimeModulus};
use crate::ktorsion::{low_codim_detectors, LowCodimDetectors};
use crate::lens::{isometric, tangential_verdict, LensSpace, NotTangentialReason};
use crate::rho::{rho_difference, RhoVerdict};

/// p^exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u64,
    pub exponent: u32,
}

impl PrimePower {
    pub fn new(p: u64, exponent: u32) -> Self {
        Self { p, exponent }
    }

    pub fn value(&self) -> BigUint {
        BigUint::from(self.p).pow(self.exponent)
    }

    pub fn is_one(&self) -> bool {
        self.exponent == 0
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent {
            0 => write!(f, "1"),
            1 => write!(f, "{}", self.p),
            e => write!(f, "{}^{}", self.p, e),
        }
    }
}

/// Order of θ_{2j+2}/θ_{2j}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientOrder {
    Trivial,
    CyclicOfOrderP,
    /// The exceptional index is not determined; this quotient may be either.
    TrivialOrCyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ExceptionalIndex {
    /// n ≢ 0 mod p-1: every quotient in range is nontrivial.
    Absent,
    Pinned { j0: u32 },
    /// Exactly one trivial quotient, position undetermined. The conjectured
    /// value is an annotation, never used as data.
    Unknown { conjectured: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaFiltration {
    pub p: u64,
    pub n: u64,
    /// ⌊n/(p-1)⌋.
    pub m: u32,
    /// Order of T(L).
    pub t_order: PrimePower,
    /// Order of the image T'(L) of T(L) in [L, G/Top].
    pub tprime_order: PrimePower,
    /// θ_{2j+2}/θ_{2j} for j = 1 … m.
    pub quotients: Vec<QuotientOrder>,
    pub exceptional_j0: ExceptionalIndex,
    /// Order of the summand E₀K of the p-local K-theory.
    pub e0k_order: PrimePower,
    /// 2m + 2: tangentially equivalent lens spaces become homeomorphic
    /// after crossing with R^k for every k at least this.
    pub stable_codim: u64,
}

/// Possible tangential thickness values of a homotopy structure whose normal
/// invariant lies in θ_{2j+2} but not θ_{2j}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThicknessInterval {
    pub j: u32,
    pub lo: u64,
    pub hi: u64,
    /// False when the quotient at j may be trivial, so the stratum may be empty.
    pub realized: bool,
}

impl ThetaFiltration {
    /// Orders of all quotients, when they are determined.
    pub fn quotient_orders(&self) -> Option<Vec<u64>> {
        self.quotients
            .iter()
            .map(|q| match q {
                QuotientOrder::Trivial => Some(1),
                QuotientOrder::CyclicOfOrderP => Some(self.p),
                QuotientOrder::TrivialOrCyclic => None,
            })
            .collect()
    }

    /// Every assignment of orders to the quotients compatible with what is
    /// known (one assignment unless the exceptional index is undetermined).
    pub fn admissible_assignments(&self) -> Vec<Vec<u64>> {
        match self.exceptional_j0 {
            ExceptionalIndex::Unknown { .. } => (1..=self.m)
                .map(|j0| {
                    (1..=self.m)
                        .map(|j| if j == j0 { 1 } else { self.p })
                        .collect()
                })
                .collect(),
            _ => vec![self.quotient_orders().expect("determined quotients")],
        }
    }

    /// Bounds on log_p |θ_k| over all admissible assignments.
    pub fn theta_exponent_bounds(&self, k: u64) -> (u32, u32) {
        let exps = |a: &[u64], upto: u64| -> u32 {
            // θ_{2j} is the product of the quotients with index < j
            a.iter()
                .take(upto.saturating_sub(1) as usize)
                .filter(|&&q| q != 1)
                .count() as u32
        };
        let mut lo = u32::MAX;
        let mut hi = 0;
        for a in self.admissible_assignments() {
            let (l, h) = if k.is_multiple_of(2) || k <= 3 {
                let e = exps(&a, k / 2);
                (e, e)
            } else {
                (exps(&a, k / 2), exps(&a, k / 2 + 1))
            };
            lo = lo.min(l);
            hi = hi.max(h);
        }
        (lo, hi)
    }

    /// Thickness values for structures whose normal invariant first enters
    /// the filtration at θ_{2j+2}. θ₃ = θ₂ = 0 forces thickness 4 for j = 1.
    pub fn thickness_profile(&self) -> Vec<ThicknessInterval> {
        self.quotients
            .iter()
            .enumerate()
            .filter(|(_, q)| **q != QuotientOrder::Trivial)
            .map(|(i, q)| {
                let j = i as u32 + 1;
                let hi = 2 * j as u64 + 2;
                ThicknessInterval {
                    j,
                    lo: if j == 1 { hi } else { hi - 1 },
                    hi,
                    realized: *q == QuotientOrder::CyclicOfOrderP,
                }
            })
            .collect()
    }

    /// Structural invariants, checked on construction.
    pub fn check(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::Inconsistency(format!("theta filtration p = {}, n = {}: {what}", self.p, self.n)));
        if self.quotients.len() != self.m as usize {
            return fail("wrong number of quotients");
        }
        for a in self.admissible_assignments() {
            let product = a.iter().fold(BigUint::from(1u8), |acc, &q| acc * q);
            if product != self.tprime_order.value() {
                return fail("quotient product differs from |T'(L)|");
            }
            let trivial = a.iter().filter(|&&q| q == 1).count();
            let expected = usize::from(self.n.is_multiple_of(self.p - 1));
            if trivial != expected {
                return fail("wrong number of trivial quotients");
            }
        }
        Ok(())
    }
}

pub fn theta_filtration(p: PrimeModulus, n: u64) -> Result<ThetaFiltration> {
    if n < 3 {
        return Err(Error::DimensionOutOfRange {
            n,
            reason: "the thickness filtration needs n >= 3",
        });
    }
    let q = p.get();
    let m = (n / (q - 1)) as u32;
    let divisible = n.is_multiple_of(q - 1);
    let exceptional_j0 = if !divisible {
        ExceptionalIndex::Absent
    } else if (m as u64) < q {
        ExceptionalIndex::Pinned { j0: 1 }
    } else {
        ExceptionalIndex::Unknown { conjectured: 1 }
    };
    let quotients = (1..=m)
        .map(|j| match exceptional_j0 {
            ExceptionalIndex::Absent => QuotientOrder::CyclicOfOrderP,
            ExceptionalIndex::Pinned { j0 } if j == j0 => QuotientOrder::Trivial,
            ExceptionalIndex::Pinned { .. } => QuotientOrder::CyclicOfOrderP,
            ExceptionalIndex::Unknown { .. } => QuotientOrder::TrivialOrCyclic,
        })
        .collect();
    let f = ThetaFiltration {
        p: q,
        n,
        m,
        t_order: PrimePower::new(q, m),
        tprime_order: PrimePower::new(q, if divisible { m - 1 } else { m }),
        quotients,
        exceptional_j0,
        e0k_order: PrimePower::new(q, ((n - 1) / (q - 1)) as u32),
        stable_codim: 2 * m as u64 + 2,
    };
    f.check()?;
    Ok(f)
}

/// Where a stable class of order p^t first desuspends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Desuspension {
    pub order_exponent: u32,
    /// Minimal k with p^t | p^k.
    pub k: u32,
    /// 2k - 1, or `None` for the trivial class, which desuspends fully.
    pub sphere_dim: Option<u32>,
    /// Set when k = m, outside the range 1 ≤ k ≤ m - 1 where the
    /// order criterion is established.
    pub extrapolated: bool,
}

pub fn desuspension_min_codim(t: u32, filtration: &ThetaFiltration) -> Result<Desuspension> {
    if t > filtration.m {
        return Err(Error::OrderExponentOutOfRange { t, m: filtration.m });
    }
    Ok(Desuspension {
        order_exponent: t,
        k: t,
        sphere_dim: (t > 0).then(|| 2 * t - 1),
        extrapolated: t > 0 && t == filtration.m,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleOrders {
    pub loop_order: u64,
    pub circle_order: u64,
}

/// Orders of x ∈ (p) ⊂ Z/p^{m+1} under addition and under the circle
/// operation x∘y = x + y + xy.
pub fn circle_order(p: PrimeModulus, m: u32, x: u64) -> Result<CircleOrders> {
    let q = p.get() as u128;
    let modulus = q.pow(m + 1);
    let x = x as u128 % modulus;
    if !x.is_multiple_of(q) {
        return Err(Error::NotInIdeal(x as u64));
    }
    let additive = |y: u128| {
        let mut ord = 1u128;
        while !(y * ord).is_multiple_of(modulus) {
            ord *= q;
        }
        ord
    };
    // x∘…∘x (k times) = (1 + x)^k - 1; the unit 1 + x has p-power order
    let mut unit = (1 + x) % modulus;
    let mut circle = 1u128;
    while unit != 1 {
        let mut next = 1u128;
        for _ in 0..q {
            next = next * unit % modulus;
        }
        unit = next;
        circle *= q;
    }
    Ok(CircleOrders {
        loop_order: additive(x) as u64,
        circle_order: circle as u64,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImJOrder {
    /// p^ν with ν = v_p(n/(p-1)), as stated for π_{2n-1}(J_p).
    pub order: PrimePower,
    /// p^{ν+1}, the usual image-of-J order in this degree.
    pub standard_order: PrimePower,
    pub discrepancy: bool,
}

pub fn im_j_order(p: PrimeModulus, n: u64) -> Result<ImJOrder> {
    let q = p.get();
    if n == 0 || !n.is_multiple_of(q - 1) {
        return Err(Error::DimensionOutOfRange {
            n,
            reason: "im J order needs n to be a positive multiple of p - 1",
        });
    }
    let nu = p_adic_valuation(&(n / (q - 1)), &q)?;
    Ok(ImJOrder {
        order: PrimePower::new(q, nu),
        standard_order: PrimePower::new(q, nu + 1),
        discrepancy: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodimVerdict {
    Equal,
    Unequal,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Detector {
    Isometry,
    WhiteheadTorsion,
    ProjectiveClassGroup,
    Rho,
    ThetaFiltration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodimEntry {
    pub k: u64,
    pub verdict: CodimVerdict,
    pub detector: Detector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThicknessReport {
    pub first: LensSpace,
    pub second: LensSpace,
    /// False when the pair is not tangentially homotopy equivalent; no
    /// codimension verdicts are produced then.
    pub comparable: bool,
    pub reason: Option<String>,
    /// Least k with an equal verdict.
    pub thickness: Option<u64>,
    /// Verdicts for k = 0 … last; every larger k is equal.
    pub entries: Vec<CodimEntry>,
    pub detectors: Option<LowCodimDetectors>,
    pub rho_verdict: Option<RhoVerdict>,
    pub oriented_rho_verdict: Option<RhoVerdict>,
    /// Order of the difference of normal invariants along the tangential
    /// equivalence (trivial for linear pairs).
    pub normal_invariant_order: Option<PrimePower>,
    pub filtration: Option<ThetaFiltration>,
}

impl ThicknessReport {
    pub fn verdict(&self, k: u64) -> Option<CodimVerdict> {
        if !self.comparable {
            return None;
        }
        Some(
            self.entries
                .iter()
                .find(|e| e.k == k)
                .map_or(CodimVerdict::Equal, |e| e.verdict),
        )
    }

    /// An equal verdict is never followed by a weaker one.
    pub fn is_monotone(&self) -> bool {
        let mut seen_equal = false;
        for e in &self.entries {
            if seen_equal && e.verdict != CodimVerdict::Equal {
                return false;
            }
            seen_equal |= e.verdict == CodimVerdict::Equal;
        }
        true
    }
}

pub const NOT_COMPARABLE: &str =
    "not comparable: the pair is not tangentially homotopy equivalent, so the stable equivalence hypothesis fails";

fn detector_for(k: u64) -> Detector {
    match k {
        0 => Detector::Isometry,
        1 => Detector::WhiteheadTorsion,
        2 => Detector::ProjectiveClassGroup,
        3 => Detector::Rho,
        _ => Detector::ThetaFiltration,
    }
}

pub fn thickness_report(l1: &LensSpace, l2: &LensSpace) -> Result<ThicknessReport> {
    let tang = tangential_verdict(l1, l2)?;
    if !tang.equivalent {
        let detail = match tang.reason {
            Some(NotTangentialReason::NotComparable) => "different p or dimension",
            Some(NotTangentialReason::NotHomotopyEquivalent) => "not homotopy equivalent",
            _ => "stable tangent bundles do not correspond",
        };
        return Ok(ThicknessReport {
            first: l1.clone(),
            second: l2.clone(),
            comparable: false,
            reason: Some(format!("{NOT_COMPARABLE} ({detail})")),
            thickness: None,
            entries: Vec::new(),
            detectors: None,
            rho_verdict: None,
            oriented_rho_verdict: None,
            normal_invariant_order: None,
            filtration: None,
        });
    }

    let p = l1.prime();
    let filtration = if l1.n() >= 3 {
        Some(theta_filtration(p, l1.n())?)
    } else {
        None
    };
    let detectors = low_codim_detectors(p)?;
    let rho = rho_difference(l1, l2)?;
    let iso = isometric(l1, l2).is_some();

    // Linear pairs: an isometry gives thickness 0. Otherwise crossing with
    // R^2 never suffices for distinct linear space forms, while a tangential
    // equivalence of linear lens spaces becomes a diffeomorphism after
    // crossing with R^3, so the normal invariants agree.
    let thickness = if iso { 0 } else { 3 };
    let last = filtration.as_ref().map_or(3, |f| f.stable_codim.max(3));
    let entries = (0..=last)
        .map(|k| CodimEntry {
            k,
            verdict: if k >= thickness {
                CodimVerdict::Equal
            } else {
                CodimVerdict::Unequal
            },
            detector: detector_for(k),
        })
        .collect();

    Ok(ThicknessReport {
        first: l1.clone(),
        second: l2.clone(),
        comparable: true,
        reason: None,
        thickness: Some(thickness),
        entries,
        detectors: Some(detectors),
        rho_verdict: Some(rho.verdict),
        oriented_rho_verdict: Some(rho.oriented_verdict),
        normal_invariant_order: Some(PrimePower::new(p.get(), 0)),
        filtration,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn filtration_examples() {
        let f = theta_filtration(pm(5), 7).unwrap();
        assert_eq!(f.m, 1);
        assert_eq!(f.quotient_orders(), Some(vec![5]));
        assert_eq!(f.stable_codim, 4);
        assert_eq!(f.exceptional_j0, ExceptionalIndex::Absent);

        let f = theta_filtration(pm(5), 8).unwrap();
        assert_eq!(f.m, 2);
        assert_eq!(f.tprime_order, PrimePower::new(5, 1));
        assert_eq!(f.quotient_orders(), Some(vec![1, 5]));
        assert_eq!(f.exceptional_j0, ExceptionalIndex::Pinned { j0: 1 });
        assert_eq!(f.theta_exponent_bounds(4), (0, 0));
        assert_eq!(f.theta_exponent_bounds(6), (1, 1));

        let f = theta_filtration(pm(5), 3).unwrap();
        assert_eq!(f.m, 0);
        assert!(f.quotients.is_empty());
        assert!(f.thickness_profile().is_empty());

        assert!(theta_filtration(pm(5), 2).is_err());
    }

    #[test]
    fn unknown_exceptional_index() {
        // n = 5·(p-1) with p = 5: j ranges past p - 1
        let f = theta_filtration(pm(5), 20).unwrap();
        assert_eq!(f.exceptional_j0, ExceptionalIndex::Unknown { conjectured: 1 });
        assert_eq!(f.quotient_orders(), None);
        assert_eq!(f.admissible_assignments().len(), 5);
        assert_eq!(f.theta_exponent_bounds(4), (0, 1));
        assert!(f.thickness_profile().iter().all(|t| !t.realized));
    }

    #[test]
    fn thickness_profile_intervals() {
        let f = theta_filtration(pm(3), 7).unwrap();
        let prof = f.thickness_profile();
        assert_eq!((prof[0].lo, prof[0].hi), (4, 4));
        assert_eq!((prof[1].lo, prof[1].hi), (5, 6));
        assert_eq!(prof.len(), 3);
    }

    #[test]
    fn desuspension() {
        let f = theta_filtration(pm(5), 13).unwrap();
        assert_eq!(f.m, 3);
        let d = desuspension_min_codim(2, &f).unwrap();
        assert_eq!(d.sphere_dim, Some(3));
        assert!(!d.extrapolated);
        assert_eq!(desuspension_min_codim(1, &f).unwrap().sphere_dim, Some(1));
        assert_eq!(desuspension_min_codim(0, &f).unwrap().sphere_dim, None);
        assert!(desuspension_min_codim(3, &f).unwrap().extrapolated);
        assert!(desuspension_min_codim(4, &f).is_err());
    }

    #[test]
    fn circle_orders() {
        let p = pm(5);
        assert_eq!(circle_order(p, 2, 0).unwrap(), CircleOrders { loop_order: 1, circle_order: 1 });
        assert_eq!(circle_order(p, 2, 5).unwrap(), CircleOrders { loop_order: 25, circle_order: 25 });
        assert_eq!(circle_order(p, 2, 3), Err(Error::NotInIdeal(3)));
    }

    #[test]
    fn im_j_examples() {
        assert_eq!(im_j_order(pm(5), 20).unwrap().order, PrimePower::new(5, 1));
        let j = im_j_order(pm(5), 4).unwrap();
        assert!(j.order.is_one() && j.discrepancy);
        assert_eq!(im_j_order(pm(3), 18).unwrap().order, PrimePower::new(3, 2));
        assert!(im_j_order(pm(5), 6).is_err());
    }

    #[test]
    fn reports() {
        let l = |w: &[i64]| LensSpace::new(5, w).unwrap();
        let r = thickness_report(&l(&[1, 2, 2]), &l(&[1, 2, 2])).unwrap();
        assert_eq!(r.thickness, Some(0));
        assert!((0..10).all(|k| r.verdict(k) == Some(CodimVerdict::Equal)));
        let r = thickness_report(&l(&[1, 1]), &l(&[1, 2])).unwrap();
        assert!(!r.comparable);
        assert!(r.reason.unwrap().starts_with("not comparable"));
    }

    proptest! {
        #[test]
        fn filtration_invariants(p in prop::sample::select(vec![3u64, 5, 7, 11, 13]), n in 3u64..=40) {
            let f = theta_filtration(pm(p), n).unwrap();
            prop_assert!(f.check().is_ok());
            let mut last = 0;
            for t in 0..=f.m {
                let k = desuspension_min_codim(t, &f).unwrap().k;
                prop_assert!(k >= last);
                last = k;
            }
            for k in 2..f.stable_codim + 2 {
                let (lo, hi) = f.theta_exponent_bounds(k);
                let (nlo, nhi) = f.theta_exponent_bounds(k + 1);
                prop_assert!(lo <= nlo && hi <= nhi && lo <= hi);
            }
        }
    }
}
