//! Kahler pullback coefficients and the tight / positive / holomorphic
//! certificate built from them.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::algebra::Factor;
use crate::catalog::{verify_homomorphism, Homomorphism};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::Q;

#[derive(Clone, Debug, PartialEq)]
pub struct TightnessCertificate {
    pub per_factor: Vec<(Factor, Q)>,
    pub weighted_sum: Q,
    pub target_rank: usize,
    pub tight: bool,
    pub positive: bool,
    /// `dρ(k) ⊆ k` and `dρ(p) ⊆ p` for the fixed Cartan data.
    pub aligned: bool,
    pub holomorphic: bool,
    /// `max ‖dρ(JX) - J dρ(X)‖` over the source `p` basis; `None` when not aligned.
    pub holomorphy_residual: Option<Q>,
}

fn ratio(num: &crate::scalar::Scalar, den: &crate::scalar::Scalar) -> Result<Q> {
    let n = num.to_rational().ok_or_else(|| Error::Internal(format!("irrational pairing {}", num)))?;
    let d = den.to_rational().ok_or_else(|| Error::Internal(format!("irrational pairing {}", den)))?;
    if d.is_zero() {
        return Err(Error::Internal("zero Kahler denominator".into()));
    }
    Ok(n / d)
}

/// `α_i = ω_T(dρX, dρJX) / ω_S(X, JX)` for each simple source factor,
/// evaluated on two independent `X` and required to agree. Factors of rank
/// zero get `α = 0`.
pub fn pullback_coefficients(rho: &Homomorphism) -> Result<Vec<Q>> {
    let res = verify_homomorphism(rho);
    if !res.is_zero() {
        return Err(Error::NotHomomorphism(res));
    }
    coefficients_unchecked(rho)
}

fn coefficients_unchecked(rho: &Homomorphism) -> Result<Vec<Q>> {
    let src = &rho.source;
    let basis = rho.source_basis();
    let mut out = Vec::with_capacity(src.factors().len());
    for (i, f) in src.factors().iter().enumerate() {
        if f.rank() == 0 {
            out.push(Q::zero());
            continue;
        }
        let ps: Vec<&Mat> =
            (0..basis.len()).filter(|&j| basis.factor_of[j] == i && basis.is_p[j]).map(|j| &basis.elems[j]).collect();
        let first = ps[0].clone();
        let sum = ps.iter().skip(1).fold(first.clone(), |acc, m| acc.add(m));
        let mut alpha: Option<Q> = None;
        for x in [first, sum] {
            let jx = src.apply_j(&x);
            let den = src.omega(&x, &jx);
            let num = rho.target.omega(&rho.apply(&x)?, &rho.apply(&jx)?);
            let a = ratio(&num, &den)?;
            match &alpha {
                None => alpha = Some(a),
                Some(b) if *b == a => {}
                Some(b) => {
                    return Err(Error::Unsupported(format!(
                        "pullback coefficient of factor {} depends on the test vector ({} vs {}); map is not aligned",
                        i, b, a
                    )))
                }
            }
        }
        out.push(alpha.expect("two evaluations"));
    }
    Ok(out)
}

/// Checks alignment and measures the holomorphy defect.
fn holomorphy(rho: &Homomorphism) -> Result<(bool, Option<Q>)> {
    let src = &rho.source;
    if src.factors().iter().any(|f| f.rank() == 0) {
        return Ok((false, None));
    }
    let basis = rho.source_basis();
    let tgt = &rho.target;
    let aligned = (0..basis.len()).all(|j| {
        let im = &rho.images[j];
        if basis.is_p[j] {
            tgt.in_p(im)
        } else {
            tgt.in_k(im)
        }
    });
    if !aligned {
        return Ok((false, None));
    }
    let mut res = Q::zero();
    for j in (0..basis.len()).filter(|&j| basis.is_p[j]) {
        let x = &basis.elems[j];
        let lhs = rho.apply(&src.apply_j(x))?;
        let rhs = tgt.apply_j(&rho.images[j]);
        res = res.max(lhs.sub(&rhs).residual());
    }
    Ok((true, Some(res)))
}

pub fn certify(rho: &Homomorphism) -> Result<TightnessCertificate> {
    let alphas = pullback_coefficients(rho)?;
    let per_factor: Vec<(Factor, Q)> = rho.source.factors().iter().copied().zip(alphas).collect();
    let weighted_sum =
        per_factor.iter().fold(Q::zero(), |acc, (f, a)| acc + a.abs() * Q::from_integer((f.rank() as i64).into()));
    let target_rank = rho.target.rank();
    let tight = weighted_sum == Q::from_integer((target_rank as i64).into());
    let positive = per_factor.iter().all(|(_, a)| !a.is_negative());
    let (aligned, holomorphy_residual) = holomorphy(rho)?;
    let holomorphic = holomorphy_residual.as_ref().is_some_and(Zero::is_zero);
    if holomorphic {
        debug_assert!(positive, "holomorphic map with a negative coefficient");
    }
    Ok(TightnessCertificate {
        per_factor,
        weighted_sum,
        target_rank,
        tight,
        positive,
        aligned,
        holomorphic,
        holomorphy_residual,
    })
}

/// True for the factors isomorphic to `su(1,1)` or containing it as a summand.
pub fn involves_su11(f: &Factor) -> bool {
    matches!(f, Factor::Su { p: 1, q: 1 } | Factor::Sp { n: 1 } | Factor::So2 { n: 1 } | Factor::So2 { n: 2 })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Theorem1Outcome {
    /// Hypotheses hold; the flag is whether the map is holomorphic.
    Checked(bool),
    /// Some source factor is (or contains) `su(1,1)`.
    SkippedSu11Source,
    /// The map is not both tight and positive.
    SkippedNotTightPositive,
}

/// Tight positive maps without `su(1,1)` source factors should be holomorphic.
pub fn theorem1_check(rho: &Homomorphism) -> Result<Theorem1Outcome> {
    if rho.source.factors().iter().any(involves_su11) {
        return Ok(Theorem1Outcome::SkippedSu11Source);
    }
    let cert = certify(rho)?;
    if !(cert.tight && cert.positive) {
        return Ok(Theorem1Outcome::SkippedNotTightPositive);
    }
    Ok(Theorem1Outcome::Checked(cert.holomorphic))
}
