//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines are always printed; exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{oracle_blocks, oracle_shapes, OracleTarget};
use num_traits::Zero;
use tightmaps::algebra::{AlgebraDescriptor, Factor, Family};
use tightmaps::branching::{invariant_decomposition_sostar, invariant_decomposition_su, ResidualKind};
use tightmaps::catalog::*;
use tightmaps::hull::*;
use tightmaps::matrix::{Mat, RowReducer};
use tightmaps::scalar::{qi, Scalar};
use tightmaps::tightness::{certify, involves_su11, pullback_coefficients, theorem1_check, Theorem1Outcome};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{:?}", e)
}

fn c1() -> Outcome {
    let mut checked = 0;
    for n in 1..=6 {
        let c = certify(&std_inclusion(StdKind::SpToSu, &[n]).map_err(err)?).map_err(err)?;
        ensure(c.tight, || format!("SP_TO_SU({}) not tight", n))?;
        checked += 1;
        if n == 1 {
            // so*(2) is compact abelian and has no model here.
            ensure(std_inclusion(StdKind::SostarToSu, &[1]).is_err(), || "SOSTAR_TO_SU(1) accepted".into())?;
            continue;
        }
        let c = certify(&std_inclusion(StdKind::SostarToSu, &[n]).map_err(err)?).map_err(err)?;
        ensure(c.per_factor[0].1 == qi(2), || format!("SOSTAR_TO_SU({}) alpha {}", n, c.per_factor[0].1))?;
        ensure(c.target_rank == n, || format!("SOSTAR_TO_SU({}) target rank {}", n, c.target_rank))?;
        ensure(c.tight == (n % 2 == 0), || format!("SOSTAR_TO_SU({}) tight={}", n, c.tight))?;
        checked += 1;
    }
    for m in 1..=7 {
        for n in m..=8 - m {
            let a = certify(&std_inclusion(StdKind::SuToSp, &[m, n]).map_err(err)?).map_err(err)?;
            ensure(a.tight == (m == n), || format!("SU_TO_SP({},{}) tight={}", m, n, a.tight))?;
            let b = certify(&std_inclusion(StdKind::SuToSostar, &[m, n]).map_err(err)?).map_err(err)?;
            ensure(b.tight == (n == m || n == m + 1), || format!("SU_TO_SOSTAR({},{}) tight={}", m, n, b.tight))?;
            checked += 2;
        }
    }
    Ok(format!("{} inclusions; SOSTAR_TO_SU(1) rejected (so*(2) is compact)", checked))
}

fn c2() -> Outcome {
    // Alternative residue labelling (so* for 1,2,3; sp for 5,7,0); it fails the dimension count.
    let mut literal_mismatch = Vec::new();
    for p in 3..=10 {
        let d = spin_dim(p);
        let expected = match spin_family(p) {
            Family::Sp => Factor::Sp { n: d / 2 },
            Family::SoStar => Factor::SoStar { n: d / 2 },
            _ => Factor::Su { p: d / 2, q: d / 2 },
        };
        let chiralities: &[i8] = if p % 2 == 0 { &[1, -1] } else { &[1] };
        for &ch in chiralities {
            let rho = spin(p, ch).map_err(err)?;
            ensure(verify_homomorphism(&rho).is_zero(), || format!("spin({}) residual nonzero", p))?;
            ensure(rho.target.factors() == [expected], || format!("spin({}) lands in {}", p, rho.target))?;
            for im in &rho.images {
                ensure(rho.target.membership_residual(im).map_err(err)?.is_zero(), || {
                    format!("spin({}) leaves target", p)
                })?;
            }
            let c = certify(&rho).map_err(err)?;
            ensure(c.tight && c.holomorphic, || {
                format!("spin({}) tight={} holomorphic={}", p, c.tight, c.holomorphic)
            })?;
        }
        let literal = match p % 8 {
            1..=3 => Family::SoStar,
            5 | 7 | 0 => Family::Sp,
            _ => Family::Su,
        };
        if literal != spin_family(p) {
            literal_mismatch.push(p);
        }
    }
    Ok(format!(
        "p=3..10 land in sp for p=1,2,3 (8), so* for 5,6,7, su for 0,4; the alternative residue labelling disagrees at p={:?}",
        literal_mismatch
    ))
}

fn c3() -> Outcome {
    for n in 1..=5 {
        let c = certify(&rho_odd(n).map_err(err)?).map_err(err)?;
        ensure(c.tight && c.positive, || format!("rho_odd({}) tight={} positive={}", n, c.tight, c.positive))?;
        ensure(c.holomorphic == (n == 1), || format!("rho_odd({}) holomorphic={}", n, c.holomorphic))?;
    }
    Ok("rho_odd(1..5)".into())
}

fn c4() -> Outcome {
    for p in 2..=6 {
        let a = pullback_coefficients(&std_inclusion(StdKind::SostarToSu, &[p]).map_err(err)?).map_err(err)?;
        ensure(a == vec![qi(2)], || format!("p={} alpha={:?}", p, a))?;
    }
    Ok("p=2..6".into())
}

fn c5() -> Outcome {
    let mut algs = Vec::new();
    for p in 1..=4 {
        for q in p..=6 {
            algs.push(Factor::Su { p, q });
        }
        algs.push(Factor::Sp { n: p });
    }
    algs.extend((2..=9).map(|n| Factor::SoStar { n }));
    algs.extend((1..=8).map(|n| Factor::So2 { n }));
    let mut count = 0;
    for f in algs {
        if f.rank() > 4 || f.rank() == 0 {
            continue;
        }
        let a = AlgebraDescriptor::simple(f).map_err(err)?;
        let plus = certify(&disc(&a, &[1]).map_err(err)?).map_err(err)?;
        let r = qi(f.rank() as i64);
        ensure(plus.weighted_sum == r && plus.per_factor[0].1 == r, || {
            format!("disc({}) sum {}", a, plus.weighted_sum)
        })?;
        let minus = certify(&disc(&a, &[-1]).map_err(err)?).map_err(err)?;
        ensure(minus.per_factor[0].1 == -r.clone(), || format!("twisted disc({}) alpha {}", a, minus.per_factor[0].1))?;
        count += 1;
    }
    Ok(format!("{} simple descriptors", count))
}

fn same_span(a: &Mat, b: &Mat) -> bool {
    let mut red = RowReducer::new(a.rows());
    for c in a.columns() {
        red.push(c.into_iter().enumerate());
    }
    a.cols() == b.cols() && b.columns().iter().all(|c| red.contains(c))
}

fn c6() -> Outcome {
    let rho = gl2_example();
    let rep = invariant_decomposition_su(&rho).map_err(err)?;
    ensure(rep.residual_kind == ResidualKind::IsotropicObstruction, || format!("{:?}", rep.residual_kind))?;
    let d = rep.obstruction_detail.ok_or("no obstruction detail")?;
    let col = |v: &[i64]| v.iter().map(|&x| Scalar::from_i64(x)).collect::<Vec<_>>();
    let plus = Mat::from_columns(4, &[col(&[1, 0, 1, 0]), col(&[0, 1, 0, 1])]);
    let minus = Mat::from_columns(4, &[col(&[1, 0, -1, 0]), col(&[0, 1, 0, -1])]);
    ensure(
        (same_span(&d.v1, &plus) && same_span(&d.partner, &minus))
            || (same_span(&d.v1, &minus) && same_span(&d.partner, &plus)),
        || "isotropic subspaces differ from <e1±e3, e2±e4>".into(),
    )?;
    ensure(!certify(&rho).map_err(err)?.tight, || "gl2 example certified tight".into())?;
    Ok("V1=<e1+e3,e2+e4>, V2=<e1-e3,e2-e4>, signature (2,2), not tight".into())
}

/// Tight positive maps with no `su(1,1)` source factor.
fn theorem1_catalog() -> Result<Vec<Homomorphism>, String> {
    let mut out = Vec::new();
    for n in 2..=6 {
        out.push(std_inclusion(StdKind::SpToSu, &[n]).map_err(err)?);
    }
    for n in [4, 6, 8] {
        out.push(std_inclusion(StdKind::SostarToSu, &[n]).map_err(err)?);
    }
    for m in 2..=4 {
        out.push(std_inclusion(StdKind::SuToSp, &[m, m]).map_err(err)?);
        out.push(std_inclusion(StdKind::SuToSostar, &[m, m]).map_err(err)?);
        out.push(std_inclusion(StdKind::SuToSostar, &[m, m + 1]).map_err(err)?);
    }
    out.push(std_inclusion(StdKind::SuToSostar, &[1, 2]).map_err(err)?);
    for p in 3..=8 {
        out.push(spin(p, 1).map_err(err)?);
    }
    out.push(compose(&std_inclusion(StdKind::SuToSp, &[2, 2]).map_err(err)?, &spin(4, -1).map_err(err)?).map_err(err)?);
    for n in 3..=7 {
        out.push(identity(&AlgebraDescriptor::so2(n)));
        for m in 3..n {
            out.push(block_inclusion(&Factor::So2 { n: m }, &Factor::So2 { n }).map_err(err)?);
        }
    }
    let targets = [
        AlgebraDescriptor::su(3, 3),
        AlgebraDescriptor::su(4, 4),
        AlgebraDescriptor::su(2, 4),
        AlgebraDescriptor::sp(4),
        AlgebraDescriptor::sostar(6),
        AlgebraDescriptor::sostar(5),
    ];
    for t in targets {
        for s in enumerate_shapes(&t, None).map_err(err)? {
            if s.source().factors().iter().any(involves_su11) {
                continue;
            }
            out.push(realize_shape(&s).map_err(err)?);
        }
    }
    Ok(out)
}

fn c7() -> Outcome {
    let cat = theorem1_catalog()?;
    let mut families = BTreeSet::new();
    for rho in &cat {
        let c = certify(rho).map_err(err)?;
        ensure(c.tight && c.positive, || format!("{} not tight positive", rho.label))?;
        let out = theorem1_check(rho).map_err(err)?;
        ensure(out == Theorem1Outcome::Checked(true), || format!("{}: {:?}", rho.label, out))?;
        families.insert(rho.target.factors()[0].family().tag());
    }
    ensure(cat.len() >= 30 && families.len() == 4, || format!("{} instances over {:?}", cat.len(), families))?;
    Ok(format!("{} instances, targets {:?}", cat.len(), families))
}

fn hull_of(rho: &Homomorphism) -> Result<HullResult, String> {
    let rep = invariant_decomposition_su(rho).map_err(err)?;
    hermitian_hull(rho, &rep).map_err(err)
}

fn canonical_sorted(a: &AlgebraDescriptor) -> Vec<Factor> {
    let mut v = canonicalize(a).factors().to_vec();
    v.sort();
    v
}

fn c8() -> Outcome {
    for n in 1..=5 {
        let h = hull_of(&rho_odd(n).map_err(err)?)?;
        ensure(h.hull == AlgebraDescriptor::sp(n), || format!("hull(rho_odd({})) = {}", n, h.hull))?;
    }
    let mut shapes = 0;
    for m in 1..=4 {
        for s in enumerate_shapes(&AlgebraDescriptor::su(m, m), None).map_err(err)? {
            let rho = realize_shape(&s).map_err(err)?;
            let h = hull_of(&rho)?;
            ensure(h.holomorphic_tight_into_target, || format!("{}: hull rank count off", s))?;
            let incl = realize_shape(&s.hull_shape().map_err(err)?).map_err(err)?;
            let c = certify(&incl).map_err(err)?;
            ensure(c.tight && c.holomorphic, || {
                format!("{}: hull inclusion tight={} holomorphic={}", s, c.tight, c.holomorphic)
            })?;
            ensure(canonical_sorted(&incl.source) == canonical_sorted(&h.hull), || {
                format!("{}: hull {} vs inclusion source {}", s, h.hull, incl.source)
            })?;
            if m <= 3 {
                for outer in [StdKind::SuToSp, StdKind::SuToSostar] {
                    let up = compose(&std_inclusion(outer, &[m, m]).map_err(err)?, &rho).map_err(err)?;
                    ensure(hull_of(&up)?.hull == h.hull, || format!("{}: hull changes under {:?}", s, outer))?;
                }
            }
            shapes += 1;
        }
    }
    for n in 1..=4 {
        let r = rho_odd(n).map_err(err)?;
        let up = compose(&std_inclusion(StdKind::SpToSu, &[n]).map_err(err)?, &r).map_err(err)?;
        ensure(hull_of(&up)?.hull == hull_of(&r)?.hull, || format!("rho_odd({}) hull changes under SP_TO_SU", n))?;
    }
    Ok(format!("hull(rho_odd(1..5)); {} su(m,m) shapes, m<=4; postcomposition invariance", shapes))
}

fn c9_targets() -> Vec<(OracleTarget, AlgebraDescriptor)> {
    let mut v = Vec::new();
    for m in 1..=4 {
        v.push((OracleTarget::SuMM(m), AlgebraDescriptor::su(m, m)));
        v.push((OracleTarget::Sp(m), AlgebraDescriptor::sp(m)));
    }
    for p in 1..=3 {
        v.push((OracleTarget::SoStar4p(p), AlgebraDescriptor::sostar(2 * p)));
    }
    v
}

fn c9() -> Outcome {
    let mut counts = Vec::new();
    for (t, a) in c9_targets() {
        let lib = enumerate_shapes(&a, None).map_err(err)?;
        let keys: BTreeSet<_> = lib.iter().map(common::shape_key).collect();
        let oracle = oracle_shapes(t);
        ensure(keys.len() == lib.len() && keys == oracle, || {
            format!("{}: {} shapes vs oracle {}", a, lib.len(), oracle.len())
        })?;
        counts.push(format!("{}:{}", a, lib.len()));
    }
    let sp4 = enumerate_shapes(&AlgebraDescriptor::sp(2), None).map_err(err)?;
    let sources: BTreeSet<Vec<Factor>> = sp4.iter().map(|s| canonical_sorted(&s.source())).collect();
    let su11 = Factor::Su { p: 1, q: 1 };
    let expected: BTreeSet<Vec<Factor>> =
        [vec![su11], vec![su11, su11], vec![Factor::Sp { n: 2 }]].into_iter().collect();
    ensure(sources == expected, || format!("sp(4,R) sources {:?}", sources))?;
    Ok(format!("{}; sp(4,R): {} shapes over the 3 sources su(1,1), su(1,1)^2, sp(4,R)", counts.join(" "), sp4.len()))
}

fn c10() -> Outcome {
    let mut n = 0;
    for (_, a) in c9_targets() {
        for s in enumerate_shapes(&a, None).map_err(err)? {
            let rho = realize_shape(&s).map_err(err)?;
            ensure(verify_homomorphism(&rho).is_zero(), || format!("{}: residual nonzero", s))?;
            ensure(certify(&rho).map_err(err)?.tight, || format!("{}: not tight", s))?;
            let rep = invariant_decomposition_su(&rho).map_err(err)?;
            ensure(rep.residual_kind == ResidualKind::Complete, || format!("{}: {:?}", s, rep.residual_kind))?;
            ensure(rep.block_multiset() == s.block_multiset(), || {
                format!("{}: blocks {:?} vs shape {:?}", s, rep.block_multiset(), s.block_multiset())
            })?;
            if matches!(a.factors()[0], Factor::SoStar { .. }) {
                let q = invariant_decomposition_sostar(&rho).map_err(err)?;
                ensure(q.residual_kind == ResidualKind::Complete, || {
                    format!("{}: so* decomposition {:?}", s, q.residual_kind)
                })?;
            }
            n += 1;
        }
    }
    Ok(format!("{} shapes realized, verified, tight, block multisets recovered", n))
}

fn c11_inputs() -> Result<Vec<Homomorphism>, String> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push(rho_odd(n).map_err(err)?);
        out.push(std_inclusion(StdKind::SpToSu, &[n]).map_err(err)?);
    }
    for n in 2..=4 {
        out.push(std_inclusion(StdKind::SostarToSu, &[n]).map_err(err)?);
    }
    for (m, n) in [(1, 1), (1, 2), (1, 3), (2, 2)] {
        out.push(std_inclusion(StdKind::SuToSp, &[m, n]).map_err(err)?);
        out.push(std_inclusion(StdKind::SuToSostar, &[m, n]).map_err(err)?);
    }
    let id = identity(&AlgebraDescriptor::su(1, 1));
    out.push(tensor(&id, &id).map_err(err)?);
    out.push(direct_sum(&rho_odd(1).map_err(err)?, &rho_odd(3).map_err(err)?, true).map_err(err)?);
    out.push(disc(&AlgebraDescriptor::su(2, 3), &[-1]).map_err(err)?);
    out.push(polydisc(&AlgebraDescriptor::sp(3)));
    out.push(spin(3, 1).map_err(err)?);
    out.push(spin(4, -1).map_err(err)?);
    out.push(spin(5, 1).map_err(err)?);
    out.push(gl2_example());
    out.push(gl2_example_u2());
    let mut targets = Vec::new();
    for m in 1..=4 {
        targets.push(AlgebraDescriptor::su(m, m));
        targets.push(AlgebraDescriptor::sp(m));
    }
    targets.extend([
        AlgebraDescriptor::su(2, 3),
        AlgebraDescriptor::su(3, 5),
        AlgebraDescriptor::sostar(2),
        AlgebraDescriptor::sostar(3),
        AlgebraDescriptor::sostar(4),
    ]);
    for t in targets {
        for s in enumerate_shapes(&t, None).map_err(err)? {
            out.push(realize_shape(&s).map_err(err)?);
        }
    }
    Ok(out)
}

fn c11() -> Outcome {
    let inputs = c11_inputs()?;
    let (mut complete, mut obstructed) = (0, 0);
    for rho in &inputs {
        let n = rho.target.gram().rows();
        ensure(n <= 8, || format!("{} has ambient dimension {}", rho.label, n))?;
        let rep = invariant_decomposition_su(rho).map_err(err)?;
        let oracle = oracle_blocks(&rho.images, &rho.target.gram());
        match (rep.residual_kind, oracle) {
            (ResidualKind::Complete, Some(blocks)) => {
                ensure(rep.block_multiset() == blocks, || {
                    format!("{}: {:?} vs oracle {:?}", rho.label, rep.block_multiset(), blocks)
                })?;
                complete += 1;
            }
            (ResidualKind::IsotropicObstruction, None) => obstructed += 1,
            (k, o) => return Err(format!("{}: {:?} vs oracle {:?}", rho.label, k, o)),
        }
    }
    Ok(format!("{} maps agree ({} complete, {} obstructed on both sides)", inputs.len(), complete, obstructed))
}

/// Number, name, check and time limit in seconds.
type Criterion = (usize, &'static str, fn() -> Outcome, f64);

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "standard inclusion tightness", c1, 10.0),
        (2, "spin representations", c2, 60.0),
        (3, "odd-weight su(1,1) representations", c3, f64::INFINITY),
        (4, "so* to su coefficient", c4, f64::INFINITY),
        (5, "diagonal disc accounting", c5, f64::INFINITY),
        (6, "isotropic obstruction", c6, f64::INFINITY),
        (7, "holomorphy of tight positive maps without su(1,1) factors", c7, f64::INFINITY),
        (8, "Hermitian hulls", c8, f64::INFINITY),
        (9, "shape enumeration vs brute force", c9, 30.0),
        (10, "shape realization roundtrip", c10, f64::INFINITY),
        (11, "branching vs exhaustive search", c11, 120.0),
    ];
    let mut failed = 0;
    for (i, name, f, limit) in criteria {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        let res = match res {
            Ok(_) if secs > limit => Err(format!("took {:.1} s, limit {} s", secs, limit)),
            r => r,
        };
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {} [{:.1} s]: {}", i, name, secs, detail),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {} [{:.1} s]: {}", i, name, secs, e);
            }
        }
    }
    if failed > 0 {
        println!("{} criteria failed", failed);
        std::process::exit(1);
    }
}
