//! Test oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use tightmaps::hull::ShapeRecord;
use tightmaps::matrix::{hermitian_signature, Mat, RowReducer};
use tightmaps::scalar::Scalar;

/// `(tag, params, multiplicity)`; an `su(1,1)` factor lists `f, g` pairs.
pub type Key = (String, Vec<usize>, usize);

pub fn shape_key(s: &ShapeRecord) -> Vec<Key> {
    let mut v: Vec<Key> =
        s.entries.iter().map(|e| (e.factor.tag().to_string(), e.factor.params(), e.multiplicity)).collect();
    v.sort();
    v
}

#[derive(Clone, Copy, Debug)]
pub enum OracleTarget {
    SuMM(usize),
    SuMN(usize, usize),
    Sp(usize),
    SoStar4p(usize),
    SoStar4p2(usize),
}

fn half_spin(r: usize) -> usize {
    // Spinors of so(2,r) in dimension r+2: full for odd r, half for even r.
    if r % 2 == 1 {
        2usize.pow(r.div_ceil(2) as u32)
    } else {
        2usize.pow((r / 2) as u32)
    }
}

/// Brute force: ordered sequences of single items, sorted and deduplicated
/// afterwards.
pub fn oracle_shapes(t: OracleTarget) -> BTreeSet<Vec<Key>> {
    let cap = match t {
        OracleTarget::SuMM(m) | OracleTarget::SuMN(m, _) | OracleTarget::Sp(m) => m,
        OracleTarget::SoStar4p(p) | OracleTarget::SoStar4p2(p) => p,
    };
    let max_param = match t {
        OracleTarget::SuMN(_, n) => n,
        _ => cap,
    };
    // Non-su(1,1) items: (tag, params, g, weight, negative part, non-tube).
    let mut items: Vec<(Key, usize, usize, bool)> = Vec::new();
    for x in 1..=max_param {
        for g in 1..=cap {
            let mut add = |tag: &str, params: Vec<usize>, w: usize, neg: usize, odd: bool| {
                if w >= 1 && w * g <= cap {
                    items.push(((tag.to_string(), params, g), w * g, neg * g, odd));
                }
            };
            match t {
                OracleTarget::SuMM(_) | OracleTarget::SuMN(..) => {
                    if x >= 2 {
                        add("SU_PP", vec![x], x, x, false);
                        add("SP", vec![x], x, x, false);
                        add("SOSTAR4", vec![x], 2 * x, 2 * x, false);
                    }
                    if let OracleTarget::SuMN(_, n) = t {
                        for q in x + 1..=n {
                            add("SU_PQ", vec![x, q], x, q, false);
                        }
                    }
                }
                OracleTarget::Sp(_) => {
                    if x >= 2 {
                        add("SU_PP", vec![x], 2 * x, 0, false);
                        add("SP", vec![x], x, 0, false);
                        add("SOSTAR4", vec![x], 4 * x, 0, false);
                    }
                }
                OracleTarget::SoStar4p(_) | OracleTarget::SoStar4p2(_) => {
                    if x >= 2 {
                        add("SU_PP", vec![x], x, 0, false);
                        add("SP", vec![x], x, 0, false);
                        add("SOSTAR4", vec![x], x, 0, false);
                    }
                    if matches!(t, OracleTarget::SoStar4p2(_)) && g == 1 {
                        add("SOSTAR_ODD", vec![x], x, 0, true);
                        add("SU_PQ", vec![x, x + 1], x, 0, true);
                    }
                }
            }
        }
    }
    for r in 5..=16 {
        for g in 1..=cap {
            let d = half_spin(r);
            let w = match t {
                OracleTarget::SuMM(_) | OracleTarget::SuMN(..) if r != 6 => d / 2,
                OracleTarget::Sp(_) if [1, 2, 3].contains(&(r % 8)) => d / 2,
                OracleTarget::SoStar4p(_) | OracleTarget::SoStar4p2(_) if [5, 7].contains(&(r % 8)) => d / 4,
                _ => continue,
            };
            if w * g <= cap {
                items.push((("SO2".to_string(), vec![r], g), w * g, d / 2 * g, false));
            }
        }
    }
    let mut out = BTreeSet::new();
    let mut seq: Vec<(Key, usize, bool)> = Vec::new();
    grow(t, cap, &items, &mut seq, &mut out);
    out
}

fn grow(
    t: OracleTarget,
    left: usize,
    items: &[(Key, usize, usize, bool)],
    seq: &mut Vec<(Key, usize, bool)>,
    out: &mut BTreeSet<Vec<Key>>,
) {
    if left == 0 {
        if seq.iter().filter(|s| s.2).count() > 1 {
            return;
        }
        if let OracleTarget::SuMN(_, n) = t {
            if seq.iter().map(|s| s.1).sum::<usize>() > n {
                return;
            }
        }
        let mut keys: Vec<Key> = seq.iter().map(|s| s.0.clone()).collect();
        keys.sort();
        out.insert(keys);
        return;
    }
    for (k, w, neg, odd) in items {
        if *w <= left {
            seq.push((k.clone(), *neg, *odd));
            grow(t, left - w, items, seq, out);
            seq.pop();
        }
    }
    // An su(1,1) factor: an ordered nonempty list of rho block sizes.
    for total in 1..=left {
        for blocks in compositions(total) {
            let mut counts: Vec<(usize, usize)> = Vec::new();
            let mut sorted = blocks.clone();
            sorted.sort();
            for f in sorted {
                match counts.last_mut() {
                    Some((g, c)) if *g == f => *c += 1,
                    _ => counts.push((f, 1)),
                }
            }
            let params = counts.iter().flat_map(|&(f, c)| [f, c]).collect();
            seq.push((("SU11_VIA_RHO".to_string(), params, 1), total, false));
            grow(t, left - total, items, seq, out);
            seq.pop();
        }
    }
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

type Vector = Vec<Scalar>;

fn closure(gens: &[Mat], start: Vec<Vector>, n: usize) -> Vec<Vector> {
    let mut red = RowReducer::new(n);
    let mut basis = Vec::new();
    let mut queue = start;
    while let Some(v) = queue.pop() {
        if red.push(v.iter().cloned().enumerate()) {
            for g in gens {
                queue.push(g.mul_vec(&v));
            }
            basis.push(v);
        }
    }
    basis
}

/// Burnside: `u` is irreducible iff the restricted matrices generate all of `End(u)`.
fn burnside_irreducible(gens: &[Mat], u: &[Vector], n: usize) -> bool {
    let d = u.len();
    let b = Mat::from_columns(n, u);
    let restricted: Vec<Mat> = gens
        .iter()
        .map(|g| {
            let cols: Vec<Vector> = u.iter().map(|v| b.solve(&g.mul_vec(v)).expect("invariant subspace")).collect();
            Mat::from_columns(d, &cols)
        })
        .collect();
    let flat = |m: &Mat| -> Vector { (0..d).flat_map(|r| m.row(r)).collect() };
    let mut red = RowReducer::new(d * d);
    let mut found = vec![Mat::identity(d)];
    red.push(flat(&found[0]).into_iter().enumerate());
    let mut i = 0;
    while i < found.len() {
        for r in &restricted {
            let m = r.mul(&found[i]);
            if red.push(flat(&m).into_iter().enumerate()) {
                found.push(m);
            }
        }
        i += 1;
    }
    found.len() == d * d
}

/// Oracle decomposition of `C^n` under `gens` with invariant form `form`:
/// repeatedly take the smallest irreducible nondegenerate cyclic submodule
/// generated by `e_i`, `e_i ± e_j`, `e_i ± i e_j` projected to the current
/// orthogonal complement. `None` when no such submodule exists.
pub fn oracle_blocks(gens: &[Mat], form: &Mat) -> Option<Vec<(usize, (usize, usize))>> {
    let n = form.rows();
    let e = |i: usize| Mat::identity(n).column(i);
    let mut raw: Vec<Vector> = (0..n).map(e).collect();
    for i in 0..n {
        for j in i + 1..n {
            for c in [Scalar::one(), -Scalar::one(), Scalar::i(), -Scalar::i()] {
                raw.push(e(i).iter().zip(e(j)).map(|(a, b)| a + &(&b * &c)).collect());
            }
        }
    }
    let mut w: Vec<Vector> = (0..n).map(e).collect();
    let mut blocks = Vec::new();
    while !w.is_empty() {
        let bw = Mat::from_columns(n, &w);
        let gw = bw.adjoint().mul(form).mul(&bw);
        let gw_inv = gw.inverse()?;
        let project = |v: &Vector| bw.mul_vec(&gw_inv.mul_vec(&bw.adjoint().mul(form).mul_vec(v)));
        let mut subs: Vec<Vec<Vector>> = raw
            .iter()
            .map(project)
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .map(|v| closure(gens, vec![v], n))
            .collect();
        subs.sort_by_key(|s| s.len());
        let chosen = subs.into_iter().find(|u| {
            let b = Mat::from_columns(n, u);
            b.adjoint().mul(form).mul(&b).rank() == u.len() && burnside_irreducible(gens, u, n)
        })?;
        let b = Mat::from_columns(n, &chosen);
        let (p, q, _) = hermitian_signature(&b.adjoint().mul(form).mul(&b));
        blocks.push((chosen.len(), (p, q)));
        // Complement of the chosen block inside w.
        let cross = b.adjoint().mul(form).mul(&bw);
        w = cross.nullspace().iter().map(|c| bw.mul_vec(c)).collect();
    }
    blocks.sort();
    Some(blocks)
}
