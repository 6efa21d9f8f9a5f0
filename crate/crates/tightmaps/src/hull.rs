//! Hermitian hulls, shapes of tight maps into classical targets, their
//! block realizations, the low-rank isomorphisms, and the symbolic diagrams
//! for `so(2,p)`, `e6(-14)` and `e7(-25)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::algebra::{AlgebraDescriptor, Factor};
use crate::branching::{block_support, invariant_decomposition_su, DecompositionReport, ResidualKind};
use crate::catalog::{
    block_inclusion, compose, direct_sum, identity, rho_odd, spin, std_inclusion, Homomorphism, StdKind,
};
use crate::error::{Error, Result};
use crate::scalar::Q;
use crate::tightness::{certify, involves_su11};

/// One summand type of a shape. Parameters name the source factor:
/// `SuPP{p}` is `su(p,p)`, `SoStar4{m}` is `so*(4m)`, `SoStarOdd{k}` is
/// `so*(4k+2)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShapeFactor {
    /// One `su(1,1)` factor acting by `rho_odd(f)` with multiplicity `g` for
    /// each `(f, g)`; `f` strictly increasing.
    Su11Rho {
        blocks: Vec<(usize, usize)>,
    },
    SuPP {
        p: usize,
    },
    Sp {
        n: usize,
    },
    SoStar4 {
        m: usize,
    },
    So2 {
        r: usize,
    },
    SuPQ {
        p: usize,
        q: usize,
    },
    SoStarOdd {
        k: usize,
    },
}

impl ShapeFactor {
    pub fn tag(&self) -> &'static str {
        match self {
            ShapeFactor::Su11Rho { .. } => "SU11_VIA_RHO",
            ShapeFactor::SuPP { .. } => "SU_PP",
            ShapeFactor::Sp { .. } => "SP",
            ShapeFactor::SoStar4 { .. } => "SOSTAR4",
            ShapeFactor::So2 { .. } => "SO2",
            ShapeFactor::SuPQ { .. } => "SU_PQ",
            ShapeFactor::SoStarOdd { .. } => "SOSTAR_ODD",
        }
    }

    pub fn params(&self) -> Vec<usize> {
        match self {
            ShapeFactor::Su11Rho { blocks } => blocks.iter().flat_map(|&(f, g)| [f, g]).collect(),
            ShapeFactor::SuPP { p } => vec![*p],
            ShapeFactor::Sp { n } => vec![*n],
            ShapeFactor::SoStar4 { m } => vec![*m],
            ShapeFactor::So2 { r } => vec![*r],
            ShapeFactor::SuPQ { p, q } => vec![*p, *q],
            ShapeFactor::SoStarOdd { k } => vec![*k],
        }
    }

    pub fn source_factor(&self) -> Factor {
        match *self {
            ShapeFactor::Su11Rho { .. } => Factor::Su { p: 1, q: 1 },
            ShapeFactor::SuPP { p } => Factor::Su { p, q: p },
            ShapeFactor::Sp { n } => Factor::Sp { n },
            ShapeFactor::SoStar4 { m } => Factor::SoStar { n: 2 * m },
            ShapeFactor::So2 { r } => Factor::So2 { n: r },
            ShapeFactor::SuPQ { p, q } => Factor::Su { p, q },
            ShapeFactor::SoStarOdd { k } => Factor::SoStar { n: 2 * k + 1 },
        }
    }

    fn is_tube(&self) -> bool {
        !matches!(self, ShapeFactor::SuPQ { .. } | ShapeFactor::SoStarOdd { .. })
    }

    /// Factors routed through `su(k,k)` before reaching an `so*` or `sp` target.
    fn is_su_routed(&self) -> bool {
        matches!(self, ShapeFactor::Su11Rho { .. } | ShapeFactor::SuPP { .. } | ShapeFactor::Sp { .. })
    }
}

impl core::fmt::Display for ShapeFactor {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let ps: Vec<String> = match self {
            ShapeFactor::Su11Rho { blocks } => blocks.iter().map(|(a, g)| format!("{}x{}", a, g)).collect(),
            other => other.params().iter().map(|p| format!("{}", p)).collect(),
        };
        write!(f, "{}({})", self.tag(), ps.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShapeEntry {
    pub factor: ShapeFactor,
    /// Number of diagonal copies; always 1 for `Su11Rho`, whose copies sit in `blocks`.
    pub multiplicity: usize,
}

/// The simple targets with a shape table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetKind {
    SuMM(usize),
    SuMN(usize, usize),
    Sp(usize),
    SoStar4p(usize),
    SoStar4p2(usize),
}

impl TargetKind {
    pub fn of(target: &AlgebraDescriptor) -> Result<TargetKind> {
        let unsupported = || Error::Unsupported(format!("no shape table for {}", target));
        match target.factors() {
            [Factor::Su { p, q }] if *p >= 1 && p == q => Ok(TargetKind::SuMM(*p)),
            [Factor::Su { p, q }] if *p >= 1 && p < q => Ok(TargetKind::SuMN(*p, *q)),
            [Factor::Sp { n }] if *n >= 1 => Ok(TargetKind::Sp(*n)),
            [Factor::SoStar { n }] if *n >= 2 && n % 2 == 0 => Ok(TargetKind::SoStar4p(n / 2)),
            [Factor::SoStar { n }] if *n >= 3 => Ok(TargetKind::SoStar4p2(n / 2)),
            _ => Err(unsupported()),
        }
    }

    pub fn capacity(self) -> usize {
        match self {
            TargetKind::SuMM(m) | TargetKind::SuMN(m, _) | TargetKind::Sp(m) => m,
            TargetKind::SoStar4p(p) | TargetKind::SoStar4p2(p) => p,
        }
    }

    fn factor(self) -> Factor {
        match self {
            TargetKind::SuMM(m) => Factor::Su { p: m, q: m },
            TargetKind::SuMN(m, n) => Factor::Su { p: m, q: n },
            TargetKind::Sp(p) => Factor::Sp { n: p },
            TargetKind::SoStar4p(p) => Factor::SoStar { n: 2 * p },
            TargetKind::SoStar4p2(p) => Factor::SoStar { n: 2 * p + 1 },
        }
    }
}

/// Complex dimension of the (half-)spin module of `so(2,r)`.
pub fn spin_dim(r: usize) -> usize {
    1 << r.div_ceil(2)
}

/// Family of the classical algebra receiving `spin(r)`, by `r mod 8`.
pub fn spin_family(r: usize) -> crate::algebra::Family {
    use crate::algebra::Family;
    match r % 8 {
        1..=3 => Family::Sp,
        5..=7 => Family::SoStar,
        _ => Family::Su,
    }
}

/// `so(2,r)` factors with their own entry: the low-rank ones are listed
/// under `su`, `sp` or `so*` instead.
fn so2_is_canonical(r: usize) -> bool {
    r >= 5 && r != 6
}

/// Capacity used by one copy of a factor inside the given target, or `None`
/// when the table does not allow it there.
pub fn unit_weight(kind: TargetKind, f: &ShapeFactor) -> Option<usize> {
    let tube = |sp_target: bool| -> Option<usize> {
        match *f {
            ShapeFactor::Su11Rho { ref blocks } => {
                if blocks.is_empty() || blocks.iter().any(|&(a, g)| a == 0 || g == 0) {
                    return None;
                }
                Some(blocks.iter().map(|&(a, g)| a * g).sum())
            }
            ShapeFactor::SuPP { p } if p >= 2 => Some(if sp_target { 2 * p } else { p }),
            ShapeFactor::Sp { n } if n >= 2 => Some(n),
            ShapeFactor::SoStar4 { m } if m >= 2 => Some(if sp_target { 4 * m } else { 2 * m }),
            _ => None,
        }
    };
    match kind {
        TargetKind::SuMM(_) | TargetKind::SuMN(..) => match *f {
            ShapeFactor::So2 { r } if so2_is_canonical(r) => Some(spin_dim(r) / 2),
            ShapeFactor::SuPQ { p, q } if matches!(kind, TargetKind::SuMN(..)) && p >= 1 && p < q => Some(p),
            _ => tube(false),
        },
        TargetKind::Sp(_) => match *f {
            ShapeFactor::So2 { r } if r >= 5 && matches!(r % 8, 1..=3) => Some(spin_dim(r) / 2),
            _ => tube(true),
        },
        TargetKind::SoStar4p(_) | TargetKind::SoStar4p2(_) => match *f {
            ShapeFactor::So2 { r } if so2_is_canonical(r) && matches!(r % 8, 5..=7) => Some(spin_dim(r) / 4),
            ShapeFactor::SoStar4 { m } if m >= 2 => Some(m),
            ShapeFactor::SoStarOdd { k } | ShapeFactor::SuPQ { p: k, .. }
                if matches!(kind, TargetKind::SoStar4p2(_))
                    && k >= 1
                    && (matches!(f, ShapeFactor::SoStarOdd { .. })
                        || f.source_factor() == (Factor::Su { p: k, q: k + 1 })) =>
            {
                Some(k)
            }
            _ => tube(false),
        },
    }
}

/// Search limits: every size parameter (`f`, `p`, `n`, `m`, `k`, and `q`
/// outside `su(k,k+1)`) is at most `max_part`. `So2` entries are limited by
/// capacity alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_part: usize,
}

impl Bounds {
    pub fn default_for(kind: TargetKind) -> Bounds {
        let max_part = match kind {
            TargetKind::SuMN(_, n) => n,
            other => other.capacity(),
        };
        Bounds { max_part }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeRecord {
    pub target: AlgebraDescriptor,
    /// Sorted; equal entries stand for distinct source factors of one type.
    pub entries: Vec<ShapeEntry>,
    pub capacity_used: usize,
    /// The capacity equation instance, e.g. `1*2 + 2*1 = 4`.
    pub constraint: String,
    /// Regular subalgebra pattern of the table row, one item per entry.
    pub g_reg: Vec<(Factor, usize)>,
}

fn weight_terms(kind: TargetKind, entries: &[ShapeEntry]) -> Option<Vec<(usize, usize)>> {
    entries.iter().map(|e| unit_weight(kind, &e.factor).map(|w| (w, e.multiplicity))).collect()
}

fn g_reg_item(kind: TargetKind, f: &ShapeFactor) -> Vec<Factor> {
    let su = |k: usize| Factor::Su { p: k, q: k };
    let sp_target = matches!(kind, TargetKind::Sp(_));
    let sostar_target = matches!(kind, TargetKind::SoStar4p(_) | TargetKind::SoStar4p2(_));
    match *f {
        ShapeFactor::Su11Rho { ref blocks } => {
            blocks.iter().map(|&(a, _)| if sp_target { Factor::Sp { n: a } } else { su(a) }).collect()
        }
        ShapeFactor::SuPP { p } => vec![su(p)],
        ShapeFactor::Sp { n } => vec![if sp_target { Factor::Sp { n } } else { su(n) }],
        ShapeFactor::SoStar4 { m } => vec![if sostar_target { Factor::SoStar { n: 2 * m } } else { su(2 * m) }],
        ShapeFactor::So2 { r } => {
            let d = spin_dim(r);
            vec![match kind {
                TargetKind::Sp(_) => Factor::Sp { n: d / 2 },
                TargetKind::SoStar4p(_) | TargetKind::SoStar4p2(_) => Factor::SoStar { n: d / 2 },
                _ => su(d / 2),
            }]
        }
        ShapeFactor::SuPQ { p, q } => vec![Factor::Su { p, q }],
        ShapeFactor::SoStarOdd { k } => vec![Factor::SoStar { n: 2 * k + 1 }],
    }
}

impl ShapeRecord {
    /// Validates the entries against the target table and fills the derived fields.
    pub fn new(target: AlgebraDescriptor, mut entries: Vec<ShapeEntry>) -> Result<ShapeRecord> {
        let kind = TargetKind::of(&target)?;
        entries.sort();
        if entries.is_empty() {
            return Err(Error::InvalidParameter("empty shape".into()));
        }
        for e in &entries {
            if e.multiplicity == 0 {
                return Err(Error::InvalidParameter(format!("{} has multiplicity 0", e.factor)));
            }
            if let ShapeFactor::Su11Rho { blocks } = &e.factor {
                if e.multiplicity != 1 || blocks.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return Err(Error::InvalidParameter(format!("malformed {}", e.factor)));
                }
            }
        }
        let terms = weight_terms(kind, &entries)
            .ok_or_else(|| Error::InvalidParameter(format!("entry not allowed in a {} target", target)))?;
        let used: usize = terms.iter().map(|(w, g)| w * g).sum();
        let cap = kind.capacity();
        if used != cap {
            return Err(Error::InvalidParameter(format!("shape uses capacity {} of {}", used, cap)));
        }
        let non_tube: Vec<&ShapeEntry> = entries.iter().filter(|e| !e.factor.is_tube()).collect();
        match kind {
            TargetKind::SuMN(_, n) => {
                let neg: usize = entries
                    .iter()
                    .zip(&terms)
                    .map(|(e, (w, g))| match e.factor {
                        ShapeFactor::SuPQ { q, .. } => q * g,
                        _ => w * g,
                    })
                    .sum();
                if neg > n {
                    return Err(Error::InvalidParameter(format!("negative part {} exceeds {}", neg, n)));
                }
            }
            TargetKind::SoStar4p2(_) if (non_tube.len() > 1 || non_tube.iter().any(|e| e.multiplicity != 1)) => {
                return Err(Error::InvalidParameter("at most one non-tube factor, once".into()));
            }
            _ => {}
        }
        let constraint =
            format!("{} = {}", terms.iter().map(|(w, g)| format!("{}*{}", w, g)).collect::<Vec<_>>().join(" + "), cap);
        let g_reg = entries
            .iter()
            .flat_map(|e| {
                let blocks: Vec<usize> = match &e.factor {
                    ShapeFactor::Su11Rho { blocks } => blocks.iter().map(|b| b.1).collect(),
                    _ => vec![e.multiplicity],
                };
                g_reg_item(kind, &e.factor).into_iter().zip(blocks)
            })
            .collect();
        Ok(ShapeRecord { target, entries, capacity_used: used, constraint, g_reg })
    }

    pub fn kind(&self) -> TargetKind {
        TargetKind::of(&self.target).expect("validated target")
    }

    /// Source algebra of the realization: one factor per entry, in entry order.
    pub fn source(&self) -> AlgebraDescriptor {
        AlgebraDescriptor::new(self.entries.iter().map(|e| e.factor.source_factor()).collect()).expect("valid factors")
    }

    /// Predicted `(dim, signature)` multiset of the complex decomposition of the
    /// realization on the target's defining module.
    pub fn block_multiset(&self) -> Vec<(usize, (usize, usize))> {
        let kind = self.kind();
        let mut out = Vec::new();
        let mut su_route = Vec::new();
        let push = |v: &mut Vec<_>, d: usize, s: (usize, usize), g: usize| {
            for _ in 0..g {
                v.push((d, s));
            }
        };
        let mut tube_cap = 0;
        for e in &self.entries {
            let g = e.multiplicity;
            tube_cap += if e.factor.is_tube() { unit_weight(kind, &e.factor).unwrap_or(0) * g } else { 0 };
            let routed = matches!(kind, TargetKind::SoStar4p(_) | TargetKind::SoStar4p2(_)) && e.factor.is_su_routed();
            let bucket = if routed { &mut su_route } else { &mut out };
            match e.factor {
                ShapeFactor::Su11Rho { ref blocks } => {
                    for &(f, g) in blocks {
                        push(bucket, 2 * f, (f, f), g);
                    }
                }
                ShapeFactor::SuPP { p } => {
                    let copies = if matches!(kind, TargetKind::Sp(_)) { 2 * g } else { g };
                    push(bucket, 2 * p, (p, p), copies);
                }
                ShapeFactor::Sp { n } => push(bucket, 2 * n, (n, n), g),
                ShapeFactor::SoStar4 { m } => {
                    let copies = if matches!(kind, TargetKind::Sp(_)) { 2 * g } else { g };
                    push(bucket, 4 * m, (2 * m, 2 * m), copies);
                }
                ShapeFactor::So2 { r } => {
                    let d = spin_dim(r);
                    push(bucket, d, (d / 2, d / 2), g);
                }
                ShapeFactor::SuPQ { p, q } => match kind {
                    TargetKind::SoStar4p2(_) => {
                        push(bucket, p + q, (p, q), 1);
                        push(bucket, p + q, (q, p), 1);
                    }
                    _ => push(bucket, p + q, (p, q), g),
                },
                ShapeFactor::SoStarOdd { k } => push(bucket, 4 * k + 2, (2 * k + 1, 2 * k + 1), 1),
            }
        }
        // su(k,k) -> so*(4k) doubles each block, reversing the signature of the copy.
        for (d, (a, b)) in su_route {
            out.push((d, (a, b)));
            out.push((d, (b, a)));
        }
        match kind {
            TargetKind::SuMN(m, n) => {
                let pos: usize = out.iter().map(|b| b.1 .0).sum();
                let neg: usize = out.iter().map(|b| b.1 .1).sum();
                push(&mut out, 1, (1, 0), m - pos);
                push(&mut out, 1, (0, 1), n - neg);
            }
            TargetKind::SoStar4p2(p) if tube_cap == p => {
                out.push((1, (1, 0)));
                out.push((1, (0, 1)));
            }
            _ => {}
        }
        out.sort();
        out
    }

    /// The shape whose realization is the inclusion of the hull of this
    /// shape's realization: each `rho_odd(f)` block type becomes `sp(2f)`
    /// with the same multiplicity.
    pub fn hull_shape(&self) -> Result<ShapeRecord> {
        let mut entries = Vec::new();
        for e in &self.entries {
            match &e.factor {
                ShapeFactor::Su11Rho { blocks } => {
                    for &(f, g) in blocks {
                        let factor = if f == 1 {
                            ShapeFactor::Su11Rho { blocks: vec![(1, g)] }
                        } else {
                            ShapeFactor::Sp { n: f }
                        };
                        let multiplicity = if f == 1 { 1 } else { g };
                        entries.push(ShapeEntry { factor, multiplicity });
                    }
                }
                _ => entries.push(e.clone()),
            }
        }
        ShapeRecord::new(self.target.clone(), entries)
    }
}

impl core::fmt::Display for ShapeRecord {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| format!("{}x{}", e.factor, e.multiplicity)).collect();
        write!(f, "{} -> {}", parts.join(" + "), self.target)
    }
}

/// Partitions of `w` with parts at most `max`, as `(part, count)` with
/// increasing parts.
fn partitions(w: usize, max: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(w: usize, max: usize, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if w == 0 {
            let mut v = acc.clone();
            v.reverse();
            out.push(v);
            return;
        }
        for part in (1..=max.min(w)).rev() {
            for count in 1..=w / part {
                acc.push((part, count));
                go(w - part * count, part - 1, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(w, max, &mut Vec::new(), &mut out);
    out
}

/// Every entry `(factor, g)` allowed in the target with total weight at most
/// the capacity.
fn atoms(kind: TargetKind, bounds: Bounds) -> Vec<(ShapeEntry, usize)> {
    let cap = kind.capacity();
    let b = bounds.max_part;
    let mut candidates: Vec<ShapeFactor> = Vec::new();
    for w in 1..=cap {
        for blocks in partitions(w, b) {
            candidates.push(ShapeFactor::Su11Rho { blocks });
        }
    }
    for x in 1..=b {
        candidates.push(ShapeFactor::SuPP { p: x });
        candidates.push(ShapeFactor::Sp { n: x });
        candidates.push(ShapeFactor::SoStar4 { m: x });
        candidates.push(ShapeFactor::SoStarOdd { k: x });
        for q in x + 1..=b.max(x + 1) {
            candidates.push(ShapeFactor::SuPQ { p: x, q });
        }
    }
    let mut r = 5;
    while spin_dim(r) <= 4 * cap {
        candidates.push(ShapeFactor::So2 { r });
        r += 1;
    }
    let mut out = Vec::new();
    for f in candidates {
        let Some(w) = unit_weight(kind, &f) else { continue };
        let max_g =
            if matches!(f, ShapeFactor::Su11Rho { .. }) || (!f.is_tube() && matches!(kind, TargetKind::SoStar4p2(_))) {
                1
            } else {
                cap / w
            };
        for g in 1..=max_g {
            if w * g <= cap {
                out.push((ShapeEntry { factor: f.clone(), multiplicity: g }, w * g));
            }
        }
    }
    out.sort();
    out
}

/// All shapes for a simple classical target, sorted by number of entries and
/// then lexicographically.
pub fn enumerate_shapes(target: &AlgebraDescriptor, bounds: Option<Bounds>) -> Result<Vec<ShapeRecord>> {
    let kind = TargetKind::of(target)?;
    let bounds = bounds.unwrap_or_else(|| Bounds::default_for(kind));
    let atoms = atoms(kind, bounds);
    let mut raw: Vec<Vec<ShapeEntry>> = Vec::new();
    fn go(
        atoms: &[(ShapeEntry, usize)],
        start: usize,
        left: usize,
        acc: &mut Vec<ShapeEntry>,
        out: &mut Vec<Vec<ShapeEntry>>,
    ) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for i in start..atoms.len() {
            let (e, w) = &atoms[i];
            if *w <= left {
                acc.push(e.clone());
                go(atoms, i, left - w, acc, out);
                acc.pop();
            }
        }
    }
    go(&atoms, 0, kind.capacity(), &mut Vec::new(), &mut raw);
    let mut shapes: Vec<ShapeRecord> =
        raw.into_iter().filter_map(|entries| ShapeRecord::new(target.clone(), entries).ok()).collect();
    shapes.sort_by(|a, b| (a.entries.len(), &a.entries).cmp(&(b.entries.len(), &b.entries)));
    shapes.dedup();
    Ok(shapes)
}

fn copies(rho: &Homomorphism, g: usize) -> Result<Homomorphism> {
    let mut out = rho.clone();
    for _ in 1..g {
        out = direct_sum(&out, rho, true)?;
    }
    Ok(out)
}

fn fold_sum(parts: Vec<Homomorphism>) -> Result<Option<Homomorphism>> {
    let mut it = parts.into_iter();
    let Some(mut acc) = it.next() else { return Ok(None) };
    for p in it {
        acc = direct_sum(&acc, &p, false)?;
    }
    Ok(Some(acc))
}

fn target_factor(rho: &Homomorphism) -> Factor {
    rho.target.factors()[0]
}

/// Lands `rho` (simple classical target) in some `su(k,k)` or `su(p,q)`.
fn to_su(rho: Homomorphism) -> Result<Homomorphism> {
    match target_factor(&rho) {
        Factor::Su { .. } => Ok(rho),
        Factor::Sp { n } => compose(&std_inclusion(StdKind::SpToSu, &[n])?, &rho),
        Factor::SoStar { n } => compose(&std_inclusion(StdKind::SostarToSu, &[n])?, &rho),
        other => Err(Error::Unsupported(format!("no route from {} to su", other))),
    }
}

/// One copy of an `su`-routed or `su`-target entry, landing in `su(w,w)` (or `su(p,q)`).
fn unit_su(f: &ShapeFactor) -> Result<Homomorphism> {
    match *f {
        ShapeFactor::Su11Rho { ref blocks } => {
            let mut parts = Vec::new();
            for &(a, g) in blocks {
                parts.push(copies(&to_su(rho_odd(a)?)?, g)?);
            }
            let mut it = parts.into_iter();
            let mut acc = it.next().ok_or_else(|| Error::InvalidParameter("empty su(1,1) entry".into()))?;
            for p in it {
                acc = direct_sum(&acc, &p, true)?;
            }
            Ok(acc)
        }
        ShapeFactor::So2 { r } => to_su(spin(r, 1)?),
        ref other => to_su(identity(&AlgebraDescriptor::simple(other.source_factor())?)),
    }
}

fn unit_sp(f: &ShapeFactor) -> Result<Homomorphism> {
    match *f {
        ShapeFactor::Su11Rho { ref blocks } => {
            let mut acc: Option<Homomorphism> = None;
            for &(a, g) in blocks {
                let part = copies(&rho_odd(a)?, g)?;
                acc = Some(match acc {
                    None => part,
                    Some(x) => direct_sum(&x, &part, true)?,
                });
            }
            acc.ok_or_else(|| Error::InvalidParameter("empty su(1,1) entry".into()))
        }
        ShapeFactor::Sp { n } => Ok(identity(&AlgebraDescriptor::sp(n))),
        ShapeFactor::So2 { r } => spin(r, 1),
        ShapeFactor::SuPP { .. } | ShapeFactor::SoStar4 { .. } => {
            let su = unit_su(f)?;
            let Factor::Su { p, q } = target_factor(&su) else { unreachable!() };
            compose(&std_inclusion(StdKind::SuToSp, &[p, q])?, &su)
        }
        ref other => Err(Error::Unsupported(format!("{} in an sp target", other))),
    }
}

fn unit_sostar(f: &ShapeFactor) -> Result<Homomorphism> {
    match *f {
        ShapeFactor::SoStar4 { m } => Ok(identity(&AlgebraDescriptor::sostar(2 * m))),
        ShapeFactor::SoStarOdd { k } => Ok(identity(&AlgebraDescriptor::sostar(2 * k + 1))),
        ShapeFactor::So2 { r } => spin(r, 1),
        ShapeFactor::SuPQ { p, q } => {
            compose(&std_inclusion(StdKind::SuToSostar, &[p, q])?, &identity(&AlgebraDescriptor::su(p, q)))
        }
        ref other => Err(Error::Unsupported(format!("{} in an so* target", other))),
    }
}

/// The block homomorphism of a shape: entries in order, each realized by
/// `rho_odd`, identity, spin or standard-inclusion blocks with its
/// multiplicity, padded into the target.
pub fn realize_shape(shape: &ShapeRecord) -> Result<Homomorphism> {
    let kind = shape.kind();
    let mut parts = Vec::new();
    match kind {
        TargetKind::SuMM(_) | TargetKind::SuMN(..) => {
            for e in &shape.entries {
                parts.push(copies(&unit_su(&e.factor)?, e.multiplicity)?);
            }
        }
        TargetKind::Sp(_) => {
            for e in &shape.entries {
                parts.push(copies(&unit_sp(&e.factor)?, e.multiplicity)?);
            }
        }
        TargetKind::SoStar4p(_) | TargetKind::SoStar4p2(_) => {
            let mut routed = Vec::new();
            for e in shape.entries.iter().filter(|e| e.factor.is_su_routed()) {
                routed.push(copies(&unit_su(&e.factor)?, e.multiplicity)?);
            }
            if let Some(r1) = fold_sum(routed)? {
                let Factor::Su { p, q } = target_factor(&r1) else { unreachable!() };
                parts.push(compose(&std_inclusion(StdKind::SuToSostar, &[p, q])?, &r1)?);
            }
            for e in shape.entries.iter().filter(|e| !e.factor.is_su_routed()) {
                parts.push(copies(&unit_sostar(&e.factor)?, e.multiplicity)?);
            }
        }
    }
    let rho = fold_sum(parts)?.ok_or_else(|| Error::InvalidParameter("empty shape".into()))?;
    let big = kind.factor();
    let rho =
        if target_factor(&rho) == big { rho } else { compose(&block_inclusion(&target_factor(&rho), &big)?, &rho)? };
    debug_assert_eq!(rho.source, shape.source());
    Ok(rho.with_label(format!("realize({})", shape)))
}

/// Hull pieces of one `su(1,1)` source factor: `sp(2m)` with the number of
/// isomorphic summands it absorbs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullPieces {
    pub factor: usize,
    /// `(m, copies)` with `m` increasing.
    pub pieces: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullResult {
    pub hull: AlgebraDescriptor,
    pub per_factor_detail: Vec<HullPieces>,
    pub holomorphic_tight_into_target: bool,
}

/// Nontrivial block dimensions of the action of source factor `i`.
fn su11_summands(rho: &Homomorphism, report: &DecompositionReport, i: usize) -> Result<Vec<usize>> {
    let support = block_support(rho, report);
    if support.iter().all(|s| s.len() <= 1) {
        return Ok(report.blocks.iter().zip(&support).filter(|(_, s)| s.contains(&i)).map(|(b, _)| b.dim()).collect());
    }
    // Mixed blocks: decompose the restriction to the factor instead.
    let basis = rho.source_basis();
    let images: Vec<_> = (0..basis.len()).filter(|&j| basis.factor_of[j] == i).map(|j| rho.images[j].clone()).collect();
    let src = AlgebraDescriptor::simple(rho.source.factors()[i])?;
    let restricted = Homomorphism::from_images(src, rho.target.clone(), "restriction", images)?;
    let rep = invariant_decomposition_su(&restricted)?;
    if rep.residual_kind != ResidualKind::Complete {
        return Err(Error::Incomplete(format!("restriction to factor {} does not decompose", i)));
    }
    let support = block_support(&restricted, &rep);
    Ok(rep.blocks.iter().zip(&support).filter(|(_, s)| !s.is_empty()).map(|(b, _)| b.dim()).collect())
}

/// Hermitian hull of a tight positive map, assembled factor by factor: each
/// `su(1,1)` factor gives one `sp(2m,R)` per isomorphism class of its
/// summands of dimension `2m`, every other factor gives itself.
pub fn hermitian_hull(rho: &Homomorphism, decomposition: &DecompositionReport) -> Result<HullResult> {
    let cert = certify(rho)?;
    if !cert.tight {
        return Err(Error::NotTight);
    }
    if !cert.positive {
        return Err(Error::NotPositive);
    }
    if decomposition.residual_kind != ResidualKind::Complete {
        return Err(Error::Incomplete("decomposition is not complete".into()));
    }
    let mut factors = Vec::new();
    let mut detail = Vec::new();
    let mut total = Q::zero();
    for (i, (f, alpha)) in cert.per_factor.iter().enumerate() {
        if !involves_su11(f) {
            factors.push(*f);
            total += alpha.abs() * Q::from_integer((f.rank() as i64).into());
            continue;
        }
        if *f == (Factor::So2 { n: 2 }) {
            return Err(Error::Unsupported("canonicalize so(2,2) into two su(1,1) factors first".into()));
        }
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for d in su11_summands(rho, decomposition, i)? {
            if d % 2 != 0 {
                return Err(Error::Unsupported(format!("summand of odd dimension {} under factor {}", d, i)));
            }
            *counts.entry(d / 2).or_default() += 1;
        }
        for (&m, &c) in &counts {
            factors.push(Factor::Sp { n: m });
            total += Q::from_integer(((m * c) as i64).into());
        }
        detail.push(HullPieces { factor: i, pieces: counts.into_iter().collect() });
    }
    Ok(HullResult {
        hull: AlgebraDescriptor::new(factors)?,
        per_factor_detail: detail,
        holomorphic_tight_into_target: total == Q::from_integer((rho.target.rank() as i64).into()),
    })
}

/// Rewrites each factor along the low-rank isomorphisms, preferring `su`,
/// then `sp`, then `so*`, then `so(2,n)`.
pub fn canonicalize(a: &AlgebraDescriptor) -> AlgebraDescriptor {
    let su11 = Factor::Su { p: 1, q: 1 };
    let mut out = Vec::new();
    for f in a.factors() {
        match *f {
            Factor::Sp { n: 1 } | Factor::So2 { n: 1 } => out.push(su11),
            Factor::So2 { n: 2 } => out.extend([su11, su11]),
            Factor::SoStar { n: 3 } => out.push(Factor::Su { p: 1, q: 3 }),
            Factor::So2 { n: 3 } => out.push(Factor::Sp { n: 2 }),
            Factor::So2 { n: 4 } => out.push(Factor::Su { p: 2, q: 2 }),
            Factor::So2 { n: 6 } => out.push(Factor::SoStar { n: 4 }),
            other => out.push(other),
        }
    }
    AlgebraDescriptor::new(out).expect("canonical factors are valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagramTarget {
    So2(usize),
    E6,
    E7,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramEdge {
    pub from: usize,
    pub to: usize,
    pub label: Option<&'static str>,
    /// Drawn in red: the subdiagrams through this arrow do not commute.
    pub non_commuting: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub target: DiagramTarget,
    pub nodes: Vec<String>,
    pub edges: Vec<DiagramEdge>,
    /// Only holomorphic maps are listed; exotic tight ones are not excluded.
    pub caveat: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramPath {
    pub nodes: Vec<usize>,
    pub non_commuting: bool,
}

struct Builder {
    nodes: Vec<String>,
    edges: Vec<DiagramEdge>,
}

impl Builder {
    fn node(&mut self, name: &str) -> usize {
        if let Some(i) = self.nodes.iter().position(|n| n == name) {
            return i;
        }
        self.nodes.push(name.into());
        self.nodes.len() - 1
    }

    fn edge(&mut self, a: &str, b: &str, label: Option<&'static str>, red: bool) {
        let (from, to) = (self.node(a), self.node(b));
        self.edges.push(DiagramEdge { from, to, label, non_commuting: red });
    }
}

pub fn diagram(target: DiagramTarget) -> Result<Diagram> {
    let mut b = Builder { nodes: Vec::new(), edges: Vec::new() };
    let mut caveat = false;
    match target {
        DiagramTarget::So2(p) => {
            if p < 3 {
                return Err(Error::InvalidParameter(format!("so(2,{}) has no diagram", p)));
            }
            b.edge("su(1,1)", "sp(4,R)", Some("rho_3"), true);
            b.edge("su(1,1)", "su(1,1) + su(1,1)", None, true);
            b.edge("su(1,1) + su(1,1)", "sp(4,R)", None, true);
            b.edge("sp(4,R)", "so(2,3)", Some("~"), false);
            if p >= 4 {
                b.edge("so(2,3)", "so(2,4)", Some("f"), false);
                b.edge("sp(4,R)", "su(2,2)", None, false);
                b.edge("su(2,2)", "so(2,4)", Some("~"), false);
                for k in 5..=p {
                    b.edge(&format!("so(2,{})", k - 1), &format!("so(2,{})", k), None, false);
                }
            }
        }
        DiagramTarget::E6 => {
            let e = |b: &mut Builder, x: &str, y: &str| b.edge(x, y, None, false);
            b.edge("su(1,1)", "sp(4,R)", None, true);
            b.edge("su(1,1)", "su(1,1) + su(1,1)", None, true);
            b.edge("su(1,1) + su(1,1)", "sp(4,R)", None, true);
            e(&mut b, "su(1,1) + su(1,1)", "su(1,1) + su(1,2)");
            e(&mut b, "sp(4,R)", "su(2,2)");
            for y in ["su(1,2) + su(1,2)", "su(1,1) + su(1,3)", "su(2,3)"] {
                e(&mut b, "su(1,1) + su(1,2)", y);
            }
            e(&mut b, "su(2,2)", "su(2,3)");
            e(&mut b, "su(2,2)", "so(2,5)");
            e(&mut b, "so(2,5)", "so(2,6)");
            for y in ["su(1,1) + su(1,4)", "su(2,4)", "so*(10)"] {
                e(&mut b, "su(1,1) + su(1,3)", y);
            }
            e(&mut b, "su(2,3)", "su(2,4)");
            e(&mut b, "so(2,6)", "so*(10)");
            e(&mut b, "so(2,6)", "so(2,7)");
            e(&mut b, "su(1,1) + su(1,4)", "su(1,1) + su(1,5)");
            e(&mut b, "so(2,7)", "so(2,8)");
            e(&mut b, "su(1,2) + su(1,2)", "su(2,4)");
            for x in ["su(1,1) + su(1,5)", "su(2,4)", "so*(10)", "so(2,8)"] {
                e(&mut b, x, "e6(-14)");
            }
        }
        DiagramTarget::E7 => {
            caveat = true;
            let e = |b: &mut Builder, x: &str, y: &str| b.edge(x, y, None, false);
            e(&mut b, "su(1,1)", "sp(4,R) + su(1,1)");
            e(&mut b, "su(1,1)", "su(1,1) + su(1,1) + su(1,1)");
            e(&mut b, "su(1,1)", "sp(6,R)");
            e(&mut b, "su(1,1) + su(1,1) + su(1,1)", "sp(6,R)");
            e(&mut b, "su(1,1) + su(1,1) + su(1,1)", "sp(4,R) + su(1,1)");
            e(&mut b, "sp(6,R)", "su(3,3)");
            e(&mut b, "sp(4,R) + su(1,1)", "su(2,2) + su(1,1)");
            e(&mut b, "su(3,3)", "so*(12)");
            e(&mut b, "su(2,2) + su(1,1)", "so(2,6) + su(1,1)");
            e(&mut b, "so(2,6) + su(1,1)", "so(2,10) + su(1,1)");
            e(&mut b, "so(2,6) + su(1,1)", "so*(12)");
            e(&mut b, "so*(12)", "e7(-25)");
            e(&mut b, "so(2,10) + su(1,1)", "e7(-25)");
            for p in [5, 7, 8, 9] {
                e(&mut b, &format!("so(2,{}) + su(1,1)", p), "so(2,10) + su(1,1)");
            }
        }
    }
    Ok(Diagram { target, nodes: b.nodes, edges: b.edges, caveat })
}

impl Diagram {
    pub fn index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == name)
    }

    /// Every directed path from `from` to `to` (the diagrams are acyclic).
    pub fn paths(&self, from: usize, to: usize) -> Vec<DiagramPath> {
        let mut out = Vec::new();
        let mut stack = vec![from];
        self.walk(to, &mut stack, false, &mut out);
        out
    }

    fn walk(&self, to: usize, stack: &mut Vec<usize>, red: bool, out: &mut Vec<DiagramPath>) {
        let here = *stack.last().expect("nonempty");
        if here == to {
            out.push(DiagramPath { nodes: stack.clone(), non_commuting: red });
            return;
        }
        for e in self.edges.iter().filter(|e| e.from == here) {
            if stack.contains(&e.to) {
                continue;
            }
            stack.push(e.to);
            self.walk(to, stack, red || e.non_commuting, out);
            stack.pop();
        }
    }
}

/// Paths between two named nodes of the diagram for `target`.
pub fn diagram_paths(target: DiagramTarget, from: &str, to: &str) -> Result<Vec<DiagramPath>> {
    let d = diagram(target)?;
    let a = d.index(from).ok_or_else(|| Error::InvalidParameter(format!("no node {}", from)))?;
    let b = d.index(to).ok_or_else(|| Error::InvalidParameter(format!("no node {}", to)))?;
    Ok(d.paths(a, b))
}
