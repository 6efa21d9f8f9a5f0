//! Elaboration of typed expressions into library values.

use std::fmt;

use tightmaps::algebra::{make_algebra, AlgebraDescriptor};
use tightmaps::catalog::{
    block_inclusion, compose, direct_sum, disc, gl2_example, identity, polydisc, rho_odd, spin, std_inclusion, tensor,
    Homomorphism,
};
use tightmaps::hull::{ShapeEntry, ShapeRecord};

use crate::syntax::{Expr, ExprKind, Pos, ShapeLit};

#[derive(Clone, Debug)]
pub enum Value {
    Alg(AlgebraDescriptor),
    Hom(Homomorphism),
    Shape(ShapeRecord),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElabError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for ElabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ElabError {}

type Result<T> = std::result::Result<T, ElabError>;

fn at<T>(pos: Pos, r: tightmaps::error::Result<T>) -> Result<T> {
    r.map_err(|e| ElabError { pos, message: e.to_string() })
}

pub fn elaborate(e: &Expr) -> Result<Value> {
    let pos = e.pos;
    Ok(match &e.kind {
        ExprKind::Alg { .. } | ExprKind::Asum(_) => Value::Alg(algebra(e)?),
        ExprKind::Shape { target, entries } => Value::Shape(shape(pos, &algebra(target)?, entries)?),
        _ => Value::Hom(hom(e)?),
    })
}

pub fn algebra(e: &Expr) -> Result<AlgebraDescriptor> {
    match &e.kind {
        ExprKind::Alg { family, params } => at(e.pos, make_algebra(*family, params)),
        ExprKind::Asum(parts) => {
            let mut it = parts.iter();
            let first = algebra(it.next().expect("asum has a part"))?;
            it.try_fold(first, |acc, p| Ok(acc.direct_sum(&algebra(p)?)))
        }
        _ => Err(ElabError {
            pos: e.pos,
            message: format!("expected {}, found {}", crate::syntax::Sort::Alg, e.kind.sort()),
        }),
    }
}

fn simple(e: &Expr) -> Result<tightmaps::algebra::Factor> {
    let a = algebra(e)?;
    match a.factors() {
        [f] => Ok(*f),
        _ => Err(ElabError { pos: e.pos, message: format!("{} is not simple", a) }),
    }
}

pub fn hom(e: &Expr) -> Result<Homomorphism> {
    let pos = e.pos;
    match &e.kind {
        ExprKind::Std { kind, params } => at(pos, std_inclusion(*kind, params)),
        ExprKind::Rho(n) => at(pos, rho_odd(*n)),
        ExprKind::Spin { p, chirality } => at(pos, spin(*p, chirality.unwrap_or(1))),
        ExprKind::Disc { alg, signs } => at(pos, disc(&algebra(alg)?, signs)),
        ExprKind::Polydisc(a) => Ok(polydisc(&algebra(a)?)),
        ExprKind::Id(a) => Ok(identity(&algebra(a)?)),
        ExprKind::Incl { small, big } => at(pos, block_inclusion(&simple(small)?, &simple(big)?)),
        ExprKind::Dsum { first, second, same_source } => at(pos, direct_sum(&hom(first)?, &hom(second)?, *same_source)),
        ExprKind::Comp { outer, inner } => at(pos, compose(&hom(outer)?, &hom(inner)?)),
        ExprKind::Tensor(a, b) => at(pos, tensor(&hom(a)?, &hom(b)?)),
        ExprKind::Gl2 => Ok(gl2_example()),
        _ => Err(ElabError { pos, message: format!("expected {}, found {}", crate::syntax::Sort::Hom, e.kind.sort()) }),
    }
}

fn shape(pos: Pos, target: &AlgebraDescriptor, entries: &[ShapeLit]) -> Result<ShapeRecord> {
    let entries =
        entries.iter().map(|l| ShapeEntry { factor: l.factor.clone(), multiplicity: l.multiplicity }).collect();
    at(pos, ShapeRecord::new(target.clone(), entries))
}

/// The expression `shape(...)` that elaborates to `s`.
pub fn shape_expr(s: &ShapeRecord) -> Expr {
    Expr::new(ExprKind::Shape {
        target: Box::new(algebra_expr(&s.target)),
        entries: s
            .entries
            .iter()
            .map(|e| ShapeLit { factor: e.factor.clone(), multiplicity: e.multiplicity })
            .collect(),
    })
}

/// The expression `alg(...)` or `asum(...)` for a descriptor.
pub fn algebra_expr(a: &AlgebraDescriptor) -> Expr {
    let parts: Vec<Expr> =
        a.factors().iter().map(|f| Expr::new(ExprKind::Alg { family: f.family(), params: f.params() })).collect();
    if parts.len() == 1 {
        parts.into_iter().next().expect("one part")
    } else {
        Expr::new(ExprKind::Asum(parts))
    }
}
