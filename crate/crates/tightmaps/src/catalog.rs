//! Explicit homomorphisms: standard inclusions, discs, odd-weight and spin
//! representations, and the plumbing to combine them.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::algebra::{AlgebraDescriptor, Basis, Element, Factor};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{Scalar, Q};

/// A Lie algebra map, stored as the images of the source basis.
#[derive(Clone)]
pub struct Homomorphism {
    pub source: AlgebraDescriptor,
    pub target: AlgebraDescriptor,
    pub images: Vec<Mat>,
    pub label: String,
    basis: Arc<Basis>,
}

impl PartialEq for Homomorphism {
    fn eq(&self, o: &Self) -> bool {
        self.source == o.source && self.target == o.target && self.images == o.images
    }
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Homomorphism({}: {} -> {})", self.label, self.source, self.target)
    }
}

impl Homomorphism {
    /// Builds a map by evaluating `f` on each source basis element.
    pub fn from_fn(
        source: AlgebraDescriptor,
        target: AlgebraDescriptor,
        label: impl Into<String>,
        f: impl Fn(&Mat) -> Mat,
    ) -> Self {
        let basis = Arc::new(source.basis());
        let images = basis.elems.iter().map(f).collect();
        Homomorphism { source, target, images, label: label.into(), basis }
    }

    pub fn from_images(
        source: AlgebraDescriptor,
        target: AlgebraDescriptor,
        label: impl Into<String>,
        images: Vec<Mat>,
    ) -> Result<Self> {
        let basis = Arc::new(source.basis());
        if images.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), found: images.len() });
        }
        let n = target.dim();
        if let Some(m) = images.iter().find(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: m.rows() });
        }
        Ok(Homomorphism { source, target, images, label: label.into(), basis })
    }

    pub fn source_basis(&self) -> &Basis {
        &self.basis
    }

    /// `dρ(X)` for any `X` in the source.
    pub fn apply(&self, x: &Mat) -> Result<Mat> {
        let c = self.basis.coords(x).ok_or_else(|| Error::NotInAlgebra {
            algebra: format!("{}", self.source),
            residual: self.source.membership_residual(x).unwrap_or_else(|_| Q::one()),
        })?;
        let n = self.target.dim();
        let mut out = Mat::zeros(n, n);
        for (ci, im) in c.iter().zip(&self.images) {
            if !ci.is_zero() {
                out.axpy(ci, im);
            }
        }
        Ok(out)
    }

    /// Images as validated target elements.
    pub fn elements(&self) -> Result<Vec<Element>> {
        self.images.iter().map(|m| Element::new(self.target.clone(), m.clone())).collect()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// Maximum of the bracket defect over basis pairs and the membership residuals
/// of the images; zero certifies a homomorphism.
pub fn verify_homomorphism(rho: &Homomorphism) -> Q {
    let mut res = Q::zero();
    for m in &rho.images {
        match rho.target.membership_residual(m) {
            Ok(r) => res = res.max(r),
            Err(_) => return Q::one(),
        }
    }
    let b = rho.source_basis();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            let lhs = match rho.apply(&b.elems[i].commutator(&b.elems[j])) {
                Ok(m) => m,
                Err(_) => return Q::one(),
            };
            let rhs = rho.images[i].commutator(&rho.images[j]);
            res = res.max(lhs.sub(&rhs).residual());
        }
    }
    res
}

pub fn identity(a: &AlgebraDescriptor) -> Homomorphism {
    Homomorphism::from_fn(a.clone(), a.clone(), format!("id({})", a), Mat::clone)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StdKind {
    SpToSu,
    SostarToSu,
    SuToSp,
    SuToSostar,
}

impl StdKind {
    pub fn parse(s: &str) -> Option<StdKind> {
        match s.to_ascii_uppercase().as_str() {
            "SP_TO_SU" => Some(StdKind::SpToSu),
            "SOSTAR_TO_SU" => Some(StdKind::SostarToSu),
            "SU_TO_SP" => Some(StdKind::SuToSp),
            "SU_TO_SOSTAR" => Some(StdKind::SuToSostar),
            _ => None,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            StdKind::SpToSu => "SP_TO_SU",
            StdKind::SostarToSu => "SOSTAR_TO_SU",
            StdKind::SuToSp => "SU_TO_SP",
            StdKind::SuToSostar => "SU_TO_SOSTAR",
        }
    }
}

/// `[[A, Z], [Z*, B]]` with blocks `(m, n)` to the doubled `4x4` block form
/// `[[A,0,0,Z],[0,conj B,s Z^T,0],[0,s conj Z,conj A,0],[Z*,0,0,B]]`.
fn su_double(x: &Mat, m: usize, n: usize, s: &Scalar) -> Mat {
    let d = 2 * (m + n);
    let mut out = Mat::zeros(d, d);
    // Block offsets: A at 0, conj B at m, conj A at m+n, B at 2m+n.
    let (o1, o2, o3, o4) = (0, m, m + n, 2 * m + n);
    for (r, c, v) in x.entries() {
        match (r < m, c < m) {
            (true, true) => {
                out[(o1 + r, o1 + c)] = v.clone();
                out[(o3 + r, o3 + c)] = v.conj();
            }
            (false, false) => {
                out[(o4 + r - m, o4 + c - m)] = v.clone();
                out[(o2 + r - m, o2 + c - m)] = v.conj();
            }
            (true, false) => {
                out[(o1 + r, o4 + c - m)] = v.clone();
                out[(o2 + c - m, o3 + r)] = v * s;
                out[(o3 + r, o2 + c - m)] = &v.conj() * s;
            }
            (false, true) => {
                out[(o4 + r - m, o1 + c)] = v.clone();
            }
        }
    }
    out
}

/// The standard inclusions between the classical families.
pub fn std_inclusion(kind: StdKind, params: &[usize]) -> Result<Homomorphism> {
    let label =
        format!("std({},{})", kind.tag(), params.iter().map(|p| format!("{}", p)).collect::<Vec<_>>().join(","));
    match kind {
        StdKind::SpToSu | StdKind::SostarToSu => {
            let [n] = params else {
                return Err(Error::InvalidParameter(format!("{} takes one parameter", kind.tag())));
            };
            let n = *n;
            let src = if kind == StdKind::SpToSu {
                AlgebraDescriptor::simple(Factor::Sp { n })?
            } else {
                AlgebraDescriptor::simple(Factor::SoStar { n })?
            };
            let tgt = AlgebraDescriptor::simple(Factor::Su { p: n, q: n })?;
            Ok(Homomorphism::from_fn(src, tgt, label, Mat::clone))
        }
        StdKind::SuToSp | StdKind::SuToSostar => {
            let [m, n] = params else {
                return Err(Error::InvalidParameter(format!("{} takes two parameters", kind.tag())));
            };
            let (m, n) = (*m, *n);
            if m < 1 || n < 1 {
                return Err(Error::InvalidParameter(format!("{} requires m, n >= 1", kind.tag())));
            }
            let src = AlgebraDescriptor::simple(Factor::Su { p: m.min(n), q: m.max(n) })?;
            if m > n {
                return Err(Error::InvalidParameter(format!("{} requires m <= n", kind.tag())));
            }
            let (tgt, s) = if kind == StdKind::SuToSp {
                (AlgebraDescriptor::simple(Factor::Sp { n: m + n })?, Scalar::one())
            } else {
                (AlgebraDescriptor::simple(Factor::SoStar { n: m + n })?, Scalar::from_i64(-1))
            };
            Ok(Homomorphism::from_fn(src, tgt, label, |x| su_double(x, m, n, &s)))
        }
    }
}

fn binom(n: u64, k: u64) -> Q {
    let mut r = Q::one();
    for i in 0..k {
        r = r * Q::from_integer((n - i).into()) / Q::from_integer((i + 1).into());
    }
    r
}

/// The irreducible representation of `su(1,1)` of odd highest weight `2n-1`,
/// in the standard `sp(2n,R)` model.
///
/// The symmetric power of the standard representation is written in the
/// monomials `v_k = e1^k e2^(N-k)` (with `N = 2n-1`), rescaled by
/// `sqrt(C(N,k))` to make the invariant Hermitian and symplectic forms
/// unimodular, then reordered so the `n` positive vectors (odd `k`) come first,
/// each paired with `v_(N-k)`.
pub fn rho_odd(n: usize) -> Result<Homomorphism> {
    if n < 1 {
        return Err(Error::InvalidParameter("rho_odd requires n >= 1".into()));
    }
    let big_n = 2 * n - 1;
    let d = 2 * n;
    // New coordinate j <- monomial index.
    let mut order: Vec<usize> = (0..n).map(|j| 2 * j + 1).collect();
    order.extend((0..n).map(|j| big_n - (2 * j + 1)));
    let mut pos = vec![0; d];
    for (j, &k) in order.iter().enumerate() {
        pos[k] = j;
    }
    // sqrt(C(N,k) / C(N,l)) for the neighbour pairs that occur.
    let ratio = |k: usize, l: usize| -> Scalar {
        let r = binom(big_n as u64, k as u64) / binom(big_n as u64, l as u64);
        Scalar::sqrt_q(&r)
    };
    let image = |x: &Mat| -> Mat {
        let (a, b, c, dd) = (&x[(0, 0)], &x[(0, 1)], &x[(1, 0)], &x[(1, 1)]);
        let mut out = Mat::zeros(d, d);
        for k in 0..=big_n {
            let kk = Scalar::from_i64(k as i64);
            let rest = Scalar::from_i64((big_n - k) as i64);
            out[(pos[k], pos[k])] = &(&kk * a) + &(&rest * dd);
            if k > 0 {
                out[(pos[k - 1], pos[k])] = &(&kk * c) * &ratio(k, k - 1);
            }
            if k < big_n {
                out[(pos[k + 1], pos[k])] = &(&rest * b) * &ratio(k, k + 1);
            }
        }
        out
    };
    Ok(Homomorphism::from_fn(
        AlgebraDescriptor::su(1, 1),
        AlgebraDescriptor::simple(Factor::Sp { n })?,
        format!("rho({})", n),
        image,
    ))
}

/// Gamma matrices for the form of signature `(2,p)` and the natural Hermitian
/// form on the spinors.
#[derive(Clone, Debug)]
pub struct CliffordAlgebraData {
    pub p: usize,
    pub gamma: Vec<Mat>,
    pub even_part_dim: usize,
    pub hermitian_gram: Mat,
}

fn pauli() -> [Mat; 3] {
    let i = Scalar::i();
    [
        Mat::from_i64(&[&[0, 1], &[1, 0]]),
        Mat::from_rows(vec![vec![Scalar::zero(), -&i], vec![i, Scalar::zero()]]),
        Mat::from_i64(&[&[1, 0], &[0, -1]]),
    ]
}

fn kron_all(ms: &[Mat]) -> Mat {
    ms.iter().skip(1).fold(ms[0].clone(), |acc, m| acc.kron(m))
}

impl CliffordAlgebraData {
    /// Generators by iterated Kronecker products: with `K = floor((p+2)/2)`,
    /// `G_2j = s3^j (x) s1 (x) 1`, `G_2j+1 = s3^j (x) s2 (x) 1`, and for odd
    /// `p` the extra `s3^K`. The first two square to `+1`; the rest are
    /// multiplied by `i` to square to `-1`.
    pub fn new(p: usize) -> Self {
        let n = p + 2;
        let k = n / 2;
        let [s1, s2, s3] = pauli();
        let id = Mat::identity(2);
        let word = |j: usize, mid: &Mat| -> Mat {
            let mut parts = vec![s3.clone(); j];
            parts.push(mid.clone());
            parts.extend(core::iter::repeat_n(id.clone(), k - j - 1));
            kron_all(&parts)
        };
        let mut euclid = Vec::new();
        for j in 0..k {
            euclid.push(word(j, &s1));
            euclid.push(word(j, &s2));
        }
        if n % 2 == 1 {
            euclid.push(kron_all(&vec![s3.clone(); k]));
        }
        let gamma: Vec<Mat> =
            euclid.into_iter().enumerate().map(|(a, g)| if a < 2 { g } else { g.scale(&Scalar::i()) }).collect();
        let hermitian_gram = gamma[0].mul(&gamma[1]).scale(&Scalar::i());
        CliffordAlgebraData { p, gamma, even_part_dim: 1 << (n - 1), hermitian_gram }
    }

    /// `+1` for the first two coordinates, `-1` after.
    pub fn metric(&self, a: usize) -> i64 {
        if a < 2 {
            1
        } else {
            -1
        }
    }

    /// Product of all generators (chirality operator up to a scalar).
    pub fn volume(&self) -> Mat {
        self.gamma.iter().skip(1).fold(self.gamma[0].clone(), |acc, g| acc.mul(g))
    }
}

/// The spin representation of `so(2,p)`, `p >= 3`, restricted to a half-spin
/// summand for even `p` (`chirality = +1` or `-1`), conjugated into the
/// standard model of the smallest classical algebra preserving the invariant
/// forms.
pub fn spin(p: usize, chirality: i8) -> Result<Homomorphism> {
    if p < 3 {
        return Err(Error::InvalidParameter("spin requires p >= 3".into()));
    }
    if chirality != 1 && chirality != -1 {
        return Err(Error::InvalidParameter("chirality must be +1 or -1".into()));
    }
    let cl = CliffordAlgebraData::new(p);
    let n = p + 2;
    let size = cl.gamma[0].rows();
    let half = Scalar::frac(1, 2);
    // pair[(a,b)] = (1/2) gamma_a gamma_b for a < b
    let mut pair: Vec<Vec<Mat>> = Vec::with_capacity(n);
    for a in 0..n {
        let row =
            (0..n).map(|b| if b > a { cl.gamma[a].mul(&cl.gamma[b]).scale(&half) } else { Mat::zeros(0, 0) }).collect();
        pair.push(row);
    }
    let raw = |x: &Mat| -> Mat {
        let mut out = Mat::zeros(size, size);
        for a in 0..n {
            for b in a + 1..n {
                let v = &x[(a, b)];
                if !v.is_zero() {
                    out.axpy(&v.scale_q(&Q::from_integer(cl.metric(b).into())), &pair[a][b]);
                }
            }
        }
        out
    };
    // Coordinates kept: the chirality eigenspace for even p, all otherwise.
    let chi = kron_all(&vec![pauli()[2].clone(); n / 2]);
    let keep: Vec<usize> =
        (0..size).filter(|&i| n % 2 == 1 || chi[(i, i)] == Scalar::from_i64(chirality as i64)).collect();
    let h = &cl.hermitian_gram;
    let mut order: Vec<usize> = keep.iter().copied().filter(|&i| h[(i, i)] == Scalar::one()).collect();
    let half_dim = order.len();
    order.extend(keep.iter().copied().filter(|&i| h[(i, i)] == Scalar::from_i64(-1)));
    if order.len() != 2 * half_dim {
        return Err(Error::Internal("spinor form is not split".into()));
    }
    let restrict = |m: &Mat| m.submatrix(&order, &order);
    let gens: Vec<Mat> = {
        let so = AlgebraDescriptor::so2(p);
        so.basis().elems.iter().map(|x| restrict(&raw(x))).collect()
    };
    // Invariant bilinear form, from products of the symmetric or the
    // antisymmetric generators.
    let product = |sel: &dyn Fn(&Mat) -> bool| -> Mat {
        cl.gamma.iter().filter(|g| sel(g)).fold(Mat::identity(size), |acc, g| acc.mul(g))
    };
    let candidates = [product(&|g: &Mat| g.transpose() == g.neg()), product(&|g: &Mat| g.transpose() == *g)];
    let mut form: Option<Mat> = None;
    for b in candidates {
        let b = restrict(&b);
        if b.is_zero() || b.rank() != b.rows() {
            continue;
        }
        let invariant = gens.iter().all(|g| g.transpose().mul(&b).add(&b.mul(g)).is_zero());
        let pairs = (0..half_dim)
            .all(|i| (0..half_dim).all(|j| b[(i, j)].is_zero() && b[(half_dim + i, half_dim + j)].is_zero()));
        if invariant && pairs {
            form = Some(b);
            break;
        }
    }
    let lo: Vec<usize> = (0..half_dim).collect();
    let hi: Vec<usize> = (half_dim..2 * half_dim).collect();
    let (target, conj) = match form {
        Some(b) => {
            let b12 = b.submatrix(&lo, &hi);
            let b12_inv = b12.inverse().ok_or_else(|| Error::Internal("singular spinor pairing".into()))?;
            let pm = Mat::block_diag(&[Mat::identity(half_dim), b12_inv]);
            let pm_inv = Mat::block_diag(&[Mat::identity(half_dim), b12]);
            let f = if b.transpose() == b { Factor::SoStar { n: half_dim } } else { Factor::Sp { n: half_dim } };
            (f, Some((pm, pm_inv)))
        }
        None => (Factor::Su { p: half_dim, q: half_dim }, None),
    };
    let chir = if n.is_multiple_of(2) {
        if chirality > 0 {
            ",+1"
        } else {
            ",-1"
        }
    } else {
        ""
    };
    let images: Vec<Mat> = gens
        .into_iter()
        .map(|g| match &conj {
            Some((pm, pm_inv)) => pm_inv.mul(&g).mul(pm),
            None => g,
        })
        .collect();
    Homomorphism::from_images(
        AlgebraDescriptor::so2(p),
        AlgebraDescriptor::simple(target)?,
        format!("spin({}{})", p, chir),
        images,
    )
}

/// `m -> -m^T`, the antiholomorphic involution of `su(1,1)`.
pub fn su11_twist(m: &Mat) -> Mat {
    m.transpose().neg()
}

/// Diagonal disc `su(1,1) -> A` through the polydisc of every factor, twisted
/// by the antiholomorphic involution on factors with sign `-1`.
pub fn disc(a: &AlgebraDescriptor, signs: &[i8]) -> Result<Homomorphism> {
    if signs.len() != a.factors().len() {
        return Err(Error::DimensionMismatch { expected: a.factors().len(), found: signs.len() });
    }
    if signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::InvalidParameter("disc signs must be +1 or -1".into()));
    }
    let label = format!("disc({},[{}])", a, signs.iter().map(|s| format!("{:+}", s)).collect::<Vec<_>>().join(","));
    let a2 = a.clone();
    let signs = signs.to_vec();
    Ok(Homomorphism::from_fn(AlgebraDescriptor::su(1, 1), a.clone(), label, move |m| {
        let mut out = Mat::zeros(a2.dim(), a2.dim());
        for (i, f) in a2.factors().iter().enumerate() {
            let mm = if signs[i] > 0 { m.clone() } else { su11_twist(m) };
            let mut local = Mat::zeros(f.dim(), f.dim());
            for j in 0..f.rank() {
                local = local.add(&f.disc_image(j, &mm));
            }
            out = out.add(&a2.embed(i, &local));
        }
        out
    }))
}

/// `su(1,1)^rk(A) -> A`, one disc per factor of each summand.
pub fn polydisc(a: &AlgebraDescriptor) -> Homomorphism {
    let mut map: Vec<(usize, usize)> = Vec::new();
    for (i, f) in a.factors().iter().enumerate() {
        for j in 0..f.rank() {
            map.push((i, j));
        }
    }
    let src = AlgebraDescriptor::su11_power(map.len().max(1));
    if map.is_empty() {
        let n = a.dim();
        return Homomorphism::from_fn(src, a.clone(), format!("polydisc({})", a), |_| Mat::zeros(n, n));
    }
    let a2 = a.clone();
    let basis = src.basis();
    let images = basis
        .elems
        .iter()
        .zip(&basis.factor_of)
        .map(|(x, &s)| {
            let (i, j) = map[s];
            let m = src.block(s, x);
            a2.embed(i, &a2.factors()[i].disc_image(j, &m))
        })
        .collect();
    Homomorphism::from_images(src, a.clone(), format!("polydisc({})", a), images).expect("polydisc images")
}

/// Index map of each of two simple targets of one family into the merged
/// simple target, and the merged factor.
fn merge_targets(t1: &Factor, t2: &Factor) -> Result<(Factor, Vec<usize>, Vec<usize>)> {
    let su_like = |p1: usize, q1: usize, p2: usize, q2: usize| {
        let m1 = (0..p1 + q1).map(|i| if i < p1 { i } else { p1 + p2 + (i - p1) }).collect();
        let m2 = (0..p2 + q2).map(|i| if i < p2 { p1 + i } else { p1 + p2 + q1 + (i - p2) }).collect();
        (m1, m2)
    };
    match (*t1, *t2) {
        (
            Factor::Su { p: p1, q: q1 } | Factor::U { p: p1, q: q1 },
            Factor::Su { p: p2, q: q2 } | Factor::U { p: p2, q: q2 },
        ) => {
            let (m1, m2) = su_like(p1, q1, p2, q2);
            let f = if matches!(t1, Factor::U { .. }) || matches!(t2, Factor::U { .. }) {
                Factor::U { p: p1 + p2, q: q1 + q2 }
            } else {
                Factor::Su { p: p1 + p2, q: q1 + q2 }
            };
            Ok((f, m1, m2))
        }
        (Factor::Sp { n: n1 }, Factor::Sp { n: n2 }) => {
            let (m1, m2) = su_like(n1, n1, n2, n2);
            Ok((Factor::Sp { n: n1 + n2 }, m1, m2))
        }
        (Factor::SoStar { n: n1 }, Factor::SoStar { n: n2 }) => {
            let (m1, m2) = su_like(n1, n1, n2, n2);
            Ok((Factor::SoStar { n: n1 + n2 }, m1, m2))
        }
        _ => Err(Error::IncompatibleFamilies(format!("{} and {}", t1, t2))),
    }
}

fn reindex(m: &Mat, map: &[usize], n: usize) -> Mat {
    let mut out = Mat::zeros(n, n);
    for (r, c, v) in m.entries() {
        out[(map[r], map[c])] = v.clone();
    }
    out
}

fn simple_target(rho: &Homomorphism) -> Result<Factor> {
    match rho.target.factors() {
        [f] => Ok(*f),
        _ => Err(Error::IncompatibleFamilies(format!("target {} is not simple", rho.target))),
    }
}

/// Block-diagonal sum into the merged target of the common family.
pub fn direct_sum(r1: &Homomorphism, r2: &Homomorphism, same_source: bool) -> Result<Homomorphism> {
    let (f, m1, m2) = merge_targets(&simple_target(r1)?, &simple_target(r2)?)?;
    let target = AlgebraDescriptor::simple(f)?;
    let n = target.dim();
    let label = format!("dsum({},{}{})", r1.label, r2.label, if same_source { "" } else { ",same_source=false" });
    if same_source {
        if r1.source != r2.source {
            return Err(Error::DescriptorMismatch(format!("{}", r1.source), format!("{}", r2.source)));
        }
        let images =
            r1.images.iter().zip(&r2.images).map(|(a, b)| reindex(a, &m1, n).add(&reindex(b, &m2, n))).collect();
        Homomorphism::from_images(r1.source.clone(), target, label, images)
    } else {
        let mut images: Vec<Mat> = r1.images.iter().map(|a| reindex(a, &m1, n)).collect();
        images.extend(r2.images.iter().map(|b| reindex(b, &m2, n)));
        Homomorphism::from_images(r1.source.direct_sum(&r2.source), target, label, images)
    }
}

/// `outer ∘ inner`.
pub fn compose(outer: &Homomorphism, inner: &Homomorphism) -> Result<Homomorphism> {
    if inner.target != outer.source {
        return Err(Error::DescriptorMismatch(format!("{}", inner.target), format!("{}", outer.source)));
    }
    let images = inner.images.iter().map(|m| outer.apply(m)).collect::<Result<Vec<_>>>()?;
    Homomorphism::from_images(
        inner.source.clone(),
        outer.target.clone(),
        format!("comp({},{})", outer.label, inner.label),
        images,
    )
}

/// Corner inclusion of a smaller simple algebra of the same family:
/// `su(p0,q0) -> su(p,q)`, `sp(2n0) -> sp(2n)`, `so*(2n0) -> so*(2n)`,
/// `so(2,n0) -> so(2,n)`.
pub fn block_inclusion(small: &Factor, big: &Factor) -> Result<Homomorphism> {
    let map: Vec<usize> = match (*small, *big) {
        (Factor::Su { p: p0, q: q0 }, Factor::Su { p, q }) | (Factor::U { p: p0, q: q0 }, Factor::U { p, q })
            if p0 <= p && q0 <= q =>
        {
            (0..p0 + q0).map(|i| if i < p0 { i } else { p + i - p0 }).collect()
        }
        (Factor::Sp { n: n0 }, Factor::Sp { n }) | (Factor::SoStar { n: n0 }, Factor::SoStar { n }) if n0 <= n => {
            (0..2 * n0).map(|i| if i < n0 { i } else { n + i - n0 }).collect()
        }
        (Factor::So2 { n: n0 }, Factor::So2 { n }) if n0 <= n => (0..n0 + 2).collect(),
        _ => return Err(Error::IncompatibleFamilies(format!("{} into {}", small, big))),
    };
    let n = big.dim();
    Ok(Homomorphism::from_fn(
        AlgebraDescriptor::simple(*small)?,
        AlgebraDescriptor::simple(*big)?,
        format!("incl({},{})", small, big),
        |x| reindex(x, &map, n),
    ))
}

/// Composes with the corner inclusion into `big`; identity when the target already is `big`.
pub fn pad(rho: &Homomorphism, big: &Factor) -> Result<Homomorphism> {
    let t = simple_target(rho)?;
    if t == *big {
        return Ok(rho.clone());
    }
    compose(&block_inclusion(&t, big)?, rho)
}

/// `gl(2,C) -> u(2,2)`, `X -> [[X^a, X^h], [X^h, X^a]]` with `X^a`, `X^h` the
/// anti-Hermitian and Hermitian parts.
pub fn gl2_example() -> Homomorphism {
    let src = AlgebraDescriptor::simple(Factor::Gl { n: 2 }).expect("gl(2)");
    let tgt = AlgebraDescriptor::simple(Factor::U { p: 2, q: 2 }).expect("u(2,2)");
    Homomorphism::from_fn(src, tgt, "gl2_example()", gl2_block)
}

/// Restriction of [`gl2_example`] to the compact form `u(2)`.
pub fn gl2_example_u2() -> Homomorphism {
    let src = AlgebraDescriptor::simple(Factor::U { p: 0, q: 2 }).expect("u(2)");
    let tgt = AlgebraDescriptor::simple(Factor::U { p: 2, q: 2 }).expect("u(2,2)");
    Homomorphism::from_fn(src, tgt, "gl2_example(u2)", gl2_block)
}

/// The `4x4` image of a `2x2` matrix under the example map.
pub fn gl2_block(x: &Mat) -> Mat {
    let half = Scalar::frac(1, 2);
    let xa = x.sub(&x.adjoint()).scale(&half);
    let xh = x.add(&x.adjoint()).scale(&half);
    let mut out = Mat::zeros(4, 4);
    out.set_block(0, 0, &xa);
    out.set_block(0, 2, &xh);
    out.set_block(2, 0, &xh);
    out.set_block(2, 2, &xa);
    out
}

/// Outer tensor product `(X, Y) -> ρ1(X) ⊗ 1 + 1 ⊗ ρ2(Y)` of two maps into
/// unitary algebras, with the product form reordered positive-first.
pub fn tensor(r1: &Homomorphism, r2: &Homomorphism) -> Result<Homomorphism> {
    let t1 = simple_target(r1)?;
    let t2 = simple_target(r2)?;
    let (p1, q1, p2, q2, unitary) = match (t1, t2) {
        (
            Factor::Su { p: a, q: b } | Factor::U { p: a, q: b },
            Factor::Su { p: c, q: d } | Factor::U { p: c, q: d },
        ) => (a, b, c, d, matches!(t1, Factor::U { .. }) || matches!(t2, Factor::U { .. })),
        _ => return Err(Error::IncompatibleFamilies("tensor needs su or u targets".into())),
    };
    let (n1, n2) = (p1 + q1, p2 + q2);
    let sign = |i: usize, p: usize| i < p;
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            if sign(i, p1) == sign(j, p2) {
                plus.push(i * n2 + j);
            } else {
                minus.push(i * n2 + j);
            }
        }
    }
    let (first, second) = if plus.len() <= minus.len() { (plus, minus) } else { (minus, plus) };
    let (p, qq) = (first.len(), second.len());
    let order: Vec<usize> = first.into_iter().chain(second).collect();
    let f = if unitary { Factor::U { p, q: qq } } else { Factor::Su { p, q: qq } };
    let id1 = Mat::identity(n1);
    let id2 = Mat::identity(n2);
    let mut images: Vec<Mat> = r1.images.iter().map(|a| a.kron(&id2).submatrix(&order, &order)).collect();
    images.extend(r2.images.iter().map(|b| id1.kron(b).submatrix(&order, &order)));
    Homomorphism::from_images(
        r1.source.direct_sum(&r2.source),
        AlgebraDescriptor::simple(f)?,
        format!("tensor({},{})", r1.label, r2.label),
        images,
    )
}
