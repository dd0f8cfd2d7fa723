//! Points, index sets, sign vectors and the coordinate classification shared
//! by the rest of the crate.
//!
//! Coordinate indices are 1-based in every public interface: an [`IndexSet`]
//! over dimension `n` holds members of `{1, ..., n}`.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HnError, Result};

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Absolute tolerance used when deciding whether a coordinate equals `±i`.
pub const DEFAULT_CLASSIFY_EPS: f64 = 1e-12;

/// A point of the poly-upper half-plane: every coordinate has `Im > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct UpperPoint(Vec<Complex64>);

impl UpperPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(HnError::domain("a point needs at least one coordinate"));
        }
        if let Some((l, z)) = coords
            .iter()
            .enumerate()
            .find(|(_, z)| !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(HnError::domain(format!(
                "coordinate {} = {} is not in the upper half-plane",
                l + 1,
                z
            )));
        }
        Ok(UpperPoint(coords))
    }

    /// The point `(i, ..., i)`.
    pub fn i_vector(n: usize) -> Self {
        UpperPoint(vec![I; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn to_off_real(&self) -> OffRealPoint {
        OffRealPoint(self.0.clone())
    }
}

impl TryFrom<Vec<Complex64>> for UpperPoint {
    type Error = HnError;
    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        UpperPoint::new(v)
    }
}

impl From<UpperPoint> for Vec<Complex64> {
    fn from(p: UpperPoint) -> Self {
        p.0
    }
}

impl From<UpperPoint> for OffRealPoint {
    fn from(p: UpperPoint) -> Self {
        OffRealPoint(p.0)
    }
}

/// A point of `(C \ R)^n`: every coordinate has nonzero imaginary part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct OffRealPoint(Vec<Complex64>);

impl OffRealPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(HnError::domain("a point needs at least one coordinate"));
        }
        if let Some((l, z)) = coords
            .iter()
            .enumerate()
            .find(|(_, z)| z.im == 0.0 || !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(HnError::domain(format!(
                "coordinate {} = {} lies on the real axis",
                l + 1,
                z
            )));
        }
        Ok(OffRealPoint(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn conj(&self) -> OffRealPoint {
        OffRealPoint(self.0.iter().map(|z| z.conj()).collect())
    }

    pub fn is_upper(&self) -> bool {
        self.0.iter().all(|z| z.im > 0.0)
    }

    pub fn to_upper(&self) -> Option<UpperPoint> {
        self.is_upper().then(|| UpperPoint(self.0.clone()))
    }

    /// Half-plane membership of each coordinate (`true` for the upper half-plane).
    pub fn component(&self) -> Vec<bool> {
        self.0.iter().map(|z| z.im > 0.0).collect()
    }
}

impl TryFrom<Vec<Complex64>> for OffRealPoint {
    type Error = HnError;
    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        OffRealPoint::new(v)
    }
}

impl From<OffRealPoint> for Vec<Complex64> {
    fn from(p: OffRealPoint) -> Self {
        p.0
    }
}

/// A subset `B` of `{1, ..., n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexSet {
    n: usize,
    members: BTreeSet<usize>,
}

impl IndexSet {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&m| m == 0 || m > n) {
            return Err(HnError::domain(format!(
                "index {bad} is outside {{1, ..., {n}}}"
            )));
        }
        Ok(IndexSet { n, members })
    }

    pub fn empty(n: usize) -> Self {
        IndexSet {
            n,
            members: BTreeSet::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        IndexSet {
            n,
            members: (1..=n).collect(),
        }
    }

    /// `B_l = {1, ..., n} \ {l}`.
    pub fn all_but(n: usize, l: usize) -> Result<Self> {
        IndexSet::new(n, (1..=n).filter(|&m| m != l)).and_then(|s| {
            if l == 0 || l > n {
                Err(HnError::domain(format!("index {l} is outside 1..={n}")))
            } else {
                Ok(s)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, l: usize) -> bool {
        self.members.contains(&l)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn complement(&self) -> IndexSet {
        IndexSet {
            n: self.n,
            members: (1..=self.n).filter(|m| !self.members.contains(m)).collect(),
        }
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        IndexSet {
            n: self.n.max(other.n),
            members: self.members.union(&other.members).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.members.is_disjoint(&other.members)
    }

    /// Every subset of `self`, enumerated by bitmask over the sorted members.
    pub fn subsets(&self) -> impl Iterator<Item = IndexSet> + '_ {
        let elems: Vec<usize> = self.members.iter().copied().collect();
        let n = self.n;
        (0u64..(1u64 << elems.len())).map(move |mask| IndexSet {
            n,
            members: elems
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << b) != 0)
                .map(|(_, &m)| m)
                .collect(),
        })
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, m) in self.members.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

/// `rho in {-1, 0, 1}^n`, indexing one product of `N` factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct RhoVector(Vec<i8>);

impl RhoVector {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|e| !(-1..=1).contains(*e)) {
            return Err(HnError::domain(format!(
                "rho entries must be -1, 0 or 1, got {bad}"
            )));
        }
        Ok(RhoVector(entries))
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn has_plus(&self) -> bool {
        self.0.contains(&1)
    }

    pub fn has_minus(&self) -> bool {
        self.0.contains(&-1)
    }

    /// Both `+1` and `-1` occur.
    pub fn is_admissible(&self) -> bool {
        self.has_plus() && self.has_minus()
    }
}

impl TryFrom<Vec<i8>> for RhoVector {
    type Error = HnError;
    fn try_from(v: Vec<i8>) -> Result<Self> {
        RhoVector::new(v)
    }
}

impl From<RhoVector> for Vec<i8> {
    fn from(r: RhoVector) -> Self {
        r.0
    }
}

/// All admissible `rho` vectors of length `n`, in lexicographic order.
///
/// Their number is `3^n - 2 * 2^n + 1`; the list is empty for `n = 1`.
pub fn enumerate_admissible_rho(n: usize) -> Vec<RhoVector> {
    let total = 3usize.pow(n as u32);
    let mut out = Vec::new();
    for code in 0..total {
        // most significant digit first gives lexicographic order over -1 < 0 < 1
        let mut entries = vec![0i8; n];
        let mut c = code;
        for slot in (0..n).rev() {
            entries[slot] = (c % 3) as i8 - 1;
            c /= 3;
        }
        let rho = RhoVector(entries);
        if rho.is_admissible() {
            out.push(rho);
        }
    }
    out
}

/// The partition `(C+, I+, I-, C-)` of the coordinates of an off-real point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryClassification {
    pub c_plus: IndexSet,
    pub i_plus: IndexSet,
    pub i_minus: IndexSet,
    pub c_minus: IndexSet,
    /// Tolerance used for the `z_l = ±i` tests.
    pub eps: f64,
}

impl SymmetryClassification {
    pub fn dim(&self) -> usize {
        self.c_plus.dim()
    }

    /// `C- ∪ C+`, the coordinates that take part in the reflection sum.
    pub fn generic(&self) -> IndexSet {
        self.c_minus.union(&self.c_plus)
    }
}

pub fn classify(z: &OffRealPoint) -> SymmetryClassification {
    classify_with(z, DEFAULT_CLASSIFY_EPS)
}

pub fn classify_with(z: &OffRealPoint, eps: f64) -> SymmetryClassification {
    let n = z.dim();
    let (mut cp, mut ip, mut im, mut cm) = (vec![], vec![], vec![], vec![]);
    for (k, w) in z.coords().iter().enumerate() {
        let l = k + 1;
        if (w - I).norm() <= eps {
            ip.push(l);
        } else if (w + I).norm() <= eps {
            im.push(l);
        } else if w.im > 0.0 {
            cp.push(l);
        } else {
            cm.push(l);
        }
    }
    let set = |m: Vec<usize>| IndexSet {
        n,
        members: m.into_iter().collect(),
    };
    SymmetryClassification {
        c_plus: set(cp),
        i_plus: set(ip),
        i_minus: set(im),
        c_minus: set(cm),
        eps,
    }
}

/// Place `value` at 1-based `slot` and `i` everywhere else.
pub fn slot_fill(n: usize, slot: usize, value: Complex64) -> Vec<Complex64> {
    let mut v = vec![I; n];
    v[slot - 1] = value;
    v
}

/// Positional scatter: coordinates listed in `set` take the values of `inner`
/// in increasing index order, all others take `fill`.
pub fn scatter(set: &IndexSet, inner: &[Complex64], fill: Complex64) -> Result<Vec<Complex64>> {
    if inner.len() != set.len() {
        return Err(HnError::DimensionMismatch {
            expected: set.len(),
            got: inner.len(),
        });
    }
    let mut v = vec![fill; set.dim()];
    for (m, w) in set.iter().zip(inner) {
        v[m - 1] = *w;
    }
    Ok(v)
}

/// Where a non-tangential limit is taken.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    Finite(f64),
    Infinity,
}

/// A ray into the upper half-plane along which a non-tangential limit is sampled.
///
/// Sample points are `anchor + scale * e^{i angle}` (finite anchor) or
/// `scale * e^{i angle}` (infinite anchor). With `angle` in `(0, pi/2]` every
/// sample lies in the Stoltz sector of aperture `angle`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonTangentialPath {
    pub anchor: Anchor,
    pub angle: f64,
    pub ladder: Vec<f64>,
}

impl NonTangentialPath {
    pub fn new(anchor: Anchor, angle: f64, ladder: Vec<f64>) -> Result<Self> {
        if !(angle > 0.0 && angle <= std::f64::consts::FRAC_PI_2) {
            return Err(HnError::domain(format!(
                "path angle {angle} is not in (0, pi/2]"
            )));
        }
        if ladder.len() < 2 {
            return Err(HnError::domain("a ladder needs at least two scales"));
        }
        if ladder.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
            return Err(HnError::domain("ladder scales must be positive and finite"));
        }
        let increasing = ladder.windows(2).all(|w| w[1] > w[0]);
        let decreasing = ladder.windows(2).all(|w| w[1] < w[0]);
        match anchor {
            Anchor::Infinity if !increasing => {
                return Err(HnError::domain("a ladder towards infinity must increase"))
            }
            Anchor::Finite(_) if !decreasing => {
                return Err(HnError::domain(
                    "a ladder towards a finite anchor must decrease",
                ))
            }
            _ => {}
        }
        if let Anchor::Finite(t) = anchor {
            if !t.is_finite() {
                return Err(HnError::domain("finite anchor must be a finite real"));
            }
        }
        Ok(NonTangentialPath {
            anchor,
            angle,
            ladder,
        })
    }

    /// Vertical ray to infinity with scales `2^3, ..., 2^12`.
    pub fn to_infinity() -> Self {
        NonTangentialPath {
            anchor: Anchor::Infinity,
            angle: std::f64::consts::FRAC_PI_2,
            ladder: (3..=12).map(|k| 2f64.powi(k)).collect(),
        }
    }

    /// Vertical ray down to `t0` with scales `2^-3, ..., 2^-12`.
    pub fn to_point(t0: f64) -> Self {
        NonTangentialPath {
            anchor: Anchor::Finite(t0),
            angle: std::f64::consts::FRAC_PI_2,
            ladder: (3..=12).map(|k| 2f64.powi(-k)).collect(),
        }
    }

    pub fn points(&self) -> Vec<Complex64> {
        let dir = Complex64::from_polar(1.0, self.angle);
        self.ladder
            .iter()
            .map(|&s| match self.anchor {
                Anchor::Infinity => dir * s,
                Anchor::Finite(t0) => Complex64::new(t0, 0.0) + dir * s,
            })
            .collect()
    }

    /// Whether `z` is inside the Stoltz sector of aperture `angle`.
    pub fn in_stoltz_domain(&self, z: Complex64) -> bool {
        let w = match self.anchor {
            Anchor::Infinity => z,
            Anchor::Finite(t0) => z - t0,
        };
        let arg = w.arg();
        let slack = 1e-12;
        arg >= self.angle - slack && arg <= std::f64::consts::PI - self.angle + slack
    }
}

/// Uniform random coordinate with `Re` in `re` and `|Im|` in `im`, on the
/// requested side of the real axis.
pub fn random_coordinate<R: Rng + ?Sized>(
    rng: &mut R,
    upper: bool,
    re: (f64, f64),
    im: (f64, f64),
) -> Complex64 {
    let x = rng.gen_range(re.0..re.1);
    let y = rng.gen_range(im.0..im.1);
    Complex64::new(x, if upper { y } else { -y })
}

pub fn random_upper_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> UpperPoint {
    UpperPoint(
        (0..n)
            .map(|_| random_coordinate(rng, true, (-3.0, 3.0), (0.5, 4.0)))
            .collect(),
    )
}

/// Random point in the connected component of `(C \ R)^n` given by `signs`.
pub fn random_point_in_component<R: Rng + ?Sized>(rng: &mut R, signs: &[bool]) -> OffRealPoint {
    OffRealPoint(
        signs
            .iter()
            .map(|&up| random_coordinate(rng, up, (-3.0, 3.0), (0.5, 4.0)))
            .collect(),
    )
}

/// All `2^n` sign patterns, the all-upper pattern first.
pub fn components(n: usize) -> Vec<Vec<bool>> {
    (0u32..(1 << n))
        .map(|mask| (0..n).map(|b| mask & (1 << b) == 0).collect())
        .collect()
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let inv = 1.0 / base as f64;
    while i > 0 {
        f *= inv;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

const PRIMES: [u64; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Halton points in `{Re in [-3, 3], Im in [0.5, 4]}^n`, starting at offset `seed + 1`.
pub fn quasi_random_upper_points(n: usize, count: usize, seed: u64) -> Vec<UpperPoint> {
    assert!(
        2 * n <= PRIMES.len(),
        "quasi-random sampling supports n <= 10"
    );
    (0..count as u64)
        .map(|k| {
            let idx = k + seed + 1;
            UpperPoint(
                (0..n)
                    .map(|l| {
                        let u = radical_inverse(idx, PRIMES[2 * l]);
                        let v = radical_inverse(idx, PRIMES[2 * l + 1]);
                        Complex64::new(-3.0 + 6.0 * u, 0.5 + 3.5 * v)
                    })
                    .collect(),
            )
        })
        .collect()
}
