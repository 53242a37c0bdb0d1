//! Digital nets over GF(b): point generation, stacked row systems, strict
//! t-values, dual-net membership, and standard constructions with a JSON
//! file format.
//!
//! A digital net is the point set `{x_h : 0 <= h < b^m}` in `[0,1)^s` whose
//! j-th coordinate digits are `C_j * (digits of h)` over GF(b). The first
//! `n` rows of each `n x m` generating matrix produce the first `n` base-b
//! digits of the coordinate; rows beyond `n` are treated as zero rows, which
//! matches the digits of the points being zero beyond the stored precision.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{self, FieldMatrix, FieldSpec, GfError};

/// Point-generation guard: at most this many points are enumerated.
pub const MAX_POINT_ENUMERATION: u64 = 1 << 24;

/// Counting-oracle guard on the number of points.
pub const MAX_BRUTEFORCE_POINTS: u64 = 1 << 16;

/// Counting-oracle guard on the dimension.
pub const MAX_BRUTEFORCE_DIMENSION: usize = 8;

/// A candidate dual-net element: one nonnegative integer per coordinate.
pub type IndexVector = Vec<u64>;

#[derive(Debug, Error)]
pub enum NetError {
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error("need n >= m >= 1 and s >= 1, got s={s}, m={m}, n={n}")]
    BadShape { s: usize, m: usize, n: usize },
    #[error("generating matrix {index} is {rows}x{cols}, expected {n}x{m}")]
    MatrixShape {
        index: usize,
        rows: usize,
        cols: usize,
        n: usize,
        m: usize,
    },
    #[error("matrix entry {entry} is not an element index of GF({b})")]
    EntryOutOfRange { entry: u32, b: u32 },
    #[error("coordinate subset must be nonempty")]
    EmptySubset,
    #[error("coordinate subset must be strictly increasing within 1..={s}")]
    BadSubset { s: usize },
    #[error("subset has {subset} coordinates but {values} values were supplied")]
    QueryLengthMismatch { subset: usize, values: usize },
    #[error("b^m = {count} points exceed the enumeration guard")]
    TooManyPoints { count: u64 },
    #[error("point set too large for the counting oracle (b^m = {count}, s = {s})")]
    BruteforceGuard { count: u64, s: usize },
    #[error("index component {value} has more than n = {n} base-b digits")]
    IndexTooLarge { value: u64, n: usize },
    #[error("digit strings have different lengths ({left} vs {right})")]
    DigitLengthMismatch { left: usize, right: usize },
    #[error("digit bijection must be a permutation of 0..b fixing 0")]
    InvalidBijection,
    #[error("need at least {needed} digits of precision, have {have}")]
    InsufficientPrecision { needed: usize, have: usize },
    #[error("the construction needs b >= s, got b = {b}, s = {s}")]
    FaureBase { b: u32, s: usize },
    #[error("expected {expected} points, got {got}")]
    PointCountMismatch { expected: u64, got: usize },
    #[error("points have mixed dimensions or precisions")]
    MixedPoints,
    #[error("net file: {0}")]
    FileField(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("direction-number file: {0}")]
    SobolParse(String),
    #[error("direction-number file has no row for dimension {dim}")]
    SobolDimension { dim: usize },
}

/// Base-b digit expansions of a point of `[0,1)^s`: digit `i` of coordinate
/// `j` is the coefficient of `b^-(i+1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointDigits {
    s: usize,
    depth: usize,
    digits: Vec<u8>, // coordinate-major
}

impl std::fmt::Debug for PointDigits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let coords: Vec<&[u8]> = (0..self.s).map(|j| self.coord(j)).collect();
        write!(f, "PointDigits{coords:?}")
    }
}

impl PointDigits {
    pub fn new(s: usize, depth: usize, digits: Vec<u8>) -> Result<Self, NetError> {
        if digits.len() != s * depth {
            return Err(NetError::MixedPoints);
        }
        Ok(PointDigits { s, depth, digits })
    }

    pub fn from_coords(coords: &[Vec<u8>]) -> Result<Self, NetError> {
        let depth = coords.first().map_or(0, |c| c.len());
        if coords.iter().any(|c| c.len() != depth) {
            return Err(NetError::MixedPoints);
        }
        Ok(PointDigits {
            s: coords.len(),
            depth,
            digits: coords.iter().flatten().copied().collect(),
        })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Digit `i0` (0-based) of coordinate `j0` (0-based).
    #[inline]
    pub fn digit(&self, j0: usize, i0: usize) -> u8 {
        self.digits[j0 * self.depth + i0]
    }

    pub fn coord(&self, j0: usize) -> &[u8] {
        &self.digits[j0 * self.depth..(j0 + 1) * self.depth]
    }

    /// Extends every coordinate with zero digits; the represented point is
    /// unchanged because the stored expansions terminate.
    pub fn pad_to(&self, depth: usize) -> PointDigits {
        assert!(depth >= self.depth);
        let mut digits = Vec::with_capacity(self.s * depth);
        for j in 0..self.s {
            digits.extend_from_slice(self.coord(j));
            digits.resize((j + 1) * depth, 0);
        }
        PointDigits {
            s: self.s,
            depth,
            digits,
        }
    }

    /// Coordinate value as a float, for display purposes.
    pub fn value(&self, b: u32, j0: usize) -> f64 {
        let mut acc = 0.0;
        let mut scale = 1.0 / b as f64;
        for i in 0..self.depth {
            acc += self.digit(j0, i) as f64 * scale;
            scale /= b as f64;
        }
        acc
    }
}

/// Digit-wise subtraction of equally long digit strings in GF(b).
pub fn digitwise_sub(spec: &FieldSpec, x: &[u8], y: &[u8]) -> Result<Vec<u8>, NetError> {
    if x.len() != y.len() {
        return Err(NetError::DigitLengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.iter().zip(y).map(|(&a, &c)| spec.sub(a, c)).collect())
}

/// A digital net in base b: `s` generating matrices of shape `n x m`.
#[derive(Clone, Debug)]
pub struct DigitalNet {
    spec: FieldSpec,
    s: usize,
    m: usize,
    n: usize,
    matrices: Vec<FieldMatrix>,
}

impl DigitalNet {
    pub fn new(
        spec: FieldSpec,
        m: usize,
        n: usize,
        matrices: Vec<FieldMatrix>,
    ) -> Result<Self, NetError> {
        let s = matrices.len();
        if s == 0 || m == 0 || n < m {
            return Err(NetError::BadShape { s, m, n });
        }
        for (idx, mat) in matrices.iter().enumerate() {
            if mat.rows() != n || mat.cols() != m {
                return Err(NetError::MatrixShape {
                    index: idx + 1,
                    rows: mat.rows(),
                    cols: mat.cols(),
                    n,
                    m,
                });
            }
            let max = mat.max_entry();
            if (max as u32) >= spec.b() {
                return Err(NetError::EntryOutOfRange {
                    entry: max as u32,
                    b: spec.b(),
                });
            }
        }
        Ok(DigitalNet {
            spec,
            s,
            m,
            n,
            matrices,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn b(&self) -> u32 {
        self.spec.b()
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self, j0: usize) -> &FieldMatrix {
        &self.matrices[j0]
    }

    pub fn point_count(&self) -> u64 {
        (self.b() as u64).pow(self.m as u32)
    }

    fn check_subset(&self, u: &[usize]) -> Result<(), NetError> {
        if u.is_empty() {
            return Err(NetError::EmptySubset);
        }
        let increasing = u.windows(2).all(|w| w[0] < w[1]);
        if !increasing || u[0] < 1 || *u.last().unwrap() > self.s {
            return Err(NetError::BadSubset { s: self.s });
        }
        Ok(())
    }

    /// All `b^m` net points in index order `h = 0, 1, ...`, each with `n`
    /// digits per coordinate.
    pub fn generate_points(&self) -> Result<Vec<PointDigits>, NetError> {
        let identity: Vec<u8> = (0..self.b() as u8).collect();
        self.generate_points_with_phi(&identity)
    }

    /// Point generation under an explicit digit bijection `phi` (a
    /// permutation of `0..b` with `phi[0] = 0`). Gain coefficients do not
    /// depend on this choice; the hook exists so that invariance can be
    /// tested. The default bijection is the identity.
    pub fn generate_points_with_phi(&self, phi: &[u8]) -> Result<Vec<PointDigits>, NetError> {
        let b = self.b();
        if phi.len() != b as usize || phi[0] != 0 {
            return Err(NetError::InvalidBijection);
        }
        let mut phi_inv = vec![u8::MAX; b as usize];
        for (i, &img) in phi.iter().enumerate() {
            if (img as u32) >= b || phi_inv[img as usize] != u8::MAX {
                return Err(NetError::InvalidBijection);
            }
            phi_inv[img as usize] = i as u8;
        }

        let count = (b as u64)
            .checked_pow(self.m as u32)
            .filter(|&c| c <= MAX_POINT_ENUMERATION)
            .ok_or(NetError::TooManyPoints {
                count: u64::MAX,
            })?;
        if count > MAX_POINT_ENUMERATION {
            return Err(NetError::TooManyPoints { count });
        }

        let mut points = Vec::with_capacity(count as usize);
        let mut index_digits = vec![0u8; self.m];
        for h in 0..count {
            let mut x = h;
            for d in index_digits.iter_mut() {
                *d = phi[(x % b as u64) as usize];
                x /= b as u64;
            }
            let mut digits = Vec::with_capacity(self.s * self.n);
            for mat in &self.matrices {
                for i in 0..self.n {
                    let mut acc = 0u8;
                    for (c, &eta) in index_digits.iter().enumerate() {
                        if eta != 0 {
                            acc = self.spec.add(acc, self.spec.mul(mat.get(i, c), eta));
                        }
                    }
                    digits.push(phi_inv[acc as usize]);
                }
            }
            points.push(PointDigits {
                s: self.s,
                depth: self.n,
                digits,
            });
        }
        Ok(points)
    }

    /// The stacked matrix made of the first `k_j` rows of each `C_j` for
    /// `j` in `u`. Row indices past `n` contribute zero rows.
    pub fn stack_c_uk(&self, u: &[usize], k: &[u32]) -> Result<FieldMatrix, NetError> {
        self.check_subset(u)?;
        if k.len() != u.len() {
            return Err(NetError::QueryLengthMismatch {
                subset: u.len(),
                values: k.len(),
            });
        }
        let total: usize = k.iter().map(|&x| x as usize).sum();
        let mut entries = Vec::with_capacity(total * self.m);
        for (&j, &kj) in u.iter().zip(k) {
            let mat = &self.matrices[j - 1];
            for i in 0..kj as usize {
                if i < self.n {
                    entries.extend_from_slice(mat.row(i));
                } else {
                    entries.extend(std::iter::repeat(0u8).take(self.m));
                }
            }
        }
        Ok(FieldMatrix::new(total, self.m, entries)?)
    }

    /// Strict t-value from the rank criterion: `m + 1` minus the smallest
    /// total row count at which some stacked system loses full row rank.
    pub fn strict_t_value(&self) -> usize {
        assert!(self.s <= 24, "subset search is limited to 24 coordinates");
        // Components above n only add zero rows, and a rank defect is
        // guaranteed once a stack has m + 1 rows, so both caps are exact.
        let cap = (self.n + 1).min(self.m + 1);
        for total in 1..=self.m + 1 {
            for mask in 1u32..(1 << self.s) {
                let u: Vec<usize> = (0..self.s)
                    .filter(|j| mask >> j & 1 == 1)
                    .map(|j| j + 1)
                    .collect();
                if u.len() > total {
                    continue;
                }
                let mut found = false;
                let mut parts = vec![0u32; u.len()];
                compositions(total, cap, 0, &mut parts, &mut |k| {
                    let stack = self
                        .stack_c_uk(&u, k)
                        .expect("internal subset is valid");
                    if gf::rank(&self.spec, &stack) < total {
                        found = true;
                        false
                    } else {
                        true
                    }
                });
                if found {
                    return self.m + 1 - total;
                }
            }
        }
        unreachable!("a stack of m + 1 rows can never have full row rank")
    }

    /// Strict t-value straight from the counting definition, by checking
    /// every elementary-interval shape against the generated points.
    pub fn strict_t_value_bruteforce(&self) -> Result<usize, NetError> {
        let count = self.point_count();
        if count > MAX_BRUTEFORCE_POINTS || self.s > MAX_BRUTEFORCE_DIMENSION {
            return Err(NetError::BruteforceGuard {
                count,
                s: self.s,
            });
        }
        let points = self.generate_points()?;
        tvalue_bruteforce_points(&points, self.b(), self.m)
    }

    /// Dual-net membership: true iff `sum_j C_j^T nu_n(l_j) = 0`, where
    /// `nu_n` collects the first `n` base-b digits.
    pub fn dual_contains(&self, l: &[u64]) -> Result<bool, NetError> {
        if l.len() != self.s {
            return Err(NetError::QueryLengthMismatch {
                subset: self.s,
                values: l.len(),
            });
        }
        let b = self.b() as u64;
        let mut acc = vec![0u8; self.m];
        for (j0, &lj) in l.iter().enumerate() {
            let mut v = lj;
            let mut i = 0;
            while v > 0 {
                if i >= self.n {
                    return Err(NetError::IndexTooLarge {
                        value: lj,
                        n: self.n,
                    });
                }
                let kappa = (v % b) as u8;
                if kappa != 0 {
                    let row = self.matrices[j0].row(i);
                    for (c, &entry) in row.iter().enumerate() {
                        acc[c] = self.spec.add(acc[c], self.spec.mul(kappa, entry));
                    }
                }
                v /= b;
                i += 1;
            }
        }
        Ok(acc.iter().all(|&x| x == 0))
    }
}

/// Weak/strict composition visitor: fills `parts` with values summing to
/// `total`, each within `[lo, cap]`. The callback returns false to stop.
/// Used with `lo = 1` for stacked-rank searches and `lo = 0` for shapes.
fn compositions(
    total: usize,
    cap: usize,
    lo: usize,
    parts: &mut Vec<u32>,
    f: &mut impl FnMut(&[u32]) -> bool,
) -> bool {
    fn rec(
        pos: usize,
        remaining: usize,
        cap: usize,
        lo: usize,
        parts: &mut Vec<u32>,
        f: &mut impl FnMut(&[u32]) -> bool,
    ) -> bool {
        let left = parts.len() - pos;
        if left == 0 {
            return remaining != 0 || f(parts);
        }
        let hi = cap.min(remaining.saturating_sub(lo * (left - 1)));
        if hi < lo {
            return true;
        }
        for v in lo..=hi {
            parts[pos] = v as u32;
            if !rec(pos + 1, remaining - v, cap, lo, parts, f) {
                return false;
            }
        }
        true
    }
    rec(0, total, cap, lo, parts, f)
}

/// Smallest `t` such that every elementary interval of volume `b^(t-m)`
/// holds exactly `b^t` of the given points. Works on any point multiset
/// whose digit precision covers `m` digits.
pub fn tvalue_bruteforce_points(
    points: &[PointDigits],
    b: u32,
    m: usize,
) -> Result<usize, NetError> {
    let Some(first) = points.first() else {
        return Err(NetError::MixedPoints);
    };
    let s = first.s();
    let depth = first.depth();
    if points.iter().any(|p| p.s() != s || p.depth() != depth) {
        return Err(NetError::MixedPoints);
    }
    let expected = (b as u64).checked_pow(m as u32).unwrap_or(u64::MAX);
    if expected > MAX_BRUTEFORCE_POINTS || s > MAX_BRUTEFORCE_DIMENSION {
        return Err(NetError::BruteforceGuard {
            count: expected,
            s,
        });
    }
    if points.len() as u64 != expected {
        return Err(NetError::PointCountMismatch {
            expected,
            got: points.len(),
        });
    }
    if depth < m {
        return Err(NetError::InsufficientPrecision {
            needed: m,
            have: depth,
        });
    }

    for t in 0..=m {
        let level = m - t;
        let per_cell = (b as u64).pow(t as u32);
        let mut all_pass = true;
        let mut shape = vec![0u32; s];
        compositions(level, level, 0, &mut shape, &mut |c| {
            if !shape_holds(points, b, c, per_cell) {
                all_pass = false;
                false
            } else {
                true
            }
        });
        if all_pass {
            return Ok(t);
        }
    }
    unreachable!("t = m always holds: the single cell contains all points")
}

fn shape_holds(points: &[PointDigits], b: u32, shape: &[u32], per_cell: u64) -> bool {
    let level: u32 = shape.iter().sum();
    let cells = (b as u64).pow(level) as usize;
    let mut counts = vec![0u64; cells];
    for p in points {
        let mut idx = 0u64;
        for (j, &cj) in shape.iter().enumerate() {
            for i in 0..cj as usize {
                idx = idx * b as u64 + p.digit(j, i) as u64;
            }
        }
        counts[idx as usize] += 1;
    }
    counts.iter().all(|&c| c == per_cell)
}

/// All matrices equal to the m x m identity padded with zero rows to n.
pub fn identity_net(spec: FieldSpec, s: usize, m: usize, n: usize) -> Result<DigitalNet, NetError> {
    let mut mat = FieldMatrix::zero(n, m);
    for i in 0..m.min(n) {
        mat.set(i, i, 1);
    }
    DigitalNet::new(spec, m, n, vec![mat; s])
}

/// Generalized Faure net: `C_j[i][c] = binom(c, i) * beta_j^(c-i)` with
/// distinct field elements `beta_j` (the element of index j - 1). Demands
/// b >= s and yields a (0, m, s)-net; for prime b and beta powers this is
/// the classical Faure construction.
pub fn faure_net(spec: FieldSpec, s: usize, m: usize, n: usize) -> Result<DigitalNet, NetError> {
    if (spec.b() as usize) < s {
        return Err(NetError::FaureBase { b: spec.b(), s });
    }
    let p = spec.p();
    // Pascal's triangle mod p embeds into GF(b) as constant polynomials.
    let mut binom = vec![vec![0u8; m]; m];
    for c in 0..m {
        binom[c][0] = 1;
        for i in 1..=c {
            let above = if i <= c - 1 { binom[c - 1][i] as u32 } else { 0 };
            binom[c][i] = ((binom[c - 1][i - 1] as u32 + above) % p) as u8;
        }
    }
    let mut matrices = Vec::with_capacity(s);
    for j in 1..=s {
        let beta = (j - 1) as u8;
        let mut mat = FieldMatrix::zero(n, m);
        for i in 0..m.min(n) {
            for c in i..m {
                let coeff = binom[c][i];
                let entry = spec.mul(coeff, spec.pow(beta, (c - i) as u64));
                mat.set(i, c, entry);
            }
        }
        matrices.push(mat);
    }
    DigitalNet::new(spec, m, n, matrices)
}

/// Net with i.i.d. uniform matrix entries from a seeded generator; the same
/// seed reproduces the same matrices.
pub fn random_net(
    spec: FieldSpec,
    s: usize,
    m: usize,
    n: usize,
    seed: u64,
) -> Result<DigitalNet, NetError> {
    let b = spec.b() as u8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrices = (0..s)
        .map(|_| {
            let entries = (0..n * m).map(|_| rng.gen_range(0..b)).collect();
            FieldMatrix::new(n, m, entries).expect("sized above")
        })
        .collect();
    DigitalNet::new(spec, m, n, matrices)
}

#[derive(Serialize, Deserialize)]
struct NetFile {
    b: u32,
    p: u32,
    r: u32,
    poly: Vec<u8>,
    s: usize,
    m: usize,
    n: usize,
    matrices: Vec<Vec<Vec<u32>>>,
}

impl DigitalNet {
    pub fn to_json(&self) -> String {
        let matrices = self
            .matrices
            .iter()
            .map(|mat| {
                (0..mat.rows())
                    .map(|r| mat.row(r).iter().map(|&e| e as u32).collect())
                    .collect()
            })
            .collect();
        let file = NetFile {
            b: self.b(),
            p: self.spec.p(),
            r: self.spec.r(),
            poly: self.spec.poly().to_vec(),
            s: self.s,
            m: self.m,
            n: self.n,
            matrices,
        };
        serde_json::to_string_pretty(&file).expect("net file serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, NetError> {
        let file: NetFile = serde_json::from_str(text)?;
        let spec = FieldSpec::with_poly(file.p, file.r, &file.poly)?;
        if spec.b() != file.b {
            return Err(NetError::FileField(format!(
                "b = {} does not equal p^r = {}",
                file.b,
                spec.b()
            )));
        }
        if file.matrices.len() != file.s {
            return Err(NetError::FileField(format!(
                "s = {} but {} matrices present",
                file.s,
                file.matrices.len()
            )));
        }
        let mut matrices = Vec::with_capacity(file.s);
        for (idx, rows) in file.matrices.iter().enumerate() {
            if rows.len() != file.n || rows.iter().any(|r| r.len() != file.m) {
                return Err(NetError::FileField(format!(
                    "matrix {} is not {} x {}",
                    idx + 1,
                    file.n,
                    file.m
                )));
            }
            let mut entries = Vec::with_capacity(file.n * file.m);
            for row in rows {
                for &e in row {
                    if e >= file.b {
                        return Err(NetError::EntryOutOfRange { entry: e, b: file.b });
                    }
                    entries.push(e as u8);
                }
            }
            matrices.push(FieldMatrix::new(file.n, file.m, entries)?);
        }
        DigitalNet::new(spec, file.m, file.n, matrices)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(b: u32) -> FieldSpec {
        match b {
            4 => FieldSpec::new(2, 2).unwrap(),
            8 => FieldSpec::new(2, 3).unwrap(),
            9 => FieldSpec::new(3, 2).unwrap(),
            p => FieldSpec::new(p, 1).unwrap(),
        }
    }

    /// Three-dimensional 3x3 demo net whose generators all carry a zero
    /// third row.
    fn demo_net(b: u32) -> DigitalNet {
        let rows = [
            [[1, 0, 0], [0, 1, 1], [0, 0, 0]],
            [[0, 1, 0], [1, 0, 1], [0, 0, 0]],
            [[0, 0, 1], [1, 1, 0], [0, 0, 0]],
        ];
        let matrices = rows
            .iter()
            .map(|m| FieldMatrix::from_rows(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap())
            .collect();
        DigitalNet::new(gf(b), 3, 3, matrices).unwrap()
    }

    #[test]
    fn one_dimensional_two_point_net() {
        let net = identity_net(gf(2), 1, 1, 1).unwrap();
        let points = net.generate_points().unwrap();
        assert_eq!(points.len(), 2);
        assert_eq!(points[0].coord(0), &[0]);
        assert_eq!(points[1].coord(0), &[1]);
        assert_eq!(tvalue_bruteforce_points(&points, 2, 1).unwrap(), 0);
    }

    #[test]
    fn base3_identity_points_are_digit_reversed() {
        let net = identity_net(gf(3), 1, 2, 2).unwrap();
        let points = net.generate_points().unwrap();
        assert_eq!(points.len(), 9);
        // h = 1 has index digits (1, 0), so the coordinate digits are (1, 0),
        // i.e. the point 1/3
        assert_eq!(points[1].coord(0), &[1, 0]);
        assert!((points[1].value(3, 0) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn demo_net_points_form_a_1_3_3_net() {
        let net = demo_net(2);
        assert_eq!(net.generate_points().unwrap().len(), 8);
        assert_eq!(net.strict_t_value_bruteforce().unwrap(), 1);
        assert_eq!(net.strict_t_value(), 1);
    }

    #[test]
    fn demo_net_t_value_is_one_for_every_base() {
        for b in [2, 3, 4, 5] {
            assert_eq!(demo_net(b).strict_t_value(), 1, "base {b}");
        }
    }

    #[test]
    fn stacks_collect_leading_rows() {
        let net = demo_net(2);
        let empty = net.stack_c_uk(&[1, 2, 3], &[0, 0, 0]).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 3));

        let stack = net.stack_c_uk(&[1, 2, 3], &[2, 1, 1]).unwrap();
        assert_eq!(stack.rows(), 4);
        assert_eq!(stack.row(0), &[1, 0, 0]);
        assert_eq!(stack.row(1), &[0, 1, 1]);
        assert_eq!(stack.row(2), &[0, 1, 0]);
        assert_eq!(stack.row(3), &[0, 0, 1]);

        // rows beyond the precision are zero rows
        let tall = net.stack_c_uk(&[1], &[3]).unwrap();
        assert_eq!(tall.row(2), &[0, 0, 0]);
        assert_eq!(gf::rank(net.spec(), &tall), 2);
        let taller = net.stack_c_uk(&[1], &[5]).unwrap();
        assert_eq!(gf::rank(net.spec(), &taller), 2);

        assert!(matches!(
            net.stack_c_uk(&[], &[]),
            Err(NetError::EmptySubset)
        ));
        assert!(matches!(
            net.stack_c_uk(&[2, 1], &[1, 1]),
            Err(NetError::BadSubset { .. })
        ));
    }

    #[test]
    fn identity_net_has_t_zero() {
        for (b, m) in [(2u32, 4usize), (3, 3), (5, 2)] {
            let net = identity_net(gf(b), 1, m, m).unwrap();
            assert_eq!(net.strict_t_value(), 0);
            assert_eq!(net.strict_t_value_bruteforce().unwrap(), 0);
        }
    }

    #[test]
    fn duplicated_coordinates_degrade_the_t_value() {
        // both coordinates share the same identity generator, so the points
        // sit on the diagonal; the (1,1) shape fails but both one-digit
        // shapes still split evenly
        let net = DigitalNet::new(
            gf(2),
            2,
            2,
            vec![FieldMatrix::identity(2), FieldMatrix::identity(2)],
        )
        .unwrap();
        assert_eq!(net.strict_t_value(), 1);
        assert_eq!(net.strict_t_value_bruteforce().unwrap(), 1);
    }

    #[test]
    fn dual_membership_matches_hand_computation() {
        let net = demo_net(2);
        assert!(net.dual_contains(&[0, 0, 0]).unwrap());
        // second rows of the three generators sum to zero
        assert!(net.dual_contains(&[2, 2, 2]).unwrap());
        // third rows are zero, so l = (2, 4, 4) leaves C_1's second row alone
        assert!(!net.dual_contains(&[2, 4, 4]).unwrap());

        let tiny = identity_net(gf(2), 1, 1, 1).unwrap();
        assert!(!tiny.dual_contains(&[1]).unwrap());
        assert!(matches!(
            tiny.dual_contains(&[2]),
            Err(NetError::IndexTooLarge { .. })
        ));
    }

    #[test]
    fn digitwise_sub_matches_field_arithmetic() {
        let gf2 = gf(2);
        assert_eq!(digitwise_sub(&gf2, &[1, 0, 1], &[0, 1, 1]).unwrap(), vec![1, 1, 0]);
        let gf3 = gf(3);
        assert_eq!(digitwise_sub(&gf3, &[2, 1], &[1, 2]).unwrap(), vec![1, 2]);
        assert_eq!(digitwise_sub(&gf3, &[2, 1], &[2, 1]).unwrap(), vec![0, 0]);
        assert!(digitwise_sub(&gf3, &[1], &[1, 2]).is_err());
    }

    #[test]
    fn faure_matrices_and_t_value() {
        // beta_1 = 0 makes the first generator the identity
        let net = faure_net(gf(2), 1, 3, 3).unwrap();
        assert_eq!(net.matrix(0), &FieldMatrix::identity(3));

        let net = faure_net(gf(3), 2, 2, 2).unwrap();
        assert_eq!(net.matrix(1).row(0), &[1, 1]);
        assert_eq!(net.matrix(1).row(1), &[0, 1]);
        assert_eq!(net.strict_t_value(), 0);
        assert_eq!(net.strict_t_value_bruteforce().unwrap(), 0);

        let net = faure_net(gf(5), 3, 3, 3).unwrap();
        assert_eq!(net.strict_t_value(), 0);
        assert_eq!(net.strict_t_value_bruteforce().unwrap(), 0);

        assert!(matches!(
            faure_net(gf(2), 3, 2, 2),
            Err(NetError::FaureBase { .. })
        ));
    }

    #[test]
    fn random_nets_are_reproducible() {
        let a = random_net(gf(4), 3, 3, 3, 7).unwrap();
        let b = random_net(gf(4), 3, 3, 3, 7).unwrap();
        let c = random_net(gf(4), 3, 3, 3, 8).unwrap();
        for j in 0..3 {
            assert_eq!(a.matrix(j), b.matrix(j));
        }
        assert!((0..3).any(|j| a.matrix(j) != c.matrix(j)));
    }

    #[test]
    fn net_points_are_closed_under_digitwise_subtraction() {
        use std::collections::HashSet;
        let net = random_net(gf(3), 2, 2, 3, 11).unwrap();
        let points = net.generate_points().unwrap();
        let set: HashSet<PointDigits> = points.iter().cloned().collect();
        for x in &points {
            for y in &points {
                let coords: Vec<Vec<u8>> = (0..net.s())
                    .map(|j| digitwise_sub(net.spec(), x.coord(j), y.coord(j)).unwrap())
                    .collect();
                let diff = PointDigits::from_coords(&coords).unwrap();
                assert!(set.contains(&diff));
            }
        }
    }

    #[test]
    fn dual_count_matches_kernel_dimension() {
        // when the stacked s*n x m system has rank m, the dual elements with
        // every component below b^n number exactly b^(s*n - m)
        let net = random_net(gf(2), 2, 2, 3, 5).unwrap();
        let all_rows: Vec<Vec<u8>> = (0..net.s())
            .flat_map(|j| (0..net.n()).map(move |i| net.matrix(j).row(i).to_vec()))
            .collect();
        let stacked = FieldMatrix::from_rows(&all_rows).unwrap();
        if gf::rank(net.spec(), &stacked) != net.m() {
            return; // this seed was chosen to give full rank
        }
        let bn = 2u64.pow(net.n() as u32);
        let mut count = 0u64;
        for l1 in 0..bn {
            for l2 in 0..bn {
                if net.dual_contains(&[l1, l2]).unwrap() {
                    count += 1;
                }
            }
        }
        let expected = 2u64.pow((net.s() * net.n() - net.m()) as u32);
        assert_eq!(count, expected);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let net = demo_net(3);
        let text = net.to_json();
        let restored = DigitalNet::from_json(&text).unwrap();
        assert_eq!(restored.b(), 3);
        assert_eq!(restored.s(), 3);
        assert_eq!(restored.strict_t_value(), 1);
        for j in 0..3 {
            assert_eq!(restored.matrix(j), net.matrix(j));
        }

        let bad = text.replace("\"m\": 3", "\"m\": 2");
        assert!(DigitalNet::from_json(&bad).is_err());
        assert!(DigitalNet::from_json("{}").is_err());
    }

    #[test]
    fn phi_hook_rejects_non_bijections() {
        let net = identity_net(gf(3), 1, 1, 1).unwrap();
        assert!(net.generate_points_with_phi(&[0, 1, 1]).is_err());
        assert!(net.generate_points_with_phi(&[1, 0, 2]).is_err());
        assert!(net.generate_points_with_phi(&[0, 2, 1]).is_ok());
    }
}
