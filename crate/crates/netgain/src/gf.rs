//! Exact arithmetic and linear algebra over GF(b) for prime powers b = p^r.
//!
//! Field elements are addressed by indices in `0..b`: the base-p digits of an
//! index are the coefficients of the element in the polynomial basis over
//! GF(p). Index 0 is the additive identity and index 1 the multiplicative
//! identity, so the digit bijection is the identity on indices. Arithmetic is
//! table driven; a [`FieldSpec`] is immutable after construction and can be
//! shared freely across threads.

use std::fmt;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u32 = 64;

/// Spans with more than this many elements are refused by
/// [`subspace_all_nonzero_count`].
pub const MAX_SPAN_ENUMERATION: u128 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NonPrime(u32),
    #[error("field exponent must be at least 1")]
    ZeroExponent,
    #[error("field order {0} exceeds the supported maximum {MAX_FIELD_ORDER}")]
    OrderTooLarge(u64),
    #[error("modulus polynomial must have degree {expected}, got {got}")]
    PolyDegree { expected: u32, got: usize },
    #[error("modulus polynomial must be monic")]
    PolyNotMonic,
    #[error("modulus polynomial has a coefficient outside GF(p)")]
    PolyCoefficient,
    #[error("modulus polynomial is reducible")]
    PolyReducible,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("matrix entries do not match {rows}x{cols}")]
    EntryCount { rows: usize, cols: usize },
    #[error("ragged rows passed to matrix constructor")]
    RaggedRows,
    #[error("basis vectors have mixed lengths")]
    RaggedBasis,
    #[error("basis vectors are not linearly independent")]
    DependentBasis,
    #[error("span of dimension {dim} over GF({b}) exceeds the enumeration guard")]
    SpanTooLarge { b: u32, dim: usize },
}

/// A prime-power field GF(p^r) with full arithmetic tables.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    r: u32,
    b: u32,
    poly: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec(GF({}) = GF({}^{}))", self.b, self.p, self.r)
    }
}

impl FieldSpec {
    /// Builds GF(p^r) with the default modulus polynomial: the monic
    /// irreducible of degree r whose coefficient word `c_0 + c_1 p + ...`
    /// is smallest. For r = 1 the modulus is the polynomial x.
    pub fn new(p: u32, r: u32) -> Result<Self, GfError> {
        check_params(p, r)?;
        let poly = default_irreducible(p, r);
        Self::from_checked_parts(p, r, poly)
    }

    /// Builds GF(p^r) with an explicit monic irreducible modulus, given as
    /// `r + 1` coefficients in ascending degree order.
    pub fn with_poly(p: u32, r: u32, poly: &[u8]) -> Result<Self, GfError> {
        check_params(p, r)?;
        if poly.len() != r as usize + 1 {
            return Err(GfError::PolyDegree {
                expected: r,
                got: poly.len().saturating_sub(1),
            });
        }
        if poly.iter().any(|&c| c as u32 >= p) {
            return Err(GfError::PolyCoefficient);
        }
        if poly[r as usize] != 1 {
            return Err(GfError::PolyNotMonic);
        }
        if r > 1 && !is_irreducible(poly, p) {
            return Err(GfError::PolyReducible);
        }
        Self::from_checked_parts(p, r, poly.to_vec())
    }

    fn from_checked_parts(p: u32, r: u32, poly: Vec<u8>) -> Result<Self, GfError> {
        let b = p.pow(r);
        let bu = b as usize;
        let decode = |idx: u32| -> Vec<u8> {
            let mut v = vec![0u8; r as usize];
            let mut x = idx;
            for d in v.iter_mut() {
                *d = (x % p) as u8;
                x /= p;
            }
            v
        };
        let encode = |coeffs: &[u8]| -> u32 {
            coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c as u32)
        };

        let mut add = vec![0u8; bu * bu];
        let mut mul = vec![0u8; bu * bu];
        let mut neg = vec![0u8; bu];
        for a in 0..b {
            let av = decode(a);
            let negv: Vec<u8> = av.iter().map(|&d| ((p as u8) - d) % p as u8).collect();
            neg[a as usize] = encode(&negv) as u8;
            for c in 0..b {
                let cv = decode(c);
                let sum: Vec<u8> = av
                    .iter()
                    .zip(&cv)
                    .map(|(&x, &y)| ((x as u32 + y as u32) % p) as u8)
                    .collect();
                add[(a * b + c) as usize] = encode(&sum) as u8;
                let prod = poly_mul(&av, &cv, p);
                let red = poly_rem(&prod, &poly, p);
                mul[(a * b + c) as usize] = encode(&red) as u8;
            }
        }

        let mut inv = vec![0u8; bu];
        for a in 1..b {
            let found = (1..b).find(|&c| mul[(a * b + c) as usize] == 1);
            inv[a as usize] = found.expect("nonzero element without inverse") as u8;
        }

        Ok(FieldSpec {
            p,
            r,
            b,
            poly,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn poly(&self) -> &[u8] {
        &self.poly
    }

    pub fn is_prime_field(&self) -> bool {
        self.r == 1
    }

    #[inline]
    pub fn add(&self, a: u8, c: u8) -> u8 {
        self.check(a);
        self.check(c);
        self.add[a as usize * self.b as usize + c as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, c: u8) -> u8 {
        self.add(a, self.neg(c))
    }

    #[inline]
    pub fn mul(&self, a: u8, c: u8) -> u8 {
        self.check(a);
        self.check(c);
        self.mul[a as usize * self.b as usize + c as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.check(a);
        self.neg[a as usize]
    }

    pub fn inv(&self, a: u8) -> Result<u8, GfError> {
        self.check(a);
        if a == 0 {
            return Err(GfError::ZeroInverse);
        }
        Ok(self.inv[a as usize])
    }

    pub fn pow(&self, a: u8, e: u64) -> u8 {
        self.check(a);
        let mut result = 1u8;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// First coefficient of the element in the polynomial basis; the
    /// GF(p)-linear functional used to build additive characters.
    #[inline]
    pub fn first_coefficient(&self, a: u8) -> u8 {
        self.check(a);
        (a as u32 % self.p) as u8
    }

    #[inline]
    fn check(&self, a: u8) {
        assert!((a as u32) < self.b, "element index {a} out of range for GF({})", self.b);
    }
}

fn check_params(p: u32, r: u32) -> Result<(), GfError> {
    if !is_prime(p) {
        return Err(GfError::NonPrime(p));
    }
    if r == 0 {
        return Err(GfError::ZeroExponent);
    }
    let order = (p as u64).checked_pow(r).unwrap_or(u64::MAX);
    if order > MAX_FIELD_ORDER as u64 {
        return Err(GfError::OrderTooLarge(order));
    }
    Ok(())
}

fn is_prime(x: u32) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Coefficient-wise product of two polynomials over GF(p), ascending order.
fn poly_mul(a: &[u8], c: &[u8], p: u32) -> Vec<u8> {
    if a.is_empty() || c.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u8; a.len() + c.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in c.iter().enumerate() {
            let t = out[i + j] as u32 + x as u32 * y as u32;
            out[i + j] = (t % p) as u8;
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m`, ascending order; the
/// result has length `deg m`.
fn poly_rem(a: &[u8], m: &[u8], p: u32) -> Vec<u8> {
    let deg_m = m.len() - 1;
    let mut work: Vec<u8> = a.to_vec();
    if work.len() < deg_m {
        work.resize(deg_m, 0);
    }
    let mut i = work.len();
    while i > deg_m {
        i -= 1;
        let lead = work[i] as u32;
        if lead == 0 {
            continue;
        }
        let scale = p - lead; // subtract lead * x^(i-deg_m) * m
        for (j, &mc) in m.iter().enumerate() {
            let t = work[i - deg_m + j] as u32 + scale * mc as u32;
            work[i - deg_m + j] = (t % p) as u8;
        }
        debug_assert_eq!(work[i], 0);
    }
    work.truncate(deg_m);
    work
}

fn is_irreducible(poly: &[u8], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    // trial division by every monic polynomial of degree 1..=deg/2
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for v in 0..count {
            let mut g = vec![0u8; d + 1];
            let mut x = v;
            for gc in g.iter_mut().take(d) {
                *gc = (x % p as u64) as u8;
                x /= p as u64;
            }
            g[d] = 1;
            if poly_rem(poly, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn default_irreducible(p: u32, r: u32) -> Vec<u8> {
    if r == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(r);
    for v in 0..count {
        let mut poly = vec![0u8; r as usize + 1];
        let mut x = v;
        for c in poly.iter_mut().take(r as usize) {
            *c = (x % p as u64) as u8;
            x /= p as u64;
        }
        poly[r as usize] = 1;
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

/// Dense matrix over a finite field, row-major element indices.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl FieldMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<u8>) -> Result<Self, GfError> {
        if entries.len() != rows * cols {
            return Err(GfError::EntryCount { rows, cols });
        }
        Ok(FieldMatrix { rows, cols, entries })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        FieldMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self, GfError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(GfError::RaggedRows);
        }
        let entries = rows.iter().flatten().copied().collect();
        FieldMatrix::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transposed(&self) -> FieldMatrix {
        let mut out = FieldMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn max_entry(&self) -> u8 {
        self.entries.iter().copied().max().unwrap_or(0)
    }
}

/// Row rank over GF(b) by Gaussian elimination. The 0xm and mx0 matrices
/// have rank 0.
pub fn rank(spec: &FieldSpec, m: &FieldMatrix) -> usize {
    debug_assert!((m.max_entry() as u32) < spec.b());
    let mut work = m.clone();
    let mut pivot_row = 0;
    for col in 0..work.cols {
        if pivot_row == work.rows {
            break;
        }
        let Some(src) = (pivot_row..work.rows).find(|&r| work.get(r, col) != 0) else {
            continue;
        };
        swap_rows(&mut work, pivot_row, src);
        let scale = spec.inv(work.get(pivot_row, col)).expect("pivot is nonzero");
        scale_row(spec, &mut work, pivot_row, scale);
        for r in pivot_row + 1..work.rows {
            let factor = work.get(r, col);
            if factor != 0 {
                subtract_scaled(spec, &mut work, r, pivot_row, factor, col);
            }
        }
        pivot_row += 1;
    }
    pivot_row
}

/// Reduced row echelon form; returns the transformed matrix and pivot
/// column indices.
fn reduced_echelon(spec: &FieldSpec, m: &FieldMatrix) -> (FieldMatrix, Vec<usize>) {
    let mut work = m.clone();
    let mut pivots = Vec::new();
    let mut pivot_row = 0;
    for col in 0..work.cols {
        if pivot_row == work.rows {
            break;
        }
        let Some(src) = (pivot_row..work.rows).find(|&r| work.get(r, col) != 0) else {
            continue;
        };
        swap_rows(&mut work, pivot_row, src);
        let scale = spec.inv(work.get(pivot_row, col)).expect("pivot is nonzero");
        scale_row(spec, &mut work, pivot_row, scale);
        for r in 0..work.rows {
            if r == pivot_row {
                continue;
            }
            let factor = work.get(r, col);
            if factor != 0 {
                subtract_scaled(spec, &mut work, r, pivot_row, factor, col);
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    (work, pivots)
}

fn swap_rows(m: &mut FieldMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..m.cols {
        let (x, y) = (m.get(a, c), m.get(b, c));
        m.set(a, c, y);
        m.set(b, c, x);
    }
}

fn scale_row(spec: &FieldSpec, m: &mut FieldMatrix, r: usize, scale: u8) {
    if scale == 1 {
        return;
    }
    for c in 0..m.cols {
        m.set(r, c, spec.mul(m.get(r, c), scale));
    }
}

/// row[dst] -= factor * row[src], touching only columns >= from.
fn subtract_scaled(
    spec: &FieldSpec,
    m: &mut FieldMatrix,
    dst: usize,
    src: usize,
    factor: u8,
    from: usize,
) {
    for c in from..m.cols {
        let delta = spec.mul(factor, m.get(src, c));
        m.set(dst, c, spec.sub(m.get(dst, c), delta));
    }
}

/// Basis of the right kernel `{v : M v = 0}`, one vector per free column of
/// the reduced echelon form, ordered by free column index. Each vector is
/// normalized so its first nonzero coordinate is 1.
pub fn kernel_basis(spec: &FieldSpec, m: &FieldMatrix) -> Vec<Vec<u8>> {
    debug_assert!((m.max_entry() as u32) < spec.b());
    let (rref, pivots) = reduced_echelon(spec, m);
    let mut basis = Vec::with_capacity(m.cols - pivots.len());
    let mut next_pivot = 0;
    for free in 0..m.cols {
        if next_pivot < pivots.len() && pivots[next_pivot] == free {
            next_pivot += 1;
            continue;
        }
        let mut v = vec![0u8; m.cols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = spec.neg(rref.get(i, free));
        }
        normalize_leading(spec, &mut v);
        basis.push(v);
    }
    basis
}

fn normalize_leading(spec: &FieldSpec, v: &mut [u8]) {
    if let Some(&lead) = v.iter().find(|&&x| x != 0) {
        if lead != 1 {
            let scale = spec.inv(lead).expect("leading entry is nonzero");
            for x in v.iter_mut() {
                *x = spec.mul(*x, scale);
            }
        }
    }
}

/// Reduces a spanning set to a linearly independent basis of the same row
/// space (nonzero rows of the reduced echelon form).
pub fn independent_rows(spec: &FieldSpec, vectors: &[Vec<u8>]) -> Result<Vec<Vec<u8>>, GfError> {
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    let m = FieldMatrix::from_rows(vectors).map_err(|_| GfError::RaggedBasis)?;
    let (rref, pivots) = reduced_echelon(spec, &m);
    Ok((0..pivots.len()).map(|r| rref.row(r).to_vec()).collect())
}

/// Exact number of vectors in the span of `basis` whose coordinates are all
/// nonzero. The empty span contributes 0 (the zero vector has zero
/// coordinates whenever the ambient dimension is positive).
pub fn subspace_all_nonzero_count(spec: &FieldSpec, basis: &[Vec<u8>]) -> Result<u64, GfError> {
    if basis.is_empty() {
        return Ok(0);
    }
    let n = basis[0].len();
    if basis.iter().any(|v| v.len() != n) {
        return Err(GfError::RaggedBasis);
    }
    let d = basis.len();
    let as_matrix = FieldMatrix::from_rows(basis)?;
    if rank(spec, &as_matrix) != d {
        return Err(GfError::DependentBasis);
    }
    let b = spec.b();
    if (b as u128).pow(d as u32) > MAX_SPAN_ENUMERATION {
        return Err(GfError::SpanTooLarge { b, dim: d });
    }

    // scaled[i][c] = c * basis[i], precomputed per coefficient value
    let scaled: Vec<Vec<Vec<u8>>> = basis
        .iter()
        .map(|v| {
            (0..b as u8)
                .map(|c| v.iter().map(|&x| spec.mul(c, x)).collect())
                .collect()
        })
        .collect();

    fn walk(spec: &FieldSpec, scaled: &[Vec<Vec<u8>>], acc: &[u8], count: &mut u64) {
        match scaled.split_first() {
            None => {
                if acc.iter().all(|&x| x != 0) {
                    *count += 1;
                }
            }
            Some((level, rest)) => {
                for choice in level {
                    let next: Vec<u8> = acc
                        .iter()
                        .zip(choice)
                        .map(|(&a, &c)| spec.add(a, c))
                        .collect();
                    walk(spec, rest, &next, count);
                }
            }
        }
    }

    let mut count = 0;
    walk(spec, &scaled, &vec![0u8; n], &mut count);
    Ok(count)
}
