//! Sobol' generating matrices from Joe-Kuo direction-number files (base 2).
//!
//! The text format carries one line per dimension `d >= 2`:
//! `d s a m_1 ... m_s`, where `s` is the degree of the primitive polynomial,
//! `a` packs its inner coefficients, and the `m_i` are the odd initial
//! direction integers. Dimension 1 is the van der Corput identity matrix.

use crate::gf::{FieldMatrix, FieldSpec};
use crate::net::{DigitalNet, NetError};

struct DirectionRow {
    degree: usize,
    a: u64,
    m_init: Vec<u64>,
}

fn parse_rows(text: &str, max_dim: usize) -> Result<Vec<(usize, DirectionRow)>, NetError> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || !line.starts_with(|c: char| c.is_ascii_digit()) {
            continue; // header or comment
        }
        let fields: Vec<u64> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u64>().map_err(|_| {
                    NetError::SobolParse(format!("line {}: bad integer {tok:?}", lineno + 1))
                })
            })
            .collect::<Result<_, _>>()?;
        if fields.len() < 3 {
            return Err(NetError::SobolParse(format!(
                "line {}: expected d s a m_1 ... m_s",
                lineno + 1
            )));
        }
        let dim = fields[0] as usize;
        let degree = fields[1] as usize;
        let a = fields[2];
        let m_init = fields[3..].to_vec();
        if m_init.len() != degree {
            return Err(NetError::SobolParse(format!(
                "line {}: degree {degree} but {} initial values",
                lineno + 1,
                m_init.len()
            )));
        }
        for (i, &mi) in m_init.iter().enumerate() {
            if mi % 2 == 0 || mi >= 1 << (i + 1) {
                return Err(NetError::SobolParse(format!(
                    "line {}: m_{} = {mi} must be odd and below 2^{}",
                    lineno + 1,
                    i + 1,
                    i + 1
                )));
            }
        }
        if dim >= 2 && dim <= max_dim {
            rows.push((dim, DirectionRow { degree, a, m_init }));
        }
    }
    Ok(rows)
}

/// Extends the initial direction integers to `count` values with the
/// standard recurrence driven by the primitive polynomial.
fn direction_integers(row: &DirectionRow, count: usize) -> Vec<u64> {
    let s = row.degree;
    let mut m = row.m_init.clone();
    while m.len() < count {
        let k = m.len(); // next index, 0-based; value m_{k+1}
        let mut next = m[k - s] ^ (m[k - s] << s);
        for i in 1..s {
            // a packs the inner coefficients with a_1 in the top bit
            let a_i = row.a >> (s - 1 - i) & 1;
            if a_i == 1 {
                next ^= m[k - i] << i;
            }
        }
        m.push(next);
    }
    m.truncate(count);
    m
}

/// Column c of the generating matrix holds the binary digits of
/// `m_{c+1} / 2^(c+1)`: entry (i, c) is bit c - i of `m_{c+1}`.
fn matrix_from_directions(m_values: &[u64], m: usize, n: usize) -> FieldMatrix {
    let mut mat = FieldMatrix::zero(n, m);
    for (c, &mv) in m_values.iter().enumerate().take(m) {
        for i in 0..=c.min(n - 1) {
            mat.set(i, c, (mv >> (c - i) & 1) as u8);
        }
    }
    mat
}

/// Builds the first `2^m` Sobol' points' generating matrices for dimensions
/// `1..=s` from Joe-Kuo formatted text. `n` defaults to `m` (later rows are
/// identically zero anyway).
pub fn sobol_net_from_joe_kuo(
    text: &str,
    s: usize,
    m: usize,
    n: Option<usize>,
) -> Result<DigitalNet, NetError> {
    let n = n.unwrap_or(m);
    if m == 0 || m > 63 {
        return Err(NetError::SobolParse(format!(
            "m = {m} is outside the supported range 1..=63"
        )));
    }
    let rows = parse_rows(text, s)?;
    let spec = FieldSpec::new(2, 1)?;

    let mut matrices = Vec::with_capacity(s);
    let mut identity = FieldMatrix::zero(n, m);
    for i in 0..m.min(n) {
        identity.set(i, i, 1);
    }
    matrices.push(identity);

    for dim in 2..=s {
        let row = rows
            .iter()
            .find(|(d, _)| *d == dim)
            .map(|(_, r)| r)
            .ok_or(NetError::SobolDimension { dim })?;
        let m_values = direction_integers(row, m);
        matrices.push(matrix_from_directions(&m_values, m, n));
    }
    DigitalNet::new(spec, m, n, matrices)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Head of the standard Joe-Kuo table, used as sample data.
    pub const SAMPLE: &str = "d       s       a       m_i\n\
2       1       0       1\n\
3       2       1       1 3\n\
4       3       1       1 3 1\n\
5       3       2       1 1 1\n\
6       4       1       1 1 3 3\n\
7       4       4       1 3 5 13\n";

    #[test]
    fn recurrence_extends_the_initial_values() {
        let rows = parse_rows(SAMPLE, 3).unwrap();
        let dim2 = &rows.iter().find(|(d, _)| *d == 2).unwrap().1;
        assert_eq!(direction_integers(dim2, 5), vec![1, 3, 5, 15, 17]);
        let dim3 = &rows.iter().find(|(d, _)| *d == 3).unwrap().1;
        assert_eq!(direction_integers(dim3, 5), vec![1, 3, 3, 9, 29]);
    }

    #[test]
    fn matrices_are_unit_upper_triangular() {
        let net = sobol_net_from_joe_kuo(SAMPLE, 5, 6, None).unwrap();
        assert_eq!(net.b(), 2);
        assert_eq!(net.matrix(0), &FieldMatrix::identity(6));
        for j in 0..5 {
            let mat = net.matrix(j);
            for c in 0..6 {
                assert_eq!(mat.get(c, c), 1, "dimension {} column {c}", j + 1);
                for i in c + 1..6 {
                    assert_eq!(mat.get(i, c), 0);
                }
            }
        }
    }

    #[test]
    fn rank_t_value_agrees_with_the_counting_oracle() {
        for (s, m) in [(2usize, 4usize), (3, 4), (4, 4)] {
            let net = sobol_net_from_joe_kuo(SAMPLE, s, m, None).unwrap();
            assert_eq!(
                net.strict_t_value(),
                net.strict_t_value_bruteforce().unwrap(),
                "s = {s}, m = {m}"
            );
        }
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(matches!(
            sobol_net_from_joe_kuo(SAMPLE, 9, 4, None),
            Err(NetError::SobolDimension { dim: 7 })
        ));
        assert!(sobol_net_from_joe_kuo("3 2 1 1", 3, 4, None).is_err()); // missing m_2
        assert!(sobol_net_from_joe_kuo("3 2 1 2 3", 3, 4, None).is_err()); // even m_1
        assert!(sobol_net_from_joe_kuo(SAMPLE, 3, 0, None).is_err());
    }

    #[test]
    fn ingestion_is_deterministic() {
        let a = sobol_net_from_joe_kuo(SAMPLE, 4, 5, None).unwrap();
        let b = sobol_net_from_joe_kuo(SAMPLE, 4, 5, None).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }
}
