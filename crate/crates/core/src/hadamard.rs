//! ±1 matrices, the Hadamard property, normalization, the 0/1 image, and
//! the standard Sylvester and Paley fixtures.

use std::fmt;

use thiserror::Error;

use crate::gf2::{BinaryCode, BitVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HadamardError {
    #[error("matrix is not Hadamard")]
    NotHadamard,
    #[error("matrix must be square and nonempty")]
    NotSquare,
    #[error("Sylvester order 2^s needs 1 <= s <= 16, got s = {0}")]
    BadSylvester(u32),
    #[error("Paley type I needs a prime q = 3 mod 4, got {0}")]
    BadPaley(u64),
    #[error("matrix file: {0}")]
    Parse(String),
}

/// Square matrix with entries in {+1, -1}; `true` stands for -1.
#[derive(Clone, PartialEq, Eq)]
pub struct SignMatrix {
    order: usize,
    negative: Vec<bool>,
}

impl SignMatrix {
    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self, HadamardError> {
        let order = rows.len();
        if order == 0 || rows.iter().any(|r| r.len() != order) {
            return Err(HadamardError::NotSquare);
        }
        let mut negative = Vec::with_capacity(order * order);
        for &x in rows.iter().flatten() {
            match x {
                1 => negative.push(false),
                -1 => negative.push(true),
                other => return Err(HadamardError::Parse(format!("entry {other} is not ±1"))),
            }
        }
        Ok(SignMatrix { order, negative })
    }

    pub fn all_ones(order: usize) -> Self {
        SignMatrix {
            order,
            negative: vec![false; order * order],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> i8 {
        if self.negative[i * self.order + j] {
            -1
        } else {
            1
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.order {
            self.negative[i * self.order + j] ^= true;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.order {
            self.negative[i * self.order + j] ^= true;
        }
    }

    pub fn rows(&self) -> Vec<Vec<i8>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &SignMatrix) -> SignMatrix {
        let order = self.order * other.order;
        let mut negative = vec![false; order * order];
        for i in 0..order {
            for j in 0..order {
                negative[i * order + j] = self.negative[(i / other.order) * self.order + j / other.order]
                    ^ other.negative[(i % other.order) * other.order + j % other.order];
            }
        }
        SignMatrix { order, negative }
    }
}

impl fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SignMatrix {}", self.order)?;
        for i in 0..self.order {
            let row: String = (0..self.order)
                .map(|j| if self.entry(i, j) < 0 { '-' } else { '+' })
                .collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Square 0/1 matrix stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: Vec<BitVector>,
}

impl BinaryMatrix {
    pub fn from_rows(rows: Vec<BitVector>) -> Result<Self, HadamardError> {
        let m = rows.len();
        if m == 0 || rows.iter().any(|r| r.len() != m) {
            return Err(HadamardError::NotSquare);
        }
        Ok(BinaryMatrix { rows })
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    /// Inverse of [`binarize`]: 0 -> +1, 1 -> -1.
    pub fn to_signs(&self) -> SignMatrix {
        let order = self.order();
        let negative = self
            .rows
            .iter()
            .flat_map(|r| (1..=order).map(move |j| r.get(j)))
            .collect();
        SignMatrix { order, negative }
    }

    /// Every row is the cyclic right shift of the row above it.
    pub fn is_circulant(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1] == w[0].rotate_right(1))
    }

    pub fn column_weights(&self) -> Vec<usize> {
        (1..=self.order())
            .map(|j| self.rows.iter().filter(|r| r.get(j)).count())
            .collect()
    }
}

/// True iff distinct rows are pairwise orthogonal over the integers.
pub fn is_hadamard(h: &SignMatrix) -> bool {
    let m = h.order;
    (0..m).all(|i| {
        (i + 1..m).all(|k| {
            let dot: i64 = (0..m)
                .map(|j| (h.entry(i, j) as i64) * (h.entry(k, j) as i64))
                .sum();
            dot == 0
        })
    })
}

/// Makes the first row and column +1: columns are negated by the signs of
/// row 1, then rows by the signs of column 1.
pub fn normalize(h: &SignMatrix) -> Result<SignMatrix, HadamardError> {
    if !is_hadamard(h) {
        return Err(HadamardError::NotHadamard);
    }
    let mut out = h.clone();
    for j in 0..out.order {
        if out.entry(0, j) < 0 {
            out.negate_col(j);
        }
    }
    for i in 0..out.order {
        if out.entry(i, 0) < 0 {
            out.negate_row(i);
        }
    }
    Ok(out)
}

/// +1 -> 0, -1 -> 1.
pub fn binarize(h: &SignMatrix) -> BinaryMatrix {
    let rows = (0..h.order)
        .map(|i| {
            BitVector::from_bits((0..h.order).map(|j| h.entry(i, j) < 0)).expect("order >= 1")
        })
        .collect();
    BinaryMatrix { rows }
}

/// The rows of `b` together with their complements.
pub fn code_from_matrix(b: &BinaryMatrix) -> BinaryCode {
    let words = b.rows.iter().flat_map(|r| [r.clone(), r.complement()]);
    BinaryCode::new(b.order(), words).expect("rows share the matrix order")
}

/// Row `i` (1-indexed) is `first_row` shifted right by `i - 1`.
pub fn circulant(first_row: &BitVector) -> BinaryMatrix {
    let rows = (0..first_row.len())
        .map(|i| first_row.rotate_right(i))
        .collect();
    BinaryMatrix { rows }
}

/// The binary Hadamard code of a Hadamard matrix: normalize, binarize, and
/// close under complement.
pub fn hadamard_code(h: &SignMatrix) -> Result<BinaryCode, HadamardError> {
    Ok(code_from_matrix(&binarize(&normalize(h)?)))
}

/// Sylvester matrix of order `2^s`.
pub fn sylvester_matrix(s: u32) -> Result<SignMatrix, HadamardError> {
    if !(1..=16).contains(&s) {
        return Err(HadamardError::BadSylvester(s));
    }
    let base = SignMatrix::from_rows(&[vec![1, 1], vec![1, -1]])?;
    Ok((1..s).fold(base.clone(), |acc, _| acc.kron(&base)))
}

pub fn sylvester_code(s: u32) -> Result<BinaryCode, HadamardError> {
    hadamard_code(&sylvester_matrix(s)?)
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

/// Paley type I matrix of order `q + 1`: `I + S` with `S` the skew matrix
/// bordering the Jacobsthal matrix of the quadratic character of GF(q).
pub fn paley_matrix(q: u64) -> Result<SignMatrix, HadamardError> {
    if !is_prime(q) || q % 4 != 3 || q > 1 << 12 {
        return Err(HadamardError::BadPaley(q));
    }
    let squares: std::collections::HashSet<u64> = (1..q).map(|x| x * x % q).collect();
    let chi = |a: u64| -> i8 {
        if a == 0 {
            0
        } else if squares.contains(&a) {
            1
        } else {
            -1
        }
    };
    let m = (q + 1) as usize;
    let mut rows = vec![vec![0i8; m]; m];
    for j in 1..m {
        rows[0][j] = 1;
        rows[j][0] = -1;
    }
    for i in 0..q {
        for j in 0..q {
            rows[i as usize + 1][j as usize + 1] = chi((j + q - i) % q);
        }
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] += 1;
    }
    SignMatrix::from_rows(&rows)
}

pub fn paley_code(q: u64) -> Result<BinaryCode, HadamardError> {
    hadamard_code(&paley_matrix(q)?)
}

/// A parsed matrix file: binary (`0`/`1`) or sign (`+`/`-`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixFile {
    Binary(BinaryMatrix),
    Sign(SignMatrix),
}

impl MatrixFile {
    /// Sign view; binary files map 0 -> +1 and 1 -> -1.
    pub fn signs(&self) -> SignMatrix {
        match self {
            MatrixFile::Binary(b) => b.to_signs(),
            MatrixFile::Sign(s) => s.clone(),
        }
    }
}

/// First line is the order `m`, then `m` rows of `m` characters. The
/// alphabet (`01` or `+-`) is detected from the rows and may not be mixed.
pub fn parse_matrix(text: &str) -> Result<MatrixFile, HadamardError> {
    let perr = |msg: String| HadamardError::Parse(msg);
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| perr("empty file".into()))?;
    let m: usize = header
        .parse()
        .map_err(|_| perr(format!("bad order line {header:?}")))?;
    let rows: Vec<&str> = lines.collect();
    if m == 0 || rows.len() != m {
        return Err(perr(format!("expected {m} rows, found {}", rows.len())));
    }
    if let Some(r) = rows.iter().find(|r| r.chars().count() != m) {
        return Err(perr(format!("row {r:?} does not have {m} entries")));
    }
    let all: String = rows.concat();
    if all.chars().all(|c| c == '0' || c == '1') {
        let rows = rows
            .iter()
            .map(|r| r.parse::<BitVector>().map_err(|e| perr(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MatrixFile::Binary(BinaryMatrix::from_rows(rows)?))
    } else if all.chars().all(|c| c == '+' || c == '-') {
        let rows: Vec<Vec<i8>> = rows
            .iter()
            .map(|r| r.chars().map(|c| if c == '-' { -1 } else { 1 }).collect())
            .collect();
        Ok(MatrixFile::Sign(SignMatrix::from_rows(&rows)?))
    } else {
        Err(perr("rows must use only 0/1 or only +/-".into()))
    }
}

pub fn format_binary(b: &BinaryMatrix) -> String {
    let mut out = format!("{}\n", b.order());
    for r in &b.rows {
        out.push_str(&format!("{r}\n"));
    }
    out
}

pub fn format_signs(h: &SignMatrix) -> String {
    let mut out = format!("{}\n", h.order);
    for i in 0..h.order {
        out.extend((0..h.order).map(|j| if h.entry(i, j) < 0 { '-' } else { '+' }));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn words(c: &BinaryCode) -> Vec<String> {
        let mut w: Vec<String> = c.words().iter().map(|w| w.to_string()).collect();
        w.sort();
        w
    }

    /// The order-4 circulant with first row (-1, +1, +1, +1).
    fn order4() -> SignMatrix {
        circulant(&bv("1000")).to_signs()
    }

    #[test]
    fn is_hadamard_examples() {
        assert!(is_hadamard(&order4()));
        assert!(!is_hadamard(&SignMatrix::all_ones(4)));
        assert!(is_hadamard(&sylvester_matrix(3).unwrap()));
    }

    #[test]
    fn normalize_examples() {
        let n = normalize(&order4()).unwrap();
        let rows: Vec<String> = binarize(&n).rows().iter().map(|r| r.to_string()).collect();
        // column 1 is forced to +1, so rows 2..4 are the complements of the
        // column-normalized rows 1100, 1010, 1001
        assert_eq!(rows, ["0000", "0011", "0101", "0110"]);
        let col_normalized: Vec<BitVector> = ["0000", "1100", "1010", "1001"].map(bv).to_vec();
        assert_eq!(
            code_from_matrix(&binarize(&n)),
            code_from_matrix(&BinaryMatrix::from_rows(col_normalized).unwrap())
        );
        assert_eq!(normalize(&n).unwrap(), n);
        let s = sylvester_matrix(3).unwrap();
        assert_eq!(normalize(&s).unwrap(), s);
        assert_eq!(
            normalize(&SignMatrix::all_ones(2)),
            Err(HadamardError::NotHadamard)
        );
    }

    #[test]
    fn binarize_examples() {
        assert!(binarize(&SignMatrix::all_ones(3)).rows().iter().all(|r| r.is_zero()));
        let rows: Vec<String> = binarize(&order4()).rows().iter().map(|r| r.to_string()).collect();
        assert_eq!(rows, ["1000", "0100", "0010", "0001"]);
    }

    #[test]
    fn code_from_matrix_examples() {
        let b = binarize(&normalize(&order4()).unwrap());
        assert_eq!(
            words(&code_from_matrix(&b)),
            ["0000", "0011", "0101", "0110", "1001", "1010", "1100", "1111"]
        );
        let zero = BinaryMatrix::from_rows(vec![BitVector::zeros(5); 5]).unwrap();
        assert_eq!(words(&code_from_matrix(&zero)), ["00000", "11111"]);
        let syl = sylvester_code(3).unwrap();
        assert_eq!(syl.size(), 16);
        let min_weight = syl.words().iter().map(|w| w.weight()).filter(|&w| w > 0).min();
        assert_eq!(min_weight, Some(4));
    }

    #[test]
    fn circulant_examples() {
        let rows = |s: &str| -> Vec<String> {
            circulant(&bv(s)).rows().iter().map(|r| r.to_string()).collect()
        };
        assert_eq!(rows("1000"), ["1000", "0100", "0010", "0001"]);
        assert_eq!(rows("0000"), ["0000"; 4]);
        assert_eq!(rows("1100"), ["1100", "0110", "0011", "1001"]);
        // second row is (a_4n, a_1, ..., a_4n-1)
        assert_eq!(rows("0001")[1], "1000");
        assert!(circulant(&bv("10110")).is_circulant());
    }

    #[test]
    fn fixture_examples() {
        assert_eq!(words(&sylvester_code(1).unwrap()), ["00", "01", "10", "11"]);
        let s2 = sylvester_code(2).unwrap();
        assert_eq!(
            words(&s2),
            ["0000", "0011", "0101", "0110", "1001", "1010", "1100", "1111"]
        );
        let p = paley_code(11).unwrap();
        assert_eq!((p.length(), p.size()), (12, 24));
        for a in p.words() {
            for b in p.words() {
                let d = a.distance(b);
                assert!(d == 0 || d == 6 || d == 12, "{a} {b} {d}");
            }
        }
        for q in [3, 7, 11, 19, 23, 31, 43] {
            assert!(is_hadamard(&paley_matrix(q).unwrap()), "q = {q}");
        }
        assert_eq!(paley_matrix(13), Err(HadamardError::BadPaley(13)));
        assert_eq!(paley_matrix(15), Err(HadamardError::BadPaley(15)));
        assert_eq!(sylvester_matrix(0), Err(HadamardError::BadSylvester(0)));
    }

    #[test]
    fn matrix_file_round_trip() {
        let b = circulant(&bv("1000"));
        let text = format_binary(&b);
        assert_eq!(text, "4\n1000\n0100\n0010\n0001\n");
        assert_eq!(parse_matrix(&text).unwrap(), MatrixFile::Binary(b.clone()));
        let s = sylvester_matrix(2).unwrap();
        let parsed = parse_matrix(&format_signs(&s)).unwrap();
        assert_eq!(parsed, MatrixFile::Sign(s.clone()));
        assert_eq!(parsed.signs(), s);
        assert_eq!(MatrixFile::Binary(b).signs(), order4());
    }

    #[test]
    fn matrix_file_errors() {
        for bad in ["", "x\n", "2\n01\n", "2\n01\n1\n", "2\n0+\n-1\n", "2\n0a\n10\n"] {
            assert!(parse_matrix(bad).is_err(), "{bad:?}");
        }
    }
}
