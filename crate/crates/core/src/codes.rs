//! Hadamard-code recognition, the rank/kernel report with the classical
//! bounds asserted, and projection onto the support of a kernel vector.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{self, BinaryCode, BitVector, Gf2Error};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodesError {
    #[error("not a Hadamard code")]
    NotHadamardCode,
    #[error("length {0} is not a multiple of 4")]
    LengthNotMultipleOfFour(usize),
    #[error("structural bound violated: {0}")]
    BoundViolation(String),
    #[error("{0} is not in the kernel")]
    NotInKernel(String),
    #[error("kernel vector must differ from e and u")]
    TrivialKernelVector,
    #[error("projection onto the kernel support is not a Hadamard code of length {0}")]
    ProjectionNotHadamard(usize),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// True iff `code` is the code of a binary Hadamard matrix of order `m`:
/// `m = 2` or `4 | m`, `2m` words, `e` in the code, closed under complement,
/// and distinct words at distance `m/2` or (exactly for complements) `m`.
pub fn is_hadamard_code(code: &BinaryCode) -> bool {
    let m = code.length();
    if !(m == 2 || m % 4 == 0) || code.size() != 2 * m || !code.contains_zero() {
        return false;
    }
    let words = code.words();
    if !words.iter().all(|w| code.contains(&w.complement())) {
        return false;
    }
    words.iter().enumerate().all(|(i, a)| {
        words[i + 1..].iter().all(|b| {
            let d = a.distance(b);
            d == m / 2 || (d == m && *b == a.complement())
        })
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HadamardCodeReport {
    pub length: usize,
    pub n: usize,
    pub s: u32,
    pub n_prime: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    pub is_linear: bool,
}

/// `m = 2^s * n'` with `n'` odd.
pub fn two_adic_split(m: usize) -> (u32, usize) {
    let s = m.trailing_zeros();
    (s, m >> s)
}

/// Rank, kernel dimension and the length factorization of a Hadamard code
/// of length `4n`. The kernel and rank bounds that hold for every Hadamard
/// code are checked; a violation is reported as an error.
pub fn analyze(code: &BinaryCode) -> Result<HadamardCodeReport, CodesError> {
    let length = code.length();
    if length % 4 != 0 {
        return Err(CodesError::LengthNotMultipleOfFour(length));
    }
    if !is_hadamard_code(code) {
        return Err(CodesError::NotHadamardCode);
    }
    let n = length / 4;
    let (s, n_prime) = two_adic_split(length);
    let rank = gf2::span_rank(code);
    let kernel = gf2::kernel(code)?;
    let kernel_dim = gf2::span_rank(&kernel);
    let report = HadamardCodeReport {
        length,
        n,
        s,
        n_prime,
        rank,
        kernel_dim,
        is_linear: code.is_linear(),
    };
    check_bounds(&report, &kernel)?;
    Ok(report)
}

fn check_bounds(r: &HadamardCodeReport, kernel: &BinaryCode) -> Result<(), CodesError> {
    let fail = |msg: String| Err(CodesError::BoundViolation(msg));
    let (e, u) = (BitVector::zeros(r.length), BitVector::ones(r.length));
    if !kernel.contains(&e) || !kernel.contains(&u) {
        return fail("kernel must contain e and u".into());
    }
    if r.kernel_dim > r.rank {
        return fail(format!("k = {} exceeds r = {}", r.kernel_dim, r.rank));
    }
    if r.is_linear != (r.kernel_dim == r.rank) {
        return fail(format!(
            "linear = {} but k = {}, r = {}",
            r.is_linear, r.kernel_dim, r.rank
        ));
    }
    if !r.is_linear && !(1..r.s as usize).contains(&r.kernel_dim) {
        return fail(format!("nonlinear code with s = {} has k = {}", r.s, r.kernel_dim));
    }
    if r.s >= 3 && r.rank > 2 * r.n {
        return fail(format!("s = {} but r = {} > 2n = {}", r.s, r.rank, 2 * r.n));
    }
    if r.s == 3 && r.rank != 2 * r.n {
        return fail(format!("s = 3 but r = {} != 2n = {}", r.rank, 2 * r.n));
    }
    if r.s == 2 && r.rank < 4 * r.n - 1 {
        return fail(format!("s = 2 but r = {} < 4n - 1 = {}", r.rank, 4 * r.n - 1));
    }
    Ok(())
}

/// Projects every codeword onto `Supp(kappa)` for a nontrivial kernel vector
/// `kappa`; the result is checked to be a Hadamard code of half the length.
pub fn project_code(code: &BinaryCode, kappa: &BitVector) -> Result<BinaryCode, CodesError> {
    if !is_hadamard_code(code) {
        return Err(CodesError::NotHadamardCode);
    }
    if kappa.is_zero() || *kappa == BitVector::ones(kappa.len()) {
        return Err(CodesError::TrivialKernelVector);
    }
    if !code.contains(kappa) || !code.is_fixed_by_translation(kappa) {
        return Err(CodesError::NotInKernel(kappa.to_string()));
    }
    let support = kappa.support();
    let projected = code
        .words()
        .iter()
        .map(|w| gf2::project(w, &support))
        .collect::<Result<Vec<_>, _>>()?;
    let out = BinaryCode::new(support.len(), projected)?;
    let half = code.length() / 2;
    if out.length() != half || !is_hadamard_code(&out) {
        return Err(CodesError::ProjectionNotHadamard(half));
    }
    Ok(out)
}
