//! Circulant Hadamard codes as Hadamard full propelinear codes.
//!
//! A first row `g` (read as an element of F2[x]/(x^N+1)) yields the code
//! `{g + x^i g + ξu : 0 <= i < N, ξ ∈ F2}`. When the circulant matrix of `g`
//! is Hadamard, giving the word `g + x^i g + ξu` the cyclic shift `x^i` as its
//! permutation makes the code full propelinear of type `C_N x C_2u`.
//! Conversely, dividing an order-`N` generator of such a structure by `1 + x`
//! recovers a circulant Hadamard generator.

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::{self, CodesError};
use crate::gf2::{self, BinaryCode, BitVector, Gf2Error, Permutation, KERNEL_SCAN_GUARD};
use crate::hadamard::{self, circulant};
use crate::poly::{Poly, PolyError, RingElement};
use crate::propelinear::{GroupKind, PropelinearError, PropelinearStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CirculantError {
    #[error("order {0} is not a positive multiple of 4")]
    BadOrder(usize),
    #[error("generator must be nonzero")]
    ZeroGenerator,
    #[error("circulant matrix of {0} is not Hadamard")]
    NotHadamardGenerator(String),
    #[error("shifts {0} and {1} give the same codeword")]
    Collision(usize, usize),
    #[error("structure is not of type C_N x C_2u")]
    WrongGroupType,
    #[error("structure is not full propelinear")]
    NotFull,
    #[error("consistency check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Codes(#[from] CodesError),
    #[error(transparent)]
    Propelinear(#[from] PropelinearError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

fn check_order(n: usize) -> Result<(), CirculantError> {
    if n == 0 || n % 4 != 0 {
        return Err(CirculantError::BadOrder(n));
    }
    Ok(())
}

fn integer_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r.saturating_sub(1)..=r + 1).find(|&k| k * k == n)
}

/// True iff the circulant matrix with first row `g` is Hadamard, checked on
/// the full ±1 matrix.
pub fn is_hadamard_generator(g: &RingElement) -> bool {
    hadamard::is_hadamard(&circulant(g.coeffs()).to_signs())
}

/// `{g + x^i g + ξu}` over all `N` shifts.
pub fn circulant_code(g: &RingElement) -> BinaryCode {
    let n = g.modulus_degree();
    let u = BitVector::ones(n);
    let words = (0..n).flat_map(|i| {
        let w = g.coeffs() + g.shift(i as i64).coeffs();
        let wc = &w + &u;
        [w, wc]
    });
    BinaryCode::new(n, words).expect("all words have length N")
}

/// The full propelinear structure with `π(g + x^i g + ξu) = x^i`.
pub fn build_hfp(g: &RingElement) -> Result<PropelinearStructure, CirculantError> {
    let n = g.modulus_degree();
    check_order(n)?;
    if !is_hadamard_generator(g) {
        return Err(CirculantError::NotHadamardGenerator(g.to_string()));
    }
    let u = BitVector::ones(n);
    let mut seen = std::collections::HashMap::new();
    let mut pairs = Vec::with_capacity(2 * n);
    for i in 0..n {
        let w = g.coeffs() + g.shift(i as i64).coeffs();
        for word in [w.clone(), &w + &u] {
            if let Some(j) = seen.insert(word.clone(), i) {
                return Err(CirculantError::Collision(j, i));
            }
            pairs.push((word, Permutation::shift(n, i as i64)));
        }
    }
    let s = PropelinearStructure::new(pairs)?;
    if !s.verify_full()? {
        return Err(CirculantError::Inconsistent("built structure is not full".into()));
    }
    if !codes::is_hadamard_code(s.code()) {
        return Err(CirculantError::Inconsistent("built code is not Hadamard".into()));
    }
    Ok(s)
}

/// A circulant generator recovered from a `C_N x C_2u` structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    /// `a / (1 + x)`, in the relabeled coordinates.
    pub generator: RingElement,
    /// The order-`N` codeword `a` that was divided.
    pub from_word: BitVector,
    /// Coordinate relabeling turning `π_a` into the unit shift `i -> i + 1`;
    /// the identity whenever `π_a` already is that shift.
    pub relabeling: Permutation,
}

/// Recovers `g` with `circulant_code(g) = relabeling(S.code)`.
///
/// Among generators of order `N` whose cyclic group avoids `u`, one whose
/// permutation is already the unit shift is preferred; otherwise coordinates
/// are renumbered along the cycle of the first generator's permutation.
pub fn extract_circulant(s: &PropelinearStructure) -> Result<Extraction, CirculantError> {
    let n = s.length();
    check_order(n)?;
    let gt = s.group_type()?;
    if gt.kind != GroupKind::CyclicTimesC2u {
        return Err(CirculantError::WrongGroupType);
    }
    if !s.verify_full()? {
        return Err(CirculantError::NotFull);
    }
    let u = BitVector::ones(n);
    let unit = Permutation::shift(n, 1);
    let mut chosen = gt.generator.clone().expect("cyclic type carries a generator");
    for w in s.code().words() {
        if s.perm_of(w) == Some(&unit) && s.star_order(w)? == n && !s.powers(w)?.contains(&u) {
            chosen = w.clone();
            break;
        }
    }
    let sigma = s.perm_of(&chosen).expect("generator is a codeword").clone();
    // ρ(c_k) = k + 1 along 1 -> σ(1) -> σ²(1) -> ...
    let mut images = vec![0; n];
    let mut c = 1;
    for k in 1..=n {
        if images[c - 1] != 0 {
            return Err(CirculantError::Inconsistent("generator permutation is not an N-cycle".into()));
        }
        images[c - 1] = k;
        c = sigma.image(c);
    }
    let relabeling = Permutation::from_images(&images)?;
    let a = relabeling.apply(&chosen)?;
    let g = RingElement::new(a.clone()).divide_by_one_plus_x()?;
    if !is_hadamard_generator(&g) {
        return Err(CirculantError::Inconsistent(format!("extracted {g} is not Hadamard")));
    }
    let relabeled = BinaryCode::new(
        n,
        s.code()
            .words()
            .iter()
            .map(|w| relabeling.apply(w))
            .collect::<Result<Vec<_>, _>>()?,
    )?;
    if circulant_code(&g) != relabeled {
        return Err(CirculantError::Inconsistent("extracted code differs".into()));
    }
    Ok(Extraction {
        generator: g,
        from_word: chosen,
        relabeling,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnWeights {
    pub weights: Vec<usize>,
    /// `weight(g) - 2n`, with `N = 4n`.
    pub sigma: i64,
}

/// Column weights of the circulant matrix of `g`, all equal to `weight(g)`.
pub fn column_weight_report(g: &RingElement) -> ColumnWeights {
    let n = g.modulus_degree();
    let weights = circulant(g.coeffs()).column_weights();
    ColumnWeights {
        weights,
        sigma: g.weight() as i64 - (n / 2) as i64,
    }
}

/// Whether `Σ_{i=1}^{N-1} (g + x^i g)` is the all-ones word.
pub fn u_in_span_check(g: &RingElement) -> bool {
    let n = g.modulus_degree();
    let sum = (1..n).fold(BitVector::zeros(n), |acc, i| {
        &acc + &(g.coeffs() + g.shift(i as i64).coeffs())
    });
    sum == BitVector::ones(n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CirculantRank {
    pub rank: usize,
    /// `deg gcd(lift(g), x^N + 1)`.
    pub d: usize,
    /// Dimension of the ideal generated by `(1 + x) g`.
    pub ideal_dim: usize,
    pub u_in_ideal: bool,
}

/// Rank of `circulant_code(g)` from the ring structure alone.
///
/// The words `(1 + x^i) g` span the ideal generated by `(1 + x) g`, whose
/// dimension is `N - deg gcd((1 + x) g, x^N + 1)`; the code adds `u`, which
/// contributes one more dimension unless that gcd divides `u`. For odd-weight
/// `g` with `u` in the ideal this is `N - 1 - d`.
pub fn rank_of_circulant_code(g: &RingElement) -> Result<CirculantRank, CirculantError> {
    let n = g.modulus_degree();
    let d = g.gcd_with_modulus()?.degree_d;
    let modulus = Poly::x_n_plus_one(n);
    let h = g.mul(&RingElement::new(
        BitVector::from_bits((0..n).map(|i| i < 2)).expect("n >= 1"),
    ))?;
    let ideal_gen = h.lift().gcd(&modulus);
    let ideal_dim = n - ideal_gen.degree().expect("gcd with x^N + 1 is nonzero");
    let u_in_ideal = ideal_gen.divides(&RingElement::all_ones(n).lift());
    let rank = ideal_dim + usize::from(!u_in_ideal);
    if n >= 2 && g.weight() % 2 == 1 && u_in_ideal && rank != n - 1 - d {
        return Err(CirculantError::Inconsistent(format!(
            "rank {rank} != N - 1 - d = {}",
            n - 1 - d
        )));
    }
    Ok(CirculantRank {
        rank,
        d,
        ideal_dim,
        u_in_ideal,
    })
}

/// True iff `N/4` is an odd perfect square.
pub fn turyn_feasible(order: usize) -> Result<bool, CirculantError> {
    check_order(order)?;
    let n = order / 4;
    Ok(n % 2 == 1 && integer_sqrt(n).is_some())
}

/// Column weights `2n ± √n` allowed for a circulant Hadamard matrix of
/// order `4n`; empty when `n` is not a perfect square.
pub fn admissible_weights(order: usize) -> Vec<usize> {
    let n = order / 4;
    match integer_sqrt(n) {
        Some(r) if order % 4 == 0 && n > 0 => {
            let mut w = vec![2 * n - r, 2 * n + r];
            w.dedup();
            w
        }
        _ => Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CirculantAnalysis {
    pub generator: BitVector,
    pub order: usize,
    pub is_hadamard: bool,
    pub column_weight: usize,
    pub sigma: i64,
    pub rank_gcd: usize,
    pub rank_elim: usize,
    /// `None` when the kernel computation was skipped.
    pub kernel_dim: Option<usize>,
    /// Label of the built structure's group type; `None` unless Hadamard.
    pub group_type: Option<String>,
}

/// Everything known about the circulant code of `g`, with both rank routes
/// cross-checked and the structural facts of circulant Hadamard codes
/// asserted whenever the matrix is Hadamard.
pub fn full_analysis(g: &RingElement) -> Result<CirculantAnalysis, CirculantError> {
    let order = g.modulus_degree();
    check_order(order)?;
    if g.is_zero() {
        return Err(CirculantError::ZeroGenerator);
    }
    let n = order / 4;
    let is_hadamard = is_hadamard_generator(g);
    let columns = column_weight_report(g);
    let column_weight = columns.weights[0];
    if columns.weights.iter().any(|&w| w != column_weight) {
        return Err(CirculantError::Inconsistent("unequal circulant column weights".into()));
    }
    let rank_gcd = rank_of_circulant_code(g)?.rank;
    let code = circulant_code(g);
    let rank_elim = gf2::span_rank(&code);
    if rank_gcd != rank_elim {
        return Err(CirculantError::Inconsistent(format!(
            "rank by gcd {rank_gcd} != rank by elimination {rank_elim}"
        )));
    }

    let mut analysis = CirculantAnalysis {
        generator: g.coeffs().clone(),
        order,
        is_hadamard,
        column_weight,
        sigma: columns.sigma,
        rank_gcd,
        rank_elim,
        kernel_dim: None,
        group_type: None,
    };

    if !is_hadamard {
        if order <= KERNEL_SCAN_GUARD {
            analysis.kernel_dim = Some(gf2::kernel_dim(&code)?);
        } else {
            warn!("skipping kernel of non-Hadamard circulant code of length {order}");
        }
        return Ok(analysis);
    }

    let root = integer_sqrt(n)
        .ok_or_else(|| CirculantError::Inconsistent(format!("Hadamard circulant with n = {n} not a square")))?;
    if columns.sigma.unsigned_abs() as usize != root {
        return Err(CirculantError::Inconsistent(format!(
            "column weight {column_weight} is not 2n ± √n"
        )));
    }
    let report = codes::analyze(&code)?;
    if !report.is_linear && (report.kernel_dim != 1 || report.rank != order - 1) {
        return Err(CirculantError::Inconsistent(format!(
            "nonlinear circulant Hadamard code with k = {}, r = {}",
            report.kernel_dim, report.rank
        )));
    }
    let structure = build_hfp(g)?;
    analysis.kernel_dim = Some(report.kernel_dim);
    analysis.group_type = Some(structure.group_type()?.label());
    Ok(analysis)
}
