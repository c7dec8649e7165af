//! Propelinear structures on binary codes.
//!
//! A structure attaches a coordinate permutation `π_x` to every codeword and
//! defines `x * y = x + π_x(y)`. It is propelinear when `*` closes the code
//! and `π_x π_y = π_{x*y}`; then `(C, *)` is a group with identity `e` and
//! inverses `x⁻¹ = π_x⁻¹(x)`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{self, BinaryCode, BitVector, Gf2Error, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropelinearError {
    #[error("{0} is not a codeword")]
    NotCodeword(String),
    #[error("structure is not propelinear")]
    NotPropelinear,
    #[error("the zero word must be a codeword with the identity permutation")]
    BadIdentity,
    #[error("{0} codewords but {1} permutations")]
    ArityMismatch(usize, usize),
    #[error("structure needs at least one codeword")]
    Empty,
    #[error("duplicate codeword {0}")]
    DuplicateWord(String),
    #[error("structure file: {0}")]
    File(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// A code with one permutation per codeword, stored extensionally.
#[derive(Clone, PartialEq, Eq)]
pub struct PropelinearStructure {
    code: BinaryCode,
    // parallel to code.words()
    perms: Vec<Permutation>,
    index: HashMap<BitVector, usize>,
}

impl PropelinearStructure {
    pub fn new(pairs: Vec<(BitVector, Permutation)>) -> Result<Self, PropelinearError> {
        let length = pairs.first().ok_or(PropelinearError::Empty)?.0.len();
        let mut by_word = HashMap::new();
        for (w, p) in pairs {
            if w.len() != length {
                return Err(Gf2Error::LengthMismatch(length, w.len()).into());
            }
            if p.degree() != length {
                return Err(Gf2Error::LengthMismatch(length, p.degree()).into());
            }
            if by_word.contains_key(&w) {
                return Err(PropelinearError::DuplicateWord(w.to_string()));
            }
            by_word.insert(w, p);
        }
        let code = BinaryCode::new(length, by_word.keys().cloned())?;
        let perms: Vec<Permutation> = code.words().iter().map(|w| by_word[w].clone()).collect();
        let index = code
            .words()
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let s = PropelinearStructure { code, perms, index };
        match s.perm_of(&BitVector::zeros(length)) {
            Some(p) if p.is_identity() => Ok(s),
            _ => Err(PropelinearError::BadIdentity),
        }
    }

    pub fn code(&self) -> &BinaryCode {
        &self.code
    }

    pub fn length(&self) -> usize {
        self.code.length()
    }

    pub fn perm_of(&self, x: &BitVector) -> Option<&Permutation> {
        self.index.get(x).map(|&i| &self.perms[i])
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&BitVector, &Permutation)> {
        self.code.words().iter().zip(&self.perms)
    }

    /// `x * y = x + π_x(y)` for a codeword `x` and any vector `y`.
    pub fn star(&self, x: &BitVector, y: &BitVector) -> Result<BitVector, PropelinearError> {
        let p = self
            .perm_of(x)
            .ok_or_else(|| PropelinearError::NotCodeword(x.to_string()))?;
        Ok(x.checked_add(&p.apply(y)?)?)
    }

    /// `x⁻¹ = π_x⁻¹(x)`.
    pub fn inverse(&self, x: &BitVector) -> Result<BitVector, PropelinearError> {
        let p = self
            .perm_of(x)
            .ok_or_else(|| PropelinearError::NotCodeword(x.to_string()))?;
        Ok(p.inverse().apply(x)?)
    }

    /// Both propelinear conditions over all pairs of codewords.
    pub fn verify_propelinear(&self) -> bool {
        self.pairs().all(|(x, px)| {
            self.pairs().all(|(y, py)| {
                let z = x + &px.apply(y).expect("degrees checked at construction");
                match self.perm_of(&z) {
                    Some(pz) => px.compose(py) == *pz,
                    None => false,
                }
            })
        })
    }

    fn require_propelinear(&self) -> Result<(), PropelinearError> {
        if self.verify_propelinear() {
            Ok(())
        } else {
            Err(PropelinearError::NotPropelinear)
        }
    }

    /// `π_e = π_u = I` and every other permutation is fixed-point-free.
    pub fn verify_full(&self) -> Result<bool, PropelinearError> {
        self.require_propelinear()?;
        let n = self.length();
        let u = BitVector::ones(n);
        if !self.perm_of(&u).is_some_and(|p| p.is_identity()) {
            return Ok(false);
        }
        Ok(self
            .pairs()
            .filter(|(w, _)| !w.is_zero() && **w != u)
            .all(|(_, p)| p.fixed_points().is_empty()))
    }

    /// Order of `x` in `(C, *)`, found by iterating `x * (x * ...)` from `e`
    /// for at most `|C|` steps.
    pub fn star_order(&self, x: &BitVector) -> Result<usize, PropelinearError> {
        let mut power = x.clone();
        for k in 1..=self.code.size() {
            if power.is_zero() {
                return Ok(k);
            }
            power = self.star(x, &power)?;
            if !self.code.contains(&power) {
                return Err(PropelinearError::NotPropelinear);
            }
        }
        Err(PropelinearError::NotPropelinear)
    }

    /// The cyclic subgroup `⟨x⟩`, starting with `x` and ending with `e`.
    pub fn powers(&self, x: &BitVector) -> Result<Vec<BitVector>, PropelinearError> {
        let order = self.star_order(x)?;
        let mut out = Vec::with_capacity(order);
        let mut power = x.clone();
        for _ in 0..order {
            out.push(power.clone());
            power = self.star(x, &power)?;
        }
        Ok(out)
    }

    /// Looks for a generator of `*`-order equal to the code length whose
    /// cyclic group avoids `u`, trying codewords in ascending order.
    pub fn group_type(&self) -> Result<GroupType, PropelinearError> {
        self.require_propelinear()?;
        let n = self.length();
        let u = BitVector::ones(n);
        let mut best: Option<(usize, &BitVector)> = None;
        for w in self.code.words() {
            let order = self.star_order(w)?;
            if order == n && !self.powers(w)?.contains(&u) {
                return Ok(GroupType {
                    kind: GroupKind::CyclicTimesC2u,
                    generator: Some(w.clone()),
                    order_of_generator: order,
                });
            }
            if best.is_none_or(|(o, _)| order > o) {
                best = Some((order, w));
            }
        }
        let (order, w) = best.expect("structures are nonempty");
        if order <= 2 {
            Ok(GroupType {
                kind: GroupKind::ElementaryAbelian,
                generator: None,
                order_of_generator: order,
            })
        } else {
            Ok(GroupType {
                kind: GroupKind::Other,
                generator: Some(w.clone()),
                order_of_generator: order,
            })
        }
    }

    /// For every codeword `x`: `x ∈ K(C)` iff `π_x` preserves the code; and for
    /// every codeword `c`: `c * K(C) = c + K(C)`.
    pub fn kernel_automorphism_check(&self) -> Result<bool, PropelinearError> {
        self.require_propelinear()?;
        let kernel = gf2::kernel(&self.code)?;
        for (x, p) in self.pairs() {
            let in_kernel = kernel.contains(x);
            let automorphism = self
                .code
                .words()
                .iter()
                .all(|c| self.code.contains(&p.apply(c).expect("degree checked")));
            if in_kernel != automorphism {
                return Ok(false);
            }
        }
        for c in self.code.words() {
            let starred: HashSet<BitVector> = kernel
                .words()
                .iter()
                .map(|k| self.star(c, k))
                .collect::<Result<_, _>>()?;
            let translated: HashSet<BitVector> = kernel.words().iter().map(|k| c + k).collect();
            if starred != translated {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_file(&self) -> StructureFile {
        StructureFile {
            words: self.code.words().to_vec(),
            perms: self.perms.iter().map(|p| p.images()).collect(),
        }
    }

    pub fn from_file(file: &StructureFile) -> Result<Self, PropelinearError> {
        if file.words.len() != file.perms.len() {
            return Err(PropelinearError::ArityMismatch(file.words.len(), file.perms.len()));
        }
        let pairs = file
            .words
            .iter()
            .zip(&file.perms)
            .map(|(w, p)| Ok((w.clone(), Permutation::from_images(p)?)))
            .collect::<Result<Vec<_>, PropelinearError>>()?;
        Self::new(pairs)
    }

    pub fn from_json(text: &str) -> Result<Self, PropelinearError> {
        let file: StructureFile =
            serde_json::from_str(text).map_err(|e| PropelinearError::File(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("structure serializes")
    }
}

impl fmt::Debug for PropelinearStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.pairs()).finish()
    }
}

/// On-disk form: parallel arrays of codewords and 1-indexed image lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFile {
    pub words: Vec<BitVector>,
    pub perms: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    CyclicTimesC2u,
    ElementaryAbelian,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupType {
    pub kind: GroupKind,
    pub generator: Option<BitVector>,
    pub order_of_generator: usize,
}

impl GroupType {
    /// `C{4n}xC2u`, `elementary_abelian`, or `other`.
    pub fn label(&self) -> String {
        match self.kind {
            GroupKind::CyclicTimesC2u => format!("C{}xC2u", self.order_of_generator),
            GroupKind::ElementaryAbelian => "elementary_abelian".into(),
            GroupKind::Other => "other".into(),
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}
