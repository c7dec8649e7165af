//! A length-12 HFP code built from a Hadamard subset of the dicyclic group
//! of order 24. Its group is not `C_12 x C_2u`: the element `a` has order
//! 12, but `u` lies in the cyclic group it generates.

use hfp_core::circulant::{extract_circulant, CirculantError};
use hfp_core::codes::{analyze, is_hadamard_code};
use hfp_core::gf2::kernel;
use hfp_core::propelinear::{GroupKind, PropelinearStructure};
use hfp_core::{BitVector, Permutation};

type Elem = (usize, usize);

/// `a^i b^j` with `a^12 = 1`, `b^2 = a^6`, `b a = a^-1 b`.
fn mul((i, j): Elem, (k, l): Elem) -> Elem {
    if j == 0 {
        ((i + k) % 12, l)
    } else {
        let i2 = (i + 12 - k) % 12;
        if l == 0 {
            (i2, 1)
        } else {
            ((i2 + 6) % 12, 0)
        }
    }
}

const Z: Elem = (6, 0);

const SUBSET: [Elem; 12] = [
    (0, 0),
    (1, 0),
    (8, 0),
    (3, 0),
    (4, 0),
    (5, 0),
    (0, 1),
    (7, 1),
    (2, 1),
    (3, 1),
    (4, 1),
    (5, 1),
];

fn elements() -> Vec<Elem> {
    (0..2).flat_map(|j| (0..12).map(move |i| (i, j))).collect()
}

/// `h d = π_h(d) z^ξ` with `ξ` the entry of `c_h` at position `π_h(d)`.
fn codeword(h: Elem) -> (BitVector, Permutation) {
    let mut word = BitVector::zeros(12);
    let mut images = vec![0; 12];
    for (p, &d) in SUBSET.iter().enumerate() {
        let hd = mul(h, d);
        let (q, xi) = match SUBSET.iter().position(|&t| t == hd) {
            Some(q) => (q, false),
            None => {
                let t = mul(hd, Z);
                (SUBSET.iter().position(|&s| s == t).expect("transversal"), true)
            }
        };
        images[p] = q + 1;
        word.set(q + 1, xi);
    }
    (word, Permutation::from_images(&images).unwrap())
}

fn structure() -> PropelinearStructure {
    PropelinearStructure::new(elements().into_iter().map(codeword).collect()).unwrap()
}

#[test]
fn subset_is_a_hadamard_subset() {
    for h in elements().into_iter().filter(|&h| h != (0, 0) && h != Z) {
        let shifted: Vec<Elem> = SUBSET.iter().map(|&d| mul(h, d)).collect();
        let common = shifted.iter().filter(|x| SUBSET.contains(x)).count();
        assert_eq!(common, 6, "h = {h:?}");
    }
}

#[test]
fn codeword_map_is_a_homomorphism() {
    let s = structure();
    for h in elements() {
        for k in elements() {
            let (ch, ph) = codeword(h);
            let (ck, pk) = codeword(k);
            let (chk, phk) = codeword(mul(h, k));
            assert_eq!(s.star(&ch, &ck).unwrap(), chk);
            assert_eq!(ph.compose(&pk), phk);
        }
    }
    assert_eq!(codeword(Z), (BitVector::ones(12), Permutation::identity(12)));
}

#[test]
fn hfp_code_of_other_type() {
    let s = structure();
    assert_eq!(s.code().size(), 24);
    assert!(is_hadamard_code(s.code()));
    assert!(s.verify_propelinear());
    assert!(s.verify_full().unwrap());
    let gt = s.group_type().unwrap();
    assert_eq!(gt.kind, GroupKind::Other);
    assert_eq!(gt.label(), "other");

    let a = codeword((1, 0)).0;
    assert_eq!(s.star_order(&a).unwrap(), 12);
    assert!(s.powers(&a).unwrap().contains(&BitVector::ones(12)));
    assert!(matches!(extract_circulant(&s), Err(CirculantError::WrongGroupType)));
}

#[test]
fn kernel_and_rank() {
    let s = structure();
    let k = kernel(s.code()).unwrap();
    assert_eq!(k.words(), [BitVector::zeros(12), BitVector::ones(12)]);
    let r = analyze(s.code()).unwrap();
    assert_eq!((r.rank, r.kernel_dim, r.is_linear), (11, 1, false));
    assert!(s.kernel_automorphism_check().unwrap());
}

#[test]
fn file_round_trip() {
    let s = structure();
    let back = PropelinearStructure::from_json(&s.to_json()).unwrap();
    assert_eq!(back.code(), s.code());
    assert!(back.pairs().eq(s.pairs()));
}
