//! Trace-zero symmetric matrices as harmonic quadratic forms: exact
//! isotropic-rank classification, normal-sequence inputs in Gantmacher form,
//! explicit block decompositions, and the diagonal merge for nondegenerate
//! diagonal parts.
//!
//! Every emitted decomposition is rebuilt and re-verified against the block
//! matrix at construction time, so a transcription slip in the coefficient
//! tables fails loudly.

use crate::apolarity::{LinearForm, QuadraticFormSpec};
use crate::decompose::IsotropicDecomposition;
use crate::field::{Field, FieldError, GaussQ, Rat, TowerElem, TowerField};
use crate::matrix::MatrixExact;
use crate::poly::MultiPoly;
use num::Zero;

#[derive(thiserror::Error, Debug)]
pub enum QuadricsError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("trace is nonzero")]
    TraceNonzero,
    #[error("block size must be >= 1")]
    EmptyBlock,
    #[error("unsupported normal shape: {0}")]
    UnsupportedNormalShape(String),
    #[error("matrix is not orthogonal")]
    NotOrthogonal,
    #[error("decomposition failed verification: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A symmetric matrix with zero trace, the avatar of a harmonic quadric.
#[derive(Clone, Debug)]
pub struct TraceZeroSym {
    pub field: TowerField,
    pub matrix: MatrixExact<TowerField>,
}

impl TraceZeroSym {
    pub fn new(field: TowerField, matrix: MatrixExact<TowerField>) -> Result<Self, QuadricsError> {
        if !matrix.is_symmetric() {
            return Err(QuadricsError::NotSymmetric);
        }
        let mut tr = field.zero();
        for j in 0..matrix.rows {
            tr = field.add(&tr, matrix.at(j, j));
        }
        if !field.is_zero(&tr) {
            return Err(QuadricsError::TraceNonzero);
        }
        Ok(TraceZeroSym { field, matrix })
    }

    pub fn size(&self) -> usize {
        self.matrix.rows
    }

    /// The quadratic form Σ a_ii x_i² + 2 Σ_{i<j} a_ij x_i x_j.
    pub fn quadratic_form(&self) -> MultiPoly<TowerField> {
        let f = &self.field;
        let n1 = self.size();
        let mut terms = Vec::new();
        for i in 0..n1 {
            for j in i..n1 {
                let a = self.matrix.at(i, j);
                if f.is_zero(a) {
                    continue;
                }
                let mut e = vec![0u8; n1];
                e[i] += 1;
                e[j] += 1;
                let c = if i == j { a.clone() } else { f.add(a, a) };
                terms.push((e, c));
            }
        }
        MultiPoly::from_terms(f.clone(), n1, 2, terms).unwrap()
    }
}

/// A Gantmacher normal sequence: (eigenvalue, block size) pairs subject to
/// the trace constraint Σ λ_j s_j = 0.
#[derive(Clone, Debug)]
pub struct NormalSequence {
    pub field: TowerField,
    pub blocks: Vec<(TowerElem, usize)>,
}

impl NormalSequence {
    pub fn new(
        field: TowerField,
        blocks: Vec<(TowerElem, usize)>,
    ) -> Result<Self, QuadricsError> {
        if blocks.iter().any(|(_, s)| *s == 0) {
            return Err(QuadricsError::EmptyBlock);
        }
        let mut tr = field.zero();
        for (l, s) in &blocks {
            let sz = field.from_i64(*s as i64);
            tr = field.add(&tr, &field.mul(l, &sz));
        }
        if !field.is_zero(&tr) {
            return Err(QuadricsError::TraceNonzero);
        }
        Ok(NormalSequence { field, blocks })
    }

    pub fn total_size(&self) -> usize {
        self.blocks.iter().map(|(_, s)| s).sum()
    }

    /// rank = Σ s_j over nonzero eigenvalues + Σ (s_j − 1) over zero ones.
    pub fn rank(&self) -> usize {
        self.blocks
            .iter()
            .map(|(l, s)| if self.field.is_zero(l) { s - 1 } else { *s })
            .sum()
    }

    /// The exceptional family: nilpotent with a single size-3 block and no
    /// larger degenerate block (equivalently rk H² = 1).
    pub fn is_exceptional(&self) -> bool {
        let all_zero = self.blocks.iter().all(|(l, _)| self.field.is_zero(l));
        let threes = self.blocks.iter().filter(|(_, s)| *s == 3).count();
        let bigger = self.blocks.iter().filter(|(_, s)| *s >= 4).count();
        all_zero && threes == 1 && bigger == 0
    }

    pub fn expected_irk(&self) -> usize {
        if self.is_exceptional() {
            self.rank() + 2
        } else {
            self.rank()
        }
    }
}

/// The canonical block S_s(λ) = λI + ½J + (i/2)K with J the tridiagonal
/// band of ones and K carrying +1 on the anti-diagonal j+k = s−2 and −1 on
/// j+k = s (inferred from the explicit size-2 and size-3 displays and
/// validated by the determinant and rank identities below).
pub fn canonical_block(field: &TowerField, lambda: &TowerElem, s: usize) -> MatrixExact<TowerField> {
    let half = field.from_gauss(GaussQ::new(Rat::new(1.into(), 2.into()), Rat::zero()));
    let ihalf = field.from_gauss(GaussQ::new(Rat::zero(), Rat::new(1.into(), 2.into())));
    MatrixExact::from_fn(field.clone(), s, s, |a, b| {
        let mut v = field.zero();
        if a == b {
            v = field.add(&v, lambda);
        }
        if a.abs_diff(b) == 1 {
            v = field.add(&v, &half);
        }
        if s >= 2 && a + b == s - 2 {
            v = field.add(&v, &ihalf);
        }
        if a + b == s {
            v = field.sub(&v, &ihalf);
        }
        v
    })
}

/// The block-diagonal matrix of a normal sequence, with the per-block
/// identities det S_s(λ) = λ^s (each block is orthogonally similar to the
/// Jordan block with eigenvalue λ) and rank S_s(0) = s−1 asserted.
pub fn normal_blocks_matrix(seq: &NormalSequence) -> TraceZeroSym {
    let f = &seq.field;
    let n1 = seq.total_size();
    let mut m = MatrixExact::zeros(f.clone(), n1, n1);
    let mut off = 0usize;
    for (lambda, s) in &seq.blocks {
        let blk = canonical_block(f, lambda, *s);
        let mut expect = f.one();
        for _ in 0..*s {
            expect = f.mul(&expect, lambda);
        }
        assert_eq!(blk.det(), expect, "block determinant identity");
        if f.is_zero(lambda) {
            assert_eq!(blk.rank(), s - 1, "rank of S_s(0)");
        }
        for a in 0..*s {
            for b in 0..*s {
                *m.at_mut(off + a, off + b) = blk.at(a, b).clone();
            }
        }
        off += s;
    }
    TraceZeroSym::new(f.clone(), m).expect("blocks are symmetric and trace cancels")
}

/// Rank, nilpotency data, and the isotropic rank of a trace-zero matrix:
/// irk = rank + 2 exactly when the matrix is nilpotent with rk H² = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub rank: usize,
    pub rank_sq: usize,
    pub nilpotent: bool,
    pub irk: usize,
}

pub fn classify_irk(h: &TraceZeroSym) -> Classification {
    let rank = h.matrix.rank();
    let sq = h.matrix.mul(&h.matrix);
    let rank_sq = sq.rank();
    let n1 = h.size();
    let mut pow = sq;
    // H^(n+1) = 0 decides nilpotency exactly.
    let mut e = 2usize;
    while e < n1 + 1 {
        pow = pow.mul(&h.matrix);
        e += 1;
    }
    let nilpotent = (0..n1).all(|i| (0..n1).all(|j| h.field.is_zero(pow.at(i, j))));
    let irk = if nilpotent && rank_sq == 1 {
        rank + 2
    } else {
        rank
    };
    Classification {
        rank,
        rank_sq,
        nilpotent,
        irk,
    }
}

/// True iff QᵀHQ is hollow (zero diagonal); Q must be orthogonal.
pub fn hollow_check(
    h: &TraceZeroSym,
    q: &MatrixExact<TowerField>,
) -> Result<bool, QuadricsError> {
    let f = &h.field;
    let qtq = q.transpose().mul(q);
    let id = MatrixExact::identity(f.clone(), q.rows);
    if qtq != id {
        return Err(QuadricsError::NotOrthogonal);
    }
    let c = q.transpose().mul(&h.matrix).mul(q);
    Ok((0..c.rows).all(|j| f.is_zero(c.at(j, j))))
}

// ---------------------------------------------------------------------------
// Explicit decompositions.
// ---------------------------------------------------------------------------

/// Terms of a block decomposition in the block's local coordinates, plus the
/// indices of a designated non-orthogonal pair of points when one exists.
struct BlockTerms {
    terms: Vec<(TowerElem, Vec<TowerElem>)>,
    nonorthogonal_pair: Option<(usize, usize)>,
}

fn gq(field: &TowerField, re: (i64, i64), im: (i64, i64)) -> TowerElem {
    field.from_gauss(GaussQ::new(
        Rat::new(re.0.into(), re.1.into()),
        Rat::new(im.0.into(), im.1.into()),
    ))
}

/// Builds a local vector Σ c_j x_{idx_j} of the given length.
fn lvec(field: &TowerField, len: usize, entries: &[(usize, TowerElem)]) -> Vec<TowerElem> {
    let mut v = vec![field.zero(); len];
    for (j, c) in entries {
        v[*j] = field.add(&v[*j], c);
    }
    v
}

/// S_2(0): the single term (i/2)(x_0 − i x_1)².
fn s2_terms(f: &TowerField) -> BlockTerms {
    let i = f.i();
    BlockTerms {
        terms: vec![(
            gq(f, (0, 1), (1, 2)),
            lvec(f, 2, &[(0, f.one()), (1, f.neg(&i))]),
        )],
        nonorthogonal_pair: None,
    }
}

/// S_{2(k+1)}(0), k ≥ 1: the even-block decomposition of size 2k+1.
fn even_block_terms(f: &TowerField, size: usize) -> BlockTerms {
    assert!(size >= 4 && size % 2 == 0);
    let k = size / 2 - 1;
    let i = f.i();
    let one = f.one();
    let mut terms = Vec::new();
    // (i/2)(x_k − i x_{k+1})²
    terms.push((
        gq(f, (0, 1), (1, 2)),
        lvec(f, size, &[(k, one.clone()), (k + 1, f.neg(&i))]),
    ));
    // ¼[(B_j + C_j)² − (B_j − C_j)²], B_j = x_{k−j−1} − i x_{k+j+2},
    // C_j = x_{k−j} + i x_{k+j+1}.
    for j in 0..k {
        let b = [(k - j - 1, one.clone()), (k + j + 2, f.neg(&i))];
        let c = [(k - j, one.clone()), (k + j + 1, i.clone())];
        let plus = lvec(f, size, &[b.as_slice(), c.as_slice()].concat());
        let minus = lvec(
            f,
            size,
            &[
                b.as_slice(),
                &[(k - j, f.neg(&one)), (k + j + 1, f.neg(&i))],
            ]
            .concat(),
        );
        terms.push((gq(f, (1, 4), (0, 1)), plus));
        terms.push((gq(f, (-1, 4), (0, 1)), minus));
    }
    BlockTerms {
        // The core square and the first frame's plus-term pair nontrivially.
        nonorthogonal_pair: Some((0, 1)),
        terms,
    }
}

/// S_{2k+5}(0), k ≥ 0: the odd-block decomposition of size 2(k+2).
fn odd_block_terms(f: &TowerField, size: usize) -> BlockTerms {
    assert!(size >= 5 && size % 2 == 1);
    let k = (size - 5) / 2;
    let i = f.i();
    let one = f.one();
    let onepi = f.add(&one, &i); // 1+i
    let a = [(k, one.clone()), (k + 4, f.neg(&i))]; // A = x_k − i x_{k+4}
    let mut terms = Vec::new();
    // (1+i)/8 [(A + (1+i)(x_{k+2} − i x_{k+1}))² − (A + (1+i)(x_{k+2} + i x_{k+1}))²]
    let w1 = lvec(
        f,
        size,
        &[
            a.as_slice(),
            &[(k + 2, onepi.clone()), (k + 1, f.mul(&onepi, &f.neg(&i)))],
        ]
        .concat(),
    );
    let w2 = lvec(
        f,
        size,
        &[
            a.as_slice(),
            &[(k + 2, onepi.clone()), (k + 1, f.mul(&onepi, &i))],
        ]
        .concat(),
    );
    terms.push((f.mul(&onepi, &gq(f, (1, 8), (0, 1))), w1));
    terms.push((f.mul(&onepi, &gq(f, (-1, 8), (0, 1))), w2));
    // (1−i)/8 [(A − (1+i)(x_{k+2} − i x_{k+3}))² − (A − (1+i)(x_{k+2} + i x_{k+3}))²]
    let onemi = f.sub(&one, &i);
    let w3 = lvec(
        f,
        size,
        &[
            a.as_slice(),
            &[
                (k + 2, f.neg(&onepi)),
                (k + 3, f.mul(&onepi, &i)),
            ],
        ]
        .concat(),
    );
    let w4 = lvec(
        f,
        size,
        &[
            a.as_slice(),
            &[
                (k + 2, f.neg(&onepi)),
                (k + 3, f.mul(&onepi, &f.neg(&i))),
            ],
        ]
        .concat(),
    );
    terms.push((f.mul(&onemi, &gq(f, (1, 8), (0, 1))), w3));
    terms.push((f.mul(&onemi, &gq(f, (-1, 8), (0, 1))), w4));
    // ¼ Σ_{j=1}^{k} [(B_j + C_j)² − (B_j − C_j)²],
    // B_j = x_{k−j} − i x_{k+j+4}, C_j = x_{k−j+1} + i x_{k+j+3}.
    for j in 1..=k {
        let b = [(k - j, one.clone()), (k + j + 4, f.neg(&i))];
        let plus = lvec(
            f,
            size,
            &[b.as_slice(), &[(k - j + 1, one.clone()), (k + j + 3, i.clone())]].concat(),
        );
        let minus = lvec(
            f,
            size,
            &[
                b.as_slice(),
                &[(k - j + 1, f.neg(&one)), (k + j + 3, f.neg(&i))],
            ]
            .concat(),
        );
        terms.push((gq(f, (1, 4), (0, 1)), plus));
        terms.push((gq(f, (-1, 4), (0, 1)), minus));
    }
    BlockTerms {
        nonorthogonal_pair: Some((0, 1)),
        terms,
    }
}

/// S_3(0) standing alone: the size-4 decomposition transported from the
/// rank-4 ternary example; (1+i)(x_0 − i x_2)x_1 with coefficients
/// (1+i)·(±1/4, ±i/4).
fn s3_terms(f: &TowerField) -> BlockTerms {
    let i = f.i();
    let onepi = f.add(&f.one(), &i);
    let pts: Vec<Vec<TowerElem>> = vec![
        lvec(f, 3, &[(1, f.one()), (2, f.neg(&i))]),
        lvec(f, 3, &[(0, f.from_i64(-1)), (1, i.clone())]),
        lvec(f, 3, &[(1, f.neg(&f.one())), (2, f.neg(&i))]),
        lvec(f, 3, &[(0, f.from_i64(-1)), (1, f.neg(&i))]),
    ];
    let coeffs = vec![
        f.mul(&onepi, &gq(f, (1, 4), (0, 1))),
        f.mul(&onepi, &gq(f, (0, 1), (1, 4))),
        f.mul(&onepi, &gq(f, (-1, 4), (0, 1))),
        f.mul(&onepi, &gq(f, (0, 1), (-1, 4))),
    ];
    BlockTerms {
        terms: coeffs.into_iter().zip(pts).collect(),
        nonorthogonal_pair: None,
    }
}

/// S_3(0)^{⊕2}: the explicit size-4 decomposition over six coordinates.
fn s3_pair_terms(f: &TowerField) -> BlockTerms {
    let i = f.i();
    let one = f.one();
    let m = |c: i64| f.from_i64(c);
    let mi = |c: i64| f.mul(&i, &m(c));
    let p1 = vec![m(1), m(1), mi(-1), mi(-1), mi(1), m(-1)];
    let p2 = vec![m(1), m(-1), mi(-1), mi(-1), mi(-1), m(-1)];
    let p3 = vec![m(1), mi(1), mi(-1), mi(1), m(1), m(1)];
    let p4 = vec![m(1), mi(-1), mi(-1), mi(1), m(-1), m(1)];
    let onepi = f.add(&one, &i);
    let onemi = f.sub(&one, &i);
    let e8 = gq(f, (1, 8), (0, 1));
    let me8 = gq(f, (-1, 8), (0, 1));
    BlockTerms {
        terms: vec![
            (f.mul(&onepi, &e8), p1),
            (f.mul(&onepi, &me8), p2),
            (f.mul(&onemi, &e8), p3),
            (f.mul(&onemi, &me8), p4),
        ],
        nonorthogonal_pair: None,
    }
}

/// S_3(0)^{⊕3}: the explicit size-6 decomposition over nine coordinates.
fn s3_triple_terms(f: &TowerField) -> BlockTerms {
    let i = f.i();
    let m = |c: i64| f.from_i64(c);
    let mi = |c: i64| f.mul(&i, &m(c));
    let z = || f.zero();
    let p1 = vec![m(1), m(1), mi(-1), m(-1), mi(1), mi(1), mi(-1), z(), m(-1)];
    let p2 = vec![m(1), m(-1), mi(-1), m(-1), mi(-1), mi(1), mi(-1), z(), m(-1)];
    let p3 = vec![m(1), z(), mi(-1), mi(1), m(1), m(1), mi(-1), mi(1), m(-1)];
    let p4 = vec![m(1), z(), mi(-1), mi(1), m(-1), m(1), mi(-1), mi(-1), m(-1)];
    let p5 = vec![m(1), mi(1), mi(-1), mi(1), z(), m(1), m(-1), m(1), mi(1)];
    let p6 = vec![m(1), mi(-1), mi(-1), mi(1), z(), m(1), m(-1), m(-1), mi(1)];
    let quarter = gq(f, (1, 4), (0, 1));
    let c = |x: TowerElem| f.mul(&quarter, &x);
    BlockTerms {
        terms: vec![
            (c(mi(1)), p1),
            (c(mi(-1)), p2),
            (c(m(1)), p3),
            (c(m(-1)), p4),
            (c(mi(-1)), p5),
            (c(mi(1)), p6),
        ],
        nonorthogonal_pair: None,
    }
}

/// Verifies that local block terms recompose the block's quadratic form.
fn check_block(f: &TowerField, terms: &BlockTerms, lambda: &TowerElem, s: usize) -> bool {
    let blk = canonical_block(f, lambda, s);
    let tz = TraceZeroSym::new(f.clone(), blk).unwrap();
    let target = tz.quadratic_form();
    let mut acc = MultiPoly::zero(f.clone(), s, 2);
    for (c, v) in &terms.terms {
        let lp = MultiPoly::linear(f.clone(), v);
        acc = acc.add(&lp.mul(&lp).unwrap().scale(c)).unwrap();
    }
    acc == target
}

// ---------------------------------------------------------------------------
// Diagonal merge.
// ---------------------------------------------------------------------------

/// State entry: a coefficient λ on a unit vector, vectors pairwise
/// orthogonal for the standard pairing.
type MergeEntry = (TowerElem, Vec<TowerElem>);

fn vec_lift(f: &TowerField, v: &[TowerElem]) -> Vec<TowerElem> {
    v.iter().map(|c| f.lift_elem(c)).collect()
}

/// Core of the merge: expresses Σ λ_j v_j² (unit orthogonal v_j, nonzero
/// λ_j, Σλ_j = 0) as exactly len(λ) isotropic squares. At most one square
/// root is adjoined per merge step.
fn merge_entries(
    mut fld: TowerField,
    mut pool: Vec<MergeEntry>,
) -> Result<(TowerField, Vec<(TowerElem, Vec<TowerElem>)>), QuadricsError> {
    let mut out: Vec<(TowerElem, Vec<TowerElem>)> = Vec::new();
    let split = |f: &TowerField,
                 lam: &TowerElem,
                 v0: &[TowerElem],
                 v1: &[TowerElem],
                 out: &mut Vec<(TowerElem, Vec<TowerElem>)>| {
        // λ(v0² − v1²) = 2λ u² + 2λ w², u = −(v0 + i v1)/2, w = (v0 − i v1)/2.
        let i = f.i();
        let half = gq(f, (1, 2), (0, 1));
        let u: Vec<TowerElem> = v0
            .iter()
            .zip(v1)
            .map(|(a, b)| f.neg(&f.mul(&half, &f.add(a, &f.mul(&i, b)))))
            .collect();
        let w: Vec<TowerElem> = v0
            .iter()
            .zip(v1)
            .map(|(a, b)| f.mul(&half, &f.sub(a, &f.mul(&i, b))))
            .collect();
        let c = f.add(lam, lam);
        out.push((c.clone(), u));
        out.push((c, w));
    };
    while !pool.is_empty() {
        if pool.len() == 1 {
            // Σλ = 0 forbids a single nonzero leftover.
            return Err(QuadricsError::UnsupportedNormalShape(
                "merge invariant broken".into(),
            ));
        }
        // A pair summing to zero splits immediately.
        if let Some(j) = (1..pool.len()).find(|&j| {
            fld.is_zero(&fld.add(&pool[0].0, &pool[j].0))
        }) {
            let (l0, v0) = pool[0].clone();
            let (_, v1) = pool.remove(j);
            pool.remove(0);
            split(&fld, &l0, &v0, &v1, &mut out);
            continue;
        }
        // Otherwise merge the first pair with distinct values.
        let j = (1..pool.len())
            .find(|&j| pool[j].0 != pool[0].0)
            .ok_or_else(|| {
                QuadricsError::UnsupportedNormalShape("all equal nonzero values".into())
            })?;
        let (l0, v0) = pool[0].clone();
        let (l1, v1) = pool.remove(j);
        pool.remove(0);
        let s = fld.add(&l0, &l1);
        let diff = fld.sub(&l0, &l1);
        let disc = fld.mul(&s, &diff);
        let (next, t) = fld.adjoin_sqrt(&disc)?;
        fld = next;
        let tinv = fld.inv(&t)?;
        let alpha = fld.mul(&fld.lift_elem(&l0), &tinv);
        let beta = fld.mul(&fld.i(), &fld.mul(&fld.lift_elem(&l1), &tinv));
        // Residual c (v0 + i v1)² with c = −λ0 λ1/(λ0 − λ1).
        let c = fld.neg(&fld.div(
            &fld.mul(&fld.lift_elem(&l0), &fld.lift_elem(&l1)),
            &fld.lift_elem(&diff),
        )?);
        let v0l = vec_lift(&fld, &v0);
        let v1l = vec_lift(&fld, &v1);
        let i = fld.i();
        let pt: Vec<TowerElem> = v0l
            .iter()
            .zip(&v1l)
            .map(|(a, b)| fld.add(a, &fld.mul(&i, b)))
            .collect();
        out.push((c, pt));
        let newv: Vec<TowerElem> = v0l
            .iter()
            .zip(&v1l)
            .map(|(a, b)| fld.add(&fld.mul(&alpha, a), &fld.mul(&beta, b)))
            .collect();
        // Lift the remaining pool into the grown field.
        pool = pool
            .into_iter()
            .map(|(l, v)| (fld.lift_elem(&l), vec_lift(&fld, &v)))
            .collect();
        pool.insert(0, (fld.lift_elem(&s), newv));
        out = out
            .into_iter()
            .map(|(c, v)| (fld.lift_elem(&c), vec_lift(&fld, &v)))
            .collect();
    }
    Ok((fld, out))
}

/// Decomposes Σ λ_j x_j² (all λ_j nonzero, Σλ_j = 0) into exactly r
/// isotropic squares for the standard form on r coordinates.
pub fn diagonal_merge(
    field: &TowerField,
    lambdas: &[TowerElem],
) -> Result<(TowerField, IsotropicDecomposition<TowerField>), QuadricsError> {
    assert!(lambdas.len() >= 2);
    let mut sum = field.zero();
    for l in lambdas {
        if field.is_zero(l) {
            return Err(QuadricsError::UnsupportedNormalShape("zero entry".into()));
        }
        sum = field.add(&sum, l);
    }
    if !field.is_zero(&sum) {
        return Err(QuadricsError::TraceNonzero);
    }
    let r = lambdas.len();
    let pool: Vec<MergeEntry> = lambdas
        .iter()
        .enumerate()
        .map(|(j, l)| {
            let mut v = vec![field.zero(); r];
            v[j] = field.one();
            (l.clone(), v)
        })
        .collect();
    let (fld, terms) = merge_entries(field.clone(), pool)?;
    let w = QuadraticFormSpec::standard(fld.clone(), r - 1);
    let dec = IsotropicDecomposition {
        degree: 2,
        arity: r,
        terms: terms
            .into_iter()
            .map(|(c, v)| (c, LinearForm(v)))
            .collect(),
        form: w,
    };
    // Verify against the diagonal form.
    let mut target = MultiPoly::zero(fld.clone(), r, 2);
    for (j, l) in lambdas.iter().enumerate() {
        let mut e = vec![0u8; r];
        e[j] = 2;
        target = target
            .add(&MultiPoly::monomial(fld.clone(), &e, fld.lift_elem(l)))
            .unwrap();
    }
    let rep = dec.verify(&target);
    if !rep.valid {
        return Err(QuadricsError::VerificationFailed(format!(
            "{:?}",
            rep.failures
        )));
    }
    Ok((fld, dec))
}

// ---------------------------------------------------------------------------
// The dispatcher.
// ---------------------------------------------------------------------------

/// Output of the explicit decomposition of a normal sequence.
pub struct SequenceDecomposition {
    pub field: TowerField,
    pub decomposition: IsotropicDecomposition<TowerField>,
    pub classification: Classification,
}

fn globalize(
    f: &TowerField,
    bt: BlockTerms,
    offset: usize,
    n1: usize,
) -> Vec<(TowerElem, Vec<TowerElem>)> {
    bt.terms
        .into_iter()
        .map(|(c, v)| {
            let mut g = vec![f.zero(); n1];
            g[offset..offset + v.len()].clone_from_slice(&v);
            (c, g)
        })
        .collect()
}

/// Merges the S_3(0) block form (1+i)(x_{o} − i x_{o+2})x_{o+1} with two
/// non-orthogonal isotropic terms c₁ℓ₁² + c₂ℓ₂², producing four isotropic
/// squares. Needs √c₁, √c₂ and one more root for the tangency parameter.
fn class3_merge(
    mut fld: TowerField,
    s3_offset: usize,
    n1: usize,
    term1: (TowerElem, Vec<TowerElem>),
    term2: (TowerElem, Vec<TowerElem>),
) -> Result<(TowerField, Vec<(TowerElem, Vec<TowerElem>)>), QuadricsError> {
    let (c1, l1) = term1;
    let (c2, l2) = term2;
    let (f1, r1) = fld.adjoin_sqrt(&c1)?;
    fld = f1;
    let (f2, r2) = fld.adjoin_sqrt(&fld.lift_elem(&c2))?;
    fld = f2;
    let m1: Vec<TowerElem> = l1.iter().map(|x| fld.mul(&fld.lift_elem(&r1), &fld.lift_elem(x))).collect();
    let m2: Vec<TowerElem> = l2.iter().map(|x| fld.mul(&r2, &fld.lift_elem(x))).collect();
    let dot = |a: &[TowerElem], b: &[TowerElem], f: &TowerField| {
        let mut acc = f.zero();
        for (x, y) in a.iter().zip(b) {
            f.add_mul_assign(&mut acc, x, y);
        }
        acc
    };
    let b12 = dot(&m1, &m2, &fld);
    // a² = −i / B(m1, m2)
    let a2 = fld.neg(&fld.div(&fld.i(), &b12)?);
    let (f3, a) = fld.adjoin_sqrt(&a2)?;
    fld = f3;
    let m1 = vec_lift(&fld, &m1);
    let m2 = vec_lift(&fld, &m2);
    let a2 = fld.lift_elem(&a2);
    let i = fld.i();
    let onepi = fld.add(&fld.one(), &i);
    // w = x_{o} − i x_{o+2}, x1 = x_{o+1} (global coordinates).
    let mut w = vec![fld.zero(); n1];
    w[s3_offset] = fld.one();
    w[s3_offset + 2] = fld.neg(&i);
    let mut x1 = vec![fld.zero(); n1];
    x1[s3_offset + 1] = fld.one();
    let quarter = gq(&fld, (1, 4), (0, 1));
    let two = fld.from_i64(2);
    let half = gq(&fld, (1, 2), (0, 1));
    let mut terms = Vec::new();
    // ¼(a w + 2 m_i)² for i = 1, 2
    for m in [&m1, &m2] {
        let v: Vec<TowerElem> = (0..n1)
            .map(|j| fld.add(&fld.mul(&a, &w[j]), &fld.mul(&two, &m[j])))
            .collect();
        terms.push((quarter.clone(), v));
    }
    // S = (1+i)x1 − a(m1 + m2); ±¼ (S + ((2∓a²)/2) w)²
    let s_vec: Vec<TowerElem> = (0..n1)
        .map(|j| {
            let t = fld.mul(&onepi, &x1[j]);
            let u = fld.mul(&a, &fld.add(&m1[j], &m2[j]));
            fld.sub(&t, &u)
        })
        .collect();
    let c_plus = fld.mul(&half, &fld.sub(&two, &a2)); // (2 − a²)/2
    let c_minus = fld.neg(&fld.mul(&half, &fld.add(&two, &a2))); // −(2 + a²)/2
    let v_plus: Vec<TowerElem> = (0..n1)
        .map(|j| fld.add(&s_vec[j], &fld.mul(&c_plus, &w[j])))
        .collect();
    let v_minus: Vec<TowerElem> = (0..n1)
        .map(|j| fld.add(&s_vec[j], &fld.mul(&c_minus, &w[j])))
        .collect();
    terms.push((quarter.clone(), v_plus));
    terms.push((fld.neg(&quarter), v_minus));
    Ok((fld, terms))
}

/// Explicit isotropic decomposition of the quadratic form of a normal
/// sequence, with size exactly the classified isotropic rank. Supported
/// shapes: arbitrary degenerate blocks combined per the classification
/// rules, plus a nondegenerate part made of size-1 blocks (handled by the
/// diagonal merge). Nonzero-eigenvalue blocks of size ≥ 2 are rejected:
/// splitting them always exceeds the rank.
pub fn decompose_normal_sequence(
    seq: &NormalSequence,
) -> Result<SequenceDecomposition, QuadricsError> {
    let f0 = seq.field.clone();
    let h = normal_blocks_matrix(seq);
    let classification = classify_irk(&h);
    debug_assert_eq!(classification.rank, seq.rank());
    debug_assert_eq!(classification.irk, seq.expected_irk());
    let n1 = seq.total_size();

    for (l, s) in &seq.blocks {
        if !f0.is_zero(l) && *s >= 2 {
            return Err(QuadricsError::UnsupportedNormalShape(format!(
                "size-{} block with nonzero eigenvalue",
                s
            )));
        }
    }

    // Gather blocks with offsets.
    let mut offset = 0usize;
    let mut threes: Vec<usize> = Vec::new(); // offsets of S_3(0)
    let mut evens: Vec<(usize, usize)> = Vec::new(); // (offset, size >= 4)
    let mut odds: Vec<(usize, usize)> = Vec::new(); // (offset, size >= 5)
    let mut twos: Vec<usize> = Vec::new();
    let mut diag: Vec<(TowerElem, usize)> = Vec::new(); // (λ, offset), size-1 nonzero
    for (l, s) in &seq.blocks {
        if f0.is_zero(l) {
            match s {
                1 => {} // zero block: contributes nothing
                2 => twos.push(offset),
                3 => threes.push(offset),
                s if s % 2 == 0 => evens.push((offset, *s)),
                s => odds.push((offset, *s)),
            }
        } else {
            diag.push((l.clone(), offset));
        }
        offset += s;
    }

    let mut fld = f0.clone();
    let mut all_terms: Vec<(TowerElem, Vec<TowerElem>)> = Vec::new();
    let lift_all = |fld: &TowerField, terms: &mut Vec<(TowerElem, Vec<TowerElem>)>| {
        *terms = terms
            .iter()
            .map(|(c, v)| (fld.lift_elem(c), vec_lift(fld, v)))
            .collect();
    };

    // Plain blocks first.
    for o in &twos {
        let bt = s2_terms(&fld);
        debug_assert!(check_block(&fld, &bt, &fld.zero(), 2));
        all_terms.extend(globalize(&fld, bt, *o, n1));
    }
    let mut even_pair: Option<((TowerElem, Vec<TowerElem>), (TowerElem, Vec<TowerElem>))> = None;
    let mut odd_pair: Option<((TowerElem, Vec<TowerElem>), (TowerElem, Vec<TowerElem>))> = None;
    let lone_three = threes.len() == 1;
    for (o, s) in &evens {
        let bt = even_block_terms(&fld, *s);
        debug_assert!(check_block(&fld, &bt, &fld.zero(), *s));
        let pair = bt.nonorthogonal_pair;
        let mut gt = globalize(&fld, bt, *o, n1);
        if lone_three && even_pair.is_none() && odds.is_empty() {
            let (i, j) = pair.expect("even blocks designate a pair");
            let tj = gt.remove(j);
            let ti = gt.remove(i);
            even_pair = Some((ti, tj));
        }
        all_terms.extend(gt);
    }
    for (o, s) in &odds {
        let bt = odd_block_terms(&fld, *s);
        debug_assert!(check_block(&fld, &bt, &fld.zero(), *s));
        let pair = bt.nonorthogonal_pair;
        let mut gt = globalize(&fld, bt, *o, n1);
        if lone_three && odd_pair.is_none() {
            let (i, j) = pair.expect("odd blocks designate a pair");
            let tj = gt.remove(j);
            let ti = gt.remove(i);
            odd_pair = Some((ti, tj));
        }
        all_terms.extend(gt);
    }

    // The nondegenerate diagonal part, reserving its final split pair when a
    // lone S_3(0) needs a partner and no big nilpotent block provided one.
    let want_diag_pair = lone_three && odd_pair.is_none() && even_pair.is_none() && !diag.is_empty();
    let mut diag_pair: Option<((TowerElem, Vec<TowerElem>), (TowerElem, Vec<TowerElem>))> = None;
    if !diag.is_empty() {
        if diag.len() < 2 {
            return Err(QuadricsError::UnsupportedNormalShape(
                "a single nonzero eigenvalue cannot have zero trace".into(),
            ));
        }
        let pool: Vec<MergeEntry> = diag
            .iter()
            .map(|(l, o)| {
                let mut v = vec![fld.zero(); n1];
                v[*o] = fld.one();
                (l.clone(), v)
            })
            .collect();
        let (f2, mut terms) = merge_entries(fld.clone(), pool)?;
        fld = f2;
        lift_all(&fld, &mut all_terms);
        if want_diag_pair {
            // The merge ends with a split; its two terms are its last two
            // and are never orthogonal.
            let t2 = terms.pop().expect("merge yields >= 2 terms");
            let t1 = terms.pop().expect("merge yields >= 2 terms");
            diag_pair = Some((t1, t2));
        }
        all_terms.extend(terms);
    }

    // Place the S_3(0) blocks.
    if threes.len() >= 2 {
        // Pair them; an odd count uses one triple.
        let mut rest = threes.clone();
        if rest.len() % 2 == 1 {
            let (o1, o2, o3) = (rest[0], rest[1], rest[2]);
            rest.drain(0..3);
            let bt = s3_triple_terms(&fld);
            let gt: Vec<(TowerElem, Vec<TowerElem>)> = bt
                .terms
                .into_iter()
                .map(|(c, v)| {
                    let mut g = vec![fld.zero(); n1];
                    for (local, global) in [(0, o1), (3, o2), (6, o3)] {
                        g[global..global + 3].clone_from_slice(&v[local..local + 3]);
                    }
                    (c, g)
                })
                .collect();
            all_terms.extend(gt);
        }
        for pair in rest.chunks(2) {
            let (o1, o2) = (pair[0], pair[1]);
            let bt = s3_pair_terms(&fld);
            let gt: Vec<(TowerElem, Vec<TowerElem>)> = bt
                .terms
                .into_iter()
                .map(|(c, v)| {
                    let mut g = vec![fld.zero(); n1];
                    g[o1..o1 + 3].clone_from_slice(&v[0..3]);
                    g[o2..o2 + 3].clone_from_slice(&v[3..6]);
                    (c, g)
                })
                .collect();
            all_terms.extend(gt);
        }
    } else if lone_three {
        let o3 = threes[0];
        let partner = odd_pair.or(even_pair).or(diag_pair);
        if let Some((t1, t2)) = partner {
            let t1 = (fld.lift_elem(&t1.0), vec_lift(&fld, &t1.1));
            let t2 = (fld.lift_elem(&t2.0), vec_lift(&fld, &t2.1));
            let (f2, terms) = class3_merge(fld.clone(), o3, n1, t1, t2)?;
            fld = f2;
            lift_all(&fld, &mut all_terms);
            all_terms.extend(terms);
        } else {
            // Exceptional class: S_3(0) ⊕ S_2(0)^{⊕k}; irk = rank + 2.
            let bt = s3_terms(&fld);
            debug_assert!(check_block(&fld, &bt, &fld.zero(), 3));
            all_terms.extend(globalize(&fld, bt, o3, n1));
        }
    }

    let w = QuadraticFormSpec::standard(fld.clone(), n1 - 1);
    let dec = IsotropicDecomposition {
        degree: 2,
        arity: n1,
        terms: all_terms
            .into_iter()
            .map(|(c, v)| (c, LinearForm(v)))
            .collect(),
        form: w,
    };
    let target = crate::decompose::lift_poly(&fld, &h.quadratic_form());
    let report = dec.verify(&target);
    if !report.valid {
        return Err(QuadricsError::VerificationFailed(format!(
            "{:?}",
            report.failures
        )));
    }
    if dec.size() != classification.irk {
        return Err(QuadricsError::VerificationFailed(format!(
            "size {} != classified irk {}",
            dec.size(),
            classification.irk
        )));
    }
    Ok(SequenceDecomposition {
        field: fld,
        decomposition: dec,
        classification,
    })
}

#[cfg(test)]
fn standard_pairing(
    f: &TowerField,
    a: &[TowerElem],
    b: &[TowerElem],
) -> TowerElem {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        f.add_mul_assign(&mut acc, x, y);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_i;

    fn qi() -> TowerField {
        TowerField::qi()
    }

    fn seq(f: &TowerField, blocks: &[(i64, usize)]) -> NormalSequence {
        NormalSequence::new(
            f.clone(),
            blocks
                .iter()
                .map(|(l, s)| (f.from_i64(*l), *s))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn canonical_blocks_match_displays() {
        let f = qi();
        // S_3(0) = ½ [[0, 1+i, 0], [1+i, 0, 1−i], [0, 1−i, 0]]
        let s3 = canonical_block(&f, &f.zero(), 3);
        let expect = MatrixExact::from_rows(
            f.clone(),
            vec![
                vec![f.from_i64(0), f.from_gauss(rat_i(1, 1)), f.from_i64(0)],
                vec![
                    f.from_gauss(rat_i(1, 1)),
                    f.from_i64(0),
                    f.from_gauss(rat_i(1, -1)),
                ],
                vec![f.from_i64(0), f.from_gauss(rat_i(1, -1)), f.from_i64(0)],
            ],
        );
        let half = gq(&f, (1, 2), (0, 1));
        let expect = MatrixExact::from_fn(f.clone(), 3, 3, |i, j| f.mul(&half, expect.at(i, j)));
        assert_eq!(s3, expect);
        // S_2(0) = ½ [[i, 1], [1, −i]]
        let s2 = canonical_block(&f, &f.zero(), 2);
        assert_eq!(*s2.at(0, 0), gq(&f, (0, 1), (1, 2)));
        assert_eq!(*s2.at(0, 1), gq(&f, (1, 2), (0, 1)));
        assert_eq!(*s2.at(1, 1), gq(&f, (0, 1), (-1, 2)));
        // S_1(λ) = [λ]
        let s1 = canonical_block(&f, &f.from_i64(5), 1);
        assert_eq!(*s1.at(0, 0), f.from_i64(5));
    }

    #[test]
    fn block_det_and_rank_identities() {
        let f = qi();
        for k in 1..=9usize {
            for lam in [f.from_i64(0), f.from_i64(1), f.from_i64(-2), f.i()] {
                let blk = canonical_block(&f, &lam, k);
                let mut expect = f.one();
                for _ in 0..k {
                    expect = f.mul(&expect, &lam);
                }
                assert_eq!(blk.det(), expect, "det S_{}({:?})", k, f.display(&lam));
            }
            let blk0 = canonical_block(&f, &f.zero(), k);
            assert_eq!(blk0.rank(), k - 1, "rank S_{}(0)", k);
            // Nilpotency of S_k(0).
            let mut pow = blk0.clone();
            for _ in 1..k {
                pow = pow.mul(&blk0);
            }
            assert!((0..k).all(|i| (0..k).all(|j| f.is_zero(pow.at(i, j)))));
        }
    }

    #[test]
    fn normal_sequence_trace_constraint() {
        let f = qi();
        assert!(NormalSequence::new(f.clone(), vec![(f.from_i64(1), 2)]).is_err());
        assert!(NormalSequence::new(
            f.clone(),
            vec![(f.from_i64(1), 1), (f.from_i64(-1), 1)]
        )
        .is_ok());
    }

    #[test]
    fn classification_examples() {
        let f = qi();
        // S_3(0): rank 2, irk 4.
        let h = normal_blocks_matrix(&seq(&f, &[(0, 3)]));
        let c = classify_irk(&h);
        assert_eq!((c.rank, c.irk), (2, 4));
        assert!(c.nilpotent);
        // diag(1, −1): rank 2, irk 2.
        let h = normal_blocks_matrix(&seq(&f, &[(1, 1), (-1, 1)]));
        let c = classify_irk(&h);
        assert_eq!((c.rank, c.irk), (2, 2));
        assert!(!c.nilpotent);
        // S_3(0) ⊕ S_2(0)^{⊕2}: rank 4, irk 6.
        let h = normal_blocks_matrix(&seq(&f, &[(0, 3), (0, 2), (0, 2)]));
        let c = classify_irk(&h);
        assert_eq!((c.rank, c.irk), (4, 6));
    }

    #[test]
    fn explicit_block_decompositions_verify() {
        let f = qi();
        // (0^{(5)}): 4 terms.
        let out = decompose_normal_sequence(&seq(&f, &[(0, 5)])).unwrap();
        assert_eq!(out.decomposition.size(), 4);
        // (0^{(3)}, 0^{(3)}): 4 terms.
        let out = decompose_normal_sequence(&seq(&f, &[(0, 3), (0, 3)])).unwrap();
        assert_eq!(out.decomposition.size(), 4);
        // (0^{(3)}, 0^{(2)}, 0^{(2)}): 6 = rank 4 + 2.
        let out = decompose_normal_sequence(&seq(&f, &[(0, 3), (0, 2), (0, 2)])).unwrap();
        assert_eq!(out.decomposition.size(), 6);
        // (1, 1, −2): 3 via the merge.
        let out = decompose_normal_sequence(&seq(&f, &[(1, 1), (1, 1), (-2, 1)])).unwrap();
        assert_eq!(out.decomposition.size(), 3);
        // Even blocks: (0^{(4)}) alone: 3 terms; (0^{(6)}): 5.
        let out = decompose_normal_sequence(&seq(&f, &[(0, 4)])).unwrap();
        assert_eq!(out.decomposition.size(), 3);
        let out = decompose_normal_sequence(&seq(&f, &[(0, 6)])).unwrap();
        assert_eq!(out.decomposition.size(), 5);
        // Odd: (0^{(7)}): 6 terms.
        let out = decompose_normal_sequence(&seq(&f, &[(0, 7)])).unwrap();
        assert_eq!(out.decomposition.size(), 6);
        // Triple of threes: (0^{(3)})³: 6 terms.
        let out = decompose_normal_sequence(&seq(&f, &[(0, 3), (0, 3), (0, 3)])).unwrap();
        assert_eq!(out.decomposition.size(), 6);
    }

    #[test]
    fn mixed_classes() {
        let f = qi();
        // Class 1: S_5(0) ⊕ S_3(0): rank 6, size 6.
        let out = decompose_normal_sequence(&seq(&f, &[(0, 5), (0, 3)])).unwrap();
        assert_eq!(out.decomposition.size(), 6);
        // Class 2: S_4(0) ⊕ S_3(0): rank 5, size 5.
        let out = decompose_normal_sequence(&seq(&f, &[(0, 4), (0, 3)])).unwrap();
        assert_eq!(out.decomposition.size(), 5);
        // Class 3: S_3(0) ⊕ diag(1, −1): rank 4, size 4.
        let out = decompose_normal_sequence(&seq(&f, &[(0, 3), (1, 1), (-1, 1)])).unwrap();
        assert_eq!(out.decomposition.size(), 4);
        // Class 4 with extra S_2(0)s and zero blocks.
        let out =
            decompose_normal_sequence(&seq(&f, &[(0, 3), (0, 2), (0, 1)])).unwrap();
        assert_eq!(out.decomposition.size(), 5); // rank 3 + 2
        // Unsupported: nonzero eigenvalue block of size 2.
        let s = seq(&f, &[(1, 2), (-1, 2)]);
        assert!(matches!(
            decompose_normal_sequence(&s),
            Err(QuadricsError::UnsupportedNormalShape(_))
        ));
    }

    #[test]
    fn diagonal_merge_examples() {
        let f = qi();
        for lambdas in [vec![1i64, -1], vec![2, -1, -1], vec![1, 1, 1, -3]] {
            let ls: Vec<TowerElem> = lambdas.iter().map(|l| f.from_i64(*l)).collect();
            let (_, dec) = diagonal_merge(&f, &ls).unwrap();
            assert_eq!(dec.size(), lambdas.len());
        }
    }

    #[test]
    fn hollow_check_examples() {
        let f = qi();
        let h = normal_blocks_matrix(&seq(&f, &[(1, 1), (-1, 1)]));
        // Q = (1/√2) [[1, −1], [1, 1]] after adjoining √2.
        let (f2, s2) = f.adjoin_sqrt(&f.from_i64(2)).unwrap();
        let inv = f2.inv(&s2).unwrap();
        let q = MatrixExact::from_rows(
            f2.clone(),
            vec![
                vec![inv.clone(), f2.neg(&inv)],
                vec![inv.clone(), inv.clone()],
            ],
        );
        let h2 = TraceZeroSym::new(
            f2.clone(),
            MatrixExact::from_fn(f2.clone(), 2, 2, |i, j| f2.lift_elem(h.matrix.at(i, j))),
        )
        .unwrap();
        assert!(hollow_check(&h2, &q).unwrap());
        // H = diag(1,−1) with Q = I is not hollow.
        let id = MatrixExact::identity(f2.clone(), 2);
        assert!(!hollow_check(&h2, &id).unwrap());
        // S_3(0) is itself hollow.
        let s3 = normal_blocks_matrix(&seq(&f, &[(0, 3)]));
        let id3 = MatrixExact::identity(f.clone(), 3);
        assert!(hollow_check(&s3, &id3).unwrap());
        // Non-orthogonal Q is rejected.
        let bad = MatrixExact::from_rows(
            f2.clone(),
            vec![
                vec![f2.one(), f2.one()],
                vec![f2.zero(), f2.one()],
            ],
        );
        assert!(matches!(
            hollow_check(&h2, &bad),
            Err(QuadricsError::NotOrthogonal)
        ));
    }

    #[test]
    fn classification_is_orthogonally_invariant() {
        let f = qi();
        // Rational orthogonal conjugation: 3-4-5 rotation in coordinates 0,1
        // combined with a permutation.
        for blocks in [
            vec![(0i64, 3usize)],
            vec![(0, 3), (0, 2)],
            vec![(1, 1), (-1, 1), (0, 3)],
            vec![(0, 4), (0, 2)],
        ] {
            let s = seq(&f, &blocks);
            let h = normal_blocks_matrix(&s);
            let n1 = h.size();
            let mut q = MatrixExact::identity(f.clone(), n1);
            *q.at_mut(0, 0) = gq(&f, (3, 5), (0, 1));
            *q.at_mut(0, 1) = gq(&f, (-4, 5), (0, 1));
            *q.at_mut(1, 0) = gq(&f, (4, 5), (0, 1));
            *q.at_mut(1, 1) = gq(&f, (3, 5), (0, 1));
            let conj = q.transpose().mul(&h.matrix).mul(&q);
            let h2 = TraceZeroSym::new(f.clone(), conj).unwrap();
            assert_eq!(classify_irk(&h), classify_irk(&h2));
        }
    }

    #[test]
    fn span_obstruction_for_exceptional_class() {
        // For S_3(0) ⊕ S_2(0)^{⊕k}: with e_1 the non-isotropic vector and
        // w_0..w_k the isotropic Waring points, the Gram of the span is
        // diag(1, 0, ..., 0), so every isotropic vector in the span has zero
        // e_1-component.
        let f = qi();
        for k in 0..=4usize {
            let n1 = 3 + 2 * k;
            let mut basis: Vec<Vec<TowerElem>> = Vec::new();
            let mut e1 = vec![f.zero(); n1];
            e1[1] = f.one();
            basis.push(e1);
            let mut w0 = vec![f.zero(); n1];
            w0[0] = f.one();
            w0[2] = f.neg(&f.i());
            basis.push(w0);
            for j in 0..k {
                let mut wj = vec![f.zero(); n1];
                wj[3 + 2 * j] = f.one();
                wj[4 + 2 * j] = f.neg(&f.i());
                basis.push(wj);
            }
            for (a, va) in basis.iter().enumerate() {
                for (b, vb) in basis.iter().enumerate() {
                    let p = standard_pairing(&f, va, vb);
                    if a == 0 && b == 0 {
                        assert!(f.is_one(&p));
                    } else {
                        assert!(f.is_zero(&p));
                    }
                }
            }
        }
    }
}
