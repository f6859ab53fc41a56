//! Seeded generators and independent oracles shared by the integration
//! tests and the acceptance target.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shiftcalc::aligned::{trivial_shift, AlignedShiftData};
use shiftcalc::corr::{BlockUnitary, GraphCorrespondence, ObjectPair, OneArrow};
use shiftcalc::linalg::Matrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn big(rows: &[&[i64]]) -> Matrix<BigInt> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap()
}

pub fn random_rows(rng: &mut impl Rng, rows: usize, cols: usize, max: i64) -> Vec<Vec<i64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.random_range(0..=max)).collect()).collect()
}

pub fn to_matrix(rows: &[Vec<i64>]) -> Matrix<BigInt> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap()
}

pub fn essential(rows: &[Vec<i64>]) -> bool {
    let n = rows.len();
    (0..n).all(|i| rows[i].iter().any(|&x| x != 0)) && (0..n).all(|j| rows.iter().any(|r| r[j] != 0))
}

/// Random essential square matrix of size `1..=max_size`, entries `0..=max`.
pub fn random_essential(rng: &mut impl Rng, max_size: usize, max: i64) -> Vec<Vec<i64>> {
    loop {
        let n = rng.random_range(1..=max_size);
        let rows = random_rows(rng, n, n, max);
        if essential(&rows) {
            return rows;
        }
    }
}

/// Schoolbook product on plain vectors; shares no code with the library.
pub fn naive_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0; m]; n];
    for i in 0..n {
        for j in 0..m {
            for l in 0..k {
                out[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    out
}

/// Counts the edge paths `(v, α, u, β, w)` of `X(R) ⊗ X(S)` by explicit
/// enumeration, grouped by endpoints.
pub fn path_counts(r: &[Vec<i64>], s: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let (p, q, t) = (r.len(), s.len(), s[0].len());
    let mut out = vec![vec![0usize; t]; p];
    for v in 0..p {
        for u in 0..q {
            for _alpha in 0..r[v][u] {
                for w in 0..t {
                    for _beta in 0..s[u][w] {
                        out[v][w] += 1;
                    }
                }
            }
        }
    }
    out
}

/// Random 1-arrow `[X(R), Φ] : (RS, X) ← (SR, Y)` with `Φ` a random block
/// unitary; entries of `R`, `S` in `0..=max`, sizes `1..=max_size`.
pub fn random_arrow(rng: &mut ChaCha8Rng, max_size: usize, max: i64) -> OneArrow<f64> {
    loop {
        let p = rng.random_range(1..=max_size);
        let q = rng.random_range(1..=max_size);
        let r = random_rows(rng, p, q, max);
        let s = random_rows(rng, q, p, max);
        let a = naive_mul(&r, &s);
        let b = naive_mul(&s, &r);
        if !essential(&a) || !essential(&b) {
            continue;
        }
        let to = ObjectPair::from_matrix(&to_matrix(&a)).unwrap();
        let from = ObjectPair::from_matrix(&to_matrix(&b)).unwrap();
        let f = GraphCorrespondence::from_matrix_default(&to_matrix(&r)).unwrap();
        let phi = BlockUnitary::random(to.x().tensor(&f).unwrap(), f.tensor(from.x()).unwrap(), rng).unwrap();
        return OneArrow::new(to, from, f, phi).unwrap();
    }
}

/// `ψ ⊗ 1` conjugate of `Φ_F`: the unique `Φ_G` making `ψ` a 2-arrow
/// `[F, Φ_F] ⇒ [F, Φ_G]`.
pub fn conjugate_arrow(f: &OneArrow<f64>, psi: &BlockUnitary<f64>) -> OneArrow<f64> {
    let y = BlockUnitary::identity(f.to().x());
    let x = BlockUnitary::identity(f.from().x());
    let phi = y
        .tensor(&psi.adjoint())
        .unwrap()
        .then(f.phi())
        .unwrap()
        .then(&psi.tensor(&x).unwrap())
        .unwrap();
    f.with_phi(phi).unwrap()
}

pub fn random_self_unitary(x: &GraphCorrespondence, rng: &mut ChaCha8Rng) -> BlockUnitary<f64> {
    BlockUnitary::random(x.clone(), x.clone(), rng).unwrap()
}

/// Small essential 0/1 object (or `[2]`) keeping tensor powers cheap.
pub fn small_object(rng: &mut ChaCha8Rng) -> ObjectPair {
    if rng.random_range(0..4) == 0 {
        return ObjectPair::from_matrix(&big(&[&[2]])).unwrap();
    }
    let rows = random_essential(rng, 3, 1);
    ObjectPair::from_matrix(&to_matrix(&rows)).unwrap()
}

/// Trivial shift of lag 1 or 2 conjugated by random unitaries on `M`, `N`.
pub fn random_aligned_shift(obj: &ObjectPair, rng: &mut ChaCha8Rng) -> AlignedShiftData<f64> {
    let (j, k) = loop {
        let j = rng.random_range(0..=2);
        let k = rng.random_range(0..=2);
        if (1..=2).contains(&(j + k)) {
            break (j, k);
        }
    };
    let base = trivial_shift(obj, j, k).unwrap();
    let u = random_self_unitary(base.m_arrow().f(), rng);
    let w = random_self_unitary(base.n_arrow().f(), rng);
    base.conjugated(&u, &w).unwrap()
}

/// Composable pair `g = [X(S), Φ_g] : (SR) ← (RS)`, `f = [X(R), Φ_f] : (RS) ← (SR)`.
pub fn random_arrow_pair(rng: &mut ChaCha8Rng, max_size: usize, max: i64) -> (OneArrow<f64>, OneArrow<f64>) {
    loop {
        let p = rng.random_range(1..=max_size);
        let q = rng.random_range(1..=max_size);
        let r = random_rows(rng, p, q, max);
        let s = random_rows(rng, q, p, max);
        let a = naive_mul(&r, &s);
        let b = naive_mul(&s, &r);
        if !essential(&a) || !essential(&b) {
            continue;
        }
        let oa = ObjectPair::from_matrix(&to_matrix(&a)).unwrap();
        let ob = ObjectPair::from_matrix(&to_matrix(&b)).unwrap();
        let fr = GraphCorrespondence::from_matrix_default(&to_matrix(&r)).unwrap();
        let fs = GraphCorrespondence::from_matrix_default(&to_matrix(&s)).unwrap();
        let phi_f = BlockUnitary::random(oa.x().tensor(&fr).unwrap(), fr.tensor(ob.x()).unwrap(), rng).unwrap();
        let phi_g = BlockUnitary::random(ob.x().tensor(&fs).unwrap(), fs.tensor(oa.x()).unwrap(), rng).unwrap();
        let f = OneArrow::new(oa.clone(), ob.clone(), fr, phi_f).unwrap();
        let g = OneArrow::new(ob, oa, fs, phi_g).unwrap();
        return (g, f);
    }
}
