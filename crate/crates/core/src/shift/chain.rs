//! Random strong shift equivalence chains built from state splittings.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SeWitness;
use crate::error::{domain, Result};
use crate::linalg::Matrix;
use crate::scalar::Exact;

/// Elementary witnesses chained so that `steps[i].b == steps[i + 1].a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SseChain<T> {
    pub steps: Vec<SeWitness<T>>,
}

impl<T: Exact> SseChain<T> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Every step has lag one, verifies, and links to the next.
    pub fn validate(&self) -> Result<bool> {
        for (k, step) in self.steps.iter().enumerate() {
            if step.lag != 1 || !step.verify()? {
                return Ok(false);
            }
            if let Some(next) = self.steps.get(k + 1) {
                if step.b != next.a {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Composite witness of lag `len()`; `None` for the empty chain.
    pub fn fold(&self) -> Result<Option<SeWitness<T>>> {
        let mut iter = self.steps.iter();
        let Some(first) = iter.next() else {
            return Ok(None);
        };
        let mut acc = first.clone();
        for step in iter {
            acc = acc.compose(step)?;
        }
        Ok(Some(acc))
    }

    pub fn endpoints(&self) -> Option<(&Matrix<T>, &Matrix<T>)> {
        Some((&self.steps.first()?.a, &self.steps.last()?.b))
    }
}

/// Splittings are only attempted while the current matrix is smaller than this.
pub const DEFAULT_MAX_CHAIN_SIZE: usize = 6;

fn to_t<T: Exact>(x: u64) -> T {
    T::from_u64(x).expect("small integers fit")
}

/// Out-splitting of `vertex`: its outgoing edges are divided between the
/// vertex and a new copy appended last. `A = DE`, `B = ED`.
fn out_split<T: Exact>(a: &Matrix<T>, vertex: usize, rng: &mut ChaCha8Rng) -> SeWitness<T> {
    let n = a.rows();
    // one slot per edge leaving `vertex`, each labelled by its target
    let mut edges: Vec<usize> = Vec::new();
    for j in 0..n {
        let count = a.get(vertex, j).to_u64().expect("entries are small");
        edges.extend(std::iter::repeat_n(j, count as usize));
    }
    let mut to_copy: Vec<bool> = (0..edges.len()).map(|_| rng.random_bool(0.5)).collect();
    if to_copy.iter().all(|&c| c) || to_copy.iter().all(|&c| !c) {
        let k = rng.random_range(0..to_copy.len());
        to_copy[k] = !to_copy[k];
    }
    let mut kept = vec![0u64; n];
    let mut moved = vec![0u64; n];
    for (&j, &c) in edges.iter().zip(&to_copy) {
        if c {
            moved[j] += 1;
        } else {
            kept[j] += 1;
        }
    }
    let division = Matrix::from_fn(n, n + 1, |u, c| {
        if c == u || (u == vertex && c == n) {
            T::one()
        } else {
            T::zero()
        }
    });
    let edge = Matrix::from_fn(n + 1, n, |c, w| {
        if c == vertex {
            to_t(kept[w])
        } else if c == n {
            to_t(moved[w])
        } else {
            a.get(c, w).clone()
        }
    });
    let b = edge.mul(&division).expect("shapes agree");
    SeWitness::new(a.clone(), b, division, edge, 1)
}

/// In-splitting: an out-splitting of the transpose, transposed back.
fn in_split<T: Exact>(a: &Matrix<T>, vertex: usize, rng: &mut ChaCha8Rng) -> SeWitness<T> {
    let t = out_split(&a.transpose(), vertex, rng);
    // A^T = D E, so A = E^T D^T and B = D^T E^T.
    let r = t.s.transpose();
    let s = t.r.transpose();
    SeWitness::new(a.clone(), t.b.transpose(), r, s, 1)
}

/// Relabeling by a permutation: `R = P`, `S = P^T A`, `B = P^T A P`.
fn relabel<T: Exact>(a: &Matrix<T>, rng: &mut ChaCha8Rng) -> SeWitness<T> {
    let n = a.rows();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let p = Matrix::from_fn(n, n, |i, j| if perm[j] == i { T::one() } else { T::zero() });
    let s = p.transpose().mul(a).expect("square");
    let b = s.mul(&p).expect("square");
    SeWitness::new(a.clone(), b, p, s, 1)
}

fn row_sum<T: Exact>(a: &Matrix<T>, i: usize) -> T {
    a.row(i).iter().cloned().fold(T::zero(), |x, y| x + y)
}

/// Seeded random chain of `steps` elementary equivalences starting at `a`.
pub fn random_sse_chain<T: Exact>(a: &Matrix<T>, steps: usize, seed: u64) -> Result<SseChain<T>> {
    random_sse_chain_capped(a, steps, seed, DEFAULT_MAX_CHAIN_SIZE)
}

/// As [`random_sse_chain`], splitting only while the size is below `max_size`.
/// At the cap the chain relabels or undoes its previous step instead.
pub fn random_sse_chain_capped<T: Exact>(
    a: &Matrix<T>,
    steps: usize,
    seed: u64,
    max_size: usize,
) -> Result<SseChain<T>> {
    if !a.is_essential()? {
        return Err(domain("random chains start from an essential matrix"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chain: Vec<SeWitness<T>> = Vec::with_capacity(steps);
    let mut current = a.clone();
    let two = to_t::<T>(2);
    for _ in 0..steps {
        let n = current.rows();
        let out_ok: Vec<usize> = (0..n).filter(|&i| row_sum(&current, i) >= two).collect();
        let cur_t = current.transpose();
        let in_ok: Vec<usize> = (0..n).filter(|&j| row_sum(&cur_t, j) >= two).collect();
        let can_split = n < max_size;
        let roll = rng.random_range(0..10u32);
        let step = if can_split && roll < 4 && !out_ok.is_empty() {
            let v = out_ok[rng.random_range(0..out_ok.len())];
            out_split(&current, v, &mut rng)
        } else if can_split && roll < 8 && !in_ok.is_empty() {
            let v = in_ok[rng.random_range(0..in_ok.len())];
            in_split(&current, v, &mut rng)
        } else if !can_split && roll < 5 && chain.last().is_some_and(|s| s.b.rows() > s.a.rows()) {
            chain.last().expect("checked").reversed_unchecked()
        } else {
            relabel(&current, &mut rng)
        };
        debug_assert!(step.verify().unwrap_or(false), "generated step must verify");
        current = step.b.clone();
        chain.push(step);
    }
    Ok(SseChain { steps: chain })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_matrix;
    use num_bigint::BigInt;

    type M = Matrix<BigInt>;

    #[test]
    fn empty_chain() {
        let a: M = int_matrix(&[&[2]]);
        let c = random_sse_chain(&a, 0, 7).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.fold().unwrap(), None);
    }

    #[test]
    fn single_step_from_two() {
        let a: M = int_matrix(&[&[2]]);
        for seed in 0..20 {
            let c = random_sse_chain(&a, 1, seed).unwrap();
            let step = &c.steps[0];
            assert!(crate::shift::verify_elementary(&step.a, &step.b, &step.r, &step.s).unwrap());
            assert!(step.b.rows() <= 2);
        }
    }

    #[test]
    fn chains_validate_and_fold() {
        let starts: [M; 3] = [
            int_matrix(&[&[1, 1], &[1, 0]]),
            int_matrix(&[&[2, 1], &[0, 1]]),
            int_matrix(&[&[3]]),
        ];
        for a in &starts {
            for seed in 0..10 {
                let c = random_sse_chain(a, 5, seed).unwrap();
                assert!(c.validate().unwrap());
                let folded = c.fold().unwrap().unwrap();
                assert_eq!(folded.lag, 5);
                assert!(folded.verify().unwrap());
                assert!(c.steps.iter().all(|s| s.b.is_essential().unwrap()));
            }
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let a: M = int_matrix(&[&[1, 2], &[1, 1]]);
        assert_eq!(random_sse_chain(&a, 4, 11).unwrap(), random_sse_chain(&a, 4, 11).unwrap());
    }

    #[test]
    fn cap_is_respected() {
        let a: M = int_matrix(&[&[3, 3], &[3, 3]]);
        let c = random_sse_chain_capped(&a, 12, 3, 3).unwrap();
        assert!(c.steps.iter().all(|s| s.b.rows() <= 3));
        assert!(c.validate().unwrap());
    }
}
