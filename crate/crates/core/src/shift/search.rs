//! Bounded witness search.
//!
//! Candidates `(R, S)` are ordered lexicographically: first by the row-major
//! entries of `R`, then by those of `S`. Every equation involving `R` alone
//! (`AR = RB`) is linear, and once `R` is fixed all three remaining equations
//! are linear in `S`, so both stages are enumerations of integer points of a
//! linear system inside a box, pruned by interval bounds.

use std::ops::ControlFlow;

use rayon::prelude::*;

use super::SeWitness;
use crate::error::{domain, shape, Result};
use crate::linalg::Matrix;
use crate::scalar::Exact;

/// `Σ coeff · x[var] = rhs`.
struct LinearEquation<T> {
    terms: Vec<(usize, T)>,
    rhs: T,
}

/// Integer points of a linear system with every variable in `[0, bound]`.
struct BoxedSystem<T> {
    nvars: usize,
    bound: T,
    equations: Vec<LinearEquation<T>>,
    // per variable: equations whose last variable is this one
    closing: Vec<Vec<usize>>,
    // per variable: equations still open after assigning it
    open_after: Vec<Vec<usize>>,
}

impl<T: Exact> BoxedSystem<T> {
    fn new(nvars: usize, bound: T, equations: Vec<LinearEquation<T>>) -> Self {
        let mut closing = vec![Vec::new(); nvars];
        let mut open_after = vec![Vec::new(); nvars];
        for (k, eq) in equations.iter().enumerate() {
            let first = eq.terms.iter().map(|t| t.0).min();
            let last = eq.terms.iter().map(|t| t.0).max();
            if let (Some(first), Some(last)) = (first, last) {
                closing[last].push(k);
                for open in &mut open_after[first..last] {
                    open.push(k);
                }
            }
        }
        Self { nvars, bound, equations, closing, open_after }
    }

    /// Trivially infeasible: an equation with no variables and nonzero rhs.
    fn has_empty_contradiction(&self) -> bool {
        self.equations.iter().any(|e| e.terms.is_empty() && !e.rhs.is_zero())
    }

    fn partial(&self, eq: &LinearEquation<T>, x: &[T], assigned: usize) -> (T, T, T) {
        let mut value = T::zero();
        let mut lo = T::zero();
        let mut hi = T::zero();
        for (var, c) in &eq.terms {
            if *var < assigned {
                value = value + c.clone() * x[*var].clone();
            } else {
                let extreme = c.clone() * self.bound.clone();
                if extreme.is_negative() {
                    lo = lo + extreme;
                } else {
                    hi = hi + extreme;
                }
            }
        }
        (value, lo, hi)
    }

    fn for_each_solution<B>(&self, mut visit: impl FnMut(&[T]) -> ControlFlow<B>) -> Option<B> {
        if self.has_empty_contradiction() {
            return None;
        }
        if self.nvars == 0 {
            return match visit(&[]) {
                ControlFlow::Break(b) => Some(b),
                ControlFlow::Continue(()) => None,
            };
        }
        let mut x = vec![T::zero(); self.nvars];
        self.descend(0, &mut x, &mut visit)
    }

    fn descend<B>(
        &self,
        var: usize,
        x: &mut Vec<T>,
        visit: &mut impl FnMut(&[T]) -> ControlFlow<B>,
    ) -> Option<B> {
        let mut value = T::zero();
        while value <= self.bound {
            x[var] = value.clone();
            if self.consistent(var, x) {
                if var + 1 == self.nvars {
                    if let ControlFlow::Break(b) = visit(x) {
                        return Some(b);
                    }
                } else if let Some(b) = self.descend(var + 1, x, visit) {
                    return Some(b);
                }
            }
            value = value + T::one();
        }
        None
    }

    fn consistent(&self, var: usize, x: &[T]) -> bool {
        let assigned = var + 1;
        self.closing[var].iter().all(|&k| {
            let eq = &self.equations[k];
            self.partial(eq, x, assigned).0 == eq.rhs
        }) && self.open_after[var].iter().all(|&k| {
            let eq = &self.equations[k];
            let (value, lo, hi) = self.partial(eq, x, assigned);
            value.clone() + lo <= eq.rhs && eq.rhs <= value + hi
        })
    }
}

fn var(row: usize, col: usize, cols: usize) -> usize {
    row * cols + col
}

/// `AR - RB = 0` with R unknown (`v x w`).
fn intertwining_system<T: Exact>(a: &Matrix<T>, b: &Matrix<T>, bound: &T) -> BoxedSystem<T> {
    let (v, w) = (a.rows(), b.rows());
    let mut equations = Vec::new();
    for i in 0..v {
        for j in 0..w {
            let mut coeff = vec![T::zero(); v * w];
            for k in 0..v {
                coeff[var(k, j, w)] = coeff[var(k, j, w)].clone() + a.get(i, k).clone();
            }
            for k in 0..w {
                coeff[var(i, k, w)] = coeff[var(i, k, w)].clone() - b.get(k, j).clone();
            }
            equations.push(sparse(coeff, T::zero()));
        }
    }
    BoxedSystem::new(v * w, bound.clone(), equations)
}

/// With R fixed: `BS - SA = 0`, `RS = A^m`, `SR = B^m`, S unknown (`w x v`).
fn factor_system<T: Exact>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    r: &Matrix<T>,
    a_pow: &Matrix<T>,
    b_pow: &Matrix<T>,
    bound: &T,
) -> BoxedSystem<T> {
    let (v, w) = (a.rows(), b.rows());
    let n = w * v;
    let mut equations = Vec::new();
    for i in 0..w {
        for j in 0..v {
            let mut coeff = vec![T::zero(); n];
            for k in 0..w {
                coeff[var(k, j, v)] = coeff[var(k, j, v)].clone() + b.get(i, k).clone();
            }
            for k in 0..v {
                coeff[var(i, k, v)] = coeff[var(i, k, v)].clone() - a.get(k, j).clone();
            }
            equations.push(sparse(coeff, T::zero()));
        }
    }
    for i in 0..v {
        for j in 0..v {
            let mut coeff = vec![T::zero(); n];
            for k in 0..w {
                coeff[var(k, j, v)] = r.get(i, k).clone();
            }
            equations.push(sparse(coeff, a_pow.get(i, j).clone()));
        }
    }
    for i in 0..w {
        for j in 0..w {
            let mut coeff = vec![T::zero(); n];
            for k in 0..v {
                coeff[var(i, k, v)] = r.get(k, j).clone();
            }
            equations.push(sparse(coeff, b_pow.get(i, j).clone()));
        }
    }
    BoxedSystem::new(n, bound.clone(), equations)
}

fn sparse<T: Exact>(coeff: Vec<T>, rhs: T) -> LinearEquation<T> {
    LinearEquation {
        terms: coeff.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect(),
        rhs,
    }
}

struct SearchProblem<T> {
    a: Matrix<T>,
    b: Matrix<T>,
    a_pow: Matrix<T>,
    b_pow: Matrix<T>,
    lag: u32,
    bound: T,
}

impl<T: Exact> SearchProblem<T> {
    fn new(a: &Matrix<T>, b: &Matrix<T>, lag: u32, entry_bound: u64) -> Result<Self> {
        if !a.is_essential()? || !b.is_essential()? {
            return Err(domain("search requires essential matrices"));
        }
        if lag == 0 {
            return Err(domain("lag must be at least 1"));
        }
        let bound = T::from_u64(entry_bound).ok_or_else(|| shape("entry bound too large"))?;
        Ok(Self {
            a: a.clone(),
            b: b.clone(),
            a_pow: a.pow(lag)?,
            b_pow: b.pow(lag)?,
            lag,
            bound,
        })
    }

    fn to_matrix(values: &[T], rows: usize, cols: usize) -> Matrix<T> {
        Matrix::new(rows, cols, values.to_vec()).expect("sized by construction")
    }

    // A^m and B^m have no zero rows or columns, so neither does R.
    fn admissible_r(r: &Matrix<T>) -> bool {
        let rows_ok = r.iter_rows().all(|row| row.iter().any(|x| !x.is_zero()));
        let cols_ok = (0..r.cols()).all(|j| (0..r.rows()).any(|i| !r.get(i, j).is_zero()));
        rows_ok && cols_ok
    }

    fn complete(&self, r: Matrix<T>) -> Option<SeWitness<T>> {
        let (v, w) = (self.a.rows(), self.b.rows());
        let sys = factor_system(&self.a, &self.b, &r, &self.a_pow, &self.b_pow, &self.bound);
        let s = sys.for_each_solution(|vals| ControlFlow::Break(Self::to_matrix(vals, w, v)))?;
        let witness = SeWitness::new(self.a.clone(), self.b.clone(), r, s, self.lag);
        debug_assert!(witness.verify().unwrap_or(false));
        Some(witness)
    }

    fn run_serial(&self) -> Option<SeWitness<T>> {
        let (v, w) = (self.a.rows(), self.b.rows());
        let sys = intertwining_system(&self.a, &self.b, &self.bound);
        sys.for_each_solution(|vals| {
            let r = Self::to_matrix(vals, v, w);
            if !Self::admissible_r(&r) {
                return ControlFlow::Continue(());
            }
            match self.complete(r) {
                Some(wit) => ControlFlow::Break(wit),
                None => ControlFlow::Continue(()),
            }
        })
    }

    fn r_candidates(&self) -> Vec<Matrix<T>> {
        let (v, w) = (self.a.rows(), self.b.rows());
        let sys = intertwining_system(&self.a, &self.b, &self.bound);
        let mut out = Vec::new();
        sys.for_each_solution::<()>(|vals| {
            let r = Self::to_matrix(vals, v, w);
            if Self::admissible_r(&r) {
                out.push(r);
            }
            ControlFlow::Continue(())
        });
        out
    }
}

/// First witness `(R, S)` in lexicographic order with all entries in
/// `[0, entry_bound]`, or `None` if the box contains no witness.
pub fn search_se<T: Exact>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    lag: u32,
    entry_bound: u64,
) -> Result<Option<SeWitness<T>>> {
    Ok(SearchProblem::new(a, b, lag, entry_bound)?.run_serial())
}

/// Same contract as [`search_se`], with candidate `R` matrices checked on
/// `jobs` worker threads. The lexicographically first witness is returned
/// regardless of scheduling.
pub fn search_se_parallel<T: Exact>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    lag: u32,
    entry_bound: u64,
    jobs: usize,
) -> Result<Option<SeWitness<T>>> {
    let problem = SearchProblem::new(a, b, lag, entry_bound)?;
    if jobs <= 1 {
        return Ok(problem.run_serial());
    }
    let candidates = problem.r_candidates();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| domain(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        candidates
            .into_par_iter()
            .find_map_first(|r| problem.complete(r))
    }))
}
