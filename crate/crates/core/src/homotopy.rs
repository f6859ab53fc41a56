//! Piecewise-geodesic paths of block unitaries and homotopies of 1-arrows
//! built from them.

use std::fmt;

use nalgebra::SymmetricEigen;
use num_complex::Complex;
use num_traits::Float;

use crate::aligned::{build_from_se, AlignedShiftData, ShiftOverrides};
use crate::corr::{power_arrow, two_arrow_residual, BlockUnitary, CMatrix, GraphCorrespondence, ObjectPair, OneArrow};
use crate::error::{contract, domain, shape, Result};
use crate::scalar::{Exact, Real};
use crate::shift::SeWitness;

pub const DEFAULT_STEPS: usize = 16;

/// `U(t) = base · exp(s H)` for `t ∈ [t0, t1]`, `s = (t − t0) / (t1 − t0)`,
/// with `H` skew-Hermitian per block.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment<T: Real> {
    pub t0: T,
    pub t1: T,
    pub base: BlockUnitary<T>,
    pub generator: Vec<CMatrix<T>>,
}

/// exp of a skew-Hermitian matrix through the eigendecomposition of `−iH`.
fn exp_skew<T: Real>(h: &CMatrix<T>, s: T) -> CMatrix<T> {
    let n = h.nrows();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let i = Complex::new(T::zero(), T::one());
    let k = h.map(|z| -z * i);
    let k = (&k + k.adjoint()).map(|z| z * Complex::from(T::from_f64_lossy(0.5)));
    let eig = SymmetricEigen::new(k);
    let v = eig.eigenvectors;
    let d = CMatrix::from_diagonal(&eig.eigenvalues.map(|x| Complex::from_polar(T::one(), s * x)));
    &v * d * v.adjoint()
}

/// Principal logarithm of a unitary: eigenvalue arguments in `(−π, π]`,
/// with `−1` sent to `+π`.
///
/// The spectrum is rotated by a phase `e^{iφ}` chosen so that `−1` is far
/// from it, and the eigenvectors come from the Hermitian Cayley transform
/// `C = i(I − U)(I + U)⁻¹` of `U = e^{iφ}W`, whose eigenvalues
/// `tan(α/2)` are injective in the eigenvalue angle `α` of `U`. Unlike a
/// Schur iteration on `W` itself this always converges.
pub fn unitary_log<T: Real>(w: &CMatrix<T>) -> CMatrix<T> {
    let n = w.nrows();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let pi = <T as nalgebra::RealField>::pi();
    let two_pi = pi + pi;
    let eye = CMatrix::<T>::identity(n, n);
    let candidates = (2 * n + 2).max(8);
    let mut best = (T::zero(), T::from_f64_lossy(-1.0));
    for k in 0..candidates {
        let phi = two_pi * T::from_f64_lossy(k as f64 / candidates as f64);
        let shifted = &eye + w.map(|z| z * Complex::from_polar(T::one(), phi));
        let sigma = shifted
            .singular_values()
            .iter()
            .fold(T::infinity(), |a, &b| if b < a { b } else { a });
        if sigma > best.1 {
            best = (phi, sigma);
        }
    }
    let phi = best.0;
    let u = w.map(|z| z * Complex::from_polar(T::one(), phi));
    let i = Complex::new(T::zero(), T::one());
    let inv = (&eye + &u).try_inverse().expect("I + U is well conditioned by the choice of phase");
    let c = (&eye - &u) * inv * i;
    let c = (&c + c.adjoint()).map(|z| z * Complex::from(T::from_f64_lossy(0.5)));
    let eig = SymmetricEigen::new(c);
    let snap = T::from_f64_lossy(64.0) * T::epsilon();
    let thetas = eig.eigenvalues.iter().map(|&mu| {
        let half = Float::atan(mu);
        let mut theta = (half + half) - phi;
        while theta <= -pi - snap {
            theta += two_pi;
        }
        while theta > pi + snap {
            theta -= two_pi;
        }
        if Float::abs(Float::abs(theta) - pi) <= snap { pi } else { theta }
    });
    let v = eig.eigenvectors;
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, thetas.map(|x| Complex::new(T::zero(), x))));
    let h = &v * d * v.adjoint();
    (&h - h.adjoint()).map(|z| z * Complex::from(T::from_f64_lossy(0.5)))
}

impl<T: Real> Segment<T> {
    fn at(&self, t: T) -> BlockUnitary<T> {
        let span = self.t1 - self.t0;
        let s = if span > T::zero() { (t - self.t0) / span } else { T::zero() };
        let mut k = 0;
        self.base
            .map_blocks(|_, _, b| {
                let out = b * exp_skew(&self.generator[k], s);
                k += 1;
                out
            })
            .expect("blocks keep their shapes")
    }
}

/// Continuous path of block unitaries between two fixed correspondences,
/// with samples at `t = k / (steps − 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryPath<T: Real> {
    segments: Vec<Segment<T>>,
    samples: Vec<(T, BlockUnitary<T>)>,
}

fn sample_grid<T: Real>(steps: usize) -> impl Iterator<Item = T> {
    let denom = T::from_f64_lossy((steps - 1) as f64);
    (0..steps).map(move |k| T::from_f64_lossy(k as f64) / denom)
}

impl<T: Real> UnitaryPath<T> {
    /// Builds a path from segments covering `[0, 1]` in order and samples it.
    pub fn from_segments(segments: Vec<Segment<T>>, steps: usize) -> Result<Self> {
        let mut path = Self { segments, samples: Vec::new() };
        path.check_segments()?;
        path.resample(steps)?;
        Ok(path)
    }

    /// Path with explicitly given samples (e.g. read back from a file).
    pub fn from_parts(segments: Vec<Segment<T>>, samples: Vec<(T, BlockUnitary<T>)>) -> Result<Self> {
        let path = Self { segments, samples };
        path.check_segments()?;
        let first = &path.segments[0].base;
        for (t, u) in &path.samples {
            if u.source() != first.source() || u.target() != first.target() {
                return Err(shape(format!("sample at t = {t} has different endpoints")));
            }
        }
        Ok(path)
    }

    fn check_segments(&self) -> Result<()> {
        let Some(first) = self.segments.first() else {
            return Err(domain("a path needs at least one segment"));
        };
        if first.t0 != T::zero() || self.segments.last().is_some_and(|s| s.t1 != T::one()) {
            return Err(domain("segments must cover [0, 1]"));
        }
        for pair in self.segments.windows(2) {
            if pair[0].t1 != pair[1].t0 {
                return Err(domain("segments must be contiguous"));
            }
        }
        for seg in &self.segments {
            if seg.t1 < seg.t0 {
                return Err(domain("segment runs backwards"));
            }
            if seg.base.source() != first.base.source() || seg.base.target() != first.base.target() {
                return Err(shape("segments act between different correspondences"));
            }
            if seg.generator.len() != seg.base.blocks().len()
                || seg.generator.iter().zip(seg.base.blocks()).any(|(h, b)| h.shape() != b.shape())
            {
                return Err(shape("generator blocks do not match the base"));
            }
        }
        Ok(())
    }

    fn resample(&mut self, steps: usize) -> Result<()> {
        if steps < 2 {
            return Err(domain("a sampled path needs at least 2 steps"));
        }
        self.samples = sample_grid(steps).map(|t| (t, self.at(t))).collect();
        Ok(())
    }

    /// `U(t)` from the closed form; `t` is clamped to `[0, 1]`.
    pub fn at(&self, t: T) -> BlockUnitary<T> {
        let t = Float::min(Float::max(t, T::zero()), T::one());
        let seg = self
            .segments
            .iter()
            .find(|s| t <= s.t1)
            .unwrap_or_else(|| self.segments.last().expect("non-empty"));
        seg.at(t)
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    pub fn samples(&self) -> &[(T, BlockUnitary<T>)] {
        &self.samples
    }

    pub fn source(&self) -> &BlockUnitary<T> {
        &self.samples[0].1
    }

    pub fn target(&self) -> &BlockUnitary<T> {
        &self.samples[self.samples.len() - 1].1
    }

    /// Replaces sample `index`, keeping its time.
    pub fn with_sample(&self, index: usize, u: BlockUnitary<T>) -> Result<Self> {
        let mut out = self.clone();
        let Some(slot) = out.samples.get_mut(index) else {
            return Err(domain(format!("no sample {index}")));
        };
        if u.source() != slot.1.source() || u.target() != slot.1.target() {
            return Err(shape("replacement sample has different endpoints"));
        }
        slot.1 = u;
        Ok(out)
    }

    /// `t ↦ U(1 − t)`.
    pub fn reversed(&self) -> Self {
        let one = T::one();
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| Segment {
                t0: one - s.t1,
                t1: one - s.t0,
                base: s.at(s.t1),
                generator: s.generator.iter().map(|h| -h).collect(),
            })
            .collect();
        let samples = self.samples.iter().rev().map(|(t, u)| (one - *t, u.clone())).collect();
        Self { segments, samples }
    }

    /// `t ↦ post · U(t) · pre` for unitaries `pre` into the source and
    /// `post` out of the target.
    pub fn transported(&self, pre: &BlockUnitary<T>, post: &BlockUnitary<T>) -> Result<Self> {
        let segments = self
            .segments
            .iter()
            .map(|s| {
                let base = pre.then(&s.base)?.then(post)?;
                let generator = s
                    .generator
                    .iter()
                    .zip(pre.blocks())
                    .map(|(h, p)| p.adjoint() * h * p)
                    .collect();
                Ok(Segment { t0: s.t0, t1: s.t1, base, generator })
            })
            .collect::<Result<Vec<_>>>()?;
        let samples = self
            .samples
            .iter()
            .map(|(t, u)| Ok((*t, pre.then(u)?.then(post)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { segments, samples })
    }

    /// `self` on `[0, ½]` followed by `next` on `[½, 1]`; both must act
    /// between the same correspondences.
    pub fn concatenated(&self, next: &Self, steps: usize) -> Result<Self> {
        let half = T::from_f64_lossy(0.5);
        let squeeze = |s: &Segment<T>, offset: T| Segment {
            t0: offset + s.t0 * half,
            t1: offset + s.t1 * half,
            base: s.base.clone(),
            generator: s.generator.clone(),
        };
        let mut segments: Vec<_> = self.segments.iter().map(|s| squeeze(s, T::zero())).collect();
        segments.extend(next.segments.iter().map(|s| squeeze(s, half)));
        if let Some(last) = segments.last_mut() {
            last.t1 = T::one();
        }
        Self::from_segments(segments, steps)
    }
}

/// Geodesic `U(t) = U₀ exp(t log(U₀* U₁))`, sampled at `steps` points.
pub fn connect_unitaries<T: Real>(u0: &BlockUnitary<T>, u1: &BlockUnitary<T>, steps: usize) -> Result<UnitaryPath<T>> {
    if u0.source() != u1.source() || u0.target() != u1.target() {
        return Err(shape("cannot connect unitaries between different correspondences"));
    }
    let generator = u0
        .blocks()
        .iter()
        .zip(u1.blocks())
        .map(|(a, b)| unitary_log(&(a.adjoint() * b)))
        .collect();
    let seg = Segment { t0: T::zero(), t1: T::one(), base: u0.clone(), generator };
    UnitaryPath::from_segments(vec![seg], steps)
}

/// Homotopy `(H, Φ_H, h₀, h₁)` from `f_arrow` to `g_arrow`, stored
/// fiberwise: `H` is the constant correspondence `fiber`, `Φ_H` at time `t`
/// is `path(t) : Y ⊗ H → H ⊗ X`, and `h₀ : H → F`, `h₁ : H → G`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrowHomotopy<T: Real> {
    pub f_arrow: OneArrow<T>,
    pub g_arrow: OneArrow<T>,
    pub fiber: GraphCorrespondence,
    pub path: UnitaryPath<T>,
    pub h0: BlockUnitary<T>,
    pub h1: BlockUnitary<T>,
}

/// Where a homotopy check first failed.
#[derive(Clone, Debug, PartialEq)]
pub enum HomotopyFailure {
    Shape(String),
    StartNotTwoArrow { residual: f64 },
    EndNotTwoArrow { residual: f64 },
    EndpointMapNotUnitary { end: usize, residual: f64 },
    SampleNotUnitary { index: usize, t: f64, residual: f64 },
    SampleOffPath { index: usize, t: f64, deviation: f64 },
}

impl fmt::Display for HomotopyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomotopyFailure::Shape(msg) => write!(f, "malformed homotopy: {msg}"),
            HomotopyFailure::StartNotTwoArrow { residual } => {
                write!(f, "h0 is not a 2-arrow at t = 0 (residual {residual:e})")
            }
            HomotopyFailure::EndNotTwoArrow { residual } => {
                write!(f, "h1 is not a 2-arrow at t = 1 (residual {residual:e})")
            }
            HomotopyFailure::EndpointMapNotUnitary { end, residual } => {
                write!(f, "h{end} is not unitary (defect {residual:e})")
            }
            HomotopyFailure::SampleNotUnitary { index, t, residual } => {
                write!(f, "sample {index} (t = {t}) is not unitary (defect {residual:e})")
            }
            HomotopyFailure::SampleOffPath { index, t, deviation } => {
                write!(f, "sample {index} (t = {t}) deviates from the path by {deviation:e}")
            }
        }
    }
}

/// Outcome of [`verify_homotopy`]; residuals are reported as `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotopyReport {
    pub ok: bool,
    pub first_failure: Option<HomotopyFailure>,
    pub start_residual: f64,
    pub end_residual: f64,
    pub max_sample_unitarity: f64,
    pub max_sample_deviation: f64,
}

impl<T: Real> ArrowHomotopy<T> {
    /// The 1-arrow `[H_t, Φ_{H_t}]` at sample `index`.
    pub fn sample_arrow(&self, index: usize) -> Result<OneArrow<T>> {
        let (_, u) = self
            .samples()
            .get(index)
            .ok_or_else(|| domain(format!("no sample {index}")))?;
        OneArrow::new(self.f_arrow.to().clone(), self.f_arrow.from().clone(), self.fiber.clone(), u.clone())
    }

    pub fn samples(&self) -> &[(T, BlockUnitary<T>)] {
        self.path.samples()
    }

    /// Homotopy from `g` to `f`.
    pub fn reversed(&self) -> Self {
        Self {
            f_arrow: self.g_arrow.clone(),
            g_arrow: self.f_arrow.clone(),
            fiber: self.fiber.clone(),
            path: self.path.reversed(),
            h0: self.h1.clone(),
            h1: self.h0.clone(),
        }
    }

    /// `self : F ∼ G` followed by `next : G ∼ K`. The second path is moved
    /// onto this fiber through `κ = next.h₀* ∘ self.h₁`.
    pub fn concatenated(&self, next: &Self, steps: usize) -> Result<Self> {
        let kappa = self.h1.then(&next.h0.adjoint())?;
        let y = BlockUnitary::identity(self.f_arrow.to().x());
        let x = BlockUnitary::identity(self.f_arrow.from().x());
        let moved = next.path.transported(&y.tensor(&kappa)?, &kappa.adjoint().tensor(&x)?)?;
        Ok(Self {
            f_arrow: self.f_arrow.clone(),
            g_arrow: next.g_arrow.clone(),
            fiber: self.fiber.clone(),
            path: self.path.concatenated(&moved, steps)?,
            h0: self.h0.clone(),
            h1: kappa.then(&next.h1)?,
        })
    }
}

/// Constant homotopy of a 1-arrow to itself.
pub fn constant_homotopy<T: Real>(f: &OneArrow<T>, steps: usize) -> Result<ArrowHomotopy<T>> {
    let path = connect_unitaries(f.phi(), f.phi(), steps)?;
    let id = BlockUnitary::identity(f.f());
    Ok(ArrowHomotopy { f_arrow: f.clone(), g_arrow: f.clone(), fiber: f.f().clone(), path, h0: id.clone(), h1: id })
}

/// Homotopy from `[X^{⊗m}, 1]` to `[X^{⊗m}, Φ]` along the geodesic from the
/// identity to `Φ`, with `h₀ = h₁ = 1`. Only the blocks of `phi` are used.
pub fn homotopy_to_identity<T: Real>(
    phi: &BlockUnitary<T>,
    obj: &ObjectPair,
    m: usize,
    steps: usize,
) -> Result<ArrowHomotopy<T>> {
    let f_arrow = power_arrow(obj, m)?;
    let fiber = f_arrow.f().clone();
    let phi = phi.clone().with_endpoints(obj.x().tensor(&fiber)?, fiber.tensor(obj.x())?)?;
    let g_arrow = f_arrow.with_phi(phi)?;
    let path = connect_unitaries(f_arrow.phi(), g_arrow.phi(), steps)?;
    let id = BlockUnitary::identity(&fiber);
    Ok(ArrowHomotopy { f_arrow, g_arrow, fiber, path, h0: id.clone(), h1: id })
}

/// Checks the endpoint 2-arrows, that every sample is unitary, and that
/// every sample lies on the closed-form path.
pub fn verify_homotopy<T: Real>(h: &ArrowHomotopy<T>, tol: T) -> HomotopyReport {
    let mut report = HomotopyReport {
        ok: false,
        first_failure: None,
        start_residual: f64::NAN,
        end_residual: f64::NAN,
        max_sample_unitarity: 0.0,
        max_sample_deviation: 0.0,
    };
    let tol_f = tol.to_f64_lossy();
    let fail = |report: &mut HomotopyReport, f: HomotopyFailure| {
        if report.first_failure.is_none() {
            report.first_failure = Some(f);
        }
    };

    let samples = h.samples();
    let n = samples.len();
    if n < 2 || samples[0].0 != T::zero() || samples[n - 1].0 != T::one() {
        fail(&mut report, HomotopyFailure::Shape("samples must start at t = 0 and end at t = 1".into()));
        return report;
    }
    for (end, map) in [(0, &h.h0), (1, &h.h1)] {
        let r = map.unitarity_residual().to_f64_lossy();
        if r.is_nan() || r > tol_f {
            fail(&mut report, HomotopyFailure::EndpointMapNotUnitary { end, residual: r });
        }
    }
    let endpoint = |index: usize, map: &BlockUnitary<T>, arrow: &OneArrow<T>| -> Result<f64> {
        let fiber_arrow = h.sample_arrow(index)?;
        Ok(two_arrow_residual(map, &fiber_arrow, arrow)?.to_f64_lossy())
    };
    match endpoint(0, &h.h0, &h.f_arrow) {
        Ok(r) => {
            report.start_residual = r;
            if r.is_nan() || r > tol_f {
                fail(&mut report, HomotopyFailure::StartNotTwoArrow { residual: r });
            }
        }
        Err(e) => fail(&mut report, HomotopyFailure::Shape(e.to_string())),
    }
    match endpoint(n - 1, &h.h1, &h.g_arrow) {
        Ok(r) => {
            report.end_residual = r;
            if r.is_nan() || r > tol_f {
                fail(&mut report, HomotopyFailure::EndNotTwoArrow { residual: r });
            }
        }
        Err(e) => fail(&mut report, HomotopyFailure::Shape(e.to_string())),
    }
    for (index, (t, u)) in samples.iter().enumerate() {
        let t_f = t.to_f64_lossy();
        let r = u.unitarity_residual().to_f64_lossy();
        report.max_sample_unitarity = report.max_sample_unitarity.max(r);
        if r.is_nan() || r > tol_f {
            fail(&mut report, HomotopyFailure::SampleNotUnitary { index, t: t_f, residual: r });
        }
        let d = match u.distance(&h.path.at(*t)) {
            Ok(d) => d.to_f64_lossy(),
            Err(e) => {
                fail(&mut report, HomotopyFailure::Shape(e.to_string()));
                continue;
            }
        };
        report.max_sample_deviation = report.max_sample_deviation.max(d);
        if d.is_nan() || d > tol_f {
            fail(&mut report, HomotopyFailure::SampleOffPath { index, t: t_f, deviation: d });
        }
    }
    report.ok = report.first_failure.is_none();
    report
}

/// A concrete shift together with homotopies
/// `[M ⊗ N, Φ_M ⊙ Φ_N] ∼ [X^{⊗m}, 1]` and `[N ⊗ M, Φ_N ⊙ Φ_M] ∼ [Y^{⊗m}, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotopyShiftBundle<T: Real> {
    pub shift: AlignedShiftData<T>,
    pub x_homotopy: ArrowHomotopy<T>,
    pub y_homotopy: ArrowHomotopy<T>,
}

// [P ⊗ Q, Φ_P ⊙ Φ_Q] ∼ [X^{⊗m}, 1]: move the composite intertwiner onto
// X^{⊗m} with ψ, connect it to the identity, then swap the far end back.
fn side_homotopy<T: Real>(
    p: &OneArrow<T>,
    q: &OneArrow<T>,
    psi: &BlockUnitary<T>,
    obj: &ObjectPair,
    m: usize,
    steps: usize,
) -> Result<ArrowHomotopy<T>> {
    let composite = crate::corr::compose_one_arrows(p, q)?;
    let id_x = BlockUnitary::identity(obj.x());
    let moved = id_x
        .tensor(&psi.adjoint())?
        .then(composite.phi())?
        .then(&psi.tensor(&id_x)?)?;
    let mut h = homotopy_to_identity(&moved, obj, m, steps)?;
    h.g_arrow = composite;
    h.h1 = h.h1.then(&psi.adjoint())?;
    Ok(h.reversed())
}

/// Concrete homotopy shift from a verified witness: the canonical concrete
/// shift plus a homotopy for each side.
pub fn homotopy_shift_equivalence_from_se<E: Exact, T: Real>(
    w: &SeWitness<E>,
    steps: usize,
) -> Result<HomotopyShiftBundle<T>> {
    if !w.verify()? {
        return Err(contract("witness does not verify"));
    }
    let shift: AlignedShiftData<T> = build_from_se(w, ShiftOverrides::default())?;
    let m = shift.lag();
    let x_homotopy = side_homotopy(shift.m_arrow(), shift.n_arrow(), shift.psi_x(), shift.x_obj(), m, steps)?;
    let y_homotopy = side_homotopy(shift.n_arrow(), shift.m_arrow(), shift.psi_y(), shift.y_obj(), m, steps)?;
    Ok(HomotopyShiftBundle { shift, x_homotopy, y_homotopy })
}

impl<T: Real> Segment<T> {
    /// Largest `‖H + H*‖_op` over blocks; zero for a skew-Hermitian generator.
    pub fn skew_defect(&self) -> T {
        self.generator
            .iter()
            .map(|h| crate::corr::op_norm(&(h + h.adjoint())))
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::{op_norm, random_unitary};
    use crate::linalg::int_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-9;

    fn corr(rows: &[&[i64]]) -> GraphCorrespondence {
        GraphCorrespondence::from_matrix_default(&int_matrix::<i64>(rows)).unwrap()
    }

    #[test]
    fn log_of_scalar_phase() {
        let w = CMatrix::from_element(1, 1, Complex::new(0.0, 1.0));
        let h = unitary_log(&w);
        assert!((h[(0, 0)] - Complex::new(0.0, std::f64::consts::FRAC_PI_2)).norm() < 1e-14);
        let minus_one = CMatrix::from_element(1, 1, Complex::new(-1.0, -0.0));
        assert!((unitary_log(&minus_one)[(0, 0)].im - std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn log_handles_degenerate_spectra() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let c = |re: f64, im: f64| Complex::new(re, im);
        let spectra = [
            vec![c(-1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)],
            vec![c(1.0, 0.0); 4],
            vec![c(-1.0, 0.0), c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0)],
        ];
        for spectrum in spectra {
            let n = spectrum.len();
            let q = random_unitary::<f64, _>(n, &mut rng);
            let w = &q * CMatrix::from_diagonal(&nalgebra::DVector::from_vec(spectrum)) * q.adjoint();
            let h = unitary_log(&w);
            assert!(op_norm(&(exp_skew(&h, 1.0) - &w)) < 1e-12);
            let mut args: Vec<f64> = SymmetricEigen::new(h.map(|z| z * Complex::new(0.0, -1.0))).eigenvalues.iter().copied().collect();
            args.sort_by(f64::total_cmp);
            assert!(args.iter().all(|&t| t > -std::f64::consts::PI + 1e-9 && t <= std::f64::consts::PI + 1e-12));
        }
    }

    #[test]
    fn log_round_trips_random_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for k in 0..200 {
            let n = 1 + k % 12;
            let w = random_unitary::<f64, _>(n, &mut rng);
            let h = unitary_log(&w);
            assert!(op_norm(&(&h + h.adjoint())) < 1e-13);
            assert!(op_norm(&(exp_skew(&h, 1.0) - &w)) < 1e-12, "size {n}");
        }
    }

    #[test]
    fn quarter_turn_samples() {
        let x = corr(&[&[1]]);
        let u0 = BlockUnitary::<f64>::identity(&x);
        let u1 = u0.map_blocks(|_, _, _| CMatrix::from_element(1, 1, Complex::new(0.0, 1.0))).unwrap();
        let path = connect_unitaries(&u0, &u1, 5).unwrap();
        for (t, u) in path.samples() {
            let expected = Complex::from_polar(1.0, std::f64::consts::FRAC_PI_2 * t);
            assert!((u.block(0, 0)[(0, 0)] - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn constant_path_has_zero_generator() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = corr(&[&[3, 1], &[0, 2]]);
        let u = BlockUnitary::<f64>::random(x.clone(), x, &mut rng).unwrap();
        let path = connect_unitaries(&u, &u, 4).unwrap();
        for h in &path.segments()[0].generator {
            assert!(h.norm() < 1e-12);
        }
    }

    #[test]
    fn random_four_by_four_endpoints() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = corr(&[&[4]]);
        let u0 = BlockUnitary::<f64>::random(x.clone(), x.clone(), &mut rng).unwrap();
        let u1 = BlockUnitary::<f64>::random(x.clone(), x, &mut rng).unwrap();
        let path = connect_unitaries(&u0, &u1, 9).unwrap();
        assert!(path.source().distance(&u0).unwrap() < 1e-10);
        assert!(path.target().distance(&u1).unwrap() < 1e-10);
        assert!(path.samples().iter().all(|(_, u)| u.unitarity_residual() < 1e-10));
        assert!(path.segments()[0].skew_defect() < 1e-12);
    }

    #[test]
    fn homotopy_to_identity_verifies() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let obj = ObjectPair::from_matrix(&int_matrix::<i64>(&[&[2]])).unwrap();
        let f = obj.x().clone();
        let phi = BlockUnitary::<f64>::from_fn(obj.x().tensor(&f).unwrap(), f.tensor(obj.x()).unwrap(), |_, _, d| {
            random_unitary(d, &mut rng)
        })
        .unwrap();
        let h = homotopy_to_identity(&phi, &obj, 1, 8).unwrap();
        let report = verify_homotopy(&h, TOL);
        assert!(report.ok, "{report:?}");
        assert_eq!(h.path.source().blocks().len(), 1);
        assert_eq!(h.path.source().block(0, 0).nrows(), 4);

        let broken = ArrowHomotopy {
            path: h.path.with_sample(3, h.path.samples()[3].1.map_blocks(|_, _, b| b * Complex::from(2.0)).unwrap()).unwrap(),
            ..h.clone()
        };
        let report = verify_homotopy(&broken, TOL);
        assert!(!report.ok);
        assert!(matches!(report.first_failure, Some(HomotopyFailure::SampleNotUnitary { index: 3, .. })));
    }

    #[test]
    fn reverse_and_concatenate() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let obj = ObjectPair::from_matrix(&int_matrix::<i64>(&[&[1, 1], &[1, 1]])).unwrap();
        let f = obj.x().power(2).unwrap();
        let src = obj.x().tensor(&f).unwrap();
        let tgt = f.tensor(obj.x()).unwrap();
        let phi1 = BlockUnitary::<f64>::random(src.clone(), tgt.clone(), &mut rng).unwrap();
        let phi2 = BlockUnitary::<f64>::random(src, tgt, &mut rng).unwrap();
        let h1 = homotopy_to_identity(&phi1, &obj, 2, 6).unwrap();
        let h2 = homotopy_to_identity(&phi2, &obj, 2, 6).unwrap();
        let back = h1.reversed();
        assert!(verify_homotopy(&back, TOL).ok);
        // [X², Φ1] ∼ [X², 1] ∼ [X², Φ2]
        let joined = back.concatenated(&h2, 11).unwrap();
        let report = verify_homotopy(&joined, TOL);
        assert!(report.ok, "{report:?}");
        assert!(verify_homotopy(&constant_homotopy(&h1.g_arrow, 4).unwrap(), TOL).ok);
    }

    #[test]
    fn from_se_end_to_end() {
        let w = SeWitness::<i64>::new(
            int_matrix(&[&[2]]),
            int_matrix(&[&[1, 1], &[1, 1]]),
            int_matrix(&[&[1, 1]]),
            int_matrix(&[&[1], &[1]]),
            1,
        );
        let bundle: HomotopyShiftBundle<f64> = homotopy_shift_equivalence_from_se(&w, 16).unwrap();
        for h in [&bundle.x_homotopy, &bundle.y_homotopy] {
            let report = verify_homotopy(h, TOL);
            assert!(report.ok, "{report:?}");
            assert_eq!(h.samples().len(), 16);
        }
    }

    #[test]
    fn identity_witness_gives_constant_homotopies() {
        let a = int_matrix::<i64>(&[&[1, 1], &[1, 0]]);
        let bundle: HomotopyShiftBundle<f64> = homotopy_shift_equivalence_from_se(&SeWitness::identity(&a), 5).unwrap();
        for h in [&bundle.x_homotopy, &bundle.y_homotopy] {
            assert!(verify_homotopy(h, TOL).ok);
            let first = &h.samples()[0].1;
            assert!(h.samples().iter().all(|(_, u)| u.distance(first).unwrap() < 1e-12));
        }
    }
}
