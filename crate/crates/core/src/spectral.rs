//! Matrices indexed by `A × A` built from `r = r_{A-A}`, their traces, and
//! the principal-eigenvalue chain bounding `E'` by `E_3` and `Σ`.

use num_bigint::BigUint;
use num_traits::{Float, ToPrimitive};
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::energy::{self, difference_table};
use crate::ground::Ground;
use crate::setops::GSet;
use crate::{guard, Error, Result};

/// Largest order of the dense matrices.
pub const DENSE_GUARD: usize = 512;
/// Iteration cap for [`principal_eigen`].
pub const MAX_ITER: usize = 100_000;

/// Dense row-major matrices of one set.
#[derive(Debug, Clone)]
pub struct EnergyMatrices<F> {
    pub order: usize,
    pub delta: u64,
    /// `M_ab = sqrt(r(a-b))`.
    pub m: Vec<F>,
    /// `M'_ab = Δ^{-1/2} r(a-b)` when `r(a-b) <= Δ`, else 0.
    pub mprime: Vec<F>,
    /// `R_ab = r(a-b)`, exact.
    pub r: Vec<u64>,
    /// For each `x ∈ A - A`, the indices `a` with `x + a ∈ A`.
    pub shifts: Vec<Vec<usize>>,
    /// The elements of `A` in index order.
    pub index: Vec<String>,
}

impl<F: Float> EnergyMatrices<F> {
    pub fn r_as_float(&self) -> Vec<F> {
        self.r.iter().map(|&x| F::from(x).expect("small integer")).collect()
    }
}

pub fn build_matrices<T: Ground, F: Float>(a: &GSet<T>, delta: u64) -> Result<EnergyMatrices<F>> {
    if delta < 1 {
        return Err(Error::DegenerateInput("Δ must be at least 1".into()));
    }
    let n = a.len();
    guard("matrix order", n as u128, DENSE_GUARD as u128)?;
    let t = difference_table(a);
    let el = a.elements();
    let scale = F::from(delta).expect("finite").sqrt().recip();
    let mut r = vec![0u64; n * n];
    let mut m = vec![F::zero(); n * n];
    let mut mprime = vec![F::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            let v = t.get(&el[i].minus(&el[j]));
            let fv = F::from(v).expect("finite");
            r[i * n + j] = v;
            m[i * n + j] = fv.sqrt();
            if v <= delta {
                mprime[i * n + j] = scale * fv;
            }
        }
    }
    let pos: FxHashMap<&T, usize> = el.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut shifts = Vec::with_capacity(t.len());
    for x in t.support() {
        shifts.push((0..n).filter(|&i| pos.contains_key(&x.plus(&el[i]))).collect());
    }
    Ok(EnergyMatrices { order: n, delta, m, mprime, r, shifts, index: el.iter().map(|x| x.to_string()).collect() })
}

fn quad_form<F: Float>(mat: &[F], n: usize, v: &[F]) -> F {
    let mut s = F::zero();
    for i in 0..n {
        let mut row = F::zero();
        for j in 0..n {
            row = row + mat[i * n + j] * v[j];
        }
        s = s + v[i] * row;
    }
    s
}

/// `vᵀRv` directly and as `Σ_x (Σ_a 1[x+a ∈ A] v_a)^2`.
pub fn psd_witness<F: Float>(mats: &EnergyMatrices<F>, v: &[F]) -> Result<(F, F)> {
    if v.len() != mats.order {
        return Err(Error::DimensionMismatch { expected: mats.order, got: v.len() });
    }
    let direct = quad_form(&mats.r_as_float(), mats.order, v);
    let squares = mats
        .shifts
        .iter()
        .map(|idx| {
            let s = idx.iter().fold(F::zero(), |acc, &i| acc + v[i]);
            s * s
        })
        .fold(F::zero(), |a, b| a + b);
    Ok((direct, squares))
}

/// `tr(M²R)` as a matrix product and as
/// `Σ_{d,d'} sqrt(r(d)) sqrt(r(d')) r(d-d') |A ∩ (A+d) ∩ (A+d')|`.
pub fn trace_m2r<T: Ground, F: Float>(mats: &EnergyMatrices<F>, a: &GSet<T>) -> Result<(F, F)> {
    let n = mats.order;
    if a.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: a.len() });
    }
    let r = mats.r_as_float();
    // (M·M)_{ik} then contract with R_{ki}.
    let mut direct = F::zero();
    for i in 0..n {
        for k in 0..n {
            let mut mm = F::zero();
            for j in 0..n {
                mm = mm + mats.m[i * n + j] * mats.m[j * n + k];
            }
            direct = direct + mm * r[k * n + i];
        }
    }

    let t = difference_table(a);
    let ds = t.support();
    let pos: FxHashMap<&T, usize> = ds.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let mut hits: FxHashMap<(usize, usize), u64> = FxHashMap::default();
    for x in a {
        let row: Vec<usize> = a.iter().map(|y| pos[&x.minus(y)]).collect();
        for &i in &row {
            for &j in &row {
                *hits.entry((i, j)).or_insert(0) += 1;
            }
        }
    }
    let f = |u: u64| F::from(u).expect("finite");
    let mut comb = F::zero();
    let mut keys: Vec<_> = hits.into_iter().collect();
    keys.sort_unstable();
    for ((i, j), c) in keys {
        let rd = t.get(&ds[i]);
        let re = t.get(&ds[j]);
        let rdiff = t.get(&ds[i].minus(&ds[j]));
        comb = comb + f(rd).sqrt() * f(re).sqrt() * f(rdiff) * f(c);
    }
    Ok((direct, comb))
}

/// Principal eigenpair of a symmetric entrywise-nonnegative matrix.
#[derive(Debug, Clone)]
pub struct Eigen<F> {
    pub mu1: F,
    /// Unit norm, first nonzero entry positive, entrywise nonnegative.
    pub v1: Vec<F>,
    pub iterations: usize,
}

/// Power iteration on `mat + sI` from the all-ones vector, `s` the largest row
/// sum, stopping once successive Rayleigh quotients differ by less than `tol`.
pub fn principal_eigen<F: Float>(mat: &[F], n: usize, tol: F) -> Result<Eigen<F>> {
    if mat.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n * n, got: mat.len() });
    }
    if n == 0 {
        return Ok(Eigen { mu1: F::zero(), v1: Vec::new(), iterations: 0 });
    }
    let shift = (0..n)
        .map(|i| (0..n).fold(F::zero(), |acc, j| acc + mat[i * n + j].abs()))
        .fold(F::zero(), F::max);
    let norm = |v: &[F]| v.iter().fold(F::zero(), |a, &x| a + x * x).sqrt();
    let nf = F::from(n).expect("finite");
    let mut v: Vec<F> = vec![nf.sqrt().recip(); n];
    if shift == F::zero() {
        return Ok(Eigen { mu1: F::zero(), v1: v, iterations: 0 });
    }
    let apply = |v: &[F], out: &mut [F]| {
        for i in 0..n {
            let mut s = shift * v[i];
            for j in 0..n {
                s = s + mat[i * n + j] * v[j];
            }
            out[i] = s;
        }
    };
    let mut w = vec![F::zero(); n];
    apply(&v, &mut w);
    let mut rho = v.iter().zip(&w).fold(F::zero(), |a, (&x, &y)| a + x * y);
    for it in 1..=MAX_ITER {
        let nw = norm(&w);
        for i in 0..n {
            v[i] = w[i] / nw;
        }
        apply(&v, &mut w);
        let next = v.iter().zip(&w).fold(F::zero(), |a, (&x, &y)| a + x * y);
        let done = (next - rho).abs() < tol;
        rho = next;
        if done {
            if let Some(first) = v.iter().find(|x| **x != F::zero()) {
                if *first < F::zero() {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
            }
            return Ok(Eigen { mu1: rho - shift, v1: v, iterations: it });
        }
    }
    Err(Error::NoConvergence(MAX_ITER))
}

/// The quantities of the eigenvalue argument for one `(A, Δ)`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralChain<F> {
    pub delta: u64,
    #[serde(with = "crate::decimal")]
    pub e_prime: BigUint,
    /// Rayleigh quotient of `v1` on `M'`.
    pub mu1: F,
    /// `Δ^{-1/2} E' / |A|`.
    pub mu1_lower: F,
    /// `v1ᵀ R v1`.
    pub rayleigh_r: F,
    pub trace_direct: F,
    pub trace_combinatorial: F,
    #[serde(with = "crate::decimal")]
    pub e3: BigUint,
    #[serde(with = "crate::decimal")]
    pub sigma: BigUint,
    /// `E'^6`.
    #[serde(with = "crate::decimal")]
    pub lhs: BigUint,
    /// `|A|^6 E_3 Δ^2 Σ`.
    #[serde(with = "crate::decimal")]
    pub rhs: BigUint,
    pub holds_i: bool,
    pub holds_ii: bool,
    pub holds_final: bool,
}

fn at_least<F: Float>(lhs: F, rhs: F, rel: F) -> bool {
    lhs >= rhs - rel * rhs.abs().max(F::one())
}

/// Evaluates `μ1(M') >= Δ^{-1/2}E'/|A|`, `v1ᵀRv1 >= Δ^{1/2} μ1` (both to
/// relative `1e-6`), and `E'^6 <= |A|^6 E_3 Δ^2 Σ` exactly.
pub fn spectral_chain_check<T: Ground, F: Float>(a: &GSet<T>, delta: u64) -> Result<SpectralChain<F>> {
    let mats: EnergyMatrices<F> = build_matrices(a, delta)?;
    let n = mats.order;
    let split = energy::tail_decompose(a, delta)?;
    let e_prime = split.e_prime;
    let f = |x: &BigUint| F::from(x.to_f64().unwrap_or(f64::INFINITY)).expect("finite");
    let nf = F::from(n).expect("finite");
    let sqrt_delta = F::from(delta).expect("finite").sqrt();

    let tol = F::from(1e-13).expect("finite") * nf * nf;
    let eig = principal_eigen(&mats.mprime, n, tol)?;
    let mu1 = quad_form(&mats.mprime, n, &eig.v1);
    let mu1_lower = f(&e_prime) / (sqrt_delta * nf);
    let rayleigh_r = quad_form(&mats.r_as_float(), n, &eig.v1);
    let (trace_direct, trace_combinatorial) = trace_m2r(&mats, a)?;

    let t = difference_table(a);
    let e3 = energy::e3(a);
    let sigma = energy::sigma_from_table(&t)?;
    let lhs = num_traits::pow(e_prime.clone(), 6);
    let rhs = num_traits::pow(BigUint::from(n), 6) * &e3 * BigUint::from(delta).pow(2) * &sigma;
    let rel = F::from(1e-6).expect("finite");
    Ok(SpectralChain {
        delta,
        holds_i: at_least(mu1, mu1_lower, rel),
        holds_ii: at_least(rayleigh_r, sqrt_delta * mu1, rel),
        holds_final: lhs <= rhs,
        e_prime,
        mu1,
        mu1_lower,
        rayleigh_r,
        trace_direct,
        trace_combinatorial,
        e3,
        sigma,
        lhs,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::Rational;

    fn s(xs: &[i64]) -> GSet<Rational> {
        GSet::from_integers(xs).unwrap()
    }

    #[test]
    fn r_matrix_of_1_2_3() {
        let m: EnergyMatrices<f64> = build_matrices(&s(&[1, 2, 3]), 3).unwrap();
        assert_eq!(m.r, vec![3, 2, 1, 2, 3, 2, 1, 2, 3]);
        let scale = 3f64.sqrt().recip();
        for (x, r) in m.mprime.iter().zip(&m.r) {
            assert_eq!(*x, scale * *r as f64);
        }
        let m1: EnergyMatrices<f64> = build_matrices(&s(&[1, 2, 3]), 1).unwrap();
        let kept: Vec<bool> = m1.mprime.iter().map(|x| *x != 0.0).collect();
        assert_eq!(kept, m1.r.iter().map(|&r| r == 1).collect::<Vec<_>>());
    }

    #[test]
    fn psd_examples() {
        let m: EnergyMatrices<f64> = build_matrices(&s(&[1, 2, 3]), 3).unwrap();
        assert_eq!(psd_witness(&m, &[1.0, -2.0, 1.0]).unwrap(), (4.0, 4.0));
        assert_eq!(psd_witness(&m, &[0.0; 3]).unwrap(), (0.0, 0.0));
        assert_eq!(psd_witness(&m, &[1.0; 3]).unwrap(), (19.0, 19.0));
        assert!(psd_witness(&m, &[1.0]).is_err());
    }

    #[test]
    fn traces() {
        for (xs, want) in [(&[1, 2][..], 17.656854249492383), (&[1, 2, 3][..], 118.43374761379113)] {
            let a = s(xs);
            let m: EnergyMatrices<f64> = build_matrices(&a, 1).unwrap();
            let (d, c) = trace_m2r(&m, &a).unwrap();
            assert!((d - want).abs() < 1e-9 * want, "{d}");
            assert!((c - want).abs() < 1e-9 * want, "{c}");
        }
    }

    #[test]
    fn eigen_examples() {
        let r = [3.0, 2.0, 1.0, 2.0, 3.0, 2.0, 1.0, 2.0, 3.0];
        let e = principal_eigen(&r, 3, 1e-14).unwrap();
        assert!((e.mu1 - 6.372281323269014).abs() < 1e-9);
        assert!(e.v1.iter().all(|x| *x > 0.0));
        let id = [1.0, 0.0, 0.0, 1.0];
        let e = principal_eigen(&id, 2, 1e-12).unwrap();
        assert!((e.mu1 - 1.0).abs() < 1e-12 && e.iterations == 1);
        let ones = vec![1.0; 25];
        assert!((principal_eigen(&ones, 5, 1e-12).unwrap().mu1 - 5.0).abs() < 1e-12);
    }

    #[test]
    fn chain_on_1_2_3() {
        let c: SpectralChain<f64> = spectral_chain_check(&s(&[1, 2, 3]), 3).unwrap();
        assert!((c.mu1 - 3.67903833734139).abs() < 1e-6);
        assert!((c.mu1_lower - 3.65655170486763).abs() < 1e-9);
        assert!(c.holds_i && c.holds_ii && c.holds_final);
        assert_eq!(c.lhs, BigUint::from(47_045_881u64));
        assert_eq!(c.rhs, BigUint::from(94_183_155u64));
    }
}
