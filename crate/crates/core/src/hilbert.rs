//! State vectors, Weyl shift/clock operators, the d+1 mutually unbiased
//! bases, and the two maximally entangled control bases.
//!
//! Conventions, fixed once and used consistently everywhere:
//!
//! * Z|n⟩ = ωⁿ|n⟩, X|n⟩ = |n+1⟩ with cyclic labels |n+d⟩ = |n⟩.
//! * A product XᵃZᶜ acts Z first: XᵃZᶜ|n⟩ = ω^(cn)|n+a⟩.
//! * |m;b⟩ has amplitude ω^(b·n(n−1)/2 − nm)/√d at |n⟩ for the d indexed
//!   bases of an odd prime d; the computational basis is labeled ddot0.
//!   n(n−1) is even, so the half-integer exponent is computed in integers.
//! * |u,v;−⟩ = Σₙ |n⟩⊗X^(2u)Z^v|−n⟩ / √d with |−n⟩ = |(d−n) mod d⟩,
//!   |u,v;+⟩ = Σₙ |n⟩⊗X^(−2u)Z^(−v)|n⟩ / √d for odd d, and for d = 2 the
//!   plus family is Σₙ |n⟩⊗XᵘZᵛ|n⟩ / √2.
//! * For d = 2 the three bases are the eigenbases of Z, X and XZ; the XZ
//!   eigenstates are (|0⟩ − i(−1)ᵐ|1⟩)/√2 with XZ eigenvalue i·ωᵐ.
//!
//! States are kept as literally constructed; nothing re-phases them.

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::{PhaseSum, PowerFraction, PrimeDim, Residue};

/// Approximate-comparison tolerance used throughout: 1e−9·d.
pub fn tolerance(d: PrimeDim) -> f64 {
    1e-9 * d.get() as f64
}

/// Label of one of the d+1 mutually unbiased bases.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    /// The computational (Z eigen-) basis, written ddot0.
    Computational,
    /// The basis with XZ^b eigenstates, b ∈ [0, d).
    Indexed(Residue),
}

impl BasisLabel {
    /// Position in the canonical ordering ddot0, 0, 1, …, d−1.
    pub fn index(&self) -> usize {
        match self {
            BasisLabel::Computational => 0,
            BasisLabel::Indexed(b) => 1 + b.value() as usize,
        }
    }

    pub fn parse(s: &str, d: PrimeDim) -> Result<BasisLabel> {
        if s == "ddot0" {
            return Ok(BasisLabel::Computational);
        }
        let v: u64 = s.parse().map_err(|_| Error::IndexOutOfRange {
            index: u64::MAX,
            dim: d.get(),
        })?;
        if v >= d.get() as u64 {
            return Err(Error::IndexOutOfRange {
                index: v,
                dim: d.get(),
            });
        }
        Ok(BasisLabel::Indexed(d.residue(v as i64)))
    }
}

impl std::fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasisLabel::Computational => write!(f, "ddot0"),
            BasisLabel::Indexed(b) => write!(f, "{}", b.value()),
        }
    }
}

impl Serialize for BasisLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// All d+1 basis labels in canonical order.
pub fn all_basis_labels(d: PrimeDim) -> Vec<BasisLabel> {
    let mut out = vec![BasisLabel::Computational];
    out.extend(d.residues().map(BasisLabel::Indexed));
    out
}

/// XᵃZᶜ together with a global phase ω^g. Application permutes amplitudes
/// and multiplies phases, so it preserves norm exactly.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct WeylOp {
    pub x_pow: Residue,
    pub z_pow: Residue,
    pub global_phase_exponent: i64,
}

impl WeylOp {
    pub fn new(d: PrimeDim, x_pow: i64, z_pow: i64) -> Self {
        WeylOp {
            x_pow: d.residue(x_pow),
            z_pow: d.residue(z_pow),
            global_phase_exponent: 0,
        }
    }

    pub fn identity(d: PrimeDim) -> Self {
        Self::new(d, 0, 0)
    }

    /// Operator product self∘rhs (rhs acts first):
    /// X^a1 Z^c1 · X^a2 Z^c2 = ω^(c1·a2) X^(a1+a2) Z^(c1+c2).
    pub fn compose(&self, rhs: &WeylOp) -> WeylOp {
        WeylOp {
            x_pow: self.x_pow.add(rhs.x_pow),
            z_pow: self.z_pow.add(rhs.z_pow),
            global_phase_exponent: self.global_phase_exponent
                + rhs.global_phase_exponent
                + self.z_pow.value() as i64 * rhs.x_pow.value() as i64,
        }
    }
}

/// A single-particle state: d exact amplitudes with a cached complex mirror.
#[derive(Clone, Debug)]
pub struct Ket {
    dim: PrimeDim,
    amps: Vec<PhaseSum>,
    mirror: Vec<Complex64>,
}

impl PartialEq for Ket {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.amps == other.amps
    }
}

/// Pump all amplitudes to a common scale so that inner-product terms add
/// without alignment surprises. Zero amplitudes adopt the target directly.
fn unify_scales(amps: &mut [PhaseSum]) {
    let target = amps
        .iter()
        .filter(|a| !a.is_zero())
        .map(|a| a.scale_halves())
        .max()
        .unwrap_or(0);
    for a in amps.iter_mut() {
        if a.scale_halves() != target {
            *a = a.at_scale(target);
        }
    }
}

impl Ket {
    /// Build from exact amplitudes; computes the complex mirror.
    pub fn from_amps(dim: PrimeDim, mut amps: Vec<PhaseSum>) -> Self {
        assert_eq!(amps.len(), dim.get() as usize);
        unify_scales(&mut amps);
        let mirror = amps.iter().map(PhaseSum::to_complex).collect();
        Ket { dim, amps, mirror }
    }

    /// |n⟩ of the computational basis.
    pub fn computational(dim: PrimeDim, n: Residue) -> Self {
        let mut amps = vec![PhaseSum::zero(dim); dim.get() as usize];
        amps[n.value() as usize] = PhaseSum::one(dim);
        Ket::from_amps(dim, amps)
    }

    /// |m;b⟩. For d = 2 the indexed bases come from [`Ket::qubit_mub`].
    pub fn mub(dim: PrimeDim, basis: &BasisLabel, m: Residue) -> Result<Self> {
        match basis {
            BasisLabel::Computational => Ok(Ket::computational(dim, m)),
            BasisLabel::Indexed(b) => {
                if dim.qubit_mode() {
                    return Err(Error::QubitModeUnsupported);
                }
                let d = dim.get() as i64;
                let amps = (0..d)
                    .map(|n| {
                        let exp = b.value() as i64 * (n * (n - 1) / 2) - n * m.value() as i64;
                        PhaseSum::phase(dim, exp).rescaled(1)
                    })
                    .collect();
                Ok(Ket::from_amps(dim, amps))
            }
        }
    }

    /// The d = 2 bases: eigenbases of Z (ddot0), X (b = 0) and XZ (b = 1).
    pub fn qubit_mub(basis: &BasisLabel, m: Residue) -> Self {
        let dim = PrimeDim::new(2).expect("2 is prime");
        match basis {
            BasisLabel::Computational => Ket::computational(dim, m),
            BasisLabel::Indexed(b) => {
                let m = m.value() as i64;
                let upper = match b.value() {
                    // X eigenstates: (|0⟩ + (−1)ᵐ|1⟩)/√2
                    0 => PhaseSum::root_monomial(dim, 2 * m),
                    // XZ eigenstates: (|0⟩ − i(−1)ᵐ|1⟩)/√2, eigenvalue i·ωᵐ
                    1 => PhaseSum::root_monomial(dim, 3 + 2 * m),
                    _ => unreachable!("b < 2"),
                };
                Ket::from_amps(
                    dim,
                    vec![PhaseSum::one(dim).rescaled(1), upper.rescaled(1)],
                )
            }
        }
    }

    /// All d states of one basis, ordered by m. Dispatches to the qubit
    /// constructors for d = 2.
    pub fn basis(dim: PrimeDim, label: &BasisLabel) -> Result<Vec<Ket>> {
        dim.residues()
            .map(|m| {
                if dim.qubit_mode() {
                    Ok(Ket::qubit_mub(label, m))
                } else {
                    Ket::mub(dim, label, m)
                }
            })
            .collect()
    }

    #[inline]
    pub fn dim(&self) -> PrimeDim {
        self.dim
    }

    #[inline]
    pub fn amps(&self) -> &[PhaseSum] {
        &self.amps
    }

    #[inline]
    pub fn mirror(&self) -> &[Complex64] {
        &self.mirror
    }

    /// Exact ⟨self|other⟩; conjugation is exponent negation.
    pub fn inner(&self, other: &Ket) -> Result<PhaseSum> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim.get(), other.dim.get()));
        }
        let mut acc = None;
        for (a, b) in self.amps.iter().zip(&other.amps) {
            let term = a.conj().mul(b);
            acc = Some(match acc {
                None => term,
                Some(s) => sum_terms(s, term),
            });
        }
        Ok(acc.unwrap_or_else(|| PhaseSum::zero(self.dim)))
    }

    /// XᵃZᶜ|ψ⟩ with the global phase applied.
    pub fn apply_weyl(&self, op: &WeylOp) -> Result<Ket> {
        if op.x_pow.modulus() != self.dim.get() {
            return Err(Error::DimensionMismatch(
                op.x_pow.modulus(),
                self.dim.get(),
            ));
        }
        let d = self.dim.get() as usize;
        let mut out = vec![PhaseSum::zero(self.dim); d];
        for (n, amp) in self.amps.iter().enumerate() {
            let target = (n + op.x_pow.value() as usize) % d;
            let ph = PhaseSum::phase(
                self.dim,
                op.global_phase_exponent + op.z_pow.value() as i64 * n as i64,
            );
            out[target] = amp.mul(&ph);
        }
        Ok(Ket::from_amps(self.dim, out))
    }

    /// Multiply every amplitude by an exact scalar.
    pub fn scaled(&self, s: &PhaseSum) -> Ket {
        Ket::from_amps(self.dim, self.amps.iter().map(|a| a.mul(s)).collect())
    }

    pub fn norm_sq(&self) -> f64 {
        self.mirror.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sq() - 1.0).abs() <= tolerance(self.dim)
    }
}

/// Add two inner-product terms, tolerating zero terms at mismatched scale.
fn sum_terms(a: PhaseSum, b: PhaseSum) -> PhaseSum {
    if a.is_zero() && (a.scale_halves() - b.scale_halves()) % 2 != 0 {
        return b;
    }
    if b.is_zero() && (a.scale_halves() - b.scale_halves()) % 2 != 0 {
        return a;
    }
    a.add(&b)
}

/// A two-particle state on the d²-dimensional space, flat index n₁·d + n₂.
#[derive(Clone, Debug)]
pub struct Ket2 {
    dim: PrimeDim,
    amps: Vec<PhaseSum>,
    mirror: Vec<Complex64>,
}

impl PartialEq for Ket2 {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.amps == other.amps
    }
}

impl Ket2 {
    pub fn from_amps(dim: PrimeDim, mut amps: Vec<PhaseSum>) -> Self {
        let d = dim.get() as usize;
        assert_eq!(amps.len(), d * d);
        unify_scales(&mut amps);
        let mirror = amps.iter().map(PhaseSum::to_complex).collect();
        Ket2 { dim, amps, mirror }
    }

    /// |a⟩₁ ⊗ |b⟩₂.
    pub fn product(a: &Ket, b: &Ket) -> Ket2 {
        debug_assert_eq!(a.dim, b.dim);
        let d = a.dim.get() as usize;
        let mut amps = Vec::with_capacity(d * d);
        for n1 in 0..d {
            for n2 in 0..d {
                amps.push(a.amps[n1].mul(&b.amps[n2]));
            }
        }
        Ket2::from_amps(a.dim, amps)
    }

    /// |u,v;−⟩ = Σₙ |n⟩ ⊗ X^(2u)Z^v |−n⟩ / √d; odd primes only.
    pub fn entangled_minus(dim: PrimeDim, u: Residue, v: Residue) -> Result<Ket2> {
        if dim.qubit_mode() {
            return Err(Error::QubitModeUnsupported);
        }
        let d = dim.get() as i64;
        let mut amps = vec![PhaseSum::zero(dim); (d * d) as usize];
        for n in 0..d {
            // X^{2u}Z^{v}|−n⟩ = ω^(−vn)|2u − n⟩
            let col = (2 * u.value() as i64 - n).rem_euclid(d);
            let amp = PhaseSum::phase(dim, -(v.value() as i64) * n).rescaled(1);
            amps[(n * d + col) as usize] = amp;
        }
        Ok(Ket2::from_amps(dim, amps))
    }

    /// |u,v;+⟩: Σₙ |n⟩ ⊗ X^(−2u)Z^(−v)|n⟩ / √d for odd d, and the d = 2
    /// family Σₙ |n⟩ ⊗ XᵘZᵛ|n⟩ / √2.
    pub fn entangled_plus(dim: PrimeDim, u: Residue, v: Residue) -> Ket2 {
        let d = dim.get() as i64;
        let mut amps = vec![PhaseSum::zero(dim); (d * d) as usize];
        for n in 0..d {
            let (col, exp) = if dim.qubit_mode() {
                // XᵘZᵛ|n⟩ = ω^(vn)|n+u⟩
                ((n + u.value() as i64).rem_euclid(d), v.value() as i64 * n)
            } else {
                // X^(−2u)Z^(−v)|n⟩ = ω^(−vn)|n−2u⟩
                (
                    (n - 2 * u.value() as i64).rem_euclid(d),
                    -(v.value() as i64) * n,
                )
            };
            amps[(n * d + col) as usize] = PhaseSum::phase(dim, exp).rescaled(1);
        }
        Ket2::from_amps(dim, amps)
    }

    #[inline]
    pub fn dim(&self) -> PrimeDim {
        self.dim
    }

    #[inline]
    pub fn amps(&self) -> &[PhaseSum] {
        &self.amps
    }

    #[inline]
    pub fn amp(&self, n1: usize, n2: usize) -> &PhaseSum {
        &self.amps[n1 * self.dim.get() as usize + n2]
    }

    #[inline]
    pub fn mirror(&self) -> &[Complex64] {
        &self.mirror
    }

    /// Exact ⟨self|other⟩.
    pub fn inner(&self, other: &Ket2) -> Result<PhaseSum> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim.get(), other.dim.get()));
        }
        let mut acc: Option<PhaseSum> = None;
        for (a, b) in self.amps.iter().zip(&other.amps) {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let term = a.conj().mul(b);
            acc = Some(match acc {
                None => term,
                Some(s) => sum_terms(s, term),
            });
        }
        Ok(acc.unwrap_or_else(|| PhaseSum::zero(self.dim)))
    }

    /// Partial inner product ⟨k|₁|self⟩: the unnormalized particle-2 vector
    /// left behind when particle 1 is projected onto |k⟩.
    pub fn project_particle1(&self, k: &Ket) -> Vec<PhaseSum> {
        let d = self.dim.get() as usize;
        let mut out = vec![PhaseSum::zero(self.dim); d];
        for n1 in 0..d {
            let a = &k.amps[n1];
            if a.is_zero() {
                continue;
            }
            let ac = a.conj();
            for n2 in 0..d {
                let amp = &self.amps[n1 * d + n2];
                if amp.is_zero() {
                    continue;
                }
                out[n2] = sum_terms(std::mem::replace(&mut out[n2], PhaseSum::zero(self.dim)), ac.mul(amp));
            }
        }
        out
    }

    /// Born weights of a particle-1 measurement in the given basis states,
    /// from the complex mirror.
    pub fn particle1_distribution(&self, basis: &[Ket]) -> Vec<f64> {
        let d = self.dim.get() as usize;
        basis
            .iter()
            .map(|k| {
                let mut p = 0.0;
                for n2 in 0..d {
                    let mut amp = Complex64::new(0.0, 0.0);
                    for n1 in 0..d {
                        amp += k.mirror[n1].conj() * self.mirror[n1 * d + n2];
                    }
                    p += amp.norm_sqr();
                }
                p
            })
            .collect()
    }

    /// Marginal computational-basis distribution of one particle (0 or 1).
    pub fn marginal(&self, particle: usize) -> Vec<f64> {
        let d = self.dim.get() as usize;
        let mut out = vec![0.0; d];
        for n1 in 0..d {
            for n2 in 0..d {
                let p = self.mirror[n1 * d + n2].norm_sqr();
                out[if particle == 0 { n1 } else { n2 }] += p;
            }
        }
        out
    }

    pub fn norm_sq(&self) -> f64 {
        self.mirror.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sq() - 1.0).abs() <= tolerance(self.dim)
    }

    /// Exact squared norm, when rational (always, for protocol states).
    pub fn norm_sq_exact(&self) -> Option<PowerFraction> {
        let mut acc = PowerFraction::ZERO;
        for a in &self.amps {
            acc = acc.add(a.mag_squared()?, self.dim.get());
        }
        Some(acc)
    }
}

/// The d² states |u,v;−⟩ ordered by flat label u·d + v.
pub fn minus_states(dim: PrimeDim) -> Result<Vec<Ket2>> {
    let mut out = Vec::with_capacity((dim.get() * dim.get()) as usize);
    for u in dim.residues() {
        for v in dim.residues() {
            out.push(Ket2::entangled_minus(dim, u, v)?);
        }
    }
    Ok(out)
}

/// The d² states |u,v;+⟩ ordered by flat label u·d + v.
pub fn plus_states(dim: PrimeDim) -> Vec<Ket2> {
    let mut out = Vec::with_capacity((dim.get() * dim.get()) as usize);
    for u in dim.residues() {
        for v in dim.residues() {
            out.push(Ket2::entangled_plus(dim, u, v));
        }
    }
    out
}

/// XZ^b|m;b⟩ = ωᵐ|m;b⟩ for every m, checked exactly (|⟨·|·⟩| = 1 on the
/// exact track, so the check is insensitive to any global-phase convention).
pub fn verify_eigenrelation(dim: PrimeDim, b: Residue) -> bool {
    let label = BasisLabel::Indexed(b);
    let states = match Ket::basis(dim, &label) {
        Ok(s) => s,
        Err(_) => return false,
    };
    let op = WeylOp::new(dim, 1, b.value() as i64);
    dim.residues().zip(&states).all(|(m, state)| {
        let moved = match state.apply_weyl(&op) {
            Ok(s) => s,
            Err(_) => return false,
        };
        let expected = state.scaled(&PhaseSum::phase(dim, m.value() as i64));
        match moved.inner(&expected) {
            Ok(ov) => ov.mag_squared() == Some(PowerFraction::ONE),
            Err(_) => false,
        }
    })
}

/// Overlap pattern of two bases: identity Gram within one basis, uniform
/// magnitude 1/√d across distinct bases, within [`tolerance`].
pub fn verify_unbiased(dim: PrimeDim, b1: &BasisLabel, b2: &BasisLabel) -> bool {
    let (s1, s2) = match (Ket::basis(dim, b1), Ket::basis(dim, b2)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return false,
    };
    let tol = tolerance(dim);
    let cross = 1.0 / (dim.get() as f64).sqrt();
    for (i, a) in s1.iter().enumerate() {
        for (j, b) in s2.iter().enumerate() {
            let ov = a
                .mirror
                .iter()
                .zip(&b.mirror)
                .map(|(x, y)| x.conj() * y)
                .sum::<Complex64>()
                .norm();
            let expected = if b1 == b2 {
                if i == j {
                    1.0
                } else {
                    0.0
                }
            } else {
                cross
            };
            if (ov - expected).abs() > tol {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::validate_dimension;

    fn dim(d: u32) -> PrimeDim {
        validate_dimension(d).unwrap()
    }

    #[test]
    fn computational_states() {
        let d = dim(3);
        let k = Ket::computational(d, d.residue(0));
        assert_eq!(k.mirror()[0], Complex64::new(1.0, 0.0));
        assert!(k.is_normalized());
        let k = Ket::computational(dim(2), dim(2).residue(1));
        assert_eq!(k.mirror()[1], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn weyl_action_and_commutation() {
        let d = dim(3);
        // Z on |2⟩ = ω²|2⟩
        let z = WeylOp::new(d, 0, 1);
        let got = Ket::computational(d, d.residue(2)).apply_weyl(&z).unwrap();
        let want = Ket::computational(d, d.residue(2)).scaled(&PhaseSum::phase(d, 2));
        assert_eq!(got, want);
        // X on |d−1⟩ = |0⟩
        let x = WeylOp::new(d, 1, 0);
        let got = Ket::computational(d, d.residue(2)).apply_weyl(&x).unwrap();
        assert_eq!(got, Ket::computational(d, d.residue(0)));
        // ZX = ω XZ on every |n⟩, d = 5
        let d = dim(5);
        let zx = WeylOp::new(d, 0, 1).compose(&WeylOp::new(d, 1, 0));
        let xz = WeylOp::new(d, 1, 0).compose(&WeylOp::new(d, 0, 1));
        for n in d.residues() {
            let ket = Ket::computational(d, n);
            let lhs = ket.apply_weyl(&zx).unwrap();
            let rhs = ket.apply_weyl(&xz).unwrap().scaled(&PhaseSum::phase(d, 1));
            assert_eq!(lhs, rhs, "n = {}", n.value());
        }
    }

    #[test]
    fn weyl_cyclic_in_x() {
        for p in [3u32, 5, 7] {
            let d = dim(p);
            let step = WeylOp::new(d, 1, 0);
            for n in d.residues() {
                let mut state = Ket::computational(d, n);
                for _ in 0..p {
                    state = state.apply_weyl(&step).unwrap();
                }
                assert_eq!(state, Ket::computational(d, n));
            }
        }
    }

    #[test]
    fn mub_state_examples() {
        let d = dim(3);
        // b = 0: uniform superposition
        let k = Ket::mub(d, &BasisLabel::Indexed(d.residue(0)), d.residue(0)).unwrap();
        for a in k.amps() {
            assert_eq!(a, &PhaseSum::one(d).rescaled(1));
        }
        // b = 1, m = 0: exponents n(n−1)/2 = 0, 0, 1
        let k = Ket::mub(d, &BasisLabel::Indexed(d.residue(1)), d.residue(0)).unwrap();
        assert_eq!(k.amps()[0], PhaseSum::phase(d, 0).rescaled(1));
        assert_eq!(k.amps()[1], PhaseSum::phase(d, 0).rescaled(1));
        assert_eq!(k.amps()[2], PhaseSum::phase(d, 1).rescaled(1));
        // ddot0 is the computational basis
        let d5 = dim(5);
        let k = Ket::mub(d5, &BasisLabel::Computational, d5.residue(2)).unwrap();
        assert_eq!(k, Ket::computational(d5, d5.residue(2)));
        // d = 2 indexed states do not come from this constructor
        let d2 = dim(2);
        assert_eq!(
            Ket::mub(d2, &BasisLabel::Indexed(d2.residue(0)), d2.residue(0)).unwrap_err(),
            Error::QubitModeUnsupported
        );
    }

    #[test]
    fn eigenrelation_holds_and_detects_perturbation() {
        assert!(verify_eigenrelation(dim(3), dim(3).residue(0)));
        assert!(verify_eigenrelation(dim(7), dim(7).residue(4)));
        // negative control: swap two amplitudes of |0;1⟩ at d = 3
        let d = dim(3);
        let b = d.residue(1);
        let good = Ket::mub(d, &BasisLabel::Indexed(b), d.residue(0)).unwrap();
        let mut amps = good.amps().to_vec();
        amps.swap(0, 2);
        let bad = Ket::from_amps(d, amps);
        let op = WeylOp::new(d, 1, 1);
        let moved = bad.apply_weyl(&op).unwrap();
        let expected = bad.scaled(&PhaseSum::phase(d, 0));
        let ov = moved.inner(&expected).unwrap();
        assert_ne!(ov.mag_squared(), Some(PowerFraction::ONE));
    }

    #[test]
    fn unbiasedness_examples() {
        let d = dim(5);
        assert!(verify_unbiased(
            d,
            &BasisLabel::Indexed(d.residue(0)),
            &BasisLabel::Indexed(d.residue(3))
        ));
        let d3 = dim(3);
        assert!(verify_unbiased(
            d3,
            &BasisLabel::Indexed(d3.residue(1)),
            &BasisLabel::Indexed(d3.residue(1))
        ));
        let d7 = dim(7);
        assert!(verify_unbiased(
            d7,
            &BasisLabel::Computational,
            &BasisLabel::Indexed(d7.residue(2))
        ));
    }

    #[test]
    fn minus_state_identity_case() {
        // |0,0;−⟩ = (|00⟩ + |12⟩ + |21⟩)/√3
        let d = dim(3);
        let s = Ket2::entangled_minus(d, d.residue(0), d.residue(0)).unwrap();
        let one = PhaseSum::one(d).rescaled(1);
        for (n1, n2) in [(0, 0), (1, 2), (2, 1)] {
            assert_eq!(s.amp(n1, n2), &one);
        }
        assert!(s.amp(0, 1).is_zero());
        assert!(s.is_normalized());
        assert_eq!(
            Ket2::entangled_minus(dim(2), dim(2).residue(0), dim(2).residue(0)).unwrap_err(),
            Error::QubitModeUnsupported
        );
    }

    #[test]
    fn plus_state_examples() {
        let d = dim(5);
        let s = Ket2::entangled_plus(d, d.residue(0), d.residue(0));
        for n in 0..5 {
            assert_eq!(s.amp(n, n), &PhaseSum::one(d).rescaled(1));
        }
        // d = 2, (u,v) = (1,1): (|01⟩ − |10⟩)/√2
        let d2 = dim(2);
        let s = Ket2::entangled_plus(d2, d2.residue(1), d2.residue(1));
        assert_eq!(s.amp(0, 1), &PhaseSum::one(d2).rescaled(1));
        assert_eq!(s.amp(1, 0), &PhaseSum::one(d2).neg().rescaled(1));
        assert!(s.amp(0, 0).is_zero());
        assert!(s.amp(1, 1).is_zero());
    }

    #[test]
    fn entangled_marginals_are_uniform() {
        let d = dim(3);
        let s = Ket2::entangled_minus(d, d.residue(1), d.residue(2)).unwrap();
        for particle in [0, 1] {
            for p in s.marginal(particle) {
                assert!((p - 1.0 / 3.0).abs() < tolerance(d));
            }
        }
    }

    #[test]
    fn exact_gram_identity_small() {
        let d = dim(3);
        let states = minus_states(d).unwrap();
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let ov = a.inner(b).unwrap();
                if i == j {
                    assert_eq!(ov.mag_squared(), Some(PowerFraction::ONE));
                } else {
                    assert!(ov.is_zero());
                }
            }
        }
        let d2 = dim(2);
        let states = plus_states(d2);
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let ov = a.inner(b).unwrap();
                assert_eq!(ov.is_zero(), i != j);
            }
        }
    }

    #[test]
    fn cross_family_overlap_is_one_third() {
        // ⟨0,0;−|0,0;+⟩ = 1/3 at d = 3
        let d = dim(3);
        let minus = Ket2::entangled_minus(d, d.residue(0), d.residue(0)).unwrap();
        let plus = Ket2::entangled_plus(d, d.residue(0), d.residue(0));
        let ov = minus.inner(&plus).unwrap();
        assert_eq!(ov, PhaseSum::one(d).rescaled(4));
        assert!((ov.to_complex() - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn basis_orthogonality_exact() {
        let d = dim(5);
        let b = BasisLabel::Indexed(d.residue(2));
        let states = Ket::basis(d, &b).unwrap();
        for (i, a) in states.iter().enumerate() {
            assert_eq!(a.inner(a).unwrap().mag_squared(), Some(PowerFraction::ONE));
            for bket in states.iter().skip(i + 1) {
                assert!(a.inner(bket).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn qubit_bases_are_mutually_unbiased() {
        let d = dim(2);
        let labels = all_basis_labels(d);
        assert_eq!(labels.len(), 3);
        for b1 in &labels {
            for b2 in &labels {
                assert!(verify_unbiased(d, b1, b2), "{b1} vs {b2}");
            }
        }
    }

    #[test]
    fn basis_label_roundtrip() {
        let d = dim(7);
        for label in all_basis_labels(d) {
            let s = label.to_string();
            assert_eq!(BasisLabel::parse(&s, d).unwrap(), label);
        }
        assert!(BasisLabel::parse("7", d).is_err());
        assert!(BasisLabel::parse("x", d).is_err());
    }
}
