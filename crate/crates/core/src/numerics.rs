//! Modular arithmetic mod a prime d and exact root-of-unity amplitudes.
//!
//! Amplitudes are kept on a dual track. The exact track is a [`PhaseSum`]:
//! an integer combination of powers of ω = e^{i2π/d} scaled by a power of
//! 1/√d. Every zero/nonzero decision the decoders depend on is made on this
//! track with no tolerance. The float track ([`PhaseSum::to_complex`]) is
//! used only for Born-rule probabilities.
//!
//! For prime d the sum Σ cⱼωʲ vanishes iff all d coefficients are equal,
//! which gives the exact zero test. For d = 2 the protocol needs the
//! imaginary unit (the XZ eigenbasis), so the exact track is widened to the
//! 4th roots: coefficients over powers of i, with ω = −1 = i², and the zero
//! test c₀ = c₂ ∧ c₁ = c₃.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated prime dimension.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeDim {
    d: u32,
}

/// Validates `n` as a protocol dimension. Alias for [`PrimeDim::new`].
pub fn validate_dimension(n: u32) -> Result<PrimeDim> {
    PrimeDim::new(n)
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u32;
    while (k as u64) * (k as u64) <= n as u64 {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl PrimeDim {
    pub fn new(n: u32) -> Result<Self> {
        if is_prime(n) {
            Ok(PrimeDim { d: n })
        } else {
            Err(Error::CompositeDimension(n as u64))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.d
    }

    /// True iff d = 2, which switches the protocol to its qubit variant.
    #[inline]
    pub fn qubit_mode(self) -> bool {
        self.d == 2
    }

    /// Order of the root of unity carried by the exact track: d for odd
    /// primes, 4 for d = 2 (so that i is representable).
    #[inline]
    pub fn root_order(self) -> u32 {
        if self.d == 2 {
            4
        } else {
            self.d
        }
    }

    /// Reduce an integer into `[0, d)`.
    pub fn residue(self, value: i64) -> Residue {
        Residue::new(value, self)
    }

    /// All residues `0..d`.
    pub fn residues(self) -> impl Iterator<Item = Residue> {
        let d = self;
        (0..self.d).map(move |v| d.residue(v as i64))
    }
}

/// An integer mod d, kept in canonical form `0 <= value < d`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u32,
    modulus: u32,
}

impl Serialize for Residue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.value)
    }
}

impl Residue {
    pub fn new(value: i64, d: PrimeDim) -> Self {
        let m = d.get() as i64;
        Residue {
            value: value.rem_euclid(m) as u32,
            modulus: d.get(),
        }
    }

    /// Accept only values already in `[0, d)`; external inputs (labels from
    /// the CLI or files) go through here rather than being silently reduced.
    pub fn in_range(value: u64, d: PrimeDim) -> Result<Self> {
        if value >= d.get() as u64 {
            return Err(Error::IndexOutOfRange {
                index: value,
                dim: d.get(),
            });
        }
        Ok(d.residue(value as i64))
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.modulus
    }

    fn dim(self) -> PrimeDim {
        PrimeDim { d: self.modulus }
    }

    pub fn add(self, other: Residue) -> Residue {
        debug_assert_eq!(self.modulus, other.modulus);
        self.dim().residue(self.value as i64 + other.value as i64)
    }

    pub fn sub(self, other: Residue) -> Residue {
        debug_assert_eq!(self.modulus, other.modulus);
        self.dim().residue(self.value as i64 - other.value as i64)
    }

    pub fn mul(self, other: Residue) -> Residue {
        debug_assert_eq!(self.modulus, other.modulus);
        self.dim()
            .residue(self.value as i64 * other.value as i64)
    }

    pub fn neg(self) -> Residue {
        self.dim().residue(-(self.value as i64))
    }

    /// Multiplicative inverse mod the (prime) modulus, by Fermat's little
    /// theorem. Fails on zero.
    pub fn inverse(self) -> Result<Residue> {
        if self.value == 0 {
            return Err(Error::ZeroInverse(self.modulus));
        }
        let mut acc = 1u64;
        let mut base = self.value as u64;
        let m = self.modulus as u64;
        let mut e = m - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        Ok(self.dim().residue(acc as i64))
    }
}

/// Multiplicative inverse of `a` mod `d`. Alias for [`Residue::inverse`].
pub fn inv_mod(a: Residue, d: PrimeDim) -> Result<Residue> {
    debug_assert_eq!(a.modulus(), d.get());
    a.inverse()
}

/// An exact amplitude: Σⱼ coeffs[j]·ρʲ · d^(−scale_halves/2), where ρ is the
/// primitive root of order [`PrimeDim::root_order`].
///
/// Addition requires the two scales to differ by an even amount (the odd
/// case would need √d inside the coefficient ring); every construction in
/// the protocol keeps scales aligned, so this never triggers outside of
/// misuse, which panics.
#[derive(Clone, Debug)]
pub struct PhaseSum {
    dim: u32,
    coeffs: Vec<i64>,
    scale_halves: i32,
}

impl PhaseSum {
    pub fn zero(d: PrimeDim) -> Self {
        PhaseSum {
            dim: d.get(),
            coeffs: vec![0; d.root_order() as usize],
            scale_halves: 0,
        }
    }

    pub fn one(d: PrimeDim) -> Self {
        Self::phase(d, 0)
    }

    /// ω^k with ω = e^{i2π/d}, at scale 0.
    pub fn phase(d: PrimeDim, k: i64) -> Self {
        let order = d.root_order() as i64;
        // For d = 2 the protocol phase ω = −1 sits at i² in the widened ring.
        let step = if d.qubit_mode() { 2 } else { 1 };
        let mut p = Self::zero(d);
        p.coeffs[((k * step).rem_euclid(order)) as usize] = 1;
        p
    }

    /// ρ^j where ρ is the ring's own root (i for d = 2, ω otherwise).
    /// Needed for the qubit XZ eigenbasis and the ±i control-basis grid.
    pub fn root_monomial(d: PrimeDim, j: i64) -> Self {
        let order = d.root_order() as i64;
        let mut p = Self::zero(d);
        p.coeffs[j.rem_euclid(order) as usize] = 1;
        p
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.dim
    }

    #[inline]
    pub fn scale_halves(&self) -> i32 {
        self.scale_halves
    }

    /// Multiply by d^(−extra/2).
    pub fn rescaled(mut self, extra_halves: i32) -> Self {
        self.scale_halves += extra_halves;
        self
    }

    /// Re-express the same value at a coarser scale (larger `scale_halves`).
    /// Zero adopts any scale; nonzero values require an even difference and
    /// panic otherwise, since √d is not in the coefficient ring.
    pub fn at_scale(&self, target: i32) -> Self {
        if self.is_zero() {
            return PhaseSum {
                dim: self.dim,
                coeffs: vec![0; self.coeffs.len()],
                scale_halves: target,
            };
        }
        let diff = target - self.scale_halves;
        assert!(
            diff >= 0 && diff % 2 == 0,
            "cannot re-express a nonzero amplitude at scale {} from {}",
            target,
            self.scale_halves
        );
        let f = (self.dim as i64).pow((diff / 2) as u32);
        PhaseSum {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
            scale_halves: target,
        }
    }

    /// Exact zero test: no tolerance involved.
    pub fn is_zero(&self) -> bool {
        let c = &self.coeffs;
        if self.dim == 2 {
            c[0] == c[2] && c[1] == c[3]
        } else {
            c.iter().all(|&x| x == c[0])
        }
    }

    /// Complex conjugate: negates every root exponent.
    pub fn conj(&self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![0i64; n];
        for (j, &cj) in self.coeffs.iter().enumerate() {
            out[(n - j) % n] = cj;
        }
        PhaseSum {
            dim: self.dim,
            coeffs: out,
            scale_halves: self.scale_halves,
        }
    }

    pub fn add(&self, other: &PhaseSum) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let (a, b) = align(self, other);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x + y)
            .collect();
        PhaseSum {
            dim: self.dim,
            coeffs,
            scale_halves: a.scale_halves,
        }
    }

    pub fn sub(&self, other: &PhaseSum) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PhaseSum {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            scale_halves: self.scale_halves,
        }
    }

    pub fn mul(&self, other: &PhaseSum) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.coeffs.len();
        let mut out = vec![0i64; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                out[(i + j) % n] += a * b;
            }
        }
        PhaseSum {
            dim: self.dim,
            coeffs: out,
            scale_halves: self.scale_halves + other.scale_halves,
        }
    }

    /// Evaluate in double precision.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.coeffs.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &cj) in self.coeffs.iter().enumerate() {
            if cj == 0 {
                continue;
            }
            let theta = 2.0 * std::f64::consts::PI * (j as f64) / (n as f64);
            acc += (cj as f64) * Complex64::new(theta.cos(), theta.sin());
        }
        acc * (self.dim as f64).powf(-0.5 * self.scale_halves as f64)
    }

    /// Exact |self|² when it is a rational number with a power-of-d
    /// denominator, which holds for every amplitude the protocol produces.
    /// Returns `None` for magnitudes outside that form.
    pub fn mag_squared(&self) -> Option<PowerFraction> {
        let sq = self.mul(&self.conj());
        debug_assert!(sq.scale_halves % 2 == 0);
        let c = &sq.coeffs;
        let num = if self.dim == 2 {
            // value = (c0 − c2) + i(c1 − c3); rational iff imaginary part is 0
            if c[1] != c[3] {
                return None;
            }
            c[0] - c[2]
        } else {
            // Σ cⱼωʲ is rational iff the non-constant coefficients agree,
            // and then equals c0 − c1.
            if c[1..].iter().any(|&x| x != c[1]) {
                return None;
            }
            c[0] - c[1]
        };
        let mut frac = PowerFraction {
            num,
            den_pow: (sq.scale_halves / 2).max(0) as u32,
        };
        if sq.scale_halves < 0 {
            // scale above unity: fold d^{|k|/2} pairs into the numerator
            frac.num *= (self.dim as i64).pow((-sq.scale_halves / 2) as u32);
            frac.den_pow = 0;
        }
        Some(frac.reduced(self.dim))
    }
}

/// Bring two sums to a common scale. Panics if the scales differ by an odd
/// amount, which no protocol construction produces.
fn align(a: &PhaseSum, b: &PhaseSum) -> (PhaseSum, PhaseSum) {
    if a.scale_halves == b.scale_halves {
        return (a.clone(), b.clone());
    }
    let diff = a.scale_halves - b.scale_halves;
    assert!(
        diff % 2 == 0,
        "cannot align amplitude scales differing by an odd number of sqrt(d) factors"
    );
    let pump = |p: &PhaseSum, steps: i32| -> PhaseSum {
        let f = (p.dim as i64).pow(steps as u32);
        PhaseSum {
            dim: p.dim,
            coeffs: p.coeffs.iter().map(|c| c * f).collect(),
            scale_halves: p.scale_halves + 2 * steps,
        }
    };
    if diff > 0 {
        (a.clone(), pump(b, diff / 2))
    } else {
        (pump(a, -diff / 2), b.clone())
    }
}

impl PartialEq for PhaseSum {
    /// Exact equality of represented values. Scales differing by an odd
    /// amount compare equal only when both sides are zero.
    fn eq(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        if (self.scale_halves - other.scale_halves) % 2 != 0 {
            return self.is_zero() && other.is_zero();
        }
        self.sub(other).is_zero()
    }
}

/// An exact nonnegative rational `num / d^den_pow`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerFraction {
    pub num: i64,
    pub den_pow: u32,
}

impl PowerFraction {
    pub const ZERO: PowerFraction = PowerFraction { num: 0, den_pow: 0 };
    pub const ONE: PowerFraction = PowerFraction { num: 1, den_pow: 0 };

    /// Cancel factors of d between numerator and denominator.
    pub fn reduced(mut self, d: u32) -> Self {
        if self.num == 0 {
            return PowerFraction::ZERO;
        }
        while self.den_pow > 0 && self.num % d as i64 == 0 {
            self.num /= d as i64;
            self.den_pow -= 1;
        }
        self
    }

    pub fn mul(self, other: PowerFraction, d: u32) -> Self {
        PowerFraction {
            num: self.num * other.num,
            den_pow: self.den_pow + other.den_pow,
        }
        .reduced(d)
    }

    pub fn add(self, other: PowerFraction, d: u32) -> Self {
        let pow = self.den_pow.max(other.den_pow);
        let lift = |f: PowerFraction| f.num * (d as i64).pow(pow - f.den_pow);
        PowerFraction {
            num: lift(self) + lift(other),
            den_pow: pow,
        }
        .reduced(d)
    }

    pub fn to_f64(self, d: u32) -> f64 {
        self.num as f64 / (d as f64).powi(self.den_pow as i32)
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_one(self) -> bool {
        self.num == 1 && self.den_pow == 0
    }
}
