//! Exact rank of sparse integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{inv_mod, mul_mod};

/// Sparse row: `(column, coefficient)` with strictly increasing columns and
/// no zero coefficients.
pub(crate) type SparseRow = Vec<(usize, i128)>;

/// `2^61 - 1`.
pub(crate) const CERT_PRIME: u64 = (1 << 61) - 1;

/// Kernel vector mod `p`. Each one owns a free column where it is 1; it is
/// 0 on every other free column, so the vectors are independent.
pub(crate) struct KernelVec {
    pub values: Vec<u64>,
}

fn residue(v: i128, p: u64) -> u64 {
    v.rem_euclid(p as i128) as u64
}

/// Rank over `Z_p` together with a basis of the right kernel.
///
/// The kernel starts as the identity and is cut down one row at a time, so
/// a row that is orthogonal to every current kernel vector is dependent and
/// costs only `dim ker · nnz(row)`.
pub(crate) fn rank_mod_prime(rows: &[SparseRow], ncols: usize, p: u64) -> (usize, Vec<KernelVec>) {
    let mut kernel: Vec<KernelVec> = (0..ncols)
        .map(|c| {
            let mut values = vec![0u64; ncols];
            values[c] = 1;
            KernelVec { values }
        })
        .collect();
    let mut rank = 0;
    let mut dots = Vec::new();
    for row in rows {
        let reduced: Vec<(usize, u64)> = row.iter().map(|&(c, v)| (c, residue(v, p))).filter(|e| e.1 != 0).collect();
        dots.clear();
        dots.extend(kernel.iter().map(|k| {
            let s: u128 = reduced.iter().map(|&(c, v)| mul_mod(v, k.values[c], p) as u128).sum();
            (s % p as u128) as u64
        }));
        let Some(pivot) = dots.iter().position(|&d| d != 0) else { continue };
        rank += 1;
        let pk = kernel.remove(pivot);
        let pd = dots.remove(pivot);
        let inv = inv_mod(pd, p).expect("nonzero residue");
        let support: Vec<usize> = (0..ncols).filter(|&c| pk.values[c] != 0).collect();
        for (k, &d) in kernel.iter_mut().zip(&dots) {
            if d == 0 {
                continue;
            }
            let factor = p - mul_mod(d, inv, p);
            for &c in &support {
                k.values[c] = (k.values[c] + mul_mod(factor, pk.values[c], p)) % p;
            }
        }
        if kernel.is_empty() {
            break;
        }
    }
    (rank, kernel)
}

/// `n/d` with `|n|, d <= sqrt(p/2)` and `n ≡ a·d (mod p)`, if one exists.
pub(crate) fn rational_reconstruct(a: u64, p: u64) -> Option<(i128, i128)> {
    let bound = ((p / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > bound {
        return None;
    }
    let (n, d) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    (n.gcd(&d) == 1).then_some((n, d))
}

/// Integer vectors spanning the same lines as `kernel`, lifted through
/// rational reconstruction.
fn lift_kernel(kernel: &[KernelVec], p: u64) -> Option<Vec<Vec<i128>>> {
    kernel
        .iter()
        .map(|k| {
            let mut fracs = Vec::new();
            let mut lcm: i128 = 1;
            for (c, &v) in k.values.iter().enumerate() {
                if v != 0 {
                    let (n, d) = rational_reconstruct(v, p)?;
                    lcm = lcm.checked_mul(d / lcm.gcd(&d))?;
                    fracs.push((c, n, d));
                }
            }
            let mut out = vec![0i128; k.values.len()];
            for (c, n, d) in fracs {
                out[c] = n.checked_mul(lcm / d)?;
            }
            Some(out)
        })
        .collect()
}

fn dot_is_zero(row: &SparseRow, v: &[i128]) -> bool {
    let mut acc: i128 = 0;
    for &(c, a) in row {
        match a.checked_mul(v[c]).and_then(|t| acc.checked_add(t)) {
            Some(s) => acc = s,
            None => {
                let exact: BigInt = row.iter().map(|&(c, a)| BigInt::from(a) * BigInt::from(v[c])).sum();
                return exact.is_zero();
            }
        }
    }
    acc == 0
}

/// Exact rank over `Q`.
///
/// The rank mod a large prime is a lower bound. Lifting the mod-`p`
/// kernel to integer vectors and checking that each is orthogonal to every
/// row exhibits `ncols - rank_p` independent rational kernel vectors, which
/// proves the bound is attained. If lifting or the check fails the rank is
/// recomputed by fraction-free elimination.
pub(crate) fn certified_rank(rows: &[SparseRow], ncols: usize) -> usize {
    let (rank, kernel) = rank_mod_prime(rows, ncols, CERT_PRIME);
    if let Some(lifted) = lift_kernel(&kernel, CERT_PRIME) {
        if lifted.iter().all(|v| rows.iter().all(|r| dot_is_zero(r, v))) {
            return rank;
        }
    }
    fraction_free_rank(rows.iter().map(|r| r.iter().map(|&(c, v)| (c, BigInt::from(v))).collect()).collect())
}

fn primitive(row: &mut [(usize, BigInt)]) {
    let g = row.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// `a·x - b·y` on sparse rows.
fn combine(a: &BigInt, x: &[(usize, BigInt)], b: &BigInt, y: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (c, v) = match (x.get(i), y.get(j)) {
            (Some((cx, vx)), Some((cy, _))) if cx < cy => {
                i += 1;
                (*cx, a * vx)
            }
            (Some((cx, _)), Some((cy, vy))) if cy < cx => {
                j += 1;
                (*cy, -(b * vy))
            }
            (Some((cx, vx)), Some((_, vy))) => {
                i += 1;
                j += 1;
                (*cx, a * vx - b * vy)
            }
            (Some((cx, vx)), None) => {
                i += 1;
                (*cx, a * vx)
            }
            (None, Some((cy, vy))) => {
                j += 1;
                (*cy, -(b * vy))
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

/// Rank over `Q` by integer elimination with exact content removal: rows
/// are combined cross-multiplied on their leading entries and divided by
/// their gcd, so no fractions appear.
pub(crate) fn fraction_free_rank(rows: Vec<Vec<(usize, BigInt)>>) -> usize {
    let mut pivots: std::collections::HashMap<usize, Vec<(usize, BigInt)>> = Default::default();
    for mut row in rows {
        row.retain(|(_, v)| !v.is_zero());
        primitive(&mut row);
        while let Some((lead, lv)) = row.first().cloned() {
            match pivots.get(&lead) {
                Some(piv) => {
                    let pv = &piv[0].1;
                    let g = pv.gcd(&lv);
                    row = combine(&(pv / &g), &row, &(&lv / &g), piv);
                    primitive(&mut row);
                }
                None => {
                    if row[0].1.is_negative() {
                        row.iter_mut().for_each(|(_, v)| *v = -&*v);
                    }
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Rank over `Z_p` for a user-chosen prime.
pub(crate) fn rank_mod(rows: &[SparseRow], ncols: usize, p: u64) -> usize {
    rank_mod_prime(rows, ncols, p).0
}
