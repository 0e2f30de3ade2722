//! Seeded generators for rational test instances, spectra and bases.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::rank;
use crate::matrix::RatMatrix;
use crate::rational::{self, frac, Rational};
use crate::spectrum::{SpectrumEntry, SpectrumList};
use crate::stochastic::constant_j;

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for instance `index` of a sweep seeded by `seed`, so
/// sweeps give identical instances in any execution order.
pub fn instance_rng(seed: u64, index: usize) -> InstanceRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index as u64);
    r
}

/// `p/q` with `|p| ≤ max_num`, `1 ≤ q ≤ max_den`.
pub fn rational_in(rng: &mut impl Rng, max_num: i64, max_den: i64) -> Rational {
    frac(rng.random_range(-max_num..=max_num), rng.random_range(1..=max_den))
}

pub fn rational_matrix(rng: &mut impl Rng, n: usize, max_num: i64, max_den: i64) -> RatMatrix {
    let data = (0..n * n).map(|_| rational_in(rng, max_num, max_den)).collect();
    RatMatrix::new(n, n, data).expect("n >= 1")
}

/// Nonnegative rows each summing to `r`: row `i` splits `d_i ∈ 1..=max_den`
/// units at random, entries `r·part/d_i`.
pub fn row_sum_matrix(rng: &mut impl Rng, n: usize, r: &Rational, max_den: i64) -> RatMatrix {
    let rows = (0..n)
        .map(|_| {
            let d = rng.random_range(1..=max_den);
            let mut parts = vec![0i64; n];
            for _ in 0..d {
                parts[rng.random_range(0..n)] += 1;
            }
            parts.into_iter().map(|p| r * frac(p, d)).collect()
        })
        .collect();
    RatMatrix::from_rows(rows).expect("square rows")
}

pub fn stochastic(rng: &mut impl Rng, n: usize, max_den: i64) -> RatMatrix {
    row_sum_matrix(rng, n, &rational::int(1), max_den)
}

/// Convex combination of random permutation matrices.
pub fn doubly_stochastic(rng: &mut impl Rng, n: usize, terms: usize) -> RatMatrix {
    let weights: Vec<i64> = (0..terms).map(|_| rng.random_range(1..=9)).collect();
    let total: i64 = weights.iter().sum();
    let mut out = RatMatrix::zeros(n, n);
    for w in weights {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        for (i, &j) in perm.iter().enumerate() {
            let v = out.get(i, j) + frac(w, total);
            out.set(i, j, v);
        }
    }
    out
}

pub fn invertible(rng: &mut impl Rng, n: usize, max_num: i64, max_den: i64) -> RatMatrix {
    loop {
        let p = rational_matrix(rng, n, max_num, max_den);
        if rank(&p) == n {
            return p;
        }
    }
}

/// Random member of the row/column-sum-one set: `J + (I-J)M(I-J)`,
/// computed by double centering a random `M`.
pub fn unit_sum_member(rng: &mut impl Rng, n: usize, max_num: i64, max_den: i64) -> RatMatrix {
    let m = rational_matrix(rng, n, max_num, max_den);
    let nr = rational::from_usize(n);
    let rows: Vec<Rational> = m.row_sums().into_iter().map(|s| s / &nr).collect();
    let cols: Vec<Rational> = m.col_sums().into_iter().map(|s| s / &nr).collect();
    let grand = rows.iter().fold(Rational::zero(), |s, v| s + v) / &nr;
    let j = constant_j(n).expect("n >= 1");
    RatMatrix::from_fn(n, n, |i, k| m.get(i, k) - &rows[i] - &cols[k] + &grand + j.get(i, k))
}

/// Spectrum `(1; λ_2, …, λ_n)` with the tail in the closed unit disk,
/// parts on a grid of `1/1000`, complex entries in exact conjugate pairs.
pub fn unit_disk_spectrum(rng: &mut impl Rng, n: usize) -> SpectrumList {
    let mut entries = vec![SpectrumEntry::real(rational::int(1))];
    while entries.len() < n {
        let room = n - entries.len();
        let (re, im) = loop {
            let re: i64 = rng.random_range(-1000..=1000);
            let im: i64 = rng.random_range(0..=1000);
            if re * re + im * im <= 1_000_000 {
                break (re, im);
            }
        };
        if room >= 2 && im != 0 && rng.random_bool(0.5) {
            entries.push(SpectrumEntry::complex(frac(re, 1000), frac(im, 1000)));
            entries.push(SpectrumEntry::complex(frac(re, 1000), frac(-im, 1000)));
        } else {
            entries.push(SpectrumEntry::real(frac(re, 1000)));
        }
    }
    SpectrumList::new(entries, 0).expect("nonempty")
}
