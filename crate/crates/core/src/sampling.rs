//! Deterministic random and quasi-random sampling.
//!
//! Every randomized probe in the toolkit takes an explicit seed so that runs
//! are reproducible byte-for-byte. The generator is SplitMix64; quasi-random
//! points come from the Halton sequence.

/// SplitMix64 generator; identical output on every platform.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Derive an independent stream; used to parallelize batches without
    /// sharing generator state.
    pub fn fork(&self, stream: u64) -> Self {
        let mut base = SplitMix64::new(
            self.state ^ 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(stream.wrapping_add(1)),
        );
        base.next_u64();
        base
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn next_usize(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        (self.next_u64() % bound as u64) as usize
    }

    /// Standard normal via Box-Muller.
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = self.next_f64().max(1e-300);
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Uniform direction on the unit sphere in `R^k`.
    pub fn next_unit_vector(&mut self, k: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..k).map(|_| self.next_gaussian()).collect();
            let n = norm(&v);
            if n > 1e-12 {
                return v.iter().map(|x| x / n).collect();
            }
        }
    }
}

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Radical-inverse of `index` in the given base (van der Corput).
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let mut result = 0.0;
    let mut f = 1.0 / base as f64;
    while index > 0 {
        result += (index % base) as f64 * f;
        index /= base;
        f /= base as f64;
    }
    result
}

/// Halton point in `[0,1)^dims`. `index` should start at 1.
pub fn halton_point(index: u64, dims: usize) -> Vec<f64> {
    assert!(dims <= PRIMES.len(), "halton dimension too large");
    (0..dims)
        .map(|d| radical_inverse(index, PRIMES[d]))
        .collect()
}

/// Quasi-random unit direction in `R^k`: Box-Muller applied to Halton pairs.
pub fn halton_direction(index: u64, k: usize) -> Vec<f64> {
    let pairs = k.div_ceil(2);
    let h = halton_point(index, 2 * pairs);
    let mut v = Vec::with_capacity(k);
    for p in 0..pairs {
        let u1 = h[2 * p].max(1e-12);
        let u2 = h[2 * p + 1];
        let r = (-2.0 * u1.ln()).sqrt();
        let a = 2.0 * std::f64::consts::PI * u2;
        v.push(r * a.cos());
        if v.len() < k {
            v.push(r * a.sin());
        }
    }
    let n = norm(&v);
    if n < 1e-12 {
        // Degenerate Halton prefix; fall back to a coordinate direction.
        let mut e = vec![0.0; k];
        e[(index as usize) % k] = 1.0;
        return e;
    }
    v.iter().map(|x| x / n).collect()
}

/// Quasi-random point in the closed ball of the given radius around `center`.
pub fn halton_ball_point(index: u64, center: &[f64], radius: f64) -> Vec<f64> {
    let k = center.len();
    let dir = halton_direction(index, k);
    // Extra Halton coordinate drives the radial law r^(1/k) for uniformity.
    let u = radical_inverse(index, PRIMES[(2 * k.div_ceil(2)).min(PRIMES.len() - 1)]);
    let r = radius * u.powf(1.0 / k as f64);
    center.iter().zip(&dir).map(|(c, d)| c + r * d).collect()
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_is_reproducible() {
        let mut a = SplitMix64::new(7);
        let mut b = SplitMix64::new(7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn f64_in_unit_interval() {
        let mut r = SplitMix64::new(1);
        for _ in 0..1000 {
            let x = r.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }

    #[test]
    fn halton_base2_prefix() {
        // 1/2, 1/4, 3/4, 1/8, ... the classic van der Corput ordering.
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert_eq!(radical_inverse(4, 2), 0.125);
    }

    #[test]
    fn directions_are_unit() {
        for k in 1..5 {
            for i in 1..50 {
                let d = halton_direction(i, k);
                assert_eq!(d.len(), k);
                assert!((norm(&d) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ball_points_stay_inside() {
        let c = [1.0, -2.0];
        for i in 1..200 {
            let p = halton_ball_point(i, &c, 0.5);
            assert!(dist(&p, &c) <= 0.5 + 1e-12);
        }
    }

    #[test]
    fn gaussian_moments_sane() {
        let mut r = SplitMix64::new(42);
        let n = 20_000;
        let mut sum = 0.0;
        let mut sq = 0.0;
        for _ in 0..n {
            let g = r.next_gaussian();
            sum += g;
            sq += g * g;
        }
        let mean = sum / n as f64;
        let var = sq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.05, "mean {mean}");
        assert!((var - 1.0).abs() < 0.1, "var {var}");
    }
}
