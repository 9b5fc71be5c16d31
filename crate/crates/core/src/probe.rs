//! Deterministic sampling: generic points, fibre probes and the retry
//! schedule for base points.

use crate::algebra::{rat, Rational};
use crate::jet::JetPoint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x4d41_4533;

/// Seed used for "generic point" samples (ranks, vertical parts).
pub(crate) const GENERIC_SEED: u64 = 0x6765_6e65_7269_6331;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small non-integer-biased rational `n/d`, `|n| <= 9`, `1 <= d <= 5`.
pub fn small_rational(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

pub fn random_point(rng: &mut impl Rng) -> [Rational; 12] {
    std::array::from_fn(|_| small_rational(rng))
}

pub fn sample_points(seed: u64, n: usize) -> Vec<[Rational; 12]> {
    let mut r = rng(seed);
    (0..n).map(|_| random_point(&mut r)).collect()
}

/// Values tried in turn for every level-1 coordinate of the base point when
/// the previous choice makes a probe degenerate: `0, 1, -1, 2, 1/2, -2, ...`.
pub fn base_schedule() -> impl Iterator<Item = Rational> {
    let fixed = [
        (0, 1),
        (1, 1),
        (-1, 1),
        (2, 1),
        (1, 2),
        (-2, 1),
        (-1, 2),
        (3, 1),
        (1, 3),
        (-3, 1),
    ];
    fixed.into_iter().map(|(n, d)| rat(n, d))
}

/// The level-1 base point with every coordinate equal to `v`.
pub fn uniform_base(v: &Rational) -> JetPoint {
    JetPoint::new(1, vec![v.clone(); 8]).expect("eight level-1 values")
}

/// Base points to try: the explicit one (if given) first, then the schedule.
pub fn base_points(explicit: Option<&JetPoint>) -> Vec<JetPoint> {
    let mut out: Vec<JetPoint> = explicit.map(|p| p.project(1)).into_iter().collect();
    out.extend(base_schedule().map(|v| uniform_base(&v)));
    out
}

/// Options shared by probe-based procedures.
#[derive(Clone, Debug)]
pub struct ProbeConfig {
    /// Level-1 base point; `None` uses the schedule starting at the origin.
    pub base: Option<JetPoint>,
    pub seed: u64,
    /// Random fibre probes added to the four canonical ones.
    pub random_probes: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            base: None,
            seed: DEFAULT_SEED,
            random_probes: 4,
        }
    }
}
