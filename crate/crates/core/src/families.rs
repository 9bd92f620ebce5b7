//! The odd-number families and their closed forms.
//!
//! A family is the orbit of an odd root n under m -> (4m + 1): all odd
//! numbers whose 3x+1 image is the root's image shifted by an even
//! power of two. The seven concrete registry families (a..g), the five
//! one-parameter generalizations (D/J/M/K/S), the general term, the
//! beta seed-search that discovers each family's successor, and the
//! inverse root map all live here. Everything is exact,
//! arbitrary-precision arithmetic.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::{stopping_count, CollatzInt, DEFAULT_BUDGET};

/// Labels of the seven registry families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyName {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl FamilyName {
    pub const ALL: [FamilyName; 7] = [
        FamilyName::A,
        FamilyName::B,
        FamilyName::C,
        FamilyName::D,
        FamilyName::E,
        FamilyName::F,
        FamilyName::G,
    ];
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            FamilyName::A => 'a',
            FamilyName::B => 'b',
            FamilyName::C => 'c',
            FamilyName::D => 'd',
            FamilyName::E => 'e',
            FamilyName::F => 'f',
            FamilyName::G => 'g',
        };
        write!(f, "{c}")
    }
}

impl FromStr for FamilyName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(FamilyName::A),
            "b" => Ok(FamilyName::B),
            "c" => Ok(FamilyName::C),
            "d" => Ok(FamilyName::D),
            "e" => Ok(FamilyName::E),
            "f" => Ok(FamilyName::F),
            "g" => Ok(FamilyName::G),
            other => Err(format!("unknown family `{other}` (a..g)")),
        }
    }
}

/// One family as data: term(n) = (c * 2^(2n + p) - 1) / 3.
///
/// `coefficient` is odd and not divisible by 3, `parity` is 1 or 2,
/// and the seed is term(0). `base_steps` is the stopping count of the
/// coefficient under the paper convention, recomputed from the kernel
/// whenever a spec is assembled rather than hard-coded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    /// Registry label, if this is one of the seven named families.
    pub name: Option<FamilyName>,
    pub coefficient: BigUint,
    pub parity: u32,
    pub seed: BigUint,
    pub base_steps: u32,
}

impl FamilySpec {
    fn assemble(name: Option<FamilyName>, coefficient: u64, parity: u32) -> FamilySpec {
        assert!(coefficient % 2 == 1 && !coefficient.is_multiple_of(3));
        assert!(parity == 1 || parity == 2);
        let c = BigUint::from(coefficient);
        let seed = exact_div3((&c << parity) - 1u32);
        let base_steps = stopping_count(
            CollatzInt::new(u128::from(coefficient)).unwrap(),
            DEFAULT_BUDGET,
        )
        .expect("registry coefficients converge well inside the default budget")
        .count;
        FamilySpec {
            name,
            coefficient: c,
            parity,
            seed,
            base_steps,
        }
    }

    /// The seven families of the registry, in order a..g.
    pub fn registry() -> &'static [FamilySpec; 7] {
        static REGISTRY: OnceLock<[FamilySpec; 7]> = OnceLock::new();
        REGISTRY.get_or_init(|| {
            [
                FamilySpec::assemble(Some(FamilyName::A), 1, 2),
                FamilySpec::assemble(Some(FamilyName::B), 5, 1),
                FamilySpec::assemble(Some(FamilyName::C), 13, 2),
                FamilySpec::assemble(Some(FamilyName::D), 17, 1),
                FamilySpec::assemble(Some(FamilyName::E), 11, 1),
                FamilySpec::assemble(Some(FamilyName::F), 7, 2),
                FamilySpec::assemble(Some(FamilyName::G), 29, 1),
            ]
        })
    }

    pub fn by_name(name: FamilyName) -> &'static FamilySpec {
        &FamilySpec::registry()[name as usize]
    }

    /// Builds the family rooted at an odd seed: 3s + 1 = c * 2^p with c
    /// odd. Only roots qualify (p must be 1 or 2, i.e. s != 5 mod 8);
    /// other odds live inside some root's family instead of heading one.
    pub fn from_seed(seed: &BigUint) -> Result<FamilySpec> {
        if seed.is_zero() || !seed.bit(0) {
            return Err(Error::precondition(format!(
                "family seed must be odd and positive, got {seed}"
            )));
        }
        let image = seed * 3u32 + 1u32;
        let parity = image.trailing_zeros().expect("3s+1 of odd s is even");
        if parity > 2 {
            return Err(Error::precondition(format!(
                "{seed} is congruent to 5 mod 8 and roots no family"
            )));
        }
        let coefficient = &image >> parity;
        let small = u128::try_from(&coefficient).map_err(|_| {
            Error::precondition(format!(
                "coefficient of seed {seed} exceeds the 128-bit kernel range"
            ))
        })?;
        let base_steps = stopping_count(CollatzInt::new(small)?, DEFAULT_BUDGET)?.count;
        let name = FamilySpec::registry()
            .iter()
            .find(|f| f.seed == *seed)
            .and_then(|f| f.name);
        Ok(FamilySpec {
            name,
            coefficient,
            parity: parity as u32,
            seed: seed.clone(),
            base_steps,
        })
    }
}

fn exact_div3(num: BigUint) -> BigUint {
    let rem = &num % 3u32;
    assert!(rem.is_zero(), "expected a multiple of 3, got {num}");
    num / 3u32
}

/// Closed-form term: (c * 2^(2n + p) - 1) / 3. Always odd.
pub fn family_term(spec: &FamilySpec, n: u32) -> BigUint {
    let exponent = 2 * u64::from(n) + u64::from(spec.parity);
    exact_div3((&spec.coefficient << exponent) - 1u32)
}

/// First `count` terms generated purely by the per-family difference
/// rule term(n) = term(n-1) + c * 2^(2n + p - 2), never by the closed
/// form. The two routes must agree; tests hold them to that.
pub fn family_from_recurrence(spec: &FamilySpec, count: usize) -> Result<Vec<BigUint>> {
    if count == 0 {
        return Err(Error::precondition("count must be at least 1"));
    }
    let mut terms = Vec::with_capacity(count);
    terms.push(spec.seed.clone());
    for n in 1..count as u64 {
        let difference = &spec.coefficient << (2 * n + u64::from(spec.parity) - 2);
        let next = terms.last().unwrap() + difference;
        terms.push(next);
    }
    Ok(terms)
}

/// Predicted stopping count of term(n): 2n + p + 1 steps to fall from
/// the term onto the coefficient, plus the coefficient's own count.
/// A coefficient of 1 contributes nothing because the chain is already
/// finished when it reaches 1.
pub fn predicted_steps(spec: &FamilySpec, n: u32) -> u32 {
    let eff = if spec.coefficient.is_one() {
        0
    } else {
        spec.base_steps
    };
    2 * n + spec.parity + 1 + eff
}

/// The general term ((3n + 1) * 4^m - 1) / 3 of the family rooted at
/// odd n; m = 0 returns n itself.
pub fn general_term(n: &BigUint, m: u32) -> BigUint {
    assert!(
        !n.is_zero() && n.bit(0),
        "general_term needs an odd positive root, got {n}"
    );
    let image = n * 3u32 + 1u32;
    exact_div3((image << (2 * u64::from(m))) - 1u32)
}

/// The five one-parameter family shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParametricName {
    D,
    J,
    M,
    K,
    S,
}

impl ParametricName {
    pub const ALL: [ParametricName; 5] = [
        ParametricName::D,
        ParametricName::J,
        ParametricName::M,
        ParametricName::K,
        ParametricName::S,
    ];

    /// Coefficient of the closed form, as an affine function of k.
    pub fn coefficient(self, k: u64) -> BigUint {
        assert!(k >= 1, "parametric families are indexed from k = 1");
        let k = u128::from(k);
        BigUint::from(match self {
            ParametricName::D => 3 * k - 1,
            ParametricName::J => 3 * k + 2,
            ParametricName::M => 6 * k - 1,
            ParametricName::K => 12 * k - 1,
            ParametricName::S => 3 * k + 1,
        })
    }

    /// Exponent offset: term exponent is 2n + parity.
    pub const fn parity(self) -> u32 {
        match self {
            ParametricName::S => 2,
            _ => 1,
        }
    }

    /// The n = 0 member.
    pub fn seed(self, k: u64) -> BigUint {
        assert!(k >= 1, "parametric families are indexed from k = 1");
        let k = u128::from(k);
        BigUint::from(match self {
            ParametricName::D => 2 * k - 1,
            ParametricName::J => 2 * k + 1,
            ParametricName::M => 4 * k - 1,
            ParametricName::K => 8 * k - 1,
            ParametricName::S => 4 * k + 1,
        })
    }
}

impl fmt::Display for ParametricName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            ParametricName::D => 'D',
            ParametricName::J => 'J',
            ParametricName::M => 'M',
            ParametricName::K => 'K',
            ParametricName::S => 'S',
        };
        write!(f, "{c}")
    }
}

impl FromStr for ParametricName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "D" => Ok(ParametricName::D),
            "J" => Ok(ParametricName::J),
            "M" => Ok(ParametricName::M),
            "K" => Ok(ParametricName::K),
            "S" => Ok(ParametricName::S),
            other => Err(format!("unknown parametric family `{other}` (D|J|M|K|S)")),
        }
    }
}

/// Closed form (2^(2n + p) * coefficient(k) - 1) / 3.
pub fn parametric_term(fam: ParametricName, k: u64, n: u32) -> BigUint {
    let exponent = 2 * u64::from(n) + u64::from(fam.parity());
    exact_div3((fam.coefficient(k) << exponent) - 1u32)
}

/// A qualifying beta found by the seed search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedSearchHit {
    /// The least qualifying beta = term * 2^exponent with beta = 1 mod 3.
    pub beta: BigUint,
    /// (beta - 1) / 3, the next family's seed. Always odd.
    pub next_seed: BigUint,
    /// The family term the beta was built from.
    pub source_term: BigUint,
    /// 1 or 2.
    pub exponent: u32,
}

fn least_beta<'a, I>(terms: I, exclude: &BTreeSet<BigUint>) -> Option<SeedSearchHit>
where
    I: Iterator<Item = &'a BigUint>,
{
    let mut best: Option<SeedSearchHit> = None;
    for term in terms {
        for exponent in 1u32..=2 {
            let beta = term << exponent;
            if (&beta % 3u32) != BigUint::one() {
                continue;
            }
            let next_seed = exact_div3(&beta - 1u32);
            if exclude.contains(&next_seed) {
                continue;
            }
            if best.as_ref().is_none_or(|b| beta < b.beta) {
                best = Some(SeedSearchHit {
                    beta,
                    next_seed,
                    source_term: term.clone(),
                    exponent,
                });
            }
        }
    }
    best
}

/// Scans the first `depth` terms of one family with exponents 1 and 2
/// for the numerically least beta = term * 2^e congruent to 1 mod 3
/// whose derived seed is not in `exclude`.
pub fn seed_search_excluding(
    spec: &FamilySpec,
    depth: usize,
    exclude: &BTreeSet<BigUint>,
) -> Result<SeedSearchHit> {
    if depth == 0 {
        return Err(Error::precondition("seed search depth must be at least 1"));
    }
    let terms: Vec<BigUint> = (0..depth as u32).map(|n| family_term(spec, n)).collect();
    least_beta(terms.iter(), exclude).ok_or(Error::SeedNotFound { depth })
}

/// Seed search over one family, excluding only the trivial rediscovery
/// of the family's own seed.
pub fn seed_search(spec: &FamilySpec, depth: usize) -> Result<SeedSearchHit> {
    let exclude = BTreeSet::from([spec.seed.clone()]);
    seed_search_excluding(spec, depth, &exclude)
}

/// One round of the chained seed search: the hit plus the family it
/// gives rise to.
#[derive(Clone, Debug)]
pub struct SeedSearchRound {
    pub hit: SeedSearchHit,
    pub family: FamilySpec,
}

/// Replays the iterative discovery chain: starting from family a, each
/// round scans the first `depth` terms of every family found so far
/// and takes the least qualifying beta whose seed is new, then roots
/// the next family there. Six rounds with depth 5 walk
/// a -> 3 -> 17 -> 11 -> 7 -> 9 -> 19.
pub fn seed_search_chain(rounds: usize, depth: usize) -> Result<Vec<SeedSearchRound>> {
    if depth == 0 {
        return Err(Error::precondition("seed search depth must be at least 1"));
    }
    let start = FamilySpec::by_name(FamilyName::A);
    let mut pool: Vec<BigUint> = (0..depth as u32).map(|n| family_term(start, n)).collect();
    let mut covered = BTreeSet::from([start.seed.clone()]);
    let mut out = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let hit = least_beta(pool.iter(), &covered).ok_or(Error::SeedNotFound { depth })?;
        let family = FamilySpec::from_seed(&hit.next_seed)?;
        covered.insert(hit.next_seed.clone());
        pool.extend((0..depth as u32).map(|n| family_term(&family, n)));
        out.push(SeedSearchRound { hit, family });
    }
    Ok(out)
}

/// Which branch of the existence argument a witness instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessCase {
    /// beta = 2 * alpha with alpha = 3k - 1; seeds 2k - 1.
    I,
    /// beta = 4 * alpha with alpha = 3k + 1; seeds 4k + 1.
    IIb,
}

impl fmt::Display for WitnessCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessCase::I => f.write_str("I"),
            WitnessCase::IIb => f.write_str("II-b"),
        }
    }
}

impl FromStr for WitnessCase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "I" => Ok(WitnessCase::I),
            "II-B" | "IIB" => Ok(WitnessCase::IIb),
            other => Err(format!("unknown witness case `{other}` (I|II-b)")),
        }
    }
}

/// An explicit (alpha, beta, seed) witness that the k-th odd seed of
/// the given case exists: beta - 1 is divisible by 3 and the seed is
/// (beta - 1) / 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedWitness {
    pub k: u64,
    pub case: WitnessCase,
    pub alpha: BigUint,
    pub beta: BigUint,
    pub seed: BigUint,
}

pub fn seed_witness(k: u64, case: WitnessCase) -> SeedWitness {
    assert!(k >= 1, "witnesses are indexed from k = 1");
    let k128 = u128::from(k);
    let (alpha, beta, seed) = match case {
        WitnessCase::I => (3 * k128 - 1, 6 * k128 - 2, 2 * k128 - 1),
        WitnessCase::IIb => (3 * k128 + 1, 12 * k128 + 4, 4 * k128 + 1),
    };
    debug_assert_eq!((beta - 1) % 3, 0);
    debug_assert_eq!((beta - 1) / 3, seed);
    SeedWitness {
        k,
        case,
        alpha: BigUint::from(alpha),
        beta: BigUint::from(beta),
        seed: BigUint::from(seed),
    }
}

/// Membership of one odd number: the root of its family and its index
/// in that family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyRoot {
    pub value: BigUint,
    pub root: BigUint,
    pub index: u32,
}

/// Walks the inverse of the general term: while the value is 5 mod 8 it
/// is some root's (4m + 1)-image, so peel one layer with (o - 1) / 4.
/// The surviving root is 1, 3, or 7 mod 8.
pub fn family_root(o: &BigUint) -> Result<FamilyRoot> {
    if o.is_zero() || !o.bit(0) {
        return Err(Error::precondition(format!(
            "family membership is defined for odd positive integers, got {o}"
        )));
    }
    let five = BigUint::from(5u32);
    let mut root = o.clone();
    let mut index = 0u32;
    while (&root % 8u32) == five {
        root = (root - 1u32) >> 2;
        index += 1;
    }
    Ok(FamilyRoot {
        value: o.clone(),
        root,
        index,
    })
}
