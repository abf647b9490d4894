use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::smith::normalize_torsion;
use crate::LinalgError;

/// A finitely generated abelian group `Z^r + Z/d_1 + ... + Z/d_k` with
/// `1 < d_1 | d_2 | ... | d_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AbelianGroupDescriptor {
    pub free_rank: usize,
    #[serde(with = "factor_strings")]
    pub invariant_factors: Vec<BigInt>,
}

mod factor_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

impl AbelianGroupDescriptor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    /// Normalizes an arbitrary list of cyclic orders (units and zeros dropped).
    pub fn new(free_rank: usize, cyclic_orders: impl IntoIterator<Item = BigInt>) -> Self {
        Self {
            free_rank,
            invariant_factors: normalize_torsion(cyclic_orders),
        }
    }

    /// `Z^free + (Z/p)^count`.
    pub fn elementary(free_rank: usize, p: u64, count: usize) -> Self {
        Self::new(free_rank, std::iter::repeat(BigInt::from(p)).take(count))
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn torsion(&self) -> Self {
        Self {
            free_rank: 0,
            invariant_factors: self.invariant_factors.clone(),
        }
    }

    /// Number of invariant factors divisible by `p`.
    pub fn torsion_count_divisible_by(&self, p: u64) -> usize {
        let p = BigInt::from(p);
        self.invariant_factors
            .iter()
            .filter(|d| d.is_multiple_of(&p))
            .count()
    }

    /// Exponent of the torsion subgroup (1 when there is none).
    pub fn exponent(&self) -> BigInt {
        self.invariant_factors
            .last()
            .cloned()
            .unwrap_or_else(BigInt::one)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::new(
            self.free_rank + other.free_rank,
            self.invariant_factors
                .iter()
                .chain(other.invariant_factors.iter())
                .cloned(),
        )
    }

    pub fn order_of_torsion(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }
}

impl fmt::Display for AbelianGroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        let d = &self.invariant_factors;
        while i < d.len() {
            let mut j = i;
            while j < d.len() && d[j] == d[i] {
                j += 1;
            }
            let k = j - i;
            parts.push(if k == 1 {
                format!("Z_{}", d[i])
            } else {
                format!("Z_{}^{}", d[i], k)
            });
            i = j;
        }
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromStr for AbelianGroupDescriptor {
    type Err = LinalgError;

    /// Parses the `Display` form, e.g. `Z_3^8 + Z^42` or `0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LinalgError::InvalidInput(format!("cannot parse group {s:?}"));
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut free = 0usize;
        let mut orders = Vec::new();
        for part in s.split('+').map(str::trim) {
            let (base, exp) = match part.split_once('^') {
                Some((b, e)) => (b, e.parse::<usize>().map_err(|_| bad())?),
                None => (part, 1),
            };
            if base == "Z" {
                free += exp;
            } else if let Some(order) = base.strip_prefix("Z_") {
                let order: BigInt = order.parse().map_err(|_| bad())?;
                if order <= BigInt::one() {
                    return Err(bad());
                }
                orders.extend(std::iter::repeat(order).take(exp));
            } else {
                return Err(bad());
            }
        }
        Ok(Self::new(free, orders))
    }
}

/// Multiset of prime-power orders of the torsion part; an alternative
/// canonical form used to compare decompositions.
pub fn elementary_divisors(g: &AbelianGroupDescriptor) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for d in &g.invariant_factors {
        let mut n = d.clone();
        let mut p = 2u64;
        while !n.is_one() {
            let bp = BigInt::from(p);
            if (&bp * &bp) > n {
                // remaining cofactor is prime
                let q: u64 = n.to_string().parse().unwrap_or(u64::MAX);
                out.push((q, 1));
                break;
            }
            let mut e = 0;
            while (&n % &bp).is_zero() {
                n /= &bp;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse_round_trip() {
        let g = AbelianGroupDescriptor::elementary(42, 3, 8);
        assert_eq!(g.to_string(), "Z_3^8 + Z^42");
        assert_eq!(g.to_string().parse::<AbelianGroupDescriptor>().unwrap(), g);
        assert_eq!("0".parse::<AbelianGroupDescriptor>().unwrap(), AbelianGroupDescriptor::zero());
        assert_eq!(AbelianGroupDescriptor::new(1, [BigInt::from(5)]).to_string(), "Z_5 + Z");
        assert!("Z_1".parse::<AbelianGroupDescriptor>().is_err());
    }

    #[test]
    fn direct_sum_is_canonical() {
        let a = AbelianGroupDescriptor::new(1, [BigInt::from(2)]);
        let b = AbelianGroupDescriptor::new(0, [BigInt::from(3)]);
        let s = a.direct_sum(&b);
        assert_eq!(s.invariant_factors, vec![BigInt::from(6)]);
        assert_eq!(elementary_divisors(&s), vec![(2, 1), (3, 1)]);
        assert_eq!(s.torsion_count_divisible_by(3), 1);
    }
}
