//! Triples of elements of `M_F(x)` sharing their largest prime.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::sieve::MfEntry;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CliqueType {
    /// Some pairwise lcm is smaller than the lcm of all three.
    SPrime,
    /// All three pairwise lcms coincide.
    SDoublePrime,
}

impl fmt::Display for CliqueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CliqueType::SPrime => "S'",
            CliqueType::SDoublePrime => "S''",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueRecord {
    pub p: u64,
    /// Cofactors, ascending.
    pub m1: u64,
    pub m2: u64,
    pub m3: u64,
    pub kind: CliqueType,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CliqueScan {
    pub cliques: Vec<CliqueRecord>,
    /// Triples sharing a prime that failed the size or divisibility test.
    pub rejected: usize,
}

/// `m_j / 2 <= m_i <= 2 m_j` for every pair.
pub fn satisfies_ecli(ms: [u64; 3]) -> bool {
    pairs(ms).all(|(a, b)| b as u128 <= 2 * a as u128 && a as u128 <= 2 * b as u128)
}

/// `gcd(m_i, m_j) < m_i < lcm(m_i, m_j)` for every ordered pair.
pub fn satisfies_enot(ms: [u64; 3]) -> bool {
    pairs(ms).all(|(a, b)| {
        let (g, l) = (a.gcd(&b) as u128, a as u128 * b as u128 / a.gcd(&b) as u128);
        g < a as u128 && (a as u128) < l && g < b as u128 && (b as u128) < l
    })
}

fn pairs(ms: [u64; 3]) -> impl Iterator<Item = (u64, u64)> {
    [(ms[0], ms[1]), (ms[0], ms[2]), (ms[1], ms[2])].into_iter()
}

fn lcm(a: u128, b: u128) -> u128 {
    a / a.gcd(&b) * b
}

/// Groups `mf` by the largest prime and emits every triple of distinct
/// cofactors that passes both pairwise conditions.
pub fn find_cliques(mf: &[MfEntry]) -> CliqueScan {
    let mut groups: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for e in mf {
        groups.entry(e.large_prime()).or_default().push(e.cofactor());
    }
    let mut out = CliqueScan::default();
    for (p, mut cof) in groups {
        cof.sort_unstable();
        cof.dedup();
        for i in 0..cof.len() {
            for j in i + 1..cof.len() {
                // ascending, so m_k > 2 m_i ends the inner loop
                for k in j + 1..cof.len() {
                    let ms = [cof[i], cof[j], cof[k]];
                    if cof[k] as u128 > 2 * cof[i] as u128 {
                        out.rejected += cof.len() - k;
                        break;
                    }
                    if !satisfies_ecli(ms) || !satisfies_enot(ms) {
                        out.rejected += 1;
                        continue;
                    }
                    let [a, b, c] = ms.map(u128::from);
                    let (ab, ac, bc) = (lcm(a, b), lcm(a, c), lcm(b, c));
                    let kind = if ab == ac && ac == bc {
                        CliqueType::SDoublePrime
                    } else {
                        CliqueType::SPrime
                    };
                    out.cliques.push(CliqueRecord {
                        p,
                        m1: ms[0],
                        m2: ms[1],
                        m3: ms[2],
                        kind,
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(cofactor_primes: &[u64], p: u64) -> MfEntry {
        let mut primes = cofactor_primes.to_vec();
        primes.push(p);
        MfEntry {
            m: primes.iter().product(),
            primes,
        }
    }

    #[test]
    fn override_example_has_no_clique() {
        let scan = find_cliques(&[entry(&[5], 13), entry(&[5], 17)]);
        assert!(scan.cliques.is_empty());
        assert_eq!(scan.rejected, 0);
    }

    #[test]
    fn all_lcms_equal() {
        // 11*13, 11*17, 13*17: every pairwise lcm is 2431
        let mf = [entry(&[11, 13], 101), entry(&[11, 17], 101), entry(&[13, 17], 101)];
        let scan = find_cliques(&mf);
        assert_eq!(
            scan.cliques,
            vec![CliqueRecord {
                p: 101,
                m1: 143,
                m2: 187,
                m3: 221,
                kind: CliqueType::SDoublePrime
            }]
        );
    }

    #[test]
    fn proper_pairwise_lcm() {
        let mf = [entry(&[5, 7], 101), entry(&[5, 11], 101), entry(&[5, 13], 101)];
        let scan = find_cliques(&mf);
        assert_eq!(scan.cliques.len(), 1);
        assert_eq!(scan.cliques[0].kind, CliqueType::SPrime);
    }

    #[test]
    fn size_condition_rejects() {
        // 15 > 2 * 6 and 14 > 2 * 6
        for cof in [[6u64, 10, 15], [6, 10, 14]] {
            assert!(!satisfies_ecli(cof));
            assert!(satisfies_enot(cof));
        }
        let mf = [entry(&[2, 3], 101), entry(&[2, 5], 101), entry(&[3, 5], 101)];
        let scan = find_cliques(&mf);
        assert!(scan.cliques.is_empty());
        assert_eq!(scan.rejected, 1);
    }

    #[test]
    fn divisibility_condition() {
        assert!(!satisfies_enot([3, 6, 5]));
        assert!(satisfies_enot([4, 6, 5]));
    }

    #[test]
    fn brute_force_agreement() {
        use crate::algebra::IntPoly;
        use crate::sieve::{build_pf, enumerate_mf, DiversityParams};
        let f = IntPoly::from_i64s(&[1, 0, 1]);
        let sieve = build_pf(&f, 100_000).unwrap();
        let par = DiversityParams::paper(1e5, 0.5, 0.5, 2).unwrap().with_k(2).with_y(5.0).with_tail(0.4);
        let mf = enumerate_mf(&sieve, &par).unwrap().entries;
        let scan = find_cliques(&mf);

        let mut brute = 0;
        for a in &mf {
            for b in &mf {
                for c in &mf {
                    let same = a.large_prime() == b.large_prime() && b.large_prime() == c.large_prime();
                    let ms = [a.cofactor(), b.cofactor(), c.cofactor()];
                    if same && ms[0] < ms[1] && ms[1] < ms[2] && satisfies_ecli(ms) && satisfies_enot(ms) {
                        brute += 1;
                    }
                }
            }
        }
        assert!(brute > 0);
        assert_eq!(scan.cliques.len(), brute);
        for c in &scan.cliques {
            assert!(satisfies_ecli([c.m1, c.m2, c.m3]) && satisfies_enot([c.m1, c.m2, c.m3]));
        }
    }
}
