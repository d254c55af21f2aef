use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{FockElement, PBWState};

/// Rank over the rationals of the coordinate vectors of `elements` in the
/// PBW basis, by fraction-free elimination on integer rows.
pub fn rank_of(elements: &[FockElement]) -> usize {
    let mut columns: BTreeMap<&PBWState, usize> = BTreeMap::new();
    for x in elements {
        for s in x.states() {
            let next = columns.len();
            columns.entry(s).or_insert(next);
        }
    }
    let width = columns.len();
    let mut rows: Vec<Vec<BigInt>> = elements
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| {
            let denom = x.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
            let mut row = vec![BigInt::zero(); width];
            for (s, c) in x.iter() {
                row[columns[s]] = c.numer() * (&denom / c.denom());
            }
            row
        })
        .collect();

    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let pivot = pivot_row[col].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x * &pivot - &factor * y;
            }
            let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in row.iter_mut() {
                    *x = &*x / &g;
                }
            }
            debug_assert!(row[col].is_zero() && !g.is_negative());
        }
        rank += 1;
    }
    rank
}
