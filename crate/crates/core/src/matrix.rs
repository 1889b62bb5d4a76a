//! Complete trajectory matrices and their structural (parity) form.
//!
//! The matrix of generator 1 and order `n` has one row per odd seed
//! `1, 3, ..., 2^{n+1} − 1`; generator 2 uses the even seeds `2, 4, ..., 2^{n+1}`.
//! Each row holds `T^1 .. T^n`. Rows are produced on demand, ascending by seed,
//! so exports never hold the whole table.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::parity::ParityVector;

/// Orders above this overflow the `u128` row arithmetic.
pub const HARD_ORDER_LIMIT: usize = 62;

const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CompleteMatrix {
    generator: u8,
    order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixRow {
    pub seed: u128,
    pub iterates: Vec<u128>,
    /// Parities of `T^1 .. T^n` (the seed-excluded view).
    pub parity: ParityVector,
}

fn t(x: u128) -> u128 {
    if x & 1 == 1 {
        (3 * x + 1) >> 1
    } else {
        x >> 1
    }
}

pub fn build_matrix(generator: u8, order: usize, cap: usize) -> Result<CompleteMatrix> {
    if generator != 1 && generator != 2 {
        return Err(Error::InvalidGenerator(generator));
    }
    if order > cap {
        return Err(Error::OrderTooLarge {
            order,
            cap,
            cap_name: "matrix order",
        });
    }
    if order > HARD_ORDER_LIMIT {
        return Err(Error::OrderTooLarge {
            order,
            cap: HARD_ORDER_LIMIT,
            cap_name: "matrix arithmetic",
        });
    }
    Ok(CompleteMatrix { generator, order })
}

impl CompleteMatrix {
    pub fn generator(&self) -> u8 {
        self.generator
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn row_count(&self) -> u64 {
        1 << self.order
    }

    pub fn seed(&self, index: u64) -> u128 {
        2 * u128::from(index) + u128::from(self.generator)
    }

    pub fn row(&self, index: u64) -> MatrixRow {
        let seed = self.seed(index);
        let mut x = seed;
        let iterates: Vec<u128> = (0..self.order)
            .map(|_| {
                x = t(x);
                x
            })
            .collect();
        let parity = iterates.iter().map(|v| v & 1 == 1).collect::<Vec<_>>().into();
        MatrixRow {
            seed,
            iterates,
            parity,
        }
    }

    /// Rows in seed order. Each chunk is computed in parallel.
    pub fn rows(&self) -> impl Iterator<Item = MatrixRow> + '_ {
        let total = self.row_count();
        (0..total.div_ceil(CHUNK)).flat_map(move |c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(total);
            (lo..hi)
                .into_par_iter()
                .map(|i| self.row(i))
                .collect::<Vec<_>>()
        })
    }

    /// True when the structural vectors are exactly `{0,1}^n`, each once.
    pub fn structural_is_complete(&self) -> bool {
        let n = self.order;
        let seen: Vec<u64> = (0..self.row_count())
            .into_par_iter()
            .fold(
                || vec![0u64; bitmap_words(n)],
                |mut acc, i| {
                    let word = self.row(i).parity.to_u64();
                    acc[(word / 64) as usize] |= 1 << (word % 64);
                    acc
                },
            )
            .reduce(
                || vec![0u64; bitmap_words(n)],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x |= y;
                    }
                    a
                },
            );
        let filled: u64 = seen.iter().map(|w| u64::from(w.count_ones())).sum();
        filled == self.row_count()
    }

    /// CSV with header `seed,T1,...,Tn`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), std::io::Error> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["seed".to_string()];
        header.extend((1..=self.order).map(|k| format!("T{k}")));
        w.write_record(&header)?;
        for row in self.rows() {
            let mut rec = vec![row.seed.to_string()];
            rec.extend(row.iterates.iter().map(u128::to_string));
            w.write_record(&rec)?;
        }
        w.flush()
    }

    /// `{"generator":g,"order":n,"rows":[{"seed":..,"iterates":[..],"parity":".."},..]}`,
    /// one row per line.
    pub fn write_json<W: Write>(&self, mut out: W) -> Result<(), std::io::Error> {
        write!(
            out,
            "{{\"generator\":{},\"order\":{},\"rows\":[",
            self.generator, self.order
        )?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                out.write_all(b",")?;
            }
            out.write_all(b"\n")?;
            serde_json::to_writer(&mut out, &row)?;
        }
        out.write_all(b"\n]}\n")?;
        out.flush()
    }

    /// Aligned text table, one row per line.
    pub fn write_table<W: Write>(&self, mut out: W) -> Result<(), std::io::Error> {
        for row in self.rows() {
            write!(out, "{:>8}", row.seed)?;
            for v in &row.iterates {
                write!(out, " {v:>8}")?;
            }
            writeln!(out, "   {}", row.parity)?;
        }
        out.flush()
    }
}

fn bitmap_words(n: usize) -> usize {
    ((1usize << n) / 64).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_for(m: &CompleteMatrix, seed: u128) -> MatrixRow {
        m.rows().find(|r| r.seed == seed).unwrap()
    }

    #[test]
    fn structural_rows() {
        let m = build_matrix(1, 4, 20).unwrap();
        assert_eq!(m.row_count(), 16);
        assert_eq!(row_for(&m, 31).iterates, vec![47, 71, 107, 161]);
        assert_eq!(row_for(&m, 1).iterates, vec![2, 1, 2, 1]);
        assert_eq!(row_for(&m, 1).parity.to_string(), "0101");
        assert_eq!(row_for(&m, 17).parity.to_string(), "0100");

        let m = build_matrix(2, 4, 20).unwrap();
        assert_eq!(row_for(&m, 2).iterates, vec![1, 2, 1, 2]);
        assert_eq!(m.rows().last().unwrap().seed, 32);
        assert_eq!(m.rows().next().unwrap().seed, 2);
    }

    #[test]
    fn caps_and_generator() {
        assert_eq!(
            build_matrix(1, 21, 20),
            Err(Error::OrderTooLarge {
                order: 21,
                cap: 20,
                cap_name: "matrix order"
            })
        );
        assert_eq!(build_matrix(3, 4, 20), Err(Error::InvalidGenerator(3)));
    }

    #[test]
    fn structural_completeness() {
        for g in [1, 2] {
            for n in 0..=10 {
                assert!(build_matrix(g, n, 20).unwrap().structural_is_complete(), "g={g} n={n}");
            }
        }
    }

    #[test]
    fn csv_and_json_exports() {
        let m = build_matrix(1, 2, 20).unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "seed,T1,T2\n1,2,1\n3,5,8\n5,8,4\n7,11,17\n");

        let mut buf = Vec::new();
        m.write_json(&mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["order"], 2);
        assert_eq!(v["rows"][3]["iterates"], serde_json::json!([11, 17]));
        assert_eq!(v["rows"][3]["parity"], "11");
    }
}
