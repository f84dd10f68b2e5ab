//! Density sequences ρ(n) = κ(n)/n with sparsity and dyadic-window extrema.

use std::io::Write;

use num_rational::Ratio;
#[cfg(test)]
use num_traits::ToPrimitive;

use crate::setexpr::{SetError, SetExpr};

type Q = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DyadicWindow {
    pub k: u32,
    pub start: i64,
    pub end: i64,
    pub min: (i64, i64),
    pub max: (i64, i64),
}

impl DyadicWindow {
    pub fn min_q(&self) -> Q {
        Q::new(self.min.0, self.min.1)
    }

    pub fn max_q(&self) -> Q {
        Q::new(self.max.0, self.max.1)
    }
}

#[derive(Clone, Debug)]
pub struct DensitySeq {
    kappa: Vec<u64>,
    elements: Vec<i64>,
}

pub fn density_sequence(e: &SetExpr, upto: i64) -> Result<DensitySeq, SetError> {
    let upto = upto.max(1);
    let kappa = e.prefix_counts(upto)?;
    let elements = (1..=upto).filter(|&x| kappa[x as usize] > kappa[x as usize - 1]).collect();
    Ok(DensitySeq { kappa, elements })
}

impl DensitySeq {
    pub fn upto(&self) -> i64 {
        self.kappa.len() as i64 - 1
    }

    pub fn kappa(&self, n: i64) -> u64 {
        self.kappa[n as usize]
    }

    pub fn rho(&self, n: i64) -> Q {
        Q::new(self.kappa[n as usize] as i64, n)
    }

    pub fn rho_f64(&self, n: i64) -> f64 {
        self.kappa[n as usize] as f64 / n as f64
    }

    /// a(n), the n-th element, if it is within range.
    pub fn element(&self, n: i64) -> Option<i64> {
        self.elements.get(n as usize - 1).copied()
    }

    /// ϱ(n) = n / a(n), while a(n) is within range.
    pub fn sparsity(&self, n: i64) -> Option<Q> {
        let a = self.element(n)?;
        Some(Q::new(n, a))
    }

    /// ς(n) = a(n) / n.
    pub fn sparseness(&self, n: i64) -> Option<Q> {
        self.sparsity(n).map(|q| q.recip())
    }

    /// Minimum and maximum of ρ over each window [2^k, 2^(k+1)).
    pub fn dyadic_extrema(&self) -> Vec<DyadicWindow> {
        let top = self.upto();
        let mut out = Vec::new();
        let mut k = 0u32;
        while (1i64 << k) <= top {
            let start = 1i64 << k;
            let end = ((1i64 << (k + 1)) - 1).min(top);
            let (mut lo, mut hi) = (start, start);
            for n in start..=end {
                if self.rho(n) < self.rho(lo) {
                    lo = n;
                }
                if self.rho(n) > self.rho(hi) {
                    hi = n;
                }
            }
            let pair = |n: i64| (self.kappa[n as usize] as i64, n);
            out.push(DyadicWindow { k, start, end, min: pair(lo), max: pair(hi) });
            k += 1;
        }
        out
    }

    /// Rows `n,kappa,rho` every `step` indices, the last index always
    /// included.
    pub fn write_csv<W: Write>(&self, w: W, step: usize) -> csv::Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["n", "kappa", "rho"])?;
        let top = self.upto();
        let step = step.max(1);
        for n in (1..=top).filter(|&n| n as usize % step == 0 || n == top) {
            wr.write_record([n.to_string(), self.kappa(n).to_string(), self.rho(n).to_string()])?;
        }
        wr.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str, n: i64) -> DensitySeq {
        density_sequence(&SetExpr::parse(s).unwrap(), n).unwrap()
    }

    #[test]
    fn simple_densities() {
        assert_eq!(seq("2N", 10_000).rho(10_000), Q::new(1, 2));
        let n = seq("N", 50);
        assert!((1..=50).all(|k| n.rho(k) == Q::from_integer(1)));
    }

    #[test]
    fn sparsity_is_a_subsequence() {
        let s = seq("N^(2) u 3N", 4000);
        for n in 1..200 {
            let a = s.element(n).unwrap();
            assert_eq!(s.sparsity(n), Some(s.rho(a)));
        }
    }

    #[test]
    fn binary_digit_oscillation() {
        let s = seq("od2", 1 << 17);
        let w = s.dyadic_extrema();
        let last = w.iter().rev().find(|w| w.end - w.start + 1 == 1 << w.k).unwrap();
        let lo = w.iter().filter(|x| x.k + 2 > last.k).map(|x| x.min_q()).min().unwrap();
        let hi = w.iter().filter(|x| x.k + 2 > last.k).map(|x| x.max_q()).max().unwrap();
        assert!((lo.to_f64().unwrap() - 1.0 / 3.0).abs() < 0.02, "{lo}");
        assert!((hi.to_f64().unwrap() - 2.0 / 3.0).abs() < 0.02, "{hi}");
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        seq("2N", 4).write_csv(&mut buf, 1).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "n,kappa,rho\n1,0,0\n2,1,1/2\n3,1,1/3\n4,2,1/2\n");
    }
}
