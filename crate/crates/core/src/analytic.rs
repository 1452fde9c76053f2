//! Mangoldt function, Chebyshev `Ψ`, prime counting, the logarithmic
//! integral on `g_P`, and the `ln p` versus `deg t(p)` sweep.
//!
//! `Ψ(x)` sums `Λ(n)` over `n <= x`, the usual convention. Double precision
//! throughout.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::GpElement;
use crate::arithmetic::PrimeTable;
use crate::error::{Error, Result};
use crate::poset;
use crate::trees::PrimeTreeCache;

// Neumaier compensated summation.
#[derive(Default)]
struct Sum {
    sum: f64,
    comp: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `Λ(n)`: `ln p` if `n = p^k` with `k >= 1`, else 0.
pub fn mangoldt(table: &PrimeTable, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("Λ(0) is undefined".into()));
    }
    let f = table.factorize(n)?;
    Ok(match f.len() {
        1 => (f.primes().next().unwrap() as f64).ln(),
        _ => 0.0,
    })
}

fn check_psi_arg(table: &PrimeTable, x: u64) -> Result<()> {
    if x == 0 {
        return Err(Error::Domain("Ψ is evaluated at x >= 1".into()));
    }
    table.check_in_table(x)
}

/// `Σ_{n <= x} Λ(n)` term by term over every `n`.
pub fn chebyshev_psi_direct(table: &PrimeTable, x: u64) -> Result<f64> {
    check_psi_arg(table, x)?;
    let mut s = Sum::default();
    for n in 2..=x {
        let p = table.smallest_prime_factor(n).expect("n within table");
        let mut m = n;
        while m % p == 0 {
            m /= p;
        }
        if m == 1 {
            s.add((p as f64).ln());
        }
    }
    Ok(s.value())
}

/// `Σ_{p <= x} ⌊log_p x⌋ ln p`.
pub fn chebyshev_psi_by_primes(table: &PrimeTable, x: u64) -> Result<f64> {
    check_psi_arg(table, x)?;
    let mut s = Sum::default();
    for &p in table.primes_between(2, x) {
        let mut k = 0u32;
        let mut pk = p;
        loop {
            k += 1;
            match pk.checked_mul(p) {
                Some(next) if next <= x => pk = next,
                _ => break,
            }
        }
        s.add(k as f64 * (p as f64).ln());
    }
    Ok(s.value())
}

/// Chebyshev `Ψ(x)`. Both summation routes are evaluated and must agree.
pub fn chebyshev_psi(table: &PrimeTable, x: u64) -> Result<f64> {
    let direct = chebyshev_psi_direct(table, x)?;
    let by_primes = chebyshev_psi_by_primes(table, x)?;
    debug_assert!((direct - by_primes).abs() <= 1e-9 * by_primes.abs().max(1.0));
    Ok(by_primes)
}

/// `π(x)`, the number of primes `<= x`.
pub fn prime_pi(table: &PrimeTable, x: u64) -> Result<u64> {
    if x == 0 {
        return Err(Error::Domain("π is evaluated at x >= 1".into()));
    }
    Ok(table.count_upto(x)? as u64)
}

/// `∫_P k = Σ k_p ln p`; equals `ln n` on `Div(n)`.
pub fn integral(k: &GpElement) -> f64 {
    let mut s = Sum::default();
    for (p, c) in k.terms() {
        s.add(c as f64 * (p as f64).ln());
    }
    s.value()
}

/// Per-prime record of the sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatRow {
    pub p: u64,
    pub ln_p: f64,
    /// Node count of `t(p)`.
    pub deg_t: u64,
    /// Distinct prime divisors of `p - 1`.
    pub w: u32,
    /// Prime divisors of `p - 1` with multiplicity.
    #[serde(rename = "W")]
    pub big_w: u32,
    /// Longest `<<`-chain from `p` down to 2, in nodes.
    pub depth: u32,
}

/// Mean `deg t(p)` over the primes in `[lo, hi)`, `hi = 2 lo`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicBucket {
    pub k: u32,
    pub lo: u64,
    pub hi: u64,
    pub count: usize,
    pub mean_deg_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub rows: usize,
    /// Least-squares slope of `deg_t` on `ln_p` through the origin.
    pub slope: f64,
    /// Pearson correlation of `ln_p` and `deg_t`; NaN when either has zero
    /// variance (e.g. a single row).
    pub pearson_r: f64,
    /// Ascending, disjoint dyadic ranges; empty ranges are omitted.
    pub bucket_means: Vec<DyadicBucket>,
}

impl ConjectureReport {
    pub fn from_rows(rows: &[StatRow]) -> Self {
        let n = rows.len() as f64;
        let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (
            Sum::default(),
            Sum::default(),
            Sum::default(),
            Sum::default(),
            Sum::default(),
        );
        for r in rows {
            let (x, y) = (r.ln_p, r.deg_t as f64);
            sx.add(x);
            sy.add(y);
            sxx.add(x * x);
            syy.add(y * y);
            sxy.add(x * y);
        }
        let slope = sxy.value() / sxx.value();
        let cov = sxy.value() - sx.value() * sy.value() / n;
        let vx = sxx.value() - sx.value() * sx.value() / n;
        let vy = syy.value() - sy.value() * sy.value() / n;
        let pearson_r = if vx > 0.0 && vy > 0.0 {
            cov / (vx * vy).sqrt()
        } else {
            f64::NAN
        };

        let mut buckets: Vec<DyadicBucket> = Vec::new();
        for r in rows {
            let k = 63 - r.p.leading_zeros();
            match buckets.last_mut() {
                Some(b) if b.k == k => {
                    b.count += 1;
                    b.mean_deg_t += r.deg_t as f64;
                }
                _ => buckets.push(DyadicBucket {
                    k,
                    lo: 1 << k,
                    hi: 1 << (k + 1),
                    count: 1,
                    mean_deg_t: r.deg_t as f64,
                }),
            }
        }
        for b in &mut buckets {
            b.mean_deg_t /= b.count as f64;
        }

        ConjectureReport {
            rows: rows.len(),
            slope,
            pearson_r,
            bucket_means: buckets,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub report: ConjectureReport,
    pub rows: Vec<StatRow>,
}

/// One [`StatRow`] per prime in `[lo, hi]`, ascending, plus the summary
/// report. Rows are computed in parallel on the current rayon pool; the
/// output does not depend on the schedule.
pub fn conjecture_sweep(lo: u64, hi: u64, cache: &PrimeTreeCache) -> Result<Sweep> {
    let table = cache.table();
    if lo < 2 || lo > hi || hi > table.limit() {
        return Err(Error::Bounds(format!(
            "sweep range [{lo}, {hi}] must satisfy 2 <= lo <= hi <= {}",
            table.limit()
        )));
    }
    let primes = table.primes_between(lo, hi);

    let mut memo = HashMap::new();
    let depths = primes
        .iter()
        .map(|&p| poset::chain_depth_memo(table, p, &mut memo))
        .collect::<Result<Vec<u32>>>()?;

    let rows = primes
        .par_iter()
        .zip(depths.par_iter())
        .map(|(&p, &depth)| {
            let f = table.factorize(p - 1)?;
            Ok(StatRow {
                p,
                ln_p: (p as f64).ln(),
                deg_t: cache.prime_tree(p)?.degree() as u64,
                w: f.len() as u32,
                big_w: f.total() as u32,
                depth,
            })
        })
        .collect::<Result<Vec<StatRow>>>()?;

    Ok(Sweep {
        report: ConjectureReport::from_rows(&rows),
        rows,
    })
}

/// `x` to `digits` significant digits in positional notation.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new leading digit, e.g. 9.999995 -> 10.00000
    let rounded: f64 = s.parse().unwrap();
    let m2 = rounded.abs().log10().floor() as i64;
    if m2 != magnitude {
        let decimals = (digits as i64 - 1 - m2).max(0) as usize;
        return format!("{x:.decimals$}");
    }
    s
}

impl Sweep {
    /// CSV with header `p,ln_p,deg_t,w,W,depth`, LF endings, `ln_p` to six
    /// significant digits, followed by `#` comment lines with the report.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,ln_p,deg_t,w,W,depth\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.p,
                format_significant(r.ln_p, 6),
                r.deg_t,
                r.w,
                r.big_w,
                r.depth
            )
            .unwrap();
        }
        let rep = &self.report;
        writeln!(
            out,
            "# slope={:.9}, pearson_r={:.9}",
            rep.slope, rep.pearson_r
        )
        .unwrap();
        writeln!(out, "# rows={}", rep.rows).unwrap();
        for b in &rep.bucket_means {
            writeln!(
                out,
                "# bucket=[{},{}), count={}, mean_deg_t={:.6}",
                b.lo, b.hi, b.count, b.mean_deg_t
            )
            .unwrap();
        }
        out
    }

    pub fn write_csv<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }
}

/// Checkpoint row of the prime number theorem table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PntRow {
    pub x: u64,
    pub pi: u64,
    /// `π(x) ln(x) / x`
    pub pi_ln_ratio: f64,
    /// `Ψ(x) / x`
    pub psi_ratio: f64,
}

pub fn pnt_table(table: &PrimeTable, checkpoints: &[u64]) -> Result<Vec<PntRow>> {
    checkpoints
        .iter()
        .map(|&x| {
            let pi = prime_pi(table, x)?;
            let xf = x as f64;
            Ok(PntRow {
                x,
                pi,
                pi_ln_ratio: pi as f64 * xf.ln() / xf,
                psi_ratio: chebyshev_psi(table, x)? / xf,
            })
        })
        .collect()
}
