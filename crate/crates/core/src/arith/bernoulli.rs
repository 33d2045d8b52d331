use std::sync::{Mutex, OnceLock};

use rug::{Integer, Rational};

fn table() -> &'static Mutex<Vec<Rational>> {
    static T: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    T.get_or_init(|| Mutex::new(vec![Rational::from(1)]))
}

/// Bernoulli number B_n with B_1 = -1/2.
pub fn bernoulli(n: usize) -> Rational {
    bernoulli_upto(n)[n].clone()
}

/// B_0, ..., B_n.
pub fn bernoulli_upto(n: usize) -> Vec<Rational> {
    let mut t = table().lock().unwrap_or_else(|e| e.into_inner());
    while t.len() <= n {
        let m = t.len();
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (k, b) in t.iter().enumerate() {
            acc += Rational::from(b * &binom);
            binom = binom * (m + 1 - k) as u64 / (k + 1) as u64;
        }
        acc /= Rational::from(m as u64 + 1);
        t.push(-acc);
    }
    t[..=n].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent route: the Akiyama–Tanigawa triangle (gives B_1 = +1/2).
    fn akiyama_tanigawa(n: usize) -> Vec<Rational> {
        let mut row: Vec<Rational> = Vec::new();
        let mut out = Vec::new();
        for m in 0..=n {
            row.push(Rational::from((1, m as u64 + 1)));
            for j in (1..=m).rev() {
                let diff = Rational::from(&row[j - 1] - &row[j]);
                row[j - 1] = diff * Rational::from(j as u64);
            }
            out.push(row[0].clone());
        }
        out
    }

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0), 1);
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
        assert_eq!(bernoulli(13), 0);
    }

    #[test]
    fn matches_akiyama_tanigawa() {
        let at = akiyama_tanigawa(60);
        let b = bernoulli_upto(60);
        for n in 2..=60 {
            assert_eq!(at[n], b[n], "n = {n}");
        }
        assert_eq!(at[1], Rational::from((1, 2)));
    }

    #[test]
    fn von_staudt_clausen() {
        let b = bernoulli_upto(60);
        for n in (2..=60).step_by(2) {
            let mut denom = Integer::from(1);
            for p in 2..=(n + 1) as u64 {
                let is_prime = (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
                if is_prime && (n as u64).is_multiple_of(p - 1) {
                    denom *= p;
                }
            }
            assert_eq!(b[n].denom(), &denom, "n = {n}");
            // B_n + sum 1/p is an integer
            let mut s = b[n].clone();
            for p in 2..=(n + 1) as u64 {
                let is_prime = (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
                if is_prime && (n as u64).is_multiple_of(p - 1) {
                    s += Rational::from((1, p));
                }
            }
            assert_eq!(s.denom(), &1u32, "n = {n}");
        }
    }
}
