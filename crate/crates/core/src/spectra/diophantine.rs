//! Diophantine solvers behind the cubic, quartic and quintic closed forms.

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{exact_sqrt, is_prime, isqrt};
use crate::error::{Error, Result};

/// `(a, b)` with `T = a^2 + 27 b^2`, `a = 1 (mod 3)`, `gcd(a, p) = 1`, `b >= 0`,
/// taking the smallest such `b`.
pub fn solve_3_27(target: u64, p: u64) -> Result<(i64, i64)> {
    let t = target as i128;
    let bmax = isqrt(t / 27);
    for b in 0..=bmax {
        let Some(a) = exact_sqrt(t - 27 * b * b) else {
            continue;
        };
        for a in [a, -a] {
            if a.mod_floor(&3) == 1 && a.gcd(&(p as i128)) == 1 {
                return Ok((a as i64, b as i64));
            }
        }
    }
    Err(Error::NoSolution(format!(
        "{target} = a^2 + 27b^2 with a = 1 mod 3, gcd(a, {p}) = 1"
    )))
}

/// `(c, d)` with `T = c^2 + 4 d^2`, `c = 1 (mod 4)`, `gcd(c, p) = 1`, `d >= 0`,
/// taking the smallest such `d`.
pub fn solve_two_squares(target: u64, p: u64) -> Result<(i64, i64)> {
    let t = target as i128;
    let dmax = isqrt(t / 4);
    for d in 0..=dmax {
        let Some(c) = exact_sqrt(t - 4 * d * d) else {
            continue;
        };
        for c in [c, -c] {
            if c.mod_floor(&4) == 1 && c.gcd(&(p as i128)) == 1 {
                return Ok((c as i64, d as i64));
            }
        }
    }
    Err(Error::NoSolution(format!(
        "{target} = c^2 + 4d^2 with c = 1 mod 4, gcd(c, {p}) = 1"
    )))
}

/// A solution of Dickson's system
/// `16 p^e = x^2 + 125 w^2 + 50 v^2 + 50 u^2`, `x w = v^2 - 4 u v - u^2`,
/// `x = -1 (mod 5)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DicksonSolution {
    pub x: i64,
    pub w: i64,
    pub v: i64,
    pub u: i64,
}

impl DicksonSolution {
    /// The order-four map `(x, w, v, u) -> (x, -w, -u, v)`.
    pub fn sigma(self) -> Self {
        DicksonSolution {
            x: self.x,
            w: -self.w,
            v: -self.u,
            u: self.v,
        }
    }

    pub fn satisfies(&self, p: u64, e: u32) -> bool {
        let (x, w, v, u) = (
            self.x as i128,
            self.w as i128,
            self.v as i128,
            self.u as i128,
        );
        let n = 16 * (p as i128).pow(e);
        x * x + 125 * w * w + 50 * v * v + 50 * u * u == n
            && x * w == v * v - 4 * u * v - u * u
            && x.mod_floor(&5) == 4
    }

    /// `L = 2x(v^2 + u^2) + 5w(11v^2 - 4vu - 11u^2)`.
    pub fn l(&self) -> i128 {
        let (x, w, v, u) = (
            self.x as i128,
            self.w as i128,
            self.v as i128,
            self.u as i128,
        );
        2 * x * (v * v + u * u) + 5 * w * (11 * v * v - 4 * v * u - 11 * u * u)
    }

    pub fn m(&self) -> i128 {
        let (x, w, v, u) = (
            self.x as i128,
            self.w as i128,
            self.v as i128,
            self.u as i128,
        );
        2 * x * x * u + 7 * x * v * v + 20 * x * v * u - 3 * x * u * u
            + 125 * w * w * w
            + 200 * w * w * v
            - 150 * w * w * u
            + 5 * w * v * v
            - 20 * w * v * u
            - 105 * w * u * u
            - 40 * v * v * v
            - 60 * v * v * u
            + 120 * v * u * u
            + 20 * u * u * u
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DicksonSet {
    /// Every solution, sorted.
    pub all: Vec<DicksonSolution>,
    /// Solutions with `p` not dividing `x^2 - 125 w^2`.
    pub unramified: Vec<DicksonSolution>,
}

/// Exhaustive solution of Dickson's system for `16 p^e`.
///
/// Checks `|S| = (e + 1)^2` and `|S^U| = 4`.
pub fn solve_dickson(p: u64, e: u32) -> Result<DicksonSet> {
    if !is_prime(p) || p % 5 != 1 {
        return Err(Error::Precondition(format!(
            "Dickson's system needs a prime p = 1 mod 5, got {p}"
        )));
    }
    if e == 0 {
        return Err(Error::Precondition("exponent must be positive".into()));
    }
    let n = 16
        * (p as i128)
            .checked_pow(e)
            .ok_or_else(|| Error::InvalidParameter("p^e overflows".into()))?;
    let wmax = isqrt(n / 125);
    let vmax = isqrt(n / 50);
    let mut all = Vec::new();
    for w in -wmax..=wmax {
        let rw = n - 125 * w * w;
        for v in -vmax..=vmax {
            let rv = rw - 50 * v * v;
            if rv < 0 {
                continue;
            }
            let umax = isqrt(rv / 50);
            for u in -umax..=umax {
                let rhs = v * v - 4 * u * v - u * u;
                let rem = rv - 50 * u * u;
                let candidates: Vec<i128> = if w == 0 {
                    if rhs != 0 {
                        continue;
                    }
                    match exact_sqrt(rem) {
                        Some(x) => vec![x, -x],
                        None => continue,
                    }
                } else {
                    if rhs % w != 0 {
                        continue;
                    }
                    vec![rhs / w]
                };
                for x in candidates {
                    if x * x == rem && x.mod_floor(&5) == 4 {
                        let s = DicksonSolution {
                            x: x as i64,
                            w: w as i64,
                            v: v as i64,
                            u: u as i64,
                        };
                        if !all.contains(&s) {
                            all.push(s);
                        }
                    }
                }
            }
        }
    }
    all.sort();
    let pp = p as i128;
    let unramified: Vec<DicksonSolution> = all
        .iter()
        .copied()
        .filter(|s| {
            let (x, w) = (s.x as i128, s.w as i128);
            (x * x - 125 * w * w).mod_floor(&pp) != 0
        })
        .collect();
    let expected = (e as usize + 1).pow(2);
    if all.len() != expected || unramified.len() != 4 {
        return Err(Error::NoSolution(format!(
            "Dickson system for 16*{p}^{e}: found {} solutions ({} unramified), expected {expected} (4)",
            all.len(),
            unramified.len()
        )));
    }
    Ok(DicksonSet { all, unramified })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_twenty_seven() {
        assert_eq!(solve_3_27(28, 7).unwrap(), (1, 1));
        assert_eq!(solve_3_27(4 * 343, 7).unwrap(), (-20, 6));
        assert_eq!(solve_3_27(52, 13).unwrap(), (-5, 1));
        assert!(solve_3_27(8, 2).is_err());
    }

    #[test]
    fn two_squares() {
        assert_eq!(solve_two_squares(25, 5).unwrap(), (-3, 2));
        assert_eq!(solve_two_squares(5, 5).unwrap(), (1, 1));
        assert_eq!(solve_two_squares(13, 13).unwrap(), (-3, 1));
        assert!(solve_two_squares(7, 7).is_err());
    }

    #[test]
    fn dickson_11_5() {
        let set = solve_dickson(11, 5).unwrap();
        assert_eq!(set.all.len(), 36);
        let rep = DicksonSolution {
            x: -396,
            w: -100,
            v: 150,
            u: -30,
        };
        let mut orbit = vec![
            rep,
            rep.sigma(),
            rep.sigma().sigma(),
            rep.sigma().sigma().sigma(),
        ];
        orbit.sort();
        assert_eq!(set.unramified, orbit);
        assert!(set.all.iter().all(|s| s.satisfies(11, 5)));
        assert_eq!(rep.sigma().sigma().sigma().sigma(), rep);
    }

    #[test]
    fn dickson_11_1() {
        let set = solve_dickson(11, 1).unwrap();
        assert_eq!(set.all.len(), 4);
        assert!(set.all.contains(&DicksonSolution {
            x: -1,
            w: -1,
            v: 1,
            u: 0
        }));
    }

    #[test]
    fn dickson_rejects_bad_prime() {
        assert!(solve_dickson(7, 1).is_err());
    }
}
