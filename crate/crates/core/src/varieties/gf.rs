//! Small finite fields F_{p^m} with log/exp tables.

use crate::error::{cap, Result};
use crate::field;

/// Largest field size with tables.
pub const MAX_FIELD: u64 = 10_000_000;

/// F_{p^m}; element i encodes Σ d_k t^k with d_k the base-p digits of i.
#[derive(Clone, Debug)]
pub struct Gf {
    p: u32,
    m: u32,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Gf {
    pub fn new(p: u32, m: u32) -> Result<Self> {
        field::check_prime(p)?;
        let q = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        cap("field size", q, MAX_FIELD)?;
        let q = q as u32;
        if m == 1 {
            // any primitive root
            let g = (1..p).find(|&g| order(g, p) == p - 1).unwrap_or(1);
            return Ok(Self::from_generator(p, m, q, |x| field::mul(x, g, p)));
        }
        let mut low = 0u32;
        loop {
            // monic t^m + (digits of low)
            let modulus: Vec<u32> = digits(low, p, m);
            let times_t = |x: u32| -> u32 {
                let d = digits(x, p, m);
                let top = d[m as usize - 1];
                let mut out = vec![0; m as usize];
                for k in (1..m as usize).rev() {
                    out[k] = d[k - 1];
                }
                for k in 0..m as usize {
                    out[k] = field::sub(out[k], field::mul(top, modulus[k], p), p);
                }
                undigits(&out, p)
            };
            let mut x = 1u32;
            let mut period = 0u32;
            loop {
                x = times_t(x);
                period += 1;
                if x == 1 || x == 0 || period > q {
                    break;
                }
            }
            if x == 1 && period == q - 1 {
                return Ok(Self::from_generator(p, m, q, times_t));
            }
            low += 1;
        }
    }

    fn from_generator(p: u32, m: u32, q: u32, step: impl Fn(u32) -> u32) -> Self {
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut x = 1;
        for i in 0..q - 1 {
            exp.push(x);
            log[x as usize] = i;
            x = step(x);
        }
        Self { p, m, q, exp, log }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return field::add(a, b, self.p);
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = digits(a, self.p, self.m).iter().map(|&x| field::neg(x, self.p)).collect();
        undigits(&d, self.p)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q as u64 - 1);
        self.exp[s as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let s = (self.log[a as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
        self.exp[s as usize]
    }

    /// F_p ↪ F_q.
    pub fn embed(&self, c: u32) -> u32 {
        c % self.p
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q
    }
}

fn order(g: u32, p: u32) -> u32 {
    let mut x = g;
    let mut k = 1;
    while x != 1 {
        x = field::mul(x, g, p);
        k += 1;
        if k > p {
            return 0;
        }
    }
    k
}

fn digits(mut x: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}
