//! Closed-form counts, evaluated exactly.
//!
//! Every division is carried out over the rationals and the final value is
//! checked to be an integer; a nonzero remainder is reported as
//! [`Error::NonIntegral`](crate::Error::NonIntegral) and counted by
//! [`integrality_failures`](crate::error::integrality_failures).
//!
//! Notation: `R(n,k)` counts 2-regular simple stacks on `[n]` with `k` arcs,
//! `Rs(n,k;m)` saturated m-regular simple stacks, `LO_j(n)` saturated
//! 2-regular simple stacks with `j` arcs fewer than the optimum
//! `floor((n-1)/2)`, `ELO(n,k)` saturated extended 2-regular simple stacks and
//! `ELO_j(n)` those with `floor(n/2) - j` arcs.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::combinat::{binom, factorial};
use crate::error::{domain, non_integral, Error, Result};
use crate::{ExactInt, ExactRat, IntSeries};

fn int(v: i64) -> ExactInt {
    ExactInt::from(v)
}

fn rat(v: i64) -> ExactRat {
    ExactRat::from_integer(int(v))
}

fn b(a: i64, c: i64) -> ExactInt {
    binom(a, c)
}

fn integral(op: &'static str, value: ExactRat, args: impl FnOnce() -> String) -> Result<ExactInt> {
    if value.is_integer() {
        Ok(value.to_integer())
    } else {
        Err(non_integral(op, format!("{} evaluates to {value}", args())))
    }
}

fn divide_exact(op: &'static str, num: ExactInt, den: ExactInt, args: impl FnOnce() -> String) -> Result<ExactInt> {
    let (q, r) = num.div_rem(&den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(non_integral(op, format!("{}: {num} / {den} leaves remainder {r}", args())))
    }
}

/// Horner evaluation of `sum c_i n^i` with coefficients `(num, den)` listed
/// from the highest power down.
fn poly(n: i64, coeffs: &[(i64, i64)]) -> ExactRat {
    let x = rat(n);
    coeffs.iter().fold(ExactRat::zero(), |acc, &(p, q)| {
        acc * &x + ExactRat::new(int(p), int(q))
    })
}

/// `R(n,k) = (1/k) C(n-k, k+1) C(n-k-1, k-1)` for `n, k >= 1`.
pub fn count_stacks_sw(n: i64, k: i64) -> Result<ExactInt> {
    if n < 1 || k < 1 {
        return Err(domain("count_stacks_sw", format!("need n, k >= 1, got n={n} k={k}")));
    }
    divide_exact(
        "count_stacks_sw",
        b(n - k, k + 1) * b(n - k - 1, k - 1),
        int(k),
        || format!("n={n} k={k}"),
    )
}

/// `Rs(n,k;m)` as the coefficient of `x^(n-2k) y^k` in
/// `N^(k+1) / ((k+1) (1-x)^(k+1) (1-y)^(2(k+1)))` with
/// `N = y - y^2 + xy + x^(m-1) (1-y)^2 - x^(m+1)`.
pub fn rs_coeff(n: i64, k: i64, m: i64) -> Result<ExactInt> {
    if n < 0 || k < 0 || m < 1 {
        return Err(domain("rs_coeff", format!("need n, k >= 0 and m >= 1, got n={n} k={k} m={m}")));
    }
    if n - 2 * k < 0 {
        return Ok(ExactInt::zero());
    }
    let (dx, dy) = ((n - 2 * k) as usize, k as usize);
    let e = (k + 1) as u32;
    let mm = (m - 1) as usize;
    let numerator = IntSeries::from_terms(
        dx,
        dy,
        [
            (0, 1, int(1)),
            (0, 2, int(-1)),
            (1, 1, int(1)),
            (mm, 0, int(1)),
            (mm, 1, int(-2)),
            (mm, 2, int(1)),
            (mm + 2, 0, int(-1)),
        ],
    );
    let one_minus_x = IntSeries::from_terms(dx, dy, [(0, 0, int(1)), (1, 0, int(-1))]);
    let one_minus_y = IntSeries::from_terms(dx, dy, [(0, 0, int(1)), (0, 1, int(-1))]);
    let denominator = &one_minus_x.pow(e) * &one_minus_y.pow(2 * e);
    let series = &numerator.pow(e) * &denominator.reciprocal()?;
    let c = series.coeff(dx, dy).expect("within bounds").clone();
    divide_exact("rs_coeff", c, int(k + 1), || format!("n={n} k={k} m={m}"))
}

/// `Rs(n,k;2) = 1/(k+1) sum_t C(k+1,t) C(2t+k-1,t-1) C(t,n-2k-t)`.
pub fn rs2(n: i64, k: i64) -> Result<ExactInt> {
    if n < 0 || k < 0 {
        return Err(domain("rs2", format!("need n, k >= 0, got n={n} k={k}")));
    }
    let sum: ExactInt = (1..=k + 1)
        .map(|t| b(k + 1, t) * b(2 * t + k - 1, t - 1) * b(t, n - 2 * k - t))
        .sum();
    divide_exact("rs2", sum, int(k + 1), || format!("n={n} k={k}"))
}

/// `Rs(n,k;3)` as a double sum over `2 <= s <= n-2k`, `1 <= t <= s` with
/// generalized binomials.
pub fn rs3(n: i64, k: i64) -> Result<ExactInt> {
    if n < 0 || k < 0 {
        return Err(domain("rs3", format!("need n, k >= 0, got n={n} k={k}")));
    }
    let mut sum = ExactInt::zero();
    for s in 2..=n - 2 * k {
        for t in 1..=s {
            let sign = if (s - t - 1).rem_euclid(2) == 0 { 1 } else { -1 };
            sum += int(sign)
                * b(k + 1, n - 2 * k - s)
                * b(k + 1, t)
                * b(t, s - t)
                * b(s + k - n - 1, s - t - 1);
        }
    }
    divide_exact("rs3", sum, int(k + 1), || format!("n={n} k={k}"))
}

/// `LO_j(n) = Rs(n, floor((n-1)/2) - j; 2)`; zero when that arc count is
/// negative. `LO_0(0) = 1`.
pub fn lo_sat(n: i64, j: i64) -> Result<ExactInt> {
    if n < 0 || j < 0 {
        return Err(domain("lo_sat", format!("need n, j >= 0, got n={n} j={j}")));
    }
    if n == 0 {
        return Ok(int(i64::from(j == 0)));
    }
    let k = (n - 1).div_euclid(2) - j;
    if k < 0 {
        return Ok(ExactInt::zero());
    }
    rs2(n, k)
}

/// Optimal 2-regular simple stacks: `1` for odd `n`, `n(n+2)/8` for even.
pub fn lo0(n: i64) -> Result<ExactInt> {
    if n < 0 {
        return Err(domain("lo0", format!("need n >= 0, got {n}")));
    }
    if n == 0 || n % 2 == 1 {
        return Ok(int(1));
    }
    integral("lo0", ExactRat::new(int(n * (n + 2)), int(8)), || format!("n={n}"))
}

pub fn lo1(n: i64) -> Result<ExactInt> {
    if n < 3 {
        return Err(domain("lo1", format!("need n >= 3, got {n}")));
    }
    let v = if n % 2 == 1 {
        rat((n - 1) * (n - 3)) * poly(n, &[(1, 1), (8, 1), (31, 1)]) / rat(192)
    } else {
        rat((n - 2) * (n - 4)) * poly(n, &[(1, 1), (12, 1), (68, 1), (-288, 1), (-2304, 1)]) / rat(9216)
    };
    integral("lo1", v, || format!("n={n}"))
}

pub fn lo2(n: i64) -> Result<ExactInt> {
    if n < 3 {
        return Err(domain("lo2", format!("need n >= 3, got {n}")));
    }
    let v = if n % 2 == 1 {
        rat((n - 3) * (n - 5) * (n - 7))
            * poly(n, &[(1, 1), (23, 1), (278, 1), (634, 1), (-9879, 1), (-52497, 1)])
            / rat(737_280)
    } else {
        rat((n - 4) * (n - 6) * (n - 8))
            * poly(
                n,
                &[
                    (1, 1),
                    (28, 1),
                    (400, 1),
                    (-560, 1),
                    (-56336, 1),
                    (-320_768, 1),
                    (1_555_200, 1),
                    (13_363_200, 1),
                ],
            )
            / rat(88_473_600)
    };
    integral("lo2", v, || format!("n={n}"))
}

/// `f(t,r,u,v) = (ut + (u+v)(t+r+v)) / (t(2t+r))`.
pub fn f_factor(t: i64, r: i64, u: i64, v: i64) -> Result<ExactRat> {
    if t < 1 || r < 0 {
        return Err(domain("f_factor", format!("need t >= 1, r >= 0, got t={t} r={r}")));
    }
    Ok(ExactRat::new(int(u * t + (u + v) * (t + r + v)), int(t * (2 * t + r))))
}

/// Number of dual-ordered `(u+v+r)`-partitions described in
/// [`crate::oracle::partitions`]:
/// `l! r! sum_{t=1}^{min(l,r+v)} C(t,l-t) C(r+v-1,t-1) C(2t+r,t-u-v) f(t,r,u,v)`.
pub fn c_formula(l: i64, r: i64, u: i64, v: i64) -> Result<ExactInt> {
    if l < 1 || r < 0 || u < 0 || v < 0 || r + v < 1 {
        return Err(domain(
            "c_formula",
            format!("need l >= 1, r, u, v >= 0, r + v >= 1; got l={l} r={r} u={u} v={v}"),
        ));
    }
    let mut sum = ExactRat::zero();
    for t in 1..=l.min(r + v) {
        let c = b(t, l - t) * b(r + v - 1, t - 1) * b(2 * t + r, t - u - v);
        if !c.is_zero() {
            sum += ExactRat::from_integer(c) * f_factor(t, r, u, v)?;
        }
    }
    let scale: ExactInt = factorial::<ExactInt>(l as u64) * factorial::<ExactInt>(r as u64);
    integral("c_formula", sum * ExactRat::from_integer(scale), || {
        format!("l={l} r={r} u={u} v={v}")
    })
}

/// Parameters of the uniform count of saturated extended stacks whose
/// primary component has `k1` arcs and degree excess `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimaryParams {
    pub k1: i64,
    pub d: i64,
    pub i1: i64,
    pub i2: i64,
    pub j1: i64,
    pub j2: i64,
}

impl PrimaryParams {
    pub const fn new(k1: i64, d: i64, i1: i64, i2: i64, j1: i64, j2: i64) -> Self {
        PrimaryParams { k1, d, i1, i2, j1, j2 }
    }
}

/// Uniform count `P(n,k;k1,d,I1,I2,J1,J2)`.
pub fn p_primary(n: i64, k: i64, p: PrimaryParams) -> Result<ExactInt> {
    let PrimaryParams { k1, d, i1, i2, j1, j2 } = p;
    if [n, k, k1, d, i1, i2, j1, j2].iter().any(|&x| x < 0) {
        return Err(domain("p_primary", format!("negative parameter in n={n} k={k} {p:?}")));
    }
    if k < k1 {
        return Ok(ExactInt::zero());
    }
    let l = n + d - 2 * k;
    if k == k1 {
        if j2 > 0 {
            return Ok(ExactInt::zero());
        }
        return Ok((0..=i1).map(|i| b(i1, i) * b(i2 + i, l - i2 - i)).sum());
    }
    if l <= 0 {
        return Ok(ExactInt::zero());
    }
    let r = k - k1;
    let mut sum = ExactRat::zero();
    for i in 0..=i1 {
        for j in 0..=j1 {
            let weight = b(i1, i) * b(j1, j);
            sum += ExactRat::from_integer(weight * c_formula(l, r, j + j2, i + i2)?);
        }
    }
    let scale: ExactInt = factorial::<ExactInt>(l as u64) * factorial::<ExactInt>(r as u64);
    integral("p_primary", sum / ExactRat::from_integer(scale), || {
        format!("n={n} k={k} {p:?}")
    })
}

/// The two parameter sets whose `P` values (at `n` and at `n-1`) add up to
/// `s_i`; the second is absent for single-term components.
pub fn s_parameters(i: usize) -> Option<(PrimaryParams, Option<PrimaryParams>)> {
    let pp = PrimaryParams::new;
    Some(match i {
        1 => (pp(2, 0, 1, 1, 1, 0), Some(pp(2, 0, 1, 1, 1, 0))),
        2 => (pp(2, 1, 0, 1, 1, 0), Some(pp(2, 1, 0, 1, 1, 0))),
        3 => (pp(3, 1, 1, 1, 1, 1), Some(pp(3, 1, 1, 1, 2, 0))),
        4 => (pp(1, 0, 0, 0, 0, 1), None),
        5 => (pp(3, 2, 1, 2, 0, 0), None),
        6 => (pp(4, 2, 3, 2, 0, 0), None),
        _ => return None,
    })
}

/// `s_i(n,k)`: saturated extended stacks whose primary component has type
/// `A_i` (one of the two mirror types for `i <= 3`).
pub fn s_component(i: usize, n: i64, k: i64) -> Result<ExactInt> {
    let (first, second) =
        s_parameters(i).ok_or_else(|| domain("s_component", format!("no component type {i}")))?;
    if n < 3 || k < 1 {
        return Err(domain("s_component", format!("need n >= 3, k >= 1, got n={n} k={k}")));
    }
    let mut total = p_primary(n, k, first)?;
    if let Some(p) = second {
        total += p_primary(n - 1, k, p)?;
    }
    Ok(total)
}

fn p_poly(i: usize, k: &ExactRat, t: &ExactRat) -> ExactRat {
    let one = ExactRat::one();
    let c = |v: i64| rat(v);
    let ff = |x: ExactRat, m: i64| (0..m).fold(one.clone(), |acc, j| acc * (x.clone() - c(j)));
    let (k2, k3, k4, k5, k6) = (k * k, k * k * k, k.pow(4), k.pow(5), k.pow(6));
    let (t2, t3, t4, t5, t6) = (t * t, t * t * t, t.pow(4), t.pow(5), t.pow(6));
    let kt1 = k - t + &one;
    let k2t = k + t * c(2);
    match i {
        1 => {
            let body = &k3 + (t * c(4) - c(2)) * &k2 + (&t2 * c(2) - t * c(4) + c(1)) * k
                - &t3 * c(2)
                - &t2 * c(4)
                + t * c(4);
            c(2) * kt1 / (ff(k + &one, 3) * ff(k2t, 2)) * body
        }
        2 => {
            let body = &k4 * c(7) + (t * c(22) - c(22)) * &k3 + (-&t2 * c(3) - t * c(49) + c(17)) * &k2
                - (&t3 * c(22) + &t2 * c(13) - t * c(37) + c(2)) * k
                + &t4 * c(6)
                + &t3 * c(44)
                - &t2 * c(4)
                - t * c(18);
            kt1 / (ff(k + &one, 4) * ff(k2t, 2)) * body
        }
        3 => {
            let body = &k4 + (t * c(7) - c(6)) * &k3 + (&t2 * c(15) - t * c(32) + c(13)) * &k2
                + (&t3 * c(7) - &t2 * c(44) + t * c(45) - c(12)) * k
                - &t4 * c(4)
                - &t3 * c(18)
                + &t2 * c(48)
                - t * c(30)
                + c(4);
            c(2) * ff(kt1, 2) / (ff(k + &one, 4) * ff(k2t, 3)) * body
        }
        4 => {
            let body = &k6 * c(4) + (t * c(16) - c(42)) * &k5 + (&t2 * c(8) - t * c(106) + c(160)) * &k4
                - (&t3 * c(24) - &t2 * c(26) - t * c(204) + c(270)) * &k3
                + (-&t4 * c(10) + &t3 * c(132) - &t2 * c(244) - t * c(50) + c(196)) * &k2
                + (&t5 * c(13) - &t4 * c(8) - &t3 * c(217) + &t2 * c(468) - t * c(208) - c(48)) * k
                - &t6 * c(2)
                - &t5 * c(20)
                + &t4 * c(66)
                + &t3 * c(68)
                - &t2 * c(304)
                + t * c(192);
            (t - &one) * (k + t + &one) / (ff(k + &one, 4) * ff(k2t, 5)) * body
        }
        _ => unreachable!("four polynomial terms"),
    }
}

/// `ELO(n,k)` by the direct double sum over `t` and the four rational
/// polynomials.
pub fn elo_direct(n: i64, k: i64) -> Result<ExactInt> {
    check_elo_domain("elo", n, k)?;
    let kr = rat(k);
    let mut sum = ExactRat::zero();
    for t in 1..=k + 1 {
        let tr = rat(t);
        let head = b(k + 1, t) * b(2 * t + k, t - 1);
        if head.is_zero() {
            continue;
        }
        for i in 1..=4i64 {
            let c = b(t, n - 2 * k - 2 - t + i);
            if c.is_zero() {
                continue;
            }
            sum += ExactRat::from_integer(&head * c) * p_poly(i as usize, &kr, &tr);
        }
    }
    integral("elo", sum, || format!("n={n} k={k}"))
}

/// `ELO(n,k) = 2(s1 + s2 + s3) + s4 + s5 + s6`.
pub fn elo_components(n: i64, k: i64) -> Result<ExactInt> {
    check_elo_domain("elo", n, k)?;
    let s = |i| s_component(i, n, k);
    Ok(int(2) * (s(1)? + s(2)? + s(3)?) + s(4)? + s(5)? + s(6)?)
}

fn check_elo_domain(op: &'static str, n: i64, k: i64) -> Result<()> {
    if n < 6 || k < 3 {
        Err(domain(op, format!("formula holds for n >= 6, k >= 3; got n={n} k={k}")))
    } else {
        Ok(())
    }
}

/// `ELO(n,k)` for `n >= 6`, `k >= 3`, evaluated along both paths. Differing
/// results are an internal error.
pub fn elo(n: i64, k: i64) -> Result<ExactInt> {
    let direct = elo_direct(n, k)?;
    let components = elo_components(n, k)?;
    if direct != components {
        return Err(Error::PathDisagreement {
            op: "elo",
            detail: format!("n={n} k={k}: direct {direct}, components {components}"),
        });
    }
    Ok(direct)
}

/// Optimal extended stacks, `n >= 5`.
pub fn elo0(n: i64) -> Result<ExactInt> {
    if n < 5 {
        return Err(domain("elo0", format!("need n >= 5, got {n}")));
    }
    if n % 2 == 0 {
        return Ok(int(n - 3));
    }
    integral("elo0", poly(n, &[(1, 1), (-3, 1), (-7, 1), (69, 1)]) / rat(12), || format!("n={n}"))
}

pub fn elo1(n: i64) -> Result<ExactInt> {
    if n < 7 {
        return Err(domain("elo1", format!("need n >= 7, got {n}")));
    }
    let v = if n % 2 == 0 {
        poly(n, &[(1, 384), (-1, 128), (-1, 24), (5, 32), (7, 8), (-3, 1)])
    } else {
        poly(
            n,
            &[
                (1, 23040),
                (-1, 7680),
                (-29, 23040),
                (-23, 1536),
                (2599, 23040),
                (7481, 7680),
                (-46937, 7680),
                (533, 512),
            ],
        )
    };
    integral("elo1", v, || format!("n={n}"))
}

pub fn elo2(n: i64) -> Result<ExactInt> {
    if n < 8 {
        return Err(domain("elo2", format!("need n >= 8, got {n}")));
    }
    let v = if n % 2 == 0 {
        poly(
            n,
            &[
                (1, 2_211_840),
                (-1, 737_280),
                (-1, 46080),
                (-23, 30720),
                (223, 46080),
                (1397, 15360),
                (-10049, 17280),
                (-6413, 2880),
                (23, 2),
                (27, 1),
            ],
        )
    } else {
        poly(
            n,
            &[
                (1, 309_657_600),
                (-1, 103_219_200),
                (-1, 4_128_768),
                (-61, 4_128_768),
                (5323, 51_609_600),
                (21673, 7_372_800),
                (-558_619, 30_965_760),
                (-143_243, 688_128),
                (75_730_687, 103_219_200),
                (361_742_593, 34_406_400),
                (-32_607_521, 2_293_760),
                (-14_339_839, 65536),
            ],
        )
    };
    integral("elo2", v, || format!("n={n}"))
}

/// `ELO_j(n) = ELO(n, floor(n/2) - j)`, from the formula where it applies
/// and from exhaustive enumeration otherwise.
pub fn elo_sat(n: i64, j: i64) -> Result<ExactInt> {
    if n < 1 || j < 0 {
        return Err(domain("elo_sat", format!("need n >= 1, j >= 0, got n={n} j={j}")));
    }
    let k = n / 2 - j;
    if k < 0 {
        return Ok(ExactInt::zero());
    }
    Ok(crate::table::elo_cell(n as u32, k as u32)?.value)
}
