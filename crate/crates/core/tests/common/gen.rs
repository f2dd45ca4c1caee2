//! Seeded generators for rational triples, root multisets and Möbius maps.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rug::Rational;

use super::poly::{QFrac, QPoly};

pub use rand::SeedableRng;
pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(r: &mut Rand, num: i32, den: u32) -> Rational {
    Rational::from((r.gen_range(-num..=num), r.gen_range(1..=den)))
}

pub fn nonzero_rational(r: &mut Rand, num: i32, den: u32) -> Rational {
    loop {
        let q = small_rational(r, num, den);
        if q != 0 {
            return q;
        }
    }
}

/// A root strictly inside `(-3, 3)`.
fn root(r: &mut Rand) -> Rational {
    small_rational(r, 8, 3)
}

fn distinct_roots(r: &mut Rand, n: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    while out.len() < n {
        let x = root(r);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn product(roots: &[(Rational, u32)]) -> QPoly {
    roots.iter().fold(QPoly::one(), |acc, (x, m)| acc.mul(&QPoly::linear(x).pow(*m)))
}

fn random_poly(r: &mut Rand, deg: usize) -> QPoly {
    let mut c: Vec<Rational> = (0..deg).map(|_| small_rational(r, 6, 3)).collect();
    c.push(nonzero_rational(r, 6, 3));
    QPoly::new(c)
}

/// `f`, `g`, `alpha` in Q(z), with planted common zeros of `f - alpha` and
/// `g - alpha` of equal or different multiplicity.
#[derive(Clone, Debug)]
pub struct Triple {
    pub f: QFrac,
    pub g: QFrac,
    pub alpha: QFrac,
}

impl Triple {
    pub fn strings(&self) -> (String, String, String) {
        (self.f.to_string(), self.g.to_string(), self.alpha.to_string())
    }
}

pub fn random_triple(r: &mut Rand) -> Triple {
    loop {
        if let Some(t) = try_triple(r) {
            return t;
        }
    }
}

fn try_triple(r: &mut Rand) -> Option<Triple> {
    // alpha: numerator of degree 1..=2, denominator 1, (z - p) or (z - p)^2
    let deg = r.gen_range(1..=2);
    let a_num = random_poly(r, deg);
    let pole = root(r);
    let a_den = match r.gen_range(0..3) {
        0 => QPoly::one(),
        1 => QPoly::linear(&pole),
        _ => QPoly::linear(&pole).pow(2),
    };
    let alpha = QFrac::new(a_num, a_den.clone());

    // planted zeros: shared roots with multiplicities (m, n), total degree <= 5 on each side
    let k = r.gen_range(0..=3);
    let roots = distinct_roots(r, k);
    let (mut pf, mut pg) = (Vec::new(), Vec::new());
    let (mut df, mut dg) = (0, 0);
    for x in roots {
        let m = r.gen_range(1..=3u32);
        let n = match r.gen_range(0..10) {
            0..=3 => m,
            5 | 6 => 0,
            _ => r.gen_range(1..=3u32),
        };
        if df + m > 5 || dg + n > 5 {
            continue;
        }
        df += m;
        dg += n;
        pf.push((x.clone(), m));
        if n > 0 {
            pg.push((x, n));
        }
    }
    let mut nf = product(&pf).scale(&nonzero_rational(r, 5, 2));
    let mut ng = product(&pg).scale(&nonzero_rational(r, 5, 2));
    // an irreducible quadratic factor, shared or not
    if r.gen_bool(0.3) && df < 5 && dg < 5 {
        let q = QPoly::new(vec![
            Rational::from((r.gen_range(1..=4), r.gen_range(1..=2))),
            Rational::new(),
            Rational::from(1),
        ]);
        nf = nf.mul(&q);
        if r.gen_bool(0.7) {
            ng = ng.mul(&q);
        }
    }
    // denominators of f - alpha, g - alpha; sometimes at the pole of alpha
    let den = |r: &mut Rand| match r.gen_range(0..4) {
        0 => QPoly::linear(&pole),
        1 => QPoly::linear(&root(r)),
        _ => QPoly::one(),
    };
    let f = alpha.add(&QFrac::new(nf, den(r)));
    let g = alpha.add(&QFrac::new(ng, den(r)));
    if f.is_zero() || g.is_zero() || f == alpha || g == alpha {
        return None;
    }
    Some(Triple { f, g, alpha })
}

/// Integer coefficients `a, b, c, d` with `ad - bc != 0` that send neither
/// 0, 1 nor -1 to 0 or infinity.
pub fn random_mobius(r: &mut Rand) -> [i64; 4] {
    loop {
        let m: [i64; 4] = std::array::from_fn(|_| r.gen_range(-3..=3));
        let [a, b, c, d] = m;
        let safe = [0, 1, -1].iter().all(|w| a * w + b != 0 && c * w + d != 0);
        if a * d - b * c != 0 && safe {
            return m;
        }
    }
}

/// A multiset of Gaussian-integer roots strictly inside `[-3, 3]^2`.
pub fn gaussian_roots(r: &mut Rand) -> Vec<(i64, i64)> {
    let n = r.gen_range(1..=6);
    (0..n).map(|_| (r.gen_range(-2..=2), r.gen_range(-2..=2))).collect()
}

/// `prod (z - (a + b i))` as expression text.
pub fn gaussian_product(roots: &[(i64, i64)]) -> String {
    roots.iter().map(|(a, b)| format!("(z - ({a}) - ({b})*i)")).collect::<Vec<_>>().join("*")
}

/// An expression together with a point and its signed order there.
#[derive(Clone, Debug)]
pub struct OrderCase {
    pub expr: String,
    pub center: String,
    pub order: i64,
}

/// A rational, a multiple of pi, or a Gaussian rational.
pub fn random_center(r: &mut Rand) -> String {
    match r.gen_range(0..3) {
        0 => format!("({})", small_rational(r, 5, 3)),
        1 => format!("({}*pi)", r.gen_range(-2..=2)),
        _ => format!("(({}) + ({})*i)", small_rational(r, 4, 2), nonzero_rational(r, 4, 2)),
    }
}

/// A factor and its order at `c`.
fn factor(r: &mut Rand, c: &str) -> (String, i64) {
    let k = nonzero_rational(r, 3, 2);
    match r.gen_range(0..8) {
        0 => {
            let j = r.gen_range(1..=3);
            (format!("(z - {c})^{j}"), j)
        }
        1 => (format!("sin(z - {c})"), 1),
        2 => (format!("exp(({k})*z)"), 0),
        3 => (format!("(exp(({k})*(z - {c})) - 1)"), 1),
        4 => (format!("cos(z - {c})"), 0),
        5 => (format!("(1 - cos(z - {c}))"), 2),
        6 => (format!("(({k}) + exp(z - {c}))"), if k == -1 { 1 } else { 0 }),
        _ => (format!("(({k}) + (z - {c})^2)"), 0),
    }
}

fn product_case(r: &mut Rand, c: &str, n: usize) -> (String, i64) {
    let mut parts = Vec::new();
    let mut order = 0;
    for _ in 0..n {
        let (s, o) = factor(r, c);
        parts.push(s);
        order += o;
    }
    (parts.join("*"), order)
}

/// A product of factors, possibly divided by another, at a random center.
pub fn random_order_case(r: &mut Rand) -> OrderCase {
    let center = random_center(r);
    random_order_case_at(r, &center)
}

pub fn random_order_case_at(r: &mut Rand, center: &str) -> OrderCase {
    let center = center.to_string();
    let n = r.gen_range(1..=3);
    let (num, a) = product_case(r, &center, n);
    if r.gen_bool(0.5) {
        let m = r.gen_range(1..=2);
        let (den, b) = product_case(r, &center, m);
        OrderCase { expr: format!("({num})/({den})"), center, order: a - b }
    } else {
        OrderCase { expr: num, center, order: a }
    }
}

/// An entire expression with small coefficients.
pub fn random_entire(r: &mut Rand) -> String {
    let a = small_rational(r, 4, 3);
    let b = small_rational(r, 4, 3);
    match r.gen_range(0..4) {
        0 => format!("({a})*z^2 + ({b})*z"),
        1 => format!("({a})*sin(z) + ({b})"),
        2 => format!("exp(({a})*z) + ({b})*z"),
        _ => format!("({a})*cos(z)*z + ({b})*z^3"),
    }
}
