//! Randomised axiom suites over the skyline basis.
//!
//! Every suite draws its samples from a seeded generator, so a report is
//! reproducible from `(algebra, bounds, samples, seed)`.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::hopf::{self, TensorLinComb};
use crate::scalars::{self, binomial_mod_p, composition_coeff, koszul_sign, LinComb};
use crate::skyline::{Algebra, Column, Decoration, Element, Monomial};
use crate::stable::{self, Flavor};

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> SuiteReport {
        SuiteReport { name: name.to_string(), ..Default::default() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 50 {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Basis monomials with positive component, grouped by component.
pub struct Pool {
    pub by_component: BTreeMap<u64, Vec<Monomial>>,
}

impl Pool {
    pub fn new(alg: &Algebra, n_max: u64, d_max: u64) -> Pool {
        let signs: &[u8] = if alg.p == 2 { &[0] } else { &[0, 1] };
        let mut by_component = BTreeMap::new();
        for n in 1..=n_max {
            let mut v = Vec::new();
            for d in 0..=d_max {
                for &e in signs {
                    v.extend(alg.enumerate_skyline(n, d, e));
                }
            }
            by_component.insert(n, v);
        }
        Pool { by_component }
    }

    pub fn any(&self, rng: &mut StdRng) -> Monomial {
        let n = *self.by_component.keys().collect::<Vec<_>>().choose(rng).unwrap();
        self.of(*n, rng).unwrap()
    }

    pub fn of(&self, n: u64, rng: &mut StdRng) -> Option<Monomial> {
        self.by_component.get(&n).and_then(|v| v.choose(rng).cloned())
    }

    /// A random homogeneous element: up to three monomials of one tri-grade.
    pub fn element(&self, alg: &Algebra, rng: &mut StdRng) -> Element {
        let m = self.any(rng);
        let g = alg.grade(&m);
        let same: Vec<&Monomial> = self.by_component[&g.n].iter().filter(|x| alg.grade(x) == g).collect();
        let mut out = LinComb::single(alg.p, m, rng.gen_range(1..alg.p));
        for _ in 0..rng.gen_range(0..3) {
            let mut next = out.clone();
            next.add_term((*same.choose(rng).unwrap()).clone(), rng.gen_range(1..alg.p));
            if !next.is_zero() {
                out = next;
            }
        }
        out
    }
}

fn mono(alg: &Algebra, m: &Monomial) -> Element {
    LinComb::single(alg.p, m.clone(), 1)
}

type Triple = LinComb<(Monomial, Monomial, Monomial)>;

fn coassoc_left(alg: &Algebra, x: &TensorLinComb) -> Triple {
    let mut out = Triple::zero(alg.p);
    for ((a, b), c) in x.iter() {
        for ((a1, a2), c2) in hopf::coproduct(alg, &mono(alg, a)).iter() {
            out.add_term((a1.clone(), a2.clone(), b.clone()), scalars::mul(c, c2, alg.p));
        }
    }
    out
}

fn coassoc_right(alg: &Algebra, x: &TensorLinComb) -> Triple {
    let mut out = Triple::zero(alg.p);
    for ((a, b), c) in x.iter() {
        for ((b1, b2), c2) in hopf::coproduct(alg, &mono(alg, b)).iter() {
            out.add_term((a.clone(), b1.clone(), b2.clone()), scalars::mul(c, c2, alg.p));
        }
    }
    out
}

fn twist(alg: &Algebra, x: &TensorLinComb) -> TensorLinComb {
    let mut out = TensorLinComb::zero(alg.p);
    for ((a, b), c) in x.iter() {
        let s = koszul_sign(alg.total(a), alg.total(b), alg.p);
        out.add_term((b.clone(), a.clone()), scalars::mul(c, s, alg.p));
    }
    out
}

/// Cup product computed by peeling the last column of `b` instead of the first.
pub fn cup_peel_last(alg: &Algebra, a: &Monomial, b: &Monomial) -> Element {
    let p = alg.p;
    if b.columns.len() < 2 || alg.grade(a).n != alg.grade(b).n {
        return hopf::cup_monomials(alg, a, b).unwrap();
    }
    let (last, init) = b.columns.split_last().unwrap();
    let head = Monomial { columns: init.to_vec() };
    let tail = Monomial::single(last.clone());
    let (ga, gh, gt) = (alg.grade(a), alg.grade(&head), alg.grade(&tail));
    let mut out = alg.zero();
    for ((a1, a2), c) in hopf::coproduct_component(alg, &mono(alg, a), gh.n, gt.n).iter() {
        let s = scalars::sign(hopf::distributivity_exponent(ga, alg.grade(a2), gh, gt), p);
        let l = hopf::cup_monomials(alg, a1, &head).unwrap();
        let r = hopf::cup_monomials(alg, a2, &tail).unwrap();
        out.add_scaled(&hopf::transfer_product(alg, &l, &r), scalars::mul(c, s, p));
    }
    out
}

/// `a·(x ⊙ y)` expanded by distributivity over `Δ(a)`.
fn distribute(alg: &Algebra, a: &Monomial, x: &Monomial, y: &Monomial) -> Element {
    let p = alg.p;
    let (ga, gx, gy) = (alg.grade(a), alg.grade(x), alg.grade(y));
    let mut out = alg.zero();
    for ((a1, a2), c) in hopf::coproduct_component(alg, &mono(alg, a), gx.n, gy.n).iter() {
        let s = scalars::sign(hopf::distributivity_exponent(ga, alg.grade(a2), gx, gy), p);
        let l = hopf::cup_monomials(alg, a1, x).unwrap();
        let r = hopf::cup_monomials(alg, a2, y).unwrap();
        out.add_scaled(&hopf::transfer_product(alg, &l, &r), scalars::mul(c, s, p));
    }
    out
}

/// Bialgebra, (co)associativity, (co)commutativity, unit and distributivity laws.
pub fn hopf_suite(alg: &Algebra, pool: &Pool, samples: usize, seed: u64) -> SuiteReport {
    let p = alg.p;
    let mut rep = SuiteReport::new("hopf");
    let mut rng = StdRng::seed_from_u64(seed);
    let r = |x: &Element| alg.render(x);
    for _ in 0..samples {
        let a = pool.any(&mut rng);
        let n = alg.grade(&a).n;
        let b = pool.of(n, &mut rng).unwrap();
        let c = pool.of(n, &mut rng).unwrap();
        let (ea, eb, ec) = (mono(alg, &a), mono(alg, &b), mono(alg, &c));
        let (ga, gb) = (alg.grade(&a), alg.grade(&b));

        // transfer product
        let u = pool.any(&mut rng);
        let mut v = pool.any(&mut rng);
        for _ in 0..20 {
            if alg.grade(&v).e == alg.grade(&u).e {
                break;
            }
            rep.check(hopf::transfer_monomials(alg, &u, &v).is_zero(), || {
                format!("⊙ across sign degrees: {} , {}", alg.render_monomial(&u), alg.render_monomial(&v))
            });
            v = pool.any(&mut rng);
        }
        if alg.grade(&v).e != alg.grade(&u).e {
            continue;
        }
        let (eu, ev) = (mono(alg, &u), mono(alg, &v));
        let uv = hopf::transfer_product(alg, &eu, &ev);
        let vu = hopf::transfer_product(alg, &ev, &eu);
        let s = koszul_sign(alg.total(&u), alg.total(&v), p);
        rep.check(uv == vu.scaled(s), || format!("⊙ commutativity: {} , {}", r(&eu), r(&ev)));
        let l = hopf::transfer_product(alg, &uv, &ea);
        let rr = hopf::transfer_product(alg, &eu, &hopf::transfer_product(alg, &ev, &ea));
        rep.check(l == rr, || format!("⊙ associativity: {} , {} , {}", r(&eu), r(&ev), r(&ea)));

        // coproduct
        let du = hopf::coproduct(alg, &eu);
        rep.check(coassoc_left(alg, &du) == coassoc_right(alg, &du), || format!("coassociativity: {}", r(&eu)));
        rep.check(twist(alg, &du) == du, || format!("cocommutativity: {}", r(&eu)));
        let lhs = hopf::coproduct(alg, &uv);
        let rhs = hopf::tensor_transfer(alg, &du, &hopf::coproduct(alg, &ev));
        rep.check(lhs == rhs, || format!("(⊙, Δ) bialgebra: {} , {}", r(&eu), r(&ev)));

        // cup product
        let ab = hopf::cup_product(alg, &ea, &eb).unwrap();
        let ba = hopf::cup_product(alg, &eb, &ea).unwrap();
        rep.check(ab == ba.scaled(scalars::sign(ga.d * gb.d, p)), || format!("cup commutativity: {} , {}", r(&ea), r(&eb)));
        let l = hopf::cup_product(alg, &ab, &ec).unwrap();
        let rr = hopf::cup_product(alg, &ea, &hopf::cup_product(alg, &eb, &ec).unwrap()).unwrap();
        rep.check(l == rr, || format!("cup associativity: {} , {} , {}", r(&ea), r(&eb), r(&ec)));
        let unit = alg.unit(n);
        rep.check(hopf::cup_product(alg, &unit, &ea).unwrap() == ea, || format!("cup unit: {}", r(&ea)));
        if u.columns.iter().map(|c| alg.width(c)).sum::<u64>() != n {
            rep.check(hopf::cup_product(alg, &eu, &ea).unwrap().is_zero(), || format!("cup across components: {} , {}", r(&eu), r(&ea)));
        }
        let lhs = hopf::coproduct(alg, &ab);
        let rhs = hopf::tensor_cup(alg, &hopf::coproduct(alg, &ea), &hopf::coproduct(alg, &eb)).unwrap();
        rep.check(lhs == rhs, || format!("(·, Δ) bialgebra: {} , {}", r(&ea), r(&eb)));

        if alg.pres.dim() > 1 {
            decorated_compatibility(alg, pool, n, &mut rng, &mut rep);
        }

        // distributivity: peeling order and arbitrary factorizations
        rep.check(cup_peel_last(alg, &a, &b) == ab, || format!("distributivity order: {} , {}", r(&ea), r(&eb)));
        if n >= 2 {
            let k = rng.gen_range(1..n);
            if let (Some(x), Some(y)) = (pool.of(k, &mut rng), pool.of(n - k, &mut rng)) {
                let xy = hopf::transfer_product(alg, &mono(alg, &x), &mono(alg, &y));
                let lhs = hopf::cup_product(alg, &ea, &xy).unwrap();
                let rhs = distribute(alg, &a, &x, &y);
                rep.check(lhs == rhs, || {
                    format!("distributivity: {} · ({} ⊙ {})", r(&ea), alg.render_monomial(&x), alg.render_monomial(&y))
                });
            }
        }
    }
    rep
}

/// `Γ1 x1^[W] · Γ2 x2^[W] = ± ι(x1 x2)^[W] · π(Γ1 · Γ2)` on single columns, where
/// the sign is that of reordering `Γ1 X1 Γ2 X2` into `X1 X2 Γ1 Γ2`.
fn decorated_compatibility(alg: &Algebra, pool: &Pool, n: u64, rng: &mut StdRng, rep: &mut SuiteReport) {
    let p = alg.p;
    let singles: Vec<&Monomial> = pool.by_component[&n].iter().filter(|m| m.columns.len() == 1).collect();
    let (Some(m1), Some(m2)) = (singles.choose(rng), singles.choose(rng)) else { return };
    let (k1, k2) = (&m1.columns[0], &m2.columns[0]);
    let Ok(lhs) = hopf::cup_columns(alg, k1, k2) else { return };
    let Ok(vw) = alg.pres.multiply_basis(k1.dec.class, k2.dec.class) else { return };
    let undecorate = |k: &Column| Column { dec: Decoration { class: alg.pres.unit, sign: 0 }, ..k.clone() };
    let (g1, g2) = (undecorate(k1), undecorate(k2));
    let gamma = hopf::cup_columns(alg, &g1, &g2).unwrap();
    let sign = (k1.dec.sign + k2.dec.sign) % 2;
    let x = hopf::divided_power(alg, &hopf::iota_lin(alg, &vw, sign).unwrap(), n).unwrap();
    let rhs = hopf::cup_product(alg, &x, &gamma).unwrap();
    let (dv, dw) = (alg.pres.degree(k1.dec.class) as u64, alg.pres.degree(k2.dec.class) as u64);
    let (d1, d2) = (alg.undecorated_degree(&g1), alg.undecorated_degree(&g2));
    let exp = dv * n * d2 + (dv + dw) * n * (d1 + d2);
    rep.check(lhs == rhs.scaled(scalars::sign(exp, p)), || {
        format!("decorated compatibility: {} · {}", alg.render_monomial(m1), alg.render_monomial(m2))
    });
}

fn dp(alg: &Algebra, x: &Element, k: u64) -> Element {
    hopf::divided_power(alg, x, k).unwrap()
}

fn is_even(alg: &Algebra, x: &Element) -> bool {
    alg.p == 2 || x.keys().all(|m| alg.total(m) == 0)
}

/// Tensor divided power `(sum c_i u_i (x) v_i)^[r]`, with
/// `(u (x) v)^[k] = u^[k] (x) v^{⊙k}` (or `1 (x) v^[k]` when `u` is the unit).
fn tensor_divided_power(alg: &Algebra, x: &TensorLinComb, r: u64) -> TensorLinComb {
    let p = alg.p;
    let terms: Vec<((Monomial, Monomial), u32)> = x.iter().map(|(k, c)| (k.clone(), c)).collect();
    fn rec(alg: &Algebra, terms: &[((Monomial, Monomial), u32)], r: u64) -> TensorLinComb {
        let p = alg.p;
        match terms.split_first() {
            None => {
                if r == 0 {
                    TensorLinComb::single(p, (Monomial::empty(), Monomial::empty()), 1)
                } else {
                    TensorLinComb::zero(p)
                }
            }
            Some((((u, v), c), rest)) => {
                let mut out = TensorLinComb::zero(p);
                for k in 0..=r {
                    let piece = tensor_term_power(alg, u, v, k);
                    if piece.is_zero() {
                        continue;
                    }
                    let tail = rec(alg, rest, r - k);
                    let prod = hopf::tensor_transfer(alg, &piece, &tail);
                    out.add_scaled(&prod, scalars::pow(*c, k, p));
                }
                out
            }
        }
    }
    let _ = p;
    rec(alg, &terms, r)
}

fn tensor_term_power(alg: &Algebra, u: &Monomial, v: &Monomial, k: u64) -> TensorLinComb {
    let p = alg.p;
    if k == 0 {
        return TensorLinComb::single(p, (Monomial::empty(), Monomial::empty()), 1);
    }
    let (left, right) = if u.is_empty() {
        (alg.one(), dp(alg, &mono(alg, v), k))
    } else {
        let mut vk = alg.one();
        for _ in 0..k {
            vk = hopf::transfer_product(alg, &vk, &mono(alg, v));
        }
        // (u (x) v)^{⊙k} carries the Koszul sign of k(k-1)/2 swaps of v past u
        let s = scalars::sign((k * (k - 1) / 2) * (alg.total(u) * alg.total(v)) as u64, p);
        (dp(alg, &mono(alg, u), k).scaled(s), vk)
    };
    let mut out = TensorLinComb::zero(p);
    for (l, cl) in left.iter() {
        for (r, cr) in right.iter() {
            out.add_term((l.clone(), r.clone()), scalars::mul(cl, cr, p));
        }
    }
    out
}

/// The divided-power axioms, the product rule and compatibility with Δ.
pub fn divided_power_suite(alg: &Algebra, pool: &Pool, samples: usize, seed: u64) -> SuiteReport {
    let p = alg.p;
    let mut rep = SuiteReport::new("divided powers");
    let mut rng = StdRng::seed_from_u64(seed);
    let r = |x: &Element| alg.render(x);
    let max_width = *pool.by_component.keys().max().unwrap_or(&1);
    for _ in 0..samples {
        let x = pool.element(alg, &mut rng);
        let y = pool.element(alg, &mut rng);
        let nx = alg.grade(x.keys().next().unwrap()).n;
        let even = is_even(alg, &x);

        rep.check(dp(alg, &x, 0) == alg.one() && dp(alg, &x, 1) == x, || format!("0,1 cases: {}", r(&x)));
        if !even {
            rep.check((2..4).all(|k| dp(alg, &x, k).is_zero()), || format!("odd element has vanishing powers: {}", r(&x)));
        }
        let k = rng.gen_range(0..4u64);
        if even && is_even(alg, &y) {
            let lhs = dp(alg, &x.sum(&y), k);
            let mut rhs = alg.zero();
            for i in 0..=k {
                rhs.add_assign(&hopf::transfer_product(alg, &dp(alg, &x, i), &dp(alg, &y, k - i)));
            }
            rep.check(lhs == rhs, || format!("binomial: ({} + {})^[{k}]", r(&x), r(&y)));
        }
        let c = rng.gen_range(1..p);
        rep.check(dp(alg, &x.scaled(c), k) == dp(alg, &x, k).scaled(scalars::pow(c, k, p)), || {
            format!("scalar distributivity: ({c} {})^[{k}]", r(&x))
        });
        let lam = pool.any(&mut rng);
        let el = mono(alg, &lam);
        let lx = hopf::transfer_product(alg, &el, &x);
        if !lx.is_zero() {
            let mut lk = alg.one();
            for _ in 0..k {
                lk = hopf::transfer_product(alg, &lk, &el);
            }
            rep.check(dp(alg, &lx, k) == hopf::transfer_product(alg, &lk, &dp(alg, &x, k)), || {
                format!("product rule: ({} ⊙ {})^[{k}]", r(&el), r(&x))
            });
        }
        let (i, j) = (rng.gen_range(0..4u64), rng.gen_range(0..4u64));
        let lhs = hopf::transfer_product(alg, &dp(alg, &x, i), &dp(alg, &x, j));
        rep.check(lhs == dp(alg, &x, i + j).scaled(binomial_mod_p(i + j, i, p)), || {
            format!("law of exponents: {} with {i}, {j}", r(&x))
        });
        let (m, n) = (rng.gen_range(1..4u64), rng.gen_range(0..4u64));
        if nx * m * n.max(1) <= 4 * max_width {
            let lhs = dp(alg, &dp(alg, &x, m), n);
            rep.check(lhs == dp(alg, &x, m * n).scaled(composition_coeff(m, n, p)), || {
                format!("composition: ({}^[{m}])^[{n}]", r(&x))
            });
        }
        if even {
            let r2 = rng.gen_range(0..4u64);
            let lhs = hopf::coproduct(alg, &dp(alg, &x, r2));
            let rhs = tensor_divided_power(alg, &hopf::coproduct(alg, &x), r2);
            rep.check(lhs == rhs, || format!("coproduct compatibility: ({})^[{r2}]", r(&x)));
        }
    }
    rep
}

/// Restriction laws, stability of dimensions, Frobenius on limit classes and the width filtration of products.
///
/// `n_max`/`d_max` bound the random monomials for the restriction laws; the
/// stability table covers degrees `0..=stable_degree`; `blocks` sets how many
/// Frobenius and filtration cases are sampled.
pub fn stable_suite(
    alg: &Algebra,
    n_max: u64,
    d_max: u64,
    stable_degree: u64,
    blocks: usize,
    samples: usize,
    seed: u64,
) -> SuiteReport {
    let p = alg.p;
    let mut rep = SuiteReport::new("stable");
    let mut rng = StdRng::seed_from_u64(seed);
    let r = |x: &Element| alg.render(x);
    let ordinary = |n: u64| -> Vec<Monomial> {
        (0..=d_max).flat_map(|d| alg.enumerate_skyline(n, d, 0)).collect()
    };
    let pool: BTreeMap<u64, Vec<Monomial>> = (1..=n_max).map(|n| (n, ordinary(n))).collect();

    for _ in 0..samples {
        let m = rng.gen_range(1..=n_max);
        let n = rng.gen_range(0..=m);
        let a = mono(alg, pool[&m].choose(&mut rng).unwrap());
        let b = mono(alg, pool[&m].choose(&mut rng).unwrap());
        let lhs = stable::restrict(alg, &hopf::cup_product(alg, &a, &b).unwrap(), n, m).unwrap();
        let ra = stable::restrict(alg, &a, n, m).unwrap();
        let rb = stable::restrict(alg, &b, n, m).unwrap();
        let rhs = hopf::cup_product(alg, &ra, &rb).unwrap();
        rep.check(lhs == rhs, || format!("restriction to {n} is multiplicative on {} · {}", r(&a), r(&b)));

        let l = m;
        let mid = rng.gen_range(n..=l);
        let x = mono(alg, pool[&l].choose(&mut rng).unwrap());
        let two = stable::restrict(alg, &stable::restrict(alg, &x, mid, l).unwrap(), n, mid).unwrap();
        rep.check(two == stable::restrict(alg, &x, n, l).unwrap(), || {
            format!("inverse system {n} <= {mid} <= {l} on {}", r(&x))
        });
    }

    for d in 0..=stable_degree {
        let lo = stable::stable_bound(alg, d);
        let pure: usize = (0..=lo)
            .map(|w| alg.enumerate_skyline(w, d, 0).iter().filter(|m| stable::is_pure(alg, m)).count())
            .sum();
        for n in lo.max(1)..=lo + 2 {
            let dim = alg.count_skyline(n, d, 0);
            rep.check(dim == pure, || format!("dim H^{d} at component {n} is {dim}, expected {pure}"));
        }
    }

    let block_degree = if p == 2 { 4 } else { 8 };
    let columns: Vec<Column> = alg
        .columns_up_to(stable::stable_bound(alg, block_degree), block_degree, Some(0))
        .into_iter()
        .filter(|c| {
            let g = alg.column_grade(c);
            g.d > 0 && (p == 2 || g.d % 2 == 0) && g.d * p as u64 <= 2 * block_degree
        })
        .collect();
    for _ in 0..blocks {
        let Some(b) = columns.choose(&mut rng) else { break };
        let class = stable::LimitClass::new(alg, Monomial::single(b.clone()), Flavor::Dinf).unwrap();
        let x = LinComb::single(p, class, 1);
        let lhs = stable::limit_power(alg, &x, p as u64, Flavor::Dinf).unwrap();
        let mut bp = mono(alg, &Monomial::single(b.clone()));
        for _ in 1..p {
            bp = hopf::cup_product(alg, &bp, &mono(alg, &Monomial::single(b.clone()))).unwrap();
        }
        let rhs = stable::limit_of(alg, &bp, Flavor::Dinf).unwrap();
        rep.check(lhs == rhs, || {
            format!(
                "Frobenius: ({}|1^[*])^{p} = {} but b^{p} = {}",
                alg.render_column(b),
                stable::render_limit(alg, &lhs),
                r(&bp)
            )
        });
    }

    let filtration_degree = if p == 2 { 3 } else { 6 };
    let pure_monomials: Vec<Monomial> = (1..=stable::stable_bound(alg, filtration_degree))
        .flat_map(|w| (1..=filtration_degree).flat_map(move |d| alg.enumerate_skyline(w, d, 0)))
        .filter(|m| stable::is_pure(alg, m))
        .collect();
    for _ in 0..blocks {
        let Some(y) = pure_monomials.choose(&mut rng) else { break };
        let w = alg.grade(y).n;
        let mut prod = LinComb::single(p, stable::unit_class(Flavor::Dinf), 1);
        let mut ordered = alg.one();
        for c in &y.columns {
            let single = Monomial::single(c.clone());
            let cls = stable::LimitClass::new(alg, single.clone(), Flavor::Dinf).unwrap();
            prod = stable::limit_cup(alg, &prod, &LinComb::single(p, cls, 1)).unwrap();
            ordered = hopf::transfer_product(alg, &ordered, &mono(alg, &single));
        }
        let leading = stable::limit_of(alg, &ordered, Flavor::Dinf).unwrap();
        let rest = prod.sum(&leading.negated());
        rep.check(!leading.is_zero() && rest.keys().all(|k| k.width(alg) < w), || {
            format!("filtration: product of the columns of {} leaves {}", r(&mono(alg, y)), stable::render_limit(alg, &rest))
        });
    }
    rep
}

