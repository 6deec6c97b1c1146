//! The structure maps: transfer product, coproduct, cup product, divided
//! powers, units and the maps to and from the coefficient algebra.

use crate::coeff::CoeffPresentation;
use crate::error::{Error, Result};
use crate::scalars::{self, composition_coeff, factorial_mod_p, LinComb};
use crate::skyline::{Algebra, Column, Decoration, Element, Grade, Monomial, Solid};

/// Elements of the tensor square, keyed by ordered pairs of basis monomials.
pub type TensorLinComb = LinComb<(Monomial, Monomial)>;

// ------------------------------------------------------------ transfer product

pub fn transfer_monomials(alg: &Algebra, a: &Monomial, b: &Monomial) -> Element {
    let mut cols = a.columns.clone();
    cols.extend(b.columns.iter().cloned());
    alg.canonicalize_valid(cols)
}

pub fn transfer_product(alg: &Algebra, a: &Element, b: &Element) -> Element {
    let mut out = alg.zero();
    for (ma, ca) in a.iter() {
        for (mb, cb) in b.iter() {
            out.add_scaled(&transfer_monomials(alg, ma, mb), scalars::mul(ca, cb, alg.p));
        }
    }
    out
}

/// `(a' (x) a'') ⊙ (b' (x) b'')` with the Koszul sign of moving `a''` past `b'`.
pub fn tensor_transfer(alg: &Algebra, x: &TensorLinComb, y: &TensorLinComb) -> TensorLinComb {
    let p = alg.p;
    let mut out = TensorLinComb::zero(p);
    for ((a1, a2), ca) in x.iter() {
        for ((b1, b2), cb) in y.iter() {
            let s = scalars::koszul_sign(alg.total(a2), alg.total(b1), p);
            let c = scalars::mul(scalars::mul(ca, cb, p), s, p);
            let left = transfer_monomials(alg, a1, b1);
            let right = transfer_monomials(alg, a2, b2);
            for (l, cl) in left.iter() {
                for (r, cr) in right.iter() {
                    out.add_term((l.clone(), r.clone()), scalars::mul(c, scalars::mul(cl, cr, p), p));
                }
            }
        }
    }
    out
}

// ------------------------------------------------------------ coproduct

/// Coproduct of a basis monomial: every column `b^[n]` splits as
/// `sum b^[i] (x) b^[n-i]`, multiplied out with Koszul signs.
pub fn coproduct_monomial(alg: &Algebra, m: &Monomial) -> TensorLinComb {
    let p = alg.p;
    // (left columns, right columns, parity of right so far, sign exponent)
    let mut partial: Vec<(Vec<Column>, Vec<Column>, u32, u64)> = vec![(vec![], vec![], 0, 0)];
    for c in &m.columns {
        let mut next = Vec::with_capacity(partial.len() * (c.mult as usize + 1));
        for (l, r, rpar, exp) in &partial {
            for i in 0..=c.mult {
                let j = c.mult - i;
                let mut l2 = l.clone();
                let mut r2 = r.clone();
                let mut lt = 0;
                if i > 0 {
                    let piece = Column { mult: i, ..c.clone() };
                    lt = alg.column_total(&piece);
                    l2.push(piece);
                }
                let mut rt = 0;
                if j > 0 {
                    let piece = Column { mult: j, ..c.clone() };
                    rt = alg.column_total(&piece);
                    r2.push(piece);
                }
                next.push((l2, r2, (rpar + rt) % 2, exp + (rpar * lt) as u64));
            }
        }
        partial = next;
    }
    let mut out = TensorLinComb::zero(p);
    for (l, r, _, exp) in partial {
        out.add_term((Monomial { columns: l }, Monomial { columns: r }), scalars::sign(exp, p));
    }
    out
}

pub fn coproduct(alg: &Algebra, a: &Element) -> TensorLinComb {
    let mut out = TensorLinComb::zero(alg.p);
    for (m, c) in a.iter() {
        out.add_scaled(&coproduct_monomial(alg, m), c);
    }
    out
}

/// The `(i, j)` component of the coproduct.
pub fn coproduct_component(alg: &Algebra, a: &Element, i: u64, j: u64) -> TensorLinComb {
    let mut out = TensorLinComb::zero(alg.p);
    for (m, c) in a.iter() {
        if alg.grade(m).n != i + j {
            continue;
        }
        out.add_scaled(&coproduct_component_monomial(alg, m, i), c);
    }
    out
}

fn coproduct_component_monomial(alg: &Algebra, m: &Monomial, i: u64) -> TensorLinComb {
    coproduct_monomial(alg, m).filtered(|(l, _)| alg.grade(l).n == i)
}

// ------------------------------------------------------------ cup product

/// Sign exponent in `a·(b ⊙ c) = sum ± (a'·b) ⊙ (a''·c)`: the cross-product
/// sign `d(a'') d(b)` transported through the sign-twisted transfer and coproduct.
pub(crate) fn distributivity_exponent(a: Grade, a2: Grade, b: Grade, c: Grade) -> u64 {
    a2.d * (b.d + b.n * b.e as u64) + c.d * b.n * a.e as u64
}

/// Sign exponent in `(a' (x) a'')·(b' (x) b'') = ± a'b' (x) a''b''`.
pub(crate) fn tensor_cup_exponent(a1: Grade, a2: Grade, b1: Grade, b2: Grade) -> u64 {
    a2.d * b1.d + a1.n * (a2.d * b1.e as u64 + b2.d * a1.e as u64)
}

/// Raise a column to a higher level; the width must be divisible.
fn lift(alg: &Algebra, c: &Column, level: u32) -> Result<Column> {
    let step = alg.pow_p(level - c.level);
    if c.mult % step != 0 {
        return Err(Error::InvalidColumn("column cannot be lifted to a higher level".into()));
    }
    let mut hollow = c.hollow.clone();
    hollow.resize(level as usize, 0);
    Ok(Column { level, hollow, solid: c.solid.clone(), dec: c.dec, mult: c.mult / step })
}

/// Cup product of two columns of equal width.
pub fn cup_columns(alg: &Algebra, c1: &Column, c2: &Column) -> Result<Element> {
    let p = alg.p;
    let (w1, w2) = (alg.width(c1), alg.width(c2));
    if w1 != w2 {
        return Err(Error::WidthMismatch(w1, w2));
    }
    let level = c1.level.max(c2.level);
    let a = lift(alg, c1, level)?;
    let b = lift(alg, c2, level)?;
    let mut hollow: Vec<u32> = a.hollow.iter().zip(&b.hollow).map(|(x, y)| x + y).collect();
    let mut coeff = 1u32;
    let solid = match (&a.solid, &b.solid) {
        (None, None) => None,
        (Some(s), None) | (None, Some(s)) => Some(s.clone()),
        (Some(s1), Some(s2)) => {
            if s1.set.iter().any(|x| s2.set.contains(x)) {
                return Ok(alg.zero());
            }
            // sign of the permutation sorting S1 ++ S2
            let inversions: usize = s1.set.iter().map(|x| s2.set.iter().filter(|y| *y < x).count()).sum();
            coeff = scalars::mul(coeff, scalars::sign(inversions as u64, p), p);
            let mut set: Vec<u32> = s1.set.iter().chain(&s2.set).copied().collect();
            set.sort_unstable();
            if s1.lambda() + s2.lambda() == 2 {
                hollow[level as usize - 1] += 1;
            }
            Some(Solid { set, odd: s1.odd ^ s2.odd })
        }
    };
    // Gamma_1 x_1^[W] . Gamma_2 x_2^[W] = (-1)^{d(x_1^[W]) d(Gamma_2)} Gamma_1 Gamma_2 (x_1 x_2)^[W]
    let undec2 = Column { dec: Decoration { class: alg.pres.unit, sign: 0 }, ..b.clone() };
    let exp = alg.decoration_degree(&a) * alg.undecorated_degree(&undec2);
    coeff = scalars::mul(coeff, scalars::sign(exp, p), p);
    let prod = alg.pres.multiply_basis(a.dec.class, b.dec.class)?;
    let sign = (a.dec.sign + b.dec.sign) % 2;
    let mut out = alg.zero();
    for (&z, cz) in prod.iter() {
        let col = Column { level, hollow: hollow.clone(), solid: solid.clone(), dec: Decoration { class: z, sign }, mult: a.mult };
        let col = alg.lower(col);
        if alg.validate_column(&col).is_err() {
            // odd-degree products of width > 1 vanish
            continue;
        }
        out.add_term(Monomial::single(col), scalars::mul(coeff, cz, p));
    }
    Ok(out)
}

/// Cup product of basis monomials; zero across components.
pub fn cup_monomials(alg: &Algebra, a: &Monomial, b: &Monomial) -> Result<Element> {
    let p = alg.p;
    let (ga, gb) = (alg.grade(a), alg.grade(b));
    if ga.n != gb.n {
        return Ok(alg.zero());
    }
    if a.is_empty() {
        return Ok(alg.one());
    }
    if b.columns.len() == 1 && b.columns[0].is_unit(&alg.pres) {
        return Ok(LinComb::single(p, a.clone(), 1));
    }
    if a.columns.len() == 1 && a.columns[0].is_unit(&alg.pres) {
        return Ok(LinComb::single(p, b.clone(), 1));
    }
    if b.columns.len() == 1 {
        if a.columns.len() == 1 {
            return cup_columns(alg, &a.columns[0], &b.columns[0]);
        }
        let s = scalars::sign(ga.d * gb.d, p);
        return Ok(cup_monomials(alg, b, a)?.scaled(s));
    }
    // b = c ⊙ rest; a·(c ⊙ rest) = sum ± (a'·c) ⊙ (a''·rest)
    let c = Monomial::single(b.columns[0].clone());
    let rest = Monomial { columns: b.columns[1..].to_vec() };
    let wc = alg.grade(&c).n;
    let mut out = alg.zero();
    for ((a1, a2), coef) in coproduct_component_monomial(alg, a, wc).iter() {
        let s = scalars::sign(distributivity_exponent(ga, alg.grade(a2), alg.grade(&c), alg.grade(&rest)), p);
        let left = cup_monomials(alg, a1, &c)?;
        if left.is_zero() {
            continue;
        }
        let right = cup_monomials(alg, a2, &rest)?;
        out.add_scaled(&transfer_product(alg, &left, &right), scalars::mul(coef, s, p));
    }
    Ok(out)
}

pub fn cup_product(alg: &Algebra, a: &Element, b: &Element) -> Result<Element> {
    let p = alg.p;
    let mut out = alg.zero();
    for (ma, ca) in a.iter() {
        for (mb, cb) in b.iter() {
            out.add_scaled(&cup_monomials(alg, ma, mb)?, scalars::mul(ca, cb, p));
        }
    }
    Ok(out)
}

/// `(a' (x) a'') · (b' (x) b'')` with the sign of moving `a''` past `b'`.
pub fn tensor_cup(alg: &Algebra, x: &TensorLinComb, y: &TensorLinComb) -> Result<TensorLinComb> {
    let p = alg.p;
    let mut out = TensorLinComb::zero(p);
    for ((a1, a2), ca) in x.iter() {
        for ((b1, b2), cb) in y.iter() {
            let exp = tensor_cup_exponent(alg.grade(a1), alg.grade(a2), alg.grade(b1), alg.grade(b2));
            let c = scalars::mul(scalars::mul(ca, cb, p), scalars::sign(exp, p), p);
            let left = cup_monomials(alg, a1, b1)?;
            if left.is_zero() {
                continue;
            }
            let right = cup_monomials(alg, a2, b2)?;
            for (l, cl) in left.iter() {
                for (r, cr) in right.iter() {
                    out.add_term((l.clone(), r.clone()), scalars::mul(c, scalars::mul(cl, cr, p), p));
                }
            }
        }
    }
    Ok(out)
}

// ------------------------------------------------------------ divided powers

fn divided_power_monomial(alg: &Algebra, m: &Monomial, r: u64) -> Element {
    let p = alg.p;
    if r == 0 {
        return alg.one();
    }
    if r == 1 {
        return LinComb::single(p, m.clone(), 1);
    }
    let mut coeff = scalars::pow(factorial_mod_p(r, p), m.columns.len() as u64 - 1, p);
    let mut cols = Vec::with_capacity(m.columns.len());
    for c in &m.columns {
        if p > 2 && alg.column_total(c) == 1 {
            return alg.zero();
        }
        coeff = scalars::mul(coeff, composition_coeff(c.mult, r, p), p);
        if coeff == 0 {
            return alg.zero();
        }
        cols.push(Column { mult: c.mult * r, ..c.clone() });
    }
    alg.canonicalize_valid(cols).scaled(coeff)
}

/// Divided powers on the augmentation ideal. Sums expand by the Binomial
/// axiom; elements of odd total degree have vanishing higher divided powers.
pub fn divided_power(alg: &Algebra, a: &Element, r: u64) -> Result<Element> {
    if a.keys().any(|m| m.is_empty()) {
        return Err(Error::ComponentZero);
    }
    let p = alg.p;
    let terms: Vec<(Monomial, u32)> = a.iter().map(|(m, c)| (m.clone(), c)).collect();
    if p == 2 {
        return Ok(binomial_expand(alg, &terms, r));
    }
    let (even, odd): (Vec<_>, Vec<_>) = terms.into_iter().partition(|(m, _)| alg.total(m) == 0);
    let odd_el = LinComb::from_terms(p, odd.into_iter().map(|(m, c)| (c, m)));
    // (E + O)^[r] = E^[r] + E^[r-1] ⊙ O
    let mut out = binomial_expand(alg, &even, r);
    if r >= 1 && !odd_el.is_zero() {
        out.add_assign(&transfer_product(alg, &binomial_expand(alg, &even, r - 1), &odd_el));
    }
    Ok(out)
}

fn binomial_expand(alg: &Algebra, terms: &[(Monomial, u32)], r: u64) -> Element {
    let p = alg.p;
    match terms.split_first() {
        None => {
            if r == 0 {
                alg.one()
            } else {
                alg.zero()
            }
        }
        Some(((m, c), rest)) => {
            let mut out = alg.zero();
            for k in 0..=r {
                let head = divided_power_monomial(alg, m, k);
                if head.is_zero() {
                    continue;
                }
                let tail = binomial_expand(alg, rest, r - k);
                out.add_scaled(&transfer_product(alg, &head, &tail), scalars::pow(*c, k, p));
            }
            out
        }
    }
}

// ------------------------------------------------------------ units and maps

pub fn unit(alg: &Algebra, n: u64) -> Monomial {
    alg.unit_monomial(n)
}

/// Coefficient of the empty monomial.
pub fn counit(a: &Element) -> u32 {
    a.coeff(&Monomial::empty())
}

/// Decorate every column of a monomial over the point with the unit class.
pub fn pi(alg: &Algebra, undecorated: &Element) -> Element {
    undecorated.map_linear(|m| {
        let cols = m
            .columns
            .iter()
            .map(|c| Column { dec: Decoration { class: alg.pres.unit, sign: c.dec.sign }, ..c.clone() })
            .collect();
        alg.canonicalize_valid(cols)
    })
}

/// The width-one column decorated by `x_e`.
pub fn iota(alg: &Algebra, x: usize, e: u8) -> Result<Element> {
    alg.canonicalize(vec![Column { level: 0, hollow: vec![], solid: None, dec: Decoration { class: x, sign: e }, mult: 1 }])
}

/// Decorate an element of the coefficient algebra: `sum c_i iota(x_i)`.
pub fn iota_lin(alg: &Algebra, v: &LinComb<usize>, e: u8) -> Result<Element> {
    let mut out = alg.zero();
    for (&x, c) in v.iter() {
        out.add_scaled(&iota(alg, x, e)?, c);
    }
    Ok(out)
}

pub fn presentation(alg: &Algebra) -> &CoeffPresentation {
    &alg.pres
}
