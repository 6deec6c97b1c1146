//! Stable rings: restriction between components and the limits
//! `H*(D̃∞X)`, `H*(CX)` and `H*(Q₀X)` for connected `X`.
//!
//! A monomial `y ⊙ 1^[r]` with `y` pure (no unit column) represents the limit
//! class `y ⊙ 1^[*]`; its effective width is the component of `y`. Cup
//! products of limit classes are computed in a finite component large enough
//! for the restriction to be injective in the relevant degree.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::coeff::CoeffPresentation;
use crate::error::{Error, Result};
use crate::hopf;
use crate::scalars::LinComb;
use crate::skyline::{Algebra, Column, Element, Monomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Flavor {
    /// `H*(D̃∞X)`: all pure classes.
    Dinf,
    /// `H*(CX)`: no column decorated by the unit.
    CX,
    /// `H*(Q₀X)`: full-width classes without unit decorations.
    Q0X,
}

impl Flavor {
    /// Flavor of a product: a subring only when both factors lie in it.
    pub fn meet(self, other: Flavor) -> Flavor {
        if self == other {
            self
        } else {
            Flavor::Dinf
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Dinf => "dinf",
            Flavor::CX => "cx",
            Flavor::Q0X => "q0x",
        })
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Flavor> {
        match s.to_ascii_lowercase().as_str() {
            "dinf" => Ok(Flavor::Dinf),
            "cx" => Ok(Flavor::CX),
            "q0x" => Ok(Flavor::Q0X),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown flavor {s:?} (expected dinf, cx or q0x)") }),
        }
    }
}

/// Width of the unit column `1^[r]` of a monomial (0 if there is none).
pub fn unit_width(alg: &Algebra, m: &Monomial) -> u64 {
    m.columns.iter().filter(|c| c.is_unit(&alg.pres)).map(|c| c.mult).sum()
}

pub fn effective_width(alg: &Algebra, m: &Monomial) -> u64 {
    alg.grade(m).n - unit_width(alg, m)
}

/// The monomial with its unit column removed.
pub fn pure_part(alg: &Algebra, m: &Monomial) -> Monomial {
    Monomial { columns: m.columns.iter().filter(|c| !c.is_unit(&alg.pres)).cloned().collect() }
}

pub fn is_pure(alg: &Algebra, m: &Monomial) -> bool {
    !m.columns.iter().any(|c| c.is_unit(&alg.pres))
}

/// No column of degree zero.
pub fn is_full_width(alg: &Algebra, m: &Monomial) -> bool {
    m.columns.iter().all(|c| alg.column_grade(c).d > 0)
}

/// Largest effective width of a pure monomial of degree `d`: a column of
/// positive degree is at most twice as wide as its degree at `p = 2`
/// (`gamma_1`), and at most as wide as its degree at odd primes.
pub fn stable_bound(alg: &Algebra, d: u64) -> u64 {
    if alg.p == 2 {
        2 * d
    } else {
        d
    }
}

/// The restriction `ρ_{n,m}` from component `m` to component `n`.
pub fn restrict(alg: &Algebra, a: &Element, n: u64, m: u64) -> Result<Element> {
    if n > m {
        return Err(Error::BadRestriction { n, m });
    }
    let drop = m - n;
    let mut out = alg.zero();
    for (mono, c) in a.iter() {
        if alg.grade(mono).n != m {
            return Err(Error::NotInComponent(m));
        }
        if drop == 0 {
            out.add_term(mono.clone(), c);
            continue;
        }
        if unit_width(alg, mono) < drop {
            continue;
        }
        let mut cols = Vec::with_capacity(mono.columns.len());
        for col in &mono.columns {
            if col.is_unit(&alg.pres) {
                if col.mult > drop {
                    cols.push(Column { mult: col.mult - drop, ..col.clone() });
                }
            } else {
                cols.push(col.clone());
            }
        }
        out.add_term(Monomial { columns: cols }, c);
    }
    Ok(out)
}

/// The class `pure ⊙ 1^[*]` in one of the stable rings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LimitClass {
    pub pure: Monomial,
    pub flavor: Flavor,
}

pub type LimitElement = LinComb<LimitClass>;

impl LimitClass {
    pub fn new(alg: &Algebra, pure: Monomial, flavor: Flavor) -> Result<LimitClass> {
        if !alg.pres.connected {
            return Err(Error::NotConnected);
        }
        let bad = |m: &str| Err(Error::NotLimitClass(format!("{}: {m}", alg.render_monomial(&pure))));
        if !is_pure(alg, &pure) {
            return bad("contains a unit column");
        }
        if alg.grade(&pure).e != 0 {
            return bad("sign degree must be 0");
        }
        if flavor != Flavor::Dinf && pure.columns.iter().any(|c| c.dec.class == alg.pres.unit) {
            return bad("a column is decorated by the unit");
        }
        if flavor == Flavor::Q0X && !is_full_width(alg, &pure) {
            return bad("has a block of degree 0");
        }
        Ok(LimitClass { pure, flavor })
    }

    /// Read a monomial `y ⊙ 1^[r]` as the limit class of `y`.
    pub fn of_monomial(alg: &Algebra, m: &Monomial, flavor: Flavor) -> Result<LimitClass> {
        LimitClass::new(alg, pure_part(alg, m), flavor)
    }

    pub fn width(&self, alg: &Algebra) -> u64 {
        alg.grade(&self.pure).n
    }

    pub fn degree(&self, alg: &Algebra) -> u64 {
        alg.grade(&self.pure).d
    }

    /// Restriction to component `n`: `pure ⊙ 1^[n - w]`, or zero below the width.
    pub fn realize(&self, alg: &Algebra, n: u64) -> Element {
        let w = self.width(alg);
        if n < w {
            return alg.zero();
        }
        hopf::transfer_monomials(alg, &self.pure, &alg.unit_monomial(n - w))
    }

    pub fn render(&self, alg: &Algebra) -> String {
        if self.pure.is_empty() {
            "1^[*]".to_string()
        } else {
            format!("{}|1^[*]", alg.render_monomial(&self.pure))
        }
    }
}

pub fn unit_class(flavor: Flavor) -> LimitClass {
    LimitClass { pure: Monomial::empty(), flavor }
}

pub fn realize(alg: &Algebra, a: &LimitElement, n: u64) -> Element {
    let mut out = alg.zero();
    for (cls, c) in a.iter() {
        out.add_scaled(&cls.realize(alg, n), c);
    }
    out
}

/// Read every monomial `y ⊙ 1^[r]` of `x` as the limit class of `y`.
pub fn limit_of(alg: &Algebra, x: &Element, flavor: Flavor) -> Result<LimitElement> {
    let mut out = LinComb::zero(alg.p);
    for (m, c) in x.iter() {
        out.add_term(LimitClass::of_monomial(alg, m, flavor)?, c);
    }
    Ok(out)
}

fn text_of(alg: &Algebra, a: &LimitElement) -> String {
    let terms: Vec<String> = a.iter().map(|(k, c)| format!("{c}*{}", k.render(alg))).collect();
    terms.join(" + ")
}

/// Product of two limit classes computed in component `n`.
pub fn limit_cup_at(alg: &Algebra, x: &LimitClass, y: &LimitClass, n: u64) -> Result<LimitElement> {
    let prod = hopf::cup_product(alg, &x.realize(alg, n), &y.realize(alg, n))?;
    limit_of(alg, &prod, x.flavor.meet(y.flavor))
}

fn limit_cup_classes(alg: &Algebra, x: &LimitClass, y: &LimitClass) -> Result<LimitElement> {
    let d = x.degree(alg) + y.degree(alg);
    let n = stable_bound(alg, d).max(x.width(alg)).max(y.width(alg)).max(1);
    let first = limit_cup_at(alg, x, y, n)?;
    // a term filling the whole component has no unit column left to witness stability
    if first.keys().all(|k| k.width(alg) < n) {
        return Ok(first);
    }
    let second = limit_cup_at(alg, x, y, n + 1)?;
    if first != second {
        log_unstable(alg, &first, &second);
        return Err(Error::Unstable(n));
    }
    Ok(first)
}

fn log_unstable(alg: &Algebra, a: &LimitElement, b: &LimitElement) {
    if std::env::var_os("HOPFRING_DEBUG").is_some() {
        eprintln!("unstable limit product: {} vs {}", text_of(alg, a), text_of(alg, b));
    }
}

/// Cup product in the stable ring.
pub fn limit_cup(alg: &Algebra, a: &LimitElement, b: &LimitElement) -> Result<LimitElement> {
    if !alg.pres.connected {
        return Err(Error::NotConnected);
    }
    let mut out = LinComb::zero(alg.p);
    for (x, cx) in a.iter() {
        for (y, cy) in b.iter() {
            out.add_scaled(&limit_cup_classes(alg, x, y)?, crate::scalars::mul(cx, cy, alg.p));
        }
    }
    Ok(out)
}

pub fn limit_power(alg: &Algebra, a: &LimitElement, k: u64, flavor: Flavor) -> Result<LimitElement> {
    let mut out = LinComb::single(alg.p, unit_class(flavor), 1);
    for _ in 0..k {
        out = limit_cup(alg, &out, a)?;
    }
    Ok(out)
}

/// Render a limit element as `c*diagram|1^[*] + ...`.
pub fn render_limit(alg: &Algebra, a: &LimitElement) -> String {
    if a.is_zero() {
        "0".to_string()
    } else {
        text_of(alg, a)
    }
}

// ------------------------------------------------------------ generators

/// A polynomial (or exterior) generator `b ⊙ 1^[*]` of a stable ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableGenerator {
    pub block: Column,
    pub degree: u64,
    /// Nilpotence exponent: `(b ⊙ 1^[*])^(p^h) = 0`; `None` when never nilpotent.
    pub height: Option<u32>,
    /// Which of the three generating conditions hold.
    pub conditions: [bool; 3],
}

impl StableGenerator {
    /// Smallest power known to vanish: `p^h`, or 2 for odd degree at odd primes.
    pub fn relation_exponent(&self, p: u32) -> Option<u64> {
        if p > 2 && self.degree % 2 == 1 {
            return Some(2);
        }
        self.height.map(|h| (p as u64).pow(h))
    }

    pub fn class(&self, flavor: Flavor) -> LimitClass {
        LimitClass { pure: Monomial::single(self.block.clone()), flavor }
    }
}

/// Frobenius position of every basis class: (chain height, index in chain).
fn frobenius_positions(pres: &CoeffPresentation) -> Result<HashMap<usize, (Option<u32>, u32, bool)>> {
    let mut pos = HashMap::new();
    for chain in pres.frobenius_adapted()? {
        for (i, &x) in chain.elements.iter().enumerate() {
            pos.insert(x, (chain.height, i as u32, i == 0 && x != pres.unit));
        }
    }
    Ok(pos)
}

fn is_power_of(mut w: u64, p: u64) -> bool {
    while w % p == 0 {
        w /= p;
    }
    w == 1
}

/// Generators of the stable ring of the given flavor in degrees `1..=d_max`,
/// ordered by degree and then by column.
pub fn stable_generators(pres: &CoeffPresentation, d_max: u64, flavor: Flavor) -> Result<Vec<StableGenerator>> {
    if !pres.connected {
        return Err(Error::NotConnected);
    }
    let alg = Algebra::new(pres.clone());
    let p = alg.p;
    let positions = frobenius_positions(pres)?;
    let mut out = Vec::new();
    for col in alg.columns_up_to(stable_bound(&alg, d_max), d_max, Some(0)) {
        let g = alg.column_grade(&col);
        if g.d == 0 || !is_power_of(g.n, p as u64) {
            continue;
        }
        if flavor != Flavor::Dinf && col.dec.class == pres.unit {
            continue;
        }
        let (height, index, root) = positions[&col.dec.class];
        let conditions = [
            root,
            col.hollow.iter().any(|&m| m % p != 0),
            p > 2 && col.solid.is_some(),
        ];
        if !conditions.iter().any(|&c| c) {
            continue;
        }
        let height = if p > 2 && col.solid.is_some() { Some(1) } else { height.map(|h| h - index) };
        out.push(StableGenerator { block: col, degree: g.d, height, conditions });
    }
    out.sort_by(|a, b| (a.degree, &a.block).cmp(&(b.degree, &b.block)));
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub generator: String,
    pub degree: u64,
    pub exponent: u64,
    /// Powers `1..exponent` are all nonzero.
    pub powers_nonzero: bool,
    pub vanishes: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
    /// Generators whose relation lies above `d_max` or which are never nilpotent.
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check `(b ⊙ 1^[*])^(p^h) = 0` and that smaller powers survive, for every
/// generator whose relation lives in degree `<= d_max`.
pub fn verify_relations(pres: &CoeffPresentation, d_max: u64, flavor: Flavor) -> Result<RelationReport> {
    let alg = Algebra::new(pres.clone());
    let mut rep = RelationReport::default();
    for g in stable_generators(pres, d_max, flavor)? {
        let Some(k) = g.relation_exponent(alg.p) else {
            rep.skipped += 1;
            continue;
        };
        if k * g.degree > d_max {
            rep.skipped += 1;
            continue;
        }
        let x = LinComb::single(alg.p, g.class(flavor), 1);
        let mut power = x.clone();
        let mut powers_nonzero = true;
        for _ in 1..k {
            if power.is_zero() {
                powers_nonzero = false;
            }
            power = limit_cup(&alg, &power, &x)?;
        }
        let name = alg.render_column(&g.block);
        let vanishes = power.is_zero();
        if !vanishes {
            rep.failures.push(format!("{name}^{k} = {}", render_limit(&alg, &power)));
        }
        // at odd primes odd classes square to zero without any exponent being perfect
        let exterior = alg.p > 2 && g.degree % 2 == 1;
        if !powers_nonzero && !exterior {
            rep.failures.push(format!("{name} has a vanishing power below {k}"));
        }
        rep.checks.push(RelationCheck { generator: name, degree: g.degree, exponent: k, powers_nonzero, vanishes });
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(alg: &Algebra, s: &str) -> Element {
        alg.parse(s).unwrap()
    }

    fn rp2() -> CoeffPresentation {
        CoeffPresentation::truncated_polynomial(2, 1, 3, 64).unwrap()
    }

    #[test]
    fn restriction_examples() {
        let alg = Algebra::point(2);
        assert!(restrict(&alg, &el(&alg, "{w=2;g1^1}"), 1, 2).unwrap().is_zero());
        let a = el(&alg, "{w=2;g1^2}|{w=2}");
        assert_eq!(restrict(&alg, &a, 3, 4).unwrap(), el(&alg, "{w=2;g1^2}|{w=1}"));
        assert_eq!(restrict(&alg, &a, 4, 4).unwrap(), a);
        assert_eq!(restrict(&alg, &a, 2, 4).unwrap(), el(&alg, "{w=2;g1^2}"));
        assert!(restrict(&alg, &a, 1, 4).unwrap().is_zero());
        assert_eq!(restrict(&alg, &a, 5, 4), Err(Error::BadRestriction { n: 5, m: 4 }));
        assert_eq!(restrict(&alg, &a, 1, 3), Err(Error::NotInComponent(3)));
    }

    #[test]
    fn effective_widths() {
        let alg = Algebra::point(2);
        let m = |s: &str| el(&alg, s).keys().next().unwrap().clone();
        assert_eq!(effective_width(&alg, &m("{w=2;g1^3}|{w=2}")), 2);
        assert_eq!(effective_width(&alg, &m("{w=4;g2^1}")), 4);
        assert_eq!(effective_width(&alg, &m("{w=5}")), 0);
    }

    #[test]
    fn limit_class_invariants() {
        let alg = Algebra::new(rp2());
        let m = |s: &str| el(&alg, s).keys().next().unwrap().clone();
        assert!(LimitClass::new(&alg, m("{w=2;g1^1}"), Flavor::Dinf).is_ok());
        assert!(LimitClass::new(&alg, m("{w=2;g1^1}"), Flavor::CX).is_err());
        assert!(LimitClass::new(&alg, m("{w=2;g1^1}|{w=1}"), Flavor::Dinf).is_err());
        assert!(LimitClass::new(&alg, m("{w=1;dec=x}"), Flavor::Q0X).is_ok());
        let disc = Algebra::new(
            CoeffPresentation::load(r#"{"p":2,"max_degree":4,"basis":[{"name":"a","degree":0},{"name":"b","degree":0}],"unit":"a","products":[]}"#)
                .unwrap(),
        );
        assert_eq!(LimitClass::new(&disc, Monomial::empty(), Flavor::Dinf), Err(Error::NotConnected));
    }

    #[test]
    fn unit_is_neutral() {
        let alg = Algebra::point(3);
        let m = el(&alg, "{w=3;g1^1}").keys().next().unwrap().clone();
        let x = LinComb::single(3, LimitClass::new(&alg, m, Flavor::Dinf).unwrap(), 1);
        let one = LinComb::single(3, unit_class(Flavor::Dinf), 1);
        assert_eq!(limit_cup(&alg, &one, &x).unwrap(), x);
    }

    #[test]
    fn frobenius_on_limit_classes() {
        let alg = Algebra::new(rp2());
        let m = |s: &str| el(&alg, s).keys().next().unwrap().clone();
        let x = LinComb::single(2, LimitClass::new(&alg, m("{w=1;dec=x}"), Flavor::CX).unwrap(), 1);
        let sq = limit_cup(&alg, &x, &x).unwrap();
        let x2 = LinComb::single(2, LimitClass::new(&alg, m("{w=1;dec=x2}"), Flavor::CX).unwrap(), 1);
        assert_eq!(sq, x2);
        assert!(limit_cup(&alg, &sq, &sq).unwrap().is_zero());
        // over the point as well
        let pt = Algebra::point(2);
        let g = LinComb::single(2, LimitClass::new(&pt, m("{w=2;g1^1}"), Flavor::Dinf).unwrap(), 1);
        let g2 = LimitClass::new(&pt, m("{w=2;g1^2}"), Flavor::Dinf).unwrap();
        assert_eq!(limit_cup(&pt, &g, &g).unwrap(), LinComb::single(2, g2, 1));
    }

    #[test]
    fn truncation_independence() {
        let alg = Algebra::point(2);
        let m = |s: &str| el(&alg, s).keys().next().unwrap().clone();
        let a = LimitClass::new(&alg, m("{w=2;g1^1}"), Flavor::Dinf).unwrap();
        let b = LimitClass::new(&alg, m("{w=4;g2^1}"), Flavor::Dinf).unwrap();
        let r8 = limit_cup_at(&alg, &a, &b, 8).unwrap();
        assert_eq!(r8, limit_cup_at(&alg, &a, &b, 9).unwrap());
        assert_eq!(r8, limit_cup_at(&alg, &a, &b, 10).unwrap());
    }

    #[test]
    fn generators_of_the_point() {
        let gens = stable_generators(&CoeffPresentation::point(2), 3, Flavor::Dinf).unwrap();
        let alg = Algebra::point(2);
        let names: Vec<String> = gens.iter().map(|g| alg.render_column(&g.block)).collect();
        for want in ["{w=2;g1^1}", "{w=2;g1^3}", "{w=4;g2^1}"] {
            assert!(names.iter().any(|n| n == want), "{want} missing from {names:?}");
        }
        assert!(!names.iter().any(|n| n == "{w=2;g1^2}"));
        assert!(gens.iter().all(|g| g.height.is_none()));
        assert!(stable_generators(&CoeffPresentation::point(2), 3, Flavor::CX).unwrap().is_empty());
    }

    #[test]
    fn generators_of_rp2() {
        let pres = rp2();
        let alg = Algebra::new(pres.clone());
        let gens = stable_generators(&pres, 4, Flavor::CX).unwrap();
        let find = |s: &str| gens.iter().find(|g| alg.render_column(&g.block) == s);
        assert_eq!(find("{w=1;dec=x}").unwrap().height, Some(2));
        assert!(find("{w=1;dec=x2}").is_none());
        let rep = verify_relations(&pres, 8, Flavor::CX).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        let x = rep.checks.iter().find(|c| c.generator == "{w=1;dec=x}").unwrap();
        assert_eq!(x.exponent, 4);
        assert!(x.powers_nonzero && x.vanishes);
    }

    #[test]
    fn exterior_and_point_reports() {
        let ext = CoeffPresentation::exterior(3, 1, 16).unwrap();
        let rep = verify_relations(&ext, 6, Flavor::CX).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert!(rep.checks.iter().any(|c| c.generator == "{w=1;dec=y}" && c.exponent == 2 && c.vanishes));
        let pt = verify_relations(&CoeffPresentation::point(2), 6, Flavor::Dinf).unwrap();
        assert!(pt.checks.is_empty() && pt.passed());
    }
}
