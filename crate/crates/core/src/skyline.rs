//! Skyline diagrams: the additive basis of decorated Hopf monomials.
//!
//! A [`Column`] is the divided power `b^[mult]` of a decorated gathered block
//! `b` of width `p^level`. The block is a cup product of hollow boxes
//! (`gamma_k` raised to the divided power `p^(level-k)`, with exponent
//! `hollow[k-1]`), an optional solid part and a decoration `x_e`. Blocks are
//! stored at the smallest level that can carry them, so every column has a
//! unique key. A [`Monomial`] is the transfer product of its columns in
//! sorted order.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::coeff::CoeffPresentation;
use crate::error::{Error, Result};
use crate::scalars::{self, binomial_mod_p, LinComb};

/// Solid part: the set `S` of levels carrying a `gamma'` factor, and its type.
/// Even type carries `lambda` iff `|S|` is odd; odd type iff `|S|` is even.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solid {
    pub set: Vec<u32>,
    pub odd: bool,
}

impl Solid {
    pub fn lambda(&self) -> u32 {
        (self.set.len() as u32 + self.odd as u32) % 2
    }
}

/// A coefficient class `x` with its sign index `e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decoration {
    pub class: usize,
    pub sign: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Column {
    pub level: u32,
    pub hollow: Vec<u32>,
    pub solid: Option<Solid>,
    pub dec: Decoration,
    pub mult: u64,
}

/// Everything that identifies a column except its width multiplier.
pub type Profile = (u32, Vec<u32>, Option<Solid>, Decoration);

impl Column {
    pub fn unit(pres: &CoeffPresentation, width: u64) -> Column {
        Column { level: 0, hollow: vec![], solid: None, dec: Decoration { class: pres.unit, sign: 0 }, mult: width }
    }

    pub fn profile(&self) -> Profile {
        (self.level, self.hollow.clone(), self.solid.clone(), self.dec)
    }

    pub fn same_profile(&self, other: &Column) -> bool {
        self.level == other.level && self.hollow == other.hollow && self.solid == other.solid && self.dec == other.dec
    }

    pub fn lambda(&self) -> u32 {
        self.solid.as_ref().map_or(0, Solid::lambda)
    }

    pub fn is_unit(&self, pres: &CoeffPresentation) -> bool {
        self.level == 0 && self.dec == Decoration { class: pres.unit, sign: 0 }
    }

    /// True when the block cannot be written as a `p`-th divided power of a
    /// block one level down.
    fn touches_level(&self) -> bool {
        if self.level == 0 {
            return true;
        }
        let k = self.level;
        self.hollow[k as usize - 1] > 0
            || self.lambda() == 1
            || self.solid.as_ref().is_some_and(|s| s.set.last() == Some(&k))
    }

    fn with_mult(&self, mult: u64) -> Column {
        Column { mult, ..self.clone() }
    }
}

/// Tri-grade `(component, degree, sign)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grade {
    pub n: u64,
    pub d: u64,
    pub e: u8,
}

impl Grade {
    /// Total degree `t = n e + d` mod 2.
    pub fn total(&self) -> u32 {
        ((self.n * self.e as u64 + self.d) % 2) as u32
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    pub columns: Vec<Column>,
}

impl Monomial {
    pub fn empty() -> Monomial {
        Monomial { columns: vec![] }
    }

    pub fn single(c: Column) -> Monomial {
        Monomial { columns: vec![c] }
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }
}

pub type Element = LinComb<Monomial>;

/// Prime, coefficient algebra, and the grading rules that depend on them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    pub p: u32,
    pub pres: Arc<CoeffPresentation>,
}

impl Algebra {
    pub fn new(pres: CoeffPresentation) -> Algebra {
        Algebra { p: pres.p, pres: Arc::new(pres) }
    }

    pub fn point(p: u32) -> Algebra {
        Algebra::new(CoeffPresentation::point(p))
    }

    pub fn zero(&self) -> Element {
        LinComb::zero(self.p)
    }

    pub fn one(&self) -> Element {
        LinComb::single(self.p, Monomial::empty(), 1)
    }

    pub fn pow_p(&self, k: u32) -> u64 {
        (self.p as u64).pow(k)
    }

    /// Degree of `gamma_k`.
    pub fn gamma_degree(&self, k: u32) -> u64 {
        if self.p == 2 {
            (1u64 << k) - 1
        } else {
            2 * (self.pow_p(k) - 1)
        }
    }

    pub fn width(&self, c: &Column) -> u64 {
        c.mult * self.pow_p(c.level)
    }

    /// Degree of the undecorated block at multiplier one.
    pub fn block_degree(&self, c: &Column) -> u64 {
        let k = c.level;
        let mut d: u64 = 0;
        for (i, &m) in c.hollow.iter().enumerate() {
            let lev = i as u32 + 1;
            d += m as u64 * self.gamma_degree(lev) * self.pow_p(k - lev);
        }
        if let Some(s) = &c.solid {
            let top = self.pow_p(k);
            for &lev in &s.set {
                d += top - 2 * self.pow_p(k - lev);
            }
            d += s.lambda() as u64 * (top - 1);
        }
        d
    }

    /// Degree of the undecorated part of the column.
    pub fn undecorated_degree(&self, c: &Column) -> u64 {
        c.mult * self.block_degree(c)
    }

    pub fn decoration_degree(&self, c: &Column) -> u64 {
        self.pres.degree(c.dec.class) as u64 * self.width(c)
    }

    pub fn column_grade(&self, c: &Column) -> Grade {
        let e = (c.solid.as_ref().map_or(0, |s| s.odd as u8) + c.dec.sign) % 2;
        Grade { n: self.width(c), d: self.undecorated_degree(c) + self.decoration_degree(c), e }
    }

    pub fn column_total(&self, c: &Column) -> u32 {
        self.column_grade(c).total()
    }

    pub fn grade(&self, m: &Monomial) -> Grade {
        let mut g = Grade { n: 0, d: 0, e: 0 };
        for c in &m.columns {
            let cg = self.column_grade(c);
            g.n += cg.n;
            g.d += cg.d;
            g.e = cg.e;
        }
        g
    }

    pub fn total(&self, m: &Monomial) -> u32 {
        self.grade(m).total()
    }

    /// Move a column to its smallest level, adjusting the multiplier.
    pub fn lower(&self, mut c: Column) -> Column {
        while c.level > 0 && !c.touches_level() {
            c.hollow.pop();
            c.level -= 1;
            c.mult *= self.p as u64;
        }
        if c.solid.as_ref().is_some_and(|s| s.set.is_empty() && !s.odd) {
            c.solid = None;
        }
        c
    }

    /// Check a column against the structural rules; `c` must already be lowered.
    pub fn validate_column(&self, c: &Column) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidColumn(m.to_string()));
        if c.hollow.len() != c.level as usize {
            return bad("hollow exponents must be listed for every level");
        }
        if c.mult == 0 {
            return bad("width multiplier must be positive");
        }
        if c.dec.class >= self.pres.dim() || c.dec.sign > 1 {
            return bad("unknown decoration");
        }
        if self.p == 2 && (c.solid.is_some() || c.dec.sign != 0) {
            return bad("solid parts and sign decorations need an odd prime");
        }
        if let Some(s) = &c.solid {
            if s.set.windows(2).any(|w| w[0] >= w[1]) || s.set.iter().any(|&l| l == 0 || l > c.level) {
                return bad("solid levels must be increasing and within the column level");
            }
            if s.set.is_empty() && !s.odd {
                return bad("empty even solid part must be omitted");
            }
            if c.level == 0 {
                return bad("solid part at level 0");
            }
        }
        if !c.touches_level() {
            return bad("column is not stored at its smallest level");
        }
        if c.lambda() == 1 && c.mult != 1 {
            return bad("a column carrying lambda has width multiplier 1");
        }
        if self.p > 2 {
            let dx = self.pres.degree(c.dec.class) as u64;
            if (dx + c.dec.sign as u64) % 2 == 1 && (c.level > 0 || c.mult > 1) {
                return bad("decorations of odd total degree only sit on width-1 columns");
            }
            if c.mult > 1 && self.column_total(&c.with_mult(1)) == 1 {
                return bad("odd columns have width multiplier 1");
            }
        }
        Ok(())
    }

    /// Transfer product of raw columns in the given order, reduced to a basis monomial.
    pub fn canonicalize(&self, raw: Vec<Column>) -> Result<Element> {
        let mut cols = Vec::with_capacity(raw.len());
        for c in raw {
            let c = self.lower(c);
            self.validate_column(&c)?;
            cols.push(c);
        }
        Ok(self.canonicalize_valid(cols))
    }

    /// As [`Algebra::canonicalize`] for columns already known to be valid.
    pub fn canonicalize_valid(&self, mut cols: Vec<Column>) -> Element {
        let p = self.p;
        if let Some(first) = cols.first() {
            let e = self.column_grade(first).e;
            if cols.iter().any(|c| self.column_grade(c).e != e) {
                return self.zero();
            }
        }
        let mut coeff = 1u32;
        // insertion sort, tracking Koszul signs of odd columns passing each other
        let parity: Vec<u32> = cols.iter().map(|c| self.column_total(c)).collect();
        let mut idx: Vec<usize> = (0..cols.len()).collect();
        for i in 1..idx.len() {
            let mut j = i;
            while j > 0 && cols[idx[j - 1]] > cols[idx[j]] {
                if parity[idx[j - 1]] == 1 && parity[idx[j]] == 1 {
                    coeff = scalars::neg(coeff, p);
                }
                idx.swap(j - 1, j);
                j -= 1;
            }
        }
        let sorted: Vec<Column> = idx.into_iter().map(|i| std::mem::take(&mut cols[i])).collect();
        let mut merged: Vec<Column> = Vec::with_capacity(sorted.len());
        for c in sorted {
            if let Some(last) = merged.last_mut() {
                if last.same_profile(&c) {
                    if p > 2 && self.column_total(&c.with_mult(1)) == 1 {
                        return self.zero();
                    }
                    coeff = scalars::mul(coeff, binomial_mod_p(last.mult + c.mult, c.mult, p), p);
                    if coeff == 0 {
                        return self.zero();
                    }
                    last.mult += c.mult;
                    continue;
                }
            }
            merged.push(c);
        }
        LinComb::single(p, Monomial { columns: merged }, coeff)
    }

    /// Unit of component `n`, i.e. `1^[n]`.
    pub fn unit_monomial(&self, n: u64) -> Monomial {
        if n == 0 {
            Monomial::empty()
        } else {
            Monomial::single(Column::unit(&self.pres, n))
        }
    }

    pub fn unit(&self, n: u64) -> Element {
        LinComb::single(self.p, self.unit_monomial(n), 1)
    }
}

impl Default for Column {
    fn default() -> Column {
        Column { level: 0, hollow: vec![], solid: None, dec: Decoration { class: 0, sign: 0 }, mult: 1 }
    }
}

// ---------------------------------------------------------------- enumeration

impl Algebra {
    /// All valid columns of width `<= n_max`, degree `<= d_max`, with column sign `e`.
    pub fn columns_up_to(&self, n_max: u64, d_max: u64, e: Option<u8>) -> Vec<Column> {
        let mut out = Vec::new();
        let mut level = 0u32;
        while self.pow_p(level) <= n_max {
            let solids: Vec<Option<Solid>> = if self.p == 2 || level == 0 {
                vec![None]
            } else {
                let mut v = vec![None];
                for mask in 0u32..(1 << level) {
                    let set: Vec<u32> = (1..=level).filter(|l| mask & (1 << (l - 1)) != 0).collect();
                    for odd in [false, true] {
                        if set.is_empty() && !odd {
                            continue;
                        }
                        v.push(Some(Solid { set: set.clone(), odd }));
                    }
                }
                v
            };
            let mut hollow = vec![0u32; level as usize];
            loop {
                for solid in &solids {
                    let block = Column { level, hollow: hollow.clone(), solid: solid.clone(), ..Column::default() };
                    if !block.touches_level() {
                        continue;
                    }
                    let bd = self.block_degree(&block);
                    if bd > d_max {
                        continue;
                    }
                    for class in 0..self.pres.dim() {
                        for sign in 0..(if self.p == 2 { 1 } else { 2 }) {
                            let base = Column { dec: Decoration { class, sign }, ..block.clone() };
                            let ce = (solid.as_ref().map_or(0, |s| s.odd as u8) + sign) % 2;
                            if e.is_some_and(|e| e != ce) {
                                continue;
                            }
                            let dx = self.pres.degree(class) as u64;
                            let mut mult = 1u64;
                            while mult * self.pow_p(level) <= n_max
                                && mult * bd + dx * mult * self.pow_p(level) <= d_max
                            {
                                let c = base.with_mult(mult);
                                if self.validate_column(&c).is_ok() {
                                    out.push(c);
                                }
                                mult += 1;
                            }
                        }
                    }
                }
                // next hollow exponent vector within the degree budget
                if !next_vector(&mut hollow, |h| {
                    h.iter()
                        .enumerate()
                        .map(|(i, &m)| m as u64 * self.gamma_degree(i as u32 + 1) * self.pow_p(level - i as u32 - 1))
                        .sum::<u64>()
                        <= d_max
                }) {
                    break;
                }
            }
            level += 1;
        }
        out.sort();
        out
    }

    /// The skyline basis of tri-grade `(n, d, e)`.
    pub fn enumerate_skyline(&self, n: u64, d: u64, e: u8) -> Vec<Monomial> {
        if n == 0 {
            return if d == 0 && e == 0 { vec![Monomial::empty()] } else { vec![] };
        }
        let cols = self.columns_up_to(n, d, Some(e));
        // group by profile; each group offers several multipliers
        let mut groups: Vec<Vec<(Column, u64, u64)>> = Vec::new();
        for c in cols {
            let g = self.column_grade(&c);
            match groups.last_mut() {
                Some(last) if last[0].0.same_profile(&c) => last.push((c, g.n, g.d)),
                _ => groups.push(vec![(c, g.n, g.d)]),
            }
        }
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        enumerate_rec(&groups, 0, n, d, &mut chosen, &mut out);
        out
    }

    /// Number of skyline monomials of tri-grade `(n, d, e)`.
    pub fn count_skyline(&self, n: u64, d: u64, e: u8) -> usize {
        self.enumerate_skyline(n, d, e).len()
    }
}

fn enumerate_rec(
    groups: &[Vec<(Column, u64, u64)>],
    i: usize,
    n: u64,
    d: u64,
    chosen: &mut Vec<Column>,
    out: &mut Vec<Monomial>,
) {
    if n == 0 && d == 0 {
        out.push(Monomial { columns: chosen.clone() });
        return;
    }
    if i == groups.len() {
        return;
    }
    enumerate_rec(groups, i + 1, n, d, chosen, out);
    for (c, w, deg) in &groups[i] {
        if *w <= n && *deg <= d {
            chosen.push(c.clone());
            enumerate_rec(groups, i + 1, n - w, d - deg, chosen, out);
            chosen.pop();
        }
    }
}

/// Advance `v` to the next vector (odometer order) satisfying `ok`, which must
/// be monotone. Returns false when exhausted.
fn next_vector<F: Fn(&[u32]) -> bool>(v: &mut [u32], ok: F) -> bool {
    for i in 0..v.len() {
        v[i] += 1;
        if ok(v) {
            return true;
        }
        v[i] = 0;
    }
    false
}

// ------------------------------------------------------------ text round trip

impl Algebra {
    pub fn render_column(&self, c: &Column) -> String {
        let mut s = format!("{{w={}", self.width(c));
        for (i, &m) in c.hollow.iter().enumerate() {
            if m > 0 {
                let _ = write!(s, ";g{}^{}", i + 1, m);
            }
        }
        if let Some(sol) = &c.solid {
            let set: Vec<String> = sol.set.iter().map(|l| l.to_string()).collect();
            let _ = write!(s, ";solid(S={{{}}},{})", set.join(","), if sol.odd { "odd" } else { "even" });
        }
        if c.dec != (Decoration { class: self.pres.unit, sign: 0 }) {
            let _ = write!(s, ";dec={}", self.pres.name(c.dec.class));
            if c.dec.sign == 1 {
                s.push_str("_1");
            }
        }
        s.push('}');
        s
    }

    /// Text form of a monomial; the empty monomial (component 0) renders as `1`.
    pub fn render_monomial(&self, m: &Monomial) -> String {
        if m.is_empty() {
            return "1".to_string();
        }
        m.columns.iter().map(|c| self.render_column(c)).collect::<Vec<_>>().join("|")
    }

    pub fn render(&self, x: &Element) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in x.iter() {
            let body = self.render_monomial(m);
            parts.push(if c == 1 { body } else { format!("{c}*{body}") });
        }
        parts.join(" + ")
    }

    /// Parse a diagram, or a signed sum of optionally scaled diagrams.
    pub fn parse(&self, text: &str) -> Result<Element> {
        let mut ps = Parser { s: text.as_bytes(), i: 0 };
        let mut total = self.zero();
        let mut negate = false;
        ps.ws();
        if ps.eat(b'-') {
            negate = true;
        }
        loop {
            ps.ws();
            let mut coeff = 1u32;
            if ps.peek().is_some_and(|b| b.is_ascii_digit()) {
                let save = ps.i;
                let v = ps.int()?;
                ps.ws();
                if ps.eat(b'*') {
                    coeff = scalars::reduce(v as i64, self.p);
                } else {
                    // a bare integer is a scalar multiple of the empty monomial
                    if v == 1 || ps.peek().is_none() || matches!(ps.peek(), Some(b'+') | Some(b'-')) {
                        let term = self.one().scaled(scalars::reduce(v as i64, self.p));
                        total.add_scaled(&term, if negate { self.p - 1 } else { 1 });
                        ps.ws();
                        match ps.next_sign() {
                            Some(n) => {
                                negate = n;
                                continue;
                            }
                            None => break,
                        }
                    }
                    ps.i = save;
                    return Err(ps.err("expected '*' after coefficient"));
                }
            }
            let term = self.parse_monomial(&mut ps)?.scaled(coeff);
            total.add_scaled(&term, if negate { self.p - 1 } else { 1 });
            ps.ws();
            match ps.next_sign() {
                Some(n) => negate = n,
                None => break,
            }
        }
        ps.ws();
        if ps.i != ps.s.len() {
            return Err(ps.err("trailing input"));
        }
        Ok(total)
    }

    fn parse_monomial(&self, ps: &mut Parser) -> Result<Element> {
        let mut cols = Vec::new();
        loop {
            ps.ws();
            cols.push(self.parse_column(ps)?);
            ps.ws();
            if !ps.eat(b'|') {
                break;
            }
        }
        self.canonicalize(cols)
    }

    fn parse_column(&self, ps: &mut Parser) -> Result<Column> {
        let start = ps.i;
        ps.expect(b'{')?;
        ps.ws();
        ps.expect(b'w')?;
        ps.ws();
        ps.expect(b'=')?;
        ps.ws();
        let width = ps.int()?;
        let mut hollow: Vec<u32> = Vec::new();
        let mut solid: Option<Solid> = None;
        let mut dec = Decoration { class: self.pres.unit, sign: 0 };
        loop {
            ps.ws();
            if ps.eat(b'}') {
                break;
            }
            ps.expect(b';')?;
            ps.ws();
            if ps.eat(b'g') {
                ps.ws();
                let k = ps.int()? as usize;
                ps.ws();
                ps.expect(b'^')?;
                ps.ws();
                let m = ps.int()? as u32;
                if k == 0 {
                    return Err(ps.err("hollow boxes start at level 1"));
                }
                if hollow.len() < k {
                    hollow.resize(k, 0);
                }
                hollow[k - 1] += m;
            } else if ps.eat_word("solid") {
                if solid.is_some() {
                    return Err(ps.err("a column has at most one solid part"));
                }
                ps.ws();
                ps.expect(b'(')?;
                ps.ws();
                ps.expect(b'S')?;
                ps.ws();
                ps.expect(b'=')?;
                ps.ws();
                ps.expect(b'{')?;
                let mut set = Vec::new();
                ps.ws();
                if !ps.eat(b'}') {
                    loop {
                        ps.ws();
                        set.push(ps.int()? as u32);
                        ps.ws();
                        if ps.eat(b'}') {
                            break;
                        }
                        ps.expect(b',')?;
                    }
                }
                ps.ws();
                ps.expect(b',')?;
                ps.ws();
                let odd = if ps.eat_word("even") {
                    false
                } else if ps.eat_word("odd") {
                    true
                } else {
                    return Err(ps.err("expected 'even' or 'odd'"));
                };
                ps.ws();
                ps.expect(b')')?;
                let mut sorted = set.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != set.len() {
                    return Err(ps.err("repeated level in solid part"));
                }
                solid = Some(Solid { set: sorted, odd });
            } else if ps.eat_word("dec") {
                ps.ws();
                ps.expect(b'=')?;
                ps.ws();
                let name = ps.ident()?;
                let class = self
                    .pres
                    .index_of(&name)
                    .ok_or_else(|| Error::Parse { pos: ps.i, msg: format!("unknown decoration {name}") })?;
                let mut sign = 0u8;
                if ps.eat(b'_') {
                    sign = match ps.bump() {
                        Some(b'0') => 0,
                        Some(b'1') => 1,
                        _ => return Err(ps.err("sign index must be 0 or 1")),
                    };
                }
                dec = Decoration { class, sign };
            } else {
                return Err(ps.err("expected an item"));
            }
        }
        let dims_err = |msg: &str| Error::Parse { pos: start, msg: msg.to_string() };
        let mut level = hollow.iter().rposition(|&m| m > 0).map_or(0, |i| i as u32 + 1);
        if let Some(s) = &solid {
            level = level.max(s.set.last().copied().unwrap_or(0));
        }
        let lam = solid.as_ref().map_or(0, Solid::lambda);
        if lam == 1 {
            // lambda pins the column to multiplier one
            let mut k = 0u32;
            while self.pow_p(k) < width {
                k += 1;
            }
            if self.pow_p(k) != width {
                return Err(dims_err("a column carrying lambda has width a power of p"));
            }
            if k < level || k == 0 {
                return Err(dims_err("solid part sits below a hollow box"));
            }
            level = k;
        }
        let unit_w = self.pow_p(level);
        if width == 0 || width % unit_w != 0 {
            return Err(dims_err("width is not a multiple of the block width"));
        }
        hollow.resize(level as usize, 0);
        let c = Column { level, hollow, solid, dec, mult: width / unit_w };
        Ok(c)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.i, msg: msg.to_string() }
    }
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }
    fn peek(&self) -> Option<u8> {
        self.s.get(self.i).copied()
    }
    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.i += 1;
        }
        b
    }
    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.i += 1;
            true
        } else {
            false
        }
    }
    fn eat_word(&mut self, w: &str) -> bool {
        if self.s[self.i..].starts_with(w.as_bytes()) {
            self.i += w.len();
            true
        } else {
            false
        }
    }
    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", b as char)))
        }
    }
    fn int(&mut self) -> Result<u64> {
        let st = self.i;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.i += 1;
        }
        if st == self.i {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.s[st..self.i]).unwrap().parse().map_err(|_| self.err("integer out of range"))
    }
    fn ident(&mut self) -> Result<String> {
        let st = self.i;
        while self.peek().is_some_and(|b| b.is_ascii_alphanumeric()) {
            self.i += 1;
        }
        if st == self.i {
            return Err(self.err("expected a name"));
        }
        Ok(String::from_utf8_lossy(&self.s[st..self.i]).into_owned())
    }
    fn next_sign(&mut self) -> Option<bool> {
        if self.eat(b'+') {
            Some(false)
        } else if self.eat(b'-') {
            Some(true)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(alg: &Algebra, s: &str) -> Monomial {
        let l = alg.parse(s).unwrap();
        assert_eq!(l.len(), 1, "{s}");
        let (m, c) = l.iter().next().unwrap();
        assert_eq!(c, 1);
        m.clone()
    }

    #[test]
    fn trigrades() {
        let a2 = Algebra::point(2);
        assert_eq!(a2.grade(&mono(&a2, "{w=4;g2^1}")), Grade { n: 4, d: 3, e: 0 });
        let a3 = Algebra::point(3);
        assert_eq!(a3.grade(&mono(&a3, "{w=3;solid(S={},odd)}")), Grade { n: 3, d: 2, e: 1 });
        assert_eq!(a3.grade(&mono(&a3, "{w=3;solid(S={1},odd)}")), Grade { n: 3, d: 1, e: 1 });
    }

    #[test]
    fn merge_rules() {
        let a2 = Algebra::point(2);
        let x = a2.parse("{w=2;g1^1}|{w=4;g1^1}").unwrap();
        assert_eq!(a2.render(&x), "{w=6;g1^1}");
        let a3 = Algebra::point(3);
        assert!(a3.parse("{w=3;g1^1}|{w=6;g1^1}").unwrap().is_zero());
        assert!(a3.parse("{w=3;solid(S={},odd)}|{w=3;g1^1}").unwrap().is_zero());
    }

    #[test]
    fn parse_examples() {
        let a2 = Algebra::point(2);
        let m = mono(&a2, "{w=4; g2^1}");
        assert_eq!(m.columns[0].level, 2);
        let m = mono(&a2, "{w=2; g1^3} | {w=2}");
        assert_eq!(m.columns.len(), 2);
        assert_eq!(a2.render_monomial(&m), "{w=2}|{w=2;g1^3}");
        // a width-4 single box is gamma_1^[2], stored at level 1
        let m = mono(&a2, "{w=4;g1^1}");
        assert_eq!((m.columns[0].level, m.columns[0].mult), (1, 2));
        let a3 = Algebra::point(3);
        let m = mono(&a3, "{w=3; solid(S={1}, odd)}");
        assert_eq!(a3.grade(&m), Grade { n: 3, d: 1, e: 1 });
    }

    #[test]
    fn parse_errors() {
        let a3 = Algebra::point(3);
        assert!(matches!(a3.parse("{w=3;g1^1"), Err(Error::Parse { .. })));
        assert!(a3.parse("{w=4;g1^1}").is_err());
        assert!(a3.parse("{w=3;g2^1;solid(S={},odd)}").is_err());
        assert!(Algebra::point(2).parse("{w=2;solid(S={1},odd)}").is_err());
    }

    #[test]
    fn render_round_trip() {
        for p in [2u32, 3] {
            let alg = Algebra::point(p);
            for n in 0..=9 {
                for d in 0..=12 {
                    for e in 0..(if p == 2 { 1 } else { 2 }) {
                        for m in alg.enumerate_skyline(n, d, e) {
                            let text = alg.render_monomial(&m);
                            assert_eq!(mono(&alg, &text), m, "{text}");
                            assert_eq!(alg.grade(&m), Grade { n, d, e: if n == 0 { 0 } else { e } });
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bs2_and_component_four() {
        let alg = Algebra::point(2);
        for d in 0..20 {
            assert_eq!(alg.count_skyline(2, d, 0), 1);
        }
        let got: Vec<String> = alg.enumerate_skyline(4, 3, 0).iter().map(|m| alg.render_monomial(m)).collect();
        assert_eq!(got.len(), 3);
        assert!(got.contains(&"{w=4;g2^1}".to_string()));
        assert!(got.contains(&"{w=2;g1^1}|{w=2;g1^2}".to_string()));
        assert!(got.contains(&"{w=2}|{w=2;g1^3}".to_string()));
    }
}
