//! Homology side: Dyer-Lashof sequences, Nakaoka monomials, minimal sequences,
//! the raw cup-coproduct formula, and the divided-power pairing.
//!
//! A sequence `I = (e_1, i_1, ..., e_r, i_r)` stands for the composite
//! `beta^{e_1} q_{i_1} ... beta^{e_r} q_{i_r}`, outermost operation first.

use std::fmt;

use crate::coeff::CoeffPresentation;
use crate::error::{Error, Result};
use crate::scalars::{self, LinComb};
use crate::skyline::{Algebra, Column, Decoration, Grade, Monomial};

/// A sequence of pairs `(epsilon_j, i_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct KSeq(pub Vec<(u8, u64)>);

impl KSeq {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Flatten to `(e_1, i_1, ..., e_r, i_r)`.
    pub fn flat(&self) -> Vec<u64> {
        self.0.iter().flat_map(|&(e, i)| [e as u64, i]).collect()
    }

    pub fn from_flat(v: &[u64]) -> Result<KSeq> {
        if v.len() % 2 != 0 {
            return Err(Error::Sequence("odd number of entries".into()));
        }
        let mut out = Vec::new();
        for c in v.chunks(2) {
            if c[0] > 1 {
                return Err(Error::Sequence("epsilon entries are 0 or 1".into()));
            }
            out.push((c[0] as u8, c[1]));
        }
        Ok(KSeq(out))
    }

    /// Entrywise sum.
    pub fn add(&self, other: &KSeq) -> KSeq {
        KSeq(self.0.iter().zip(&other.0).map(|(a, b)| (a.0 + b.0, a.1 + b.1)).collect())
    }
}

impl fmt::Display for KSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.flat().iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn is_admissible(seq: &KSeq, p: u32) -> bool {
    if p == 2 && seq.0.iter().any(|&(e, _)| e != 0) {
        return false;
    }
    seq.0.windows(2).all(|w| {
        let (ik, (en, inext)) = (w[0].1 as i64, (w[1].0 as i64, w[1].1 as i64));
        ik <= inext - en && (p == 2 || (inext - en - ik).rem_euclid(2) == 0)
    })
}

pub fn is_strongly_admissible(seq: &KSeq, p: u32) -> bool {
    is_admissible(seq, p) && seq.0.first().is_some_and(|&(_, i)| i > 0)
}

/// Degree, component factor and twist of `q_I` applied to a class of the
/// given degree and twist. The twist of a nonempty sequence at odd `p` is
/// the parity of `i_r + base_degree`.
pub fn op_grade(seq: &KSeq, base_degree: u64, base_twist: u8, p: u32) -> Result<(u64, u64, u8)> {
    let mut deg = base_degree as i64;
    for &(e, i) in seq.0.iter().rev() {
        deg = p as i64 * deg + i as i64 * (p as i64 - 1) - e as i64;
        if deg < 0 {
            return Err(Error::Sequence(format!("negative degree for {seq}")));
        }
    }
    let twist = match seq.0.last() {
        Some(&(_, ir)) if p > 2 => ((ir + base_degree) % 2) as u8,
        Some(_) => 0,
        None => base_twist,
    };
    Ok((deg as u64, (p as u64).pow(seq.len() as u32), twist))
}

/// A Pontrjagin-product generator `q_I(alpha)` with its twist.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub seq: KSeq,
    pub class: usize,
    pub twist: u8,
}

/// A monomial in the Nakaoka basis, generators sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NakaokaMonomial {
    pub gens: Vec<Generator>,
}

pub fn generator_grade(pres: &CoeffPresentation, g: &Generator) -> Grade {
    let (d, n, _) = op_grade(&g.seq, pres.degree(g.class) as u64, g.twist, pres.p).expect("admissible");
    Grade { n, d, e: g.twist }
}

pub fn nakaoka_grade(pres: &CoeffPresentation, m: &NakaokaMonomial) -> Grade {
    let mut g = Grade { n: 0, d: 0, e: 0 };
    for x in &m.gens {
        let gg = generator_grade(pres, x);
        g.n += gg.n;
        g.d += gg.d;
        g.e = gg.e;
    }
    g
}

/// All generators of component `<= n_max`, degree `<= d_max`, twist `e`.
pub fn generators(pres: &CoeffPresentation, n_max: u64, d_max: u64, e: u8) -> Vec<Generator> {
    let p = pres.p;
    let mut out = Vec::new();
    for class in 0..pres.dim() {
        let base = pres.degree(class) as u64;
        if base > d_max || n_max == 0 {
            continue;
        }
        if p == 2 || e < 2 {
            if p > 2 || e == 0 {
                out.push(Generator { seq: KSeq::default(), class, twist: e });
            }
        }
        let mut r = 1u32;
        while (p as u64).pow(r) <= n_max {
            let mut seqs = Vec::new();
            strongly_admissible_rec(p, r as usize, base, d_max, &mut vec![], &mut seqs);
            for s in seqs {
                let (_, _, tw) = op_grade(&s, base, 0, p).unwrap();
                if tw == e {
                    out.push(Generator { seq: s, class, twist: e });
                }
            }
            r += 1;
        }
    }
    out.sort();
    out
}

/// Strongly admissible sequences of length `r` with degree on a class of
/// degree `base` at most `d_max`.
fn strongly_admissible_rec(p: u32, r: usize, base: u64, d_max: u64, cur: &mut Vec<(u8, u64)>, out: &mut Vec<KSeq>) {
    if cur.len() == r {
        let s = KSeq(cur.clone());
        if is_strongly_admissible(&s, p) && op_grade(&s, base, 0, p).is_ok_and(|g| g.0 <= d_max) {
            out.push(s);
        }
        return;
    }
    let j = cur.len();
    // contribution of position j is p^j (i (p-1) - e); total also includes p^r base
    let floor = (p as u64).pow(r as u32) * base;
    let partial: i64 = cur.iter().enumerate().map(|(k, &(e, i))| (p as i64).pow(k as u32) * (i as i64 * (p as i64 - 1) - e as i64)).sum();
    let lo = match cur.last() {
        Some(&(_, prev)) => prev,
        None => 1,
    };
    let eps_choices: &[u8] = if p == 2 { &[0] } else { &[0, 1] };
    let mut i = lo;
    loop {
        let w = (p as i64).pow(j as u32) * (i as i64 * (p as i64 - 1) - 1);
        if floor as i64 + partial + w.max(0) > d_max as i64 && i > lo + 2 {
            break;
        }
        for &e in eps_choices {
            if let Some(&(_, prev)) = cur.last() {
                if (prev as i64) > i as i64 - e as i64 {
                    continue;
                }
            }
            cur.push((e, i));
            strongly_admissible_rec(p, r, base, d_max, cur, out);
            cur.pop();
        }
        i += 1;
        if i > d_max + lo + 2 {
            break;
        }
    }
}

/// The Nakaoka basis in tri-grade `(n, d, e)`.
pub fn enumerate_nakaoka(pres: &CoeffPresentation, n: u64, d: u64, e: u8) -> Vec<NakaokaMonomial> {
    if n == 0 {
        return if d == 0 && e == 0 { vec![NakaokaMonomial::default()] } else { vec![] };
    }
    let p = pres.p;
    let gens: Vec<(Generator, Grade)> =
        generators(pres, n, d, e).into_iter().map(|g| {
            let gr = generator_grade(pres, &g);
            (g, gr)
        }).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    nakaoka_rec(p, &gens, 0, n, d, &mut cur, &mut out);
    out
}

fn nakaoka_rec(
    p: u32,
    gens: &[(Generator, Grade)],
    i: usize,
    n: u64,
    d: u64,
    cur: &mut Vec<Generator>,
    out: &mut Vec<NakaokaMonomial>,
) {
    if n == 0 && d == 0 {
        out.push(NakaokaMonomial { gens: cur.clone() });
        return;
    }
    if i == gens.len() {
        return;
    }
    nakaoka_rec(p, gens, i + 1, n, d, cur, out);
    let (g, gr) = &gens[i];
    let max_mult = if p > 2 && gr.total() == 1 { 1 } else { u64::MAX };
    let mut k = 1u64;
    while k <= max_mult && k * gr.n <= n && k * gr.d <= d {
        for _ in 0..1 {
            cur.push(g.clone());
        }
        nakaoka_rec(p, gens, i + 1, n - k * gr.n, d - k * gr.d, cur, out);
        k += 1;
    }
    for _ in 1..k {
        cur.pop();
    }
}

// ------------------------------------------------------------ minimal sequences

/// Membership in `I_S[k]` (or `I'_S[k]` when `primed`). A leading `beta q_0`
/// vanishes, so the first entry needs `i_1 >= e_1`.
pub fn in_class(seq: &KSeq, set: &[u32], k: u32, primed: bool, p: u32) -> bool {
    if seq.len() != k as usize || !is_admissible(seq, p) {
        return false;
    }
    if seq.0.first().is_some_and(|&(e, i)| i < e as u64) {
        return false;
    }
    seq.0.iter().enumerate().all(|(idx, &(e, i))| {
        let j = idx as u32 + 1;
        let want_e = set.contains(&(k + 1 - j)) as u8;
        let cnt = set.iter().filter(|&&s| s <= k - j).count() as u64 + primed as u64;
        e == want_e && i % 2 == cnt % 2
    })
}

/// `L_{S,k}` or `L'_{S,k}`: smallest entries left to right.
pub fn minimal_sequence(set: &[u32], k: u32, primed: bool, p: u32) -> Result<KSeq> {
    if p == 2 {
        return Err(Error::Sequence("minimal sequences need an odd prime".into()));
    }
    if set.iter().any(|&s| s == 0 || s > k) {
        return Err(Error::Sequence(format!("S must lie in 1..={k}")));
    }
    let mut out = Vec::new();
    let mut prev: Option<u64> = None;
    for j in 1..=k {
        let e = set.contains(&(k + 1 - j)) as u8;
        let parity = (set.iter().filter(|&&s| s <= k - j).count() as u64 + primed as u64) % 2;
        let mut i = match prev {
            Some(pi) => pi + e as u64,
            None => e as u64,
        };
        if i % 2 != parity {
            i += 1;
        }
        out.push((e, i));
        prev = Some(i);
    }
    let s = KSeq(out);
    if !in_class(&s, set, k, primed, p) {
        return Err(Error::Sequence("empty class".into()));
    }
    Ok(s)
}

/// Members of the class with every `i_j <= bound`.
pub fn enumerate_class(set: &[u32], k: u32, primed: bool, bound: u64, p: u32) -> Vec<KSeq> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(set: &[u32], k: u32, primed: bool, bound: u64, p: u32, cur: &mut Vec<(u8, u64)>, out: &mut Vec<KSeq>) {
        let j = cur.len() as u32 + 1;
        if j > k {
            let s = KSeq(cur.clone());
            if in_class(&s, set, k, primed, p) {
                out.push(s);
            }
            return;
        }
        let e = set.contains(&(k + 1 - j)) as u8;
        for i in 0..=bound {
            cur.push((e, i));
            rec(set, k, primed, bound, p, cur, out);
            cur.pop();
        }
    }
    rec(set, k, primed, bound, p, &mut cur, &mut out);
    out
}

/// `I_{j,k}`: `2(k-j)` zeros followed by `(0,2)` repeated `j` times.
pub fn i_jk(j: u32, k: u32) -> KSeq {
    KSeq((1..=k).map(|pos| if pos > k - j { (0, 2) } else { (0, 0) }).collect())
}

/// Coordinates `(n_1, ..., n_k)` with `seq = base + sum n_j I_{j,k}`, if any.
pub fn affine_coordinates(seq: &KSeq, base: &KSeq) -> Option<Vec<u64>> {
    let k = base.len() as u32;
    if seq.len() != base.len() {
        return None;
    }
    // position pos gets 2 * sum_{j >= k - pos + 1} n_j
    let mut diffs = Vec::new();
    for (a, b) in seq.0.iter().zip(&base.0) {
        if a.0 != b.0 || a.1 < b.1 || (a.1 - b.1) % 2 != 0 {
            return None;
        }
        diffs.push((a.1 - b.1) / 2);
    }
    let mut n = vec![0u64; k as usize];
    let mut prev = 0u64;
    for pos in 1..=k {
        let cur = diffs[pos as usize - 1];
        if cur < prev {
            return None;
        }
        n[(k - pos) as usize] = cur - prev;
        prev = cur;
    }
    Some(n)
}

// ------------------------------------------------------------ cup coproduct

/// All entrywise splittings `I = J + K` with the sign
/// `(-1)^{sum ((p-1)/2 j_l k_l + delta_l j_l)}`, where `delta` is the epsilon of `K`.
/// The pairs are formal: they are not rewritten into admissible form.
pub fn cup_coproduct_raw(seq: &KSeq, p: u32) -> Vec<(KSeq, KSeq, u32)> {
    let mut out = vec![(KSeq::default(), KSeq::default(), 0u64)];
    for &(e, i) in &seq.0 {
        let mut next = Vec::new();
        for (j, k, exp) in &out {
            for ej in 0..=e {
                for ij in 0..=i {
                    let (ek, ik) = (e - ej, i - ij);
                    let add = if p == 2 { 0 } else { (p as u64 - 1) / 2 * ij * ik + ek as u64 * ij };
                    let mut j2 = j.clone();
                    j2.0.push((ej, ij));
                    let mut k2 = k.clone();
                    k2.0.push((ek, ik));
                    next.push((j2, k2, exp + add));
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|(j, k, exp)| (j, k, scalars::sign(exp, p))).collect()
}

// ------------------------------------------------------------ text form

/// `Q(e1,i1,...)x` for an operation on `x`, `x` or `x_1` for a bare class;
/// factors joined by `*`, the empty monomial as `[]`.
pub fn render_nakaoka(pres: &CoeffPresentation, m: &NakaokaMonomial) -> String {
    if m.gens.is_empty() {
        return "[]".to_string();
    }
    let parts: Vec<String> = m
        .gens
        .iter()
        .map(|g| {
            let name = pres.name(g.class);
            if !g.seq.is_empty() {
                format!("Q{}{name}", g.seq)
            } else if g.twist == 1 {
                format!("{name}_1")
            } else {
                name.to_string()
            }
        })
        .collect();
    parts.join("*")
}

pub fn parse_nakaoka(pres: &CoeffPresentation, text: &str) -> Result<NakaokaMonomial> {
    let p = pres.p;
    let text = text.trim();
    if text == "[]" {
        return Ok(NakaokaMonomial::default());
    }
    let bad = |msg: String| Error::Sequence(msg);
    let mut gens = Vec::new();
    for part in text.split('*').map(str::trim) {
        let (seq, rest) = match part.strip_prefix("Q(") {
            Some(r) => {
                let close = r.find(')').ok_or_else(|| bad(format!("unclosed operation in {part:?}")))?;
                let nums: std::result::Result<Vec<u64>, _> =
                    r[..close].split(',').filter(|s| !s.trim().is_empty()).map(|s| s.trim().parse::<u64>()).collect();
                let nums = nums.map_err(|_| bad(format!("bad entries in {part:?}")))?;
                (KSeq::from_flat(&nums)?, &r[close + 1..])
            }
            None => (KSeq::default(), part),
        };
        let (name, twist) = match rest.strip_suffix("_1") {
            Some(n) => (n, 1u8),
            None => (rest, 0u8),
        };
        let class = pres.index_of(name).ok_or_else(|| bad(format!("unknown class {name:?}")))?;
        let twist = if seq.is_empty() {
            if p == 2 && twist == 1 {
                return Err(bad("twisted classes need an odd prime".into()));
            }
            twist
        } else {
            if twist == 1 {
                return Err(bad(format!("the twist of {part:?} is determined by the operation")));
            }
            if !is_strongly_admissible(&seq, p) {
                return Err(bad(format!("{seq} is not strongly admissible")));
            }
            op_grade(&seq, pres.degree(class) as u64, 0, p)?.2
        };
        gens.push(Generator { seq, class, twist });
    }
    gens.sort();
    if let Some(first) = gens.first() {
        if gens.iter().any(|g| g.twist != first.twist) {
            return Err(bad("factors have different twists".into()));
        }
    }
    Ok(NakaokaMonomial { gens })
}

// ------------------------------------------------------------ pairing

/// `<iota(x_e)^[n], m>`: zero unless every generator of `m` is a bare class;
/// otherwise the product of the component-one pairings, with the Koszul sign of
/// sorting the classes by total degree.
pub fn pair_divided_power(pres: &CoeffPresentation, x: usize, e: u8, n: u64, m: &NakaokaMonomial) -> Result<u32> {
    let p = pres.p;
    let g = nakaoka_grade(pres, m);
    if g.n != n {
        return Err(Error::NotInComponent(n));
    }
    if m.gens.iter().any(|g| !g.seq.is_empty()) {
        return Ok(0);
    }
    if m.gens.iter().any(|g| g.class != x || g.twist != e) {
        return Ok(0);
    }
    // all factors equal: the sorting permutation is trivial, and a repeated
    // odd factor is already zero in the Pontrjagin ring
    let t = (pres.degree(x) as u64 + e as u64) % 2;
    if p > 2 && t == 1 && n > 1 {
        return Ok(0);
    }
    Ok(1 % p)
}

/// The same pairing evaluated through the iterated coproduct of the skyline
/// class: split `iota(x_e)^[n]` into width-one pieces and pair each with the
/// corresponding factor of `m`.
pub fn pair_via_coproduct(alg: &Algebra, x: usize, e: u8, n: u64, m: &NakaokaMonomial) -> Result<u32> {
    let pres = &alg.pres;
    let p = alg.p;
    if nakaoka_grade(pres, m).n != n {
        return Err(Error::NotInComponent(n));
    }
    if m.gens.iter().any(|g| !g.seq.is_empty()) {
        // a nonempty operation lives in component p^r and the component p^r
        // piece of iota(x)^[n] is iota(x)^[p^r], which pairs to zero with it
        return Ok(0);
    }
    let col = Column { level: 0, hollow: vec![], solid: None, dec: Decoration { class: x, sign: e }, mult: n };
    let y = alg.canonicalize(vec![col])?;
    let mut acc = y.map_linear(|mono| LinComb::single(p, vec![mono.clone()], 1));
    for _ in 1..n {
        let mut next: LinComb<Vec<Monomial>> = LinComb::zero(p);
        for (parts, c) in acc.iter() {
            let (last, init) = parts.split_last().unwrap();
            let last_el = LinComb::single(p, last.clone(), 1);
            let split = crate::hopf::coproduct_component(alg, &last_el, 1, alg.grade(last).n - 1);
            for ((a, b), s) in split.iter() {
                // Koszul sign of moving the pairing past earlier factors is
                // collected at evaluation time below
                let mut v = init.to_vec();
                v.push(a.clone());
                v.push(b.clone());
                next.add_term(v, scalars::mul(c, s, p));
            }
        }
        acc = next;
    }
    let mut total = 0u32;
    let alphas: Vec<(usize, u8)> = m.gens.iter().map(|g| (g.class, g.twist)).collect();
    for (parts, c) in acc.iter() {
        // <y_1 (x) ... (x) y_n, a_1 * ... * a_n> pairs y_i with a_i
        let mut val = c;
        let mut ok = true;
        for (piece, &(cls, tw)) in parts.iter().zip(&alphas) {
            let col = &piece.columns[0];
            if piece.columns.len() != 1 || col.level != 0 || col.mult != 1 || col.dec != (Decoration { class: cls, sign: tw }) {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        // sign of pairing a tensor with a tensor: (-1)^{sum_{i<j} t(y_j) t(a_i)}
        let ts: Vec<u32> = parts.iter().map(|m| alg.total(m)).collect();
        let mut exp = 0u64;
        for i in 0..ts.len() {
            for j in (i + 1)..ts.len() {
                exp += (ts[i] * ts[j]) as u64;
            }
        }
        val = scalars::mul(val, scalars::sign(exp, p), p);
        total = scalars::add(total, val, p);
    }
    Ok(total)
}

// ------------------------------------------------------------ dimensions

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DimRow {
    pub n: u64,
    pub d: u64,
    pub e: u8,
    pub skyline: usize,
    pub nakaoka: usize,
}

impl DimRow {
    pub fn agrees(&self) -> bool {
        self.skyline == self.nakaoka
    }
}

/// Skyline and Nakaoka counts for every `n <= n_max`, `d <= d_max`, and sign.
pub fn dimension_report(alg: &Algebra, n_max: u64, d_max: u64) -> Vec<DimRow> {
    let signs: &[u8] = if alg.p == 2 { &[0] } else { &[0, 1] };
    let mut rows = Vec::new();
    for n in 0..=n_max {
        for d in 0..=d_max {
            for &e in signs {
                rows.push(DimRow {
                    n,
                    d,
                    e,
                    skyline: alg.count_skyline(n, d, e),
                    nakaoka: enumerate_nakaoka(&alg.pres, n, d, e).len(),
                });
            }
        }
    }
    rows
}
