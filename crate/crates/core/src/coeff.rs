//! Coefficient algebras `H*(X; F_p)` given by a basis and a multiplication table.
//!
//! A presentation is truncated at `max_degree`: the basis lists every class in
//! degrees `<= max_degree`, and products that would land above it are reported
//! as unknown instead of being silently dropped.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{self, is_prime, LinComb};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDoc {
    pub name: String,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductDoc {
    pub lhs: String,
    pub rhs: String,
    pub value: Vec<(i64, String)>,
}

/// On-disk JSON form of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub p: u32,
    pub max_degree: u32,
    pub basis: Vec<BasisDoc>,
    pub unit: String,
    #[serde(default)]
    pub products: Vec<ProductDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub degree: u32,
}

/// A validated finite-type graded-commutative algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffPresentation {
    pub p: u32,
    pub max_degree: u32,
    pub basis: Vec<BasisElement>,
    pub unit: usize,
    pub connected: bool,
    table: BTreeMap<(usize, usize), LinComb<usize>>,
}

/// A maximal chain `x, x^p, x^{p^2}, ...` of basis elements (up to scalars).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusChain {
    pub root: usize,
    pub elements: Vec<usize>,
    /// `min{n : x^{p^n} = 0}`; `None` when the powers never vanish.
    pub height: Option<u32>,
}

impl CoeffPresentation {
    /// The cohomology of a point.
    pub fn point(p: u32) -> CoeffPresentation {
        let doc = PresentationDoc {
            p,
            max_degree: u32::MAX / 4,
            basis: vec![BasisDoc { name: "1".into(), degree: 0 }],
            unit: "1".into(),
            products: vec![],
        };
        CoeffPresentation::from_doc(&doc).expect("point presentation is valid")
    }

    /// `F_p[x]/(x^height)` with `|x| = degree`, e.g. `H*(RP^2; F_2)` for `(2, 1, 3)`.
    pub fn truncated_polynomial(p: u32, degree: u32, height: u32, max_degree: u32) -> Result<CoeffPresentation> {
        let name = |k: u32| match k {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x{k}"),
        };
        let basis = (0..height).map(|k| BasisDoc { name: name(k), degree: k * degree }).collect();
        let mut products = Vec::new();
        for a in 1..height {
            for b in 1..height {
                if a + b < height {
                    products.push(ProductDoc { lhs: name(a), rhs: name(b), value: vec![(1, name(a + b))] });
                }
            }
        }
        CoeffPresentation::from_doc(&PresentationDoc { p, max_degree, basis, unit: "1".into(), products })
    }

    /// Exterior algebra on one generator `y` of the given degree.
    pub fn exterior(p: u32, degree: u32, max_degree: u32) -> Result<CoeffPresentation> {
        CoeffPresentation::from_doc(&PresentationDoc {
            p,
            max_degree,
            basis: vec![BasisDoc { name: "1".into(), degree: 0 }, BasisDoc { name: "y".into(), degree }],
            unit: "1".into(),
            products: vec![],
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.basis[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn from_doc(doc: &PresentationDoc) -> Result<CoeffPresentation> {
        let mut errs = Vec::new();
        let p = doc.p;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut index = HashMap::new();
        for (i, b) in doc.basis.iter().enumerate() {
            if b.name.is_empty() || !b.name.chars().all(|c| c.is_ascii_alphanumeric()) {
                errs.push(format!("basis name {:?} is not an ASCII identifier", b.name));
            }
            if index.insert(b.name.clone(), i).is_some() {
                errs.push(format!("duplicate basis name {}", b.name));
            }
            if b.degree > doc.max_degree {
                errs.push(format!("{} has degree above max_degree", b.name));
            }
        }
        let unit = match index.get(&doc.unit) {
            Some(&u) => u,
            None => {
                errs.push(format!("missing unit {}", doc.unit));
                return Err(Error::Presentation(errs));
            }
        };
        if doc.basis[unit].degree != 0 {
            errs.push("unit must have degree 0".into());
        }
        let deg = |i: usize| doc.basis[i].degree;
        let mut table: BTreeMap<(usize, usize), LinComb<usize>> = BTreeMap::new();
        for prod in &doc.products {
            let (Some(&i), Some(&j)) = (index.get(&prod.lhs), index.get(&prod.rhs)) else {
                errs.push(format!("product {}*{} names an unknown class", prod.lhs, prod.rhs));
                continue;
            };
            let mut value = LinComb::zero(p);
            for (c, name) in &prod.value {
                match index.get(name) {
                    Some(&k) => {
                        if deg(k) != deg(i) + deg(j) {
                            errs.push(format!("{}*{} is not graded: {} has degree {}", prod.lhs, prod.rhs, name, deg(k)));
                        }
                        value.add_term(k, scalars::reduce(*c, p));
                    }
                    None => errs.push(format!("product value names unknown class {name}")),
                }
            }
            if deg(i) + deg(j) > doc.max_degree && !value.is_zero() {
                errs.push(format!("{}*{} lies above max_degree", prod.lhs, prod.rhs));
            }
            if table.insert((i, j), value).is_some() {
                errs.push(format!("product {}*{} listed twice", prod.lhs, prod.rhs));
            }
        }
        let n = doc.basis.len();
        // unit products default to the identity
        for i in 0..n {
            for (a, b) in [(unit, i), (i, unit)] {
                let id = LinComb::single(p, i, 1);
                match table.get(&(a, b)) {
                    Some(v) if *v != id => errs.push(format!("unit law fails on {}", doc.basis[i].name)),
                    Some(_) => {}
                    None => {
                        table.insert((a, b), id);
                    }
                }
            }
        }
        // reverse orders default to the graded-commutative value
        let listed: Vec<((usize, usize), LinComb<usize>)> = table.iter().map(|(k, v)| (*k, v.clone())).collect();
        for ((i, j), v) in listed {
            let s = scalars::sign(deg(i) as u64 * deg(j) as u64, p);
            let expect = v.scaled(s);
            match table.get(&(j, i)) {
                Some(w) if *w != expect => errs.push(format!(
                    "{}*{} is not graded-commutative with {}*{}",
                    doc.basis[i].name, doc.basis[j].name, doc.basis[j].name, doc.basis[i].name
                )),
                Some(_) => {}
                None => {
                    table.insert((j, i), expect);
                }
            }
        }
        table.retain(|_, v| !v.is_zero());
        let degree_zero = (0..n).filter(|&i| deg(i) == 0).count();
        let mut pres = CoeffPresentation {
            p,
            max_degree: doc.max_degree,
            basis: doc.basis.iter().map(|b| BasisElement { name: b.name.clone(), degree: b.degree }).collect(),
            unit,
            connected: degree_zero == 1,
            table,
        };
        if p > 2 {
            for i in 0..n {
                if deg(i) % 2 == 1 && !pres.table.get(&(i, i)).map_or(true, |v| v.is_zero()) {
                    errs.push(format!("odd class {} squares to a nonzero class", doc.basis[i].name));
                }
            }
        }
        // associativity inside the truncation
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if deg(i) + deg(j) + deg(k) > doc.max_degree {
                        continue;
                    }
                    let left = pres.multiply(&pres.multiply_basis_unchecked(i, j), &LinComb::single(p, k, 1));
                    let right = pres.multiply(&LinComb::single(p, i, 1), &pres.multiply_basis_unchecked(j, k));
                    if left != right {
                        errs.push(format!(
                            "associativity fails on ({}, {}, {})",
                            doc.basis[i].name, doc.basis[j].name, doc.basis[k].name
                        ));
                    }
                }
            }
        }
        if !errs.is_empty() {
            return Err(Error::Presentation(errs));
        }
        pres.table.retain(|_, v| !v.is_zero());
        Ok(pres)
    }

    pub fn load(text: &str) -> Result<CoeffPresentation> {
        let doc: PresentationDoc =
            serde_json::from_str(text).map_err(|e| Error::Presentation(vec![format!("malformed JSON: {e}")]))?;
        CoeffPresentation::from_doc(&doc)
    }

    pub fn to_doc(&self) -> PresentationDoc {
        let products = self
            .table
            .iter()
            .filter(|((i, j), _)| *i != self.unit && *j != self.unit)
            .map(|((i, j), v)| ProductDoc {
                lhs: self.basis[*i].name.clone(),
                rhs: self.basis[*j].name.clone(),
                value: v.iter().map(|(k, c)| (c as i64, self.basis[*k].name.clone())).collect(),
            })
            .collect();
        PresentationDoc {
            p: self.p,
            max_degree: self.max_degree,
            basis: self.basis.iter().map(|b| BasisDoc { name: b.name.clone(), degree: b.degree }).collect(),
            unit: self.basis[self.unit].name.clone(),
            products,
        }
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("presentation serializes")
    }

    fn multiply_basis_unchecked(&self, i: usize, j: usize) -> LinComb<usize> {
        self.table.get(&(i, j)).cloned().unwrap_or_else(|| LinComb::zero(self.p))
    }

    /// Structure-constant expansion of `b_i * b_j`.
    pub fn multiply_basis(&self, i: usize, j: usize) -> Result<LinComb<usize>> {
        let d = self.degree(i) + self.degree(j);
        if d > self.max_degree {
            return Err(Error::Truncation { degree: d, max: self.max_degree });
        }
        Ok(self.multiply_basis_unchecked(i, j))
    }

    fn multiply(&self, a: &LinComb<usize>, b: &LinComb<usize>) -> LinComb<usize> {
        let mut r = LinComb::zero(self.p);
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                r.add_scaled(&self.multiply_basis_unchecked(*i, *j), scalars::mul(x, y, self.p));
            }
        }
        r
    }

    /// Product of two combinations, failing when a term would exceed the truncation.
    pub fn multiply_checked(&self, a: &LinComb<usize>, b: &LinComb<usize>) -> Result<LinComb<usize>> {
        let mut r = LinComb::zero(self.p);
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                r.add_scaled(&self.multiply_basis(*i, *j)?, scalars::mul(x, y, self.p));
            }
        }
        Ok(r)
    }

    /// `b_i^k`, or an error if the power leaves the truncated range.
    pub fn power_basis(&self, i: usize, k: u32) -> Result<LinComb<usize>> {
        let d = self.degree(i) as u64 * k as u64;
        if d > self.max_degree as u64 {
            return Err(Error::Truncation { degree: d.min(u32::MAX as u64) as u32, max: self.max_degree });
        }
        let mut r = LinComb::single(self.p, self.unit, 1);
        for _ in 0..k {
            r = self.multiply(&r, &LinComb::single(self.p, i, 1));
        }
        Ok(r)
    }

    /// If `b_i^p` is a multiple of a single basis element, return it.
    fn frobenius_image(&self, i: usize) -> Result<Option<usize>> {
        if i == self.unit {
            return Ok(Some(self.unit));
        }
        let v = self.power_basis(i, self.p)?;
        match v.len() {
            0 => Ok(None),
            1 => Ok(v.keys().next().copied()),
            _ => Err(Error::NotFrobeniusAdapted(format!("{}^{} is not a multiple of a basis element", self.name(i), self.p))),
        }
    }

    /// Decompose the basis into Frobenius chains.
    pub fn frobenius_adapted(&self) -> Result<Vec<FrobeniusChain>> {
        if !self.connected {
            return Err(Error::NotConnected);
        }
        let n = self.dim();
        let mut image = vec![None; n];
        let mut preimages = vec![Vec::new(); n];
        for i in 0..n {
            image[i] = self.frobenius_image(i)?;
            if let Some(j) = image[i] {
                if j != i {
                    preimages[j].push(i);
                }
            }
        }
        for j in 0..n {
            if preimages[j].len() > 1 {
                let names: Vec<&str> = preimages[j].iter().map(|&i| self.name(i)).collect();
                return Err(Error::NotFrobeniusAdapted(format!(
                    "{} is the p-th power of several basis elements ({})",
                    self.name(j),
                    names.join(", ")
                )));
            }
        }
        let mut chains = Vec::new();
        for root in 0..n {
            if !preimages[root].is_empty() {
                continue;
            }
            let mut elements = vec![root];
            let mut height = None;
            if root != self.unit {
                let mut cur = root;
                loop {
                    match image[cur] {
                        Some(next) => {
                            elements.push(next);
                            cur = next;
                        }
                        None => {
                            height = Some(elements.len() as u32);
                            break;
                        }
                    }
                }
            }
            chains.push(FrobeniusChain { root, elements, height });
        }
        Ok(chains)
    }
}
