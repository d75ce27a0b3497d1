//! Small dense rational matrices for flavor Lie algebras.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q, Q};

/// `n × n` matrix; entry `(i, j)` is `X^i_j` (row `i`, column `j`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlavorMatrix {
    n: usize,
    data: Vec<Q>,
}

impl FlavorMatrix {
    pub fn zero(n: usize) -> Self {
        Self { n, data: vec![Q::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    /// Matrix unit `E_{ij}`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.set(i, j, Q::one());
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("flavor matrix must be square".into()));
        }
        Ok(Self { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        self.data[i * self.n + j] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self { n: self.n, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `[X, Y] = XY − YX`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self).scale(&-Q::one()))
    }

    pub fn trace(&self) -> Q {
        (0..self.n).map(|i| self.get(i, i).clone()).fold(Q::zero(), |a, b| a + b)
    }

    /// `X − (Tr X / n)·1`.
    pub fn traceless_part(&self) -> Self {
        let t = self.trace() / Q::from_integer((self.n as i64).into());
        self.add(&Self::identity(self.n).scale(&-t))
    }

    /// Coordinates in the matrix-unit basis `E_{00}, E_{01}, …` (row-major).
    pub fn coordinates(&self) -> &[Q] {
        &self.data
    }

    /// Parse a `gl₂` name (`E`, `F`, `H`, `I`, `E11`, `E12`, `E21`, `E22`) or explicit rows
    /// `"a,b;c,d"` of any square size.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let named = match t {
            "E" | "E12" => Some(Self::unit(2, 0, 1)),
            "F" | "E21" => Some(Self::unit(2, 1, 0)),
            "E11" => Some(Self::unit(2, 0, 0)),
            "E22" => Some(Self::unit(2, 1, 1)),
            "H" => Some(Self::unit(2, 0, 0).add(&Self::unit(2, 1, 1).scale(&-Q::one()))),
            "I" => Some(Self::identity(2)),
            _ => None,
        };
        if let Some(m) = named {
            return Ok(m);
        }
        let rows = t
            .split(';')
            .map(|r| r.split(',').map(parse_q).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::Parse(format!("bad matrix `{t}`; use a gl2 name or rows like `1,0;0,-1`")))?;
        Self::from_rows(rows)
    }
}

impl fmt::Display for FlavorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| (0..self.n).map(|j| format_q(self.get(i, j))).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// Symmetric trilinear form on `gl_n`, stored on the matrix-unit basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicInvariant {
    n: usize,
    values: Vec<Q>,
}

impl CubicInvariant {
    /// Build from a function on ordered basis triples (indices into the `n²` matrix units).
    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize) -> Q) -> Self {
        let d = n * n;
        let mut values = Vec::with_capacity(d * d * d);
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    values.push(f(a, b, c));
                }
            }
        }
        Self { n, values }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, |_, _, _| Q::zero())
    }

    /// `½ Tr(X{Y,Z})`, the symmetrized trace in the defining representation.
    pub fn symmetrized_trace(n: usize) -> Self {
        let unit = |a: usize| FlavorMatrix::unit(n, a / n, a % n);
        Self::from_fn(n, |a, b, c| symmetric_trace(&unit(a), &unit(b), &unit(c)))
    }

    /// Symmetrized trace of the traceless projections; the identity is central for it.
    pub fn traceless_trace(n: usize) -> Self {
        let unit = |a: usize| FlavorMatrix::unit(n, a / n, a % n).traceless_part();
        Self::from_fn(n, |a, b, c| symmetric_trace(&unit(a), &unit(b), &unit(c)))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn is_symmetric(&self) -> bool {
        let d = self.n * self.n;
        let at = |a: usize, b: usize, c: usize| &self.values[(a * d + b) * d + c];
        (0..d).all(|a| {
            (0..d).all(|b| (0..d).all(|c| at(a, b, c) == at(b, a, c) && at(a, b, c) == at(a, c, b)))
        })
    }

    /// `θ(X, Y, Z)` by trilinear expansion.
    pub fn evaluate(&self, x: &FlavorMatrix, y: &FlavorMatrix, z: &FlavorMatrix) -> Q {
        let d = self.n * self.n;
        let (cx, cy, cz) = (x.coordinates(), y.coordinates(), z.coordinates());
        let mut total = Q::zero();
        for a in (0..d).filter(|&a| !cx[a].is_zero()) {
            for b in (0..d).filter(|&b| !cy[b].is_zero()) {
                let ab = &cx[a] * &cy[b];
                for c in (0..d).filter(|&c| !cz[c].is_zero()) {
                    total += &ab * &cz[c] * &self.values[(a * d + b) * d + c];
                }
            }
        }
        total
    }
}

fn symmetric_trace(x: &FlavorMatrix, y: &FlavorMatrix, z: &FlavorMatrix) -> Q {
    let yz = y.mul(z).add(&z.mul(y));
    x.mul(&yz).trace() / Q::from_integer(2.into())
}
