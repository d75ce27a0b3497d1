use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};

/// One fugacity: a name, its exponent lattice `(1/denominator)·ℤ`, and a finite exponent window.
///
/// Bounds are stored in lattice units, i.e. already multiplied by the denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    name: String,
    denominator: i64,
    min: i64,
    max: i64,
}

impl Variable {
    /// Integer-lattice variable with exponents in `min..=max`.
    pub fn new(name: impl Into<String>, min: i64, max: i64) -> Result<Self> {
        Self::with_denominator(name, 1, Rational64::from_integer(min), Rational64::from_integer(max))
    }

    pub fn with_denominator(
        name: impl Into<String>,
        denominator: i64,
        min: Rational64,
        max: Rational64,
    ) -> Result<Self> {
        let name = name.into();
        if denominator != 1 && denominator != 2 {
            return Err(Error::InvalidSpec(format!("lattice denominator of `{name}` must be 1 or 2")));
        }
        if name.is_empty() {
            return Err(Error::InvalidSpec("empty variable name".into()));
        }
        let scale = |x: Rational64| -> Result<i64> {
            let s = x * Rational64::from_integer(denominator);
            if !s.is_integer() {
                return Err(Error::InvalidSpec(format!("bound {x} of `{name}` is off its lattice")));
            }
            Ok(s.to_integer())
        };
        let (lo, hi) = (scale(min)?, scale(max)?);
        if lo > hi {
            return Err(Error::InvalidSpec(format!("min > max for `{name}`")));
        }
        Ok(Self { name, denominator, min: lo, max: hi })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn min_exponent(&self) -> Rational64 {
        Rational64::new(self.min, self.denominator)
    }

    pub fn max_exponent(&self) -> Rational64 {
        Rational64::new(self.max, self.denominator)
    }

    /// Scaled (lattice-unit) form of an exponent, if it lies on the lattice.
    pub fn scale(&self, exponent: Rational64) -> Option<i64> {
        let s = exponent * Rational64::from_integer(self.denominator);
        s.is_integer().then(|| s.to_integer())
    }
}

/// Upper bound on the total exponent of a designated subset of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModeBound {
    pub variables: Vec<String>,
    pub max: Rational64,
}

/// Ordered list of fugacities plus an optional total mode-degree bound.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FugacitySpec {
    variables: Vec<Variable>,
    mode: Option<ModeBound>,
    // indices into `variables`, paired with 2/denominator so that mode degree is computed in halves
    mode_weights: Vec<(usize, i64)>,
    mode_max_twice: i64,
}

impl FugacitySpec {
    pub fn new(variables: Vec<Variable>, mode: Option<ModeBound>) -> Result<Self> {
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::InvalidSpec(format!("duplicate variable `{}`", v.name)));
            }
        }
        let mut mode_weights = Vec::new();
        let mut mode_max_twice = 0;
        if let Some(m) = &mode {
            for name in &m.variables {
                let idx = variables
                    .iter()
                    .position(|v| &v.name == name)
                    .ok_or_else(|| Error::InvalidSpec(format!("mode variable `{name}` not declared")))?;
                mode_weights.push((idx, 2 / variables[idx].denominator));
            }
            mode_max_twice = (m.max * Rational64::from_integer(2)).floor().to_integer();
        }
        Ok(Self { variables, mode, mode_weights, mode_max_twice })
    }

    pub fn builder() -> SpecBuilder {
        SpecBuilder::default()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn mode_bound(&self) -> Option<&ModeBound> {
        self.mode.as_ref()
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::MissingVariable(name.to_string()))
    }

    pub fn variable(&self, name: &str) -> Option<&Variable> {
        self.variables.iter().find(|v| v.name == name)
    }

    /// Twice the total mode degree of a scaled exponent vector.
    pub(crate) fn mode_degree_twice(&self, exps: &[i32]) -> i64 {
        self.mode_weights.iter().map(|&(i, w)| exps[i] as i64 * w).sum()
    }

    pub(crate) fn contains(&self, exps: &[i32]) -> bool {
        for (v, &e) in self.variables.iter().zip(exps) {
            let e = e as i64;
            if e < v.min || e > v.max {
                return false;
            }
        }
        self.mode.is_none() || self.mode_degree_twice(exps) <= self.mode_max_twice
    }

    /// Scaled exponent vector for named exponents; unnamed variables get 0.
    pub(crate) fn scaled_exponents(&self, exps: &[(&str, Rational64)]) -> Result<Vec<i32>> {
        let mut out = vec![0i32; self.variables.len()];
        for (name, e) in exps {
            let i = self.require(name)?;
            let v = &self.variables[i];
            let s = v.scale(*e).ok_or_else(|| Error::LatticeViolation {
                variable: name.to_string(),
                exponent: e.to_string(),
            })?;
            out[i] += s as i32;
        }
        Ok(out)
    }

    pub(crate) fn exponent_of(&self, exps: &[i32], i: usize) -> Rational64 {
        Rational64::new(exps[i] as i64, self.variables[i].denominator)
    }

    /// Sum over variables of the window widths plus the mode window, in lattice units.
    pub(crate) fn span(&self) -> i64 {
        let vars: i64 = self.variables.iter().map(|v| v.max - v.min).sum();
        vars + self.mode_max_twice.max(0)
    }

    /// Same spec with one variable's window replaced.
    pub fn with_window(&self, name: &str, min: Rational64, max: Rational64) -> Result<Self> {
        let i = self.require(name)?;
        let mut vars = self.variables.clone();
        let d = vars[i].denominator;
        vars[i] = Variable::with_denominator(name, d, min, max)?;
        Self::new(vars, self.mode.clone())
    }

    /// Spec whose window for `name` is the union of the current window and `[min, max]`.
    pub fn widened(&self, name: &str, min: Rational64, max: Rational64) -> Result<Self> {
        let v = self.variable(name).ok_or_else(|| Error::MissingVariable(name.into()))?;
        let lo = v.min_exponent().min(min);
        let hi = v.max_exponent().max(max);
        self.with_window(name, lo, hi)
    }

    /// Largest exponent the mode bound allows for a single variable, if it is a mode variable.
    pub fn mode_cap(&self, name: &str) -> Option<Rational64> {
        let m = self.mode.as_ref()?;
        m.variables.iter().any(|v| v == name).then_some(m.max)
    }

    /// Effective maximum exponent of a variable, combining its window and the mode bound.
    pub fn effective_max(&self, name: &str) -> Option<Rational64> {
        let v = self.variable(name)?;
        let mut hi = v.max_exponent();
        if let Some(cap) = self.mode_cap(name) {
            if cap < hi {
                hi = cap;
            }
        }
        Some(hi)
    }
}

#[derive(Default)]
pub struct SpecBuilder {
    vars: Vec<Result<Variable>>,
    mode: Option<ModeBound>,
}

impl SpecBuilder {
    pub fn var(mut self, name: &str, min: i64, max: i64) -> Self {
        self.vars.push(Variable::new(name, min, max));
        self
    }

    pub fn half_var(mut self, name: &str, min: Rational64, max: Rational64) -> Self {
        self.vars.push(Variable::with_denominator(name, 2, min, max));
        self
    }

    pub fn mode(mut self, variables: &[&str], max: i64) -> Self {
        self.mode = Some(ModeBound {
            variables: variables.iter().map(|s| s.to_string()).collect(),
            max: Rational64::from_integer(max),
        });
        self
    }

    pub fn build(self) -> Result<FugacitySpec> {
        let vars = self.vars.into_iter().collect::<Result<Vec<_>>>()?;
        FugacitySpec::new(vars, self.mode)
    }
}

impl Default for ModeBound {
    fn default() -> Self {
        Self { variables: Vec::new(), max: Rational64::zero() }
    }
}
