//! 3-CNF instances with significant clause and literal order.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("literal refers to variable {variable}, but only {num_vars} are declared")]
    VariableOutOfRange { variable: usize, num_vars: usize },
    #[error("variable indices start at 1")]
    ZeroVariable,
}

/// A variable `x_i` (1-based) or its negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub variable: usize,
    pub negated: bool,
}

impl Literal {
    pub fn positive(variable: usize) -> Self {
        Self {
            variable,
            negated: false,
        }
    }

    pub fn negative(variable: usize) -> Self {
        Self {
            variable,
            negated: true,
        }
    }

    /// DIMACS encoding: `i` for `x_i`, `-i` for its negation.
    pub fn from_dimacs(value: i64) -> Result<Self, CnfError> {
        if value == 0 {
            return Err(CnfError::ZeroVariable);
        }
        Ok(Self {
            variable: value.unsigned_abs() as usize,
            negated: value < 0,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.variable as i64;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn complement(self) -> Self {
        Self {
            variable: self.variable,
            negated: !self.negated,
        }
    }

    /// Truth value of the literal under the value of its variable.
    pub fn eval(self, variable_value: bool) -> bool {
        variable_value != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.variable)
        } else {
            write!(f, "x{}", self.variable)
        }
    }
}

pub type Clause = [Literal; 3];

/// An ordered list of ordered 3-literal clauses over `x_1..x_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CnfInstance {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl CnfInstance {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        for lit in clauses.iter().flatten() {
            if lit.variable == 0 {
                return Err(CnfError::ZeroVariable);
            }
            if lit.variable > num_vars {
                return Err(CnfError::VariableOutOfRange {
                    variable: lit.variable,
                    num_vars,
                });
            }
        }
        Ok(Self { num_vars, clauses })
    }

    /// Convenience constructor from DIMACS-style integer triples.
    pub fn from_dimacs(num_vars: usize, clauses: &[[i64; 3]]) -> Result<Self, CnfError> {
        let clauses = clauses
            .iter()
            .map(|c| {
                Ok([
                    Literal::from_dimacs(c[0])?,
                    Literal::from_dimacs(c[1])?,
                    Literal::from_dimacs(c[2])?,
                ])
            })
            .collect::<Result<Vec<_>, CnfError>>()?;
        Self::new(num_vars, clauses)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// The literals `ℓ_1 .. ℓ_3k` in clause order.
    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.clauses.iter().flatten().copied()
    }

    /// Number of positions at which `lit` occurs.
    pub fn occurrences(&self, lit: Literal) -> usize {
        self.literals().filter(|&l| l == lit).count()
    }
}
