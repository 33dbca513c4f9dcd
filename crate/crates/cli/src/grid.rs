//! Parameter grids: range parsing and expansion into family specs.

use detident_core::families::SizeGuard;
use detident_core::random::{random_assignment, seeded_rng};
use detident_core::{Assignment, FamilyKind, FamilySpec, Rational};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("bad range {input:?}: {reason}")]
    Range { input: String, reason: String },
    #[error("{0}")]
    Flag(String),
}

/// Parses `3`, `1..4` (inclusive), `1..=4`, or comma-separated mixes of
/// those, e.g. `1..3,6`. Duplicates are dropped; order is kept.
pub fn parse_range(input: &str) -> Result<Vec<usize>, GridError> {
    let bad = |reason: &str| GridError::Range {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let mut out: Vec<usize> = Vec::new();
    for part in input.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err(bad("empty item"));
        }
        let values = match part.split_once("..") {
            Some((lo, hi)) => {
                let hi = hi.strip_prefix('=').unwrap_or(hi);
                let lo: usize = lo.trim().parse().map_err(|_| bad("expected an integer"))?;
                let hi: usize = hi.trim().parse().map_err(|_| bad("expected an integer"))?;
                if lo > hi {
                    return Err(bad("descending range"));
                }
                (lo..=hi).collect()
            }
            None => vec![part.parse().map_err(|_| bad("expected an integer"))?],
        };
        for v in values {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// How the variables are filled in at each grid point.
#[derive(Debug, Clone, PartialEq)]
pub enum ValueMode {
    Symbolic,
    /// The same values at every point; points whose variable count differs
    /// are skipped.
    Explicit(Vec<Rational>),
    /// `trials` independent draws of distinct nonzero rationals per point.
    Random { seed: u64, trials: usize },
}

/// How `n` is chosen at each point.
#[derive(Debug, Clone, PartialEq)]
pub enum NChoice {
    Absolute(Vec<usize>),
    /// `n = l + offset` for binomial-power, `n = m + offset` for Pascal.
    Offset(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub kind: FamilyKind,
    pub m: Vec<usize>,
    pub n: Option<NChoice>,
    pub l: Option<Vec<usize>>,
    pub values: ValueMode,
    pub guard: SizeGuard,
}

/// One expanded point: a runnable spec, or the reason it was skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    pub trial: usize,
    pub params: String,
    pub spec: Result<FamilySpec, String>,
}

impl GridSpec {
    /// Rejects flags that do not apply to the family.
    pub fn validate(&self) -> Result<(), GridError> {
        let flag = |s: &str| Err(GridError::Flag(s.to_string()));
        if self.m.is_empty() {
            return flag("--m is required");
        }
        match self.kind {
            FamilyKind::PowerDerivative | FamilyKind::PowerDerivativeShifted => {
                if self.n.is_some() || self.l.is_some() {
                    return flag(&format!("--n, --n-offset and --l do not apply to {}", self.kind));
                }
            }
            FamilyKind::BinomialPower => {
                if self.n.is_none() || self.l.is_none() {
                    return flag("binomial-power needs --l and one of --n, --n-offset");
                }
            }
            FamilyKind::BinomialPascal => {
                if self.l.is_some() {
                    return flag("--l does not apply to binomial-pascal");
                }
                if self.n.is_none() {
                    return flag("binomial-pascal needs one of --n, --n-offset");
                }
            }
        }
        Ok(())
    }

    /// Expands the grid in the order m, l, n, trial. Random values are
    /// drawn from one stream in that order, so the result depends only on
    /// the grid and the seed.
    pub fn points(&self) -> Vec<GridPoint> {
        let mut rng = match self.values {
            ValueMode::Random { seed, .. } => Some(seeded_rng(seed)),
            _ => None,
        };
        let trials = match (&self.values, self.kind) {
            (_, FamilyKind::BinomialPascal) => 1,
            (ValueMode::Random { trials, .. }, _) => *trials,
            _ => 1,
        };
        let mut out = Vec::new();
        for &m in &self.m {
            let ls: Vec<Option<usize>> = match &self.l {
                Some(ls) => ls.iter().map(|&l| Some(l)).collect(),
                None => vec![None],
            };
            for l in ls {
                let base = l.unwrap_or(m);
                let ns: Vec<Option<usize>> = match &self.n {
                    Some(NChoice::Absolute(ns)) => ns.iter().map(|&n| Some(n)).collect(),
                    Some(NChoice::Offset(offs)) => offs.iter().map(|&o| Some(base + o)).collect(),
                    None => vec![None],
                };
                for n in ns {
                    for trial in 0..trials {
                        let shape = FamilySpec {
                            kind: self.kind,
                            m,
                            n,
                            l,
                            assignment: Assignment::Symbolic,
                        };
                        let params = params_label(&shape);
                        let spec = self.resolve(shape, rng.as_mut());
                        out.push(GridPoint {
                            index: out.len(),
                            trial,
                            params,
                            spec,
                        });
                    }
                }
            }
        }
        out
    }

    fn resolve(&self, shape: FamilySpec, rng: Option<&mut detident_core::random::DetRng>) -> Result<FamilySpec, String> {
        shape.validate().map_err(|e| e.to_string())?;
        let spec = if shape.kind == FamilyKind::BinomialPascal {
            shape
        } else {
            let count = shape.variable_count();
            let assignment = match &self.values {
                ValueMode::Symbolic => Assignment::Symbolic,
                ValueMode::Explicit(xs) if xs.len() == count => Assignment::Numeric(xs.clone()),
                ValueMode::Explicit(xs) => {
                    return Err(format!("{} values given, {} variables needed", xs.len(), count));
                }
                ValueMode::Random { .. } => {
                    Assignment::Numeric(random_assignment(rng.expect("random mode has a stream"), count, true))
                }
            };
            shape.with_assignment(assignment)
        };
        self.guard.check(&spec).map_err(|e| e.to_string())?;
        Ok(spec)
    }
}

fn params_label(shape: &FamilySpec) -> String {
    let mut s = format!("m={}", shape.m);
    if let Some(n) = shape.n {
        s.push_str(&format!(" n={n}"));
    }
    if let Some(l) = shape.l {
        s.push_str(&format!(" l={l}"));
    }
    s
}
