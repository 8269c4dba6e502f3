//! Base representation language: ground literals with classical negation and
//! consistent evidence sets.
//!
//! Everything downstream (arguments, structures, decision rules) is built from
//! [`Literal`] values. A literal is a predicate name applied to constant
//! symbols, with a single negation flag; double negation is never stored.
//! [`EvidenceSet`] is the consistent set of facts the reasoner currently holds.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Errors raised by language-level constructors and parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    /// An evidence set contained a literal together with its complement.
    #[error("inconsistent evidence: contains both {first} and {second}")]
    Inconsistent { first: Literal, second: Literal },
    /// A literal could not be parsed from text.
    #[error("cannot parse literal {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// A ground literal: predicate applied to constants, possibly negated.
///
/// Ordering is canonical (predicate, then args, then sign) so that every
/// set iteration in the crate is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    predicate: String,
    args: Vec<String>,
    negated: bool,
}

impl Literal {
    /// Builds a positive literal `pred(args...)`.
    ///
    /// Panics if the predicate name is empty; names are caller-controlled
    /// constants, never runtime data.
    pub fn positive(
        predicate: impl Into<String>,
        args: impl IntoIterator<Item = impl Into<String>>,
    ) -> Self {
        let predicate = predicate.into();
        assert!(!predicate.is_empty(), "predicate name must be non-empty");
        Literal {
            predicate,
            args: args.into_iter().map(Into::into).collect(),
            negated: false,
        }
    }

    /// Builds a negative literal `~pred(args...)`.
    pub fn negative(
        predicate: impl Into<String>,
        args: impl IntoIterator<Item = impl Into<String>>,
    ) -> Self {
        let mut l = Literal::positive(predicate, args);
        l.negated = true;
        l
    }

    /// The complement: same predicate and args, opposite sign.
    pub fn complement(&self) -> Literal {
        Literal {
            predicate: self.predicate.clone(),
            args: self.args.clone(),
            negated: !self.negated,
        }
    }

    pub fn predicate(&self) -> &str {
        &self.predicate
    }

    pub fn args(&self) -> &[String] {
        &self.args
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~")?;
        }
        write!(f, "{}", self.predicate)?;
        if !self.args.is_empty() {
            write!(f, "({})", self.args.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for Literal {
    type Err = LangError;

    /// Parses the canonical rendering: `pred`, `pred(a,b)`, `~pred(a,b)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| LangError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = s.trim();
        let (negated, body) = match trimmed.strip_prefix('~') {
            Some(rest) => (true, rest.trim_start()),
            None => (false, trimmed),
        };
        let valid_symbol =
            |sym: &str| !sym.is_empty() && sym.chars().all(|c| c.is_alphanumeric() || c == '_');
        let (name, args) = match body.split_once('(') {
            None => (body, Vec::new()),
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| err("missing closing parenthesis"))?;
                let args: Vec<String> = inner.split(',').map(|a| a.trim().to_string()).collect();
                if args.iter().any(|a| a.is_empty()) {
                    return Err(err("empty argument"));
                }
                (name, args)
            }
        };
        if !valid_symbol(name) {
            return Err(err(
                "predicate must be a non-empty alphanumeric/underscore symbol",
            ));
        }
        if let Some(bad) = args.iter().find(|a| !valid_symbol(a)) {
            return Err(LangError::Parse {
                input: s.to_string(),
                reason: format!("argument {bad:?} must be an alphanumeric/underscore symbol"),
            });
        }
        Ok(Literal {
            predicate: name.to_string(),
            args,
            negated,
        })
    }
}

/// A consistent, duplicate-free set of ground facts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EvidenceSet {
    facts: BTreeSet<Literal>,
}

impl EvidenceSet {
    /// Validates and builds an evidence set.
    ///
    /// Fails with the clashing pair if the input contains a literal together
    /// with its complement. Duplicates collapse silently (set semantics).
    pub fn new(facts: impl IntoIterator<Item = Literal>) -> Result<Self, LangError> {
        let facts: BTreeSet<Literal> = facts.into_iter().collect();
        for fact in &facts {
            let comp = fact.complement();
            if facts.contains(&comp) {
                // Report the positive literal first for a stable message.
                let (first, second) = if fact.is_negated() {
                    (comp, fact.clone())
                } else {
                    (fact.clone(), comp)
                };
                return Err(LangError::Inconsistent { first, second });
            }
        }
        Ok(EvidenceSet { facts })
    }

    /// The empty evidence set.
    pub fn empty() -> Self {
        EvidenceSet::default()
    }

    pub fn contains(&self, l: &Literal) -> bool {
        self.facts.contains(l)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Literal> {
        self.facts.iter()
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }
}

impl fmt::Display for EvidenceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, fact) in self.facts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{fact}")?;
        }
        write!(f, "}}")
    }
}
