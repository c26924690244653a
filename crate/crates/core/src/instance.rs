//! Line-oriented instance files.
//!
//! ```text
//! # comment
//! vars 2
//! min 1 3
//! row 1 1/2 <= 1/2
//! bounds 5 5        # optional, `*` leaves a variable unbounded
//! basis 3           # optional, 1-based columns after slack insertion
//! option region sl  # optional free-form settings
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Signed;
use thiserror::Error;

use crate::arith::{format_rational, parse_rational, Rational, RationalMatrix};
use crate::linprog::Relation;
use crate::model::{build_group_form, lp_optimal_basis, GroupForm, IpInstance, ModelError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("basis is not dual feasible: reduced cost of x{var} is {value}")]
    DualInfeasibleBasis { var: usize, value: String },
}

fn parse_err(line: usize, message: impl Into<String>) -> InstanceError {
    InstanceError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: IpInstance,
    /// Zero-based basis columns of the standardized instance.
    pub basis: Option<Vec<usize>>,
    pub options: BTreeMap<String, String>,
}

fn numbers(tokens: &[&str], line: usize) -> Result<Vec<Rational>, InstanceError> {
    tokens
        .iter()
        .map(|t| parse_rational(t).map_err(|e| parse_err(line, format!("{t:?}: {e}"))))
        .collect()
}

fn relation(token: &str) -> Option<Relation> {
    match token {
        "<=" => Some(Relation::Le),
        "=" => Some(Relation::Eq),
        ">=" => Some(Relation::Ge),
        _ => None,
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, InstanceError> {
    let mut vars: Option<usize> = None;
    let mut objective = None;
    let mut rows = Vec::new();
    let mut relations = Vec::new();
    let mut rhs = Vec::new();
    let mut bounds = None;
    let mut basis = None;
    let mut options = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&head, rest)) = tokens.split_first() else { continue };
        let keyword = head.strip_suffix(':').unwrap_or(head);
        if keyword != "vars" && keyword != "option" && vars.is_none() {
            return Err(parse_err(line, "`vars` must come first"));
        }
        let n = vars.unwrap_or(0);
        let expect_len = |got: usize, what: &str| {
            if got == n {
                Ok(())
            } else {
                Err(parse_err(line, format!("{what} has {got} entries, expected {n}")))
            }
        };
        match keyword {
            "vars" => {
                if vars.is_some() {
                    return Err(parse_err(line, "duplicate `vars`"));
                }
                let [count] = rest else {
                    return Err(parse_err(line, "`vars` takes one count"));
                };
                let count: usize = count
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad variable count {count:?}")))?;
                if count == 0 {
                    return Err(parse_err(line, "need at least one variable"));
                }
                vars = Some(count);
            }
            "min" => {
                if objective.is_some() {
                    return Err(parse_err(line, "duplicate objective"));
                }
                expect_len(rest.len(), "objective")?;
                objective = Some(numbers(rest, line)?);
            }
            "row" => {
                let Some(pos) = rest.iter().position(|t| relation(t).is_some()) else {
                    return Err(parse_err(line, "row needs one of <=, =, >="));
                };
                expect_len(pos, "row")?;
                if rest.len() != pos + 2 {
                    return Err(parse_err(line, "row needs exactly one right-hand side"));
                }
                rows.push(numbers(&rest[..pos], line)?);
                relations.push(relation(rest[pos]).expect("checked above"));
                rhs.push(numbers(&rest[pos + 1..], line)?.remove(0));
            }
            "bounds" => {
                if bounds.is_some() {
                    return Err(parse_err(line, "duplicate `bounds`"));
                }
                expect_len(rest.len(), "bounds")?;
                let parsed = rest
                    .iter()
                    .map(|t| match *t {
                        "*" => Ok(None),
                        t => t
                            .parse::<i64>()
                            .ok()
                            .filter(|k| *k >= 0)
                            .map(Some)
                            .ok_or_else(|| parse_err(line, format!("bad bound {t:?}"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                bounds = Some(parsed);
            }
            "basis" => {
                if basis.is_some() {
                    return Err(parse_err(line, "duplicate `basis`"));
                }
                let cols = rest
                    .iter()
                    .map(|t| {
                        t.parse::<usize>()
                            .ok()
                            .filter(|j| *j >= 1)
                            .map(|j| j - 1)
                            .ok_or_else(|| parse_err(line, format!("bad basis column {t:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                basis = Some(cols);
            }
            "option" => {
                let [key, value] = rest else {
                    return Err(parse_err(line, "`option` takes a key and a value"));
                };
                options.insert(key.to_string(), value.to_string());
            }
            other => return Err(parse_err(line, format!("unknown keyword {other:?}"))),
        }
    }

    let last = text.lines().count().max(1);
    let n = vars.ok_or_else(|| parse_err(last, "missing `vars`"))?;
    let c = objective.ok_or_else(|| parse_err(last, "missing objective"))?;
    if rows.is_empty() {
        return Err(parse_err(last, "no constraint rows"));
    }
    let instance = IpInstance::new(RationalMatrix::from_rows(rows, n), relations, rhs, c, bounds)?;
    Ok(InstanceFile {
        instance,
        basis,
        options,
    })
}

pub fn format_instance(file: &InstanceFile) -> String {
    let inst = &file.instance;
    let join = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let _ = writeln!(out, "vars {}", inst.num_vars());
    let _ = writeln!(out, "min {}", join(&inst.c));
    for i in 0..inst.num_rows() {
        let _ = writeln!(
            out,
            "row {} {} {}",
            join(inst.a.row(i)),
            inst.relations[i].symbol(),
            format_rational(&inst.b[i])
        );
    }
    if inst.upper.iter().any(Option::is_some) {
        let b: Vec<String> = inst
            .upper
            .iter()
            .map(|u| u.map_or("*".to_string(), |k| k.to_string()))
            .collect();
        let _ = writeln!(out, "bounds {}", b.join(" "));
    }
    if let Some(basis) = &file.basis {
        let b: Vec<String> = basis.iter().map(|j| (j + 1).to_string()).collect();
        let _ = writeln!(out, "basis {}", b.join(" "));
    }
    for (k, v) in &file.options {
        let _ = writeln!(out, "option {k} {v}");
    }
    out
}

impl InstanceFile {
    /// Group form over the declared basis, or the LP-optimal one.
    pub fn group_form(&self) -> Result<GroupForm, InstanceError> {
        let basis = match &self.basis {
            Some(b) => b.clone(),
            None => lp_optimal_basis(&self.instance)?.0,
        };
        let gf = build_group_form(&self.instance, &basis)?;
        if let Some(k) = gf.cbar.iter().position(|c| c.is_negative()) {
            return Err(InstanceError::DualInfeasibleBasis {
                var: gf.nonbasis[k] + 1,
                value: format_rational(&gf.cbar[k]),
            });
        }
        Ok(gf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ratio};

    const FIRST: &str = "\
# worked instance
vars 4
min 1 3 0 0
row 0 -1/2 1 0 = 1/2
row -1 1 0 1 = -1
basis 3 4
";

    #[test]
    fn parses_first_instance() {
        let f = parse_instance(FIRST).unwrap();
        assert_eq!(f.instance.c, vec![int(1), int(3), int(0), int(0)]);
        assert_eq!(f.instance.a.row(0)[1], ratio(-1, 2));
        assert_eq!(f.basis, Some(vec![2, 3]));
        let gf = f.group_form().unwrap();
        assert_eq!(gf.cbar, vec![int(1), int(3)]);
    }

    #[test]
    fn round_trip() {
        let text = "vars 2\nmin 1 3\nrow 1 1/2 <= 1/2\nrow -2/3 1 >= -4\nbounds 5 *\noption region sl\n";
        let f = parse_instance(text).unwrap();
        assert_eq!(format_instance(&f), text);
        assert_eq!(parse_instance(&format_instance(&f)).unwrap(), f);
        let g = parse_instance(FIRST).unwrap();
        assert_eq!(parse_instance(&format_instance(&g)).unwrap(), g);
    }

    #[test]
    fn bounds_with_colon() {
        let f = parse_instance("vars 2\nmin 1 3\nrow 1 1/2 <= 1/2\nbounds: 10 10\n").unwrap();
        assert_eq!(f.instance.upper, vec![Some(10), Some(10)]);
        let gf = f.group_form().unwrap();
        assert_eq!(gf.bounds, vec![Some(10), Some(10)]);
    }

    fn line_of(text: &str) -> usize {
        match parse_instance(text).unwrap_err() {
            InstanceError::Parse { line, .. } => line,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(line_of("vars 2\nmin\nrow 1 1 = 1\n"), 2);
        assert_eq!(line_of("vars 2\nmin 1 1\nrow 1 1 1\n"), 3);
        assert_eq!(line_of("vars 2\nmin 1 0.5\n"), 2);
        assert_eq!(line_of("min 1 1\n"), 1);
        assert_eq!(line_of("vars 2\nmin 1 1\nrow 1 1 <= 2\nbounds 1 -1\n"), 4);
        assert_eq!(line_of("vars 2\nmin 1 1\n"), 2);
        assert_eq!(line_of("vars 2\nmin 1 1\nrow 1 1 <= 2\nbasis 0\n"), 4);
        assert_eq!(line_of("vars 2\nmin 1 1\nrow 1 1 <= 2\nfoo 1\n"), 4);
    }

    #[test]
    fn rejects_primal_basis_with_negative_costs() {
        let f = parse_instance("vars 2\nmin -1 0\nrow 1 1 <= 3\nbasis 3\n").unwrap();
        assert!(matches!(f.group_form(), Err(InstanceError::DualInfeasibleBasis { var: 1, .. })));
    }
}
