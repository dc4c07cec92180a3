//! Module expressions such as `tau^-1 P1/soc + 2 S2`.
//!
//! A sum of summands separated by `+`. Each summand is an optional
//! multiplicity, then prefix operators applied right to left, then a base
//! module. Bases: `S<v>`, `P<v>`, `I<v>`, `P<v>/soc`, `P<v>/soc2` for a
//! vertex label `<v>`. Operators: `tau`, `tau^k`, `omega`, `omega^k`, `nu`,
//! `rad`, `rad2`, `soc`, `top`.

use ausgen_core::rep::{injective, nakayama, projective, simple, syzygy_power, tau_power, Rep};
use ausgen_core::Algebra;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("empty module expression")]
    Empty,
    #[error("unknown module `{0}`")]
    UnknownBase(String),
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("bad exponent in `{0}`")]
    BadExponent(String),
    #[error("cannot apply `{op}`: {reason}")]
    Failed { op: String, reason: String },
}

fn vertex(alg: &Algebra, label: &str) -> Option<usize> {
    alg.quiver().vertex_index(label)
}

fn base(alg: &Algebra, word: &str) -> Result<Rep, ExprError> {
    let unknown = || ExprError::UnknownBase(word.to_string());
    let (head, quotient) = match word.split_once('/') {
        Some((h, q)) => (h, Some(q)),
        None => (word, None),
    };
    let mut chars = head.chars();
    let kind = chars.next().ok_or_else(unknown)?;
    let v = vertex(alg, chars.as_str()).ok_or_else(unknown)?;
    match (kind, quotient) {
        ('S', None) => Ok(simple(alg, v)),
        ('P', None) => Ok(projective(alg, v)),
        ('I', None) => Ok(injective(alg, v)),
        ('P', Some(q)) => {
            let k = match q {
                "soc" => 1,
                "soc2" => 2,
                _ => return Err(unknown()),
            };
            let p = projective(alg, v);
            Ok(p.quotient(&p.socle_power_subspace(k)).0)
        }
        _ => Err(unknown()),
    }
}

fn exponent(op: &str, name: &str) -> Result<Option<i32>, ExprError> {
    if op == name {
        return Ok(Some(1));
    }
    match op.strip_prefix(name).and_then(|r| r.strip_prefix('^')) {
        Some(k) => k
            .parse()
            .map(Some)
            .map_err(|_| ExprError::BadExponent(op.to_string())),
        None => Ok(None),
    }
}

fn apply(op: &str, x: Rep) -> Result<Rep, ExprError> {
    let failed = |e: ausgen_core::Error| ExprError::Failed {
        op: op.to_string(),
        reason: e.to_string(),
    };
    if let Some(k) = exponent(op, "tau")? {
        return tau_power(&x, k).map_err(failed);
    }
    if let Some(k) = exponent(op, "omega")? {
        return Ok(syzygy_power(&x, k));
    }
    match op {
        "nu" => Ok(nakayama(&x)),
        "rad" => Ok(x.radical().0),
        "rad2" => Ok(x.radical_power(2).0),
        "soc" => Ok(x.socle().0),
        "top" => Ok(x.top().0),
        _ => Err(ExprError::UnknownOperator(op.to_string())),
    }
}

fn summand(alg: &Algebra, text: &str) -> Result<Rep, ExprError> {
    let mut words: Vec<&str> = text.split_whitespace().collect();
    let mut mult = 1;
    if let Some(first) = words.first() {
        if let Ok(m) = first.parse::<usize>() {
            mult = m;
            words.remove(0);
        }
    }
    let (last, ops) = words.split_last().ok_or(ExprError::Empty)?;
    let mut x = base(alg, last)?;
    for op in ops.iter().rev() {
        x = apply(op, x)?;
    }
    Ok(x.power(mult))
}

pub fn parse_module(alg: &Algebra, text: &str) -> Result<Rep, ExprError> {
    let parts: Vec<Rep> = text
        .split('+')
        .map(|s| summand(alg, s))
        .collect::<Result<_, _>>()?;
    Ok(Rep::direct_sum(&parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::load;

    fn ex1() -> Algebra {
        load(include_str!("../fixtures/example1.alg"), None).unwrap()
    }

    #[test]
    fn bases_and_operators() {
        let alg = ex1();
        assert_eq!(parse_module(&alg, "P1").unwrap().dims(), &[3, 1]);
        assert_eq!(parse_module(&alg, "P1/soc").unwrap().dims(), &[2, 1]);
        assert_eq!(parse_module(&alg, "P1/soc2").unwrap().dims(), &[1, 0]);
        assert_eq!(parse_module(&alg, "rad P1").unwrap().dims(), &[2, 1]);
        assert_eq!(parse_module(&alg, "omega S1").unwrap().dims(), &[2, 1]);
        assert_eq!(parse_module(&alg, "2 S1 + S2").unwrap().dims(), &[2, 1]);
        assert_eq!(parse_module(&alg, "tau^-1 S1").unwrap().dims(), &[2, 3]);
        assert_eq!(parse_module(&alg, "tau tau^-1 S1").unwrap().dims(), &[1, 0]);
    }

    #[test]
    fn errors() {
        let alg = ex1();
        assert_eq!(
            parse_module(&alg, "S9"),
            Err(ExprError::UnknownBase("S9".into()))
        );
        assert_eq!(parse_module(&alg, "").unwrap_err(), ExprError::Empty);
        assert!(matches!(
            parse_module(&alg, "tau P1"),
            Err(ExprError::Failed { .. })
        ));
        assert!(matches!(
            parse_module(&alg, "frob S1"),
            Err(ExprError::UnknownOperator(_))
        ));
        assert!(matches!(
            parse_module(&alg, "tau^x S1"),
            Err(ExprError::BadExponent(_))
        ));
    }
}
