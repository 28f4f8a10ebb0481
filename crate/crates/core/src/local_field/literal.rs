//! Element literal syntax for base fields (the CLI surface).
//!
//! Mixed characteristic: a signed integer, or a bracketed coordinate list
//! over the unramified basis, optionally followed by a precision tail:
//!
//! ```text
//! -432            17 + O(2^20)          [3,1,0] + O(2^64)
//! ```
//!
//! Equal characteristic: a semicolon-separated list of `(exponent, coeff)`
//! pairs with coefficients written as residue bitmasks, optionally with a
//! tail; `0` denotes the zero element:
//!
//! ```text
//! (0,1);(2,1)      (-3,1);(0,3) + O(t^40)       0
//! ```
//!
//! Round trips are bit exact on the stored digits below the precision tail.

use super::base::FieldKind;
use super::{Elem, LocalField};
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

pub fn parse_elem(field: &LocalField, s: &str) -> Result<Elem> {
    let s = s.trim();
    let (body, tail) = split_tail(s)?;
    let mut elem = match field.kind() {
        FieldKind::Mixed => parse_mixed(field, body)?,
        FieldKind::Equal => parse_equal(field, body)?,
    };
    if let Some(k) = tail {
        elem = field.truncate_prec(&elem, k);
    }
    Ok(elem)
}

fn split_tail(s: &str) -> Result<(&str, Option<i64>)> {
    if let Some(pos) = s.find("+ O(") {
        let body = s[..pos].trim();
        let rest = s[pos + 4..].trim();
        let rest = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::invalid(format!("unclosed O(...) in `{}`", s)))?;
        let exp = rest
            .strip_prefix("2^")
            .or_else(|| rest.strip_prefix("t^"))
            .ok_or_else(|| Error::invalid(format!("O-tail must be 2^k or t^k in `{}`", s)))?;
        let k: i64 = exp
            .parse()
            .map_err(|_| Error::invalid(format!("bad precision exponent `{}`", exp)))?;
        Ok((body, Some(k)))
    } else {
        Ok((s, None))
    }
}

fn parse_mixed(field: &LocalField, body: &str) -> Result<Elem> {
    if body.starts_with('[') {
        let inner = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| Error::invalid(format!("unclosed bracket in `{}`", body)))?;
        let coords: Vec<&str> = inner.split(',').map(|c| c.trim()).collect();
        if coords.len() != field.f() as usize {
            return Err(Error::invalid(format!(
                "expected {} coordinates, got {}",
                field.f(),
                coords.len()
            )));
        }
        let mut acc = field.zero();
        let omega = field.lift_residue(field.residue_field().gen());
        let mut pow = field.one();
        for (j, c) in coords.iter().enumerate() {
            let n: BigInt = c
                .parse()
                .map_err(|_| Error::invalid(format!("bad integer `{}`", c)))?;
            let term = field.mul(&bigint_elem(field, &n), &pow);
            acc = field.add(&acc, &term);
            if j + 1 < coords.len() {
                pow = field.mul(&pow, &omega);
            }
        }
        Ok(acc)
    } else {
        let n: BigInt = body
            .parse()
            .map_err(|_| Error::invalid(format!("bad integer literal `{}`", body)))?;
        Ok(bigint_elem(field, &n))
    }
}

fn bigint_elem(field: &LocalField, n: &BigInt) -> Elem {
    let (sign, mag) = n.clone().into_parts();
    let e = field.from_biguint(&mag);
    if sign == Sign::Minus {
        field.neg(&e)
    } else {
        e
    }
}

fn parse_equal(field: &LocalField, body: &str) -> Result<Elem> {
    if body == "0" {
        return Ok(field.zero());
    }
    let mut acc = field.zero();
    for pair in body.split(';') {
        let pair = pair.trim();
        let inner = pair
            .strip_prefix('(')
            .and_then(|p| p.strip_suffix(')'))
            .ok_or_else(|| Error::invalid(format!("expected (exp,coeff), got `{}`", pair)))?;
        let mut it = inner.splitn(2, ',');
        let e: i64 = it
            .next()
            .unwrap()
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad exponent in `{}`", pair)))?;
        let c: u64 = it
            .next()
            .ok_or_else(|| Error::invalid(format!("missing coefficient in `{}`", pair)))?
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad coefficient in `{}`", pair)))?;
        if c >= field.residue_field().order() {
            return Err(Error::invalid(format!(
                "coefficient {} out of range for F_{}",
                c,
                field.residue_field().order()
            )));
        }
        let term = field.shift_uniformizer(&field.lift_residue(c), e);
        acc = field.add(&acc, &term);
    }
    Ok(acc)
}

/// Canonical rendering; inverse of `parse_elem` on base fields.
pub fn format_elem(field: &LocalField, x: &Elem) -> Result<String> {
    match field.kind() {
        FieldKind::Mixed => {
            let lo = field.val(x).unwrap_or(0).min(0);
            let hi = x.precision();
            let digits = field.theta_digits(x, lo, hi)?;
            // reassemble per-coordinate 2-adic integers (non-negative; the
            // shift is folded in as a power of 2)
            let f = field.f() as usize;
            let mut coords = vec![BigUint::zero(); f];
            for (i, &d) in digits.iter().enumerate() {
                for (j, coord) in coords.iter_mut().enumerate() {
                    if (d >> j) & 1 == 1 {
                        *coord += BigUint::from(1u32) << i;
                    }
                }
            }
            let shift = lo;
            let body = if f == 1 {
                render_shifted(&coords[0], shift)
            } else {
                let parts: Vec<String> = coords
                    .iter()
                    .map(|c| render_shifted(c, shift))
                    .collect();
                format!("[{}]", parts.join(","))
            };
            Ok(format!("{} + O(2^{})", body, hi))
        }
        FieldKind::Equal => {
            let lo = field.val(x).unwrap_or(0).min(0);
            let hi = x.precision();
            let digits = field.theta_digits(x, lo, hi)?;
            let mut parts = vec![];
            for (i, &d) in digits.iter().enumerate() {
                if d != 0 {
                    parts.push(format!("({},{})", lo + i as i64, d));
                }
            }
            let body = if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(";")
            };
            Ok(format!("{} + O(t^{})", body, hi))
        }
    }
}

fn render_shifted(c: &BigUint, shift: i64) -> String {
    if shift == 0 || c.is_zero() {
        format!("{}", c)
    } else {
        // only non-negative shifts appear for integral elements; negative
        // shifts render as an explicit note (CLI inputs are integral)
        format!("{}*2^{}", c, shift)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::base::FieldKind;

    #[test]
    fn mixed_round_trip() {
        let k = LocalField::make_base(FieldKind::Mixed, 1, 64).unwrap();
        for s in ["17", "-432", "0", "123456789"] {
            let e = parse_elem(&k, s).unwrap();
            let back = parse_elem(&k, &format_elem(&k, &e).unwrap()).unwrap();
            assert!(k.eq_at_prec(&e, &back), "{}", s);
        }
        let e = parse_elem(&k, "17 + O(2^20)").unwrap();
        assert_eq!(e.precision(), 20);
    }

    #[test]
    fn mixed_coordinates() {
        let k = LocalField::make_base(FieldKind::Mixed, 2, 64).unwrap();
        let e = parse_elem(&k, "[3,1]").unwrap();
        // equals 3 + ω
        let om = k.lift_residue(k.residue_field().gen());
        let expect = k.add(&k.from_i64(3), &om);
        assert!(k.eq_at_prec(&e, &expect));
        let back = parse_elem(&k, &format_elem(&k, &e).unwrap()).unwrap();
        assert!(k.eq_at_prec(&e, &back));
    }

    #[test]
    fn equal_round_trip() {
        let k = LocalField::make_base(FieldKind::Equal, 3, 64).unwrap();
        for s in ["0", "(0,1)", "(-3,1);(0,3)", "(2,7);(5,1)"] {
            let e = parse_elem(&k, s).unwrap();
            let back = parse_elem(&k, &format_elem(&k, &e).unwrap()).unwrap();
            assert!(k.eq_at_prec(&e, &back), "{}", s);
        }
        let e = parse_elem(&k, "(0,1) + O(t^10)").unwrap();
        assert_eq!(e.precision(), 10);
    }

    #[test]
    fn rejects_garbage() {
        let k = LocalField::make_base(FieldKind::Equal, 1, 64).unwrap();
        assert!(parse_elem(&k, "(0,5)").is_err()); // coeff out of range
        assert!(parse_elem(&k, "x+1").is_err());
        let km = LocalField::make_base(FieldKind::Mixed, 2, 64).unwrap();
        assert!(parse_elem(&km, "[1]").is_err()); // wrong coordinate count
    }
}
