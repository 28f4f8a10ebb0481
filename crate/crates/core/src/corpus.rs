//! Seeded random Weierstrass models over the supported base fields, used by
//! the verification suite and the batch tests.

use crate::curve::{ReductionType, WeierstrassModel};
use crate::error::Result;
use crate::local_field::LocalField;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random integral element with valuation in 0..=max_val and a bounded
/// digit window; returns zero roughly one time in six.
pub fn random_integral(rng: &mut ChaCha8Rng, field: &LocalField, max_val: i64) -> crate::local_field::Elem {
    if rng.gen_range(0..6) == 0 {
        return field.zero();
    }
    let v = rng.gen_range(0..=max_val);
    let q = field.residue_field().order();
    let mut digits = vec![0u64; 8];
    digits[0] = rng.gen_range(1..q);
    for d in digits.iter_mut().skip(1) {
        *d = rng.gen_range(0..q);
    }
    field.from_digits(&digits, v)
}

/// A random nonsingular integral model (Δ certified nonzero).
pub fn random_model(rng: &mut ChaCha8Rng, field: &LocalField) -> Result<WeierstrassModel> {
    loop {
        let model = WeierstrassModel::new(
            field,
            random_integral(rng, field, 3),
            random_integral(rng, field, 3),
            random_integral(rng, field, 3),
            random_integral(rng, field, 4),
            random_integral(rng, field, 6),
        )?;
        if model.invariants().is_ok() {
            return Ok(model);
        }
    }
}

/// Random additive, potentially good models passing the minimality gate.
pub fn additive_potentially_good(
    rng: &mut ChaCha8Rng,
    field: &LocalField,
    count: usize,
    max_attempts: usize,
) -> Result<Vec<WeierstrassModel>> {
    let mut out = vec![];
    for _ in 0..max_attempts {
        if out.len() >= count {
            break;
        }
        let model = match random_model(rng, field) {
            Ok(m) => m,
            Err(_) => continue,
        };
        let inv = match model.invariants() {
            Ok(i) => i,
            Err(_) => continue,
        };
        if inv.n_e >= 12 {
            continue;
        }
        if matches!(
            model.reduction_type(&inv),
            Ok(ReductionType::AdditivePotentiallyGood)
        ) {
            out.push(model);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::base::FieldKind;

    #[test]
    fn corpus_is_deterministic_and_plentiful() {
        let k = LocalField::make_base(FieldKind::Equal, 1, 64).unwrap();
        let mut r1 = rng(7);
        let c1 = additive_potentially_good(&mut r1, &k, 20, 4000).unwrap();
        assert!(c1.len() >= 20, "only {} curves accepted", c1.len());
        let mut r2 = rng(7);
        let c2 = additive_potentially_good(&mut r2, &k, 20, 4000).unwrap();
        for (a, b) in c1.iter().zip(c2.iter()) {
            assert!(k.eq_at_prec(&a.a6, &b.a6));
        }
    }
}
