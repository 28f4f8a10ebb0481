use std::collections::BTreeMap;
use std::time::Instant;
use torsion3::classifier::*;
use torsion3::curve::*;
use torsion3::cyclotomic::Rotation;
use torsion3::local_field::base::FieldKind;
use torsion3::local_field::LocalField;
use torsion3::rootnum::*;

fn main() {
    let k = LocalField::make_base(FieldKind::Mixed, 1, 96).unwrap();
    let e = WeierstrassModel::from_i64(&k, [0, 1, 0, 1, 2]).unwrap();
    let cls = classify(&e, false).unwrap();
    println!("label {:?} branch {}", cls.class.label, cls.class.branch);
    let t0 = Instant::now();
    let (m, deg) = build_m(&cls).unwrap();
    println!("M built: [M:K1]={} e={} f={} in {:?}", deg, m.e(), m.f(), t0.elapsed());
    // order-8 chi: chi(pi) = zeta_8, trivial on units, conductor 0
    let chi = Character::unramified(Rotation::new(1, 8));
    let t0 = Instant::now();
    match root_number_gl2f3(&e, &cls, &chi) {
        Ok(rep) => {
            println!("w = {} + {}i (identity: {}) in {:?}", rep.w.approx_re, rep.w.approx_im, rep.assembly_identity_holds, t0.elapsed());
            println!("twist = {}+{}i  w_chi = {}+{}i  w_quad = {}+{}i", rep.twist.approx_re, rep.twist.approx_im, rep.w_chi.approx_re, rep.w_chi.approx_im, rep.w_quad.approx_re, rep.w_quad.approx_im);
        }
        Err(err) => println!("root number failed in {:?}: {}", t0.elapsed(), err),
    }
    // now a ramified order-8 chi: conductor from unit gens... try chi with conductor 1:
    // teich order on M: q-1 = 1 for f=1: so conductor-1 impossible; use pi-value + a wild level
    let pres = UnitPresentation::new(&m, 3).unwrap();
    println!("relations: {:?}", pres.relations.keys().collect::<Vec<_>>());
    // find a valid character of conductor 3 and order 8: values on u_1_0, u_2_0 in
    // rotations with denominator dividing 8 satisfying squares-relations
    for c10 in 0..8i64 {
        for c20 in 0..8i64 {
            let mut on_units = BTreeMap::new();
            on_units.insert((1i64, 0u32), Rotation::new(c10, 8));
            on_units.insert((2i64, 0u32), Rotation::new(c20, 8));
            let chi = Character { order: 8, conductor: 3, on_pi: Rotation::new(1, 8), on_teich: Rotation::zero(), on_units };
            if chi.validate(&pres).is_ok() {
                let t0 = Instant::now();
                match root_number_gl2f3(&e, &cls, &chi) {
                    Ok(rep) => println!("ramified chi ({},{}) ok: w = {}+{}i identity {} in {:?}", c10, c20, rep.w.approx_re, rep.w.approx_im, rep.assembly_identity_holds, t0.elapsed()),
                    Err(err) => println!("ramified chi ({},{}) FAILED: {}", c10, c20, err),
                }
            }
        }
    }
}
