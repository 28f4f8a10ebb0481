use std::time::Instant;
use torsion3::classifier::*;
use torsion3::curve::*;
use torsion3::local_field::base::FieldKind;
use torsion3::local_field::LocalField;

fn main() {
    let k = LocalField::make_base(FieldKind::Mixed, 1, 96).unwrap();
    for (a2, a4, a6) in [
        (0i64, 0i64, 2i64),
        (0, 1, 2),
        (1, 1, 2),
        (0, 2, 2),
        (1, 0, 2),
        (0, 0, 6),
    ] {
        let e = WeierstrassModel::from_i64(&k, [0, a2, 0, a4, a6]).unwrap();
        let inv = match e.invariants() { Ok(i) => i, Err(_) => continue };
        if e.minimality_gate(&inv, false).is_err() { continue; }
        if !matches!(e.reduction_type(&inv), Ok(ReductionType::AdditivePotentiallyGood)) { continue; }
        let t0 = Instant::now();
        match classify(&e, false) {
            Ok(c) => {
                let t_classify = t0.elapsed();
                let t1 = Instant::now();
                let d = oracle_tower_degree(&e, false).map(|d| d.degree);
                println!("[0,{},0,{},{}]: {:?}/{} nE={} classify={:?} oracle={:?} oracle_time={:?}",
                    a2, a4, a6, c.class.label, c.class.branch, inv.n_e, t_classify, d, t1.elapsed());
            }
            Err(err) => println!("[0,{},0,{},{}]: ERR {} in {:?}", a2, a4, a6, err, t0.elapsed()),
        }
    }
}
