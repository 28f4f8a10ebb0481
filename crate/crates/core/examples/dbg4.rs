use std::time::Instant;
use torsion3::classifier::*;
use torsion3::corpus;
use torsion3::local_field::base::FieldKind;
use torsion3::local_field::LocalField;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let kind = if args.get(1).map(|s| s.as_str()) == Some("equal") { FieldKind::Equal } else { FieldKind::Mixed };
    let f: u32 = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(1);
    let n: usize = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(10);
    let field = LocalField::make_base(kind, f, 64).unwrap();
    let mut rng = corpus::rng(42 ^ 0x6 ^ ((f as u64) << 4) ^ (((kind == FieldKind::Equal) as u64) << 9));
    let curves = corpus::additive_potentially_good(&mut rng, &field, n, n * 60).unwrap();
    println!("{} curves", curves.len());
    for (i, model) in curves.iter().enumerate() {
        let inv = model.invariants().unwrap();
        let t0 = Instant::now();
        let cls = with_precision_retry(default_precision(inv.n_e), |prec| {
            let f2 = LocalField::make_base(kind, f, prec)?;
            let m2 = torsion3::verify::reconstruct(model, &field, &f2)?;
            classify(&m2, false)
        });
        let tc = t0.elapsed();
        let label = match &cls { Ok(c) => c.class.label.as_str().to_string(), Err(e) => format!("ERR {}", e) };
        let t1 = Instant::now();
        let deg = with_precision_retry(default_precision(inv.n_e), |prec| {
            let f2 = LocalField::make_base(kind, f, prec)?;
            let m2 = torsion3::verify::reconstruct(model, &field, &f2)?;
            oracle_tower_degree(&m2, false)
        });
        let to = t1.elapsed();
        let dd = fmt_deg(&deg);
        println!("#{} nE={} label={} classify={:?} oracle={} oracle_t={:?}", i, inv.n_e, label, tc, dd, to);
    }
}
fn fmt_deg(d: &Result<TowerDegree, torsion3::Error>) -> String {
    match d { Ok(t) => format!("{}", t.degree), Err(e) => format!("ERR {}", e) }
}
