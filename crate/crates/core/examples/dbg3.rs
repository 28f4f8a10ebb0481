use torsion3::verify::*;
fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(0);
    match which {
        1 => println!("{}", criterion_atlas().line()),
        2 => println!("{}", criterion_identity_suite(42, 1000).line()),
        3 => println!("{}", criterion_point_counts().line()),
        4 => println!("{}", criterion_gauss_anchors().line()),
        5 => println!("{}", criterion_worked_curves().line()),
        6 => {
            let (c, g) = criterion_corpus(42, 50);
            println!("{}", c.line());
            println!("gl2f3 curves: {}", g.len());
        }
        7 => {
            let (c, g) = criterion_corpus(42, 30);
            println!("{}", c.line());
            println!("{}", criterion_root_numbers(&g).line());
        }
        8 => println!("{}", criterion_resolvent(42, 500).line()),
        _ => {
            for c in [criterion_atlas(), criterion_point_counts(), criterion_gauss_anchors()] {
                println!("{}", c.line());
            }
        }
    }
}
