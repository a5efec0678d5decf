use std::collections::BTreeMap;
use tightlinks::balance::{find_struts, solve_balance, DEFAULT_STRUT_TOL, DEFAULT_WALL_TOL};
use tightlinks::catalog::simple_chain;

fn main() {
    let ns: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().unwrap())
        .collect();
    let ns = if ns.is_empty() { vec![256, 512, 1024] } else { ns };
    for n in ns {
        let link = simple_chain(n).unwrap();
        let t0 = std::time::Instant::now();
        let sys = find_struts(&link, DEFAULT_STRUT_TOL, DEFAULT_WALL_TOL).unwrap();
        let mut by_pair: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for s in &sys.struts {
            *by_pair.entry((s.a.component, s.b.component)).or_default() += 1;
        }
        println!(
            "n={n}: struts {} th {:.7} {:?} find {:?}",
            sys.struts.len(),
            sys.thickness,
            by_pair,
            t0.elapsed()
        );
        let t1 = std::time::Instant::now();
        let rep = solve_balance(&link).unwrap();
        println!(
            "  normalized {:.6} verdict {:?} solve {:?}",
            rep.normalized_residual,
            rep.verdict,
            t1.elapsed()
        );
    }
}
