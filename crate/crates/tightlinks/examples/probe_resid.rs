use tightlinks::balance::solve_balance;
use tightlinks::catalog::simple_chain;

fn main() {
    let link = simple_chain(256).unwrap();
    let rep = solve_balance(&link).unwrap();
    println!("normalized {:.6} {:?}", rep.normalized_residual, rep.verdict);
    let mut worst: Vec<(f64, usize, usize)> = Vec::new();
    for (ci, comp) in rep.vertex_residuals.iter().enumerate() {
        for (vi, r) in comp.iter().enumerate() {
            worst.push((r.norm(), ci, vi));
        }
    }
    worst.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    for &(m, ci, vi) in worst.iter().take(15) {
        println!("comp{ci} vertex {vi}: residual {m:.6}");
    }
    let nstruts = rep.system.struts.len();
    let nz = rep.strut_mu.iter().filter(|&&w| w > 1e-12).count();
    println!("struts {nstruts} nonzero {nz}");
}
