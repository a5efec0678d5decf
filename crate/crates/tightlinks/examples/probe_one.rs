use tightlinks::balance::solve_balance;
use tightlinks::borromean::{build, solve};
use tightlinks::catalog::*;
use tightlinks::clasp::clasp_sample;
use tightlinks::numerics::{NewtonConfig, Quadrature};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let name = args[1].as_str();
    for a in &args[2..] {
        let n: usize = a.parse().unwrap();
        let link = match name {
            "clasp" => clasp_sample(1.0, n, 1.0).unwrap(),
            "b0" => {
                let p = solve(&Quadrature::default(), &NewtonConfig::default()).unwrap();
                build(&p, n).unwrap()
            }
            "chain" => simple_chain(n).unwrap(),
            "wrapped" => wrapped(&regular_turning_angles(6), n).unwrap(),
            "pressed" => pressed_clasp(n).unwrap(),
            "naive" => naive_clasp(1.0, n, 1.0).unwrap(),
            "b2" => tightlinks::borromean::b2_build(n).unwrap(),
            "hopf" => covered_hopf(1, 1, n).unwrap(),
            _ => panic!("unknown fixture"),
        };
        let t = std::time::Instant::now();
        let rep = solve_balance(&link).unwrap();
        println!(
            "{name} n={n}: {:?} normalized {:.7} struts {} [{:?}]",
            rep.verdict,
            rep.normalized_residual,
            rep.system.struts.len(),
            t.elapsed()
        );
    }
}
