use tightlinks::balance::solve_balance;
use tightlinks::borromean::{b2_build, build, solve, BorromeanParams};
use tightlinks::catalog::{
    covered_hopf, naive_clasp, pressed_clasp, regular_turning_angles, simple_chain, wrapped,
};
use tightlinks::clasp::clasp_sample;
use tightlinks::numerics::{NewtonConfig, Quadrature};
use tightlinks::geometry::PolyLink;

fn main() {
    let q = Quadrature::default();
    let params: BorromeanParams = solve(&q, &NewtonConfig::default()).unwrap();
    let fixtures: Vec<(&str, Box<dyn Fn(usize) -> PolyLink>)> = vec![
        ("simple_chain", Box::new(|n| simple_chain(n).unwrap())),
        ("covered_hopf(1,1)", Box::new(|n| covered_hopf(1, 1, n).unwrap())),
        ("covered_hopf(2,1)", Box::new(|n| covered_hopf(2, 1, n).unwrap())),
        (
            "wrapped hexagon",
            Box::new(|n| wrapped(&regular_turning_angles(6), n).unwrap()),
        ),
        ("pressed_clasp", Box::new(|n| pressed_clasp(n).unwrap())),
        ("clasp_sample(1)", Box::new(|n| clasp_sample(1.0, n, 1.0).unwrap())),
        ("B0", Box::new(move |n| build(&params, n).unwrap())),
        ("naive_clasp(1)", Box::new(|n| naive_clasp(1.0, n, 1.0).unwrap())),
        ("b2_build", Box::new(|n| b2_build(n).unwrap())),
    ];
    for (name, f) in &fixtures {
        for n in [256usize, 512, 1024] {
            let link = f(n);
            let t = std::time::Instant::now();
            match solve_balance(&link) {
                Ok(rep) => println!(
                    "{name} n={n}: {:?} normalized {:.6} struts {} walls {} [{:?}]",
                    rep.verdict,
                    rep.normalized_residual,
                    rep.system.struts.len(),
                    rep.system.walls.len(),
                    t.elapsed()
                ),
                Err(e) => println!("{name} n={n}: ERROR {e:?}"),
            }
        }
    }
}
