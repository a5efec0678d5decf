use tightlinks::balance::{find_struts, DEFAULT_STRUT_TOL, DEFAULT_WALL_TOL};
use tightlinks::catalog::simple_chain;
use tightlinks::geometry::segment_distance;

fn main() {
    let link = simple_chain(256).unwrap();
    let stadium = &link.components()[0];
    let ring = &link.components()[1];
    for rseg in [193usize, 0] {
        let (a1, a2) = stadium.segment(10);
        let (b1, b2) = ring.segment(rseg);
        let (d, s, t) = segment_distance(a1, a2, b1, b2);
        println!("pair (10,{rseg}): d {d:.9} s {s:.9} t {t:.9}");
        for tv in [0.0f64, 1.0] {
            let p = a1 + (a2 - a1) * tv;
            for tw in [0.0f64, 1.0] {
                let q = b1 + (b2 - b1) * tw;
                println!("  vv ({tv},{tw}): d {:.9}", (p - q).norm());
            }
        }
    }
    let sys = find_struts(&link, DEFAULT_STRUT_TOL, DEFAULT_WALL_TOL).unwrap();
    let mut n_c1 = 0;
    for s in &sys.struts {
        if s.b.component == 1 && s.b.segment == 0 && s.b.t == 0.0 {
            n_c1 += 1;
        }
    }
    println!("struts anchored at c1 (ring vertex 0): {n_c1}");
}
