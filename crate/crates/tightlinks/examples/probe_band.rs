use tightlinks::balance::{assemble, find_struts, DEFAULT_STRUT_TOL, DEFAULT_WALL_TOL};
use tightlinks::borromean::{build, solve};
use tightlinks::catalog::{regular_turning_angles, simple_chain, wrapped};
use tightlinks::clasp::clasp_sample;
use tightlinks::numerics::{NewtonConfig, Quadrature};
use tightlinks::geometry::PolyLink;

fn bandwidth(link: &PolyLink) {
    let sys = find_struts(link, DEFAULT_STRUT_TOL, DEFAULT_WALL_TOL).unwrap();
    let bs = assemble(link, &sys);
    let (cols, _b) = bs.sparse();
    let k = cols.len();
    // order columns by the strut's first endpoint address
    let mut order: Vec<usize> = (0..sys.struts.len()).collect();
    order.sort_by_key(|&j| {
        let s = &sys.struts[j];
        (s.a.component, s.a.segment, (s.a.t * 1e9) as i64, s.b.component, s.b.segment)
    });
    order.extend(sys.struts.len()..k);
    let mut pos = vec![0usize; k];
    for (p, &j) in order.iter().enumerate() {
        pos[j] = p;
    }
    let mut row2cols: Vec<Vec<usize>> = vec![Vec::new(); bs.num_rows()];
    for (j, col) in cols.iter().enumerate() {
        for &(r, _) in col {
            row2cols[r].push(j);
        }
    }
    let mut bw = 0usize;
    let mut hist = [0usize; 8]; // <16,<32,<64,<128,<256,<512,<1024,rest
    for cols in &row2cols {
        for i in 0..cols.len() {
            for l in i + 1..cols.len() {
                let d = pos[cols[i]].abs_diff(pos[cols[l]]);
                bw = bw.max(d);
                let bin = match d {
                    0..=15 => 0,
                    16..=31 => 1,
                    32..=63 => 2,
                    64..=127 => 3,
                    128..=255 => 4,
                    256..=511 => 5,
                    512..=1023 => 6,
                    _ => 7,
                };
                hist[bin] += 1;
            }
        }
    }
    println!("k={k} bw={bw} hist={hist:?}");
}

fn main() {
    let n = 512;
    println!("chain:");
    bandwidth(&simple_chain(n).unwrap());
    println!("wrapped:");
    bandwidth(&wrapped(&regular_turning_angles(6), n).unwrap());
    println!("clasp:");
    bandwidth(&clasp_sample(1.0, n, 1.0).unwrap());
    println!("b0:");
    let q = Quadrature::default();
    let p = solve(&q, &NewtonConfig::default()).unwrap();
    bandwidth(&build(&p, n).unwrap());
}
