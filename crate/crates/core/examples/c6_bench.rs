use nonclash::balls::BallFamily;
use nonclash::graph::Graph;
use nonclash::solver::{min_dimension, oracle_min_dimension};
fn main() {
    let g = Graph::new(6, &[(0,1),(1,2),(2,3),(3,4),(4,5),(0,5)]).unwrap();
    let fam = BallFamily::strict(&g);
    println!("balls: {}", fam.len());
    let t = std::time::Instant::now();
    let (dim, _) = min_dimension(&fam);
    println!("solver dim = {dim} in {:?}", t.elapsed());
    let t = std::time::Instant::now();
    let o = oracle_min_dimension(&fam, 6).unwrap();
    println!("oracle = {o:?} in {:?}", t.elapsed());
}
