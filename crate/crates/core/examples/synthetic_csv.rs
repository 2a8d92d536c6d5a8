//! Writes a synthetic table with the student-performance schema to stdout.
//!
//! ```text
//! cargo run --example synthetic_csv -- 395 7 > synthetic.csv
//! ```

use studentnet::dataset::synthetic;

fn main() {
    let mut args = std::env::args().skip(1);
    let n = args.next().map_or(395, |a| a.parse().expect("row count"));
    let seed = args.next().map_or(7, |a| a.parse().expect("seed"));
    print!("{}", synthetic::to_csv(&synthetic::generate(n, seed)));
}
