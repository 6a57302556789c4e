use std::time::Instant;

use polybox::census::{census, pipeline_over};
use polybox::error::Budget;

fn main() {
    let t0 = Instant::now();
    let report = census(5, 2, 5..=11, Budget::default()).unwrap();
    println!("census done in {:.1?}", t0.elapsed());
    let t1 = Instant::now();
    let pipe = pipeline_over(&report, 16, Budget::default()).unwrap();
    println!("pipeline done in {:.1?}", t1.elapsed());
    println!("nonempty first levels: {:?}", pipe.nonempty_first_levels());
    println!("second all empty: {}", pipe.all_second_levels_empty());
}
