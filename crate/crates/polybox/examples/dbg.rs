use polybox::census::{census, pipeline_over};
use polybox::error::Budget;
use std::time::Instant;

fn main() {
    let t = Instant::now();
    let r = census(6, 2, 5..=10, Budget::UNLIMITED).unwrap();
    eprintln!("census total {} classes {} in {:?}", r.total_covers, r.class_count, t.elapsed());
    let p = pipeline_over(&r, 16, Budget::UNLIMITED).unwrap();
    eprintln!("nonempty first levels: {:?}", p.nonempty_first_levels());
    eprintln!("second all empty: {}", p.all_second_levels_empty());
    eprintln!("total {:?}", t.elapsed());
}
