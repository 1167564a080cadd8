//! Run selected acceptance criteria (default: the fast ones) and print their
//! status lines.
//!
//! ```bash
//! cargo run --release --example acceptance_criterion -- 2 3 6
//! ```

use landau::acceptance::Suite;

fn main() {
    let ids: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids = if ids.is_empty() { vec![2, 3, 6, 14] } else { ids };
    let mut suite = Suite::new();
    for id in ids {
        println!("{}", suite.run(id).line());
    }
}
