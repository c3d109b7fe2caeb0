use singchain::chain::Chain;
use singchain::trains::{search_trains, SearchConfig};

fn main() {
    let base = Chain::parse("[3,2,2,3,4,3,2]").unwrap();
    let cfg = SearchConfig { budget: 6, collect_all: true, ..SearchConfig::default() };
    let out = search_trains(&base, &cfg);
    println!("explored={} capped={} exhausted={}", out.explored, out.capped, out.exhausted);
    for f in &out.found {
        println!("moves={} {}", f.moves, f.state);
    }
}
