//! Extending published top-10% and top-1% indicators to the top 0.1%,
//! 0.01% and 0.001% for the thirty countries in `data/`.

use std::fs::File;

use double_rank::io::read_rankings;
use double_rank::leiden::{extend_batch, ExtensionMethod, DEFAULT_TARGETS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/top_cited_countries.csv");
    let rows = read_rankings(File::open(path)?)?
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let mut extended = extend_batch(&rows, &DEFAULT_TARGETS, ExtensionMethod::ClosedForm)
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    extended.sort_by(|a, b| b.extended[2].value.total_cmp(&a.extended[2].value));

    println!(
        "{:<16} {:>9} {:>8} {:>6} {:>8} {:>9} {:>10}",
        "country", "top 10%", "top 1%", "alpha", "top 0.1%", "top 0.01%", "top 0.001%"
    );
    for r in &extended {
        println!(
            "{:<16} {:>9} {:>8} {:>6.3} {:>8.0} {:>9.2} {:>10.2}",
            r.base.name,
            r.base.p_top10,
            r.base.p_top1,
            r.fit.exponent,
            r.extended[0].value,
            r.extended[1].value,
            r.extended[2].value
        );
    }
    Ok(())
}
