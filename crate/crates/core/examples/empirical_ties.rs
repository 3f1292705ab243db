//! Counting an actor's papers in world percentiles from citation lists,
//! with the two ways of handling papers tied at the boundary.

use double_rank::empirical::{
    build_curve, count_in_percentile, rank_descending, tie_blocks, ActorSelector, CitationList,
    PaperRecord, TiePolicy,
};
use double_rank::lognormal::Percent;

fn main() -> double_rank::Result<()> {
    // Ten world papers; the institution wrote three of them.
    let world = CitationList::new(vec![
        PaperRecord::new(5.0)
            .with_id("w1")
            .with_actor("inst")
            .with_secondary(40),
        PaperRecord::new(5.0).with_id("w2").with_secondary(55),
        PaperRecord::new(5.0)
            .with_id("w3")
            .with_actor("inst")
            .with_secondary(12),
        PaperRecord::new(5.0).with_id("w4").with_secondary(30),
        PaperRecord::new(2.0)
            .with_id("w5")
            .with_actor("inst")
            .with_secondary(9),
        PaperRecord::new(2.0).with_id("w6").with_secondary(3),
        PaperRecord::new(2.0).with_id("w7").with_secondary(2),
        PaperRecord::new(2.0).with_id("w8").with_secondary(8),
        PaperRecord::new(2.0).with_id("w9").with_secondary(1),
        PaperRecord::new(2.0).with_id("w10").with_secondary(0),
    ])?;

    let ranked = rank_descending(&world, TiePolicy::Proportional);
    for b in tie_blocks(&ranked) {
        println!(
            "tie block: {} citations at ranks {}..={}",
            b.citation_value, b.first_rank, b.last_rank
        );
    }

    // The top 30% is three papers, all drawn from the four-way tie at 5.
    let x = Percent::new(30.0)?;
    let inst = ActorSelector::Label("inst");
    let p = count_in_percentile(&world, inst, x, TiePolicy::Proportional)?;
    let s = count_in_percentile(&world, inst, x, TiePolicy::SecondaryKey)?;
    println!("\ntop 30%: proportional {p}, secondary key {s}");

    // Two-list mode: the actor's papers come as their own list.
    let actor = CitationList::from_citations([5.0, 5.0, 2.0])?;
    let curve = build_curve(
        &world,
        ActorSelector::List(&actor),
        &[100.0, 50.0, 30.0, 10.0],
        TiePolicy::Proportional,
    )?;
    println!("\ntwo-list curve:");
    for pt in curve.points() {
        println!("  top {:>3}%: {}", pt.percentile, pt.count);
    }
    Ok(())
}
