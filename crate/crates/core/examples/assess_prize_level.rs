//! Prize-level percentiles, performance ratios and the likelihood of
//! publishing the world's most cited paper, from fitted power laws.

use double_rank::assessment::{
    assess, crossing_percentile, nobel_rates, rank1_percentile, AssessmentInput,
    EVALUATION_PERCENTILE_PRESET,
};
use double_rank::fit::PowerLawFit;

fn main() -> double_rank::Result<()> {
    let usa = PowerLawFit::supplied(376.42, 0.8522)?;
    let eu = PowerLawFit::supplied(272.83, 1.0689)?;

    let report = assess(&AssessmentInput {
        actor_fit: usa.clone(),
        reference_fit: Some(eu.clone()),
        world_paper_count: None,
        annual_target_count: Some(nobel_rates::USA_CHEMISTRY),
        at: None,
    })?;
    let x = report.nobel_percentile.unwrap();
    let ratio = report.ratio.unwrap();
    println!(
        "chemistry: {} prize-level papers a year sit at the top {x:.5}%",
        nobel_rates::USA_CHEMISTRY
    );
    println!(
        "  USA {:.3} vs EU {:.3}: ratio {:.2}",
        ratio.actor_value, ratio.reference_value, ratio.ratio
    );
    if let Some(xc) = crossing_percentile(&usa, &eu) {
        println!("  EU leads above the top {xc:.1}%");
    }

    let at = EVALUATION_PERCENTILE_PRESET;
    let preset = assess(&AssessmentInput {
        actor_fit: usa,
        reference_fit: Some(eu),
        world_paper_count: None,
        annual_target_count: None,
        at: Some(at),
    })?;
    println!(
        "  at the top {at}%: ratio {:.2}",
        preset.ratio.unwrap().ratio
    );

    let n = 17_501;
    println!(
        "\nmost cited of {n} papers = top {:.4}%",
        rank1_percentile(n)?
    );
    for (name, a, alpha) in [
        ("Germany", 7.84, 0.99),
        ("Spain", 2.12, 1.26),
        ("Brazil", 2.73, 1.74),
    ] {
        let r = assess(&AssessmentInput {
            actor_fit: PowerLawFit::supplied(a, alpha)?,
            reference_fit: None,
            world_paper_count: Some(n),
            annual_target_count: None,
            at: None,
        })?;
        println!(
            "  {name:<8} likelihood {:.2e}",
            r.rank1.unwrap().actor_likelihood.value
        );
    }
    Ok(())
}
