//! Inverse-transform draws from every jump and waiting law, with the Hill
//! estimate of the tail index against the nominal exponent.

use fracwalk::cli::draw;
use fracwalk::laws::{JumpLaw, WaitingLaw};
use fracwalk::stats::{hill_estimator, sample_moments, SampleSet};

fn main() -> fracwalk::Result<()> {
    let n = 100_000;
    let k = 2000;
    println!("{:<12} {:>10} {:>10}", "law", "exponent", "hill");
    for token in ["cpow:0.5", "cpow:1", "cpow:1.5", "lpow:1.5"] {
        let law: JumpLaw = token.parse()?;
        let s = SampleSet::new(draw(n, 7, |u| law.sample(u))?)?;
        println!("{token:<12} {:>10} {:>10.3}", law.alpha().get(), hill_estimator(&s, k)?);
    }
    for token in ["cpow:0.5", "cpow:0.75", "dpow:0.5"] {
        let law: WaitingLaw = token.parse()?;
        let s = SampleSet::new(draw(n, 7, |u| law.sample(u))?)?;
        println!("{token:<12} {:>10} {:>10.3}", law.beta().get(), hill_estimator(&s, k)?);
    }
    let gauss = SampleSet::new(draw(n, 7, |u| JumpLaw::Gaussian.sample(u))?)?;
    let exp = SampleSet::new(draw(n, 7, |u| WaitingLaw::Exponential.sample(u))?)?;
    println!();
    println!("gauss mean/var {:?}", sample_moments(&gauss)?);
    println!("exp   mean/var {:?}", sample_moments(&exp)?);
    Ok(())
}
