//! Ratios `(1 − ŵ(κ)) / (μκ^α)` and `(1 − φ̃(s)) / (λs^β)` at dyadic probe
//! points; each column should settle at 1.

use fracwalk::asymptotics::{dyadic_probes, verify_lemma1, verify_lemma2, LemmaConstants};
use fracwalk::laws::{JumpLaw, WaitingLaw};

fn main() -> fracwalk::Result<()> {
    let jumps: Vec<JumpLaw> = ["gauss", "cpow:0.5", "cpow:1.5", "lpow:1"]
        .iter()
        .map(|t| t.parse())
        .collect::<Result<_, _>>()?;
    let waits: Vec<WaitingLaw> = ["exp", "cpow:0.5", "dpow:0.5"]
        .iter()
        .map(|t| t.parse())
        .collect::<Result<_, _>>()?;

    let mut columns = Vec::new();
    for j in &jumps {
        let lc = LemmaConstants { mu: LemmaConstants::mu_of(j)?, lambda: 1.0 };
        columns.push((j.to_string(), verify_lemma1(j, &lc, j.alpha())?));
    }
    for w in &waits {
        let lc = LemmaConstants { mu: 1.0, lambda: LemmaConstants::lambda_of(w)? };
        columns.push((w.to_string(), verify_lemma2(w, &lc, w.beta())?));
    }

    print!("{:>12}", "probe");
    for (name, _) in &columns {
        print!("{name:>11}");
    }
    println!();
    for (i, p) in dyadic_probes().iter().enumerate() {
        print!("{p:>12.3e}");
        for (_, r) in &columns {
            print!("{:>11.5}", r.ratios[i]);
        }
        println!();
    }
    print!("{:>12}", "converged");
    for (_, r) in &columns {
        print!("{:>11}", r.converged);
    }
    println!();
    Ok(())
}
