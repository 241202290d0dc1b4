//! Randomized counterexample search. With all hypotheses enforced the
//! inequalities survive; dropping one finds a violation quickly and shrinks
//! it to a small witness.

use fracjensen::jensen::{falsify, FalsifyConfig, InequalityId, Relaxation};

fn main() {
    let runs = [
        (InequalityId::JensenClassical, Relaxation::None, 500),
        (InequalityId::JensenClassical, Relaxation::DropConvexity, 500),
        (InequalityId::MJensenDiscrete, Relaxation::DropZeroInI, 10_000),
        (InequalityId::MercerDiscrete, Relaxation::DropRange, 2_000),
    ];
    for (id, relaxation, budget) in runs {
        println!("--- {} / {} (budget {budget})", id.name(), relaxation.name());
        match falsify(&FalsifyConfig::new(id, relaxation, budget, 42)) {
            None => println!("no counterexample found"),
            Some(cex) => {
                println!(
                    "counterexample at instance {} after {} shrink steps: {:?}",
                    cex.index, cex.shrink_steps, cex.kind
                );
                println!("  {}", cex.instance);
                println!("  witness: {}", cex.witness);
            }
        }
    }
}
