//! Every variate is addressed by (seed, walker, step, channel).

use fracwalk::rng::{Channel, WalkerStream};

fn main() {
    let mut seq = WalkerStream::new(12345, 3);
    let first: Vec<f64> = (0..6).map(|_| seq.next_uniform()).collect();
    println!("walker 3, sequential: {first:.6?}");

    let mut ra = WalkerStream::new(12345, 3);
    println!("step 2 jump, direct:  {:.6}", ra.at(2, Channel::Jump));
    println!("step 0 wait, direct:  {:.6}", ra.at(0, Channel::Wait));
    println!("walker 4, step 0:     {:.6}", WalkerStream::new(12345, 4).at(0, Channel::Wait));
}
