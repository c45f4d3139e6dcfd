//! Produce the machine-readable reports of the `dle` binary from code.
//!
//! Run with `cargo run --example json_report`.

use dle::lattice::fixtures;
use dle::report::{self, Command, Input, RunConfig};

fn main() -> dle::Result<()> {
    let input = Input::parse(fixtures::EXAMPLE_6_2)?;

    let analyze = report::run(&RunConfig::new(Command::Analyze), Some(&input))?;
    println!("{}", analyze.to_json());

    let mut evolve = RunConfig::new(Command::Evolve);
    evolve.y0 = Some(vec![1., 0., 0., 0., 0., 0.]);
    let rejected = report::run(&evolve, Some(&input))?;
    println!("status {} (exit code {})", rejected.status.name(), rejected.exit_code());

    evolve.y0 = Some(vec![2., 0., 0., -1., 0., 0.]);
    evolve.seed = Some(7);
    print!("{}", report::run(&evolve, Some(&input))?.to_text());
    Ok(())
}
