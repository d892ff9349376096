use clap::Parser;

use tracekernel_cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    let env = std::env::var("TRACEKERNEL_SEED").ok();
    let (code, out, err) = execute(&cli, env.as_deref());
    print!("{out}");
    eprint!("{err}");
    std::process::exit(code);
}
