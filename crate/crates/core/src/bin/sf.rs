use clap::Parser;
use snell_fagnano::cli::{run, Args};

fn main() {
    let args = Args::parse();
    let code = run(&args, &mut std::io::stdin(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
