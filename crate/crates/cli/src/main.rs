use clap::Parser;
use sve_cli::{run_solve, Cli, Command, EXIT_OK};

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Solve(args) => match run_solve(&args) {
            Ok(files) => {
                for f in files {
                    println!("wrote {}", f.display());
                }
                EXIT_OK
            }
            Err(e) => {
                eprintln!("error: {}", e.message());
                e.exit_code()
            }
        },
    };
    std::process::exit(code);
}
