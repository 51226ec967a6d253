use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = match <unigroup_cli::Cli as clap::Parser>::try_parse_from(std::env::args()) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match unigroup_cli::run(&cli, &args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("unigroup: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
