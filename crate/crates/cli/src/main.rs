use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("ISOPROD_LOG")).init();
    let mut stdout = std::io::stdout().lock();
    ExitCode::from(isoprod_cli::run(std::env::args_os(), &mut stdout))
}
