use fgame_cli::{parse_config, run, ConfigError};
use std::process::ExitCode;

fn main() -> ExitCode {
    if let Some(n) = std::env::var("FGAME_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        // fails only if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let config = match parse_config(std::env::args_os().skip(1)) {
        Ok(c) => c,
        Err(ConfigError::Info(text)) => {
            print!("{text}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("fgame: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&config) {
        Ok(bundle) => {
            for f in &bundle.files {
                println!("{}  {}", f.sha256, config.output_dir.join(&f.file).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("fgame: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
