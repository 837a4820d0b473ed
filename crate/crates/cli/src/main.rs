use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = anisobound_cli::dispatch(std::env::args_os());
    let text = match &outcome.output {
        serde_json::Value::String(text) => text.clone(),
        v => serde_json::to_string_pretty(v).expect("serializable"),
    };
    // a closed pipe is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{text}");
    ExitCode::from(outcome.status as u8)
}
