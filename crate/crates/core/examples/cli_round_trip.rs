//! Drives the command-line layer in process: write a family member to a
//! state file, then report on it.

fn main() {
    let dir = std::env::temp_dir().join("spinmus_cli_round_trip");
    std::fs::create_dir_all(&dir).expect("temporary directory");
    let path = dir.join("gibbs.json");
    let path = path.to_str().expect("utf-8 path");

    let code = spinmus::cli::main_with_args(["spinmus", "family", "gibbs", "--two-j", "2", "--s-prime", "0.5", "--out", path]);
    println!("family exit code {code}");
    let code = spinmus::cli::main_with_args(["spinmus", "report", path]);
    println!("report exit code {code}");
    let code = spinmus::cli::main_with_args([
        "spinmus", "recurrence", "--s", "2", "--t", "0.5", "--u", "1", "--v", "1", "--two-j", "2", "--require-consistent",
    ]);
    println!("recurrence exit code {code} (1 means inconsistent)");
}
