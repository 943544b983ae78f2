use std::io;
use std::process::ExitCode;
use std::thread;

/// Nested lazy streams recurse deeply; run on a thread with room for it.
const STACK_BYTES: usize = 512 << 20;

fn main() -> ExitCode {
    let worker = thread::Builder::new().stack_size(STACK_BYTES).spawn(|| {
        let (stdout, stderr) = (io::stdout(), io::stderr());
        topo_ramsey_cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
    });
    let code = match worker.map(|h| h.join()) {
        Ok(Ok(code)) => code,
        _ => 101,
    };
    ExitCode::from(code as u8)
}
