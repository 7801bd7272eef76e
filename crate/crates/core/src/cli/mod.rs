//! Command-line front end: configuration, dispatch and the residual table.

mod config;
mod run;

pub use config::{
    default_tolerances, parse_config, parse_config_text, resolve, Cli, Command, Format, FunctionKind, OpChecks, RawOpts,
    RouteArg, RunConfig,
};
pub use run::{dispatch, Check, Outcome, Row};

use crate::error::Error;
use clap::error::ErrorKind;
use clap::Parser;

/// Exit statuses: 0 all asserted tolerances pass, 1 some tolerance fails,
/// 2 usage error, 3 any other error.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    if let Err(e) = Cli::try_parse_from(&argv) {
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
            print!("{e}");
            return 0;
        }
    }
    let result = parse_config(&argv).and_then(|cfg| dispatch(&cfg));
    match result {
        Ok(out) => {
            print!("{}", out.table());
            if out.passed() {
                0
            } else {
                1
            }
        }
        Err(Error::Usage(m)) => {
            eprintln!("usage error: {}", m.trim_end());
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}
