//! Library half of the `lpacket` command-line tool: input parsing, report
//! schemas, and the verification suites the binary and the acceptance tests
//! share.

pub mod io;
pub mod suite;

use lpacket_core::ErrorKind;

/// Exit codes: 2 invalid input, 3 size bound, 4 failed check, 1 otherwise.
pub fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::InvalidInput => 2,
        ErrorKind::SizeBound => 3,
        ErrorKind::CheckFailed => 4,
        ErrorKind::Internal => 1,
    }
}
