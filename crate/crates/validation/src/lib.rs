//! Holds the `acceptance` test target, which prints one pass/fail line per
//! acceptance criterion and exits nonzero if any criterion fails.
//!
//! Run it alone with `cargo test -p kickent-validation --test acceptance`.
