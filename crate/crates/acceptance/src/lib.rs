//! Holds the `acceptance` test target; run it with `cargo test -p artin-tcp-suite --test acceptance`.
