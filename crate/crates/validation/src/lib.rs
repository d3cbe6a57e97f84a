//! Holds the `acceptance` test target, which checks `gchtw-core` against
//! published numerical anchors.  Run it with
//! `cargo test -p gchtw-validation --test acceptance`.
