//! Host crate for the `acceptance` test target; it exports nothing.
