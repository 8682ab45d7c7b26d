//! Holds the `acceptance` test target, which runs the full verification
//! campaign across both crates and prints one verdict per criterion.
