//! Runs every example so that they stay in sync with the library.

macro_rules! example_test {
    ($name:ident, $file:literal) => {
        #[path = $file]
        mod $name;

        #[test]
        fn $name() {
            $name::run_example().unwrap();
        }
    };
}

example_test!(unisolvence, "../examples/unisolvence.rs");
example_test!(interpolation, "../examples/interpolation.rs");
example_test!(jump_identities, "../examples/jump_identities.rs");
example_test!(poisson_solve, "../examples/poisson_solve.rs");
example_test!(convergence_study, "../examples/convergence_study.rs");
example_test!(patch_test, "../examples/patch_test.rs");
example_test!(consistency, "../examples/consistency.rs");
example_test!(export_files, "../examples/export_files.rs");
