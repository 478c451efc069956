//! Chern–Simons invariants of built-in examples, by exact coframe algebra
//! and by quadrature, with the checks that tie the two together.

mod base;
mod builtin;
mod example;
mod flat;
mod gauge;
mod normalization;
mod report;
mod section;
mod suite;
mod verdict;

pub use base::BaseManifold;
pub use builtin::{
    berger_lorentz_closed_form_connection, berger_lorentz_closed_form_value, berger_lorentz_example, mod_distance,
    rp3_equiaffine_example, run_example, run_section_change, s3_round_example, section_case_data, BuiltinExample,
    DumpedForm, ExampleOutcome, RunOptions, SectionCase, EXAMPLE_NAMES, OUT_OF_SCOPE_NAMES, ROUTE_TOL, SECTION_TOL,
};
pub use example::{cs_invariant_algebraic, cs_invariant_numeric, cs_invariant_quadrature, ConnectionSource, ExampleSpec};
pub use flat::{
    flat_extension_verify, round_s3_flat_extension, round_s3_frame_metric, sl4_sl3_decomposition,
    so4_so3_decomposition, FlatExtensionCheck, FlatExtensionReport, FLAT_SAMPLES, FLAT_TOL,
};
pub use gauge::{integrate_trace_cs, trace_cs_pointwise, FMat, GaugedChernSimons};
pub use normalization::{normalization_so4, normalization_so4_scaled, Normalization, NORMALIZATION_TOL};
pub use report::{ChartInfo, InvariantReport, Route, VERDICT_TOL};
pub use section::{constant_map, section_change_delta, SectionChange};
pub use suite::{run_suite, CheckResult, SuiteConfig, SuiteName, SuiteSummary, IDENTITY_TOL};
pub use verdict::{mod_one, mod_one_exact, obstruction_verdict, obstruction_verdict_exact, Verdict, VerdictContext};
