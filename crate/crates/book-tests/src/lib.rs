//! Book listings, compiled and run as doc-tests.

macro_rules! chapter {
    ($name:ident, $file:literal) => {
        #[doc = include_str!(concat!("../../../book/src/", $file))]
        pub mod $name {}
    };
}

chapter!(introduction, "introduction.md");
chapter!(series, "series.md");
chapter!(unit_roots, "unit_roots.md");
chapter!(critical_values, "critical_values.md");
chapter!(lag_selection, "lag_selection.md");
chapter!(johansen, "johansen.md");
chapter!(vecm, "vecm.md");
chapter!(causality, "causality.md");
chapter!(fcdi, "fcdi.md");
chapter!(diagnostics, "diagnostics.md");
chapter!(pipeline, "pipeline.md");
