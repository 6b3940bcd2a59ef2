//! Diagram categories with a fiber functor to free `B`-modules, the coend
//! coalgebra, and checks of the reconstruction and recognition statements.

pub mod coend;
pub mod diagram;
pub mod recognition;

pub use coend::{
    check_morphisms_are_comodule_maps, coend, coend_presentation, counit_map, essential_surjectivity_probe,
    flatness_check, is_coalgebra_morphism, lift_coaction, unit_fully_faithful_check, CoendPresentation, CoendResult,
    CounitResult, EssentialProbe, PairReport, PairVerdict,
};
pub use diagram::{hom_closure, DiagramCategory, HomSpan, Object};
pub use recognition::{recognition_check, RecognitionReport, Verdict, Witness};
