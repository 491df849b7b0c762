//! Kauffman diagrams, the algebra they span and Temperley–Lieb immanants.

pub mod algebra;
pub mod diagram;
pub mod prematch;

pub use algebra::{
    all_immanants, f_coeff, f_table, immanant, permutation_image, FTable, Permutation, TLElement,
};
pub use diagram::{
    compose, diagrams, enumerate_diagrams, reflect_diagram, shift_diagram, tl_multiply,
    KauffmanDiagram,
};
pub use prematch::{
    compatible_set, complementary_b, decompose_product, generalized_submatrix, prematch,
    transport_diagram, ColoredPrematching, Decomposition, VertexColor,
};
