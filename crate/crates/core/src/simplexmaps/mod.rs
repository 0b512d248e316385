//! Vertices, faces, centers, subdivision maps `sd_n^σ` and homotopy maps
//! `sd_{n,k}^σ` in barycentric matrix form, plus affine chart extraction.

pub mod centers;
pub mod chart;
pub mod maps;
pub mod matrix;
pub mod permutation;

pub use centers::{monomials_up_to, BarycentricPoint, CenterFamily, CenterMode};
pub use chart::{
    chart_matrix, homotopy_shape, ChartMatrix, ChartSpec, HomotopyShape, SimplexChart,
};
pub use maps::{
    all_homotopy_maps, all_subdivision_maps, compose, embed_center, face_map, first_projection,
    homotopy_map, subdivision_map, vertex, AffineSimplexMap, MapJson, ProductTargetMap,
};
pub use matrix::PolyMatrix;
pub use permutation::Permutation;
