//! Concrete categories, crossed modules and assignment constructors.

mod abelian;
mod gl;
mod image;
mod mat;
mod monoids;
mod ssm;
mod tensor;

pub use abelian::{abelian_grid_assignment, AbelianModule, AbelianOp};
pub use gl::{
    gl_action, gl_feedback, gl_h_inv, gl_h_mul, GeneralLinear, GlDims, GlGroupElement, GlHElement,
};
pub use image::{
    face_from_boundary, face_n_block, image_edge_eta, image_grid_assignment, Image, ImageParams,
    IMAGE_DIMS,
};
pub use mat::{make_mat_assignment, DimProfile, Embedding, MatCategory, TemplateEmbedding};
pub use monoids::{
    make_max_assignment, make_product_assignment, make_sum_assignment, MatrixGroup, Max, Monoid,
    MonoidDelooping, Product, Sum,
};
pub use ssm::{make_ssm_assignment, SsmParams};
pub use tensor::{
    make_iis_assignment, make_iss_assignment, tensor_mul, truncated_exp, Alphabet, TensorAlgebra,
    TensorElement, Word, MAX_EXP_LEVEL,
};
