//! Downstream algorithms built on the factorizations and kernels: PCA and
//! kernel PCA, a kernel SVM with one-vs-one multiclass and cross-validated
//! γ search, least-squares solvers and eigenfaces.

mod eigenfaces;
mod grid;
mod lstsq;
mod multiclass;
mod pca;
mod svm;

pub use eigenfaces::{center_images, eigenfaces, reconstruction_errors, EigenfaceMethod, Eigenfaces};
pub use grid::{
    grid_search_cv, stratified_folds, GridRow, GridSearchConfig, GridSearchReport, SearchMode,
};
pub use lstsq::{
    ls_random_search, ls_solve_qr, normal_equation_residual, residual_norm, RandomSearchResult,
    RANK_TOL,
};
pub use multiclass::{accuracy, class_count, OneVsOne, OneVsOneClassifier, PairModel};
pub use pca::{center_columns, kernel_pca, pca_fit, pca_transform, KpcaEmbedding, PcaModel};
pub use svm::{svm_predict, svm_train, SvmModel, SvmParams};
