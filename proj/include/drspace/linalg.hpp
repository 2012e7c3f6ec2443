#pragma once

#include <Eigen/Dense>

#include <vector>

namespace drspace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

double max_abs(const Mat& m);
double max_abs(const Vec& v);

/// Orthonormal basis (columns) of the column span of `cols`, rank decided by
/// singular values above rel_tol * sigma_max.
Mat orthonormal_basis(const Mat& cols, double rel_tol = 1e-10);

/// Orthonormal basis of the kernel of `m`.
Mat null_space(const Mat& m, double rel_tol = 1e-10);

/// Orthonormal basis of the orthogonal complement of span(basis) in R^n.
Mat orthogonal_complement(const Mat& basis, int n);

/// Ascending eigenvalues of the symmetric part of `m`.
Vec sym_eigenvalues(const Mat& m);

/// Restriction of a symmetric form to span(basis): basis^T m basis.
Mat restrict_form(const Mat& m, const Mat& basis);

/// Sorted multiset distance between two spectra of equal length
/// (max |a_i - b_i| after sorting); infinity on length mismatch.
double spectrum_distance(Vec a, Vec b);

/// Horizontal concatenation of column blocks with equal row counts.
Mat hstack(const std::vector<Mat>& blocks, int rows);

}  // namespace drspace
