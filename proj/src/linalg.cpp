#include "drspace/linalg.hpp"

#include <algorithm>
#include <limits>

namespace drspace {

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
double max_abs(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

Mat orthonormal_basis(const Mat& cols, double rel_tol) {
    if (cols.cols() == 0) return Mat(cols.rows(), 0);
    Eigen::JacobiSVD<Mat> svd(cols, Eigen::ComputeThinU);
    const Vec& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return Mat(cols.rows(), 0);
    int r = 0;
    while (r < sv.size() && sv(r) > rel_tol * sv(0)) ++r;
    return svd.matrixU().leftCols(r);
}

Mat null_space(const Mat& m, double rel_tol) {
    const int n = static_cast<int>(m.cols());
    if (m.rows() == 0) return Mat::Identity(n, n);
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
    const Vec& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    int r = 0;
    if (top > 0.0)
        while (r < sv.size() && sv(r) > rel_tol * top) ++r;
    return svd.matrixV().rightCols(n - r);
}

Mat orthogonal_complement(const Mat& basis, int n) {
    if (basis.cols() == 0) return Mat::Identity(n, n);
    return null_space(basis.transpose());
}

Vec sym_eigenvalues(const Mat& m) {
    if (m.rows() == 0) return Vec(0);
    Mat s = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(s, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

Mat restrict_form(const Mat& m, const Mat& basis) { return basis.transpose() * m * basis; }

double spectrum_distance(Vec a, Vec b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::sort(a.data(), a.data() + a.size());
    std::sort(b.data(), b.data() + b.size());
    return max_abs(Vec(a - b));
}

Mat hstack(const std::vector<Mat>& blocks, int rows) {
    int cols = 0;
    for (const auto& b : blocks) cols += static_cast<int>(b.cols());
    Mat out(rows, cols);
    int c = 0;
    for (const auto& b : blocks) {
        if (b.cols() == 0) continue;
        out.middleCols(c, b.cols()) = b;
        c += static_cast<int>(b.cols());
    }
    return out;
}

}  // namespace drspace
