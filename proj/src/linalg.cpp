#include "lorgeo/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace lorgeo::linalg {

Matrix canonicalize_columns(Matrix m, double tol) {
    std::vector<Vector> cols;
    cols.reserve(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        Vector c = m.col(j);
        double n = c.norm();
        if (n <= tol) continue;
        c /= n;
        Eigen::Index imax = 0;
        c.cwiseAbs().maxCoeff(&imax);
        if (c(imax) < 0) c = -c;
        cols.push_back(std::move(c));
    }
    // lexicographic order for scheduling-independent output
    std::sort(cols.begin(), cols.end(), [](const Vector& a, const Vector& b) {
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            if (a(i) < b(i) - 1e-14) return true;
            if (a(i) > b(i) + 1e-14) return false;
        }
        return false;
    });
    Matrix out(m.rows(), static_cast<Eigen::Index>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = cols[j];
    return out;
}

Matrix kernel_basis(const Matrix& a, double tol) {
    if (a.rows() == 0) return Matrix::Identity(a.cols(), a.cols());
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
    Matrix v = svd.matrixV();
    Matrix ker = v.rightCols(a.cols() - rank);
    return canonicalize_columns(ker);
}

Matrix column_space_basis(const Matrix& a, double tol) {
    if (a.cols() == 0 || a.rows() == 0) return Matrix(a.rows(), 0);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
    return canonicalize_columns(svd.matrixU().leftCols(rank));
}

int rank_of(const Matrix& a, double tol) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
    return rank;
}

Matrix intersect_column_spans(const Matrix& a, const Matrix& b, double tol) {
    if (a.cols() == 0 || b.cols() == 0) return Matrix(a.rows(), 0);
    // [a | -b] (x;y) = 0  =>  a x = b y lies in both spans
    Matrix stacked(a.rows(), a.cols() + b.cols());
    stacked << a, -b;
    Matrix ker = kernel_basis(stacked, tol);
    if (ker.cols() == 0) return Matrix(a.rows(), 0);
    Matrix inter = a * ker.topRows(a.cols());
    return canonicalize_columns(inter, tol);
}

std::optional<std::vector<EigenCluster>> real_eigen_clusters(
    const Matrix& a, double eps_imag, double eps_cluster) {
    const Eigen::Index n = a.rows();
    Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
    std::vector<double> values;
    values.reserve(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        auto ev = es.eigenvalues()(i);
        if (std::abs(ev.imag()) > eps_imag) return std::nullopt;
        values.push_back(ev.real());
    }
    std::sort(values.begin(), values.end());

    std::vector<EigenCluster> clusters;
    size_t i = 0;
    while (i < values.size()) {
        size_t j = i;
        double sum = 0.0;
        while (j < values.size() && values[j] - values[i] < eps_cluster) {
            sum += values[j];
            ++j;
        }
        double lambda = sum / static_cast<double>(j - i);
        Matrix eig = kernel_basis(a - lambda * Matrix::Identity(n, n),
                                  std::max(eps_cluster * 1e-2, 1e-10));
        if (eig.cols() < static_cast<Eigen::Index>(j - i)) return std::nullopt;  // defective
        clusters.push_back({lambda, eig});
        i = j;
    }
    Eigen::Index total = 0;
    for (const auto& c : clusters) total += c.basis.cols();
    if (total != n) return std::nullopt;
    return clusters;
}

Matrix common_kernel(int n, int count, const std::function<Matrix(int)>& op,
                     double tol) {
    Matrix kernel = Matrix::Identity(n, n);
    for (int i = 0; i < count && kernel.cols() > 0; ++i) {
        Matrix restricted = op(i) * kernel;
        Matrix ker = kernel_basis(restricted, tol);
        kernel = canonicalize_columns(kernel * ker);
    }
    return kernel;
}

Matrix restrict_operator(const Matrix& op, const Matrix& basis, double* residual) {
    Matrix image = op * basis;
    Matrix r = basis.colPivHouseholderQr().solve(image);
    if (residual) *residual = max_abs(basis * r - image);
    return r;
}

}  // namespace lorgeo::linalg
