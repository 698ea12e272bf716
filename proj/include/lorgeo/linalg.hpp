#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

namespace lorgeo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace linalg {

/// Orthonormal basis of ker(A), as matrix columns. Singular values <= tol
/// count as zero. Columns are canonicalized for deterministic output.
Matrix kernel_basis(const Matrix& a, double tol);

/// Orthonormal basis of the column space of A.
Matrix column_space_basis(const Matrix& a, double tol);

int rank_of(const Matrix& a, double tol);

/// Basis of span(a) ∩ span(b); both arguments are basis-column matrices
/// over the same ambient space.
Matrix intersect_column_spans(const Matrix& a, const Matrix& b, double tol);

/// Common kernel of a family of operators on R^n, intersected one operator
/// at a time (cheaper than one stacked decomposition when n is large).
/// The builder is called with indices 0..count-1.
Matrix common_kernel(int n, int count, const std::function<Matrix(int)>& op,
                     double tol);

/// Scale every column to unit norm with its largest-magnitude entry
/// positive; drop columns of norm <= tol. Makes SVD output reproducible.
Matrix canonicalize_columns(Matrix m, double tol = 0.0);

/// One real eigenvalue cluster of a (not necessarily symmetric) matrix.
struct EigenCluster {
    double value;
    Matrix basis;  // kernel of (A - value*I), orthonormal columns
};

/// Real spectrum of A grouped by clustering threshold. Returns nullopt when
/// the spectrum is not real or A is defective (sum of geometric
/// multiplicities < n).
std::optional<std::vector<EigenCluster>> real_eigen_clusters(
    const Matrix& a, double eps_imag, double eps_cluster);

/// Matrix of the restriction of op to the invariant subspace spanned by the
/// columns of basis, solved in the least-squares sense. residual reports
/// how far op is from actually preserving the span.
Matrix restrict_operator(const Matrix& op, const Matrix& basis, double* residual = nullptr);

inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace linalg
}  // namespace lorgeo
