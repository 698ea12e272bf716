#include "lorgeo/pseudo_linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "lorgeo/errors.hpp"

namespace lorgeo {

std::string to_string(const Signature& s) {
    return "(" + std::to_string(s.n_pos) + "," + std::to_string(s.n_neg) + "," +
           std::to_string(s.n_null) + ")";
}

std::string to_string(CausalType t) {
    switch (t) {
        case CausalType::Timelike: return "timelike";
        case CausalType::Spacelike: return "spacelike";
        case CausalType::Lightlike: return "lightlike";
    }
    return "?";
}

BilinearForm::BilinearForm(Matrix m, double eps_rank) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw ShapeError("bilinear form matrix must be square and nonempty");
    matrix_ = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double ev = es.eigenvalues()(i);
        if (ev > eps_rank)
            ++signature_.n_pos;
        else if (ev < -eps_rank)
            ++signature_.n_neg;
        else
            ++signature_.n_null;
    }
}

BilinearForm BilinearForm::diagonal(const Vector& d, double eps_rank) {
    return BilinearForm(Matrix(d.asDiagonal()), eps_rank);
}

BilinearForm BilinearForm::minkowski(int spatial_dim) {
    Vector d = Vector::Ones(spatial_dim + 1);
    d(0) = -1.0;
    return diagonal(d);
}

double BilinearForm::operator()(const Vector& v, const Vector& w) const {
    if (v.size() != dim() || w.size() != dim())
        throw DimensionMismatch("form evaluated on vectors of wrong dimension");
    return v.dot(matrix_ * w);
}

Subspace::Subspace(int ambient_dim, Matrix basis, double eps_rank)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)) {
    if (ambient_dim_ <= 0) throw ShapeError("ambient dimension must be positive");
    if (basis_.size() == 0) basis_.resize(ambient_dim_, 0);
    if (basis_.rows() != ambient_dim_)
        throw DimensionMismatch("basis vectors do not live in the ambient space");
    if (linalg::rank_of(basis_, eps_rank) != basis_.cols())
        throw DegenerateBasis("basis vectors are linearly dependent");
}

Subspace Subspace::zero(int ambient_dim) {
    return Subspace(ambient_dim, Matrix(ambient_dim, 0));
}

Subspace Subspace::full(int ambient_dim) {
    return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::span_of(std::initializer_list<Vector> vectors, double eps_rank) {
    if (vectors.size() == 0) throw ShapeError("span_of needs at least one vector");
    int ambient = static_cast<int>(vectors.begin()->size());
    Matrix b(ambient, static_cast<Eigen::Index>(vectors.size()));
    Eigen::Index j = 0;
    for (const auto& v : vectors) b.col(j++) = v;
    return Subspace(ambient, std::move(b), eps_rank);
}

bool Subspace::contains(const Vector& v, double tol) const {
    if (v.size() != ambient_dim_) throw DimensionMismatch("vector not in ambient space");
    if (dim() == 0) return v.norm() <= tol;
    Vector coeff = basis_.colPivHouseholderQr().solve(v);
    return (basis_ * coeff - v).norm() <= tol * std::max(1.0, v.norm());
}

Signature signature(const BilinearForm& form) { return form.signature(); }

CausalType causal_type(const BilinearForm& form, const Vector& v, double eps_causal) {
    if (v.size() != form.dim()) throw DimensionMismatch("causal_type: bad vector size");
    if (v.norm() == 0.0) throw ZeroVector("causal_type of the zero vector");
    double q = form(v, v);
    if (q < -eps_causal) return CausalType::Timelike;
    if (q > eps_causal) return CausalType::Spacelike;
    return CausalType::Lightlike;
}

Subspace orthogonal_complement(const BilinearForm& form, const Subspace& s) {
    if (s.ambient_dim() != form.dim())
        throw DimensionMismatch("orthogonal_complement: ambient dims differ");
    if (s.dim() == 0) return Subspace::full(form.dim());
    // w is orthogonal to s iff (Bᵀ F) w = 0
    Matrix constraints = s.basis().transpose() * form.matrix();
    Matrix ker = linalg::kernel_basis(constraints, tol::eps_rank);
    return Subspace(form.dim(), ker);
}

BilinearForm restrict_form(const BilinearForm& form, const Subspace& s) {
    if (s.ambient_dim() != form.dim())
        throw DimensionMismatch("restrict_form: ambient dims differ");
    if (s.dim() == 0) throw ShapeError("cannot restrict a form to the zero subspace");
    Matrix gram = s.basis().transpose() * form.matrix() * s.basis();
    return BilinearForm(gram);
}

int max_isotropic_dim(const BilinearForm& form, const Subspace& s) {
    Signature sig = restrict_form(form, s).signature();
    return std::min(sig.n_pos, sig.n_neg) + sig.n_null;
}

}  // namespace lorgeo
