#pragma once

#include <string>

#include "lorgeo/linalg.hpp"
#include "lorgeo/tolerances.hpp"

namespace lorgeo {

struct Signature {
    int n_pos = 0;
    int n_neg = 0;
    int n_null = 0;
    bool operator==(const Signature&) const = default;
};

std::string to_string(const Signature& s);

/// Symmetric bilinear form on R^dim. The matrix is symmetrized at
/// construction; the signature is the eigenvalue sign count at the given
/// null threshold.
class BilinearForm {
public:
    explicit BilinearForm(Matrix m, double eps_rank = tol::eps_rank);

    static BilinearForm diagonal(const Vector& d, double eps_rank = tol::eps_rank);
    static BilinearForm minkowski(int spatial_dim);  // diag(-1, 1, ..., 1) on R^{1,n}

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const Matrix& matrix() const { return matrix_; }
    const Signature& signature() const { return signature_; }
    bool is_degenerate() const { return signature_.n_null > 0; }

    double operator()(const Vector& v, const Vector& w) const;

private:
    Matrix matrix_;
    Signature signature_;
};

/// A linear subspace of R^ambient given by independent basis columns.
/// The zero subspace (no columns) is allowed.
class Subspace {
public:
    Subspace(int ambient_dim, Matrix basis, double eps_rank = tol::eps_rank);

    static Subspace zero(int ambient_dim);
    static Subspace full(int ambient_dim);
    static Subspace span_of(std::initializer_list<Vector> vectors,
                            double eps_rank = tol::eps_rank);

    int ambient_dim() const { return ambient_dim_; }
    int dim() const { return static_cast<int>(basis_.cols()); }
    const Matrix& basis() const { return basis_; }
    Vector basis_vector(int j) const { return basis_.col(j); }
    bool contains(const Vector& v, double tol = tol::eps_rank) const;

private:
    int ambient_dim_;
    Matrix basis_;
};

enum class CausalType { Timelike, Spacelike, Lightlike };

std::string to_string(CausalType t);

Signature signature(const BilinearForm& form);

CausalType causal_type(const BilinearForm& form, const Vector& v,
                       double eps_causal = tol::eps_causal);

Subspace orthogonal_complement(const BilinearForm& form, const Subspace& s);

BilinearForm restrict_form(const BilinearForm& form, const Subspace& s);

/// Witt index plus null degeneracy of the restriction of form to s:
/// min(n_pos, n_neg) + n_null.
int max_isotropic_dim(const BilinearForm& form, const Subspace& s);

}  // namespace lorgeo
