#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lorgeo/pseudo_linalg.hpp"

namespace lorgeo {

/// Real Lie algebra given by structure constants c[i][j][k], meaning
/// [e_i, e_j] = sum_k c[i][j][k] e_k. Antisymmetry is enforced at
/// construction; the Jacobi identity is validated on all basis triples.
class LieAlgebra {
public:
    using Tensor = std::vector<std::vector<std::vector<double>>>;

    static LieAlgebra from_structure_constants(const Tensor& c,
                                               std::vector<std::string> labels = {});

    int dim() const { return dim_; }
    double c(int i, int j, int k) const { return ad_[static_cast<size_t>(i)](k, j); }
    const std::vector<std::string>& labels() const { return labels_; }

    /// ad of the i-th basis element; column j holds the coordinates of [e_i, e_j].
    const Matrix& ad_basis(int i) const { return ad_[static_cast<size_t>(i)]; }
    Matrix ad(const Vector& x) const;
    Vector bracket(const Vector& x, const Vector& y) const;

    bool same_structure(const LieAlgebra& other, double tol = 1e-12) const;

private:
    LieAlgebra() = default;
    int dim_ = 0;
    std::vector<Matrix> ad_;  // ad_[i] = ad(e_i)
    std::vector<std::string> labels_;
};

/// Finite-dimensional matrix representation: one matrix per basis element.
/// The homomorphism property is validated at construction.
struct MatrixRep {
    MatrixRep(LieAlgebra algebra, std::vector<Matrix> matrices,
              double eps_rep = tol::eps_rep);

    static MatrixRep trivial(const LieAlgebra& algebra, int rep_dim);
    static MatrixRep adjoint(const LieAlgebra& algebra);
    static MatrixRep direct_sum(const MatrixRep& a, const MatrixRep& b);

    Matrix rho(const Vector& x) const;
    int rep_dim() const { return static_cast<int>(matrices.front().rows()); }

    LieAlgebra algebra;
    std::vector<Matrix> matrices;
};

/// Root space decomposition of an algebra with respect to a split Cartan
/// subalgebra: G = G_0 + sum over roots of G_alpha. Roots are covectors
/// stored by their values on the Cartan basis, in canonical order with
/// opposite pairs present.
struct RootDecomposition {
    int algebra_dim = 0;
    Subspace cartan;
    std::vector<Vector> roots;        // covector values on the cartan basis
    std::vector<Subspace> spaces;     // parallel to roots
    Subspace zero_space;

    int rank() const { return cartan.dim(); }
    int root_index(const Vector& alpha, double tol = tol::eps_root_cluster) const;
};

// --- constructors -----------------------------------------------------------

/// Builtin algebra by name. Accepted: "so(1,n)", "so(2,n)", "so(n)",
/// "sl(n,R)" with 2 <= n <= 6. The basis of the orthogonal families is the
/// elementary pseudo-rotations M_ij = eps_j E_ij - eps_i E_ji, i < j, in
/// lexicographic order; sl(n,R) uses off-diagonal units plus the diagonal
/// differences H_i = E_ii - E_{i+1,i+1}.
struct BuiltinAlgebra {
    LieAlgebra algebra;
    MatrixRep standard_rep;
    std::optional<BilinearForm> preserved_form;  // for the orthogonal families
    std::optional<Subspace> split_cartan;        // shipped for so(1,n), so(2,n), sl(n,R)
};

BuiltinAlgebra builtin_algebra(const std::string& name);
bool is_builtin_algebra_name(const std::string& name);
std::vector<std::string> builtin_algebra_names();

/// Block direct sum of two algebras (structure constants side by side).
LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b);

// --- operations --------------------------------------------------------------

BilinearForm killing_form(const LieAlgebra& a);

bool is_semisimple(const LieAlgebra& a, double eps_rank = tol::eps_rank);

/// Pairwise Killing-orthogonal simple ideals whose direct sum is the
/// algebra. Requires semisimplicity.
std::vector<Subspace> simple_ideals(const LieAlgebra& a);

/// True iff some simple ideal has dimension 3 and split Killing signature
/// (2,1,0), the fingerprint of sl(2,R) among 3-dimensional simple algebras.
bool has_sl2r_factor(const LieAlgebra& a);

bool is_ad_nilpotent(const LieAlgebra& a, const Vector& x,
                     double eps_nilp = tol::eps_nilp);

RootDecomposition root_space_decomposition(const LieAlgebra& a, const Subspace& cartan);

/// A lightlike line preserved by every generator of the rep, or nullopt.
/// The rep must sit inside the skew algebra of the given Lorentz form.
std::optional<Vector> invariant_isotropic_line(const BilinearForm& form,
                                               const MatrixRep& rep);

/// Basis of linear maps f: E -> F with rho_F(X) f = f rho_E(X) for all X
/// (infinitesimal equivariance), from row reduction of the stacked system.
std::vector<Matrix> invariant_linear_maps(const MatrixRep& rep_e, const MatrixRep& rep_f);

/// Basis of antisymmetric bilinear maps E x E -> R^dim_f (trivial action on
/// the target) invariant under the rep. Each element is one antisymmetric
/// matrix per target component; with a trivial target the solution space is
/// dim_f independent copies, so the basis is returned as antisymmetric
/// matrices for a single component.
std::vector<Matrix> invariant_antisym_bilinear_maps(const MatrixRep& rep_e, int dim_f);

}  // namespace lorgeo
