#pragma once

#include <optional>

#include "lorgeo/lie_algebra.hpp"

namespace lorgeo {

/// Weight decomposition of S^2(G) induced by a root decomposition: the
/// Cartan group acts on symmetric forms q by pullback, scaling the block
/// V_lambda by e^{lambda(H)}. Weights are all sums alpha + beta over
/// roots-and-zero; blocks are bases of symmetric matrices in the original
/// algebra coordinates.
struct WeightDecomposition {
    RootDecomposition rootdec;
    std::vector<Vector> weights;                 // covectors on the cartan basis
    std::vector<std::vector<Matrix>> blocks;     // parallel to weights

    int weight_index(const Vector& lambda, double tol = tol::eps_root_cluster) const;
    int total_block_dim() const;
};

WeightDecomposition sym2_weight_decomposition(const RootDecomposition& rootdec);

/// V_lambda component of a symmetric matrix q; the components over all
/// weights sum back to q.
Matrix project_onto_weight_space(const WeightDecomposition& wd, const Matrix& q,
                                 const Vector& lambda);

/// One open chamber of the central hyperplane arrangement {alpha = 0}:
/// a unit representative and the sign of every covector on it.
struct Chamber {
    Vector representative;
    std::vector<int> sign_pattern;  // +1 / -1 per covector, in input order
};

/// Chambers of the arrangement cut out by the given covectors on R^dim,
/// enumerated over a deterministic direction grid (rank <= 3). Chambers are
/// returned in lexicographic sign-pattern order with -1 < +1.
std::vector<Chamber> chambers_of_covectors(const std::vector<Vector>& covectors, int dim);

std::vector<Chamber> chamber_representatives(const RootDecomposition& rootdec);

/// Direct sum of the root spaces with alpha(t) < 0, as a subspace of the
/// algebra. t is given in Cartan-basis coordinates.
Subspace negative_weight_subspace(const RootDecomposition& rootdec, const Vector& t,
                                  double eps_sign = tol::eps_root_sign);

/// The "at least 2" check on negative root-space dimensions: evaluated on
/// every chamber representative, with the sl(2,R)-factor boundary reported.
struct NegativeDimReport {
    std::vector<int> chamber_dims;  // parallel to chamber_representatives order
    int min_dim = 0;
    bool sl2r_factor = false;
    bool fact_holds = false;        // min_dim >= 2
    int counterexample_chamber = -1;
};

NegativeDimReport negative_dimension_fact(const LieAlgebra& a,
                                          const RootDecomposition& rootdec);

/// Witness of the diagonal non-properness criterion: a chamber direction t0
/// and a nonzero vector of V supported away from the coordinates whose
/// weight is negative (side x) or positive (side y) on t0.
struct Lemma43Witness {
    Vector t0;
    char side;  // 'x' or 'y'
    Vector witness;
    int chamber_index;
};

std::optional<Lemma43Witness> lemma43_witness(const std::vector<Vector>& weights,
                                              const Subspace& v);

}  // namespace lorgeo
