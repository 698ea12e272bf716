#pragma once

#include "lorgeo/geometry.hpp"
#include "lorgeo/weight_analysis.hpp"

namespace lorgeo {

/// Linear isometric action of a matrix Lie algebra on a model space: the
/// rep must sit inside the skew algebra of the ambient form, which makes
/// every Killing field tangent to the quadric.
class IsometricAction {
public:
    IsometricAction(LieAlgebra algebra, MatrixRep rep, ModelSpace space);

    /// Builtin orthogonal algebra acting by its defining rep.
    static IsometricAction standard(const std::string& algebra_name, ModelSpace space);

    const LieAlgebra& algebra() const { return algebra_; }
    const MatrixRep& rep() const { return rep_; }
    const ModelSpace& space() const { return space_; }

private:
    LieAlgebra algebra_;
    MatrixRep rep_;
    ModelSpace space_;
};

struct GaussSample {
    Vector x;
    BilinearForm phi;  // on the acting algebra
};

/// Killing field of X at x, i.e. rho(X) x.
Vector killing_field(const IsometricAction& a, const Vector& x_alg, const Vector& x);

/// Gauss map at x: phi(X, Y) = q(rho(X) x, rho(Y) x) on the algebra basis.
GaussSample gauss_map(const IsometricAction& a, const Vector& x);

/// || g . Phi_x - Phi_{g x} ||_max for an ambient isometry g normalizing
/// the rep image; the action on forms is pullback by Ad_{g^{-1}}.
double equivariance_residual(const IsometricAction& a, const Matrix& g, const Vector& x);

/// Kernel of X -> rho(X) x inside the algebra.
Subspace stabilizer_algebra(const IsometricAction& a, const Vector& x);

enum class OrbitType { Lorentz, Spacelike, Lightlike, Point };

std::string to_string(OrbitType t);

/// Causal type of the orbit through x: the signature of the ambient form
/// restricted to the orbit tangent space span{rho(e_i) x}.
OrbitType orbit_causal_type(const IsometricAction& a, const Vector& x);

struct WitnessCertificate {
    Vector chamber_t;               // Cartan coordinates, |t| = 1
    std::vector<int> sign_pattern;
    int dim_negative_space = 0;     // dim N_t
    bool fact_at_least_two = false; // the "at least 2" lower bound
    double phi_restriction_max = 0.0;  // max |Phi_x| on N_t
    bool sl2r_hypothesis_violated = false;
    // The condition tested is Phi_x|N_t == 0 for a chamber representative
    // t, a sufficient criterion; flagged so reports can say which reduction
    // produced the witness.
    bool interpretation_flag = true;
};

struct NonproperWitness {
    Vector x;
    Vector witness;  // algebra element X with rho(X) x = 0, ad-nilpotent
    WitnessCertificate certificate;
};

/// Deterministic candidate points: lightlike, then timelike, then spacelike
/// small-integer lattice directions at several scales, all placed on the
/// space (lattice points that cannot be scaled onto a quadric are dropped).
std::vector<Vector> candidate_lattice(const ModelSpace& space);

/// Seeded on-space samples (appended after the lattice by the search).
std::vector<Vector> candidate_samples(const ModelSpace& space, int count,
                                      std::uint64_t seed);

/// Search for a point whose stabilizer algebra meets the negative
/// root-space sum N_t of some chamber, with Phi_x vanishing on N_t. Any hit
/// is returned with a certificate; the returned element is ad-nilpotent and
/// kills x, independently checkable.
std::optional<NonproperWitness> nonproper_witness_search(
    const IsometricAction& a, const RootDecomposition& rootdec,
    const std::vector<Vector>& candidates);

/// Whether the stabilizer algebra of x acts irreducibly on the orbit
/// tangent space: no proper invariant subspace in the eigenspace lattice of
/// the induced generators and a commutant of division-algebra dimension.
bool isotropy_irreducibility(const IsometricAction& a, const Vector& x);

}  // namespace lorgeo
