#pragma once

#include <stdexcept>
#include <string>

namespace lorgeo {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct ZeroVector : Error { using Error::Error; };
struct DegenerateBasis : Error { using Error::Error; };

struct JacobiViolation : Error {
    JacobiViolation(const std::string& msg, int i, int j, int k)
        : Error(msg), i(i), j(j), k(k) {}
    int i, j, k;  // offending basis triple
};

struct NotSemisimple : Error { using Error::Error; };
struct NotAbelian : Error { using Error::Error; };
struct NotSplitDiagonalizable : Error { using Error::Error; };
struct NotSkew : Error { using Error::Error; };
struct NotLorentz : Error { using Error::Error; };
struct AlgebraMismatch : Error { using Error::Error; };
struct UnknownAlgebra : Error { using Error::Error; };

struct RankTooLarge : Error { using Error::Error; };
struct UnknownWeight : Error { using Error::Error; };
struct NotGenerating : Error { using Error::Error; };

struct PointOffSpace : Error { using Error::Error; };
struct NotTangent : Error { using Error::Error; };
struct DegeneratePlane : Error { using Error::Error; };
struct BadCodimension : Error { using Error::Error; };
struct SamplingFailure : Error { using Error::Error; };

struct NonPositiveRadius : Error { using Error::Error; };
struct FlatFiber : Error { using Error::Error; };
struct NonConstantFiber : Error { using Error::Error; };

struct NotLorentzOrbit : Error { using Error::Error; };
struct NotIsometry : Error { using Error::Error; };

struct ParseError : Error { using Error::Error; };
struct UnknownCheck : Error { using Error::Error; };

}  // namespace lorgeo
