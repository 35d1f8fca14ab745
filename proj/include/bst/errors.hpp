#pragma once

#include <stdexcept>
#include <string>

namespace bst {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Configuration / input validation.
struct InvalidSpec : Error { using Error::Error; };
struct NonPositiveSpan : InvalidSpec { using InvalidSpec::InvalidSpec; };
struct TooFewPoints : InvalidSpec { using InvalidSpec::InvalidSpec; };
struct FormatError : InvalidSpec { using InvalidSpec::InvalidSpec; };

// Spectral-core numerics.
struct GridMismatch : Error { using Error::Error; };
struct ShiftOutOfGrid : Error { using Error::Error; };
struct NonSquareGrid : Error { using Error::Error; };
struct UnsupportedOrder : Error { using Error::Error; };
struct ZeroNorm : Error { using Error::Error; };

// Schmidt analysis.
struct NotNormalized : Error { using Error::Error; };
struct DecompositionFailure : Error { using Error::Error; };
struct RankOutOfRange : Error { using Error::Error; };

// HOM model and fitting.
struct NonRealResult : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct SingularJacobian : Error { using Error::Error; };

// Time-of-flight simulation.
struct EmptyDistribution : Error { using Error::Error; };
struct EmptyHistogram : Error { using Error::Error; };

// Phase inference.
struct NegativeInput : Error { using Error::Error; };
struct DegenerateCenters : Error { using Error::Error; };
struct EmptyCounts : Error { using Error::Error; };
struct Ambiguous : Error { using Error::Error; };

}  // namespace bst
