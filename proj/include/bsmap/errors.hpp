#pragma once

#include <stdexcept>
#include <string>

namespace bsmap {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// geometry
struct NotHyperbolicMap : Error { using Error::Error; };
struct FixesOrigin : Error { using Error::Error; };
struct CoincidentPoints : Error { using Error::Error; };

// group
struct InvalidOrder : Error { using Error::Error; };
struct SignatureRejected : Error { using Error::Error; };
struct PlacementFailure : Error { using Error::Error; };

// net
struct FanCountMismatch : Error { using Error::Error; };
struct GluingFailure : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };

// dynamics
struct AlphaOutsideOverlap : Error { using Error::Error; };
struct PrecisionExhausted : Error { using Error::Error; };

// analysis
struct NoFixedPointInOverlap : Error { using Error::Error; };
struct AmbiguousFixedPoint : Error { using Error::Error; };
struct NotMarkovCell : Error { using Error::Error; };
struct ConsistencyViolation : Error { using Error::Error; };

}  // namespace bsmap
