#pragma once

#include <stdexcept>
#include <string>

namespace qpd {

// Base type for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// operators
struct NotHermitian : Error { using Error::Error; };
struct EigSolverFailure : Error { using Error::Error; };
struct NotUnitTrace : Error { using Error::Error; };
struct NotPSD : Error { using Error::Error; };
struct InvalidSpin : Error { using Error::Error; };
struct NormalizationMismatch : Error { using Error::Error; };
struct DimMismatch : Error { using Error::Error; };
struct TupleTooLarge : Error { using Error::Error; };

// qcf
struct NonFiniteInput : Error { using Error::Error; };
struct EmptyGrid : Error { using Error::Error; };

// measure
struct AtomBudgetExceeded : Error { using Error::Error; };
struct ImaginaryResidue : Error { using Error::Error; };
struct AxisOutOfRange : Error { using Error::Error; };

// spin_half
struct DegreeTooLarge : Error { using Error::Error; };
struct OverflowGuard : Error { using Error::Error; };

// wigner
struct BadGridSpec : Error { using Error::Error; };
struct QuadratureUnderresolved : Error { using Error::Error; };

// io
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct EmptyMeasure : Error { using Error::Error; };

} // namespace qpd
