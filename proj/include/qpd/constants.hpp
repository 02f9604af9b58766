#pragma once

// Single source of truth for validation thresholds and canonicalization
// tolerances. Tests assert against these same values.

namespace qpd::tol {

inline constexpr double hermitian_input = 1e-12;  // max |A - A^dag| entrywise
inline constexpr double reconstruction = 1e-10;   // ||U D U^dag - A||_F
inline constexpr double unitarity = 1e-10;        // ||U^dag U - I||_F
inline constexpr double unit_trace = 1e-12;       // |tr(rho) - 1|
inline constexpr double psd_floor = -1e-10;       // min eigenvalue of a state
inline constexpr double snap_spacing = 1e-9;      // canonical point lattice
inline constexpr double zero_weight = 1e-12;      // atom drop threshold
inline constexpr double imag_residue = 1e-8;      // numerics-bug guard
inline constexpr double weight_sum = 1e-10;       // |total mass - 1|

} // namespace qpd::tol
