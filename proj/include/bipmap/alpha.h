#pragma once

namespace bipmap {

/// Binary entropy H(1 - alpha, alpha) in bits, with 0 log 0 = 0.
/// Throws std::domain_error for alpha outside [0, 1].
double type_entropy(double alpha);

/// Node-type information 1 - H(alpha) in bits.
double type_information(double alpha);

/// Inverts type_information() on the branch alpha in [0, 1/2] by bisection.
/// Throws std::domain_error for info outside [0, 1].
double info_to_alpha(double info);

}  // namespace bipmap
