#include "bipmap/alpha.h"

#include <cmath>
#include <stdexcept>

namespace bipmap {

double type_entropy(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("flipping rate outside [0, 1]");
  const auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
  return term(1.0 - alpha) + term(alpha);
}

double type_information(double alpha) { return 1.0 - type_entropy(alpha); }

double info_to_alpha(double info) {
  if (!(info >= 0.0 && info <= 1.0)) throw std::domain_error("information outside [0, 1] bits");
  if (info == 0.0) return 0.5;
  if (info == 1.0) return 0.0;
  // type_information is strictly decreasing on [0, 1/2]
  double lo = 0.0, hi = 0.5;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (type_information(mid) > info)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace bipmap
