#pragma once

#include <numeric>
#include <vector>

namespace spillplan {

// Median-fractile oil quantities per sector at the start of a period.
// `landed` holds oil that came to rest on absorbing (shore) sectors in
// earlier periods; shore booms only act on the fresh arrivals on top of it.
struct OilState {
  std::vector<double> quantities;
  std::vector<double> landed;
  double fractile_p = 0.5;
  int period = 0;

  static OilState zero(std::size_t sectors, int period = 0) {
    return {std::vector<double>(sectors, 0.0), std::vector<double>(sectors, 0.0), 0.5, period};
  }

  double total() const { return std::accumulate(quantities.begin(), quantities.end(), 0.0); }

  bool operator==(const OilState&) const = default;
};

}  // namespace spillplan
