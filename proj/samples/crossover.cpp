// Normalized characteristic polynomial correlator through the delocalization
// crossover. The transfer operator value moves from the sine kernel at n << W^2
// to 1 at n >> W^2; a small Monte Carlo run is shown for the first point.

#include <cstdio>

#include "rbmlab/rbmlab.hpp"

int main() {
  using namespace rbmlab;
  const double w = 10.0;
  const double xi = 0.25;
  std::printf("sine kernel %.5f\n", sine_kernel_ratio(xi));
  std::printf("%8s %10s %10s\n", "n", "transfer", "C limit");
  const double t_star = derived_constants(0.0).t_star;
  for (std::uint64_t n : {20u, 100u, 400u, 2000u, 20000u}) {
    const double c = static_cast<double>(n) / (w * w * t_star);
    std::printf("%8llu %10.5f %10.5f\n", static_cast<unsigned long long>(n),
                transfer_ratio(n, w, 0.0, xi).value.real(), intermediate_limit(c, xi).real());
  }

  const EnsembleSpec spec{build_variance_profile(EnsembleKind::kSmoothBand, 20, 10), 1};
  const auto mc = charpoly_ratio(spec, 0.0, {xi}, 4000, default_workers());
  std::printf("Monte Carlo n=20: %.4f +- %.4f\n", mc[0].mean.real(), mc[0].std_error);
}
