// Eigenvalue histogram of a few band matrices next to the semicircle.

#include <cstdio>

#include "rbmlab/rbmlab.hpp"

int main() {
  using namespace rbmlab;
  const EnsembleSpec spec{build_variance_profile(EnsembleKind::kSimpleBand, 400, 20), 42};
  const auto edges = uniform_edges(-2.4, 2.4, 24);
  const auto h = dos_histogram(spec, edges, 10, default_workers());

  std::printf("%8s %10s %10s\n", "E", "density", "semicircle");
  for (std::size_t i = 0; i < h.bins(); ++i) {
    const double e = h.center(i);
    std::printf("%8.2f %10.4f %10.4f  ", e, h.density[i], rho_sc(e));
    for (int k = 0; k < static_cast<int>(h.density[i] * 120); ++k) std::putchar('#');
    std::putchar('\n');
  }
}
