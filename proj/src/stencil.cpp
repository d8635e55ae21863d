#include "gcf/stencil.hpp"

namespace gcf {

double extended_value(std::span<const double> f, long i, Topology topo, Parity parity) {
  const long n = static_cast<long>(f.size());
  if (topo == Topology::Periodic) {
    long k = i % n;
    if (k < 0) k += n;
    return f[static_cast<std::size_t>(k)];
  }
  double sign = 1.0;
  long k = i;
  // Stencils are at most two cells wide, so one reflection suffices.
  if (k < 0) {
    k = -k - 1;
    if (parity == Parity::Odd) sign = -sign;
  } else if (k >= n) {
    k = 2 * n - 1 - k;
    if (parity == Parity::Odd) sign = -sign;
  }
  return sign * f[static_cast<std::size_t>(k)];
}

std::vector<double> diff1(std::span<const double> f, double spacing, Topology topo,
                          Parity parity) {
  const long n = static_cast<long>(f.size());
  std::vector<double> out(f.size());
  const double scale = 1.0 / (12.0 * spacing);
  for (long i = 0; i < n; ++i) {
    const double m2 = extended_value(f, i - 2, topo, parity);
    const double m1 = extended_value(f, i - 1, topo, parity);
    const double p1 = extended_value(f, i + 1, topo, parity);
    const double p2 = extended_value(f, i + 2, topo, parity);
    out[static_cast<std::size_t>(i)] = ((m2 - p2) + 8.0 * (p1 - m1)) * scale;
  }
  return out;
}

std::vector<double> diff2(std::span<const double> f, double spacing, Topology topo,
                          Parity parity) {
  const long n = static_cast<long>(f.size());
  std::vector<double> out(f.size());
  const double scale = 1.0 / (12.0 * spacing * spacing);
  for (long i = 0; i < n; ++i) {
    const double m2 = extended_value(f, i - 2, topo, parity);
    const double m1 = extended_value(f, i - 1, topo, parity);
    const double c = f[static_cast<std::size_t>(i)];
    const double p1 = extended_value(f, i + 1, topo, parity);
    const double p2 = extended_value(f, i + 2, topo, parity);
    out[static_cast<std::size_t>(i)] = (16.0 * (m1 + p1) - (m2 + p2) - 30.0 * c) * scale;
  }
  return out;
}

}  // namespace gcf
