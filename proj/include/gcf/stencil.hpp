#pragma once

#include <span>
#include <vector>

namespace gcf {

/// Boundary treatment of a 1-D angular grid.
///   Periodic: nodes at 2*pi*i/N, wraps around.
///   PolarReflect: cell-centered nodes (j+1/2)*pi/M; ghosts mirror across
///   phi = 0 and phi = pi with the field's parity.
enum class Topology { Periodic, PolarReflect };

/// Parity of a field under reflection across a pole.
enum class Parity { Even, Odd };

/// Value at extended index i, with ghost handling.
double extended_value(std::span<const double> f, long i, Topology topo, Parity parity);

/// Fourth-order central first derivative.
std::vector<double> diff1(std::span<const double> f, double spacing, Topology topo,
                          Parity parity = Parity::Even);

/// Fourth-order central second derivative.
std::vector<double> diff2(std::span<const double> f, double spacing, Topology topo,
                          Parity parity = Parity::Even);

}  // namespace gcf
