// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dses/rng.hpp"

namespace dses {

// Two-point exploration law w ~ uniform{-omega, +omega} together with the odd
// maps h, g applied to it. The shipped maps are the linear pair
//   h(w) = sqrt(chi) * w / omega,   g(w) = sqrt(psi) * w / omega,
// normalized so that E[h^2] = chi and E[g^2] = psi hold exactly for any
// omega > 0. Nonlinear odd map pairs are an extension point: downstream code
// consumes only the drawn (w, h, g) triple, never the maps themselves.
struct DitherSpec {
  double omega = 1.0;
  double chi = 1.0;
  double psi = 1.0;

  void validate() const;

  // gamma = E[h g] = sqrt(chi psi)
  double gamma() const;

  double h_of(double w) const;
  double g_of(double w) const;
};

// One draw of the exploration triple. sign(h) == sign(g) == sign(w) always.
struct DitherDraw {
  double w = 0.0;
  double h = 0.0;
  double g = 0.0;
};

// Draws w = -omega or +omega with probability 1/2 each; successive draws from
// the same stream are independent.
DitherDraw sample(const DitherSpec& spec, RandomStream& stream);

// Exact E[h^m g^p] by two-point enumeration:
//   1/2 [ h(omega)^m g(omega)^p + h(-omega)^m g(-omega)^p ].
// Zero whenever m+p is odd.
double dither_moment(const DitherSpec& spec, int m, int p);

}  // namespace dses
