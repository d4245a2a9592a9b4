// SPDX-License-Identifier: Apache-2.0
#include "dses/dither.hpp"

#include <cmath>
#include <stdexcept>

namespace dses {

void DitherSpec::validate() const {
  if (!(omega > 0.0)) throw std::invalid_argument("DitherSpec: omega must be > 0");
  if (!(chi > 0.0)) throw std::invalid_argument("DitherSpec: chi must be > 0");
  if (!(psi > 0.0)) throw std::invalid_argument("DitherSpec: psi must be > 0");
}

double DitherSpec::gamma() const { return std::sqrt(chi * psi); }

double DitherSpec::h_of(double w) const { return std::sqrt(chi) * w / omega; }

double DitherSpec::g_of(double w) const { return std::sqrt(psi) * w / omega; }

DitherDraw sample(const DitherSpec& spec, RandomStream& stream) {
  const double w = spec.omega * stream.rademacher();
  return DitherDraw{w, spec.h_of(w), spec.g_of(w)};
}

double dither_moment(const DitherSpec& spec, int m, int p) {
  if (m < 0 || p < 0) throw std::invalid_argument("dither_moment: m, p must be >= 0");
  const double hp = spec.h_of(spec.omega);
  const double gp = spec.g_of(spec.omega);
  const double plus = std::pow(hp, m) * std::pow(gp, p);
  const double minus = std::pow(-hp, m) * std::pow(-gp, p);
  return 0.5 * (plus + minus);
}

}  // namespace dses
