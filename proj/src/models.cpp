#include <cmath>
#include <numbers>

#include "format.hpp"
#include "singtrace/error.hpp"
#include "singtrace/ideals.hpp"

namespace singtrace {

DecreasingSequence harmonic(Index horizon) {
  return DecreasingSequence::assume_sorted(Sequence::generator(
      "harmonic", horizon,
      [](Index k) { return 1.0 / (static_cast<double>(k) + 1.0); }));
}

DecreasingSequence power_decay(double beta, Index horizon) {
  if (!std::isfinite(beta)) throw ArgumentError("power decay needs finite beta");
  if (!(beta > 0.0))
    throw ConstructionError("power decay with beta <= 0 is not decreasing");
  return DecreasingSequence::assume_sorted(Sequence::generator(
      "power:" + detail::short_number(beta), horizon, [beta](Index k) {
        return std::pow(static_cast<double>(k) + 1.0, -beta);
      }));
}

DecreasingSequence geometric(double r, Index horizon) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw ArgumentError("geometric ratio must be positive and finite");
  if (r > 1.0) throw ConstructionError("geometric ratio > 1 is not decreasing");
  return DecreasingSequence::assume_sorted(Sequence::generator(
      "geometric:" + detail::short_number(r), horizon,
      [r](Index k) { return std::pow(r, static_cast<double>(k)); }));
}

DecreasingSequence psi_increments(const PsiFunction& psi, Index horizon) {
  if (horizon > psi.horizon()) throw HorizonError(horizon, psi.horizon());
  return psi.increments(horizon);
}

DecreasingSequence oscillating_model(Index horizon) {
  // a(t) = d/dt [log(1+t) g(t)], g = 1.5 + 0.5 sin(L), L = log log(e+t).
  return DecreasingSequence(Sequence::generator(
      "oscillating", horizon, [](Index k) {
        const double t = static_cast<double>(k);
        const double et = std::numbers::e + t;
        const double loget = std::log(et);
        const double big_l = std::log(loget);
        const double g = 1.5 + 0.5 * std::sin(big_l);
        const double dg = 0.5 * std::cos(big_l) / (loget * et);
        return g / (1.0 + t) + std::log1p(t) * dg;
      }));
}

DecreasingSequence explicit_sequence(std::vector<double> values,
                                     std::string label) {
  return DecreasingSequence(
      Sequence::from_values(std::move(values), std::move(label)));
}

}  // namespace singtrace
