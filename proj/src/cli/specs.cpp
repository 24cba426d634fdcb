#include <cmath>
#include <sstream>

#include "singtrace/cli.hpp"
#include "singtrace/error.hpp"

namespace singtrace::cli {
namespace {

std::pair<std::string, std::string> split_head(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, ""};
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

double parse_real(const std::string& text, const std::string& context) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v))
    throw ArgumentError("bad number '" + text + "' in " + context);
  return v;
}

unsigned parse_count(const std::string& text, const std::string& context) {
  const double v = parse_real(text, context);
  if (v < 0 || v != std::floor(v) || v > 1e9)
    throw ArgumentError("expected a nonnegative integer in " + context);
  return static_cast<unsigned>(v);
}

}  // namespace

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(item, "'" + text + "'"));
  if (out.empty()) throw ArgumentError("empty list");
  return out;
}

DecreasingSequence parse_sequence(const std::string& spec) {
  const auto [head, arg] = split_head(spec);
  if (head == "harmonic" && arg.empty()) return harmonic();
  if (head == "oscillating" && arg.empty()) return oscillating_model();
  if (head == "power") return power_decay(parse_real(arg, spec));
  if (head == "geometric") return geometric(parse_real(arg, spec));
  if (head == "psi-inc") return psi_increments(parse_psi(arg));
  if (head == "file") return DecreasingSequence(read_sequence_csv(arg));
  if (head == "values") return explicit_sequence(parse_reals(arg), spec);
  throw ArgumentError("unknown sequence spec '" + spec + "'");
}

PsiFunction parse_psi(const std::string& spec) {
  const auto [head, arg] = split_head(spec);
  if (head == "log" && arg.empty()) return psi_log();
  if (head == "linear" && arg.empty()) return psi_linear();
  if (head == "dpss" && arg.empty()) return psi_dpss();
  if (head == "power") return psi_power(parse_real(arg, spec));
  if (head == "file") return PsiFunction::from_increments(read_sequence_csv(arg), spec);
  throw ArgumentError("unknown psi spec '" + spec + "'");
}

LimitProcedure parse_limit(const std::string& spec, Index horizon) {
  const auto [head, arg] = split_head(spec);
  if (head == "cesaro") return LimitProcedure::cesaro(parse_count(arg, spec), horizon);
  if (head == "logmean" && arg.empty()) return LimitProcedure::log_mean(horizon);
  if (head == "tail") return LimitProcedure::tail_window(parse_real(arg, spec), horizon);
  if (head == "dilavg") {
    std::string factors = arg;
    unsigned order = 2;
    if (const auto at = arg.find('@'); at != std::string::npos) {
      factors = arg.substr(0, at);
      order = parse_count(arg.substr(at + 1), spec);
    }
    std::vector<unsigned> d;
    std::stringstream ss(factors);
    std::string item;
    while (std::getline(ss, item, ',')) d.push_back(parse_count(item, spec));
    return LimitProcedure::dilation_averaged(std::move(d), horizon, order);
  }
  throw ArgumentError("unknown limit spec '" + spec + "'");
}

}  // namespace singtrace::cli
