#include "singtrace/parallel.hpp"

#include <cstdlib>
#include <string>

namespace singtrace {

std::size_t worker_count() {
  std::size_t hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("SINGTRACE_THREADS")) {
    try {
      const long requested = std::stol(env);
      if (requested > 0) return std::min<std::size_t>(hw, requested);
    } catch (const std::exception&) {
      // unparsable value: fall back to the hardware count
    }
  }
  return hw;
}

}  // namespace singtrace
