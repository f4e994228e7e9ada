#include "relqi/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace relqi {

int default_worker_count() {
  const int hw = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("RELQI_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) return std::min(cap, hw);
    } catch (const std::exception&) {
    }
  }
  return hw;
}

}  // namespace relqi
