#include "anisoflow/parallel.hpp"

#include <cstdlib>
#include <string>

namespace anisoflow {

int worker_count() {
  if (const char* env = std::getenv("ANISOFLOW_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace anisoflow
