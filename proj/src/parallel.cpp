#include "twedge/parallel.hpp"

#include <cstdlib>
#include <string>

namespace twedge {

int default_thread_count() {
  if (const char* env = std::getenv("TWEDGE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

}  // namespace twedge
