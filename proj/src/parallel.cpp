#include "langevin/parallel.hpp"

#include <cstdlib>
#include <string>

namespace langevin {
namespace {
std::atomic<int> g_threads{0};
}

int thread_count() {
  if (int n = g_threads.load(); n > 0) return n;
  if (const char* env = std::getenv("LANGEVIN_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_thread_count(int n) { g_threads = n > 0 ? n : 0; }

}  // namespace langevin
