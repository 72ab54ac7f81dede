#include "dmslice/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace dmslice::parallel {

namespace {

unsigned initial_workers() {
  if (const char* env = std::getenv("DMSLICE_WORKERS")) {
    try {
      int n = std::stoi(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (...) {
    }
  }
  return 1;
}

std::atomic<unsigned>& workers() {
  static std::atomic<unsigned> w{initial_workers()};
  return w;
}

}  // namespace

unsigned worker_count() { return workers().load(); }

void set_worker_count(unsigned n) { workers().store(n == 0 ? 1 : n); }

}  // namespace dmslice::parallel
