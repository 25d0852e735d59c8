#include "kelab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace kelab::parallel {

namespace {

int resolve(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int from_environment() {
  const char* env = std::getenv("KE_LAB_THREADS");
  if (env == nullptr || *env == '\0') return resolve(0);
  try {
    return resolve(std::stoi(env));
  } catch (const std::exception&) {
    return resolve(0);
  }
}

std::atomic<int>& cap() {
  static std::atomic<int> value{from_environment()};
  return value;
}

}  // namespace

int max_threads() { return cap().load(std::memory_order_relaxed); }

void set_max_threads(int threads) { cap().store(resolve(threads), std::memory_order_relaxed); }

}  // namespace kelab::parallel
