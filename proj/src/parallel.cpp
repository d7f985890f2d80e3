#include "qpcocycle/parallel.hpp"

#include <cstdlib>
#include <mutex>

namespace qpc::parallel {

namespace {
int g_workers = 0;  // 0 = not yet resolved
std::mutex g_mutex;

int resolve_default() {
  if (const char* env = std::getenv("COCYCLE_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw >= 1 ? static_cast<int>(hw) : 1;
}
}  // namespace

int worker_count() {
  std::lock_guard<std::mutex> lock(g_mutex);
  if (g_workers == 0) g_workers = resolve_default();
  return g_workers;
}

void set_worker_count(int n) {
  std::lock_guard<std::mutex> lock(g_mutex);
  g_workers = n >= 1 ? n : resolve_default();
}

}  // namespace qpc::parallel
