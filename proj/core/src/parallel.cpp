#include "lgp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace lgp {

namespace {
std::atomic<int> g_threads{1};

std::size_t chunk_count(std::size_t n, std::size_t chunk) { return chunk == 0 ? 0 : (n + chunk - 1) / chunk; }

// Runs job(c) for every chunk index c, distributing chunks across workers.
void run_chunks(std::size_t chunks, const std::function<void(std::size_t)>& job) {
  const auto workers = static_cast<std::size_t>(std::max(1, g_threads.load()));
  if (workers == 1 || chunks <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) job(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        job(c);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t spawn = std::min(workers, chunks) - 1;
  pool.reserve(spawn);
  for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}
}  // namespace

void set_thread_count(int threads) { g_threads.store(std::max(1, threads)); }
int thread_count() { return g_threads.load(); }

void parallel_for(std::size_t n, std::size_t chunk, const std::function<void(std::size_t, std::size_t)>& body) {
  chunk = std::max<std::size_t>(chunk, 1);
  run_chunks(chunk_count(n, chunk), [&](std::size_t c) { body(c * chunk, std::min(n, (c + 1) * chunk)); });
}

double parallel_sum(std::size_t n, std::size_t chunk, const std::function<double(std::size_t, std::size_t)>& partial) {
  chunk = std::max<std::size_t>(chunk, 1);
  std::vector<double> parts(chunk_count(n, chunk), 0.0);
  run_chunks(parts.size(), [&](std::size_t c) { parts[c] = partial(c * chunk, std::min(n, (c + 1) * chunk)); });
  CompensatedSum total;
  for (double p : parts) total.add(p);
  return total.value();
}

double parallel_max(std::size_t n, std::size_t chunk, const std::function<double(std::size_t, std::size_t)>& partial) {
  chunk = std::max<std::size_t>(chunk, 1);
  std::vector<double> parts(chunk_count(n, chunk), 0.0);
  run_chunks(parts.size(), [&](std::size_t c) { parts[c] = partial(c * chunk, std::min(n, (c + 1) * chunk)); });
  double m = 0.0;
  for (double p : parts) m = std::max(m, p);
  return m;
}

}  // namespace lgp
