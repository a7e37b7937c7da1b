#pragma once

// Experiment orchestration: subcommand execution, deterministic replica
// scheduling, CSV emission and the run manifest. Replicas are independent
// jobs (own seeds, own observers) scheduled over a thread pool; results are
// written in replica-index order so outputs are byte-identical regardless of
// the parallelism degree.

#include <atomic>
#include <string>
#include <thread>
#include <vector>

#include "fluctlab/config.hpp"

namespace fluctlab {

inline constexpr const char* kVersion = "0.1.0";

// Runs `fn(replica)` for replica = 0..count-1 over `threads` workers. The
// callable must only touch state owned by its replica slot.
template <typename Fn>
void parallel_replicas(int count, int threads, Fn&& fn) {
  if (count <= 0) return;
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

// Executes one named pipeline; writes CSVs plus manifest.txt under out_dir.
// Returns 0 on success. Invalid configs surface as ConfigError before any
// output is written.
int run_subcommand(const ExperimentConfig& cfg, const std::string& subcommand,
                   const std::string& out_dir);

const std::vector<std::string>& subcommand_names();

}  // namespace fluctlab
