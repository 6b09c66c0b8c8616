#pragma once
// Batched protocol execution with reproducible parallelism. Run i of a batch
// always uses the derived stream (seed, i) regardless of how runs are split
// across threads, so stats and record logs are identical for any thread
// count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matchsim/coherent.hpp"

namespace matchsim::runner {

struct BatchConfig {
    Protocol protocol = Protocol::kSamplingMatching;
    int n = 0;
    double mu = 0.0;
    coherent::ImperfectionModel model;
    std::optional<int> phi;          // SM only; random per run when unset
    std::optional<BitString> fixed_x;  // random per run when unset
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    bool include_dark = false;
    bool post_select = false;
    int threads = 1;  // <= 1 means serial
};

struct BatchResult {
    coherent::RunStats stats;
    // Serialized records in run order; filled only when keep_records is set.
    std::vector<std::string> record_lines;
};

BatchResult run_batch(const BatchConfig& config, bool keep_records = false);

// Default thread count: the MATCHSIM_THREADS environment variable when set
// and positive, otherwise 1.
int default_threads();

}  // namespace matchsim::runner
