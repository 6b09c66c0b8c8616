#include "matchsim/runner.hpp"

#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "matchsim/io.hpp"

namespace matchsim::runner {

namespace {

struct Tally {
    std::uint64_t no_click = 0;
    std::uint64_t wrong_click = 0;
    std::uint64_t wrong_total = 0;
};

}  // namespace

int default_threads() {
    const char* env = std::getenv("MATCHSIM_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    return v > 0 ? v : 1;
}

BatchResult run_batch(const BatchConfig& config, bool keep_records) {
    if (config.trials == 0) throw std::invalid_argument("trials must be positive");
    if (config.n < 2 || config.n % 2 != 0)
        throw std::invalid_argument("n must be even, >= 2");
    config.model.validate();
    if (config.fixed_x && config.fixed_x->size() != config.n)
        throw std::invalid_argument("fixed x does not match n");

    const MatchingSet ms = MatchingSet::build(config.n);
    const coherent::CoherentConfig cc{config.n, config.mu, config.phi};

    BatchResult result;
    if (keep_records) result.record_lines.resize(config.trials);
    std::vector<Tally> tallies;

    // Run i always consumes stream (seed, i); thread count only changes which
    // worker happens to execute it.
    const auto run_range = [&](std::uint64_t begin, std::uint64_t end, Tally& tally) {
        for (std::uint64_t i = begin; i < end; ++i) {
            Rng rng = make_stream(config.seed, i);
            const BitString x =
                config.fixed_x ? *config.fixed_x : BitString::random(config.n, rng);
            coherent::RunRecord rec;
            if (config.protocol == Protocol::kHiddenMatching) {
                const int index =
                    1 + static_cast<int>(uniform_index(
                            rng, static_cast<std::uint64_t>(config.n - 1)));
                const Matching m = ms.matching(index);
                rec = coherent::simulate_hm_run(x, m, cc, config.model, rng,
                                                config.include_dark);
            } else {
                rec = coherent::simulate_sm_run(x, cc, config.model, rng,
                                                config.include_dark);
            }
            if (rec.abstained) ++tally.no_click;
            if (!rec.correct) {
                ++tally.wrong_total;
                if (!rec.abstained) ++tally.wrong_click;
            }
            if (keep_records) result.record_lines[i] = io::record_to_line(rec);
        }
    };

    const int threads = config.threads;
    if (threads <= 1) {
        tallies.resize(1);
        run_range(0, config.trials, tallies[0]);
    } else {
        const auto workers = static_cast<std::uint64_t>(threads);
        tallies.resize(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint64_t chunk = (config.trials + workers - 1) / workers;
        for (std::uint64_t w = 0; w < workers; ++w) {
            const std::uint64_t begin = w * chunk;
            const std::uint64_t end = std::min(config.trials, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end, std::ref(tallies[w]));
        }
        for (auto& t : pool) t.join();
    }

    Tally total;
    for (const Tally& t : tallies) {
        total.no_click += t.no_click;
        total.wrong_click += t.wrong_click;
        total.wrong_total += t.wrong_total;
    }
    result.stats = coherent::stats_from_counts(
        config.protocol, config.mu / static_cast<double>(config.n), config.trials,
        total.no_click, total.wrong_click, total.wrong_total, config.post_select);
    return result;
}

}  // namespace matchsim::runner
