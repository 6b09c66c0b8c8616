// matchsim: command-line front end for the matching-protocol simulator.
//
// Subcommands cover the classical bounds, Monte Carlo simulation of the
// photonic protocols, the closed-form error models, mean-photon-number
// optimization, quantum-advantage thresholds, resource curves, record-log
// aggregation, and the phase-drift tracker. Every stochastic subcommand
// requires an explicit --seed and produces byte-identical outputs when
// re-run with the same configuration.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "matchsim/classical.hpp"
#include "matchsim/coherent.hpp"
#include "matchsim/drift.hpp"
#include "matchsim/io.hpp"
#include "matchsim/resource.hpp"
#include "matchsim/runner.hpp"

namespace {

using matchsim::BitString;
using matchsim::Protocol;
namespace co = matchsim::coherent;
namespace rs = matchsim::resource;
namespace io = matchsim::io;
using ordered_json = nlohmann::ordered_json;

constexpr const char* kToolVersion = "matchsim 0.1.0";

void print_kv(const std::string& key, const std::string& value) {
    std::cout << key << '=' << value << '\n';
}

void print_kv(const std::string& key, double value) {
    print_kv(key, io::format_double(value));
}

void print_kv(const std::string& key, std::int64_t value) {
    print_kv(key, std::to_string(value));
}

// Imperfection flags shared by the photonic subcommands. --ideal overrides
// the individual knobs with the perfect device.
struct ModelFlags {
    double eta_det = 1.0;
    double eta_channel = 1.0;
    double visibility = 1.0;
    double p_dark = 0.0;
    bool ideal = false;

    void attach(CLI::App& cmd) {
        cmd.add_option("--eta-det", eta_det, "detector efficiency")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        cmd.add_option("--eta-channel", eta_channel, "channel transmission")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        cmd.add_option("--vis", visibility, "interference visibility")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        cmd.add_option("--p-dark", p_dark, "dark-click probability per detector per slot")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        cmd.add_flag("--ideal", ideal, "ignore the knobs above and use the perfect device");
    }

    co::ImperfectionModel build() const {
        if (ideal) return co::ImperfectionModel::ideal();
        co::ImperfectionModel m;
        m.eta_det = eta_det;
        m.eta_channel = eta_channel;
        m.visibility = visibility;
        m.p_dark = p_dark;
        m.validate();
        return m;
    }

    ordered_json echo() const {
        const auto m = build();
        return {{"eta_det", m.eta_det},
                {"eta_channel", m.eta_channel},
                {"visibility", m.visibility},
                {"p_dark", m.p_dark}};
    }
};

// Run metadata sufficient to reproduce every emitted file. The wall-clock
// entry is informational; the determinism contract covers the data files,
// not the manifest.
class ManifestWriter {
  public:
    ManifestWriter() : start_(std::chrono::steady_clock::now()) {}

    void set_config(ordered_json config) { config_ = std::move(config); }
    void add_output(const std::string& path) { outputs_.push_back(path); }

    void write_if(const std::string& path) const {
        if (path.empty()) return;
        ordered_json j;
        j["tool"] = kToolVersion;
        j["config"] = config_;
        j["outputs"] = outputs_;
        j["wall_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
                .count();
        io::write_lines(path, {j.dump()});
    }

  private:
    ordered_json config_;
    std::vector<std::string> outputs_;
    std::chrono::steady_clock::time_point start_;
};

Protocol parse_protocol(const std::string& name) {
    return matchsim::protocol_from_string(name);
}

void require_even_n(int n) {
    if (n < 2 || n % 2 != 0)
        throw CLI::ValidationError("--n", "input size must be even and at least 2");
}

// bounds: classical message-size table for one (n, p).
void setup_bounds(CLI::App& app) {
    auto* cmd = app.add_subcommand("bounds", "classical message-size bounds");
    auto n = std::make_shared<int>(0);
    auto p = std::make_shared<double>(0.1);
    cmd->add_option("--n", *n, "input size")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--p", *p, "target error probability")->capture_default_str();
    cmd->callback([n, p] {
        if (*p <= 0.0 || *p >= 0.5)
            throw CLI::ValidationError("--p", "target must lie in (0, 0.5)");
        print_kv("n", static_cast<std::int64_t>(*n));
        print_kv("p_target", *p);
        print_kv("best_known_bits", matchsim::classical::best_known_message_size(*n, *p));
        print_kv("best_known_message",
                 static_cast<std::int64_t>(
                     matchsim::classical::best_known_message_size_ceil(*n, *p)));
        if (*n >= 2)
            print_kv("lower_bound_bits", matchsim::classical::lower_bound_bits(*n, *p));
    });
}

struct SimulateArgs {
    std::string protocol;
    int n = 0;
    double mu = 0.0;
    ModelFlags model;
    int phi = -1;
    std::string x_bits;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    int threads = 0;
    bool include_dark = false;
    bool post_select = false;
    std::string out;
    std::string records;
    std::string manifest;
};

// simulate: Monte Carlo batch of photonic protocol runs.
void setup_simulate(CLI::App& app) {
    auto* cmd = app.add_subcommand("simulate", "Monte Carlo protocol batches");
    auto a = std::make_shared<SimulateArgs>();
    a->threads = matchsim::runner::default_threads();
    cmd->add_option("--protocol", a->protocol, "hm or sm")
        ->required()
        ->check(CLI::IsMember({"hm", "sm"}));
    cmd->add_option("--n", a->n, "input size (even)")->required();
    cmd->add_option("--mu", a->mu, "total mean photon number")
        ->required()
        ->check(CLI::NonNegativeNumber);
    a->model.attach(*cmd);
    cmd->add_option("--phi", a->phi, "fix the extra phase bit (sm only)")
        ->check(CLI::Range(0, 1));
    cmd->add_option("--x", a->x_bits, "fix the input bit string");
    cmd->add_option("--trials", a->trials, "number of runs")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", a->seed, "master seed")->required();
    cmd->add_option("--threads", a->threads, "worker threads (default MATCHSIM_THREADS or 1)");
    cmd->add_flag("--include-dark", a->include_dark, "simulate dark counts");
    cmd->add_flag("--post-select", a->post_select, "report the conditional error");
    cmd->add_option("--out", a->out, "write the stats JSON here");
    cmd->add_option("--records", a->records, "write the per-run record log here");
    cmd->add_option("--manifest", a->manifest, "write run metadata here");
    cmd->callback([a] {
        require_even_n(a->n);
        ManifestWriter manifest;
        matchsim::runner::BatchConfig cfg;
        cfg.protocol = parse_protocol(a->protocol);
        cfg.n = a->n;
        cfg.mu = a->mu;
        cfg.model = a->model.build();
        if (a->phi >= 0) {
            if (cfg.protocol != Protocol::kSamplingMatching)
                throw CLI::ValidationError("--phi", "only meaningful for sm");
            cfg.phi = a->phi;
        }
        if (!a->x_bits.empty()) {
            cfg.fixed_x = BitString::parse(a->x_bits);
            if (cfg.fixed_x->size() != a->n)
                throw CLI::ValidationError("--x", "length must equal --n");
        }
        cfg.trials = a->trials;
        cfg.seed = a->seed;
        cfg.include_dark = a->include_dark;
        cfg.post_select = a->post_select;
        cfg.threads = a->threads;

        const auto result = matchsim::runner::run_batch(cfg, !a->records.empty());
        const auto stats_json = io::stats_to_json(result.stats);
        std::cout << stats_json << '\n';

        manifest.set_config({{"subcommand", "simulate"},
                             {"protocol", a->protocol},
                             {"n", a->n},
                             {"mu", a->mu},
                             {"model", a->model.echo()},
                             {"phi", a->phi >= 0 ? ordered_json(a->phi) : ordered_json()},
                             {"x", a->x_bits.empty() ? ordered_json() : ordered_json(a->x_bits)},
                             {"trials", a->trials},
                             {"seed", a->seed},
                             {"include_dark", a->include_dark},
                             {"post_select", a->post_select}});
        if (!a->out.empty()) {
            io::write_lines(a->out, {stats_json});
            manifest.add_output(a->out);
        }
        if (!a->records.empty()) {
            io::write_lines(a->records, result.record_lines);
            manifest.add_output(a->records);
        }
        manifest.write_if(a->manifest);
    });
}

struct AnalyticArgs {
    std::string protocol;
    std::vector<int> ns;
    std::vector<double> mus;
    ModelFlags model;
    std::string out;
    std::string manifest;
};

// analytic: closed-form error probabilities over an (n, mu) grid.
void setup_analytic(CLI::App& app) {
    auto* cmd = app.add_subcommand("analytic", "closed-form error grid");
    auto a = std::make_shared<AnalyticArgs>();
    cmd->add_option("--protocol", a->protocol, "hm or sm")
        ->required()
        ->check(CLI::IsMember({"hm", "sm"}));
    cmd->add_option("--n", a->ns, "input sizes (even)")->required()->delimiter(',');
    cmd->add_option("--mu", a->mus, "mean photon numbers")->required()->delimiter(',');
    a->model.attach(*cmd);
    cmd->add_option("--out", a->out, "write the CSV here");
    cmd->add_option("--manifest", a->manifest, "write run metadata here");
    cmd->callback([a] {
        ManifestWriter manifest;
        const Protocol protocol = parse_protocol(a->protocol);
        const auto model = a->model.build();
        const std::string header = "protocol,n,mu,p_error,p_error_post";
        std::vector<std::string> rows;
        for (int n : a->ns) {
            require_even_n(n);
            for (double mu : a->mus) {
                if (mu < 0.0)
                    throw CLI::ValidationError("--mu", "must be non-negative");
                rows.push_back(io::csv_row(
                    {a->protocol, std::to_string(n), io::format_double(mu),
                     io::format_double(rs::analytic_error(protocol, n, mu, model, false)),
                     io::format_double(rs::analytic_error(protocol, n, mu, model, true))}));
            }
        }
        std::cout << header << '\n';
        for (const auto& row : rows) std::cout << row << '\n';
        manifest.set_config({{"subcommand", "analytic"},
                            {"protocol", a->protocol},
                            {"n", a->ns},
                            {"mu", a->mus},
                            {"model", a->model.echo()}});
        if (!a->out.empty()) {
            io::write_csv(a->out, header, rows);
            manifest.add_output(a->out);
        }
        manifest.write_if(a->manifest);
    });
}

struct OptimizeArgs {
    std::string protocol;
    int n = 1000;
    ModelFlags model;
    double p_target = 0.1;
    bool post_select = false;
    double mu_max = 1e3;
    double tol = 1e-4;
};

// optimize-mu: minimal mean photon number reaching the target error.
void setup_optimize(CLI::App& app) {
    auto* cmd = app.add_subcommand("optimize-mu", "minimal mu for a target error");
    auto a = std::make_shared<OptimizeArgs>();
    cmd->add_option("--protocol", a->protocol, "hm or sm")
        ->required()
        ->check(CLI::IsMember({"hm", "sm"}));
    cmd->add_option("--n", a->n, "input size (even)")->capture_default_str();
    a->model.attach(*cmd);
    cmd->add_option("--p", a->p_target, "target error probability")->capture_default_str();
    cmd->add_flag("--post-select", a->post_select, "optimize the conditional error");
    cmd->add_option("--mu-max", a->mu_max, "search ceiling")->capture_default_str();
    cmd->add_option("--tol", a->tol, "bisection tolerance on mu")->capture_default_str();
    cmd->callback([a] {
        require_even_n(a->n);
        if (a->p_target <= 0.0 || a->p_target >= 1.0)
            throw CLI::ValidationError("--p", "target must lie in (0, 1)");
        const Protocol protocol = parse_protocol(a->protocol);
        const auto model = a->model.build();
        rs::OptimizerOptions opts;
        opts.mu_tolerance = a->tol;
        opts.mu_max = a->mu_max;
        const double mu =
            rs::optimal_mu(protocol, a->n, model, a->p_target, a->post_select, opts);
        print_kv("protocol", a->protocol);
        print_kv("n", static_cast<std::int64_t>(a->n));
        print_kv("p_target", a->p_target);
        print_kv("mu_opt", mu);
        print_kv("mu_per_pulse", mu / a->n);
        print_kv("p_error_at_opt",
                 rs::analytic_error(protocol, a->n, mu, model, a->post_select));
        print_kv("ti_log_n", rs::ti_quantum(a->n, mu, rs::TiMetric::kLogN));
        print_kv("ti_log_n_plus_e", rs::ti_quantum(a->n, mu, rs::TiMetric::kLogNPlusE));
    });
}

struct ThresholdArgs {
    std::string protocol;
    ModelFlags model;
    double p_target = 0.1;
    std::string metric = "log_n_plus_e";
    std::string bound = "best_known";
    std::int64_t n_max = 10'000'000;
    bool post_select = false;
};

// threshold: first even n where the quantum resource drops below classical.
void setup_threshold(CLI::App& app) {
    auto* cmd = app.add_subcommand("threshold", "smallest n with a quantum advantage");
    auto a = std::make_shared<ThresholdArgs>();
    cmd->add_option("--protocol", a->protocol, "hm or sm")
        ->required()
        ->check(CLI::IsMember({"hm", "sm"}));
    a->model.attach(*cmd);
    cmd->add_option("--p", a->p_target, "target error probability")->capture_default_str();
    cmd->add_option("--metric", a->metric, "transmitted-information metric")
        ->check(CLI::IsMember({"log_n", "log_n_plus_e"}))
        ->capture_default_str();
    cmd->add_option("--bound", a->bound, "classical comparator")
        ->check(CLI::IsMember({"best_known", "lower_bound"}))
        ->capture_default_str();
    cmd->add_option("--n-max", a->n_max, "search ceiling")->capture_default_str();
    cmd->add_flag("--post-select", a->post_select, "compare the conditional error");
    cmd->callback([a] {
        if (a->p_target <= 0.0 || a->p_target >= 0.5)
            throw CLI::ValidationError("--p", "target must lie in (0, 0.5)");
        rs::ThresholdOptions opts;
        opts.n_max = a->n_max;
        const auto threshold = rs::advantage_threshold(
            parse_protocol(a->protocol), a->model.build(), a->p_target,
            rs::ti_metric_from_string(a->metric),
            rs::classical_bound_from_string(a->bound), a->post_select, opts);
        print_kv("protocol", a->protocol);
        print_kv("metric", a->metric);
        print_kv("bound", a->bound);
        print_kv("p_target", a->p_target);
        if (threshold)
            print_kv("threshold_n", *threshold);
        else
            print_kv("threshold_n", "none");
    });
}

struct CurveArgs {
    std::string protocol;
    ModelFlags model;
    double p_target = 0.1;
    std::string metric = "log_n_plus_e";
    std::vector<std::int64_t> ns;
    std::int64_t n_min = 4;
    std::int64_t n_max = 1 << 20;
    int points = 25;
    bool post_select = false;
    std::string out;
    std::string manifest;
};

// curve: resource-vs-n table comparing quantum and classical costs.
void setup_curve(CLI::App& app) {
    auto* cmd = app.add_subcommand("curve", "resource curve over n");
    auto a = std::make_shared<CurveArgs>();
    cmd->add_option("--protocol", a->protocol, "hm or sm")
        ->required()
        ->check(CLI::IsMember({"hm", "sm"}));
    a->model.attach(*cmd);
    cmd->add_option("--p", a->p_target, "target error probability")->capture_default_str();
    cmd->add_option("--metric", a->metric, "transmitted-information metric")
        ->check(CLI::IsMember({"log_n", "log_n_plus_e"}))
        ->capture_default_str();
    cmd->add_option("--n", a->ns, "explicit n grid (even values)")->delimiter(',');
    cmd->add_option("--n-min", a->n_min, "geometric grid start")->capture_default_str();
    cmd->add_option("--n-max", a->n_max, "geometric grid end")->capture_default_str();
    cmd->add_option("--points", a->points, "geometric grid size")
        ->check(CLI::Range(2, 10000))
        ->capture_default_str();
    cmd->add_flag("--post-select", a->post_select, "use the conditional error");
    cmd->add_option("--out", a->out, "write the CSV here");
    cmd->add_option("--manifest", a->manifest, "write run metadata here");
    cmd->callback([a] {
        ManifestWriter manifest;
        std::vector<std::int64_t> grid = a->ns;
        if (grid.empty()) {
            if (a->n_min < 2 || a->n_max < a->n_min)
                throw CLI::ValidationError("--n-min/--n-max", "need 2 <= n-min <= n-max");
            const double lo = std::log(static_cast<double>(a->n_min));
            const double hi = std::log(static_cast<double>(a->n_max));
            for (int i = 0; i < a->points; ++i) {
                const double t = a->points == 1 ? 0.0 : static_cast<double>(i) / (a->points - 1);
                auto n = static_cast<std::int64_t>(std::llround(std::exp(lo + t * (hi - lo))));
                n += n % 2;  // protocols need even n
                if (n < 2) n = 2;
                if (grid.empty() || grid.back() < n) grid.push_back(n);
            }
        } else {
            for (std::int64_t n : grid)
                if (n < 2 || n % 2 != 0)
                    throw CLI::ValidationError("--n", "grid values must be even and >= 2");
        }
        const auto points = rs::resource_curve(
            parse_protocol(a->protocol), a->model.build(), a->p_target,
            rs::ti_metric_from_string(a->metric), grid, a->post_select);
        std::vector<std::string> rows;
        rows.reserve(points.size());
        for (const auto& pt : points)
            rows.push_back(io::resource_csv_row(pt, rs::ti_metric_from_string(a->metric),
                                                parse_protocol(a->protocol),
                                                a->post_select));
        std::cout << io::kResourceCsvHeader << '\n';
        for (const auto& row : rows) std::cout << row << '\n';
        manifest.set_config({{"subcommand", "curve"},
                            {"protocol", a->protocol},
                            {"p_target", a->p_target},
                            {"metric", a->metric},
                            {"model", a->model.echo()},
                            {"n_grid", grid},
                            {"post_select", a->post_select}});
        if (!a->out.empty()) {
            io::write_csv(a->out, io::kResourceCsvHeader, rows);
            manifest.add_output(a->out);
        }
        manifest.write_if(a->manifest);
    });
}

struct TableArgs {
    std::string records;
    bool post_select = false;
    std::string out;
    std::string manifest;
};

// table2: aggregate a record log into run statistics.
void setup_table(CLI::App& app) {
    auto* cmd = app.add_subcommand("table2", "aggregate a record log");
    auto a = std::make_shared<TableArgs>();
    cmd->add_option("--records", a->records, "record log to aggregate")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_flag("--post-select", a->post_select, "report the conditional error");
    cmd->add_option("--out", a->out, "write the stats JSON here");
    cmd->add_option("--manifest", a->manifest, "write run metadata here");
    cmd->callback([a] {
        ManifestWriter manifest;
        const auto records = io::read_record_log(a->records);
        const auto stats = co::aggregate_runs(records, a->post_select);
        const auto json = io::stats_to_json(stats);
        std::cout << json << '\n';
        manifest.set_config({{"subcommand", "table2"},
                            {"records", a->records},
                            {"post_select", a->post_select}});
        if (!a->out.empty()) {
            io::write_lines(a->out, {json});
            manifest.add_output(a->out);
        }
        manifest.write_if(a->manifest);
    });
}

struct DriftArgs {
    int blocks = 100;
    double sigma = 0.0;
    double intensity_noise = 0.0;
    std::uint64_t seed = 0;
    matchsim::drift::BlockLayout layout;
    std::string out;
    std::string manifest;
};

// drift: phase random walk with block-wise tracking and correction.
void setup_drift(CLI::App& app) {
    auto* cmd = app.add_subcommand("drift", "phase-drift tracking simulation");
    auto a = std::make_shared<DriftArgs>();
    cmd->add_option("--blocks", a->blocks, "number of pulse blocks")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--sigma", a->sigma, "phase step std, radians per pulse")
        ->required()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--intensity-noise", a->intensity_noise,
                    "relative noise on calibration samples")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--seed", a->seed, "master seed")->required();
    cmd->add_option("--block-size", a->layout.block_size, "pulses per block")
        ->capture_default_str();
    cmd->add_option("--protocol-pulses", a->layout.protocol_pulses,
                    "protocol pulses per block")
        ->capture_default_str();
    cmd->add_option("--alice-track", a->layout.alice_track, "first tracking segment")
        ->capture_default_str();
    cmd->add_option("--bob-track", a->layout.bob_track, "second tracking segment")
        ->capture_default_str();
    cmd->add_option("--out", a->out, "write the per-block CSV here");
    cmd->add_option("--manifest", a->manifest, "write run metadata here");
    cmd->callback([a] {
        ManifestWriter manifest;
        a->layout.validate();
        matchsim::Rng rng = matchsim::make_stream(a->seed, 0);
        const auto report = matchsim::drift::run_blocks(
            a->blocks, a->layout, {a->sigma, a->intensity_noise}, rng);
        print_kv("blocks", static_cast<std::int64_t>(a->blocks));
        print_kv("sigma", a->sigma);
        print_kv("intensity_noise", a->intensity_noise);
        print_kv("corrected_visibility", report.corrected_visibility);
        print_kv("uncorrected_visibility", report.uncorrected_visibility);
        manifest.set_config({{"subcommand", "drift"},
                            {"blocks", a->blocks},
                            {"sigma", a->sigma},
                            {"intensity_noise", a->intensity_noise},
                            {"seed", a->seed},
                            {"block_size", a->layout.block_size},
                            {"protocol_pulses", a->layout.protocol_pulses},
                            {"alice_track", a->layout.alice_track},
                            {"bob_track", a->layout.bob_track}});
        if (!a->out.empty()) {
            std::vector<std::string> rows;
            rows.reserve(report.blocks.size());
            for (const auto& b : report.blocks) rows.push_back(io::drift_csv_row(b));
            io::write_csv(a->out, io::kDriftCsvHeader, rows);
            manifest.add_output(a->out);
        }
        manifest.write_if(a->manifest);
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-way matching-protocol simulator and analyzer"};
    app.set_version_flag("--version", kToolVersion);
    app.set_config("--config", "", "flat key=value config file; flags win on conflict");
    app.require_subcommand(1);

    setup_bounds(app);
    setup_simulate(app);
    setup_analytic(app);
    setup_optimize(app);
    setup_threshold(app);
    setup_curve(app);
    setup_table(app);
    setup_drift(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
