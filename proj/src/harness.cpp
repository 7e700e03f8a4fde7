#include "artsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace artsim {

namespace fs = std::filesystem;

void SweepSpec::validate() const {
    if (environments.empty() || policies.empty() || tx_levels.empty() || seeds.empty()) {
        throw std::invalid_argument("sweep lists must be non-empty");
    }
    std::set<std::uint64_t> distinct(seeds.begin(), seeds.end());
    if (distinct.size() != seeds.size()) {
        throw std::invalid_argument("sweep seeds must be distinct");
    }
    for (int level : tx_levels) {
        if (level < 0 || level > 3) {
            throw std::invalid_argument("tx level must be in 0..3");
        }
    }
    if (!(resolution_m > 0.0)) {
        throw std::invalid_argument("resolution must be positive");
    }
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_episode_seed(std::uint64_t master_seed, EnvKind env, Policy policy,
                                  int tx_level, std::uint64_t trial_seed) {
    std::uint64_t h = mix64(master_seed);
    h = mix64(h ^ static_cast<std::uint64_t>(env));
    h = mix64(h ^ static_cast<std::uint64_t>(policy));
    h = mix64(h ^ static_cast<std::uint64_t>(tx_level));
    h = mix64(h ^ trial_seed);
    return h;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

struct Job {
    EnvKind env;
    Policy policy;
    int tx_level;
    std::uint64_t trial_seed;
};

double sample_std(const std::vector<double>& values, double mean) {
    if (values.size() < 2) {
        return 0.0;
    }
    double acc = 0.0;
    for (double v : values) {
        acc += (v - mean) * (v - mean);
    }
    return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();

    std::vector<Job> jobs;
    for (EnvKind env : spec.environments) {
        for (Policy policy : spec.policies) {
            for (int level : spec.tx_levels) {
                for (std::uint64_t seed : spec.seeds) {
                    jobs.push_back({env, policy, level, seed});
                }
            }
        }
    }

    // One environment instance per kind, shared read-only across episodes.
    std::map<EnvKind, Environment> environments;
    for (EnvKind env : spec.environments) {
        environments.emplace(env, generate_environment(default_spec(env), spec.resolution_m));
    }

    SweepResult result;
    result.episodes.resize(jobs.size());
    result.metrics.resize(jobs.size());
    std::vector<std::uint8_t> failed(jobs.size(), 0);

    const bool need_trace = spec.write_trace || spec.write_heatmap || spec.base.record_trace;
    auto run_one = [&](std::size_t i) {
        const Job& job = jobs[i];
        EpisodeRow row;
        row.environment = job.env;
        row.policy = job.policy;
        row.tx_level = job.tx_level;
        row.seed = job.trial_seed;
        row.episode_seed =
            derive_episode_seed(spec.master_seed, job.env, job.policy, job.tx_level, job.trial_seed);
        try {
            EpisodeConfig config = spec.base;
            config.policy = job.policy;
            config.tx_level = job.tx_level;
            config.seed = row.episode_seed;
            config.record_trace = need_trace;
            EpisodeMetrics metrics = run_episode(config, environments.at(job.env));
            row.path_m = metrics.scout_path_distance_m;
            row.time_s = metrics.exploration_time_s;
            row.coverage_final = metrics.coverage_final;
            row.n_transmissions = static_cast<int>(metrics.transmissions.size());
            row.termination = termination_name(metrics.termination);
            result.metrics[i] = std::move(metrics);
        } catch (const std::exception& e) {
            row.errored = true;
            row.termination = "error";
            failed[i] = 1;
            std::cerr << "episode " << env_name(job.env) << "/" << policy_name(job.policy)
                      << "/level" << job.tx_level << "/seed" << job.trial_seed
                      << " failed: " << e.what() << "\n";
        }
        result.episodes[i] = std::move(row);
    };

    unsigned int workers = spec.jobs > 0 ? static_cast<unsigned int>(spec.jobs)
                                         : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned int>(workers, jobs.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            run_one(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= jobs.size()) {
                        return;
                    }
                    run_one(i);
                }
            });
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }

    result.error_count = static_cast<int>(std::count(failed.begin(), failed.end(), 1));

    // Aggregate in spec order; episodes that hit the time cap are excluded
    // from the means but still appear in the episode rows.
    for (EnvKind env : spec.environments) {
        for (int level : spec.tx_levels) {
            std::vector<std::size_t> group_rows;
            for (Policy policy : spec.policies) {
                SummaryRow summary;
                summary.environment = env;
                summary.policy = policy;
                summary.tx_level = level;
                std::vector<double> paths, times;
                for (std::size_t i = 0; i < jobs.size(); ++i) {
                    const EpisodeRow& row = result.episodes[i];
                    if (row.environment != env || row.policy != policy || row.tx_level != level) {
                        continue;
                    }
                    if (row.errored) {
                        continue;
                    }
                    if (row.termination != termination_name(Termination::FrontiersExhausted)) {
                        std::cerr << "warning: episode " << env_name(env) << "/"
                                  << policy_name(policy) << "/level" << level << "/seed"
                                  << row.seed << " hit the mission time cap; excluded from means\n";
                        continue;
                    }
                    paths.push_back(row.path_m);
                    times.push_back(row.time_s);
                }
                summary.trials = static_cast<int>(paths.size());
                if (!paths.empty()) {
                    double path_sum = 0.0, time_sum = 0.0;
                    for (double v : paths) path_sum += v;
                    for (double v : times) time_sum += v;
                    summary.path_mean_m = path_sum / paths.size();
                    summary.time_mean_s = time_sum / times.size();
                    summary.path_std_m = sample_std(paths, summary.path_mean_m);
                    summary.time_std_s = sample_std(times, summary.time_mean_s);
                }
                group_rows.push_back(result.summary.size());
                result.summary.push_back(summary);
            }
            // Flag the per-column minimum mean within this env/level block.
            double best_path = std::numeric_limits<double>::infinity();
            double best_time = std::numeric_limits<double>::infinity();
            for (std::size_t i : group_rows) {
                const SummaryRow& r = result.summary[i];
                if (r.trials == 0) continue;
                best_path = std::min(best_path, r.path_mean_m);
                best_time = std::min(best_time, r.time_mean_s);
            }
            for (std::size_t i : group_rows) {
                SummaryRow& r = result.summary[i];
                if (r.trials == 0) continue;
                r.best_path = r.path_mean_m == best_path;
                r.best_time = r.time_mean_s == best_time;
            }
        }
    }

    return result;
}

std::string episodes_csv(const std::vector<EpisodeRow>& rows) {
    std::ostringstream os;
    os << "env,policy,level,seed,path_m,time_s,coverage_final,n_transmissions,termination,"
          "episode_seed\n";
    for (const EpisodeRow& r : rows) {
        os << env_name(r.environment) << ',' << policy_name(r.policy) << ',' << r.tx_level << ','
           << r.seed << ',' << format_double(r.path_m) << ',' << format_double(r.time_s) << ','
           << format_double(r.coverage_final) << ',' << r.n_transmissions << ',' << r.termination
           << ',' << r.episode_seed << '\n';
    }
    return os.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream os;
    os << "env,policy,level,path_mean_m,path_std_m,time_mean_s,time_std_s,trials,best_path,"
          "best_time\n";
    for (const SummaryRow& r : rows) {
        os << env_name(r.environment) << ',' << policy_name(r.policy) << ',' << r.tx_level << ','
           << format_double(r.path_mean_m) << ',' << format_double(r.path_std_m) << ','
           << format_double(r.time_mean_s) << ',' << format_double(r.time_std_s) << ','
           << r.trials << ',' << (r.best_path ? 1 : 0) << ',' << (r.best_time ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
    std::ostringstream os;
    os << "tick,t_s,scout_x,scout_y,specialist_x,specialist_y,rssi_dbm,scout_mode,coverage\n";
    for (const TraceRow& r : trace) {
        os << r.tick << ',' << format_double(r.t_s) << ',' << format_double(r.scout.x) << ','
           << format_double(r.scout.y) << ',' << format_double(r.specialist.x) << ','
           << format_double(r.specialist.y) << ','
           << (std::isfinite(r.rssi_dbm) ? format_double(r.rssi_dbm) : std::string("-inf")) << ','
           << scout_mode_name(r.mode) << ',' << format_double(r.coverage) << '\n';
    }
    return os.str();
}

RssiHeatmap build_rssi_heatmap(const std::vector<TraceRow>& trace, const OccupancyGrid& grid) {
    if (trace.empty()) {
        throw std::invalid_argument("heatmap requires a non-empty trace");
    }
    RssiHeatmap map;
    map.width = grid.width();
    map.height = grid.height();
    map.resolution = grid.resolution();
    map.max_rssi_dbm.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
    for (const TraceRow& row : trace) {
        if (!std::isfinite(row.rssi_dbm)) {
            continue;
        }
        const CellIndex c = grid.cell_of(row.scout);
        if (!grid.in_bounds(c)) {
            continue;
        }
        double& slot = map.max_rssi_dbm[grid.index(c)];
        if (std::isnan(slot) || row.rssi_dbm > slot) {
            slot = row.rssi_dbm;
        }
    }
    return map;
}

std::string heatmap_to_csv(const RssiHeatmap& map) {
    std::ostringstream os;
    for (int y = map.height - 1; y >= 0; --y) {
        for (int x = 0; x < map.width; ++x) {
            const double v = map.max_rssi_dbm[static_cast<std::size_t>(y) * map.width + x];
            if (std::isnan(v)) {
                os << "nan";
            } else {
                os << format_double(v);
            }
            os << (x + 1 < map.width ? ',' : '\n');
        }
    }
    return os.str();
}

std::string heatmap_to_pgm(const RssiHeatmap& map) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : map.max_rssi_dbm) {
        if (!std::isnan(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    std::ostringstream os;
    os << "P2\n" << map.width << " " << map.height << "\n255\n";
    const double span = hi > lo ? hi - lo : 1.0;
    for (int y = map.height - 1; y >= 0; --y) {
        for (int x = 0; x < map.width; ++x) {
            const double v = map.max_rssi_dbm[static_cast<std::size_t>(y) * map.width + x];
            int out = 0;
            if (!std::isnan(v)) {
                out = 1 + static_cast<int>(std::lround((v - lo) / span * 254.0));
            }
            os << out << (x + 1 < map.width ? ' ' : '\n');
        }
    }
    return os.str();
}

void write_sweep_outputs(const SweepSpec& spec, const SweepResult& result) {
    fs::create_directories(spec.out_dir);
    const fs::path out(spec.out_dir);

    std::ofstream(out / "episodes.csv") << episodes_csv(result.episodes);
    std::ofstream(out / "summary.csv") << summary_csv(result.summary);

    if (spec.write_maps) {
        for (EnvKind env : spec.environments) {
            const Environment e = generate_environment(default_spec(env), spec.resolution_m);
            std::ofstream(out / (std::string(env_name(env)) + ".pgm")) << to_pgm(e.grid);
        }
    }

    if (spec.write_trace || spec.write_heatmap) {
        std::map<EnvKind, Environment> envs;
        for (std::size_t i = 0; i < result.episodes.size(); ++i) {
            const EpisodeRow& row = result.episodes[i];
            if (row.errored) {
                continue;
            }
            std::ostringstream stem;
            stem << env_name(row.environment) << '_' << policy_name(row.policy) << "_l"
                 << row.tx_level << "_s" << row.seed;
            if (spec.write_trace) {
                std::ofstream(out / (stem.str() + "_trace.csv"))
                    << trace_csv(result.metrics[i].trace);
            }
            if (spec.write_heatmap && !result.metrics[i].trace.empty()) {
                auto it = envs.find(row.environment);
                if (it == envs.end()) {
                    it = envs
                             .emplace(row.environment,
                                      generate_environment(default_spec(row.environment),
                                                           spec.resolution_m))
                             .first;
                }
                const RssiHeatmap map =
                    build_rssi_heatmap(result.metrics[i].trace, it->second.grid);
                std::ofstream(out / (stem.str() + "_heatmap.csv")) << heatmap_to_csv(map);
                std::ofstream(out / (stem.str() + "_heatmap.pgm")) << heatmap_to_pgm(map);
            }
        }
    }
}

}  // namespace artsim
