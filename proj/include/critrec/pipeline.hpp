// Subcommand implementations behind the CLI: infer, stats, metrics,
// validate. The CLI binary is a thin argument-parsing shell around these so
// tests drive the same code paths.
#pragma once

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "critrec/io.hpp"

namespace critrec {

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InferOptions {
    std::vector<std::string> scenario_paths;
    std::string config_path;
    std::vector<std::string> overrides; // key=value
    std::string out_dir;
    std::string rules_path; // empty = embedded catalog
    std::vector<int> phenomena_filter; // empty = all
    bool scene_level_only = false;
    double sample_rate_hz = 0.0; // 0 = keep input rate
    int jobs = 1;
};

struct StatsOptions {
    std::vector<std::string> run_dirs;
    int cp_a = 0;
    int cp_b = 0;
    std::string table; // "n11,n10,n01,n00" direct entry
    bool rates = false;
};

struct MetricsOptions {
    std::vector<std::string> scenario_paths;
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
};

namespace pipeline_detail {

// TTC / required-acceleration series for every unordered pair of traffic
// participants that ever share a scene with kinematics
inline std::vector<MetricSeries> all_metric_series(const Scenario& sc, const Config& cfg) {
    std::set<std::pair<std::string, std::string>> pairs;
    for (const Scene& s : sc.scenes) {
        for (const Entity& a : s.entities) {
            if (!a.kinematics || !a.geometry || !kind_is_traffic_participant(a.kind)) continue;
            for (const Entity& b : s.entities) {
                if (&a == &b || !b.kinematics || !b.geometry ||
                    !kind_is_traffic_participant(b.kind))
                    continue;
                if (a.persistent_id < b.persistent_id)
                    pairs.insert({a.persistent_id, b.persistent_id});
            }
        }
    }
    std::vector<MetricSeries> series;
    for (const auto& [pa, pb] : pairs) {
        series.push_back(metric_series(sc, "ttc", pa, pb, cfg));
        series.push_back(metric_series(sc, "a_req", pa, pb, cfg));
    }
    return series;
}

inline Config make_config(const std::string& config_path, const std::vector<std::string>& overrides) {
    Config cfg = config_path.empty() ? Config{} : io::load_config(config_path);
    for (const std::string& kv : overrides) io::apply_cli_override(cfg, kv);
    validate_config(cfg);
    return cfg;
}

inline Catalog make_catalog(const std::string& rules_path, const Config& cfg) {
    if (rules_path.empty()) return default_catalog(cfg);
    std::ifstream in(rules_path);
    if (!in) throw CliError("cannot open rules file '" + rules_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_catalog(ss.str(), cfg);
}

// keep every k-th scene so the scenario matches the requested rate
inline Scenario resample(const Scenario& sc, double hz) {
    if (hz <= 0) return sc;
    const double target_period = 1.0 / hz;
    const double ratio = target_period / sc.sample_period;
    const long k = std::lround(ratio);
    if (k < 1 || std::abs(ratio - static_cast<double>(k)) > 1e-6)
        throw CliError("sample rate " + std::to_string(hz) +
                       " Hz is not an integer decimation of the input period");
    if (k == 1) return sc;
    Scenario out = sc;
    out.scenes.clear();
    out.sample_period = target_period;
    int index = 0;
    for (std::size_t i = 0; i < sc.scenes.size(); i += k) {
        Scene s = sc.scenes[i];
        s.index = index++;
        out.scenes.push_back(std::move(s));
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError("cannot write '" + path + "'");
    out << content;
}

inline std::string sanitize(const std::string& id) {
    std::string s = id;
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return s;
}

} // namespace pipeline_detail

// Runs inference over the scenario files and writes one directory per
// scenario (timeline.csv, abox.txt, summary.json) plus a batch index.
inline int run_infer(const InferOptions& opt, std::ostream& log = std::cerr) {
    const Config cfg = pipeline_detail::make_config(opt.config_path, opt.overrides);
    const Catalog catalog = pipeline_detail::make_catalog(opt.rules_path, cfg);
    if (opt.out_dir.empty()) throw CliError("infer needs --out");
    std::filesystem::create_directories(opt.out_dir);
    for (const int cp : opt.phenomena_filter)
        if (!catalog.find(cp)) throw CliError("--phenomena: unknown phenomenon id " + std::to_string(cp));

    struct Job {
        std::string path;
        std::string dir;
    };
    std::vector<Job> jobs;
    for (const std::string& path : opt.scenario_paths) jobs.push_back({path, ""});

    const auto process = [&](Job& job) {
        Scenario sc = io::load_scenario(job.path, cfg);
        sc = pipeline_detail::resample(sc, opt.sample_rate_hz);
        Session session(sc, catalog, cfg);
        InferenceResult res = session.run(opt.scene_level_only);
        if (!opt.phenomena_filter.empty()) {
            std::vector<PhenomenonOccurrence> kept;
            for (const PhenomenonOccurrence& o : res.occurrences) {
                for (const int cp : opt.phenomena_filter) {
                    const PhenomenonDef* def = catalog.find(cp);
                    if (def && def->cp_id == o.cp_id) {
                        kept.push_back(o);
                        break;
                    }
                }
            }
            res.occurrences = std::move(kept);
        }
        job.dir = opt.out_dir + "/" + pipeline_detail::sanitize(sc.id);
        std::filesystem::create_directories(job.dir);
        pipeline_detail::write_file(job.dir + "/timeline.csv", io::timeline_csv(catalog, res.occurrences));
        pipeline_detail::write_file(job.dir + "/metrics.csv",
                                    io::metrics_csv(pipeline_detail::all_metric_series(sc, cfg), sc));
        pipeline_detail::write_file(job.dir + "/abox.txt", io::abox_dump(session.world(), res.abox));
        pipeline_detail::write_file(job.dir + "/summary.json",
                                    io::summary_json(sc, res, session.world()));
    };

    if (opt.jobs > 1 && jobs.size() > 1) {
        std::vector<std::future<void>> futures;
        std::size_t next = 0;
        const std::size_t width = std::min<std::size_t>(opt.jobs, jobs.size());
        // simple bounded fan-out; output files are per-scenario so writers
        // never interleave
        while (next < jobs.size()) {
            futures.clear();
            for (std::size_t k = 0; k < width && next < jobs.size(); ++k, ++next)
                futures.push_back(std::async(std::launch::async, process, std::ref(jobs[next])));
            for (auto& f : futures) f.get();
        }
    } else {
        for (Job& job : jobs) process(job);
    }

    std::string index;
    for (const Job& job : jobs)
        index += std::filesystem::path(job.dir).filename().string() + "\n";
    pipeline_detail::write_file(opt.out_dir + "/runs.txt", index);
    log << "inferred " << jobs.size() << " scenario(s) into " << opt.out_dir << "\n";
    return 0;
}

inline int run_stats(const StatsOptions& opt, std::ostream& out) {
    // canonicalize phenomenon ids (aliases like 157 resolve to 160)
    int cp_a = opt.cp_a, cp_b = opt.cp_b;
    {
        const Config defaults;
        const Catalog cat = default_catalog(defaults);
        if (const PhenomenonDef* d = cat.find(cp_a)) cp_a = d->cp_id;
        if (const PhenomenonDef* d = cat.find(cp_b)) cp_b = d->cp_id;
    }
    ContingencyTable table;
    std::vector<ScenarioOccurrences> batch;
    if (!opt.table.empty()) {
        long vals[4];
        if (std::sscanf(opt.table.c_str(), "%ld,%ld,%ld,%ld", &vals[0], &vals[1], &vals[2],
                        &vals[3]) != 4)
            throw CliError("--table expects n11,n10,n01,n00");
        table = {vals[0], vals[1], vals[2], vals[3]};
    } else {
        if (opt.run_dirs.empty()) throw CliError("stats needs inferred run directories or --table");
        for (const std::string& dir : opt.run_dirs) batch.push_back(io::read_run_directory(dir));
        table = pair_contingency(batch, cp_a, cp_b);
    }
    out << "contingency n11=" << table.n11 << " n10=" << table.n10 << " n01=" << table.n01
        << " n00=" << table.n00 << "\n";
    if (const auto p = phi(table)) out << "phi " << io::format_number(*p) << "\n";
    else out << "phi undefined (zero marginal)\n";
    if (!batch.empty()) {
        if (const auto off = start_offsets(batch, cp_a, cp_b))
            out << "start_offset mean " << io::format_number(off->mean) << " std "
                << io::format_number(off->stddev) << " n " << off->count << "\n";
        else out << "start_offset empty (no co-occurring pairs)\n";
        if (opt.rates) {
            out << "rates partition,cp,scene_expanded,units,rate\n";
            for (const RateRow& r : cp_per_tp_per_scene(batch))
                out << "rate " << (r.partition.empty() ? "-" : r.partition) << "," << r.cp_id << ","
                    << r.scene_expanded_count << "," << r.scene_participant_units << ","
                    << io::format_number(r.rate) << "\n";
        }
    }
    return 0;
}

// TTC / required-acceleration series for every unordered pair of traffic
// participants that share a scene with kinematics.
inline int run_metrics(const MetricsOptions& opt, std::ostream& log = std::cerr) {
    const Config cfg = pipeline_detail::make_config(opt.config_path, opt.overrides);
    if (opt.out_dir.empty()) throw CliError("metrics needs --out");
    std::filesystem::create_directories(opt.out_dir);
    for (const std::string& path : opt.scenario_paths) {
        const Scenario sc = io::load_scenario(path, cfg);
        const std::string dir = opt.out_dir + "/" + pipeline_detail::sanitize(sc.id);
        std::filesystem::create_directories(dir);
        pipeline_detail::write_file(
            dir + "/metrics.csv", io::metrics_csv(pipeline_detail::all_metric_series(sc, cfg), sc));
        log << "metrics for " << sc.id << " -> " << dir << "\n";
    }
    return 0;
}

// Schema check only.
inline int run_validate(const std::vector<std::string>& paths, std::ostream& out) {
    const Config cfg;
    for (const std::string& path : paths) {
        io::load_scenario(path, cfg); // throws with diagnostics
        out << path << ": ok\n";
    }
    return 0;
}

} // namespace critrec
