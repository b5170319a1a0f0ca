#pragma once

#include <string>
#include <vector>

#include "sdlab/config.hpp"
#include "sdlab/experiments.hpp"

namespace sdlab {

enum class VerdictStatus { Pass, Fail, Degenerate };

struct Verdict {
    std::string name;
    VerdictStatus status = VerdictStatus::Pass;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string note;
};

struct RunRecord {
    std::string digest;
    std::vector<DecayCurve> curves;
    std::vector<Verdict> verdicts;
    std::string report;
    double wall_seconds = 0.0;
    bool from_cache = false;

    bool all_pass() const {
        for (const auto& v : verdicts)
            if (v.status == VerdictStatus::Fail) return false;
        return true;
    }
};

// Execute the harness mapped to the config id.
RunRecord run_experiment(const ExperimentConfig& cfg);

// Curves as CSV with columns exactly: t,value,region,experiment_id.
std::string curves_csv(const RunRecord& record);
// Plain-text verdict table: fitted slope, expected exponent, tolerance, verdict.
std::string render_report(const ExperimentConfig& cfg, const RunRecord& record);

// Cache root: SDLAB_CACHE_DIR overrides <out>/cache.
std::string cache_root(const std::string& out_dir);

// Run with write-through caching; identical configs reproduce identical
// bytes.  Emits curves.csv and report.txt under out_dir.
RunRecord run_cached(const ExperimentConfig& cfg, const std::string& out_dir,
                     bool use_cache);

// The datum an experiment runs with when the config does not override it.
InitialDatum experiment_datum(const ExperimentConfig& cfg);

} // namespace sdlab
