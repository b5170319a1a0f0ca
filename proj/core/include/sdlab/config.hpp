#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdlab/datum.hpp"
#include "sdlab/experiments.hpp"
#include "sdlab/quadrature.hpp"

namespace sdlab {

enum class ExperimentId {
    Thm41, Thm42, Thm43, Thm44, Thm45, Thm46, Thm47,
    Thm61, Thm62, Thm63,
    Lemma7, SweepL, SweepK, KernelCheck,
};

const char* experiment_name(ExperimentId id);
const char* experiment_blurb(ExperimentId id);
std::vector<ExperimentId> all_experiments();

struct ExperimentConfig {
    ExperimentId id = ExperimentId::KernelCheck;
    int n = 1;
    std::optional<double> l;
    std::optional<double> gamma;
    std::optional<int> k;
    double eps = 0.04;
    std::vector<DatumComponent> datum_u0;  // empty = experiment default
    std::vector<DatumComponent> datum_u1;
    bool custom_datum = false;
    TimeLadder ladder;
    QuadConfig quad;
    std::vector<double> l_values{0.0, 2.0};
    std::vector<int> k_values{0, 1};
    int jobs = 1;
    std::string out = "runs";
};

// Parse + validate + fill defaults.  Throws ConfigError with the offending
// field path in the message.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

// Canonical JSON of everything that affects the numbers (out/jobs dropped,
// defaults materialized); the cache key is the FNV-1a hash of this string.
std::string canonical_config(const ExperimentConfig& cfg);
std::string config_digest(const ExperimentConfig& cfg);

} // namespace sdlab
