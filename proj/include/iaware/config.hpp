#pragma once

#include <cstdint>
#include <string>

#include "iaware/filter.hpp"
#include "iaware/metrics.hpp"
#include "iaware/scenario.hpp"

namespace iaware {

/// Everything one batch run needs. The seed fixes every random draw in the
/// run; the same config therefore reproduces byte-identical outputs.
struct RunConfig {
    ScenarioConfig scenario;
    FilterConfig filter;
    ExtractionMode extraction;
    OspaParams metrics;
    std::uint64_t seed = 1;
    std::string output_dir = "out";

    // Birth handling: explicit components live in filter.birth; when
    // birth_auto is set the model is derived from the configured scenario's
    // spawn states instead.
    bool birth_auto = false;
    double birth_auto_r = 0.2;
    // Spread of the derived birth components. The position spread bounds the
    // newborn gate radius, so it must stay well below half the scene's
    // inter-target distances or the exact association groups blow past their
    // size limits.
    double birth_auto_pos_std = 3.0;
    double birth_auto_vel_std = 3.0;
};

/// Loads a flat key-value config file ("section.key = value", '#' comments).
/// Unknown, missing, or ill-typed keys raise std::runtime_error naming the
/// key.
RunConfig load_run_config(const std::string& path);

/// Parses config text directly (same rules as load_run_config).
RunConfig parse_run_config(const std::string& text, const std::string& name = "<config>");

}  // namespace iaware
