#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glemb/config.hpp"

namespace glemb {

/// How far each (network, representation) pair is carried.
enum class Stage { Graphlets, Represent, Embed, Evaluate, Sweep, All };
std::string_view stage_name(Stage s) noexcept;
std::optional<Stage> parse_stage(std::string_view name) noexcept;

struct PipelineOptions {
    Stage stage = Stage::All;
    /// Overrides RunConfig::output when set.
    std::optional<std::filesystem::path> output;
    /// Concurrent (network, representation) jobs; 0 means the config's thread count.
    unsigned jobs = 0;
    /// Skip pairs whose recorded hash matches the current run.
    bool resume = false;
    /// Progress and warnings; nothing is printed when empty.
    std::function<void(const std::string&)> log;
};

struct PairOutcome {
    std::string network;
    std::string representation;
    enum class Status { Done, Resumed, Excluded, Failed } status = Status::Done;
    std::string message;
};

struct PipelineSummary {
    std::filesystem::path output;
    std::string config_hash;
    std::vector<PairOutcome> pairs;
    /// Network-level and sweep failures.
    std::vector<std::string> failures;

    std::size_t count(PairOutcome::Status s) const noexcept;
    bool ok() const noexcept;
};

/// Runs the configured tasks and writes all reports below the output
/// directory. Module errors are recorded per pair and do not stop the run.
PipelineSummary run_pipeline(const RunConfig& config, const PipelineOptions& options = {});

} // namespace glemb
