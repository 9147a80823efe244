#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glemb/graph.hpp"
#include "glemb/representation.hpp"
#include "glemb/synthgen.hpp"

namespace glemb {

enum class Task { Homophily, Separability, Auroc, Modules, Sweep };
std::string_view task_name(Task t) noexcept;

struct NetworkConfig {
    std::string name;
    std::filesystem::path edges;
    std::optional<std::filesystem::path> labels;
    LabelKind label_kind = LabelKind::Single;
    /// Multi-label annotations used by module discovery.
    std::optional<std::filesystem::path> annotations;
    bool lcc = true;
};

struct SweepConfig {
    std::vector<double> p_in;
    std::vector<double> p_out;
    std::size_t nodes = 1000;
    std::size_t communities = 5;
    int replicates = 1;
    int dimension = 32;
    std::vector<RepresentationSpec> representations;
};

/// Parsed run configuration. Relative paths are resolved against the
/// directory holding the config file.
struct RunConfig {
    std::vector<NetworkConfig> networks;
    std::vector<RepresentationSpec> representations;
    /// Empty means the per-network default (128, smaller for tiny graphs).
    std::optional<int> dimension;
    int walk_length = kDefaultWalkLength;
    int max_iterations = 500;
    bool early_exit = true;
    int folds = 10;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::vector<Task> tasks;
    std::filesystem::path output = "glemb_out";
    std::optional<SweepConfig> sweep;

    bool has_task(Task t) const;
    /// Canonical text form; its FNV-1a hash identifies the run.
    std::string canonical() const;
    std::string hash() const;
};

struct ConfigResult {
    std::optional<RunConfig> config;
    std::vector<std::string> errors;
    bool ok() const noexcept { return config.has_value(); }
};

/// Declarative format: "key = value" lines, '#' or ';' comments (inline
/// after whitespace), comma-separated
/// lists, "[network NAME]" and "[sweep]" sections. All problems are
/// collected before returning; referenced files must exist.
ConfigResult parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ConfigResult validate_config(const std::filesystem::path& path);

} // namespace glemb
