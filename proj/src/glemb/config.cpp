#include "glemb/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "glemb/error.hpp"
#include "glemb/eval.hpp"

namespace glemb {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        if (comma == std::string_view::npos) comma = s.size();
        auto item = trim(s.substr(start, comma - start));
        if (!item.empty()) out.emplace_back(item);
        start = comma + 1;
    }
    return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<bool> parse_bool(std::string_view s) {
    if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
    if (s == "false" || s == "no" || s == "0" || s == "off") return false;
    return std::nullopt;
}

std::optional<Task> parse_task(std::string_view s) {
    if (s == "homophily") return Task::Homophily;
    if (s == "separability" || s == "classification") return Task::Separability;
    if (s == "auroc") return Task::Auroc;
    if (s == "modules") return Task::Modules;
    if (s == "sweep") return Task::Sweep;
    return std::nullopt;
}

class Parser {
public:
    Parser(std::filesystem::path base) : base_(std::move(base)) {}

    ConfigResult run(std::string_view text) {
        std::size_t line_no = 0, pos = 0;
        while (pos <= text.size()) {
            auto nl = text.find('\n', pos);
            if (nl == std::string_view::npos) nl = text.size();
            line(trim(text.substr(pos, nl - pos)), ++line_no);
            pos = nl + 1;
        }
        finish();
        ConfigResult r;
        r.errors = std::move(errors_);
        if (r.errors.empty()) r.config = std::move(cfg_);
        return r;
    }

private:
    enum class Section { Global, Network, Sweep };

    void error(std::size_t line, const std::string& msg) {
        errors_.push_back(line ? "line " + std::to_string(line) + ": " + msg : msg);
    }

    void line(std::string_view l, std::size_t no) {
        if (l.empty() || l.front() == '#' || l.front() == ';') return;
        for (std::size_t i = 1; i < l.size(); ++i) {
            if ((l[i] == '#' || l[i] == ';') && std::isspace(static_cast<unsigned char>(l[i - 1]))) {
                l = trim(l.substr(0, i));
                break;
            }
        }
        if (l.front() == '[') {
            if (l.back() != ']') return error(no, "unterminated section header");
            auto inner = trim(l.substr(1, l.size() - 2));
            if (inner == "sweep") {
                if (cfg_.sweep) return error(no, "duplicate [sweep] section");
                section_ = Section::Sweep;
                cfg_.sweep.emplace();
            } else if (inner.starts_with("network")) {
                auto name = trim(inner.substr(7));
                if (name.empty()) return error(no, "network section needs a name");
                const bool safe = std::all_of(name.begin(), name.end(), [](char c) {
                    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
                });
                if (!safe || name.front() == '.')
                    return error(no, "network name may only use letters, digits, '_', '-' and '.'");
                for (const auto& n : cfg_.networks)
                    if (n.name == name) return error(no, "duplicate network " + std::string(name));
                section_ = Section::Network;
                cfg_.networks.push_back({});
                cfg_.networks.back().name = std::string(name);
                network_lines_.push_back(no);
            } else {
                error(no, "unknown section [" + std::string(inner) + "]");
            }
            return;
        }
        const auto eq = l.find('=');
        if (eq == std::string_view::npos) return error(no, "expected key = value");
        const std::string key(trim(l.substr(0, eq)));
        const std::string value(trim(l.substr(eq + 1)));
        switch (section_) {
        case Section::Global: global(key, value, no); break;
        case Section::Network: network(key, value, no); break;
        case Section::Sweep: sweep(key, value, no); break;
        }
    }

    std::filesystem::path resolve(const std::string& v) const {
        std::filesystem::path p(v);
        return p.is_absolute() || base_.empty() ? p : base_ / p;
    }

    template <typename T>
    void number(const std::string& key, const std::string& value, std::size_t no, T& out) {
        if (auto v = parse_number<T>(value)) out = *v;
        else error(no, "invalid number for " + key + ": " + value);
    }

    std::vector<RepresentationSpec> representations(const std::string& value, std::size_t no) {
        std::vector<RepresentationSpec> out;
        for (const auto& tok : split_list(value)) {
            try {
                RepresentationSpec spec = RepresentationSpec::parse(tok);
                std::string lower = tok;
                std::transform(lower.begin(), lower.end(), lower.begin(),
                               [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
                explicit_walks_.push_back(lower.find("t=") != std::string::npos);
                out.push_back(spec);
            } catch (const Error& e) {
                error(no, e.what());
            }
        }
        if (out.empty() && !value.empty()) error(no, "no valid representation in list");
        return out;
    }

    void global(const std::string& key, const std::string& value, std::size_t no) {
        if (key == "output") cfg_.output = value;
        else if (key == "dimension" || key == "d") {
            if (auto d = parse_number<int>(value)) {
                dimension_line_ = no;
                cfg_.dimension = *d;
            } else {
                error(no, "invalid number for " + key + ": " + value);
            }
        } else if (key == "walk_length" || key == "T") {
            number(key, value, no, cfg_.walk_length);
            if (cfg_.walk_length < 1) error(no, "walk_length must be at least 1");
        } else if (key == "max_iterations") {
            number(key, value, no, cfg_.max_iterations);
            if (cfg_.max_iterations < 0) error(no, "max_iterations must be non-negative");
        } else if (key == "early_exit") {
            if (auto b = parse_bool(value)) cfg_.early_exit = *b;
            else error(no, "invalid boolean for early_exit: " + value);
        } else if (key == "folds") {
            number(key, value, no, cfg_.folds);
            if (cfg_.folds < 2) error(no, "folds must be at least 2");
        } else if (key == "seed") {
            number(key, value, no, cfg_.seed);
        } else if (key == "threads") {
            number(key, value, no, cfg_.threads);
        } else if (key == "tasks") {
            tasks_set_ = true;
            for (const auto& t : split_list(value)) {
                if (auto task = parse_task(t)) {
                    if (!cfg_.has_task(*task)) cfg_.tasks.push_back(*task);
                } else {
                    error(no, "unknown task " + t);
                }
            }
        } else if (key == "representations") {
            explicit_walks_.clear();
            cfg_.representations = representations(value, no);
            global_explicit_ = explicit_walks_;
        } else {
            error(no, "unknown key '" + key + "'");
        }
    }

    void network(const std::string& key, const std::string& value, std::size_t no) {
        auto& n = cfg_.networks.back();
        if (key == "edges") n.edges = resolve(value);
        else if (key == "labels") n.labels = resolve(value);
        else if (key == "annotations") n.annotations = resolve(value);
        else if (key == "label_kind") {
            if (value == "single") n.label_kind = LabelKind::Single;
            else if (value == "multi") n.label_kind = LabelKind::Multi;
            else error(no, "label_kind must be single or multi");
        } else if (key == "lcc") {
            if (auto b = parse_bool(value)) n.lcc = *b;
            else error(no, "invalid boolean for lcc: " + value);
        } else {
            error(no, "unknown key '" + key + "' in [network " + n.name + "]");
        }
    }

    void sweep(const std::string& key, const std::string& value, std::size_t no) {
        auto& s = *cfg_.sweep;
        auto probs = [&](std::vector<double>& out) {
            out.clear();
            for (const auto& tok : split_list(value)) {
                auto v = parse_number<double>(tok);
                if (!v || *v < 0.0 || *v > 1.0) error(no, "probability out of range in " + key + ": " + tok);
                else out.push_back(*v);
            }
        };
        if (key == "p_in") probs(s.p_in);
        else if (key == "p_out") probs(s.p_out);
        else if (key == "nodes") number(key, value, no, s.nodes);
        else if (key == "communities") number(key, value, no, s.communities);
        else if (key == "replicates") {
            number(key, value, no, s.replicates);
            if (s.replicates < 1) error(no, "replicates must be positive");
        } else if (key == "dimension" || key == "d") {
            number(key, value, no, s.dimension);
            if (s.dimension < 1) error(no, "dimension must be positive");
        } else if (key == "representations") {
            explicit_walks_.clear();
            s.representations = representations(value, no);
            sweep_explicit_ = explicit_walks_;
        } else {
            error(no, "unknown key '" + key + "' in [sweep]");
        }
    }

    void finish() {
        if (cfg_.dimension && *cfg_.dimension < 1) error(dimension_line_, "dimension must be positive");
        if (cfg_.representations.empty() && global_explicit_.empty()) {
            cfg_.representations = {RepresentationSpec::parse("G_0"), RepresentationSpec::parse("line"),
                                    RepresentationSpec::parse("deepwalk")};
            global_explicit_.assign(cfg_.representations.size(), false);
        }
        for (std::size_t i = 0; i < cfg_.representations.size(); ++i)
            if (cfg_.representations[i].uses_walks() && !global_explicit_[i])
                cfg_.representations[i].walk_length = cfg_.walk_length;

        if (!tasks_set_) {
            cfg_.tasks = {Task::Homophily, Task::Separability, Task::Auroc, Task::Modules};
            if (cfg_.sweep) cfg_.tasks.push_back(Task::Sweep);
        }
        if (cfg_.has_task(Task::Sweep) && !cfg_.sweep) error(0, "task sweep needs a [sweep] section");
        if (cfg_.sweep) {
            auto& s = *cfg_.sweep;
            if (s.p_in.empty() || s.p_out.empty()) error(0, "[sweep] needs p_in and p_out lists");
            if (s.communities < 1 || s.nodes < s.communities) error(0, "[sweep] needs nodes >= communities >= 1");
            if (s.representations.empty()) {
                s.representations = SweepOptions{}.representations;
                sweep_explicit_.assign(s.representations.size(), false);
            }
            for (std::size_t i = 0; i < s.representations.size(); ++i)
                if (s.representations[i].uses_walks() && !sweep_explicit_[i])
                    s.representations[i].walk_length = cfg_.walk_length;
        }
        if (cfg_.networks.empty() && !cfg_.sweep) error(0, "config defines no network and no sweep");

        for (std::size_t i = 0; i < cfg_.networks.size(); ++i) {
            const auto& n = cfg_.networks[i];
            const auto no = network_lines_[i];
            auto check = [&](const std::filesystem::path& p, const char* what) {
                std::error_code ec;
                if (!std::filesystem::is_regular_file(p, ec))
                    error(no, std::string(what) + " file not found for network " + n.name + ": " + p.string());
            };
            if (n.edges.empty()) error(no, "network " + n.name + " has no edges file");
            else check(n.edges, "edges");
            if (n.labels) check(*n.labels, "labels");
            if (n.annotations) check(*n.annotations, "annotations");
        }
    }

    std::filesystem::path base_;
    RunConfig cfg_;
    Section section_ = Section::Global;
    std::vector<std::string> errors_;
    std::vector<std::size_t> network_lines_;
    std::vector<bool> explicit_walks_, global_explicit_, sweep_explicit_;
    std::size_t dimension_line_ = 0;
    bool tasks_set_ = false;
};

std::string spec_list(const std::vector<RepresentationSpec>& specs) {
    std::string out;
    for (const auto& s : specs) out += s.slug() + ",";
    return out;
}

} // namespace

std::string_view task_name(Task t) noexcept {
    switch (t) {
    case Task::Homophily: return "homophily";
    case Task::Separability: return "separability";
    case Task::Auroc: return "auroc";
    case Task::Modules: return "modules";
    case Task::Sweep: return "sweep";
    }
    return "unknown";
}

bool RunConfig::has_task(Task t) const { return std::find(tasks.begin(), tasks.end(), t) != tasks.end(); }

std::string RunConfig::canonical() const {
    // output and threads do not influence results and are left out.
    std::ostringstream out;
    out << std::setprecision(17);
    out << "dimension=" << (dimension ? std::to_string(*dimension) : "auto") << '\n';
    out << "walk_length=" << walk_length << '\n';
    out << "max_iterations=" << max_iterations << '\n';
    out << "early_exit=" << early_exit << '\n';
    out << "folds=" << folds << '\n';
    out << "seed=" << seed << '\n';
    out << "tasks=";
    for (Task t : tasks) out << task_name(t) << ',';
    out << '\n' << "representations=" << spec_list(representations) << '\n';
    for (const auto& n : networks) {
        out << "[network " << n.name << "]\n";
        out << "edges=" << n.edges.generic_string() << '\n';
        out << "labels=" << (n.labels ? n.labels->generic_string() : "") << '\n';
        out << "label_kind=" << (n.label_kind == LabelKind::Single ? "single" : "multi") << '\n';
        out << "annotations=" << (n.annotations ? n.annotations->generic_string() : "") << '\n';
        out << "lcc=" << n.lcc << '\n';
    }
    if (sweep) {
        out << "[sweep]\np_in=";
        for (double p : sweep->p_in) out << p << ',';
        out << "\np_out=";
        for (double p : sweep->p_out) out << p << ',';
        out << "\nnodes=" << sweep->nodes << "\ncommunities=" << sweep->communities
            << "\nreplicates=" << sweep->replicates << "\ndimension=" << sweep->dimension
            << "\nrepresentations=" << spec_list(sweep->representations) << '\n';
    }
    return out.str();
}

std::string RunConfig::hash() const {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << fnv1a(canonical());
    return out.str();
}

ConfigResult parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    return Parser(base_dir).run(text);
}

ConfigResult validate_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {std::nullopt, {"cannot open config " + path.string()}};
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

} // namespace glemb
