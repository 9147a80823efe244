#include "glemb/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>

#include "glemb/error.hpp"

namespace glemb {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Splits on runs of spaces/tabs, dropping a trailing '\r'.
std::vector<std::string_view> tokenize(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t lineno = 0, pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++lineno;
        std::string_view line = text.substr(pos, end - pos);
        auto first = line.find_first_not_of(" \t\r");
        if (first != std::string_view::npos && line[first] != '#') fn(lineno, line);
        if (end == text.size()) break;
        pos = end + 1;
    }
}

} // namespace

Graph::Graph(std::vector<std::string> names, std::span<const std::pair<NodeId, NodeId>> pairs,
             std::pair<std::size_t, std::size_t>* dropped)
    : names_(std::move(names)) {
    const std::size_t n = names_.size();
    index_.reserve(n);
    for (NodeId i = 0; i < n; ++i) {
        if (!index_.emplace(names_[i], i).second)
            fail(ErrorCode::InvalidArgument, "duplicate node name " + names_[i]);
    }
    std::size_t loops = 0;
    edges_.reserve(pairs.size());
    for (auto [a, b] : pairs) {
        if (a >= n || b >= n) fail(ErrorCode::InvalidArgument, "edge endpoint out of range");
        if (a == b) {
            ++loops;
            continue;
        }
        edges_.push_back(a < b ? Edge{a, b} : Edge{b, a});
    }
    std::sort(edges_.begin(), edges_.end());
    const std::size_t before = edges_.size();
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    if (dropped) *dropped = {loops, before - edges_.size()};

    std::vector<std::size_t> deg(n, 0);
    for (const auto& e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
    adj_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
        adj_[fill[e.u]++] = e.v;
        adj_[fill[e.v]++] = e.u;
    }
    for (std::size_t i = 0; i < n; ++i)
        std::sort(adj_.begin() + offsets_[i], adj_.begin() + offsets_[i + 1]);
}

bool Graph::adjacent(NodeId u, NodeId v) const noexcept {
    if (degree(u) > degree(v)) std::swap(u, v);
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<NodeId> Graph::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Graph parse_edge_list(std::string_view text, EdgeListReport* report) {
    std::vector<std::string> names;
    std::unordered_map<std::string, NodeId> ids;
    std::vector<std::pair<NodeId, NodeId>> pairs;
    std::size_t lines = 0;
    auto intern = [&](std::string_view tok) {
        auto [it, inserted] = ids.emplace(std::string(tok), static_cast<NodeId>(names.size()));
        if (inserted) names.emplace_back(tok);
        return it->second;
    };
    for_each_line(text, [&](std::size_t lineno, std::string_view line) {
        auto toks = tokenize(line);
        if (toks.size() != 2)
            fail(ErrorCode::Parse, "malformed edge at line " + std::to_string(lineno) +
                                       ": expected two node tokens");
        ++lines;
        NodeId a = intern(toks[0]);
        NodeId b = intern(toks[1]);
        pairs.emplace_back(a, b);
    });
    if (names.empty()) fail(ErrorCode::EmptyInput, "edge list contains no nodes");
    std::pair<std::size_t, std::size_t> dropped;
    Graph g(std::move(names), pairs, &dropped);
    if (report) *report = {lines, dropped.first, dropped.second};
    return g;
}

Graph load_edge_list(const std::filesystem::path& path, EdgeListReport* report) {
    return parse_edge_list(read_file(path), report);
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
    for (const auto& e : g.edges()) out << g.name(e.u) << '\t' << g.name(e.v) << '\n';
}

LabelSet::LabelSet(LabelKind kind, std::vector<std::vector<LabelId>> labels_of,
                   std::vector<std::string> label_names)
    : kind_(kind), labels_of_(std::move(labels_of)), label_names_(std::move(label_names)) {
    for (auto& ls : labels_of_) {
        std::sort(ls.begin(), ls.end());
        ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
        if (kind_ == LabelKind::Single && ls.size() > 1)
            fail(ErrorCode::InvalidArgument, "single-label set with a multi-labeled node");
        for (LabelId l : ls)
            if (l >= label_names_.size()) fail(ErrorCode::InvalidArgument, "label id without a name");
    }
}

std::size_t LabelSet::annotated_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(labels_of_.begin(), labels_of_.end(),
                                                  [](const auto& l) { return !l.empty(); }));
}

LabelTable parse_labels(std::string_view text, LabelKind kind) {
    LabelTable table;
    table.kind = kind;
    std::unordered_map<std::string, LabelId> label_ids;
    std::unordered_map<std::string, std::size_t> row_of;
    for_each_line(text, [&](std::size_t lineno, std::string_view line) {
        auto toks = tokenize(line);
        if (toks.size() != 2)
            fail(ErrorCode::Parse, "malformed label line " + std::to_string(lineno) +
                                       ": expected node and label");
        std::string node(toks[0]);
        auto [lit, new_label] =
            label_ids.emplace(std::string(toks[1]), static_cast<LabelId>(table.label_names.size()));
        if (new_label) table.label_names.emplace_back(toks[1]);
        auto [rit, new_node] = row_of.emplace(node, table.entries.size());
        if (new_node) {
            table.entries.push_back({node, {lit->second}});
            return;
        }
        auto& ls = table.entries[rit->second].second;
        if (kind == LabelKind::Single) {
            if (std::find(ls.begin(), ls.end(), lit->second) == ls.end())
                fail(ErrorCode::InvalidArgument, "duplicate label for node " + node);
            return;
        }
        if (std::find(ls.begin(), ls.end(), lit->second) == ls.end()) ls.push_back(lit->second);
    });
    for (auto& [node, ls] : table.entries) std::sort(ls.begin(), ls.end());
    return table;
}

LabelTable load_labels(const std::filesystem::path& path, LabelKind kind) {
    return parse_labels(read_file(path), kind);
}

LabelSet bind_labels(const LabelTable& table, const Graph& g, std::vector<std::string>* unknown_tokens) {
    std::vector<std::vector<LabelId>> labels_of(g.node_count());
    for (const auto& [node, ls] : table.entries) {
        auto id = g.find(node);
        if (!id) {
            if (unknown_tokens) unknown_tokens->push_back(node);
            continue;
        }
        labels_of[*id] = ls;
    }
    return LabelSet(table.kind, std::move(labels_of), table.label_names);
}

LabelSet make_single_labels(std::span<const LabelId> label_of, std::size_t label_count) {
    std::vector<std::vector<LabelId>> labels_of;
    labels_of.reserve(label_of.size());
    for (LabelId l : label_of) labels_of.push_back({l});
    std::vector<std::string> names;
    for (std::size_t i = 0; i < label_count; ++i) names.push_back(std::to_string(i));
    return LabelSet(LabelKind::Single, std::move(labels_of), std::move(names));
}

std::vector<std::uint32_t> connected_components(const Graph& g, std::size_t* count) {
    constexpr auto unseen = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> comp(g.node_count(), unseen);
    std::uint32_t next = 0;
    std::queue<NodeId> q;
    for (NodeId s = 0; s < g.node_count(); ++s) {
        if (comp[s] != unseen) continue;
        comp[s] = next;
        q.push(s);
        while (!q.empty()) {
            NodeId u = q.front();
            q.pop();
            for (NodeId v : g.neighbors(u)) {
                if (comp[v] == unseen) {
                    comp[v] = next;
                    q.push(v);
                }
            }
        }
        ++next;
    }
    if (count) *count = next;
    return comp;
}

namespace {

std::vector<NodeId> lcc_members(const Graph& g) {
    if (g.node_count() == 0) fail(ErrorCode::EmptyInput, "graph has no nodes");
    std::size_t count = 0;
    auto comp = connected_components(g, &count);
    std::vector<std::size_t> size(count, 0);
    std::vector<const std::string*> min_name(count, nullptr);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        ++size[comp[u]];
        auto& m = min_name[comp[u]];
        if (!m || g.name(u) < *m) m = &g.name(u);
    }
    std::uint32_t best = 0;
    for (std::uint32_t c = 1; c < count; ++c) {
        if (size[c] > size[best] || (size[c] == size[best] && *min_name[c] < *min_name[best])) best = c;
    }
    std::vector<NodeId> members;
    members.reserve(size[best]);
    for (NodeId u = 0; u < g.node_count(); ++u)
        if (comp[u] == best) members.push_back(u);
    return members;
}

Graph induced(const Graph& g, std::span<const NodeId> members) {
    std::vector<NodeId> remap(g.node_count(), static_cast<NodeId>(-1));
    std::vector<std::string> names;
    names.reserve(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        remap[members[i]] = static_cast<NodeId>(i);
        names.push_back(g.name(members[i]));
    }
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (const auto& e : g.edges()) {
        if (remap[e.u] != static_cast<NodeId>(-1) && remap[e.v] != static_cast<NodeId>(-1))
            pairs.emplace_back(remap[e.u], remap[e.v]);
    }
    return Graph(std::move(names), pairs);
}

} // namespace

Graph largest_connected_component(const Graph& g) {
    auto members = lcc_members(g);
    return induced(g, members);
}

std::pair<Graph, LabelSet> largest_connected_component(const Graph& g, const LabelSet& labels) {
    if (labels.node_count() != g.node_count())
        fail(ErrorCode::InvalidArgument, "label set does not match graph size");
    auto members = lcc_members(g);
    std::vector<std::vector<LabelId>> labels_of;
    labels_of.reserve(members.size());
    for (NodeId u : members) {
        auto ls = labels.labels(u);
        labels_of.emplace_back(ls.begin(), ls.end());
    }
    std::vector<std::string> names(labels.label_names().begin(), labels.label_names().end());
    return {induced(g, members), LabelSet(labels.kind(), std::move(labels_of), std::move(names))};
}

} // namespace glemb
