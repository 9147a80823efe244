#include "glemb/synthgen.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <random>
#include <sstream>

#include "glemb/error.hpp"
#include "glemb/homophily.hpp"
#include "glemb/parallel.hpp"

namespace glemb {

namespace {

std::string fmt(double v) {
    std::ostringstream out;
    out << std::setprecision(10) << v;
    return out.str();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "NA"; }

} // namespace

std::size_t PartitionSpec::node_count() const noexcept {
    std::size_t n = 0;
    for (auto s : community_sizes) n += s;
    return n;
}

void PartitionSpec::validate() const {
    if (community_sizes.empty()) fail(ErrorCode::InvalidArgument, "at least one community is required");
    for (auto s : community_sizes)
        if (s == 0) fail(ErrorCode::InvalidArgument, "community sizes must be positive");
    if (!(p_in >= 0.0 && p_in <= 1.0) || !(p_out >= 0.0 && p_out <= 1.0))
        fail(ErrorCode::InvalidArgument, "probabilities must lie in [0, 1]");
    if (p_in == 0.0 && p_out == 0.0) fail(ErrorCode::InvalidArgument, "p_in and p_out cannot both be zero");
}

std::vector<std::size_t> equal_community_sizes(std::size_t n, std::size_t communities) {
    if (communities == 0 || n < communities) fail(ErrorCode::InvalidArgument, "need at least one node per community");
    std::vector<std::size_t> sizes(communities, n / communities);
    for (std::size_t i = 0; i < n % communities; ++i) ++sizes[i];
    return sizes;
}

std::pair<Graph, LabelSet> random_partition_graph(const PartitionSpec& spec) {
    spec.validate();
    const std::size_t n = spec.node_count();
    std::vector<LabelId> community(n);
    std::vector<std::string> label_names;
    for (std::size_t c = 0, u = 0; c < spec.community_sizes.size(); ++c) {
        label_names.push_back("c" + std::to_string(c));
        for (std::size_t i = 0; i < spec.community_sizes[c]; ++i) community[u++] = static_cast<LabelId>(c);
    }
    std::mt19937_64 rng(spec.seed);
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            const double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            const double p = community[u] == community[v] ? spec.p_in : spec.p_out;
            if (x < p) pairs.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
        }
    }
    if (pairs.empty()) fail(ErrorCode::EmptyInput, "generated graph has no edges");
    std::vector<std::string> names(n);
    for (std::size_t u = 0; u < n; ++u) names[u] = std::to_string(u);
    Graph g(std::move(names), pairs);
    std::vector<std::vector<LabelId>> labels(n);
    for (std::size_t u = 0; u < n; ++u) labels[u] = {community[u]};
    return {std::move(g), LabelSet(LabelKind::Single, std::move(labels), std::move(label_names))};
}

std::uint64_t cell_seed(std::uint64_t base, std::size_t cell, int replicate) noexcept {
    // splitmix64 finalizer over the combined index
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(cell) * 1024u +
                                                      static_cast<std::uint64_t>(replicate) + 1u);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

SweepTable sweep(const SweepOptions& options, const SweepProgress& progress) {
    if (options.p_in.empty() || options.p_out.empty()) fail(ErrorCode::InvalidArgument, "sweep grid is empty");
    if (options.replicates < 1) fail(ErrorCode::InvalidArgument, "replicates must be positive");
    if (options.representations.empty()) fail(ErrorCode::InvalidArgument, "sweep needs a representation");
    const auto sizes = equal_community_sizes(options.nodes, options.communities);

    struct Job {
        double p_in, p_out;
        std::size_t cell;
        int replicate;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < options.p_in.size(); ++i)
        for (std::size_t j = 0; j < options.p_out.size(); ++j)
            for (int r = 0; r < options.replicates; ++r)
                jobs.push_back({options.p_in[i], options.p_out[j], i * options.p_out.size() + j, r});

    std::vector<std::vector<SweepRow>> rows(jobs.size());
    std::vector<std::vector<std::string>> skipped(jobs.size());
    std::mutex progress_mu;
    std::size_t done = 0;

    parallel_chunks(jobs.size(), 1, thread_count(), [&](unsigned, std::size_t b, std::size_t e) {
        for (std::size_t ji = b; ji < e; ++ji) {
            const Job& job = jobs[ji];
            const std::string cell = "p_in=" + fmt(job.p_in) + " p_out=" + fmt(job.p_out) +
                                     " replicate=" + std::to_string(job.replicate);
            try {
                if (job.p_in == 0.0 && job.p_out == 0.0) fail(ErrorCode::InvalidArgument, "both probabilities are zero");
                PartitionSpec spec{sizes, job.p_in, job.p_out, cell_seed(options.seed, job.cell, job.replicate)};
                auto [g, labels] = random_partition_graph(spec);
                std::size_t components = 0;
                connected_components(g, &components);
                RepresentationBuilder builder(g);
                for (const auto& rs : options.representations) {
                    try {
                        const MatrixRepresentation rep = builder.build(rs);
                        SweepRow row;
                        row.p_in = job.p_in;
                        row.p_out = job.p_out;
                        row.replicate = job.replicate;
                        row.representation = rep.name();
                        row.edges = g.edge_count();
                        row.connected = components == 1;
                        const HomophilyReport h = homophily_report(rep, labels);
                        row.h_node = rep.weighted() ? h.h_node_weighted : h.h_node;
                        row.h_edge = rep.weighted() ? h.h_edge_weighted : h.h_edge;
                        row.gsi = h.gsi;
                        const int d = std::min<int>(options.dimension, static_cast<int>(g.node_count()));
                        const EmbeddingSpace space = factorize(rep.matrix, d, options.onmtf);
                        row.f1_linear =
                            kfold_f1(space.embedding(), labels, g.names(), ClassifierKind::Linear, options.folds)
                                .mean_f1();
                        rows[ji].push_back(std::move(row));
                    } catch (const Error& err) {
                        skipped[ji].push_back(cell + " " + rs.name() + ": " + err.what());
                    }
                }
            } catch (const Error& err) {
                skipped[ji].push_back(cell + ": " + err.what());
            }
            if (progress) {
                std::lock_guard lock(progress_mu);
                progress(++done, jobs.size());
            }
        }
    });

    SweepTable table;
    for (std::size_t ji = 0; ji < jobs.size(); ++ji) {
        for (auto& r : rows[ji]) table.rows.push_back(std::move(r));
        for (auto& s : skipped[ji]) table.skipped.push_back(std::move(s));
    }
    return table;
}

std::vector<IndexCorrelation> correlate_sweep(const SweepTable& table) {
    if (table.rows.size() < 3) fail(ErrorCode::InvalidArgument, "correlation needs at least 3 sweep rows");
    std::vector<IndexCorrelation> out;
    auto add = [&](const std::string& name, auto get) {
        std::vector<double> xs, ys;
        for (const auto& r : table.rows) {
            if (const std::optional<double> v = get(r)) {
                xs.push_back(*v);
                ys.push_back(r.f1_linear);
            }
        }
        if (xs.size() >= 3) out.push_back({name, pearson(xs, ys)});
    };
    add("gsi", [](const SweepRow& r) { return r.gsi; });
    add("h_node", [](const SweepRow& r) { return r.h_node; });
    add("h_edge", [](const SweepRow& r) { return r.h_edge; });
    return out;
}

void write_sweep_tsv(const SweepTable& table, const std::filesystem::path& path, const std::string& header) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
    if (!header.empty()) out << header << '\n';
    out << "p_in\tp_out\trepresentation\th_node\th_edge\tgsi\tf1_linear\n";
    for (const auto& r : table.rows) {
        out << fmt(r.p_in) << '\t' << fmt(r.p_out) << '\t' << r.representation << '\t' << fmt(r.h_node) << '\t'
            << fmt(r.h_edge) << '\t' << fmt(r.gsi) << '\t' << fmt(r.f1_linear) << '\n';
    }
    if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

} // namespace glemb
