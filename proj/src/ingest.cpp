#include "custom2vec/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "custom2vec/rng.hpp"

namespace c2v {

namespace {

bool is_ascii_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_ascii_punct(unsigned char c) { return c < 128 && std::ispunct(c) != 0; }

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    return out;
}

std::string syntactic_normalize(std::string_view raw) {
    std::string lowered(raw);
    for (char& c : lowered)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

    std::size_t begin = 0;
    std::size_t end = lowered.size();
    while (begin < end && (is_ascii_space(lowered[begin]) || is_ascii_punct(lowered[begin])))
        ++begin;
    while (end > begin && (is_ascii_space(lowered[end - 1]) || is_ascii_punct(lowered[end - 1])))
        --end;

    std::string out;
    out.reserve(end - begin);
    bool in_space = false;
    for (std::size_t i = begin; i < end; ++i) {
        unsigned char c = static_cast<unsigned char>(lowered[i]);
        if (is_ascii_space(c)) {
            in_space = true;
            continue;
        }
        if (in_space) {
            out.push_back(' ');
            in_space = false;
        }
        out.push_back(static_cast<char>(c));
    }
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_ascii_space(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && is_ascii_space(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> read_string_list(const nlohmann::json& obj, const char* key,
                                          std::size_t line_no) {
    std::vector<std::string> out;
    if (!obj.contains(key)) return out;
    const auto& value = obj.at(key);
    if (value.is_string()) {
        out.push_back(value.get<std::string>());
    } else if (value.is_array()) {
        for (const auto& item : value) {
            if (!item.is_string())
                throw DataError("line " + std::to_string(line_no) + ": key '" + key +
                                "' must hold strings");
            out.push_back(item.get<std::string>());
        }
    } else if (!value.is_null()) {
        throw DataError("line " + std::to_string(line_no) + ": key '" + key +
                        "' must be a string or string array");
    }
    return out;
}

} // namespace

SynonymDict SynonymDict::load(std::istream& in) {
    SynonymDict dict;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw DataError("synonym dictionary line " + std::to_string(line_no) +
                            ": expected <raw><TAB><canonical>");
        dict.insert(line.substr(0, tab), line.substr(tab + 1));
    }
    // A value that is itself a key mapping elsewhere would make lookup
    // non-idempotent.
    for (const auto& [key, value] : dict.map_) {
        auto it = dict.map_.find(value);
        if (it != dict.map_.end() && it->second != value)
            throw DataError("synonym dictionary chains '" + key + "' -> '" + value +
                            "' -> '" + it->second + "'");
    }
    return dict;
}

SynonymDict SynonymDict::load_file(const std::string& path) {
    auto in = open_input(path);
    return load(in);
}

void SynonymDict::insert(std::string_view raw, std::string_view canonical) {
    std::string key = syntactic_normalize(raw);
    std::string value = syntactic_normalize(canonical);
    if (key.empty() || value.empty())
        throw DataError("synonym dictionary entry empty after normalization");
    map_[key] = value;
}

std::optional<std::string> SynonymDict::lookup(const std::string& normalized) const {
    auto it = map_.find(normalized);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

std::string normalize_label(std::string_view raw, NodeKind kind, const SynonymDict* dict) {
    if (raw.empty()) throw DataError("cannot normalize an empty label");
    std::string normalized = syntactic_normalize(raw);
    if (normalized.empty())
        throw DataError("label '" + std::string(raw) + "' (" +
                        std::string(to_string(kind)) + ") is empty after normalization");
    if (dict) {
        if (auto canonical = dict->lookup(normalized)) return *canonical;
    }
    return normalized;
}

std::vector<TrialRecord> parse_records(std::istream& in) {
    std::vector<TrialRecord> records;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;

        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(stripped);
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!obj.is_object())
            throw DataError("line " + std::to_string(line_no) + ": expected a JSON object");

        TrialRecord rec;
        if (!obj.contains("trial_id") || !obj.at("trial_id").is_string())
            throw DataError("line " + std::to_string(line_no) +
                            ": missing string key 'trial_id'");
        rec.trial_id = obj.at("trial_id").get<std::string>();
        if (trim(rec.trial_id).empty())
            throw DataError("line " + std::to_string(line_no) + ": empty trial_id");
        if (!seen_ids.insert(rec.trial_id).second)
            throw DataError("line " + std::to_string(line_no) + ": duplicate trial id '" +
                            rec.trial_id + "'");

        rec.indications = read_string_list(obj, "indications", line_no);
        rec.interventions = read_string_list(obj, "interventions", line_no);
        rec.sponsors = read_string_list(obj, "sponsors", line_no);
        rec.endpoints = read_string_list(obj, "endpoints", line_no);

        auto phases = read_string_list(obj, "phase", line_no);
        if (phases.size() > 1)
            throw DataError("line " + std::to_string(line_no) +
                            ": 'phase' must be a single value");
        if (!phases.empty()) rec.phase = phases.front();

        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<TrialRecord> parse_records_file(const std::string& path) {
    auto in = open_input(path);
    return parse_records(in);
}

void save_records(std::ostream& out, std::span<const TrialRecord> records) {
    for (const TrialRecord& rec : records) {
        nlohmann::json obj;
        obj["trial_id"] = rec.trial_id;
        obj["indications"] = rec.indications;
        obj["interventions"] = rec.interventions;
        obj["phase"] = rec.phase;
        obj["sponsors"] = rec.sponsors;
        obj["endpoints"] = rec.endpoints;
        out << obj.dump() << '\n';
    }
}

void save_records_file(const std::string& path, std::span<const TrialRecord> records) {
    auto out = open_output(path);
    save_records(out, records);
}

TypedGraph build_graph(std::span<const TrialRecord> records, const SynonymDict* dict) {
    TypedGraph graph;
    for (const TrialRecord& rec : records) {
        std::string trial_label;
        try {
            trial_label = normalize_label(rec.trial_id, NodeKind::Trial, dict);
        } catch (const DataError& e) {
            throw DataError("trial '" + rec.trial_id + "': " + e.what());
        }
        if (graph.find_node(NodeKind::Trial, trial_label))
            throw DataError("trial id '" + rec.trial_id +
                            "' collides with an earlier record after normalization");
        NodeId trial = graph.add_node(NodeKind::Trial, trial_label);

        auto link_all = [&](std::span<const std::string> labels, NodeKind kind) {
            for (const std::string& raw : labels) {
                std::string label;
                try {
                    label = normalize_label(raw, kind, dict);
                } catch (const DataError& e) {
                    throw DataError("trial '" + rec.trial_id + "': " + e.what());
                }
                NodeId attr = graph.add_node(kind, label);
                graph.add_edge(trial, attr, EdgeOrigin::Native);
            }
        };
        link_all(rec.indications, NodeKind::Indication);
        link_all(rec.interventions, NodeKind::Intervention);
        if (!trim(rec.phase).empty()) {
            std::string phase_arr[] = {rec.phase};
            link_all(phase_arr, NodeKind::Phase);
        }
        link_all(rec.sponsors, NodeKind::Sponsor);
        link_all(rec.endpoints, NodeKind::Endpoint);
    }
    return graph;
}

CustomSet CustomSet::load(std::istream& in) {
    CustomSet set;
    std::string line;
    while (std::getline(in, line)) {
        std::string id = trim(line);
        if (id.empty() || id[0] == '#') continue;
        set.trial_ids.push_back(std::move(id));
    }
    return set;
}

CustomSet CustomSet::load_file(const std::string& path) {
    auto in = open_input(path);
    return load(in);
}

void save_custom_set(std::ostream& out, const CustomSet& custom) {
    for (const std::string& id : custom.trial_ids) out << id << '\n';
}

void save_custom_set_file(const std::string& path, const CustomSet& custom) {
    auto out = open_output(path);
    save_custom_set(out, custom);
}

std::vector<NodeId> resolve_custom_set(const TypedGraph& graph, const CustomSet& custom,
                                       const SynonymDict* dict) {
    if (custom.trial_ids.size() < 2)
        throw DataError("custom set needs at least 2 trial ids, got " +
                        std::to_string(custom.trial_ids.size()));
    std::vector<NodeId> ids;
    std::unordered_set<NodeId> seen;
    ids.reserve(custom.trial_ids.size());
    for (const std::string& raw : custom.trial_ids) {
        std::string label = normalize_label(raw, NodeKind::Trial, dict);
        auto id = graph.find_node(NodeKind::Trial, label);
        if (!id)
            throw DataError("custom set trial id '" + raw + "' does not resolve to a trial node");
        if (!seen.insert(*id).second)
            throw DataError("custom set contains duplicate trial id '" + raw + "'");
        ids.push_back(*id);
    }
    return ids;
}

std::vector<NodePair> complete_pairs(std::span<const NodeId> vertices) {
    std::vector<NodePair> pairs;
    pairs.reserve(vertices.size() * (vertices.size() - 1) / 2);
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            pairs.emplace_back(vertices[i], vertices[j]);
    return pairs;
}

std::vector<NodePair> build_custom_subgraph(const TypedGraph& graph, const CustomSet& custom,
                                            const SynonymDict* dict) {
    return complete_pairs(resolve_custom_set(graph, custom, dict));
}

SubgraphSplit split_subgraph(std::span<const NodePair> edges, double ratio,
                             std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw DataError("split ratio must be in (0, 1), got " + std::to_string(ratio));

    SubgraphSplit split;
    split.split_ratio = ratio;
    split.seed = seed;

    std::vector<NodePair> shuffled(edges.begin(), edges.end());
    SplitMix64 rng(derive_seed(seed, 0x73706c6974ULL)); // "split" stream
    shuffle(rng, shuffled);

    auto train_count = static_cast<std::size_t>(
        std::floor(ratio * static_cast<double>(shuffled.size()) + 1e-9));
    split.train_edges.assign(shuffled.begin(), shuffled.begin() + train_count);
    split.test_edges.assign(shuffled.begin() + train_count, shuffled.end());
    std::sort(split.train_edges.begin(), split.train_edges.end());
    std::sort(split.test_edges.begin(), split.test_edges.end());

    std::vector<NodeId> verts;
    for (const NodePair& e : edges) {
        verts.push_back(e.first);
        verts.push_back(e.second);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    split.vertex_set = std::move(verts);
    return split;
}

TypedGraph enrich_graph(const TypedGraph& graph, std::span<const NodePair> train_edges) {
    TypedGraph enriched = graph;
    for (const NodePair& e : train_edges)
        enriched.add_edge(e.first, e.second, EdgeOrigin::Custom);
    return enriched;
}

void save_split(std::ostream& out, const TypedGraph& graph, const SubgraphSplit& split) {
    out << "# seed=" << split.seed << " ratio=" << split.split_ratio << "\n";
    auto emit = [&](std::span<const NodePair> edges, const char* partition) {
        std::vector<std::pair<std::string, std::string>> rows;
        rows.reserve(edges.size());
        for (const NodePair& e : edges) {
            const std::string& a = graph.node(e.first).label;
            const std::string& b = graph.node(e.second).label;
            rows.emplace_back(std::min(a, b), std::max(a, b));
        }
        std::sort(rows.begin(), rows.end());
        for (const auto& [a, b] : rows) out << a << '\t' << b << '\t' << partition << '\n';
    };
    emit(split.train_edges, "train");
    emit(split.test_edges, "test");
}

void save_split_file(const std::string& path, const TypedGraph& graph,
                     const SubgraphSplit& split) {
    auto out = open_output(path);
    save_split(out, graph, split);
}

SubgraphSplit load_split(std::istream& in, const TypedGraph& graph) {
    SubgraphSplit split;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::unordered_set<NodeId> verts;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string token;
            while (hs >> token) {
                if (token.rfind("seed=", 0) == 0)
                    split.seed = std::stoull(token.substr(5));
                else if (token.rfind("ratio=", 0) == 0)
                    split.split_ratio = std::stod(token.substr(6));
            }
            header_seen = true;
            continue;
        }
        std::istringstream ls(line);
        std::string u_label, v_label, partition;
        if (!std::getline(ls, u_label, '\t') || !std::getline(ls, v_label, '\t') ||
            !std::getline(ls, partition))
            throw DataError("split manifest line " + std::to_string(line_no) +
                            ": expected u_label<TAB>v_label<TAB>partition");
        auto resolve = [&](const std::string& label) {
            auto id = graph.find_node(NodeKind::Trial, label);
            if (!id)
                throw DataError("split manifest line " + std::to_string(line_no) +
                                ": unknown trial label '" + label + "'");
            return *id;
        };
        NodePair pair(resolve(u_label), resolve(v_label));
        partition = trim(partition);
        if (partition == "train")
            split.train_edges.push_back(pair);
        else if (partition == "test")
            split.test_edges.push_back(pair);
        else
            throw DataError("split manifest line " + std::to_string(line_no) +
                            ": unknown partition '" + partition + "'");
        verts.insert(pair.first);
        verts.insert(pair.second);
    }
    if (!header_seen)
        throw DataError("split manifest is missing the '# seed=... ratio=...' header");
    split.vertex_set.assign(verts.begin(), verts.end());
    std::sort(split.vertex_set.begin(), split.vertex_set.end());
    std::sort(split.train_edges.begin(), split.train_edges.end());
    std::sort(split.test_edges.begin(), split.test_edges.end());
    return split;
}

SubgraphSplit load_split_file(const std::string& path, const TypedGraph& graph) {
    auto in = open_input(path);
    return load_split(in, graph);
}

} // namespace c2v
