#include "custom2vec/graph_io.hpp"

#include <fstream>
#include <sstream>

namespace c2v {

namespace {

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

} // namespace

void save_nodes(std::ostream& out, const TypedGraph& graph) {
    for (const Node& n : graph.nodes())
        out << n.id << '\t' << to_string(n.kind) << '\t' << n.label << '\n';
}

void save_edges(std::ostream& out, const TypedGraph& graph) {
    for (const Edge& e : graph.edges())
        out << e.u << '\t' << e.v << '\t' << to_string(e.origin) << '\n';
}

void save_graph(const std::string& nodes_path, const std::string& edges_path,
                const TypedGraph& graph) {
    auto nodes_out = open_output(nodes_path);
    save_nodes(nodes_out, graph);
    auto edges_out = open_output(edges_path);
    save_edges(edges_out, graph);
}

TypedGraph load_graph(std::istream& nodes_in, std::istream& edges_in) {
    TypedGraph graph;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(nodes_in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string id_str, kind_str, label;
        if (!std::getline(ls, id_str, '\t') || !std::getline(ls, kind_str, '\t') ||
            !std::getline(ls, label))
            throw DataError("nodes file line " + std::to_string(line_no) +
                            ": expected id<TAB>kind<TAB>label");
        NodeId expected = 0;
        try {
            expected = static_cast<NodeId>(std::stoul(id_str));
        } catch (const std::exception&) {
            throw DataError("nodes file line " + std::to_string(line_no) + ": bad id '" +
                            id_str + "'");
        }
        NodeId id = graph.add_node(node_kind_from_string(kind_str), label);
        if (id != expected)
            throw DataError("nodes file line " + std::to_string(line_no) + ": id " + id_str +
                            " is out of order or duplicated (assigned " + std::to_string(id) +
                            ")");
    }

    line_no = 0;
    while (std::getline(edges_in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string u_str, v_str, origin_str;
        if (!std::getline(ls, u_str, '\t') || !std::getline(ls, v_str, '\t') ||
            !std::getline(ls, origin_str))
            throw DataError("edges file line " + std::to_string(line_no) +
                            ": expected u<TAB>v<TAB>origin");
        NodeId u = 0, v = 0;
        try {
            u = static_cast<NodeId>(std::stoul(u_str));
            v = static_cast<NodeId>(std::stoul(v_str));
        } catch (const std::exception&) {
            throw DataError("edges file line " + std::to_string(line_no) + ": bad node id");
        }
        graph.add_edge(u, v, edge_origin_from_string(origin_str));
    }
    return graph;
}

TypedGraph load_graph(const std::string& nodes_path, const std::string& edges_path) {
    auto nodes_in = open_input(nodes_path);
    auto edges_in = open_input(edges_path);
    return load_graph(nodes_in, edges_in);
}

} // namespace c2v
