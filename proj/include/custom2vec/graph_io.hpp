#pragma once

#include <iosfwd>
#include <string>

#include "custom2vec/graph.hpp"

namespace c2v {

// Two-file plain-text graph format, UTF-8, tab-separated, zero-based ids:
//   nodes.tsv: id <TAB> kind <TAB> label
//   edges.tsv: u <TAB> v <TAB> origin          (u < v)

void save_nodes(std::ostream& out, const TypedGraph& graph);
void save_edges(std::ostream& out, const TypedGraph& graph);
void save_graph(const std::string& nodes_path, const std::string& edges_path,
                const TypedGraph& graph);

TypedGraph load_graph(std::istream& nodes_in, std::istream& edges_in);
TypedGraph load_graph(const std::string& nodes_path, const std::string& edges_path);

} // namespace c2v
