#pragma once

#include <string>
#include <vector>

namespace mfg {

// Directed road network for edge-based routing. States and actions are both
// edges: standing on edge e means traveling along it, and the next edge must
// leave e's head node. A restart edge from the destination back to the
// origin closes the graph into an infinite-horizon game.
struct NetworkTopology {
    struct Edge {
        int id;   // 1-based, contiguous
        int tail; // 1-based node ids
        int head;
    };

    std::vector<Edge> edges; // index = id - 1; restart edge last if appended
    int n_nodes = 0;
    int origin = 1;
    int destination = 0;
    int restart_edge = 0; // 1-based id of the destination->origin edge

    // adjacency[e] = 0-based indices of edges leaving edges[e].head
    std::vector<std::vector<int>> outgoing;

    int n_edges() const { return static_cast<int>(edges.size()); }
};

// Parses the CSV edge list (header `edge_id,tail_node,head_node`, 1-based
// integer ids, `#` comments and blank lines ignored). Appends the
// destination->origin restart edge when the file lacks one, precomputes
// adjacency, and validates:
//   - node ids form a contiguous range 1..N (a gap names the bad id + line)
//   - edge ids are 1..E with no duplicates
//   - the destination is reachable from the origin
//   - every edge has a nonempty outgoing set
// Throws ConfigError with the offending line number on failure.
NetworkTopology parse_topology(const std::string& text, int origin = 1, int destination = 20);

// parse_topology applied to a file's contents; IoError if unreadable.
NetworkTopology load_topology(const std::string& path, int origin = 1, int destination = 20);

} // namespace mfg
