#include "mfg/topology.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mfg/errors.hpp"

namespace mfg {

namespace {

struct RawEdge {
    int id, tail, head;
    int line;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

int parse_int(const std::string& field, int line, const char* what) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(field, &pos);
        if (pos != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("topology line " + std::to_string(line) + ": bad " + what + " '" +
                          field + "'");
    }
}

} // namespace

NetworkTopology parse_topology(const std::string& text, int origin, int destination) {
    std::vector<RawEdge> raw;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            if (t != "edge_id,tail_node,head_node") {
                throw ConfigError("topology line " + std::to_string(line_no) +
                                  ": expected header 'edge_id,tail_node,head_node'");
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream fs(t);
        std::string field;
        while (std::getline(fs, field, ',')) fields.push_back(trim(field));
        if (fields.size() != 3) {
            throw ConfigError("topology line " + std::to_string(line_no) +
                              ": expected 3 comma-separated fields");
        }
        raw.push_back({parse_int(fields[0], line_no, "edge id"),
                       parse_int(fields[1], line_no, "tail node"),
                       parse_int(fields[2], line_no, "head node"), line_no});
    }
    if (!header_seen) throw ConfigError("topology: missing header line");
    if (raw.empty()) throw ConfigError("topology: no edges");

    // Nodes must form a contiguous 1..N range; anything beyond the range of
    // the others is a dangling reference.
    int n_nodes = 0;
    for (const auto& e : raw) n_nodes = std::max({n_nodes, e.tail, e.head});
    std::vector<char> node_seen(static_cast<std::size_t>(n_nodes) + 1, 0);
    for (const auto& e : raw) {
        node_seen[static_cast<std::size_t>(e.tail)] = 1;
        node_seen[static_cast<std::size_t>(e.head)] = 1;
    }
    for (int v = 1; v <= n_nodes; ++v) {
        if (!node_seen[static_cast<std::size_t>(v)]) {
            // Some edge references a node id past the contiguous block.
            for (const auto& e : raw) {
                const int bad = std::max(e.tail, e.head);
                if (bad > v) {
                    throw ConfigError("topology line " + std::to_string(e.line) +
                                      ": node " + std::to_string(bad) +
                                      " is absent from the node list (ids must be contiguous)");
                }
            }
        }
    }
    for (const auto& e : raw) {
        if (e.tail < 1 || e.head < 1) {
            throw ConfigError("topology line " + std::to_string(e.line) +
                              ": node ids are 1-based");
        }
    }
    if (origin < 1 || origin > n_nodes) {
        throw ConfigError("topology: origin node " + std::to_string(origin) + " does not exist");
    }
    if (destination < 1 || destination > n_nodes) {
        throw ConfigError("topology: destination node " + std::to_string(destination) +
                          " does not exist");
    }

    // Edge ids: 1..E, no duplicates.
    std::vector<int> id_line(raw.size() + 1, 0);
    for (const auto& e : raw) {
        if (e.id < 1 || e.id > static_cast<int>(raw.size())) {
            throw ConfigError("topology line " + std::to_string(e.line) + ": edge id " +
                              std::to_string(e.id) + " outside 1.." +
                              std::to_string(raw.size()));
        }
        if (id_line[static_cast<std::size_t>(e.id)] != 0) {
            throw ConfigError("topology line " + std::to_string(e.line) + ": duplicate edge id " +
                              std::to_string(e.id) + " (first seen on line " +
                              std::to_string(id_line[static_cast<std::size_t>(e.id)]) + ")");
        }
        id_line[static_cast<std::size_t>(e.id)] = e.line;
    }

    NetworkTopology topo;
    topo.n_nodes = n_nodes;
    topo.origin = origin;
    topo.destination = destination;
    topo.edges.resize(raw.size());
    for (const auto& e : raw) {
        topo.edges[static_cast<std::size_t>(e.id - 1)] = {e.id, e.tail, e.head};
    }

    // The restart edge is a modeling construct, not a road: a file that
    // happens to contain a destination->origin arc keeps it as an ordinary
    // edge. Only a file marked as already augmented (its highest-id edge is
    // destination->origin AND flagged by a `# restart_edge` comment) skips
    // the append.
    const bool augmented = text.find("# restart_edge") != std::string::npos &&
                           topo.edges.back().tail == destination &&
                           topo.edges.back().head == origin;
    if (augmented) {
        topo.restart_edge = topo.edges.back().id;
    } else {
        topo.restart_edge = topo.n_edges() + 1;
        topo.edges.push_back({topo.restart_edge, destination, origin});
    }

    // Destination reachable from origin over nodes.
    {
        std::vector<char> visited(static_cast<std::size_t>(n_nodes) + 1, 0);
        std::vector<int> stack{origin};
        visited[static_cast<std::size_t>(origin)] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (const auto& e : topo.edges) {
                if (e.tail == v && !visited[static_cast<std::size_t>(e.head)]) {
                    visited[static_cast<std::size_t>(e.head)] = 1;
                    stack.push_back(e.head);
                }
            }
        }
        if (!visited[static_cast<std::size_t>(destination)]) {
            throw ConfigError("topology: destination node " + std::to_string(destination) +
                              " is unreachable from origin node " + std::to_string(origin));
        }
    }

    std::vector<std::vector<int>> by_tail(static_cast<std::size_t>(n_nodes) + 1);
    for (const auto& e : topo.edges) {
        by_tail[static_cast<std::size_t>(e.tail)].push_back(e.id - 1);
    }
    topo.outgoing.resize(topo.edges.size());
    for (const auto& e : topo.edges) {
        auto& out = topo.outgoing[static_cast<std::size_t>(e.id - 1)];
        out = by_tail[static_cast<std::size_t>(e.head)];
        std::sort(out.begin(), out.end());
        if (out.empty()) {
            throw ConfigError("topology: edge " + std::to_string(e.id) + " (" +
                              std::to_string(e.tail) + "->" + std::to_string(e.head) +
                              ") ends at node " + std::to_string(e.head) +
                              " which has no outgoing edges");
        }
    }
    return topo;
}

NetworkTopology load_topology(const std::string& path, int origin, int destination) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open topology file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_topology(buf.str(), origin, destination);
}

} // namespace mfg
