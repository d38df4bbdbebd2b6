#include "ecl/genome.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include "ecl/errors.hpp"
#include "ecl/rng.hpp"
#include "json.hpp"

namespace ecl {

namespace {

constexpr std::array<std::string_view, kNumOps> kOpNames = {
    "sep_conv_3x3", "sep_conv_5x5", "dil_conv_3x3", "dil_conv_5x5",
    "max_pool_3x3", "avg_pool_3x3", "identity",
};

// Draws two distinct indices from {-2, -1, 0, .., limit-1} and returns them
// sorted ascending. `limit` is the index of the node being wired, so only
// earlier nodes are eligible.
std::array<int, 2> draw_inputs(Rng& rng, int limit) {
    const int candidates = limit + 2;
    int a = static_cast<int>(rng.below(candidates));
    int b = static_cast<int>(rng.below(candidates - 1));
    if (b >= a) ++b;
    a -= 2;
    b -= 2;
    if (a > b) std::swap(a, b);
    return {a, b};
}

// Redraws one input slot of node `index`, excluding `exclude` (the other
// slot) so the pair stays distinct.
int redraw_input(Rng& rng, int index, int exclude) {
    const int candidates = index + 2 - 1;  // earlier nodes minus the excluded one
    int v = static_cast<int>(rng.below(candidates)) - 2;
    if (v >= exclude) ++v;
    return v;
}

CellGenome random_cell(CellKind kind, Rng& rng, IntRange range) {
    CellGenome cell;
    cell.kind = kind;
    const int n = rng.range_int(range.lo, range.hi);
    cell.nodes.reserve(n);
    for (int i = 0; i < n; ++i) {
        NodeGene node;
        node.op = static_cast<OpKind>(rng.below(kNumOps));
        node.inputs = draw_inputs(rng, i);
        cell.nodes.push_back(node);
    }
    return cell;
}

CellGenome splice(const CellGenome& prefix_src, const CellGenome& suffix_src, int cut) {
    CellGenome child;
    child.kind = prefix_src.kind;
    child.nodes.assign(prefix_src.nodes.begin(), prefix_src.nodes.begin() + cut);
    child.nodes.insert(child.nodes.end(), suffix_src.nodes.begin() + cut, suffix_src.nodes.end());
    return child;
}

void mutate_cell(CellGenome& cell, const MutationRates& rates, Rng& rng) {
    // Op replacement: uniform over the six alternatives.
    for (auto& node : cell.nodes) {
        if (rng.bernoulli(rates.op_replace)) {
            int alt = static_cast<int>(rng.below(kNumOps - 1));
            if (alt >= static_cast<int>(node.op)) ++alt;
            node.op = static_cast<OpKind>(alt);
        }
    }
    // Input rewiring, per edge.
    for (int i = 0; i < cell.node_count(); ++i) {
        auto& in = cell.nodes[i].inputs;
        for (int slot = 0; slot < 2; ++slot) {
            if (rng.bernoulli(rates.input_rewire)) {
                in[slot] = redraw_input(rng, i, in[1 - slot]);
            }
        }
        if (in[0] > in[1]) std::swap(in[0], in[1]);
    }
    // Node insertion (skipped at the upper bound).
    if (rng.bernoulli(rates.node_insert) && cell.node_count() < kMaxNodes) {
        const int pos = static_cast<int>(rng.below(cell.node_count() + 1));
        for (auto& node : cell.nodes) {
            for (auto& v : node.inputs) {
                if (v >= pos) ++v;
            }
        }
        NodeGene fresh;
        fresh.op = static_cast<OpKind>(rng.below(kNumOps));
        fresh.inputs = draw_inputs(rng, pos);
        cell.nodes.insert(cell.nodes.begin() + pos, fresh);
    }
    // Node deletion (skipped at the lower bound). Edges into the deleted
    // node are rewired to a uniformly chosen valid earlier node.
    if (rng.bernoulli(rates.node_delete) && cell.node_count() > kMinNodes) {
        const int victim = static_cast<int>(rng.below(cell.node_count()));
        cell.nodes.erase(cell.nodes.begin() + victim);
        constexpr int kDangling = std::numeric_limits<int>::min();
        for (auto& node : cell.nodes) {
            for (auto& v : node.inputs) {
                if (v == victim) {
                    v = kDangling;
                } else if (v > victim) {
                    --v;
                }
            }
        }
        for (int i = 0; i < cell.node_count(); ++i) {
            auto& in = cell.nodes[i].inputs;
            for (int slot = 0; slot < 2; ++slot) {
                if (in[slot] == kDangling) {
                    const int other = in[1 - slot];
                    in[slot] = other == kDangling ? static_cast<int>(rng.below(i + 2)) - 2
                                                  : redraw_input(rng, i, other);
                }
            }
            if (in[0] > in[1]) std::swap(in[0], in[1]);
        }
    }
}

// Keeps only nodes that contribute to the cell output (reverse reachability
// from the leaf set) and renumbers the survivors.
CellGenome drop_dead_nodes(const CellGenome& cell) {
    const int n = cell.node_count();
    std::vector<char> live(n, 0);
    std::vector<int> worklist = leaf_nodes(cell);
    for (int leaf : worklist) live[leaf] = 1;
    while (!worklist.empty()) {
        const int node = worklist.back();
        worklist.pop_back();
        for (int input : cell.nodes[node].inputs) {
            if (input >= 0 && !live[input]) {
                live[input] = 1;
                worklist.push_back(input);
            }
        }
    }
    if (std::all_of(live.begin(), live.end(), [](char c) { return c != 0; })) {
        return cell;
    }
    std::vector<int> remap(n, -1);
    CellGenome out;
    out.kind = cell.kind;
    for (int i = 0; i < n; ++i) {
        if (!live[i]) continue;
        remap[i] = out.node_count();
        NodeGene node = cell.nodes[i];
        for (auto& v : node.inputs) {
            if (v >= 0) v = remap[v];
        }
        out.nodes.push_back(node);
    }
    if (out.node_count() < kMinNodes) {
        throw GenomeInvariantError("canonicalization left fewer than " +
                                   std::to_string(kMinNodes) + " live nodes");
    }
    return out;
}

CellGenome canonicalize_cell(const CellGenome& cell) {
    if (!topological_order_exists(cell)) {
        throw GenomeInvariantError("malformed genome: cell graph contains a cycle");
    }
    validate_cell(cell);
    CellGenome out = drop_dead_nodes(cell);
    for (auto& node : out.nodes) {
        if (node.inputs[0] > node.inputs[1]) std::swap(node.inputs[0], node.inputs[1]);
    }
    return out;
}

nlohmann::ordered_json cell_to_json(const CellGenome& cell) {
    nlohmann::ordered_json j;
    j["node_count"] = cell.node_count();
    auto& nodes = j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& node : cell.nodes) {
        nlohmann::ordered_json nj;
        nj["op"] = std::string(op_name(node.op));
        nj["inputs"] = node.inputs;
        nodes.push_back(std::move(nj));
    }
    return j;
}

void require_keys(const nlohmann::ordered_json& j, std::initializer_list<std::string_view> keys,
                  std::string_view where) {
    for (auto key : keys) {
        if (!j.contains(key)) {
            throw GenomeFormatError("genome " + std::string(where) + ": missing key '" +
                                    std::string(key) + "'");
        }
    }
    for (const auto& [key, _] : j.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw GenomeFormatError("genome " + std::string(where) + ": unexpected key '" + key +
                                    "'");
        }
    }
}

CellGenome cell_from_json(const nlohmann::ordered_json& j, CellKind kind, std::string_view where) {
    if (!j.is_object()) {
        throw GenomeFormatError("genome " + std::string(where) + ": cell must be an object");
    }
    require_keys(j, {"node_count", "nodes"}, where);
    if (!j["node_count"].is_number_integer() || !j["nodes"].is_array()) {
        throw GenomeFormatError("genome " + std::string(where) + ": bad cell field types");
    }
    CellGenome cell;
    cell.kind = kind;
    for (const auto& nj : j["nodes"]) {
        if (!nj.is_object()) {
            throw GenomeFormatError("genome " + std::string(where) + ": node must be an object");
        }
        require_keys(nj, {"op", "inputs"}, where);
        if (!nj["op"].is_string()) {
            throw GenomeFormatError("genome " + std::string(where) + ": op must be a string");
        }
        const auto& inputs = nj["inputs"];
        if (!inputs.is_array() ||
            !std::all_of(inputs.begin(), inputs.end(),
                         [](const auto& v) { return v.is_number_integer(); })) {
            throw GenomeFormatError("genome " + std::string(where) +
                                    ": inputs must be an integer array");
        }
        NodeGene node;
        node.op = op_from_name(nj["op"].get<std::string>());
        if (inputs.size() != 2) {
            throw GenomeInvariantError("genome " + std::string(where) +
                                       ": every node takes exactly 2 inputs, got " +
                                       std::to_string(inputs.size()));
        }
        node.inputs = {inputs[0].get<int>(), inputs[1].get<int>()};
        cell.nodes.push_back(node);
    }
    const int declared = j["node_count"].get<int>();
    if (declared != cell.node_count()) {
        throw GenomeInvariantError("genome " + std::string(where) + ": node_count " +
                                   std::to_string(declared) + " does not match " +
                                   std::to_string(cell.node_count()) + " nodes");
    }
    return cell;
}

}  // namespace

std::string_view op_name(OpKind op) { return kOpNames[static_cast<int>(op)]; }

OpKind op_from_name(std::string_view name) {
    for (int i = 0; i < kNumOps; ++i) {
        if (kOpNames[i] == name) return static_cast<OpKind>(i);
    }
    throw UnknownOpError("unknown operation name: '" + std::string(name) + "'");
}

void validate_cell(const CellGenome& cell) {
    const int n = cell.node_count();
    if (n < kMinNodes || n > kMaxNodes) {
        throw GenomeInvariantError("cell has " + std::to_string(n) + " nodes, allowed range is [" +
                                   std::to_string(kMinNodes) + ", " + std::to_string(kMaxNodes) +
                                   "]");
    }
    for (int i = 0; i < n; ++i) {
        const auto& in = cell.nodes[i].inputs;
        for (int v : in) {
            if (v < kCellInput0 || v >= i) {
                throw GenomeInvariantError("node " + std::to_string(i) + " input " +
                                           std::to_string(v) + " is not a strictly earlier node");
            }
        }
        if (in[0] == in[1]) {
            throw GenomeInvariantError("node " + std::to_string(i) + " has duplicate inputs");
        }
        const int op = static_cast<int>(cell.nodes[i].op);
        if (op < 0 || op >= kNumOps) {
            throw GenomeInvariantError("node " + std::to_string(i) + " has an invalid op id");
        }
    }
}

void validate(const ArchGenome& g) {
    if (g.normal.kind != CellKind::Normal || g.reduction.kind != CellKind::Reduction) {
        throw GenomeInvariantError("genome cells have the wrong kinds");
    }
    validate_cell(g.normal);
    validate_cell(g.reduction);
}

bool topological_order_exists(const CellGenome& cell) {
    const int n = cell.node_count();
    std::vector<int> indegree(n, 0);
    std::vector<std::vector<int>> consumers(n);
    for (int i = 0; i < n; ++i) {
        for (int v : cell.nodes[i].inputs) {
            if (v >= 0 && v < n) {
                consumers[v].push_back(i);
                ++indegree[i];
            } else if (v >= n) {
                return false;  // reference beyond the node list
            }
        }
    }
    std::queue<int> ready;
    for (int i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.push(i);
    }
    int visited = 0;
    while (!ready.empty()) {
        const int node = ready.front();
        ready.pop();
        ++visited;
        for (int consumer : consumers[node]) {
            if (--indegree[consumer] == 0) ready.push(consumer);
        }
    }
    return visited == n;
}

std::vector<int> leaf_nodes(const CellGenome& cell) {
    const int n = cell.node_count();
    std::vector<char> has_consumer(n, 0);
    for (const auto& node : cell.nodes) {
        for (int v : node.inputs) {
            if (v >= 0 && v < n) has_consumer[v] = 1;
        }
    }
    std::vector<int> leaves;
    for (int i = 0; i < n; ++i) {
        if (!has_consumer[i]) leaves.push_back(i);
    }
    return leaves;
}

ArchGenome canonicalize(const ArchGenome& g) {
    if (g.normal.kind != CellKind::Normal || g.reduction.kind != CellKind::Reduction) {
        throw GenomeInvariantError("genome cells have the wrong kinds");
    }
    ArchGenome out;
    out.normal = canonicalize_cell(g.normal);
    out.reduction = canonicalize_cell(g.reduction);
    return out;
}

ArchGenome random_genome(std::uint64_t seed, IntRange node_range) {
    if (node_range.lo > node_range.hi || node_range.lo < kMinNodes || node_range.hi > kMaxNodes) {
        throw ConfigError("node_range [" + std::to_string(node_range.lo) + ", " +
                          std::to_string(node_range.hi) + "] must be a non-empty subrange of [" +
                          std::to_string(kMinNodes) + ", " + std::to_string(kMaxNodes) + "]");
    }
    Rng rng(seed);
    ArchGenome g;
    g.normal = random_cell(CellKind::Normal, rng, node_range);
    g.reduction = random_cell(CellKind::Reduction, rng, node_range);
    return canonicalize(g);
}

std::pair<ArchGenome, ArchGenome> crossover_traced(const ArchGenome& a, const ArchGenome& b,
                                                   std::uint64_t seed, CrossoverTrace& trace) {
    validate(a);
    validate(b);
    Rng rng(seed);
    const auto cut_for = [&rng](const CellGenome& ca, const CellGenome& cb) {
        const int upper = std::min(ca.node_count(), cb.node_count());
        return 1 + static_cast<int>(rng.below(upper - 1));  // interior cut in [1, upper-1]
    };
    trace.cut_normal = cut_for(a.normal, b.normal);
    trace.cut_reduction = cut_for(a.reduction, b.reduction);

    ArchGenome c1, c2;
    c1.normal = splice(a.normal, b.normal, trace.cut_normal);
    c2.normal = splice(b.normal, a.normal, trace.cut_normal);
    c1.reduction = splice(a.reduction, b.reduction, trace.cut_reduction);
    c2.reduction = splice(b.reduction, a.reduction, trace.cut_reduction);
    return {canonicalize(c1), canonicalize(c2)};
}

std::pair<ArchGenome, ArchGenome> crossover(const ArchGenome& a, const ArchGenome& b,
                                            std::uint64_t seed) {
    CrossoverTrace trace;
    return crossover_traced(a, b, seed, trace);
}

ArchGenome mutate(const ArchGenome& g, const MutationRates& rates, std::uint64_t seed) {
    for (double rate : {rates.op_replace, rates.input_rewire, rates.node_insert,
                        rates.node_delete}) {
        if (rate < 0.0 || rate > 1.0) {
            throw ConfigError("mutation rates must lie in [0, 1]");
        }
    }
    validate(g);
    Rng rng(seed);
    ArchGenome out = g;
    mutate_cell(out.normal, rates, rng);
    mutate_cell(out.reduction, rates, rng);
    return canonicalize(out);
}

std::string serialize_genome(const ArchGenome& g) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["normal"] = cell_to_json(g.normal);
    j["reduction"] = cell_to_json(g.reduction);
    return j.dump(2) + "\n";
}

ArchGenome deserialize_genome(const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw GenomeFormatError(std::string("genome is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw GenomeFormatError("genome top level must be an object");
    }
    require_keys(j, {"version", "normal", "reduction"}, "top level");
    if (!j["version"].is_number_integer() || j["version"].get<int>() != 1) {
        throw GenomeFormatError("unsupported genome version");
    }
    ArchGenome g;
    g.normal = cell_from_json(j["normal"], CellKind::Normal, "normal cell");
    g.reduction = cell_from_json(j["reduction"], CellKind::Reduction, "reduction cell");
    validate(g);
    return canonicalize(g);
}

ArchGenome load_genome_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open genome file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_genome(buf.str());
}

void save_genome_file(const ArchGenome& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write genome file: " + path);
    }
    out << serialize_genome(g);
}

std::string genome_hash(const ArchGenome& g) {
    const std::string text = serialize_genome(canonicalize(g));
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = kHex[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace ecl
