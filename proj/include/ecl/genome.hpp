#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ecl {

// The seven searchable operations of the cell search space.
enum class OpKind : std::uint8_t {
    SepConv3 = 0,
    SepConv5,
    DilConv3,
    DilConv5,
    MaxPool3,
    AvgPool3,
    Identity,
};
inline constexpr int kNumOps = 7;

std::string_view op_name(OpKind op);
OpKind op_from_name(std::string_view name);  // throws UnknownOpError

enum class CellKind : std::uint8_t { Normal, Reduction };

// Node index space inside a cell: -2 and -1 are the two cell inputs (the
// outputs of the two preceding cells); 0..n-1 are this cell's operation
// nodes. Every edge points from a strictly earlier index to a later one.
inline constexpr int kCellInput0 = -2;
inline constexpr int kCellInput1 = -1;

inline constexpr int kMinNodes = 5;
inline constexpr int kMaxNodes = 12;

// One operation node: a single op applied to the sum of two distinct
// earlier nodes.
struct NodeGene {
    OpKind op = OpKind::Identity;
    std::array<int, 2> inputs{kCellInput0, kCellInput1};

    bool operator==(const NodeGene&) const = default;
};

struct CellGenome {
    CellKind kind = CellKind::Normal;
    std::vector<NodeGene> nodes;

    int node_count() const { return static_cast<int>(nodes.size()); }
    bool operator==(const CellGenome&) const = default;
};

// The unit of evolution: one blueprint per cell type. Every instantiated
// cell of a given type shares its blueprint.
struct ArchGenome {
    CellGenome normal{CellKind::Normal, {}};
    CellGenome reduction{CellKind::Reduction, {}};

    bool operator==(const ArchGenome&) const = default;
};

struct IntRange {
    int lo = kMinNodes;
    int hi = kMaxNodes;
};

// Per-gene mutation probabilities. Node insertion/deletion are per cell.
struct MutationRates {
    double op_replace = 0.1;
    double input_rewire = 0.1;
    double node_insert = 0.05;
    double node_delete = 0.05;
};

// Uniformly random valid genome. Node counts are drawn from node_range,
// which must be a non-empty subrange of [5, 12].
ArchGenome random_genome(std::uint64_t seed, IntRange node_range = {kMinNodes, kMaxNodes});

// Single-point crossover: one cut point per cell kind, drawn from
// [1, min(node counts) - 1] and applied to both parents, so child node lists
// are prefix-of-one plus suffix-of-the-other at unchanged positions.
std::pair<ArchGenome, ArchGenome> crossover(const ArchGenome& a, const ArchGenome& b,
                                            std::uint64_t seed);

// The cut points chosen by a crossover call, exposed for provenance checks.
struct CrossoverTrace {
    int cut_normal = 0;
    int cut_reduction = 0;
};
std::pair<ArchGenome, ArchGenome> crossover_traced(const ArchGenome& a, const ArchGenome& b,
                                                   std::uint64_t seed, CrossoverTrace& trace);

// Independent per-gene mutations: op replacement, input rewiring, node
// insertion and node deletion (the latter two clamped to [5, 12]).
ArchGenome mutate(const ArchGenome& g, const MutationRates& rates, std::uint64_t seed);

// Normal form: validates structure, removes nodes that do not contribute to
// the cell output, sorts input lists. Idempotent; semantically identical
// genomes canonicalize to identical serializations.
ArchGenome canonicalize(const ArchGenome& g);

// Structural validation; throws GenomeInvariantError with a specific reason.
void validate(const ArchGenome& g);
void validate_cell(const CellGenome& cell);

// Kahn's algorithm over the cell DAG; false iff a cycle exists.
bool topological_order_exists(const CellGenome& cell);

// Operation nodes with no outgoing edge, ascending. Their outputs are
// concatenated channel-wise to form the cell output.
std::vector<int> leaf_nodes(const CellGenome& cell);

// UTF-8 JSON, fixed field order; see README for the schema.
std::string serialize_genome(const ArchGenome& g);
ArchGenome deserialize_genome(const std::string& text);

ArchGenome load_genome_file(const std::string& path);
void save_genome_file(const ArchGenome& g, const std::string& path);

// FNV-1a hash of the canonical serialization, as fixed-width hex.
std::string genome_hash(const ArchGenome& g);

}  // namespace ecl
