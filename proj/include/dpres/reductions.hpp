#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dpres/graph.hpp"
#include "dpres/grid.hpp"

namespace dpres {

// Source problems. Text formats share the instance tokenizer; the first record
// names the problem:
//   mcc:  g <n>, e <u> <v>, class <v...> (one line per color class)
//   bmcc: g <n>, e <u> <v>, L <v...>, R <v...> (one line per class, k of each)
//   mwc3: g <n>, e <u> <v>, terminals <s1> <s2> <s3>, k <budget>
//   alc:  g <n>, e <u> <v>, list <v> <c...> (colors 1..3), k <budget>
//   rsa:  p <x> <y> (one per point), k <budget>

struct MccInstance {
    Graph graph;
    std::vector<std::vector<Vertex>> classes;
};

struct BmccInstance {
    Graph graph;
    std::vector<std::vector<Vertex>> left;  // L_1..L_k
    std::vector<std::vector<Vertex>> right; // R_1..R_k
};

struct Mwc3Instance {
    Graph graph;
    std::array<Vertex, 3> terminals{};
    std::size_t k = 0;
};

struct AlcInstance {
    Graph graph;
    std::vector<std::uint8_t> lists; // per vertex: bit c-1 set when color c is allowed
    std::size_t k = 0;
};

struct RsaInstance {
    std::vector<Point> points;
    std::size_t k = 0;
};

struct GadgetParams {
    std::size_t alpha = 0;
    std::size_t ell = 0;
    std::size_t delta = 0;
};

MccInstance parse_mcc(std::string_view text);
BmccInstance parse_bmcc(std::string_view text);
Mwc3Instance parse_mwc3(std::string_view text);
AlcInstance parse_alc(std::string_view text);
RsaInstance parse_rsa(std::string_view text);

std::string mcc_text(const MccInstance& src);
std::string bmcc_text(const BmccInstance& src);
std::string mwc3_text(const Mwc3Instance& src);
std::string alc_text(const AlcInstance& src);
std::string rsa_text(const RsaInstance& src);

// Header keyword of a source file ("mcc", "bmcc", ...), or empty.
std::string source_kind(std::string_view text);

void validate(const MccInstance& src);
void validate(const BmccInstance& src);
void validate(const Mwc3Instance& src);
void validate(const AlcInstance& src);
void validate(const RsaInstance& src);

struct Reduction {
    Instance instance; // instance.budget holds k'
    std::size_t budget = 0;
    // The source is a No-instance for a reason visible in the construction.
    bool certified_no = false;
};

struct MccOptions {
    // When two color classes have no edge between them the source is a No-instance;
    // emit a fixed No-instance instead of the literal construction, whose terminals
    // would then sit at distance >= 4 and admit small preservers.
    bool trivial_no_on_missing_class_edge = true;
};

Reduction mcc_to_sdp(const MccInstance& src, const MccOptions& options = {});
Reduction rsa_to_pdp(const RsaInstance& src);

struct AlcReduction {
    AlcInstance instance;
    std::size_t budget = 0;
};
AlcReduction mwc3_to_alc(const Mwc3Instance& src);
// The preserver optimum equals the minimum assignment size when the source
// graph has no isolated vertices; those carry no pair and need no edge.
Reduction alc_to_vc3bipdp(const AlcInstance& src);

GadgetParams default_gadget_params(const BmccInstance& src);

struct BmccCore {
    Reduction reduction;
    GadgetParams params;
    std::size_t p = 0; // padded class size
    std::array<Vertex, 4> connectors{}; // top, left, bottom, right
    std::vector<Vertex> l_top, l_bot, r_left, r_right;
    // Per padded L (resp. R) slot, class-major: the full endpoint-to-endpoint path.
    std::vector<std::vector<Vertex>> column_paths;
    std::vector<std::vector<Vertex>> row_paths;
};

BmccCore bmcc_to_sdp_core(const BmccInstance& src, const GadgetParams& params);
BmccCore bmcc_to_sdp_core(const BmccInstance& src);

// Exhaustive oracles for tiny source instances. Throw SizeCapError when too large.
bool mcc_brute(const MccInstance& src);
bool bmcc_brute(const BmccInstance& src);
std::size_t mwc3_brute(const Mwc3Instance& src);
// Minimum total assignment size, or nullopt when no valid assignment exists.
std::optional<std::size_t> alc_brute(const AlcInstance& src);
// Minimum arborescence length, by a subset DP over all integer points of the bounding box.
std::size_t rsa_brute(const RsaInstance& src);

} // namespace dpres
