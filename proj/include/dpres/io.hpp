#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "dpres/graph.hpp"

namespace dpres {

// Instance text format:
//   # comment
//   g <n>                 vertex count (omitted for grid instances)
//   grid <w> <h>          full grid host graph; terminals may use (x,y) tokens
//   e <u> <v>             edge (grid instances with e lines describe a grid subgraph)
//   S <v...>              terminal subset, may repeat
//   P <u> <v>             terminal pair, may repeat
//   k <budget>
Instance parse_instance(std::istream& in);
Instance parse_instance_text(std::string_view text);
Instance read_instance_file(const std::string& path);

void write_instance(std::ostream& out, const Instance& inst);
std::string instance_text(const Instance& inst);

// Preserver format: optional "size <m>" then "e <u> <v>" lines.
Preserver parse_preserver(std::istream& in);
Preserver read_preserver_file(const std::string& path);
void write_preserver(std::ostream& out, const Preserver& h);

// 64-bit FNV-1a over the canonical instance text, as 16 hex digits.
std::string digest_hex(std::string_view bytes);
std::string instance_digest(const Instance& inst);

// Shared line tokenizer for the text formats; strips '#' comments.
struct LineReader {
    explicit LineReader(std::istream& in) : in_(in) {}
    bool next(std::vector<std::string>& tokens);
    std::size_t line_no() const { return line_no_; }

    std::vector<std::string> comments; // full-line comments seen so far, without '#'

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

std::size_t parse_count(const std::string& token, std::size_t line);

} // namespace dpres
