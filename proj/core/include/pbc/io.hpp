#pragma once

#include <string>
#include <string_view>

#include "pbc/mac.hpp"
#include "pbc/operator.hpp"

namespace pbc {

// Operators: {"dims":[d1,...], "matrix":[[[re,im],...],...]} row-major; plain numbers are
// accepted as real entries. Channels: {"kraus":[matrix,...], "in_dims":[...], "out_dims":[...]}.
// Malformed input raises ParseError naming the byte offset or JSON pointer.
HermitianOperator parse_operator(std::string_view text);
QuantumChannel parse_channel(std::string_view text);
// {"p_x":[...], "p_y":[...], "outputs":{"x,y": operator, ...}}
CqMac parse_cq_mac(std::string_view text);
// {"senders":K, "family":..., "conjectured":bool, "constraints":[{"subset":[1-based senders], "bound":...,
// "label":..., "alternate_label":...}]}
RateRegion parse_rate_region(std::string_view text);

std::string to_json(const HermitianOperator& op);
std::string to_json(const QuantumChannel& channel);
std::string to_json(const CqMac& mac);
std::string to_json(const RateRegion& region);

// Re-serializes JSON text compactly with members in their given order and every
// non-integer number printed with 17 significant digits.
std::string canonical_json(std::string_view text);
std::string format_double(double x);

std::string read_text_file(const std::string& path);

}  // namespace pbc
