#pragma once

#include <string>
#include <vector>

#include "commands.hpp"
#include "pbc/mac.hpp"
#include "pbc/p2p.hpp"

namespace pbclab {

Json load_json(const std::string& path);
pbc::HermitianOperator load_operator(const std::string& path);
pbc::DensityOperator load_state(const std::string& path);
std::vector<pbc::HermitianOperator> load_operators(const std::vector<std::string>& paths);

// {"resource": operator, "channel": channel, "messages": M, "c": c, "test": operator}; only the
// channel is required.
struct P2PInput {
  std::optional<pbc::DensityOperator> resource;
  pbc::QuantumChannel channel;
  int messages = 2;
  double c = 1.0;
  std::optional<pbc::BinaryTest> test;

  pbc::P2PCodeSpec spec() const;
};
P2PInput load_p2p_input(const std::string& path);

// {"resources": [operator, ...], "channel": channel, "sizes": [M_1, ...], "c": c, "test": operator}
pbc::MacCodeSpec load_mac_spec(const std::string& path);
pbc::CqMac load_cq_mac(const std::string& path);

Json operator_json(const pbc::HermitianOperator& op);
Json subset_json(unsigned subset, int senders);

}  // namespace pbclab
