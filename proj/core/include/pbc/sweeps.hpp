#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace pbc {

enum class SweepKind {
  Gentle,          // ||rho - sqrt(L) rho sqrt(L)||_1 <= 2 sqrt(eps), rho possibly subnormalized
  Close,           // Tr{L rho} >= Tr{L sigma} - ||rho - sigma||_1
  HayashiNagaoka,  // I - (S+T)^{-1/2} S (S+T)^{-1/2} <= (1+c)(I-S) + (2+c+1/c) T, dims 2..6
  Spectral,        // P_e*(A, B) <= Tr{A^s B^(1-s)}
  Prop1,           // D_H^eps >= D_alpha + alpha/(alpha-1) log2(1/eps), alpha in (0,1)
  Cmw              // D_H^eps <= D~_alpha + alpha/(alpha-1) log2(1/(1-eps)), alpha > 1
};

SweepKind parse_sweep_kind(std::string_view name);
std::string sweep_name(SweepKind kind);
double default_sweep_slack(SweepKind kind);

struct SweepReport {
  SweepKind kind = SweepKind::Gentle;
  long long instances = 0;
  long long cases = 0;  // instances times grid points
  long long violations = 0;
  double worst_margin = 0.0;  // smallest (satisfied side - violated side); negative means violated
  long long worst_instance = -1;
};

// Each instance draws from make_rng(seed, instance), so reports are reproducible and independent
// of the worker count. Prop1 and Cmw evaluate the alpha grid {0.1..0.9} or {1.1..4} against
// eps in {0.05, 0.10, ..., 0.95} for each qubit or qutrit pair.
SweepReport run_inequality_sweep(SweepKind kind, int instances, std::uint64_t seed, double slack);

}  // namespace pbc
