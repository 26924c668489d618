#pragma once

#include <functional>
#include <vector>

namespace pbc::classical {

// Natural log of n! / prod_i k_i!.
double log_multinomial(const std::vector<int>& counts);

// Calls f(counts) for every composition of n into d nonnegative parts.
void for_each_type(int n, int d, const std::function<void(const std::vector<int>&)>& f);
long long type_count(int n, int d);

// Smallest q-mass of a (randomized) test accepting p with probability >= 1 - eps.
// q may be unnormalized. Returns log2 of that mass (-inf when zero).
double log2_np_beta(const std::vector<double>& p, const std::vector<double>& q, double eps);
// Same for the i.i.d. pair p^n, q^n, evaluated over type classes.
double log2_np_beta_iid(const std::vector<double>& p, const std::vector<double>& q, int n, double eps);

// log2 sum_x min(k0 a^n(x), sum_i k_i b_i^n(x)) over type classes.
double log2_pe_star_iid(double k0, const std::vector<double>& a, const std::vector<double>& k,
                        const std::vector<std::vector<double>>& b, int n);

}  // namespace pbc::classical
