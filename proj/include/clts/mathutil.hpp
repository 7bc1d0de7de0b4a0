#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace clts {

double log_sum_exp(const std::vector<double>& z);

// Stable softmax (max-subtracted). All-equal input yields exactly 1/K.
void softmax_inplace(std::vector<double>& z);

// Index of the maximum; ties resolve to the lowest index.
int argmax_tie_low(const std::vector<double>& v);

uint64_t fnv1a64(std::string_view bytes);
std::string hex64(uint64_t x);

}  // namespace clts
