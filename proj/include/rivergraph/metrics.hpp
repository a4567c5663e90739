#pragma once

#include <span>

namespace rivergraph {

// Nash-Sutcliffe efficiency, 1 - sum w (p - o)^2 / sum w (o - mean_w(o))^2.
// Empty `weights` means uniform. Throws shape_mismatch on length mismatch,
// invalid_argument for fewer than two samples, constant_observed when the
// observed series has no variance.
double nse(std::span<const double> predicted, std::span<const double> observed,
           std::span<const double> weights = {});

double mean_absolute_error(std::span<const double> predicted, std::span<const double> observed);

}  // namespace rivergraph
