#pragma once

// Dissimilarities on the SPD manifold. All four return distance-like values
// (square roots of the squared forms) so nearest-neighbour ranking can treat
// them interchangeably.

#include <optional>
#include <string_view>

#include "spdset/spd_core.hpp"

namespace spdset {

enum class MetricKind { AIRM, Stein, Jeffrey, LEM };

const char* to_string(MetricKind kind) noexcept;
std::optional<MetricKind> parse_metric(std::string_view name);

/// Geodesic distance ‖log(X^{-1/2} Y X^{-1/2})‖_F.
double airm_dist(const SpdMatrix& x, const SpdMatrix& y);

/// sqrt(log det((X+Y)/2) − ½ log det(XY)).
double stein_div(const SpdMatrix& x, const SpdMatrix& y);

/// sqrt(½Tr(X⁻¹Y) + ½Tr(Y⁻¹X) − n).
double jeffrey_div(const SpdMatrix& x, const SpdMatrix& y);

/// ‖log X − log Y‖_F.
double lem_dist(const SpdMatrix& x, const SpdMatrix& y);

double distance(MetricKind kind, const SpdMatrix& x, const SpdMatrix& y);

/// log det from a decomposition, Σ log e_i.
double log_det(const EigenPair& eig);

}  // namespace spdset
