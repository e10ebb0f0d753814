#pragma once

#include <Eigen/Core>
#include <string_view>
#include <vector>

#include "optomech/lyapunov.hpp"

namespace optomech {

inline constexpr double kDefaultEdgeThreshold = 1e-5;
inline constexpr double kUnphysicalTolerance = 1e-6;  // relative to ||V||

enum class Shape { Disconnected, Linear, Square, DoubleLadder, GhzComplete, Other };

std::string_view to_string(Shape shape);

struct Edge {
  int a = 0;  // a < b, indices into EntanglementReport::labels
  int b = 0;
  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

/// Where an edge sits relative to the cavity chain.
enum class EdgeClass { IntraCavity, Adjacent, NextAdjacent, Distant };

struct EntanglementReport {
  std::vector<ModeLabel> labels;
  Eigen::MatrixXd log_negativity;  // symmetric, zero diagonal
  double edge_threshold = kDefaultEdgeThreshold;
  std::vector<Edge> edges;         // pairs above the threshold, sorted
  Shape shape = Shape::Disconnected;

  /// Index of the mode named `name`, or -1.
  int index_of(std::string_view name) const;
  /// E_N between two named modes; throws IndexOutOfRange for unknown names.
  double between(std::string_view a, std::string_view b) const;
};

/// 4x4 principal submatrix of modes i and j, order preserved.
Eigen::Matrix4d reduce_cm(const Eigen::MatrixXd& V, int i, int j);

/// Eigenvalues of Omega_2 P V P, P = diag(1, 1, 1, -1). They come in
/// +-i nu pairs; their moduli are the partially transposed symplectic spectrum.
Eigen::Vector4cd partial_transpose_spectrum(const Eigen::Matrix4d& V4);

/// E_N = max(0, -ln 2 nu_-). Throws UnphysicalCM when V + i Omega / 2 has an
/// eigenvalue below -1e-6 ||V||.
double log_negativity(const Eigen::Matrix4d& V4);

/// Pairwise E_N over every mode of `cm` (or over `modes` only), thresholded into
/// an edge set and classified.
EntanglementReport pairwise_matrix(const CovarianceMatrix& cm,
                                   double edge_threshold = kDefaultEdgeThreshold);
EntanglementReport pairwise_matrix(const CovarianceMatrix& cm, const std::vector<int>& modes,
                                   double edge_threshold = kDefaultEdgeThreshold);

/// Re-thresholds `report` at `edge_threshold` and matches the edge set against
/// the catalog: disconnected, spanning path, 4-cycle, complete graph, and the
/// chain double ladder (intra-cavity, adjacent and next-adjacent links only,
/// all three classes present, every cavity linked internally, connected).
Shape classify_structure(const EntanglementReport& report, double edge_threshold);

std::vector<Edge> edges_above(const Eigen::MatrixXd& log_negativity, double edge_threshold);

EdgeClass classify_edge(const EntanglementReport& report, const Edge& edge);

}  // namespace optomech
