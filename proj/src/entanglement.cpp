#include "optomech/entanglement.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <string>

#include "optomech/errors.hpp"
#include "optomech/graph.hpp"

namespace optomech {

std::string_view to_string(Shape shape) {
  switch (shape) {
    case Shape::Disconnected: return "disconnected";
    case Shape::Linear: return "linear";
    case Shape::Square: return "square";
    case Shape::DoubleLadder: return "double_ladder";
    case Shape::GhzComplete: return "ghz_complete";
    case Shape::Other: return "other";
  }
  return "?";
}

int EntanglementReport::index_of(std::string_view name) const {
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (labels[k].name == name) return static_cast<int>(k);
  return -1;
}

double EntanglementReport::between(std::string_view a, std::string_view b) const {
  const int i = index_of(a);
  const int j = index_of(b);
  if (i < 0 || j < 0)
    throw IndexOutOfRange("no mode named '" + std::string(i < 0 ? a : b) + "' in report");
  return log_negativity(i, j);
}

Eigen::Matrix4d reduce_cm(const Eigen::MatrixXd& V, int i, int j) {
  const auto modes = static_cast<int>(V.rows() / 2);
  if (i < 0 || j < 0 || i >= modes || j >= modes)
    throw IndexOutOfRange("mode index out of range (" + std::to_string(modes) + " modes)");
  if (i == j) throw IndexOutOfRange("reduce_cm needs two distinct modes");
  const int idx[4] = {2 * i, 2 * i + 1, 2 * j, 2 * j + 1};
  Eigen::Matrix4d out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(r, c) = V(idx[r], idx[c]);
  return out;
}

Eigen::Vector4cd partial_transpose_spectrum(const Eigen::Matrix4d& V4) {
  const Eigen::Vector4d flip(1.0, 1.0, 1.0, -1.0);
  const Eigen::Matrix4d transposed = flip.asDiagonal() * V4 * flip.asDiagonal();
  const Eigen::Matrix4d omega = symplectic_form(2);
  // Omega V~ is similar to S Omega S with S = V~^(1/2), whose Hermitian form
  // i S Omega S has eigenvalues +-nu. The general solver returns zeros for
  // near-vacuum states, where the +-i nu pairs are doubly degenerate.
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> root(transposed);
  if (root.eigenvalues().minCoeff() <= 0.0)
    return Eigen::EigenSolver<Eigen::Matrix4d>(omega * transposed, false).eigenvalues();
  const Eigen::Matrix4d S = root.operatorSqrt();
  const Eigen::Matrix4cd H = Complex(0.0, 1.0) * (S * omega * S).cast<Complex>();
  const Eigen::Vector4d nu = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(H).eigenvalues();
  return nu.cast<Complex>() * Complex(0.0, 1.0);
}

double log_negativity(const Eigen::Matrix4d& V4) {
  const double margin = physicality_margin(V4);
  if (margin < -kUnphysicalTolerance * V4.norm())
    throw UnphysicalCM("two-mode covariance matrix violates the uncertainty principle", margin);
  const double nu_minus = partial_transpose_spectrum(V4).cwiseAbs().minCoeff();
  return std::max(0.0, -std::log(2.0 * nu_minus));
}

std::vector<Edge> edges_above(const Eigen::MatrixXd& en, double edge_threshold) {
  std::vector<Edge> edges;
  for (int i = 0; i < en.rows(); ++i)
    for (int j = i + 1; j < en.cols(); ++j)
      if (en(i, j) > edge_threshold) edges.push_back({i, j});
  return edges;
}

EdgeClass classify_edge(const EntanglementReport& report, const Edge& edge) {
  const int gap = std::abs(report.labels[static_cast<std::size_t>(edge.a)].cavity -
                           report.labels[static_cast<std::size_t>(edge.b)].cavity);
  switch (gap) {
    case 0: return EdgeClass::IntraCavity;
    case 1: return EdgeClass::Adjacent;
    case 2: return EdgeClass::NextAdjacent;
    default: return EdgeClass::Distant;
  }
}

namespace {

bool is_double_ladder(const EntanglementReport& report, const std::vector<Edge>& edges,
                      const Graph& graph) {
  std::set<int> cavities;
  for (const ModeLabel& l : report.labels) cavities.insert(l.cavity);
  if (cavities.size() < 3 || !graph.connected()) return false;

  std::set<int> linked_internally;
  bool adjacent = false;
  bool next_adjacent = false;
  for (const Edge& e : edges) {
    switch (classify_edge(report, e)) {
      case EdgeClass::IntraCavity:
        linked_internally.insert(report.labels[static_cast<std::size_t>(e.a)].cavity);
        break;
      case EdgeClass::Adjacent: adjacent = true; break;
      case EdgeClass::NextAdjacent: next_adjacent = true; break;
      case EdgeClass::Distant: return false;
    }
  }
  return adjacent && next_adjacent && linked_internally == cavities;
}

}  // namespace

Shape classify_structure(const EntanglementReport& report, double edge_threshold) {
  const std::vector<Edge> edges = edges_above(report.log_negativity, edge_threshold);
  if (edges.empty()) return Shape::Disconnected;

  const int n = static_cast<int>(report.labels.size());
  if (n > Graph::kMaxNodes) return Shape::Other;
  Graph graph(n);
  for (const Edge& e : edges) graph.add_edge(e.a, e.b);

  if (n == 4 && isomorphic(graph, Graph::cycle(4))) return Shape::Square;
  if (n >= 3 && isomorphic(graph, Graph::path(n))) return Shape::Linear;
  if (n >= 3 && isomorphic(graph, Graph::complete(n))) return Shape::GhzComplete;
  if (is_double_ladder(report, edges, graph)) return Shape::DoubleLadder;
  return Shape::Other;
}

EntanglementReport pairwise_matrix(const CovarianceMatrix& cm, const std::vector<int>& modes,
                                   double edge_threshold) {
  if (static_cast<Eigen::Index>(cm.modes.size()) != cm.mode_count())
    throw DimensionMismatch("covariance matrix labels do not match its dimension");
  EntanglementReport report;
  report.edge_threshold = edge_threshold;
  const auto n = static_cast<Eigen::Index>(modes.size());
  for (int m : modes) {
    if (m < 0 || m >= cm.mode_count()) throw IndexOutOfRange("report mode index out of range");
    report.labels.push_back(cm.modes[static_cast<std::size_t>(m)]);
  }
  report.log_negativity = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double en = log_negativity(reduce_cm(cm.V, modes[static_cast<std::size_t>(i)],
                                                 modes[static_cast<std::size_t>(j)]));
      report.log_negativity(i, j) = en;
      report.log_negativity(j, i) = en;
    }
  }
  report.edges = edges_above(report.log_negativity, edge_threshold);
  report.shape = classify_structure(report, edge_threshold);
  return report;
}

EntanglementReport pairwise_matrix(const CovarianceMatrix& cm, double edge_threshold) {
  std::vector<int> all(static_cast<std::size_t>(cm.mode_count()));
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = static_cast<int>(k);
  return pairwise_matrix(cm, all, edge_threshold);
}

}  // namespace optomech
